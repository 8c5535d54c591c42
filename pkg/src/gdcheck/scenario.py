"""Before/after snapshots used to tell dispositions from roles.

Whether a realizable entity is a disposition or a role turns on what *must*
change for it to cease.  A single pair of snapshots can only be evidence for
one reading, never proof, hence the ``*_consistent`` verdicts.
"""

from __future__ import annotations

from collections.abc import Iterable
from dataclasses import dataclass

from .errors import ScenarioError
from .kb import KnowledgeBase
from .profiles import AMENDED, ERROR, Violation, render

PHYSICAL = "physical_quality_change"
RETAINER = "retainer_quality_change"
MEREOTOPOLOGY = "mereotopology_change"
NONE = "none"

DISPOSITION_CONSISTENT = "disposition_consistent"
ROLE_CONSISTENT = "role_consistent"
INDETERMINATE = "indeterminate"

# Qualities whose category falls under a class with this name describe how a
# whole's parts are arranged.
ARRANGEMENT = "Arrangement"


@dataclass(frozen=True)
class Scenario:
    before: KnowledgeBase
    after: KnowledgeBase
    focus: str


@dataclass(frozen=True)
class Classification:
    verdict: str
    evidence: tuple[str, ...]


def verdict_for(evidence: Iterable[str]) -> str:
    evidence = tuple(evidence)
    if not evidence:
        return INDETERMINATE
    if evidence == (NONE,):
        return ROLE_CONSISTENT
    return DISPOSITION_CONSISTENT


def _ceased(kb: KnowledgeBase, entity_id: str) -> bool:
    if entity_id not in kb.by_id:
        return True
    times = kb.time_points()
    span = kb.lifetimes.get(entity_id)
    return bool(times) and span is not None and times[-1] not in span


def _quality_signature(kb: KnowledgeBase, bearer: str, kind: str) -> frozenset:
    if bearer not in kb.by_id or kind not in kb.taxonomy:
        return frozenset()
    sig = set()
    for f in kb.facts:
        if f.relation == "inheres_in" and f.object == bearer and kb.instance_of(f.subject, kind):
            q = kb.entity(f.subject)
            sig.add((q.id, q.category, f.at, kb.lifetimes.get(q.id)))
    return frozenset(sig)


def _parthood_signature(kb: KnowledgeBase, entity_id: str) -> frozenset:
    return frozenset((f.subject, f.object, f.at) for f in kb.facts
                     if f.relation == "part_of" and entity_id in (f.subject, f.object))


def _retainers(kb: KnowledgeBase, entity_id: str) -> set[str]:
    return {f.subject for f in kb.facts if f.relation == "retainer_of" and f.object == entity_id}


def bearer_of(s: Scenario) -> str:
    bearers = sorted({f.object for f in s.before.facts
                      if f.relation == "inheres_in" and f.subject == s.focus})
    if len(bearers) != 1:
        raise ScenarioError(f"{s.focus} must have exactly one bearer, found {bearers or 'none'}")
    return bearers[0]


def classify_realizable(s: Scenario) -> Classification:
    before, after = s.before, s.after
    if s.focus not in before.by_id:
        raise ScenarioError(f"focus {s.focus} is not in the before snapshot")
    if not before.instance_of(s.focus, "RealizableEntity"):
        raise ScenarioError(f"focus {s.focus} is not a realizable entity")
    if _ceased(before, s.focus):
        raise ScenarioError(f"focus {s.focus} has already ceased in the before snapshot")
    if not _ceased(after, s.focus):
        raise ScenarioError(f"focus {s.focus} does not cease between the snapshots")
    y = bearer_of(s)
    if y not in after.by_id:
        raise ScenarioError(f"bearer {y} is missing from the after snapshot")

    evidence = []
    if _quality_signature(before, y, "PhysicalQuality") != _quality_signature(after, y, "PhysicalQuality"):
        evidence.append(PHYSICAL)
    for r in sorted(_retainers(before, y) | _retainers(after, y)):
        if _quality_signature(before, r, "PhysicalQuality") != _quality_signature(after, r, "PhysicalQuality"):
            evidence.append(RETAINER)
            break
    if (_parthood_signature(before, y) != _parthood_signature(after, y)
            or _quality_signature(before, y, ARRANGEMENT) != _quality_signature(after, y, ARRANGEMENT)):
        evidence.append(MEREOTOPOLOGY)
    evidence = evidence or [NONE]
    return Classification(verdict_for(evidence), tuple(evidence))


def check_scenarios(scenarios: Iterable[Scenario]) -> list[Violation]:
    """Scenario-level amended axioms.

    A5: a disposition that ceased with no qualifying change.  A6: a role for
    which none of the given scenarios shows it ceasing without change.
    """
    a5, a6 = AMENDED.axiom("A5"), AMENDED.axiom("A6")
    out5: list[Violation] = []
    role_seen: dict[str, bool] = {}
    for s in scenarios:
        c = classify_realizable(s)
        binding = {"x": s.focus}
        if s.before.instance_of(s.focus, "Disposition") and c.verdict == ROLE_CONSISTENT:
            out5.append(Violation("A5", ERROR, (("x", s.focus),), None, render(a5, binding)))
        elif s.before.instance_of(s.focus, "Role"):
            role_seen[s.focus] = role_seen.get(s.focus, False) or c.verdict == ROLE_CONSISTENT
    out6 = [Violation("A6", ERROR, (("x", r),), None, render(a6, {"x": r}))
            for r, ok in sorted(role_seen.items()) if not ok]
    return sorted(out5, key=lambda v: v.witnesses) + out6

"""The two rival axiom profiles and the KB checker.

``strict`` encodes the BFO 2020 restrictions that keep generically dependent
continuants from bearing anything; ``amended`` drops the range restriction on
specific dependence and admits GDCs as bearers.  Axioms are written as
violation formulas: every satisfying binding of the free variables is a
counterexample.
"""

from __future__ import annotations

from dataclasses import dataclass, replace

from .errors import NotApplicableError
from .evaluator import find_witnesses
from .kb import KnowledgeBase, underivable_carriers
from .logic import Formula
from .syntax import parse_formula

ERROR = "error"
WARNING = "warning"

# A bearer admissible under BFO 2020: an independent continuant other than a spatial region.
_IC_BEARER = "(IndependentContinuant(?y) & !SpatialRegion(?y))"


@dataclass(frozen=True)
class Axiom:
    id: str
    description: str
    formula: Formula | None
    severity: str = ERROR
    message: str = ""
    # Existential axioms fail for lack of a witness; open-world checks soften them.
    existential: bool = False
    # "kb" axioms are checked per snapshot, "scenario" axioms by the scenario checker.
    scope: str = "kb"


def _axiom(id: str, description: str, source: str | None, message: str, **kw) -> Axiom:
    formula = parse_formula(source) if source is not None else None
    return Axiom(id, description, formula, message=message, **kw)


@dataclass(frozen=True)
class Profile:
    name: str
    axioms: tuple[Axiom, ...]

    def axiom(self, axiom_id: str) -> Axiom:
        for ax in self.axioms:
            if ax.id == axiom_id:
                return ax
        raise KeyError(axiom_id)


@dataclass(frozen=True)
class Violation:
    axiom: str
    severity: str
    witnesses: tuple[tuple[str, str], ...]
    time: str | None
    message: str

    @property
    def binding(self) -> dict[str, str]:
        return dict(self.witnesses)


STRICT = Profile("strict", (
    _axiom("S1", "nothing specifically depends on a generically dependent continuant",
           "specifically_depends_on(?x, ?y) & GDC(?y)",
           "{x} specifically depends on {y}, a generically dependent continuant"),
    _axiom("S2", "inherence relates a specifically dependent continuant to an "
           "independent continuant that is not a spatial region",
           f"inheres_in(?x, ?y) & !(SDC(?x) & {_IC_BEARER})",
           "{x} inheres in {y}, which is not an admissible bearer (an independent "
           "continuant other than a spatial region)"),
    _axiom("S3", "every realizable entity inheres in some bearer",
           "RealizableEntity(?x) & !(exists ?y (inheres_in(?x, ?y)))",
           "realizable entity {x} has no bearer", existential=True),
))

AMENDED = Profile("amended", (
    _axiom("A1", "specific dependence: no existence without the dependee, no shared "
           "parts, not a boundary of it",
           "(specifically_depends_on(?x, ?y) | inheres_in(?x, ?y)) & "
           "(exists_at(?x) & !exists_at(?y) | ?x = ?y | part_of(?x, ?y) | part_of(?y, ?x) "
           "| boundary_of(?x, ?y) | exists ?p (part_of(?p, ?x) & part_of(?p, ?y)))",
           "{x} depends on {y} but outlives it, shares a part with it, or is its boundary"),
    _axiom("A2", "inherence relates a specifically dependent continuant to an independent "
           "continuant that is not a spatial region, or to a generically dependent continuant",
           f"inheres_in(?x, ?y) & !(SDC(?x) & ({_IC_BEARER} | GDC(?y)))",
           "{x} inheres in {y}, which is neither an independent continuant other than "
           "a spatial region nor a generically dependent continuant"),
    _axiom("A3", "every realizable entity inheres in an independent continuant that is not "
           "a spatial region, or in a generically dependent continuant",
           f"RealizableEntity(?x) & !(exists ?y (inheres_in(?x, ?y) & ({_IC_BEARER} | GDC(?y))))",
           "realizable entity {x} has no admissible bearer", existential=True),
    _axiom("A4", "a realization of something borne by a GDC has a concretization of that "
           "GDC as part, or a carrier of it as participant",
           "realizes(?p, ?r) & exists ?g (inheres_in(?r, ?g) & GDC(?g) & "
           "!(exists ?c (concretizes(?c, ?g) & part_of(?c, ?p))) & "
           "!(exists ?e (participates_in(?e, ?p) & carrier_of(?e, ?g))))",
           "process {p} realizes {r}, borne by a generically dependent continuant, but "
           "involves neither a concretization nor a carrier of it", existential=True),
    _axiom("A5", "a disposition cannot cease without a change in physical qualities of its "
           "bearer or its bearer's retainer, or in its bearer's mereotopology",
           None, "disposition {x} ceased with no qualifying change", scope="scenario"),
    _axiom("A6", "a role can cease without any such change (needs one witness scenario)",
           None, "role {x} never observed ceasing without change", scope="scenario"),
    _axiom("A7", "a generically dependent continuant has a carrier whenever it exists",
           "GDC(?x) & exists_at(?x) & !(exists ?y (carrier_of(?y, ?x) & exists_at(?y)))",
           "{x} exists without any existing carrier", existential=True),
))

CARRIER_WARNING = Axiom(
    "C1", "declared carrier_of is derivable from an inherence/concretization pair",
    None, WARNING, "{x} is declared a carrier of {y} but no concretization of {y} "
    "inheres in {x}", scope="derivation")

PROFILES = {p.name: p for p in (STRICT, AMENDED)}


def get_profile(name: str) -> Profile:
    try:
        return PROFILES[name]
    except KeyError:
        raise KeyError(f"unknown profile {name!r}; expected one of {sorted(PROFILES)}") from None


def render(axiom: Axiom, binding: dict[str, str]) -> str:
    return axiom.message.format(**binding)


def formula_witnesses(kb: KnowledgeBase, formula: Formula) -> list[tuple[dict[str, str], str | None]]:
    """Satisfying bindings of ``formula``, each paired with a time point.

    A binding satisfying it at every time point is reported once with ``None``.
    """
    times = kb.time_points()
    if not times:
        return [(b, None) for b in find_witnesses(kb, formula)]
    keyed = {t: {tuple(sorted(b.items())): b for b in find_witnesses(kb, formula, t)}
             for t in times}
    always = set.intersection(*(set(k) for k in keyed.values()))
    rows: dict[tuple, list[tuple[dict[str, str], str | None]]] = {}
    for t in times:
        for key, b in keyed[t].items():
            if key in always:
                rows.setdefault(key, [(b, None)])
            else:
                rows.setdefault(key, []).append((b, t))
    return [row for key in sorted(rows, key=lambda k: tuple(v for _, v in k))
            for row in rows[key]]


def check(kb: KnowledgeBase, profile: Profile, *, open_world: bool = False) -> list[Violation]:
    """Check every KB-scoped axiom of ``profile`` plus carrier derivability.

    Ordering is (axiom order, witness ids, time rank).  With ``open_world`` the
    existential axioms are downgraded to warnings.
    """
    report = []
    for ax in profile.axioms:
        if ax.scope != "kb":
            continue
        severity = WARNING if open_world and ax.existential else ax.severity
        for binding, t in formula_witnesses(kb, ax.formula):
            report.append(Violation(ax.id, severity, tuple(sorted(binding.items())), t,
                                    render(ax, binding)))
    for fact in underivable_carriers(kb):
        binding = {"x": fact.subject, "y": fact.object}
        report.append(Violation(CARRIER_WARNING.id, WARNING, tuple(sorted(binding.items())),
                                fact.at, render(CARRIER_WARNING, binding)))
    return report


def has_errors(report: list[Violation]) -> bool:
    return any(v.severity == ERROR for v in report)


def downgrade(report: list[Violation]) -> list[Violation]:
    return [replace(v, severity=WARNING) for v in report]


def check_realization_constraint(kb: KnowledgeBase, process: str, realizable: str) -> bool:
    """Does ``process`` involve each GDC bearing ``realizable``?

    Involvement means a concretization of the GDC is part of the process or
    a carrier of the GDC participates in it.  Facts are read timelessly.
    """
    kb.entity(process)
    kb.entity(realizable)
    if not kb.holds("realizes", process, realizable):
        raise NotApplicableError(f"{process} is not declared to realize {realizable}")
    bearers = [y for x, y in kb.pairs("inheres_in") if x == realizable
               and kb.instance_of(y, "GenericallyDependentContinuant")]
    if not bearers:
        raise NotApplicableError(
            f"{realizable} does not inhere in a generically dependent continuant")
    concretizations = kb.pairs("concretizes")
    participants = {e for e, p in kb.pairs("participates_in") if p == process}
    for g in bearers:
        part = any(y == g and kb.holds("part_of", c, process) for c, y in concretizations)
        carried = any(kb.holds("carrier_of", e, g) for e in participants)
        if not (part or carried):
            return False
    return True

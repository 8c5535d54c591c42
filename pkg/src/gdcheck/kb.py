"""Entities, time points, facts and the immutable knowledge base container."""

from __future__ import annotations

from collections import defaultdict
from dataclasses import dataclass, field
from functools import cached_property

from .errors import KnowledgeBaseError, UnknownNameError
from .logic import DefinedClassDef, defined_names
from .taxonomy import Taxonomy

DECLARED_RELATIONS = (
    "specifically_depends_on",
    "inheres_in",
    "concretizes",
    "part_of",
    "boundary_of",
    "retainer_of",
    "participates_in",
    "realizes",
    "exists_at",
    "owned_by_quality_of",
)
DERIVABLE_RELATIONS = ("carrier_of", "generically_depends_on")
RELATIONS = DECLARED_RELATIONS + DERIVABLE_RELATIONS

INVERSE = {"carrier_of": "generically_depends_on", "generically_depends_on": "carrier_of"}


@dataclass(frozen=True)
class Entity:
    id: str
    category: str
    label: str | None = None


@dataclass(frozen=True)
class TimePoint:
    name: str
    order: int


@dataclass(frozen=True)
class Fact:
    """A binary assertion; ``at=None`` means it holds at every time point.

    For ``exists_at`` the object is a time point name rather than an entity.
    """

    relation: str
    subject: str
    object: str
    at: str | None = None


@dataclass(frozen=True)
class ClassDecl:
    name: str
    parent: str


@dataclass(frozen=True)
class KnowledgeBase:
    entities: tuple[Entity, ...] = ()
    timeline: tuple[TimePoint, ...] = ()
    facts: tuple[Fact, ...] = ()
    classes: tuple[ClassDecl, ...] = ()
    defined_classes: tuple[DefinedClassDef, ...] = field(default=())

    def __post_init__(self) -> None:
        for name in ("entities", "timeline", "facts", "classes", "defined_classes"):
            object.__setattr__(self, name, tuple(getattr(self, name)))
        taxonomy = Taxonomy((c.name, c.parent) for c in self.classes)
        object.__setattr__(self, "taxonomy", taxonomy)

        by_id: dict[str, Entity] = {}
        for e in self.entities:
            if e.id in by_id:
                raise KnowledgeBaseError(f"duplicate entity id {e.id!r}")
            taxonomy.resolve(e.category)
            by_id[e.id] = e
        object.__setattr__(self, "by_id", by_id)

        ranks: dict[str, int] = {}
        orders: set[int] = set()
        for tp in self.timeline:
            if tp.name in ranks:
                raise KnowledgeBaseError(f"duplicate time point {tp.name!r}")
            if tp.order in orders:
                raise KnowledgeBaseError(f"duplicate time rank {tp.order}")
            ranks[tp.name] = tp.order
            orders.add(tp.order)
        object.__setattr__(self, "time_rank", ranks)

        seen: set[Fact] = set()
        for f in self.facts:
            self._check_fact(f)
            if f in seen:
                raise KnowledgeBaseError(f"duplicate fact {f}")
            seen.add(f)

        defs: dict[str, DefinedClassDef] = {}
        for d in self.defined_classes:
            if d.name in defs:
                raise KnowledgeBaseError(f"duplicate defined class {d.name!r}")
            defs[d.name] = d
        for d in self.defined_classes:
            for ref in defined_names(d.body):
                if ref not in defs:
                    raise UnknownNameError("defined class", ref)
        object.__setattr__(self, "definitions", defs)

    def _check_fact(self, f: Fact) -> None:
        if f.relation not in RELATIONS:
            raise UnknownNameError("relation", f.relation)
        if f.subject not in self.by_id:
            raise UnknownNameError("entity", f.subject)
        if f.relation == "exists_at":
            if f.object not in self.time_rank:
                raise UnknownNameError("time point", f.object)
            if f.at is not None:
                raise KnowledgeBaseError("exists_at takes its time point as the object, not '@'")
            return
        if f.object not in self.by_id:
            raise UnknownNameError("entity", f.object)
        if f.at is not None and f.at not in self.time_rank:
            raise UnknownNameError("time point", f.at)

    # -- lookups -----------------------------------------------------------

    def entity(self, entity_id: str) -> Entity:
        try:
            return self.by_id[entity_id]
        except KeyError:
            raise UnknownNameError("entity", entity_id) from None

    def time_points(self) -> tuple[str, ...]:
        return tuple(tp.name for tp in sorted(self.timeline, key=lambda tp: tp.order))

    def instance_of(self, entity_id: str, category: str) -> bool:
        return self.taxonomy.subsumes(category, self.entity(entity_id).category)

    def is_category(self, name: str) -> bool:
        return name in self.taxonomy

    @cached_property
    def sorted_ids(self) -> tuple[str, ...]:
        return tuple(sorted(self.by_id))

    @cached_property
    def lifetimes(self) -> dict[str, frozenset[str]]:
        spans: dict[str, set[str]] = defaultdict(set)
        for f in self.facts:
            if f.relation == "exists_at":
                spans[f.subject].add(f.object)
        return {k: frozenset(v) for k, v in spans.items()}

    @cached_property
    def relation_index(self) -> dict[str, dict[tuple[str, str], frozenset[str | None]]]:
        """Declared plus derived facts: relation -> (subject, object) -> time indices.

        A pair holding unconditionally is stored as ``{None}``.
        """
        raw: dict[str, dict[tuple[str, str], set[str | None]]] = {
            r: defaultdict(set) for r in RELATIONS if r != "exists_at"
        }
        for f in self.facts:
            if f.relation == "exists_at":
                continue
            raw[f.relation][f.subject, f.object].add(f.at)
            if f.relation in INVERSE:
                raw[INVERSE[f.relation]][f.object, f.subject].add(f.at)
        for f in derive_carriers(self):
            raw[f.relation][f.subject, f.object].add(f.at)
        return {
            rel: {pair: (frozenset({None}) if None in ats else frozenset(ats))
                  for pair, ats in pairs.items()}
            for rel, pairs in raw.items()
        }

    def holds(self, relation: str, subject: str, obj: str, t: str | None = None) -> bool:
        """Does the (declared or derived) relation hold at ``t``?

        With ``t=None`` the question is timeless: any assertion counts.
        """
        if relation not in RELATIONS:
            raise UnknownNameError("relation", relation)
        if relation == "exists_at":
            return exists_at(self, subject, obj)
        ats = self.relation_index[relation].get((subject, obj))
        if not ats:
            return False
        return t is None or None in ats or t in ats

    def pairs(self, relation: str, t: str | None = None) -> list[tuple[str, str]]:
        return sorted(pair for pair in self.relation_index[relation]
                      if self.holds(relation, pair[0], pair[1], t))


def exists_at(kb: KnowledgeBase, entity_id: str, t: str) -> bool:
    """Entities without any ``exists_at`` facts are treated as omnitemporal."""
    kb.entity(entity_id)
    if t not in kb.time_rank:
        raise UnknownNameError("time point", t)
    span = kb.lifetimes.get(entity_id)
    return span is None or t in span


def _meet(a: str | None, b: str | None) -> tuple[bool, str | None]:
    if a is None:
        return True, b
    if b is None or a == b:
        return True, a
    return False, None


def derive_carriers(kb: KnowledgeBase) -> frozenset[Fact]:
    """carrier_of(x, y) wherever some z inheres in x and concretizes y.

    Each derived fact is also returned as its generically_depends_on inverse.
    A pair that holds unconditionally suppresses its time-indexed copies.
    """
    inheres: dict[str, list[tuple[str, str | None]]] = defaultdict(list)
    concretizes: dict[str, list[tuple[str, str | None]]] = defaultdict(list)
    for f in kb.facts:
        if f.relation == "inheres_in":
            inheres[f.subject].append((f.object, f.at))
        elif f.relation == "concretizes":
            concretizes[f.subject].append((f.object, f.at))

    found: dict[tuple[str, str], set[str | None]] = defaultdict(set)
    for z, bearers in inheres.items():
        for y, t_conc in concretizes.get(z, ()):
            for x, t_inh in bearers:
                ok, t = _meet(t_inh, t_conc)
                if ok:
                    found[x, y].add(t)

    out = set()
    for (x, y), ats in found.items():
        for t in ({None} if None in ats else ats):
            out.add(Fact("carrier_of", x, y, t))
            out.add(Fact("generically_depends_on", y, x, t))
    return frozenset(out)


def underivable_carriers(kb: KnowledgeBase) -> list[Fact]:
    """Declared carrier_of facts (or inverses) with no deriving inherence/concretization."""
    derived = {(f.subject, f.object, f.at) for f in derive_carriers(kb)
               if f.relation == "carrier_of"}
    missing = set()
    for f in kb.facts:
        if f.relation == "carrier_of":
            key = (f.subject, f.object, f.at)
        elif f.relation == "generically_depends_on":
            key = (f.object, f.subject, f.at)
        else:
            continue
        if (key[0], key[1], None) in derived or key in derived:
            continue
        missing.add(Fact("carrier_of", *key))
    return sorted(missing, key=lambda f: (f.subject, f.object, f.at or ""))


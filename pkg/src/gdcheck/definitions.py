"""Defined classes for generically dependent continuants (the GDC-<DC> pattern).

A class such as ``GDC-Scary`` holds of a GDC exactly when every carrier of it
bears some instance of ``Scary``.  No new particulars are introduced, so these
definitions are conservative: any occurrence can be expanded away.
"""

from __future__ import annotations

import warnings

from .errors import CategoryError, UnknownNameError
from .evaluator import evaluate
from .kb import KnowledgeBase
from .logic import And, Atom, DefinedClassDef, Exists, ForAll, Implies, Var
from .taxonomy import BASE, Taxonomy

PREFIX = "GDC-"


class VacuousMembershipWarning(UserWarning):
    """A carrier-less GDC satisfied a defined class only vacuously."""


def pattern_body(base_dc: str, var: str = "x") -> And:
    x, y, z = Var(var), Var("y"), Var("z")
    return And(
        Atom("GDC", (x,)),
        ForAll("y", Implies(
            Atom("carrier_of", (y, x)),
            Exists("z", And(Atom(base_dc, (z,)), Atom("inheres_in", (z, y)))),
        )),
    )


def expand_defined_class(base_dc: str, taxonomy: Taxonomy | None = None) -> DefinedClassDef:
    """Build ``GDC-<base_dc>`` from a dependent-continuant kind.

    Without a taxonomy, names outside the fixed fragment are taken to be
    user classes; with one they must be declared in it.
    """
    tax = taxonomy or BASE
    if base_dc in tax:
        if not tax.subsumes("SpecificallyDependentContinuant", base_dc):
            raise CategoryError(
                f"{base_dc!r} is not a dependent continuant kind; the GDC-<DC> pattern "
                "only applies to kinds that can inhere in carriers")
    elif taxonomy is not None:
        raise UnknownNameError("category", base_dc)
    return DefinedClassDef(PREFIX + base_dc, base_dc, "x", pattern_body(base_dc))


def membership(kb: KnowledgeBase, definition: DefinedClassDef, entity_id: str,
               t: str | None = None) -> bool:
    result = evaluate(kb, definition.body, {definition.distinguished_var: entity_id}, t)
    if result and kb.instance_of(entity_id, "GenericallyDependentContinuant"):
        times = [t] if t is not None else (list(kb.time_points()) or [None])
        carried = kb.relation_index["generically_depends_on"]
        for tp in times:
            if not any(g == entity_id and kb.holds("generically_depends_on", g, c, tp)
                       for g, c in carried):
                warnings.warn(
                    f"{entity_id} is in {definition.name} only vacuously: it has no carriers",
                    VacuousMembershipWarning, stacklevel=2)
                break
    return result

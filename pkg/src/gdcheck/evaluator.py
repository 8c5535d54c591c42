"""Closed-world finite-model evaluation, witness search and definition elimination."""

from __future__ import annotations

import itertools
from collections.abc import Iterable, Mapping

from .errors import CycleError, EvaluationError, UnknownNameError
from .kb import RELATIONS, KnowledgeBase
from .logic import (
    And,
    Atom,
    Const,
    DefinedAtom,
    DefinedClassDef,
    Equals,
    Exists,
    ForAll,
    Formula,
    Iff,
    Implies,
    Not,
    Or,
    Term,
    defined_names,
    free_vars,
    substitute,
)

Binding = dict[str, str]


def _resolve(kb: KnowledgeBase, f: Formula) -> None:
    """Raise on any predicate, constant or defined class the KB cannot resolve."""
    stack = [f]
    while stack:
        node = stack.pop()
        if isinstance(node, Atom):
            _check_pred(kb, node.pred, len(node.args))
            terms: Iterable[Term] = node.args
        elif isinstance(node, Equals):
            terms = (node.left, node.right)
        elif isinstance(node, DefinedAtom):
            if node.name not in kb.definitions:
                raise UnknownNameError("defined class", node.name)
            terms = (node.term,)
        elif isinstance(node, (Not, ForAll, Exists)):
            stack.append(node.body)
            continue
        else:
            stack.extend((node.left, node.right))
            continue
        for term in terms:
            if isinstance(term, Const):
                kb.entity(term.id)


def _check_pred(kb: KnowledgeBase, pred: str, arity: int) -> None:
    if arity == 1:
        if pred == "exists_at" or kb.is_category(pred):
            return
        if pred in RELATIONS:
            raise EvaluationError(f"relation {pred!r} takes two arguments")
        raise UnknownNameError("category", pred)
    if arity == 2:
        if pred in RELATIONS and pred != "exists_at":
            return
        if kb.is_category(pred):
            raise EvaluationError(f"category {pred!r} takes one argument")
        raise UnknownNameError("relation", pred)
    raise EvaluationError(f"{pred!r} applied to {arity} arguments")


class _Evaluator:
    def __init__(self, kb: KnowledgeBase, t: str | None) -> None:
        self.kb = kb
        self.t = t
        self.active: list[str] = []

    def value(self, term: Term, env: Mapping[str, str]) -> str:
        if isinstance(term, Const):
            return term.id
        try:
            return env[term.name]
        except KeyError:
            raise EvaluationError(f"unbound variable ?{term.name}") from None

    def eval(self, f: Formula, env: dict[str, str]) -> bool:
        kb = self.kb
        if isinstance(f, Atom):
            args = [self.value(a, env) for a in f.args]
            if len(args) == 1:
                if f.pred == "exists_at":
                    return self.t is None or kb.holds("exists_at", args[0], self.t)
                return kb.instance_of(args[0], f.pred)
            return kb.holds(f.pred, args[0], args[1], self.t)
        if isinstance(f, Equals):
            return self.value(f.left, env) == self.value(f.right, env)
        if isinstance(f, Not):
            return not self.eval(f.body, env)
        if isinstance(f, And):
            return self.eval(f.left, env) and self.eval(f.right, env)
        if isinstance(f, Or):
            return self.eval(f.left, env) or self.eval(f.right, env)
        if isinstance(f, Implies):
            return not self.eval(f.left, env) or self.eval(f.right, env)
        if isinstance(f, Iff):
            return self.eval(f.left, env) == self.eval(f.right, env)
        if isinstance(f, (ForAll, Exists)):
            want = isinstance(f, Exists)
            saved = env.get(f.var)
            try:
                for eid in kb.sorted_ids:
                    env[f.var] = eid
                    if self.eval(f.body, env) == want:
                        return want
                return not want
            finally:
                if saved is None:
                    env.pop(f.var, None)
                else:
                    env[f.var] = saved
        if isinstance(f, DefinedAtom):
            d = kb.definitions[f.name]
            if f.name in self.active:
                raise CycleError(" -> ".join([*self.active, f.name]))
            self.active.append(f.name)
            try:
                return self.eval(d.body, {d.distinguished_var: self.value(f.term, env)})
            finally:
                self.active.pop()
        raise TypeError(f"not a formula: {f!r}")


def evaluate(kb: KnowledgeBase, f: Formula, b: Mapping[str, str] | None = None,
             t: str | None = None) -> bool:
    """Truth of ``f`` under binding ``b``.

    Without ``t`` the formula must hold at every declared time point; a KB with
    an empty timeline is evaluated once, timelessly.
    """
    env = dict(b or {})
    missing = sorted(free_vars(f) - env.keys())
    if missing:
        raise EvaluationError("unbound variable(s): " + ", ".join(f"?{v}" for v in missing))
    _resolve(kb, f)
    for eid in env.values():
        kb.entity(eid)
    return _evaluate_unchecked(kb, f, env, t)


def _evaluate_unchecked(kb: KnowledgeBase, f: Formula, env: dict[str, str],
                        t: str | None) -> bool:
    if t is not None:
        if t not in kb.time_rank:
            raise UnknownNameError("time point", t)
        return _Evaluator(kb, t).eval(f, env)
    times = kb.time_points()
    if not times:
        return _Evaluator(kb, None).eval(f, env)
    return all(_Evaluator(kb, tp).eval(f, dict(env)) for tp in times)


def find_witnesses(kb: KnowledgeBase, f: Formula, t: str | None = None) -> list[Binding]:
    """Every binding of the free variables making ``f`` true, ordered by entity id.

    Variables are taken in name order, so the result is sorted lexicographically
    by the tuple of bound ids.
    """
    names = sorted(free_vars(f))
    if not names:
        raise EvaluationError("find_witnesses needs a formula with free variables")
    _resolve(kb, f)
    out = []
    for ids in itertools.product(kb.sorted_ids, repeat=len(names)):
        env = dict(zip(names, ids))
        if _evaluate_unchecked(kb, f, dict(env), t):
            out.append(env)
    return out


def eliminate_defined(f: Formula,
                      defs: Iterable[DefinedClassDef] | Mapping[str, DefinedClassDef]) -> Formula:
    """Replace every defined-class atom by its (recursively expanded) definition."""
    if not defined_names(f):
        return f
    table = dict(defs) if isinstance(defs, Mapping) else {d.name: d for d in defs}
    expanded: dict[str, Formula] = {}

    def body_of(name: str, active: tuple[str, ...]) -> Formula:
        if name in active:
            raise CycleError(" -> ".join([*active, name]))
        if name not in expanded:
            if name not in table:
                raise UnknownNameError("defined class", name)
            expanded[name] = walk(table[name].body, (*active, name))
        return expanded[name]

    def walk(g: Formula, active: tuple[str, ...]) -> Formula:
        if isinstance(g, DefinedAtom):
            d = table.get(g.name)
            body = body_of(g.name, active)
            return substitute(body, {d.distinguished_var: g.term})
        if isinstance(g, Not):
            return Not(walk(g.body, active))
        if isinstance(g, (And, Or, Implies, Iff)):
            return type(g)(walk(g.left, active), walk(g.right, active))
        if isinstance(g, (ForAll, Exists)):
            return type(g)(g.var, walk(g.body, active))
        return g

    return walk(f, ())


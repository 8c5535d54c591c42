"""First-order formula AST over entity constants and ``?``-variables."""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import reduce
from typing import Union


@dataclass(frozen=True)
class Var:
    name: str

    def __str__(self) -> str:
        return f"?{self.name}"


@dataclass(frozen=True)
class Const:
    id: str

    def __str__(self) -> str:
        return self.id


Term = Union[Var, Const]


@dataclass(frozen=True)
class Atom:
    """Category membership (one argument) or a binary relation."""

    pred: str
    args: tuple[Term, ...]


@dataclass(frozen=True)
class Equals:
    left: Term
    right: Term


@dataclass(frozen=True)
class Not:
    body: Formula


@dataclass(frozen=True)
class And:
    left: Formula
    right: Formula


@dataclass(frozen=True)
class Or:
    left: Formula
    right: Formula


@dataclass(frozen=True)
class Implies:
    left: Formula
    right: Formula


@dataclass(frozen=True)
class Iff:
    left: Formula
    right: Formula


@dataclass(frozen=True)
class ForAll:
    var: str
    body: Formula


@dataclass(frozen=True)
class Exists:
    var: str
    body: Formula


@dataclass(frozen=True)
class DefinedAtom:
    """Membership in a defined class, kept unexpanded until elimination."""

    name: str
    term: Term


Formula = Union[Atom, Equals, Not, And, Or, Implies, Iff, ForAll, Exists, DefinedAtom]
BINARY = (And, Or, Implies, Iff)
QUANTIFIERS = (ForAll, Exists)


@dataclass(frozen=True)
class DefinedClassDef:
    name: str
    base_dc: str
    distinguished_var: str
    body: Formula


def conj(*parts: Formula) -> Formula:
    return reduce(And, parts)


def disj(*parts: Formula) -> Formula:
    return reduce(Or, parts)


def _term_vars(term: Term) -> set[str]:
    return {term.name} if isinstance(term, Var) else set()


def free_vars(f: Formula) -> frozenset[str]:
    if isinstance(f, Atom):
        return frozenset().union(*map(_term_vars, f.args))
    if isinstance(f, Equals):
        return frozenset(_term_vars(f.left) | _term_vars(f.right))
    if isinstance(f, DefinedAtom):
        return frozenset(_term_vars(f.term))
    if isinstance(f, Not):
        return free_vars(f.body)
    if isinstance(f, BINARY):
        return free_vars(f.left) | free_vars(f.right)
    if isinstance(f, QUANTIFIERS):
        return free_vars(f.body) - {f.var}
    raise TypeError(f"not a formula: {f!r}")


def all_vars(f: Formula) -> frozenset[str]:
    """Every variable name occurring in ``f``, bound or free."""
    if isinstance(f, QUANTIFIERS):
        return all_vars(f.body) | {f.var}
    if isinstance(f, Not):
        return all_vars(f.body)
    if isinstance(f, BINARY):
        return all_vars(f.left) | all_vars(f.right)
    return free_vars(f)


def depth(f: Formula) -> int:
    """Nesting depth; atomic formulas have depth 1."""
    if isinstance(f, (Atom, Equals, DefinedAtom)):
        return 1
    if isinstance(f, (Not, *QUANTIFIERS)):
        return 1 + depth(f.body)
    return 1 + max(depth(f.left), depth(f.right))


def defined_names(f: Formula) -> frozenset[str]:
    if isinstance(f, DefinedAtom):
        return frozenset({f.name})
    if isinstance(f, (Not, *QUANTIFIERS)):
        return defined_names(f.body)
    if isinstance(f, BINARY):
        return defined_names(f.left) | defined_names(f.right)
    return frozenset()


def fresh_var(base: str, avoid: set[str] | frozenset[str]) -> str:
    for i in itertools.count(1):
        candidate = f"{base}{i}"
        if candidate not in avoid:
            return candidate
    raise AssertionError("unreachable")


def substitute(f: Formula, mapping: dict[str, Term]) -> Formula:
    """Capture-avoiding simultaneous substitution of terms for free variables."""
    if not mapping:
        return f

    def sub_term(t: Term) -> Term:
        if isinstance(t, Var):
            return mapping.get(t.name, t)
        return t

    if isinstance(f, Atom):
        return Atom(f.pred, tuple(sub_term(a) for a in f.args))
    if isinstance(f, Equals):
        return Equals(sub_term(f.left), sub_term(f.right))
    if isinstance(f, DefinedAtom):
        return DefinedAtom(f.name, sub_term(f.term))
    if isinstance(f, Not):
        return Not(substitute(f.body, mapping))
    if isinstance(f, BINARY):
        return type(f)(substitute(f.left, mapping), substitute(f.right, mapping))
    if isinstance(f, QUANTIFIERS):
        inner = {k: v for k, v in mapping.items() if k != f.var}
        if not inner:
            return f
        incoming: set[str] = set()
        for name, term in inner.items():
            if name in free_vars(f.body):
                incoming |= _term_vars(term)
        var, body = f.var, f.body
        if var in incoming:
            var = fresh_var(f.var, incoming | all_vars(f.body) | set(inner))
            body = substitute(body, {f.var: Var(var)})
        return type(f)(var, substitute(body, inner))
    raise TypeError(f"not a formula: {f!r}")

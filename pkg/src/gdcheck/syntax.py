"""Concrete syntax: the ``.kb`` line format and the formula language.

Formula grammar, loosest binding first::

    formula := implies ('<->' formula)?
    implies := disj ('->' implies)?
    disj    := conj ('|' conj)*
    conj    := unary ('&' unary)*
    unary   := '!' unary | ('forall' | 'exists') VAR formula | primary
    primary := '(' formula ')' | NAME '(' term (',' term)* ')' | term ('=' | '!=') term
    term    := VAR | NAME            # VAR is ?name

A quantifier body extends as far right as possible.
"""

from __future__ import annotations

import json
import re
from collections.abc import Collection
from dataclasses import dataclass, replace

from .errors import GdcheckError, ParseError
from .kb import RELATIONS, ClassDecl, Entity, Fact, KnowledgeBase, TimePoint
from .logic import (
    And,
    Atom,
    Const,
    DefinedAtom,
    Equals,
    Exists,
    ForAll,
    Formula,
    Iff,
    Implies,
    Not,
    Or,
    Term,
    Var,
    free_vars,
)
from .taxonomy import Taxonomy, canonical

ID_RE = r"[A-Za-z_](?:[A-Za-z0-9_]|-(?!>))*"
_FORMULA_TOKENS = re.compile(rf"""
    (?P<ws>\s+|\#[^\n]*)
  | (?P<var>\?[A-Za-z_][A-Za-z0-9_]*)
  | (?P<name>{ID_RE})
  | (?P<op><->|->|!=|[()&|!=,])
""", re.VERBOSE)

KEYWORDS = ("forall", "exists")


@dataclass(frozen=True)
class _Tok:
    kind: str
    text: str
    line: int
    col: int


def _position(source: str, offset: int) -> tuple[int, int]:
    line = source.count("\n", 0, offset) + 1
    col = offset - (source.rfind("\n", 0, offset) + 1) + 1
    return line, col


def _tokenize_formula(source: str) -> list[_Tok]:
    toks = []
    pos = 0
    while pos < len(source):
        m = _FORMULA_TOKENS.match(source, pos)
        if not m:
            line, col = _position(source, pos)
            raise ParseError(line, col, "a token", repr(source[pos]))
        kind = m.lastgroup
        if kind != "ws":
            text = m.group()
            if kind == "name" and text in KEYWORDS:
                kind = "op"
            toks.append(_Tok(kind, text, *_position(source, pos)))
        pos = m.end()
    toks.append(_Tok("eof", "", *_position(source, len(source))))
    return toks


class _FormulaParser:
    def __init__(self, source: str, defined: Collection[str]) -> None:
        self.toks = _tokenize_formula(source)
        self.i = 0
        self.defined = defined

    @property
    def tok(self) -> _Tok:
        return self.toks[self.i]

    def fail(self, expected: str) -> ParseError:
        t = self.tok
        return ParseError(t.line, t.col, expected, repr(t.text) if t.text else "end of input")

    def accept(self, *texts: str) -> str | None:
        t = self.tok
        if t.kind == "op" and t.text in texts:
            self.i += 1
            return t.text
        return None

    def expect(self, text: str) -> None:
        if not self.accept(text):
            raise self.fail(repr(text))

    def parse(self) -> Formula:
        f = self.formula()
        if self.tok.kind != "eof":
            raise self.fail("end of input")
        return f

    def formula(self) -> Formula:
        left = self.implies()
        if self.accept("<->"):
            return Iff(left, self.formula())
        return left

    def implies(self) -> Formula:
        left = self.disj()
        if self.accept("->"):
            return Implies(left, self.implies())
        return left

    def disj(self) -> Formula:
        f = self.conj()
        while self.accept("|"):
            f = Or(f, self.conj())
        return f

    def conj(self) -> Formula:
        f = self.unary()
        while self.accept("&"):
            f = And(f, self.unary())
        return f

    def unary(self) -> Formula:
        if self.accept("!"):
            return Not(self.unary())
        q = self.accept(*KEYWORDS)
        if q:
            if self.tok.kind != "var":
                raise self.fail("a ?variable")
            var = self.tok.text[1:]
            self.i += 1
            return (ForAll if q == "forall" else Exists)(var, self.formula())
        return self.primary()

    def term(self) -> Term:
        t = self.tok
        if t.kind == "var":
            self.i += 1
            return Var(t.text[1:])
        if t.kind == "name":
            self.i += 1
            return Const(t.text)
        raise self.fail("a term")

    def primary(self) -> Formula:
        if self.accept("("):
            f = self.formula()
            self.expect(")")
            return f
        t = self.tok
        if t.kind == "name" and self.toks[self.i + 1].text == "(":
            self.i += 2
            args = [self.term()]
            while self.accept(","):
                args.append(self.term())
            self.expect(")")
            if len(args) == 1 and (t.text in self.defined or t.text.startswith("GDC-")):
                return DefinedAtom(t.text, args[0])
            return Atom(t.text, tuple(args))
        if t.kind in ("var", "name"):
            left = self.term()
            op = self.accept("=", "!=")
            if not op:
                raise self.fail("'=' or '!='")
            eq = Equals(left, self.term())
            return eq if op == "=" else Not(eq)
        raise self.fail("a formula")


def parse_formula(source: str, *, closed: bool = False,
                  defined: Collection[str] = ()) -> Formula:
    """Parse formula text.

    A one-argument application is a defined-class atom if its name is in
    ``defined`` or starts with ``GDC-``.  With ``closed=True`` free variables
    are rejected.
    """
    f = _FormulaParser(source, defined).parse()
    if closed:
        free = sorted(free_vars(f))
        if free:
            raise ParseError(1, 1, "a closed formula",
                             "free variable(s) " + ", ".join(f"?{v}" for v in free))
    return f


_PREC = {Iff: 1, Implies: 2, Or: 3, And: 4, Not: 5}
_SYMBOL = {Iff: "<->", Implies: "->", Or: "|", And: "&"}
_RIGHT_ASSOC = (Iff, Implies)


def _prec(f: Formula) -> int:
    if isinstance(f, (ForAll, Exists)):
        return 0
    if isinstance(f, Not) and isinstance(f.body, Equals):
        return 6
    return _PREC.get(type(f), 6)


def print_formula(f: Formula) -> str:
    """Render ``f`` with minimal parentheses; ``parse_formula`` inverts it."""
    return _print(f, tail=True)


def _print(f: Formula, tail: bool) -> str:
    if isinstance(f, Atom):
        return f"{f.pred}({', '.join(map(str, f.args))})"
    if isinstance(f, DefinedAtom):
        return f"{f.name}({f.term})"
    if isinstance(f, Equals):
        return f"{f.left} = {f.right}"
    if isinstance(f, Not):
        if isinstance(f.body, Equals):
            return f"{f.body.left} != {f.body.right}"
        inner = f.body
        if _prec(inner) >= 5 or (_prec(inner) == 0 and tail):
            return "!" + _print(inner, tail)
        return f"!({_print(inner, True)})"
    if isinstance(f, (ForAll, Exists)):
        kw = "forall" if isinstance(f, ForAll) else "exists"
        return f"{kw} ?{f.var} ({_print(f.body, True)})"
    p = _PREC[type(f)]
    right_assoc = isinstance(f, _RIGHT_ASSOC)
    lp, rp = _prec(f.left), _prec(f.right)
    left = _print(f.left, False)
    if lp < p or (lp == p and right_assoc):
        left = f"({_print(f.left, True)})"
    if (rp == 0 and tail) or rp > p or (rp == p and right_assoc):
        right = _print(f.right, tail)
    else:
        right = f"({_print(f.right, True)})"
    return f"{left} {_SYMBOL[type(f)]} {right}"


# -- knowledge base files ----------------------------------------------------

_KB_TOKENS = re.compile(rf"""
    (?P<ws>[ \t\r]+)
  | (?P<comment>\#.*)
  | (?P<string>"(?:[^"\\]|\\.)*")
  | (?P<int>-?[0-9]+)
  | (?P<name>{ID_RE})
  | (?P<punct>[(),:@])
""", re.VERBOSE)


class _Line:
    def __init__(self, text: str, lineno: int) -> None:
        self.lineno = lineno
        self.toks: list[_Tok] = []
        pos = 0
        while pos < len(text):
            m = _KB_TOKENS.match(text, pos)
            if not m:
                raise ParseError(lineno, pos + 1, "a token", repr(text[pos]))
            if m.lastgroup == "comment":
                break
            if m.lastgroup != "ws":
                self.toks.append(_Tok(m.lastgroup, m.group(), lineno, pos + 1))
            pos = m.end()
        self.end = _Tok("eol", "", lineno, len(text.rstrip("\r")) + 1)
        self.i = 0

    def peek(self) -> _Tok:
        return self.toks[self.i] if self.i < len(self.toks) else self.end

    def next(self, kind: str, what: str, text: str | None = None) -> _Tok:
        t = self.peek()
        if t.kind != kind or (text is not None and t.text != text):
            raise ParseError(t.line, t.col, what, repr(t.text) if t.text else "end of line")
        self.i += 1
        return t

    def done(self) -> None:
        t = self.peek()
        if t.kind != "eol":
            raise ParseError(t.line, t.col, "end of line", repr(t.text))


def _err(tok: _Tok, expected: str) -> ParseError:
    return ParseError(tok.line, tok.col, expected, repr(tok.text))


def parse_kb(source: str) -> KnowledgeBase:
    """Parse ``.kb`` text; declarations may appear in any order."""
    times: list[tuple[_Tok, _Tok | None]] = []
    classes: list[tuple[_Tok, _Tok]] = []
    entities: list[tuple[_Tok, _Tok, str | None]] = []
    facts: list[tuple[_Tok, _Tok, _Tok, _Tok | None]] = []
    defclasses: list[tuple[_Tok, _Tok]] = []

    for lineno, raw in enumerate(source.split("\n"), start=1):
        ln = _Line(raw, lineno)
        head = ln.peek()
        if head.kind == "eol":
            continue
        kw = ln.next("name", "a declaration keyword").text
        if kw == "time":
            name = ln.next("name", "a time point name")
            rank = ln.next("int", "a rank") if ln.peek().kind == "int" else None
            times.append((name, rank))
        elif kw == "class":
            name = ln.next("name", "a class name")
            ln.next("punct", "':'", ":")
            classes.append((name, ln.next("name", "a parent category")))
        elif kw == "entity":
            eid = ln.next("name", "an entity id")
            ln.next("punct", "':'", ":")
            cat = ln.next("name", "a category")
            label = None
            if ln.peek().kind == "string":
                label = json.loads(ln.next("string", "a label").text)
            entities.append((eid, cat, label))
        elif kw == "fact":
            rel = ln.next("name", "a relation")
            ln.next("punct", "'('", "(")
            subj = ln.next("name", "an entity id")
            ln.next("punct", "','", ",")
            obj = ln.next("name", "an entity id")
            ln.next("punct", "')'", ")")
            at = None
            if ln.peek().text == "@":
                ln.next("punct", "'@'", "@")
                at = ln.next("name", "a time point")
            facts.append((rel, subj, obj, at))
        elif kw == "defclass":
            name = ln.next("name", "a defined class name")
            ln.next("name", "'from'", "from")
            defclasses.append((name, ln.next("name", "a dependent continuant kind")))
        else:
            raise _err(head, "one of time, class, entity, fact, defclass")
        ln.done()

    return _build_kb(times, classes, entities, facts, defclasses)


def _build_kb(times, classes, entities, facts, defclasses) -> KnowledgeBase:
    from .definitions import expand_defined_class

    timeline: list[TimePoint] = []
    seen_times: dict[str, int] = {}
    ranks: set[int] = set()
    for idx, (name, rank_tok) in enumerate(times):
        rank = int(rank_tok.text) if rank_tok else idx
        if name.text in seen_times:
            raise _err(name, "a new time point name")
        if rank in ranks:
            raise _err(rank_tok or name, "a distinct time rank")
        seen_times[name.text] = rank
        ranks.add(rank)
        timeline.append(TimePoint(name.text, rank))

    # Classes may refer to classes declared later in the file.
    pending = list(classes)
    declared: dict[str, str] = {}
    known = Taxonomy()
    while pending:
        progress = False
        for name, parent in list(pending):
            if canonical(parent.text) in known or parent.text in declared:
                if name.text in known or name.text in declared:
                    raise _err(name, "a new class name")
                declared[name.text] = parent.text
                pending.remove((name, parent))
                progress = True
        if not progress:
            name, parent = pending[0]
            raise _err(parent, "a known parent category")
    taxonomy = Taxonomy(declared.items())

    ents: list[Entity] = []
    ids: set[str] = set()
    for eid, cat, label in entities:
        if eid.text in ids:
            raise _err(eid, "a new entity id")
        if cat.text not in taxonomy:
            raise _err(cat, "a known category")
        ids.add(eid.text)
        ents.append(Entity(eid.text, canonical(cat.text), label))

    out_facts: list[Fact] = []
    seen_facts: set[Fact] = set()
    for rel, subj, obj, at in facts:
        if rel.text not in RELATIONS:
            raise _err(rel, "a known relation")
        if subj.text not in ids:
            raise _err(subj, "a declared entity")
        if rel.text == "exists_at":
            if obj.text not in seen_times:
                raise _err(obj, "a declared time point")
            if at is not None:
                raise _err(at, "no '@' on exists_at")
        elif obj.text not in ids:
            raise _err(obj, "a declared entity")
        if at is not None and at.text not in seen_times:
            raise _err(at, "a declared time point")
        fact = Fact(rel.text, subj.text, obj.text, at.text if at else None)
        if fact in seen_facts:
            raise _err(rel, "a non-duplicate fact")
        seen_facts.add(fact)
        out_facts.append(fact)

    defs = []
    def_names: set[str] = set()
    for name, dc in defclasses:
        if name.text in def_names:
            raise _err(name, "a new defined class name")
        try:
            d = expand_defined_class(dc.text, taxonomy)
        except GdcheckError:
            raise _err(dc, "a dependent continuant kind") from None
        def_names.add(name.text)
        defs.append(d if d.name == name.text else replace(d, name=name.text))

    return KnowledgeBase(
        entities=ents,
        timeline=timeline,
        facts=out_facts,
        classes=[ClassDecl(n.text, p.text) for n, p in classes],
        defined_classes=defs,
    )


def serialize_kb(kb: KnowledgeBase) -> str:
    """Canonical ``.kb`` text; ``parse_kb(serialize_kb(kb)) == kb``."""
    out = []
    for idx, tp in enumerate(kb.timeline):
        out.append(f"time {tp.name}" if tp.order == idx else f"time {tp.name} {tp.order}")
    for c in kb.classes:
        out.append(f"class {c.name} : {c.parent}")
    for e in kb.entities:
        label = "" if e.label is None else " " + json.dumps(e.label, ensure_ascii=False)
        out.append(f"entity {e.id} : {e.category}{label}")
    for f in kb.facts:
        at = "" if f.at is None else f" @ {f.at}"
        out.append(f"fact {f.relation}({f.subject}, {f.object}){at}")
    for d in kb.defined_classes:
        out.append(f"defclass {d.name} from {d.base_dc}")
    return "\n".join(out) + ("\n" if out else "")

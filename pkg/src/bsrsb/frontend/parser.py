"""Tokenizer, recursive-descent parser and sort inference for problem files."""

from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction

from ..core import (
    AlphaEps,
    AlphaMinf,
    BaseR,
    Clause,
    ClauseSet,
    Eq,
    FreeConst,
    FreeS,
    Numeric,
    Pred,
    Rel,
    ShapeError,
    Signature,
    SkolemBase,
    Sort,
    Var,
    is_base_const,
    is_plain_base_const,
    make_constraint,
)
from .raw import App, RawConstraint


class ParseError(ValueError):
    def __init__(self, message: str, line: int = 0, col: int = 0):
        self.line, self.col = line, col
        where = f"{line}:{col}: " if line else ""
        super().__init__(f"{where}{message}")


class SortError(ParseError):
    pass


_TOKEN = re.compile(
    r"""
    (?P<ws>[ \t\r]+|\#[^\n]*)
  | (?P<nl>\n)
  | (?P<num>\d+(?:\.\d+)?(?:/\d+)?)
  | (?P<alpha>@minf|@eps)
  | (?P<ident>[A-Za-z_][A-Za-z0-9_']*)
  | (?P<op>\|\||->|<=|>=|!=|[<>=~(),.:+\-*/])
    """,
    re.VERBOSE,
)


@dataclass(frozen=True)
class Token:
    kind: str
    text: str
    line: int
    col: int


def tokenize(text: str) -> list[Token]:
    tokens = []
    line, line_start, pos = 1, 0, 0
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if m is None:
            raise ParseError(f"unexpected character {text[pos]!r}", line, pos - line_start + 1)
        kind, lexeme = m.lastgroup, m.group()
        col = pos - line_start + 1
        if kind == "num" and "/" in lexeme and tokens and tokens[-1].text == "/":
            # x/3/2 means (x/3)/2, so do not glue a fraction onto a division
            lexeme = lexeme.split("/")[0]
        pos += len(lexeme)
        if kind == "nl":
            line, line_start = line + 1, pos
        elif kind != "ws":
            tokens.append(Token(kind, lexeme, line, col))
    tokens.append(Token("eof", "", line, pos - line_start + 1))
    return tokens


def parse_rational(text: str) -> Fraction:
    return Fraction(text)


_RELS = {r.value: r for r in Rel}


# -- syntax tree before sort inference ----------------------------------------


@dataclass(frozen=True)
class Name:
    """An identifier whose role (variable or constant) is not yet known."""

    text: str
    line: int
    col: int


class _Parser:
    def __init__(self, text: str):
        self.tokens = tokenize(text)
        self.i = 0
        self.preds: dict[str, tuple] = {}
        self.consts: dict[str, Sort] = {}
        self.clauses: list = []

    @property
    def tok(self) -> Token:
        return self.tokens[self.i]

    def error(self, msg: str, tok: Token | None = None):
        tok = tok or self.tok
        found = tok.text or "end of input"
        raise ParseError(f"{msg}, found {found!r}", tok.line, tok.col)

    def advance(self) -> Token:
        tok = self.tok
        self.i += 1
        return tok

    def accept(self, text: str) -> bool:
        if self.tok.text == text and self.tok.kind != "num":
            self.i += 1
            return True
        return False

    def expect(self, text: str) -> Token:
        if self.tok.text != text:
            self.error(f"expected {text!r}")
        return self.advance()

    def ident(self) -> Token:
        if self.tok.kind != "ident":
            self.error("expected identifier")
        return self.advance()

    def problem(self):
        while self.tok.kind != "eof":
            if self.tok.text in ("pred", "const") and self.tokens[self.i + 1].kind == "ident":
                self.declaration()
            else:
                self.clauses.append(self.clause())

    def declaration(self):
        kw = self.advance().text
        name = self.ident()
        if name.text in self.preds or name.text in self.consts:
            raise ParseError(f"redeclaration of {name.text}", name.line, name.col)
        self.expect(":")
        sorts = []
        while self.tok.text in ("R", "S"):
            sorts.append(Sort(self.advance().text))
        self.expect(".")
        if kw == "pred":
            self.preds[name.text] = tuple(sorts)
        else:
            if len(sorts) != 1:
                raise ParseError(f"constant {name.text} needs exactly one sort", name.line, name.col)
            self.consts[name.text] = sorts[0]

    def clause(self):
        start = self.tok
        constraints, antecedent, succedent = [], [], []
        if self.tok.text != "||":
            constraints.append(self.constraint())
            while self.accept(","):
                constraints.append(self.constraint())
        self.expect("||")
        if self.tok.text != "->":
            antecedent = self.atom_list()
        self.expect("->")
        if self.tok.text != ".":
            succedent = self.atom_list()
        self.expect(".")
        return (start, constraints, antecedent, succedent)

    def atom_list(self):
        atoms = [self.atom()]
        while self.accept(","):
            atoms.append(self.atom())
        return atoms

    def constraint(self):
        lhs = self.term()
        tok = self.tok
        if tok.text not in _RELS or tok.kind != "op":
            self.error("expected comparison operator")
        self.advance()
        return ("con", lhs, _RELS[tok.text], self.term(), tok)

    def atom(self):
        tok = self.tok
        if tok.kind == "ident" and self.tokens[self.i + 1].text == "(" and tok.text not in self.consts:
            # predicate atom unless followed by `~`, which makes it a function term
            save = self.i
            self.advance()
            args = self.paren_args()
            if self.tok.text != "~":
                return ("pred", tok, args)
            self.i = save
        lhs = self.term()
        self.expect("~")
        return ("eq", lhs, self.term(), tok)

    def paren_args(self):
        self.expect("(")
        args = [self.term()]
        while self.accept(","):
            args.append(self.term())
        self.expect(")")
        return args

    def term(self):
        lhs = self.product()
        while self.tok.text in ("+", "-") and self.tok.kind == "op":
            op = self.advance().text
            lhs = App(op, (lhs, self.product()))
        return lhs

    def product(self):
        lhs = self.unary()
        while self.tok.text in ("*", "/") and self.tok.kind == "op":
            op = self.advance().text
            lhs = App(op, (lhs, self.unary()))
        return lhs

    def unary(self):
        if self.tok.text == "-" and self.tok.kind == "op":
            self.advance()
            arg = self.unary()
            if isinstance(arg, Numeric):
                return Numeric(-arg.value)
            return App("neg", (arg,))
        return self.primary()

    def primary(self):
        tok = self.tok
        if tok.kind == "num":
            self.advance()
            try:
                return Numeric(parse_rational(tok.text))
            except ZeroDivisionError:
                raise ParseError(f"division by zero in literal {tok.text}", tok.line, tok.col) from None
        if tok.text == "@minf":
            self.advance()
            return AlphaMinf()
        if tok.text == "@eps":
            self.advance()
            self.expect("(")
            inner = self.term()
            self.expect(")")
            return ("eps", inner, tok)
        if tok.text == "(":
            self.advance()
            t = self.term()
            self.expect(")")
            return t
        if tok.kind == "ident":
            self.advance()
            if self.tok.text == "(":
                return ("app", tok, self.paren_args())
            return Name(tok.text, tok.line, tok.col)
        self.error("expected term")


# -- sort inference --------------------------------------------------------------


class _SortSlots:
    """Union-find over sort slots, each optionally pinned to a sort."""

    def __init__(self):
        self.parent: dict = {}
        self.sort: dict = {}
        self.origin: dict = {}

    def find(self, k):
        self.parent.setdefault(k, k)
        while self.parent[k] != k:
            self.parent[k] = self.parent[self.parent[k]]
            k = self.parent[k]
        return k

    def pin(self, k, sort: Sort, why: str, at: tuple):
        r = self.find(k)
        have = self.sort.get(r)
        if have is None:
            self.sort[r] = sort
            self.origin[r] = why
        elif have is not sort:
            raise SortError(f"sort conflict: {why} needs {sort}, but {self.origin[r]} needs {have}", *at)

    def union(self, a, b, at: tuple):
        ra, rb = self.find(a), self.find(b)
        if ra == rb:
            return
        sa, sb = self.sort.get(ra), self.sort.get(rb)
        if sa is not None and sb is not None and sa is not sb:
            raise SortError(f"sort conflict: {self.origin[ra]} is {sa}, {self.origin[rb]} is {sb}", *at)
        self.parent[rb] = ra
        if sa is None and sb is not None:
            self.sort[ra] = sb
            self.origin[ra] = self.origin[rb]

    def get(self, k):
        return self.sort.get(self.find(k))


def _at(x) -> tuple:
    return (x.line, x.col) if x is not None else (0, 0)


class _Builder:
    def __init__(self, parser: _Parser):
        self.p = parser
        self.slots = _SortSlots()
        self.arity: dict[str, tuple[int, object]] = {}
        for name, sorts in parser.preds.items():
            self.arity[name] = (len(sorts), None)
            for i, s in enumerate(sorts):
                self.slots.pin(("pos", name, i), s, f"declared {name}", (0, 0))

    # pass 1: walk terms and constrain slots
    def slot_of(self, t, ci: int, at):
        """Sort slot of a term, or a concrete Sort for constants and arithmetic."""
        if isinstance(t, Name):
            if t.text in self.p.consts:
                return self.p.consts[t.text]
            if t.text in self.p.preds:
                raise SortError(f"predicate {t.text} used as a term", t.line, t.col)
            return ("var", ci, t.text)
        if isinstance(t, (Numeric, AlphaMinf)):
            return BaseR
        if isinstance(t, tuple) and t[0] == "eps":
            self.require(t[1], ci, BaseR, "argument of @eps", t[2])
            return BaseR
        if isinstance(t, tuple) and t[0] == "app":
            tok, args = t[1], t[2]
            self.check_arity(tok, len(args), "function")
            for i, a in enumerate(args):
                self.unify(a, ("farg", tok.text, i), ci, f"argument {i + 1} of {tok.text}", tok)
            return ("fres", tok.text)
        if isinstance(t, App):
            for a in t.args:
                self.require(a, ci, BaseR, "arithmetic operand", at)
            return BaseR
        raise AssertionError(t)

    def check_arity(self, tok, n: int, kind: str):
        known = self.arity.get(tok.text)
        if known is None:
            self.arity[tok.text] = (n, kind)
        elif known[0] != n:
            raise ParseError(
                f"arity mismatch for {tok.text}: expected {known[0]}, got {n}", tok.line, tok.col
            )
        if known is not None and known[1] not in (None, kind) or (
            kind == "function" and tok.text in self.p.preds
        ):
            raise ParseError(f"{tok.text} used both as predicate and function", tok.line, tok.col)

    def require(self, t, ci, sort: Sort, why: str, at):
        s = self.slot_of(t, ci, at)
        if isinstance(s, Sort):
            if s is not sort:
                raise SortError(f"{why} must be of sort {sort}", *_at(at))
        else:
            self.slots.pin(s, sort, why, _at(at))

    def unify(self, t, slot, ci, why, at):
        s = self.slot_of(t, ci, at)
        if isinstance(s, Sort):
            self.slots.pin(slot, s, why, _at(at))
        else:
            self.slots.union(slot, s, _at(at))

    def infer(self):
        for ci, (_, cons, ante, succ) in enumerate(self.p.clauses):
            for _, lhs, _, rhs, tok in cons:
                self.require(lhs, ci, BaseR, "constraint operand", tok)
                self.require(rhs, ci, BaseR, "constraint operand", tok)
            for atom in ante + succ:
                if atom[0] == "pred":
                    tok, args = atom[1], atom[2]
                    self.check_arity(tok, len(args), "predicate")
                    for i, a in enumerate(args):
                        self.unify(a, ("pos", tok.text, i), ci, f"argument {i + 1} of {tok.text}", tok)
                else:
                    _, lhs, rhs, tok = atom
                    self.require(lhs, ci, FreeS, "operand of ~", tok)
                    self.require(rhs, ci, FreeS, "operand of ~", tok)

    # pass 2: build core objects
    def sort_of_slot(self, slot, what: str, at) -> Sort:
        s = self.slots.get(slot)
        if s is None:
            raise SortError(f"cannot infer the sort of {what}; declare it", *_at(at))
        return s

    def build_term(self, t, ci):
        if isinstance(t, Name):
            sort = self.p.consts.get(t.text)
            if sort is BaseR:
                return SkolemBase(t.text)
            if sort is FreeS:
                return FreeConst(t.text)
            return Var(t.text, self.sort_of_slot(("var", ci, t.text), f"variable {t.text}", t))
        if isinstance(t, tuple) and t[0] == "eps":
            inner = self.build_term(t[1], ci)
            if not is_plain_base_const(inner):
                raise ParseError("@eps needs a numeric or declared base constant", t[2].line, t[2].col)
            return AlphaEps(inner)
        if isinstance(t, tuple) and t[0] == "app":
            tok = t[1]
            sort = self.slots.get(("fres", tok.text))
            return App(tok.text, tuple(self.build_term(a, ci) for a in t[2]), sort)
        if isinstance(t, App):
            return App(t.op, tuple(self.build_term(a, ci) for a in t.args))
        return t

    def build(self) -> tuple[Signature, list[Clause]]:
        self.infer()
        preds = dict(self.p.preds)
        for name, (n, kind) in sorted(self.arity.items()):
            if kind == "predicate" and name not in preds:
                preds[name] = tuple(
                    self.sort_of_slot(("pos", name, i), f"argument {i + 1} of {name}", None) for i in range(n)
                )
        for name, (n, kind) in sorted(self.arity.items()):
            if kind == "function":
                self.sort_of_slot(("fres", name), f"the result of function {name}", None)
        consts = {
            SkolemBase(n) if s is BaseR else FreeConst(n) for n, s in self.p.consts.items()
        }
        clauses = []
        for ci, (start, cons, ante, succ) in enumerate(self.p.clauses):
            constraints = [self.build_constraint(c, ci) for c in cons]
            clauses.append(
                Clause(
                    tuple(constraints),
                    tuple(self.build_atom(a, ci) for a in ante),
                    tuple(self.build_atom(a, ci) for a in succ),
                    id=f"c{ci + 1}",
                )
            )
        return Signature(preds, consts), clauses

    def build_constraint(self, c, ci):
        _, lhs, rel, rhs, tok = c
        lhs, rhs = self.build_term(lhs, ci), self.build_term(rhs, ci)
        simple = (isinstance(lhs, Var) or is_base_const(lhs)) and (isinstance(rhs, Var) or is_base_const(rhs))
        if simple:
            try:
                return make_constraint(lhs, rel, rhs)
            except ShapeError:
                pass
        return RawConstraint(lhs, rel, rhs)

    def build_atom(self, a, ci):
        if a[0] == "pred":
            return Pred(a[1].text, tuple(self.build_term(t, ci) for t in a[2]))
        return Eq(self.build_term(a[1], ci), self.build_term(a[2], ci))


def parse_raw(text: str) -> ClauseSet:
    """Parse without adding α axioms or a default free constant."""
    p = _Parser(text)
    p.problem()
    sig, clauses = _Builder(p).build()
    return ClauseSet(sig, clauses)


def parse(text: str, augment: bool = True) -> ClauseSet:
    cs = parse_raw(text)
    return augment_problem(cs) if augment else cs


DEFAULT_FREE = FreeConst("_d0")


def augment_problem(cs: ClauseSet) -> ClauseSet:
    """Append the α axioms for mentioned α constants and a default free constant.

    Idempotent: clauses already present are not added again.
    """
    from ..analysis import closed_axioms
    from ..core import stats

    st = stats(cs)
    clauses = list(cs.clauses)
    sig = cs.signature
    if st.αconsts:
        base = set(st.bconsts) | {a.inner for a in st.αconsts if isinstance(a, AlphaEps)}
        present = set(clauses)
        for ax in closed_axioms(st.αconsts, base).clauses:
            if ax not in present:
                clauses.append(ax)
                present.add(ax)
    if not st.fconsts:
        sig = sig.with_constants([DEFAULT_FREE])
        clauses.append(Clause((), (), (Eq(DEFAULT_FREE, DEFAULT_FREE),), id="default"))
    return cs.replace(clauses=clauses, signature=sig)


__all__ = ["parse", "parse_raw", "augment_problem", "tokenize", "ParseError", "SortError"]

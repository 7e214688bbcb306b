"""Sorted terms, constraints, clauses and clause sets.

Everything here is immutable.  Clauses are ``Λ || Γ -> Δ`` with ``Λ`` a
sequence of atomic constraints and ``Γ``, ``Δ`` sequences of free atoms;
multiplicities are kept.
"""

from __future__ import annotations

import enum
import operator
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Iterator, Mapping, NamedTuple, Union


class Sort(enum.Enum):
    R = "R"
    S = "S"

    def __str__(self) -> str:
        return self.value


BaseR = Sort.R
FreeS = Sort.S


# -- constants ---------------------------------------------------------------


@dataclass(frozen=True)
class Numeric:
    value: Fraction

    def __post_init__(self):
        object.__setattr__(self, "value", Fraction(self.value))

    sort = BaseR
    is_alpha = False

    def __str__(self) -> str:
        return format_rational(self.value)


@dataclass(frozen=True)
class SkolemBase:
    name: str

    sort = BaseR
    is_alpha = False

    def __str__(self) -> str:
        return self.name


@dataclass(frozen=True)
class AlphaMinf:
    sort = BaseR
    is_alpha = True

    def __str__(self) -> str:
        return "@minf"


@dataclass(frozen=True)
class AlphaEps:
    inner: Union[Numeric, SkolemBase]

    sort = BaseR
    is_alpha = True

    def __post_init__(self):
        if not isinstance(self.inner, (Numeric, SkolemBase)):
            raise TypeError(f"@eps needs a numeric or Skolem constant, got {self.inner!r}")

    def __str__(self) -> str:
        return f"@eps({self.inner})"


@dataclass(frozen=True)
class FreeConst:
    name: str

    sort = FreeS
    is_alpha = False

    def __str__(self) -> str:
        return self.name


ConstSym = Union[Numeric, SkolemBase, AlphaMinf, AlphaEps, FreeConst]
BaseConst = Union[Numeric, SkolemBase, AlphaMinf, AlphaEps]
CONST_TYPES = (Numeric, SkolemBase, AlphaMinf, AlphaEps, FreeConst)


def is_const(t) -> bool:
    return isinstance(t, CONST_TYPES)


def is_base_const(t) -> bool:
    return isinstance(t, (Numeric, SkolemBase, AlphaMinf, AlphaEps))


def is_plain_base_const(t) -> bool:
    """Base constant that is not an α constant (a member of Ω_LA)."""
    return isinstance(t, (Numeric, SkolemBase))


def is_alpha(t) -> bool:
    return isinstance(t, (AlphaMinf, AlphaEps))


def const_key(c) -> tuple:
    """Total order on constants used for every canonical ordering."""
    if isinstance(c, AlphaMinf):
        return (0,)
    if isinstance(c, Numeric):
        return (1, c.value)
    if isinstance(c, SkolemBase):
        return (2, c.name)
    if isinstance(c, AlphaEps):
        return (3,) + const_key(c.inner)
    if isinstance(c, FreeConst):
        return (4, c.name)
    raise TypeError(f"not a constant: {c!r}")


def format_rational(q: Fraction) -> str:
    q = Fraction(q)
    if q.denominator == 1:
        return str(q.numerator)
    return f"{q.numerator}/{q.denominator}"


# -- variables, relations ----------------------------------------------------


@dataclass(frozen=True)
class Var:
    name: str
    sort: Sort

    def __str__(self) -> str:
        return self.name


class Rel(enum.Enum):
    LT = "<"
    LE = "<="
    EQ = "="
    NE = "!="
    GE = ">="
    GT = ">"

    def __str__(self) -> str:
        return self.value

    def holds(self, a, b) -> bool:
        return _REL_OPS[self](a, b)

    def flipped(self) -> "Rel":
        """The relation with its arguments swapped: a < b iff b > a."""
        return _FLIPPED[self]

    def negated(self) -> "Rel":
        return _NEGATED[self]


_REL_OPS = {
    Rel.LT: operator.lt,
    Rel.LE: operator.le,
    Rel.EQ: operator.eq,
    Rel.NE: operator.ne,
    Rel.GE: operator.ge,
    Rel.GT: operator.gt,
}
_FLIPPED = {Rel.LT: Rel.GT, Rel.LE: Rel.GE, Rel.EQ: Rel.EQ, Rel.NE: Rel.NE, Rel.GE: Rel.LE, Rel.GT: Rel.LT}
_NEGATED = {Rel.LT: Rel.GE, Rel.LE: Rel.GT, Rel.EQ: Rel.NE, Rel.NE: Rel.EQ, Rel.GE: Rel.LT, Rel.GT: Rel.LE}


# -- constraints and atoms ---------------------------------------------------


class ShapeError(ValueError):
    pass


def _admissible(lhs, rel: Rel, rhs) -> bool:
    if isinstance(lhs, Var):
        if lhs.sort is not BaseR:
            return False
        return is_plain_base_const(rhs) or (is_alpha(rhs) and rel is Rel.EQ)
    if is_plain_base_const(lhs):
        return is_plain_base_const(rhs)
    if is_alpha(lhs):
        return is_base_const(rhs)
    return False


@dataclass(frozen=True)
class AtomicConstraint:
    lhs: Union[Var, BaseConst]
    rel: Rel
    rhs: BaseConst

    def __post_init__(self):
        if not _admissible(self.lhs, self.rel, self.rhs):
            raise ShapeError(f"inadmissible constraint shape: {self}")

    def __str__(self) -> str:
        return f"{self.lhs} {self.rel} {self.rhs}"

    @property
    def var(self) -> Var | None:
        return self.lhs if isinstance(self.lhs, Var) else None

    def is_ground(self) -> bool:
        return not isinstance(self.lhs, Var)


def make_constraint(lhs, rel: Rel, rhs) -> AtomicConstraint:
    """Build a constraint, swapping sides where needed to reach an admissible shape."""
    swap = (
        (isinstance(rhs, Var) and not isinstance(lhs, Var))
        or (is_plain_base_const(lhs) and is_alpha(rhs))
    )
    if swap:
        lhs, rel, rhs = rhs, rel.flipped(), lhs
    return AtomicConstraint(lhs, rel, rhs)


@dataclass(frozen=True)
class Eq:
    lhs: Union[Var, FreeConst]
    rhs: Union[Var, FreeConst]

    def __str__(self) -> str:
        return f"{self.lhs} ~ {self.rhs}"

    @property
    def args(self) -> tuple:
        return (self.lhs, self.rhs)


@dataclass(frozen=True)
class Pred:
    symbol: str
    args: tuple

    def __post_init__(self):
        object.__setattr__(self, "args", tuple(self.args))

    def __str__(self) -> str:
        return f"{self.symbol}({', '.join(map(str, self.args))})"


FreeAtom = Union[Eq, Pred]


@dataclass(frozen=True)
class Clause:
    constraints: tuple = ()
    antecedent: tuple = ()
    succedent: tuple = ()
    id: str = field(default="", compare=False)

    def __post_init__(self):
        object.__setattr__(self, "constraints", tuple(self.constraints))
        object.__setattr__(self, "antecedent", tuple(self.antecedent))
        object.__setattr__(self, "succedent", tuple(self.succedent))

    @property
    def atoms(self) -> tuple:
        return self.antecedent + self.succedent

    def has_free_part(self) -> bool:
        return bool(self.antecedent or self.succedent)

    def variables(self) -> list[Var]:
        """Variables in order of first occurrence (constraints first)."""
        return _unique(t for t in self.terms() if isinstance(t, Var))

    def free_part_variables(self) -> list[Var]:
        return _unique(a for atom in self.atoms for a in atom.args if isinstance(a, Var))

    def terms(self) -> Iterator:
        """Every leaf term occurrence, constraints first, then atoms."""
        for con in self.constraints:
            yield from _leaves(con)
        for atom in self.atoms:
            for a in atom.args:
                yield from _term_leaves(a)

    def with_id(self, id: str) -> "Clause":
        return Clause(self.constraints, self.antecedent, self.succedent, id)

    def __str__(self) -> str:
        return format_clause(self)


def _unique(items: Iterable) -> list:
    seen = {}
    for x in items:
        seen.setdefault(x, None)
    return list(seen)


def _leaves(con) -> Iterator:
    if isinstance(con, AtomicConstraint):
        yield con.lhs
        yield con.rhs
    else:
        yield from _term_leaves(con.lhs)
        yield from _term_leaves(con.rhs)


def _term_leaves(t) -> Iterator:
    # raw arithmetic/function applications only exist before basification
    args = getattr(t, "args", None)
    if args is None:
        yield t
    else:
        for a in args:
            yield from _term_leaves(a)


def format_clause(c: Clause) -> str:
    text = ", ".join(map(str, c.constraints))
    text = f"{text} ||" if text else "||"
    if c.antecedent:
        text += " " + ", ".join(map(str, c.antecedent))
    text += " ->"
    if c.succedent:
        text += " " + ", ".join(map(str, c.succedent))
    return text + "."


# -- signatures and clause sets -----------------------------------------------


@dataclass(frozen=True)
class Signature:
    predicates: Mapping[str, tuple] = field(default_factory=dict)
    constants: frozenset = frozenset()

    def __post_init__(self):
        object.__setattr__(self, "predicates", {p: tuple(s) for p, s in self.predicates.items()})
        object.__setattr__(self, "constants", frozenset(self.constants))

    def arity(self, pred: str) -> int:
        return len(self.predicates[pred])

    def with_constants(self, extra: Iterable) -> "Signature":
        return Signature(self.predicates, self.constants | frozenset(extra))

    def constant_names(self) -> set[str]:
        return {str(c) for c in self.constants}


PURIFIED = "purified"
NORMAL_FORM = "normal_form"
RENAMED_APART = "renamed_apart"
ESSENTIALLY_GROUND = "essentially_ground"


@dataclass(frozen=True)
class ClauseSet:
    signature: Signature = field(default_factory=Signature)
    clauses: tuple = ()
    flags: frozenset = field(default=frozenset(), compare=False)

    def __post_init__(self):
        object.__setattr__(self, "clauses", tuple(self.clauses))
        object.__setattr__(self, "flags", frozenset(self.flags))

    def __iter__(self):
        return iter(self.clauses)

    def __len__(self) -> int:
        return len(self.clauses)

    def replace(self, clauses=None, signature=None, flags=None) -> "ClauseSet":
        return ClauseSet(
            self.signature if signature is None else signature,
            self.clauses if clauses is None else clauses,
            self.flags if flags is None else flags,
        )


# -- statistics ---------------------------------------------------------------


class Stats(NamedTuple):
    len: int
    bconsts: frozenset
    αconsts: frozenset
    fconsts: frozenset
    vars: frozenset


def stats(cs: ClauseSet) -> Stats:
    """Occurrence length and the constant/variable sets of a clause set."""
    length = 0
    b, a, f, v = set(), set(), set(), set()
    for clause in cs.clauses:
        for t in clause.terms():
            length += 1
            if isinstance(t, Var):
                v.add(t)
            elif is_alpha(t):
                a.add(t)
            elif is_plain_base_const(t):
                b.add(t)
            elif isinstance(t, FreeConst):
                f.add(t)
    return Stats(length, frozenset(b), frozenset(a), frozenset(f), frozenset(v))


def clause_len(clause: Clause) -> int:
    return sum(1 for _ in clause.terms())


def bconsts(cs: ClauseSet) -> list:
    return sorted(stats(cs).bconsts, key=const_key)


def fconsts(cs: ClauseSet) -> list:
    return sorted(stats(cs).fconsts, key=const_key)


def alpha_consts(cs: ClauseSet) -> list:
    return sorted(stats(cs).αconsts, key=const_key)


# -- well-formedness ------------------------------------------------------------


def wellformed(cs: ClauseSet) -> list[str]:
    """Diagnostics for every violation of the clause grammar; empty if legal."""
    diags = []
    sig = cs.signature
    names: dict[str, str] = {}
    for c in sorted(sig.constants, key=const_key):
        kind = "constant"
        if str(c) in names:
            diags.append(f"constant name {c} declared twice")
        names[str(c)] = kind
    for p in sorted(sig.predicates):
        if p in names:
            diags.append(f"name {p} used both as constant and predicate")

    for idx, clause in enumerate(cs.clauses):
        where = f"clause {clause.id or idx + 1}"
        var_sorts: dict[str, Sort] = {}

        def note_var(v: Var):
            prev = var_sorts.setdefault(v.name, v.sort)
            if prev is not v.sort:
                diags.append(f"{where}: variable {v.name} used with both sorts")

        for con in clause.constraints:
            if not isinstance(con, AtomicConstraint):
                diags.append(f"{where}: non-simple bound: {con}")
                continue
            if isinstance(con.lhs, Var):
                note_var(con.lhs)
        for atom in clause.atoms:
            if isinstance(atom, Eq):
                for s in atom.args:
                    if isinstance(s, Var):
                        if s.sort is not FreeS:
                            diags.append(f"{where}: base variable {s} in equation {atom}")
                        note_var(s)
                    elif not isinstance(s, FreeConst):
                        diags.append(f"{where}: non-free term {s} in equation {atom}")
                continue
            sorts = sig.predicates.get(atom.symbol)
            if sorts is None:
                diags.append(f"{where}: undeclared predicate {atom.symbol}")
                continue
            if len(sorts) != len(atom.args):
                diags.append(
                    f"{where}: arity mismatch for {atom.symbol}: expected {len(sorts)}, got {len(atom.args)}"
                )
                continue
            for sort, arg in zip(sorts, atom.args):
                if isinstance(arg, Var):
                    if arg.sort is not sort:
                        diags.append(f"{where}: variable {arg} of sort {arg.sort} at {sort} position of {atom}")
                    note_var(arg)
                elif sort is BaseR:
                    if is_base_const(arg):
                        diags.append(
                            f"{where}: base constant at predicate argument; purification required: {atom}"
                        )
                    else:
                        diags.append(f"{where}: non-variable term at base argument of {atom}")
                elif not isinstance(arg, FreeConst):
                    diags.append(f"{where}: non-flat term at free argument of {atom}; basification required")
    return diags


def substitute_term(t, sigma: Mapping):
    return sigma.get(t, t) if isinstance(t, Var) else t


def rename_clause(clause: Clause, renaming: Mapping[Var, Var]) -> Clause:
    """Apply a variable-to-variable renaming everywhere in a clause."""

    def ren(t):
        return renaming.get(t, t) if isinstance(t, Var) else t

    cons = tuple(
        AtomicConstraint(ren(c.lhs), c.rel, c.rhs) if isinstance(c, AtomicConstraint) else c.map(ren)
        for c in clause.constraints
    )
    return Clause(cons, tuple(map_atom(a, ren) for a in clause.antecedent),
                  tuple(map_atom(a, ren) for a in clause.succedent), clause.id)


def map_atom(atom, fn):
    if isinstance(atom, Eq):
        return Eq(fn(atom.lhs), fn(atom.rhs))
    return Pred(atom.symbol, tuple(fn(a) for a in atom.args))

"""Flatten ground arithmetic and solve univariate linear constraints.

Ground base terms are evaluated to rationals.  Ground free-sort function
terms are replaced by fresh free constants, one per distinct term, and
functionality of each function is restored with Ackermann clauses.
"""

from __future__ import annotations

from fractions import Fraction
from itertools import combinations

from ..core import (
    AtomicConstraint,
    Clause,
    ClauseSet,
    Eq,
    FreeConst,
    FreeS,
    Numeric,
    Pred,
    ShapeError,
    Var,
    make_constraint,
)
from .raw import App, EvalError, RawConstraint, evaluate, format_term


class BasifyError(ValueError):
    pass


def linear_form(t) -> tuple[Fraction, Fraction, Var | None]:
    """Write ``t`` as ``coef * var + const``; ``var`` is None for ground terms."""
    if isinstance(t, Var):
        return Fraction(1), Fraction(0), t
    if isinstance(t, Numeric):
        return Fraction(0), t.value, None
    if not isinstance(t, App):
        raise BasifyError(f"symbolic base constant {t} inside arithmetic is not supported")
    if not t.is_arith:
        raise BasifyError(f"base-sort function term {format_term(t)} is not supported")
    if t.op == "neg":
        a, b, v = linear_form(t.args[0])
        return -a, -b, v
    (a1, b1, v1), (a2, b2, v2) = (linear_form(x) for x in t.args)
    if t.op in "+-":
        if v1 is not None and v2 is not None:
            if v1 == v2:
                raise BasifyError(f"more than one occurrence of {v1} in {format_term(t)}")
            raise BasifyError(f"more than one base variable in {format_term(t)}")
        sign = 1 if t.op == "+" else -1
        return a1 + sign * a2, b1 + sign * b2, v1 or v2
    if t.op == "*":
        if v1 is not None and v2 is not None:
            raise BasifyError(f"nonlinear term {format_term(t)}")
        if v1 is None:
            return b1 * a2, b1 * b2, v2
        return a1 * b2, b1 * b2, v1
    # division
    if v2 is not None:
        raise BasifyError(f"nonlinear term {format_term(t)}")
    if b2 == 0:
        raise BasifyError(f"division by zero in {format_term(t)}")
    return a1 / b2, b1 / b2, v1


def _base_value(t):
    """Simple base operand as is, or a ground arithmetic term evaluated."""
    if isinstance(t, App):
        try:
            return Numeric(evaluate(t))
        except EvalError as e:
            raise BasifyError(str(e)) from None
    return t


def solve_constraint(con: RawConstraint) -> AtomicConstraint:
    """Turn a ground or univariate linear comparison into a simple bound."""
    lhs, rhs = con.lhs, con.rhs
    if not isinstance(lhs, App) and not isinstance(rhs, App):
        try:
            return make_constraint(lhs, con.rel, rhs)
        except ShapeError:
            if isinstance(lhs, Var) and isinstance(rhs, Var):
                raise BasifyError(f"more than one base variable in {con}") from None
            raise BasifyError(f"constraint {con} has no simple form") from None
    a1, b1, v1 = linear_form(lhs)
    a2, b2, v2 = linear_form(rhs)
    if v1 is not None and v2 is not None:
        if v1 == v2:
            raise BasifyError(f"more than one occurrence of {v1} in {con}")
        raise BasifyError(f"more than one base variable in {con}")
    var = v1 or v2
    # a1*v + b1 rel a2*v + b2  <=>  (a1 - a2)*v rel b2 - b1
    coef, bound = a1 - a2, b2 - b1
    if var is None:
        return AtomicConstraint(Numeric(b1), con.rel, Numeric(b2))
    if coef == 0:
        return AtomicConstraint(Numeric(0), con.rel, Numeric(bound))
    rel = con.rel if coef > 0 else con.rel.flipped()
    return AtomicConstraint(var, rel, Numeric(bound / coef))


class _FreeTerms:
    """Hash-consing table for ground free-sort function terms."""

    def __init__(self, taken: set[str]):
        self.table: dict[tuple, FreeConst] = {}
        self.taken = taken
        self.counter = 0

    def fresh(self) -> FreeConst:
        while f"b{self.counter}" in self.taken:
            self.counter += 1
        c = FreeConst(f"b{self.counter}")
        self.taken.add(c.name)
        self.counter += 1
        return c

    def flatten(self, t):
        if not isinstance(t, App):
            return t
        if t.is_arith:
            return _base_value(t)
        if t.sort is not FreeS:
            raise BasifyError(f"base-sort function term {format_term(t)} is not supported")
        args = tuple(self.flatten(a) for a in t.args)
        for a in args:
            if isinstance(a, Var):
                raise BasifyError(f"non-ground function term {format_term(t)}")
        key = (t.op, args)
        if key not in self.table:
            self.table[key] = self.fresh()
        return self.table[key]

    def ackermann(self) -> list[Clause]:
        by_head: dict[str, list] = {}
        for (head, args), const in self.table.items():
            by_head.setdefault(head, []).append((args, const))
        out = []
        for head in sorted(by_head):
            for (s, bs), (t, bt) in combinations(by_head[head], 2):
                if any(x != y and x.sort is not FreeS for x, y in zip(s, t)):
                    continue  # distinct base arguments never force equality
                eqs = tuple(Eq(x, y) for x, y in zip(s, t) if x != y)
                out.append(Clause((), eqs, (Eq(bs, bt),), id=f"ack_{head}"))
        return out


def basify(cs: ClauseSet) -> ClauseSet:
    terms = _FreeTerms(cs.signature.constant_names() | set(cs.signature.predicates))

    def atom(a):
        if isinstance(a, Eq):
            return Eq(terms.flatten(a.lhs), terms.flatten(a.rhs))
        return Pred(a.symbol, tuple(terms.flatten(t) for t in a.args))

    clauses = []
    for c in cs.clauses:
        cons = tuple(
            solve_constraint(k) if isinstance(k, RawConstraint) else k for k in c.constraints
        )
        clauses.append(
            Clause(cons, tuple(map(atom, c.antecedent)), tuple(map(atom, c.succedent)), c.id)
        )
    clauses.extend(terms.ackermann())
    sig = cs.signature.with_constants(terms.table.values())
    return cs.replace(clauses=clauses, signature=sig)

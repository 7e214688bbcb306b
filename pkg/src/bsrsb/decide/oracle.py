"""Brute-force reference decision procedure for tiny problems.

Independent of the instantiation machinery: every base variable ranges
over a finite grid that meets every order type induced by the integer
constants, every free variable over the classes of a partition of the free
constants, and the resulting propositional problem is solved by a plain
splitting search.  No normalization, instantiation points or α constants
are involved.
"""

from __future__ import annotations

from fractions import Fraction
from itertools import product

from ..core import (
    AtomicConstraint,
    BaseR,
    ClauseSet,
    Eq,
    FreeConst,
    Numeric,
    SkolemBase,
    Var,
    stats,
)
from ..frontend import purify
from ..frontend.raw import App, RawConstraint

MAX_BASE_CONSTS = 3
MAX_FREE_CONSTS = 2
MAX_ARITY = 2


class OracleBoundsError(ValueError):
    pass


def grid(values) -> list[Fraction]:
    """Integers from min-1 to max+1 plus the midpoints between neighbours."""
    if not values:
        return [Fraction(0)]
    lo, hi = int(min(values)) - 1, int(max(values)) + 1
    points = [Fraction(i) for i in range(lo, hi + 1)]
    points += [Fraction(2 * i + 1, 2) for i in range(lo, hi)]
    return sorted(points)


def _labelings(items):
    """Each partition of items once, as a map item -> block label (least item)."""
    items = list(items)
    seen = set()
    for labels in product(range(len(items)), repeat=len(items)):
        # canonical form: each item points at the first item with the same label
        canon = tuple(items[labels.index(lab)] for lab in labels)
        if canon not in seen:
            seen.add(canon)
            yield dict(zip(items, canon))


def _check_bounds(cs: ClauseSet):
    st = stats(cs)
    for clause in cs.clauses:
        for k in clause.constraints:
            if isinstance(k, RawConstraint):
                raise OracleBoundsError(f"constraint {k} is not a simple bound")
        for a in clause.atoms:
            if any(isinstance(t, App) for t in a.args):
                raise OracleBoundsError(f"function term in {a}")
    if st.αconsts or any(isinstance(c, SkolemBase) for c in st.bconsts):
        raise OracleBoundsError("only integer constants are supported")
    if any(c.value.denominator != 1 for c in st.bconsts):
        raise OracleBoundsError("only integer constants are supported")
    if len(st.bconsts) > MAX_BASE_CONSTS:
        raise OracleBoundsError(f"more than {MAX_BASE_CONSTS} base constants")
    if len(st.fconsts) > MAX_FREE_CONSTS:
        raise OracleBoundsError(f"more than {MAX_FREE_CONSTS} free constants")
    if any(len(s) > MAX_ARITY for s in cs.signature.predicates.values()):
        raise OracleBoundsError(f"predicate of arity above {MAX_ARITY}")


def _assign(clauses: list[frozenset], lit) -> list[frozenset]:
    atom, sign = lit
    neg = (atom, not sign)
    return [c - {neg} for c in clauses if lit not in c]


def _sat(clauses: list[frozenset]) -> bool:
    """Splitting search with unit and pure-literal rules over (atom, sign) literals."""
    stack = [clauses]
    while stack:
        cur = stack.pop()
        while True:
            if not cur:
                return True
            if frozenset() in cur:
                break
            unit = next((c for c in cur if len(c) == 1), None)
            if unit is not None:
                cur = _assign(cur, next(iter(unit)))
                continue
            lits = {lit for c in cur for lit in c}
            pure = next((lit for lit in sorted(lits, key=repr) if (lit[0], not lit[1]) not in lits), None)
            if pure is not None:
                cur = _assign(cur, pure)
                continue
            atom, _ = min(lits, key=repr)
            stack.append(_assign(cur, (atom, False)))
            stack.append(_assign(cur, (atom, True)))
            break
    return False


def oracle_solve(cs: ClauseSet) -> str:
    """'sat' or 'unsat' for a problem within the size bounds."""
    cs = purify(cs)
    _check_bounds(cs)
    st = stats(cs)
    points = grid([c.value for c in st.bconsts])
    fconsts = sorted(st.fconsts, key=lambda c: c.name) or [FreeConst("_d0")]
    for label in _labelings(fconsts):
        reps = sorted(set(label.values()), key=lambda c: c.name)
        ground = []
        for clause in cs.clauses:
            xs = [v for v in clause.variables() if v.sort is BaseR]
            us = [v for v in clause.variables() if v.sort is not BaseR]
            for combo in product(points, repeat=len(xs)):
                beta = dict(zip(xs, combo))
                if not all(_holds(k, beta) for k in clause.constraints):
                    continue
                for fcombo in product(reps, repeat=len(us)):
                    env = {**beta, **dict(zip(us, fcombo))}
                    lits, satisfied = set(), False
                    for sign, atoms in ((False, clause.antecedent), (True, clause.succedent)):
                        for a in atoms:
                            if isinstance(a, Eq):
                                same = _free(a.lhs, env, label) == _free(a.rhs, env, label)
                                satisfied |= same == sign
                                continue
                            key = (a.symbol, tuple(_arg(t, env, label) for t in a.args))
                            lits.add((key, sign))
                    if not satisfied:
                        ground.append(frozenset(lits))
        if _sat(ground):
            return "sat"
    return "unsat"


def _value(t, beta):
    if isinstance(t, Var):
        return beta[t]
    if isinstance(t, Numeric):
        return t.value
    raise OracleBoundsError(f"unsupported base term {t}")


def _holds(k: AtomicConstraint, beta) -> bool:
    return k.rel.holds(_value(k.lhs, beta), _value(k.rhs, beta))


def _free(t, env, label):
    return env[t] if isinstance(t, Var) else label[t]


def _arg(t, env, label):
    if isinstance(t, Var):
        return env[t]
    if isinstance(t, FreeConst):
        return label[t]
    raise OracleBoundsError(f"unexpected argument {t}")


__all__ = ["grid", "oracle_solve", "OracleBoundsError"]

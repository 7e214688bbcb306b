"""Order types of base constants and their realization as rationals."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Iterator

from ..core import AtomicConstraint, Clause, Numeric, Var, const_key


@dataclass(frozen=True)
class Arrangement:
    """Groups of equal constants, listed in strictly increasing order."""

    groups: tuple

    def __post_init__(self):
        object.__setattr__(
            self, "groups", tuple(tuple(sorted(g, key=const_key)) for g in self.groups)
        )

    def rank(self) -> dict:
        return {c: i for i, g in enumerate(self.groups) for c in g}

    def __str__(self) -> str:
        parts = []
        for g in self.groups:
            parts.append(" = ".join(map(str, g)))
        return " < ".join(parts)


def anchor(group) -> Fraction | None:
    for c in group:
        if isinstance(c, Numeric):
            return c.value
    return None


def eval_constraint(con: AtomicConstraint, rank: dict, beta: dict | None = None) -> bool:
    lhs = con.lhs
    if isinstance(lhs, Var):
        lhs = beta[lhs]
    return con.rel.holds(rank[lhs], rank[con.rhs])


def _violated(clause: Clause, rank: dict) -> bool:
    return all(eval_constraint(k, rank) for k in clause.constraints)


def enumerate_arrangements(base_consts: Iterable, axioms: Iterable[Clause] = ()) -> Iterator[Arrangement]:
    """Every total preorder extending the numeric order that no constraint-only clause rules out.

    Non-numeric constants are inserted one at a time, each either into an
    existing group or into a new group at any gap; a clause is checked as
    soon as all of its constants have been placed.
    """
    consts = sorted(set(base_consts), key=const_key)
    numerics = [c for c in consts if isinstance(c, Numeric)]
    others = [c for c in consts if not isinstance(c, Numeric)]
    order = {c: i for i, c in enumerate(others)}
    checks: list[list[Clause]] = [[] for _ in range(len(others) + 1)]
    known = set(consts)
    for clause in axioms:
        if clause.has_free_part() or any(isinstance(k.lhs, Var) for k in clause.constraints):
            continue
        mentioned = [t for k in clause.constraints for t in (k.lhs, k.rhs)]
        if not all(t in known for t in mentioned):
            raise ValueError(f"clause {clause} mentions a constant outside the arrangement")
        last = max((order[t] + 1 for t in mentioned if t in order), default=0)
        checks[last].append(clause)

    groups: list[list] = [[c] for c in numerics]
    rank = {c: i for i, c in enumerate(numerics)}
    if any(_violated(c, rank) for c in checks[0]):
        return

    def place(k: int) -> Iterator[Arrangement]:
        if k == len(others):
            yield Arrangement(tuple(tuple(g) for g in groups))
            return
        c = others[k]
        for slot in range(2 * len(groups) + 1):
            j = slot // 2
            if slot % 2 == 0:
                groups.insert(j, [c])
            else:
                groups[j].append(c)
            rank = {d: i for i, g in enumerate(groups) for d in g}
            if not any(_violated(cl, rank) for cl in checks[k + 1]):
                yield from place(k + 1)
            if slot % 2 == 0:
                del groups[j]
            else:
                groups[j].pop()

    yield from place(0)


def realize(arr: Arrangement) -> dict:
    """Rational value for every constant, respecting the arrangement.

    Anchored groups keep their numeric value.  Groups between two anchors
    take successive midpoints towards the upper anchor; groups below the
    least anchor step down by 1, above the greatest step up by 1; with no
    anchor at all the groups get 0, 1, 2, ...
    """
    n = len(arr.groups)
    values: list[Fraction | None] = [anchor(g) for g in arr.groups]
    anchored = [i for i, v in enumerate(values) if v is not None]
    if not anchored:
        values = [Fraction(i) for i in range(n)]
    else:
        lo, hi = anchored[0], anchored[-1]
        for k, i in enumerate(range(lo - 1, -1, -1), start=1):
            values[i] = values[lo] - k
        for k, i in enumerate(range(hi + 1, n), start=1):
            values[i] = values[hi] + k
        for a, b in zip(anchored, anchored[1:]):
            prev = values[a]
            for i in range(a + 1, b):
                prev = (prev + values[b]) / 2
                values[i] = prev
    return {c: values[i] for i, g in enumerate(arr.groups) for c in g}

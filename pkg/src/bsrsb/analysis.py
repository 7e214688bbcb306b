"""Argument-position classes, instantiation points and α axioms."""

from __future__ import annotations

from typing import Iterable

from .core import (
    AlphaEps,
    AlphaMinf,
    BaseR,
    Clause,
    ClauseSet,
    Pred,
    Rel,
    Var,
    const_key,
    is_alpha,
    is_plain_base_const,
    make_constraint,
    stats,
)
from .normalize import simplify_clause

Position = tuple  # (predicate, 1-based index)


class UnionFind:
    def __init__(self, items: Iterable = ()):
        self.parent = {}
        for x in items:
            self.add(x)

    def add(self, x):
        self.parent.setdefault(x, x)

    def find(self, x):
        root = x
        while self.parent[root] != root:
            root = self.parent[root]
        while self.parent[x] != root:
            self.parent[x], x = root, self.parent[x]
        return root

    def union(self, a, b):
        ra, rb = self.find(a), self.find(b)
        if ra != rb:
            # the smaller element becomes the root so representatives are canonical
            if rb < ra:
                ra, rb = rb, ra
            self.parent[rb] = ra

    def groups(self) -> dict:
        out: dict = {}
        for x in sorted(self.parent):
            out.setdefault(self.find(x), []).append(x)
        return out


class ApClassPartition:
    """Equivalence classes of predicate argument positions linked by shared variables."""

    def __init__(self, cs: ClauseSet):
        self.signature = cs.signature
        self.uf = UnionFind(
            (p, i + 1) for p in sorted(cs.signature.predicates) for i in range(cs.signature.arity(p))
        )
        self._var_pos: dict[tuple[int, Var], Position] = {}
        for ci, clause in enumerate(cs.clauses):
            first: dict[Var, Position] = {}
            for atom in clause.atoms:
                if not isinstance(atom, Pred):
                    continue
                for i, arg in enumerate(atom.args):
                    if isinstance(arg, Var):
                        pos = (atom.symbol, i + 1)
                        self.uf.add(pos)
                        if arg in first:
                            self.uf.union(first[arg], pos)
                        else:
                            first[arg] = pos
            for v, pos in first.items():
                self._var_pos[(ci, v)] = pos

    def class_of(self, pos: Position) -> Position:
        """Least position of the class, which serves as its name."""
        return self.uf.find(pos)

    def class_of_var(self, clause_index: int, var: Var) -> Position | None:
        pos = self._var_pos.get((clause_index, var))
        return None if pos is None else self.class_of(pos)

    def classes(self) -> dict[Position, list[Position]]:
        return self.uf.groups()

    def sort_of(self, cls: Position):
        p, i = cls
        return self.signature.predicates[p][i - 1]

    def base_classes(self) -> list[Position]:
        return [c for c in self.classes() if self.sort_of(c) is BaseR]

    def __eq__(self, other) -> bool:
        if not isinstance(other, ApClassPartition):
            return NotImplemented
        return self.classes() == other.classes()

    def __repr__(self) -> str:
        return f"ApClassPartition({self.classes()})"


def ap_classes(cs: ClauseSet) -> ApClassPartition:
    return ApClassPartition(cs)


def constraint_point(con):
    """Instantiation point contributed by a constraint on a variable, or None."""
    d = con.rhs
    if is_plain_base_const(d):
        if con.rel in (Rel.EQ, Rel.GE):
            return d
        if con.rel in (Rel.NE, Rel.GT):
            return AlphaEps(d)
        return None
    if isinstance(d, AlphaEps) and con.rel is Rel.EQ:
        return d
    return None


def inst_points(cs: ClauseSet, classes: ApClassPartition) -> dict[Position, list]:
    """Instantiation points of every base-sort class, in canonical order."""
    points = {c: {AlphaMinf()} for c in classes.base_classes()}
    for ci, clause in enumerate(cs.clauses):
        for con in clause.constraints:
            if not isinstance(con.lhs, Var):
                continue
            cls = classes.class_of_var(ci, con.lhs)
            p = constraint_point(con)
            if cls is not None and p is not None:
                points[cls].add(p)
    return {c: sorted(ps, key=const_key) for c, ps in points.items()}


def _clause(*constraints) -> Clause:
    return Clause(tuple(constraints), (), (), id="axiom")


def alpha_axioms(points: Iterable, consts: Iterable) -> ClauseSet:
    """Constraint-only clauses pinning down the meaning of α constants."""
    points = sorted({p for p in points if is_alpha(p)}, key=const_key)
    consts = sorted({c for c in consts if is_plain_base_const(c)}, key=const_key)
    out = []
    for a in points:
        if isinstance(a, AlphaMinf):
            out.extend(_clause(make_constraint(a, Rel.GE, c)) for c in consts)
            continue
        d = a.inner
        out.append(_clause(make_constraint(a, Rel.LE, d)))
        for c in consts:
            if c == d:
                continue
            out.append(_clause(make_constraint(d, Rel.LT, c), make_constraint(a, Rel.GE, c)))
        for c in consts:
            if c == d:
                continue
            out.append(_clause(make_constraint(d, Rel.EQ, c), make_constraint(a, Rel.NE, AlphaEps(c))))
    return ClauseSet(clauses=out)


def closed_axioms(points: Iterable, consts: Iterable) -> ClauseSet:
    """Simplified α axioms, closed under the α constants they mention.

    An axiom ``d = c -> @eps(d) = @eps(c)`` on symbolic constants can
    introduce ``@eps(c)``; its own axioms are then added as well.
    """
    consts = {c for c in consts if is_plain_base_const(c)}
    done: set = set()
    todo = {p for p in points if is_alpha(p)}
    out, seen = [], set()
    while todo:
        done |= todo
        for ax in alpha_axioms(todo, consts).clauses:
            ax = simplify_clause(ax)
            if ax is not None and ax not in seen:
                seen.add(ax)
                out.append(ax)
        todo = set(stats(ClauseSet(clauses=out)).αconsts) - done
    return ClauseSet(clauses=out)

"""Move base constants out of predicate arguments into constraints."""

from __future__ import annotations

from ..core import BaseR, Clause, ClauseSet, PURIFIED, Pred, Rel, Var, is_base_const, make_constraint


def _fresh_names(clause: Clause, taken: set[str]):
    used = taken | {t.name for t in clause.terms() if isinstance(t, Var)}
    n = 0
    while True:
        name = f"x{n}"
        n += 1
        if name not in used:
            used.add(name)
            yield name


def purify_clause(clause: Clause, taken: set[str] = frozenset()) -> Clause:
    if not any(isinstance(a, Pred) and any(is_base_const(t) for t in a.args) for a in clause.atoms):
        return clause
    names = _fresh_names(clause, set(taken))
    extra = []

    def pure(atom):
        if not isinstance(atom, Pred):
            return atom
        args = []
        for t in atom.args:
            if is_base_const(t):
                v = Var(next(names), BaseR)
                extra.append(make_constraint(v, Rel.EQ, t))
                t = v
            args.append(t)
        return Pred(atom.symbol, tuple(args))

    ante = tuple(pure(a) for a in clause.antecedent)
    succ = tuple(pure(a) for a in clause.succedent)
    return Clause(clause.constraints + tuple(extra), ante, succ, clause.id)


def purify(cs: ClauseSet) -> ClauseSet:
    """One fresh variable per base-constant occurrence at a predicate argument."""
    taken = cs.signature.constant_names() | set(cs.signature.predicates)
    return cs.replace(clauses=[purify_clause(c, taken) for c in cs.clauses], flags=cs.flags | {PURIFIED})

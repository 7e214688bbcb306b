"""Instantiation of base and free variables."""

from __future__ import annotations

import os
from itertools import product
from typing import Mapping

from .analysis import ApClassPartition, alpha_axioms, ap_classes, closed_axioms, inst_points
from .core import (
    ESSENTIALLY_GROUND,
    BaseR,
    Clause,
    ClauseSet,
    FreeS,
    Rel,
    Var,
    clause_len,
    const_key,
    make_constraint,
    map_atom,
    stats,
)
from .normalize import dedup, rename_apart, simplify_clause

MAX_LEN_ENV = "BSRSB_MAX_GROUND_LEN"


class GroundingTooLarge(RuntimeError):
    pass


def apply_subst(clause: Clause, sigma: Mapping[Var, object]) -> Clause:
    """Instance of a clause under a substitution of constants for variables.

    Base variables are substituted in the constraints and recorded as an
    extra constraint ``x = c``; free variables are replaced in the atoms.
    """
    base, free = {}, {}
    for v, c in sigma.items():
        if v.sort is not c.sort:
            raise TypeError(f"cannot bind {v} of sort {v.sort} to {c} of sort {c.sort}")
        (base if v.sort is BaseR else free)[v] = c
    if not sigma:
        return clause
    cons = [
        make_constraint(base[k.lhs], k.rel, k.rhs) if k.lhs in base else k for k in clause.constraints
    ]
    in_free_part = set(clause.free_part_variables())
    cons.extend(make_constraint(v, Rel.EQ, c) for v, c in base.items() if v in in_free_part)

    def sub(t):
        return free.get(t, t) if isinstance(t, Var) else t

    return Clause(
        tuple(cons),
        tuple(map_atom(a, sub) for a in clause.antecedent),
        tuple(map_atom(a, sub) for a in clause.succedent),
        clause.id,
    )


def bound_vars(clause: Clause) -> set[Var]:
    """Base variables already pinned by a constraint ``x = c``."""
    return {k.lhs for k in clause.constraints if isinstance(k.lhs, Var) and k.rel is Rel.EQ}


def pending_base_vars(clause: Clause) -> list[Var]:
    bound = bound_vars(clause)
    return [v for v in clause.variables() if v.sort is BaseR and v not in bound]


def free_vars(clause: Clause) -> list[Var]:
    return [v for v in clause.variables() if v.sort is FreeS]


def max_ground_len() -> int | None:
    raw = os.environ.get(MAX_LEN_ENV)
    return int(raw) if raw else None


def _points_for(cs, classes, points, ci, x):
    cls = classes.class_of_var(ci, x)
    if cls is None:
        raise ValueError(f"base variable {x} of clause {cs.clauses[ci].id} is not at a predicate argument")
    return points[cls]


def _instances(cs: ClauseSet, base: bool, free: bool, simplify: bool = True):
    classes = ap_classes(cs)
    points = inst_points(cs, classes)
    fconsts = sorted(stats(cs).fconsts, key=const_key)
    used_points: set = set()
    cap = max_ground_len()
    total = 0
    out = []
    for ci, clause in enumerate(cs.clauses):
        xs = pending_base_vars(clause) if base else []
        us = free_vars(clause) if free else []
        if us and not fconsts:
            raise ValueError("free-sort variables but no free constants to instantiate them with")
        choices = [_points_for(cs, classes, points, ci, x) for x in xs] + [fconsts] * len(us)
        for ps in choices[: len(xs)]:
            used_points.update(ps)
        for combo in product(*choices):
            inst = apply_subst(clause, dict(zip(xs + us, combo)))
            if simplify:
                inst = simplify_clause(inst)
                if inst is None:
                    continue
            total += clause_len(inst)
            if cap is not None and total > cap:
                raise GroundingTooLarge(
                    f"grounding exceeds {MAX_LEN_ENV}={cap}; the worst case is 3*len(N')*len(N)^len(N)"
                )
            out.append(inst)
    return out, used_points


def _axioms_for(cs: ClauseSet, points) -> ClauseSet:
    st = stats(cs)
    return closed_axioms(set(points) | set(st.αconsts), st.bconsts)


def instantiate_base(cs: ClauseSet) -> ClauseSet:
    """Replace base variables by their instantiation points and add the α axioms."""
    clauses, used = _instances(cs, base=True, free=False)
    ax = _axioms_for(cs, used)
    present = {c.with_id("") for c in clauses}
    clauses += [a for a in ax.clauses if a.with_id("") not in present]
    return rename_apart(cs.replace(clauses=dedup(clauses)))


def instantiate_free(cs: ClauseSet) -> ClauseSet:
    """Replace free variables by all free constants."""
    clauses, _ = _instances(cs, base=False, free=True)
    return rename_apart(cs.replace(clauses=dedup(clauses)))


def ground_all(cs: ClauseSet) -> tuple[ClauseSet, ClauseSet]:
    """All-at-once instantiation; returns the ground set and its α axioms."""
    clauses, used = _instances(cs, base=True, free=True)
    clauses = dedup(clauses)
    ground = rename_apart(cs.replace(clauses=clauses))
    present = {c.with_id("") for c in clauses}
    ax = _axioms_for(cs, used)
    ax = ax.replace(clauses=[a for a in ax.clauses if a.with_id("") not in present])
    ground = ground.replace(flags=ground.flags | {ESSENTIALLY_GROUND})
    return ground, ax


def is_essentially_ground(cs: ClauseSet) -> bool:
    for clause in cs.clauses:
        if free_vars(clause) or pending_base_vars(clause):
            return False
    return True


# -- one variable at a time ----------------------------------------------------------


def instantiate_var(cs: ClauseSet, clause_index: int, x: Var) -> ClauseSet:
    """Replace one clause by its instances over the points of ``x``'s class.

    No simplification is applied, so the result can be compared with the
    input for the invariants that iterative instantiation must preserve.
    """
    classes = ap_classes(cs)
    pts = _points_for(cs, classes, inst_points(cs, classes), clause_index, x)
    clause = cs.clauses[clause_index]
    instances = [apply_subst(clause, {x: c}) for c in pts]
    clauses = list(cs.clauses[:clause_index]) + instances + list(cs.clauses[clause_index + 1:])
    present = set(clauses)
    bc = stats(cs).bconsts
    for ax in alpha_axioms(pts, bc).clauses:
        if ax not in present:
            present.add(ax)
            clauses.append(ax)
    return rename_apart(cs.replace(clauses=clauses))


def iterative_steps(cs: ClauseSet):
    """Yield the clause set after each single-variable instantiation step."""
    while True:
        target = next(
            ((ci, v) for ci, c in enumerate(cs.clauses) for v in pending_base_vars(c)), None
        )
        if target is None:
            return
        cs = instantiate_var(cs, *target)
        yield cs


__all__ = [
    "ApClassPartition",
    "GroundingTooLarge",
    "apply_subst",
    "ground_all",
    "instantiate_base",
    "instantiate_free",
    "instantiate_var",
    "is_essentially_ground",
    "iterative_steps",
]

"""Complete DPLL search for the propositional residue of a ground problem.

Variables are positive integers, literals are signed integers.  Branching
picks the smallest unassigned variable of an open clause and tries True
first; variables never branched on end up False.  The first model found
is therefore a deterministic function of the clause list.
"""

from __future__ import annotations

from typing import Sequence


def _propagate(clauses, assign: dict) -> bool:
    """Unit propagation to fixpoint; False on conflict."""
    changed = True
    while changed:
        changed = False
        for clause in clauses:
            unassigned = None
            count = 0
            satisfied = False
            for lit in clause:
                val = assign.get(abs(lit))
                if val is None:
                    count += 1
                    unassigned = lit
                    if count > 1:
                        break
                elif val == (lit > 0):
                    satisfied = True
                    break
            if satisfied or count > 1:
                continue
            if count == 0:
                return False
            assign[abs(unassigned)] = unassigned > 0
            changed = True
    return True


def _branch_var(clauses, assign: dict) -> int | None:
    """Smallest unassigned variable of a clause that is not yet satisfied."""
    best = None
    for clause in clauses:
        if any(assign.get(abs(lit)) == (lit > 0) for lit in clause):
            continue
        for lit in clause:
            v = abs(lit)
            if v not in assign and (best is None or v < best):
                best = v
    return best


def dpll(clauses: Sequence[Sequence[int]], num_vars: int) -> dict[int, bool] | None:
    """A satisfying total assignment, or None if the clauses are unsatisfiable."""
    clauses = [tuple(c) for c in clauses]
    if any(not c for c in clauses):
        return None

    stack: list[dict] = [{}]
    while stack:
        assign = stack.pop()
        if not _propagate(clauses, assign):
            continue
        var = _branch_var(clauses, assign)
        if var is None:
            return {v: assign.get(v, False) for v in range(1, num_vars + 1)}
        stack.append({**assign, var: False})
        stack.append({**assign, var: True})
    return None

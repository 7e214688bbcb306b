"""Normal form: eliminate base variables that occur only in constraints."""

from __future__ import annotations

from .core import (
    NORMAL_FORM,
    RENAMED_APART,
    AtomicConstraint,
    Clause,
    ClauseSet,
    Numeric,
    Rel,
    Var,
    make_constraint,
    rename_clause,
)

_LOWER = (Rel.GT, Rel.GE)
_UPPER = (Rel.LT, Rel.LE)


def fm_eliminate(constraints, x: Var) -> tuple:
    """Fourier-Motzkin elimination of ``x`` from a conjunction of simple bounds."""
    rest, lower, upper = [], [], []
    for con in constraints:
        if con.lhs != x:
            rest.append(con)
        elif con.rel in _LOWER:
            lower.append(con)
        elif con.rel in _UPPER:
            upper.append(con)
        else:
            raise ValueError(f"cannot eliminate {x}: constraint {con} must be split or substituted first")
    for lo in lower:
        for up in upper:
            strict = lo.rel is Rel.GT or up.rel is Rel.LT
            rest.append(make_constraint(lo.rhs, Rel.LT if strict else Rel.LE, up.rhs))
    return tuple(rest)


def ground_truth(con: AtomicConstraint) -> bool | None:
    """Truth value of a constraint that can be decided without a model."""
    if isinstance(con.lhs, Var):
        return None
    if con.lhs == con.rhs:
        return con.rel in (Rel.EQ, Rel.LE, Rel.GE)
    if isinstance(con.lhs, Numeric) and isinstance(con.rhs, Numeric):
        return con.rel.holds(con.lhs.value, con.rhs.value)
    return None


def simplify_clause(clause: Clause) -> Clause | None:
    """Drop true ground constraints; None if some constraint is false."""
    kept = []
    for con in clause.constraints:
        truth = ground_truth(con)
        if truth is False:
            return None
        if truth is None:
            kept.append(con)
    if len(kept) == len(clause.constraints):
        return clause
    return Clause(tuple(kept), clause.antecedent, clause.succedent, clause.id)


def simplify(cs: ClauseSet) -> ClauseSet:
    return cs.replace(clauses=[c for c in map(simplify_clause, cs.clauses) if c is not None])


def _substitute(constraints, binding: AtomicConstraint) -> tuple:
    """Apply ``[x/c]`` for the binding ``x = c``; the binding itself becomes ``c = c`` and is dropped."""
    x, c = binding.lhs, binding.rhs
    out = []
    for k in constraints:
        if k is binding:
            continue
        out.append(make_constraint(c, k.rel, k.rhs) if k.lhs == x else k)
    return tuple(out)


def _hidden_vars(clause: Clause) -> list[Var]:
    free = set(clause.free_part_variables())
    return [v for v in clause.variables() if v not in free]


def normalize_clause(clause: Clause) -> list[Clause]:
    hidden = _hidden_vars(clause)
    if not hidden:
        return [clause]
    cons = clause.constraints
    # substitute x = c for every hidden variable that has one
    for x in hidden:
        binding = next((k for k in cons if k.lhs == x and k.rel is Rel.EQ), None)
        if binding is not None:
            cons = _substitute(cons, binding)
    # split disequations, then eliminate what is left
    work, done = [cons], []
    while work:
        cur = work.pop(0)
        ne = next((k for k in cur if k.lhs in hidden and k.rel is Rel.NE), None)
        if ne is None:
            done.append(cur)
            continue
        i = cur.index(ne)
        rest = cur[:i] + cur[i + 1:]
        work.append(rest + (AtomicConstraint(ne.lhs, Rel.LT, ne.rhs),))
        work.append(rest + (AtomicConstraint(ne.lhs, Rel.GT, ne.rhs),))
    out = []
    for cur in done:
        for x in hidden:
            cur = fm_eliminate(cur, x)
        out.append(Clause(cur, clause.antecedent, clause.succedent, clause.id))
    return out


def canonical_key(clause: Clause) -> Clause:
    """The clause with variables renamed by first occurrence, for deduplication."""
    renaming = {v: Var(f"_v{i}", v.sort) for i, v in enumerate(clause.variables())}
    return rename_clause(clause, renaming).with_id("")


def dedup(clauses) -> list[Clause]:
    seen, out = set(), []
    for c in clauses:
        key = canonical_key(c)
        if key not in seen:
            seen.add(key)
            out.append(c)
    return out


def rename_apart(cs: ClauseSet) -> ClauseSet:
    """Make clauses pairwise variable-disjoint, keeping names where possible."""
    used = cs.signature.constant_names() | set(cs.signature.predicates)
    clauses = []
    for clause in cs.clauses:
        renaming = {}
        mine = {v.name for v in clause.variables()}
        for v in clause.variables():
            name = v.name
            if name in used:
                n = 1
                while f"{v.name}_{n}" in used or f"{v.name}_{n}" in mine:
                    n += 1
                name = f"{v.name}_{n}"
                renaming[v] = Var(name, v.sort)
            used.add(name)
        clauses.append(rename_clause(clause, renaming) if renaming else clause)
    return cs.replace(clauses=clauses, flags=cs.flags | {RENAMED_APART})


def normalize(cs: ClauseSet) -> ClauseSet:
    clauses = []
    for clause in cs.clauses:
        for c in normalize_clause(clause):
            c = simplify_clause(c)
            if c is not None:
                clauses.append(c)
    out = rename_apart(cs.replace(clauses=dedup(clauses)))
    return out.replace(flags=out.flags | {NORMAL_FORM})


def is_normal_form(cs: ClauseSet) -> tuple[bool, list[str]]:
    diags = []
    owner: dict[str, int] = {}
    for i, clause in enumerate(cs.clauses):
        where = f"clause {clause.id or i + 1}"
        for v in _hidden_vars(clause):
            diags.append(f"{where}: base variable {v} occurs only in constraints")
        for v in clause.variables():
            j = owner.setdefault(v.name, i)
            if j != i:
                diags.append(f"{where}: variable {v} also occurs in clause {cs.clauses[j].id or j + 1}")
    return not diags, diags

"""Decision procedure for essentially ground sets and the full pipeline."""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from itertools import islice

from ..core import ClauseSet, Eq, FreeConst, Pred, Var, const_key, stats
from ..frontend import basify, check_fragment, purify
from ..frontend.fragment import BsrGroundLA, OutOfFragment
from ..frontend.parser import augment_problem
from ..ground import ground_all
from ..normalize import normalize
from .arrangement import Arrangement, enumerate_arrangements, eval_constraint, realize
from .model import FreeCongruence, HierarchicModel, clause_assignment, verify_model
from .partitions import set_partitions
from .propositional import dpll


class FragmentError(ValueError):
    pass


class SoundnessError(AssertionError):
    """A model produced by the search failed independent verification."""


@dataclass(frozen=True)
class Sat:
    model: HierarchicModel
    ground: ClauseSet | None = None
    axioms: ClauseSet | None = None

    def __str__(self) -> str:
        return "sat"


@dataclass(frozen=True)
class Unsat:
    def __str__(self) -> str:
        return "unsat"


@dataclass(frozen=True)
class Unknown:
    reason: str

    def __str__(self) -> str:
        return "unknown"


class _Budget(Exception):
    pass


def _residue(clauses, rank: dict):
    """Free parts of the clauses whose constraints all hold, atoms grounded to ranks.

    Base arguments become group indices, so atoms over equal constants coincide.
    """
    out = []
    for clause in clauses:
        beta = clause_assignment(clause)
        if not all(eval_constraint(k, rank, beta) for k in clause.constraints):
            continue

        def ground(atom):
            if isinstance(atom, Eq):
                return atom
            args = []
            for a in atom.args:
                if isinstance(a, Var):
                    a = beta[a]
                args.append(a if isinstance(a, FreeConst) else ("r", rank[a]))
            return (atom.symbol, tuple(args))

        out.append((tuple(map(ground, clause.antecedent)), tuple(map(ground, clause.succedent))))
    return out


def _atom_text(atom) -> str:
    sym, args = atom
    return f"{sym}({', '.join(f'#{a[1]}' if isinstance(a, tuple) else str(a) for a in args)})"


def _propositional(residue, cong: FreeCongruence):
    """Clauses over integer variables, or None if some clause is already false."""
    clauses_atoms = []
    for ante, succ in residue:
        lits, satisfied = [], False
        for pos, atoms in ((False, ante), (True, succ)):
            for atom in atoms:
                if isinstance(atom, Eq):
                    if (cong.rep(atom.lhs) == cong.rep(atom.rhs)) == pos:
                        satisfied = True
                    continue
                sym, args = atom
                key = (sym, tuple(cong.rep(a) if isinstance(a, FreeConst) else a for a in args))
                lits.append((key, pos))
        if satisfied:
            continue
        if not lits:
            return None
        clauses_atoms.append(lits)
    atoms = sorted({k for c in clauses_atoms for k, _ in c}, key=lambda k: (_atom_text(k), k[0]))
    index = {a: i + 1 for i, a in enumerate(atoms)}
    return [[index[k] if pos else -index[k] for k, pos in c] for c in clauses_atoms], atoms


def _try_arrangement(arr: Arrangement, clauses, fconsts, max_partitions):
    rank = arr.rank()
    residue = _residue(clauses, rank)
    for n, blocks in enumerate(set_partitions(fconsts)):
        if max_partitions is not None and n >= max_partitions:
            raise _Budget(f"budget: more than {max_partitions} free congruences")
        cong = FreeCongruence(tuple(tuple(b) for b in blocks))
        prop = _propositional(residue, cong)
        if prop is None:
            continue
        cnf, atoms = prop
        assignment = dpll(cnf, len(atoms))
        if assignment is None:
            continue
        values = realize(arr)
        by_rank = {rank[c]: v for c, v in values.items()}
        ext: dict[str, set] = {}
        for i, (sym, args) in enumerate(atoms, start=1):
            if assignment[i]:
                ext.setdefault(sym, set()).add(
                    tuple(by_rank[a[1]] if isinstance(a, tuple) else a for a in args)
                )
        base = {c: v for c, v in values.items()}
        return HierarchicModel(base, cong, {p: frozenset(ts) for p, ts in ext.items()})
    return None


def decide_ground(
    ground: ClauseSet,
    axioms: ClauseSet | None = None,
    *,
    max_arrangements: int | None = None,
    max_partitions: int | None = None,
    threads: int = 1,
):
    """Sat(model) / Unsat / Unknown for an essentially ground set plus axioms."""
    clauses = list(ground.clauses) + (list(axioms.clauses) if axioms is not None else [])
    full = ClauseSet(ground.signature, clauses)
    st = stats(full)
    consts = sorted(st.bconsts | st.αconsts, key=const_key)
    fconsts = sorted(st.fconsts, key=const_key)
    preds = {a.symbol for c in clauses for a in c.atoms if isinstance(a, Pred)} | set(
        ground.signature.predicates
    )
    arrangements = enumerate_arrangements(consts, [c for c in clauses if not c.has_free_part()])
    if max_arrangements is not None:
        arrangements = _capped(arrangements, max_arrangements)
    try:
        if threads > 1:
            model = _first_parallel(arrangements, clauses, fconsts, max_partitions, threads)
        else:
            model = next(
                (m for arr in arrangements if (m := _try_arrangement(arr, clauses, fconsts, max_partitions))),
                None,
            )
    except _Budget as e:
        return Unknown(str(e))
    if model is None:
        return Unsat()
    model = HierarchicModel(
        model.base_values, model.congruence, {p: model.extensions.get(p, frozenset()) for p in sorted(preds)}
    )
    ok, failing = verify_model(clauses, model)
    if not ok:
        raise SoundnessError(f"constructed model violates {failing}")
    return Sat(model, ground, axioms)


def _capped(it, cap: int):
    for n, x in enumerate(it):
        if n >= cap:
            raise _Budget(f"budget: more than {cap} arrangements")
        yield x


def _first_parallel(arrangements, clauses, fconsts, max_partitions, threads: int):
    """Explore arrangements in ordered batches; the earliest success wins."""
    with ThreadPoolExecutor(max_workers=threads) as pool:
        while True:
            batch = list(islice(arrangements, threads * 4))
            if not batch:
                return None
            results = pool.map(lambda a: _try_arrangement(a, clauses, fconsts, max_partitions), batch)
            for m in results:
                if m is not None:
                    return m


def prepare(cs: ClauseSet) -> ClauseSet:
    """Fragment check, basification, purification and normal form."""
    frag = check_fragment(cs)
    if isinstance(frag, OutOfFragment):
        raise FragmentError(str(frag))
    if isinstance(frag, BsrGroundLA):
        cs = basify(cs)
    return normalize(purify(augment_problem(cs)))


def solve(
    cs: ClauseSet,
    *,
    max_arrangements: int | None = None,
    max_partitions: int | None = None,
    threads: int = 1,
):
    """Decide a parsed problem; a Sat result carries a verified model."""
    ground, axioms = ground_all(prepare(cs))
    return decide_ground(
        ground,
        axioms,
        max_arrangements=max_arrangements,
        max_partitions=max_partitions,
        threads=threads,
    )

"""Acceptance criteria, one test each; every test prints a single PASS/FAIL line."""

import subprocess
import sys
import time

import pytest

from bsrsb.analysis import ap_classes, inst_points
from bsrsb.core import AlphaEps, AlphaMinf, BaseR, FreeConst, Numeric, Var, stats
from bsrsb.decide import Sat, enumerate_arrangements, oracle_solve, prepare, solve, verify_model
from bsrsb.decide.model import FreeCongruence, HierarchicModel
from bsrsb.frontend import OutOfFragment, check_fragment, constraint_template, parse, parse_raw, purify
from bsrsb.ground import ground_all, instantiate_var, iterative_steps
from bsrsb.normalize import is_normal_form, normalize, normalize_clause, simplify_clause
from bsrsb.tcm import EncodingStyle, Halted, encode, parse_machine, simulate
from conftest import DATA, read_data
from randgen import random_problem

from fractions import Fraction

MINF = AlphaMinf()
RANDOM_SEEDS = range(250)
GOLDEN = ["intro.bsr", "shifted_bound.bsr", "unsat_pair.bsr"]


@pytest.fixture
def report(capsys):
    def emit(number: int, title: str, ok: bool, detail: str = ""):
        with capsys.disabled():
            status = "PASS" if ok else "FAIL"
            suffix = f" ({detail})" if detail else ""
            print(f"\ncriterion {number}: {status} {title}{suffix}")
        assert ok, f"criterion {number} failed: {detail}"

    return emit


def corpus():
    """Every problem text the acceptance suites run on."""
    return [read_data(n) for n in GOLDEN] + [random_problem(s) for s in RANDOM_SEEDS]


def _fold(clause) -> str:
    binds = {k.lhs: k.rhs for k in clause.constraints if isinstance(k.lhs, Var) and k.rel.value == "="}
    cons = [str(k) for k in clause.constraints if k.lhs not in binds]

    def atom(a):
        return f"{a.symbol}({', '.join(str(binds.get(t, t)) for t in a.args)})"

    return f"{', '.join(cons)} || {', '.join(map(atom, clause.antecedent))} -> {', '.join(map(atom, clause.succedent))}"


def test_criterion_1_intro(report):
    start = time.perf_counter()
    text = read_data("intro.bsr")
    ground, axioms = ground_all(prepare(parse(text)))
    folded = sorted(_fold(c) for c in ground.clauses)
    expected = sorted(
        [
            "@eps(5) != 5 || R(@minf) -> Q(c, @eps(5))",
            "@minf != 5 || R(@minf) -> Q(c, @minf)",
            "@minf < 7, @eps(5) <= 2 ||  -> Q(c, @eps(5)), R(@minf)",
            "@minf < 7, @minf <= 2 ||  -> Q(c, @minf), R(@minf)",
        ]
    )
    result = solve(parse(text))
    ok = folded == expected and isinstance(result, Sat)
    everything = list(ground.clauses) + list(axioms.clauses)
    if ok:
        v = result.model.base_values
        ok = verify_model(everything, result.model)[0] and v[MINF] < 2 and 5 < v[AlphaEps(Numeric(5))] < 7
    c = FreeConst("c")
    witness = HierarchicModel(
        {MINF: Fraction(1), AlphaEps(Numeric(5)): Fraction(6)},
        FreeCongruence(((c,),)),
        {"Q": frozenset({(c, Fraction(6)), (c, Fraction(1))}), "R": frozenset({(Fraction(1),)})},
    )
    ok = ok and verify_model(everything, witness) == (True, None)
    elapsed = time.perf_counter() - start
    report(1, "intro reproduction", ok and elapsed < 1, f"{elapsed:.3f}s")


def test_criterion_2_example(report):
    start = time.perf_counter()
    cs = prepare(parse(read_data("shifted_bound.bsr")))
    classes = ap_classes(cs)
    x = Var("x", BaseR)
    points = inst_points(cs, classes)[classes.class_of_var(0, x)]
    out = instantiate_var(cs, 0, x)
    instances = [str(c) for c in out.clauses if c.has_free_part()][:2]
    axioms = [a for a in (simplify_clause(c) for c in out.clauses if not c.has_free_part()) if a is not None]
    consts = stats(out.replace(clauses=axioms)).αconsts | {Numeric(2), Numeric(4)}
    orders = {str(a) for a in enumerate_arrangements(consts, axioms)}
    ok = (
        points == [MINF, AlphaEps(Numeric(2))]
        and instances
        == [
            "@minf > 2, z = 4, x = @minf || Q(x, z) -> T(x).",
            "@eps(2) > 2, z_1 = 4, x_1 = @eps(2) || Q(x_1, z_1) -> T(x_1).",
        ]
        and orders == {"@minf < 2 < @eps(2) < 4"}
    )
    elapsed = time.perf_counter() - start
    report(2, "worked instantiation example", ok and elapsed < 1, f"{elapsed:.3f}s")


def test_criterion_3_oracle_agreement(report):
    start = time.perf_counter()
    mismatches = []
    for seed in RANDOM_SEEDS:
        cs = parse(random_problem(seed))
        if str(solve(cs)) != oracle_solve(cs):
            mismatches.append(seed)
    elapsed = time.perf_counter() - start
    ok = not mismatches and elapsed < 300
    report(3, "oracle agreement", ok, f"{len(RANDOM_SEEDS)} problems, {len(mismatches)} mismatches, {elapsed:.1f}s")


def test_criterion_4_iteration_invariants(report):
    checked, steps, failures, seed = 0, 0, [], 0
    while checked < 60:
        cs = prepare(parse(random_problem(seed, max_clauses=3)))
        seed += 1
        classes, st = ap_classes(cs), stats(cs)
        points = inst_points(cs, classes)
        any_step = False
        for nxt in iterative_steps(cs):
            any_step = True
            steps += 1
            nc, ns = ap_classes(nxt), stats(nxt)
            if nc != classes or ns.bconsts != st.bconsts or ns.fconsts != st.fconsts or inst_points(nxt, nc) != points:
                failures.append(seed - 1)
                break
        checked += any_step
    report(4, "instantiation invariants", not failures, f"{checked} sets, {steps} steps, failing seeds {failures}")


def test_criterion_5_size_bound(report):
    worst = []
    for text in corpus():
        n = stats(parse(text)).len
        normal = prepare(parse(text))
        ground, _ = ground_all(normal)
        if stats(ground).len > 3 * stats(normal).len * n**n:
            worst.append(text)
    report(5, "grounding size bound", not worst, f"{len(corpus())} instances, {len(worst)} violations")


def test_criterion_6_normal_form(report):
    bad = []
    for text in corpus():
        cs = purify(parse(text))
        if not is_normal_form(normalize(cs))[0]:
            bad.append(text)
        for clause in cs.clauses:
            if any(len(out.constraints) > len(clause.constraints) ** 2 for out in normalize_clause(clause)):
                bad.append(text)
    report(6, "normal form contract", not bad, f"{len(bad)} violations")


def test_criterion_7_soundness_gate(report):
    sat, bad = 0, 0
    for text in corpus():
        result = solve(parse(text))
        if isinstance(result, Sat):
            sat += 1
            everything = list(result.ground.clauses) + list(result.axioms.clauses)
            bad += not verify_model(everything, result.model)[0]
    report(7, "every sat verdict carries a verified model", sat > 0 and bad == 0, f"{sat} sat, {bad} unverified")


SAMPLE = "start 1 init 2 0\n1: dec c1 goto 1 else 2\n2: halt\n"
TRANSFER = "start a init 3 1\na: dec c1 goto b else c\nb: inc c2 goto a\nc: dec c2 goto c else h\nh: halt\n"
ECONOMY = {
    EncodingStyle.DIFFERENCE: {Fraction(1)},
    EncodingStyle.QUOTIENT: {Fraction(2)},
    EncodingStyle.ADDITIVE: {Fraction(0), Fraction(1)},
}


def _numerals(t, acc):
    if isinstance(t, Numeric):
        acc.add(t.value)
    for a in getattr(t, "args", ()):
        _numerals(a, acc)


def test_criterion_8_encoders(report):
    problems = []
    for style in EncodingStyle:
        for text in (SAMPLE, TRANSFER):
            cs = parse_raw(encode(parse_machine(text), style))
            steps = [c for c in cs.clauses if c.antecedent and c.succedent]
            if any(constraint_template(k) != style.template for c in steps for k in c.constraints):
                problems.append(f"{style.value} shape")
            if not isinstance(check_fragment(cs), OutOfFragment):
                problems.append(f"{style.value} accepted")
            nums: set = set()
            for c in steps:
                for k in c.constraints:
                    _numerals(k.lhs, nums)
                    _numerals(k.rhs, nums)
            if style in ECONOMY and nums != ECONOMY[style]:
                problems.append(f"{style.value} constants {sorted(nums)}")
    if simulate(parse_machine(SAMPLE), 100) != Halted(3, ("2", 0, 0)):
        problems.append("simulation")
    report(8, "two-counter encoders", not problems, ", ".join(problems))


def test_criterion_9_determinism(report):
    differing = []
    for name in GOLDEN + ["garbage.bsr"]:
        runs = [
            subprocess.run(
                [sys.executable, "-m", "bsrsb", "check", str(DATA / name), "--model"], capture_output=True, check=False
            )
            for _ in range(2)
        ]
        if (runs[0].returncode, runs[0].stdout, runs[0].stderr) != (runs[1].returncode, runs[1].stdout, runs[1].stderr):
            differing.append(name)
    report(9, "byte-identical reruns", not differing, f"differing: {differing}" if differing else "4 golden files")

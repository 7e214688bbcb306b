import math
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from bsrsb.core import FreeConst, Numeric, Var
from bsrsb.frontend import OutOfFragment, check_fragment, constraint_template, parse_raw
from bsrsb.frontend.raw import RawConstraint, evaluate, map_term
from bsrsb.tcm import (
    Dec,
    EncodingStyle,
    Halt,
    Halted,
    Inc,
    MachineError,
    Running,
    TwoCounterMachine,
    encode,
    label_const,
    parse_machine,
    simulate,
    step,
)

SAMPLE = """\
start 1 init 2 0
1: dec c1 goto 1 else 2
2: halt
"""

# moves counter 1 into counter 2, then counts counter 2 back down
TRANSFER = """\
start a init 3 1
a: dec c1 goto b else c
b: inc c2 goto a
c: dec c2 goto c else h
h: halt
"""

LOOP = "start 1 init 0 0\n1: inc c1 goto 1\n"

STYLES = list(EncodingStyle)


# -- machines ----------------------------------------------------------------------------


def test_parse_sample():
    m = parse_machine(SAMPLE)
    assert m.start == "1" and m.initial == (2, 0)
    assert m.instructions == {"1": Dec(1, "1", "2"), "2": Halt()}


@pytest.mark.parametrize(
    "text, message",
    [
        ("1: halt\n", "missing start"),
        ("start 1 init 0 0\n1: inc c1 goto 9\n", "undefined label"),
        ("start 1 init 0 0\n1: halt\n1: halt\n", "defined twice"),
        ("start 1 init 0 0\nstart 1 init 0 0\n1: halt\n", "second start"),
        ("start 1 init 0 0\n1: jump 2\n", "cannot parse"),
        ("start 2 init 0 0\n1: halt\n", "not defined"),
    ],
)
def test_machine_errors(text, message):
    with pytest.raises(MachineError) as err:
        parse_machine(text)
    assert message in str(err.value)


def test_simulate_sample_halts_in_three():
    assert simulate(parse_machine(SAMPLE), 10) == Halted(3, ("2", 0, 0))


def test_simulate_immediate_halt():
    m = TwoCounterMachine({"1": Halt()}, "1")
    assert simulate(m, 0) == Halted(0, ("1", 0, 0))


def test_simulate_loop_runs():
    assert simulate(parse_machine(LOOP), 100) == Running(("1", 100, 0))


def test_simulate_transfer():
    # 3 rounds of dec/inc, one zero test, 4 decrements, one zero test
    assert simulate(parse_machine(TRANSFER), 1000) == Halted(12, ("h", 0, 0))


def test_dec_on_zero_keeps_counters():
    m = parse_machine("start 1 init 0 5\n1: dec c1 goto 1 else 2\n2: halt\n")
    assert step(m, ("1", 0, 5)) == ("2", 0, 5)


def test_negative_bound_rejected():
    with pytest.raises(ValueError):
        simulate(parse_machine(LOOP), -1)


machines = st.builds(
    lambda prog, n, m: (prog, n, m),
    st.lists(
        st.one_of(
            st.tuples(st.just("inc"), st.sampled_from([1, 2]), st.integers(0, 3)),
            st.tuples(st.just("dec"), st.sampled_from([1, 2]), st.integers(0, 3), st.integers(0, 3)),
            st.tuples(st.just("halt")),
        ),
        min_size=4,
        max_size=4,
    ),
    st.integers(0, 3),
    st.integers(0, 3),
)


def build(spec) -> TwoCounterMachine:
    prog, n, m = spec
    ins = {}
    for i, p in enumerate(prog):
        if p[0] == "inc":
            ins[str(i)] = Inc(p[1], str(p[2]))
        elif p[0] == "dec":
            ins[str(i)] = Dec(p[1], str(p[2]), str(p[3]))
        else:
            ins[str(i)] = Halt()
    return TwoCounterMachine(ins, "0", (n, m))


@given(machines)
def test_counters_never_negative(spec):
    m = build(spec)
    state = (m.start, *m.initial)
    for _ in range(50):
        if isinstance(m.instructions[state[0]], Halt):
            break
        state = step(m, state)
        assert state[1] >= 0 and state[2] >= 0


# -- encodings ---------------------------------------------------------------------------


def instruction_clauses(cs):
    return [c for c in cs.clauses if c.antecedent and c.succedent]


@pytest.mark.parametrize("style", STYLES)
def test_shape_discipline(style):
    cs = parse_raw(encode(parse_machine(TRANSFER), style))
    clauses = instruction_clauses(cs)
    assert len(clauses) == 5
    for clause in clauses:
        for k in clause.constraints:
            assert constraint_template(k) == style.template, str(k)


@pytest.mark.parametrize("style", STYLES)
def test_encodings_leave_the_fragment(style):
    frag = check_fragment(parse_raw(encode(parse_machine(SAMPLE), style)))
    assert isinstance(frag, OutOfFragment)
    assert style.template in frag.reason


def numerals(clauses):
    out = set()
    for clause in clauses:
        for k in clause.constraints:
            map_term(k.lhs, lambda t: out.add(t) if isinstance(t, Numeric) else None)
            map_term(k.rhs, lambda t: out.add(t) if isinstance(t, Numeric) else None)
    return {n.value for n in out}


@pytest.mark.parametrize(
    "style, constants",
    [
        (EncodingStyle.DIFFERENCE, {1}),
        (EncodingStyle.QUOTIENT, {2}),
        (EncodingStyle.ADDITIVE, {0, 1}),
        (EncodingStyle.MULTIPLICATIVE, {1, 2}),
    ],
)
def test_constant_economy(style, constants):
    cs = parse_raw(encode(parse_machine(TRANSFER), style))
    assert numerals(instruction_clauses(cs)) == constants


def test_increment_shapes():
    m = parse_machine("start p init 0 0\np: inc c1 goto q\nq: halt\n")
    diff = encode(m, EncodingStyle.DIFFERENCE).splitlines()
    assert "x' - x = 1 || M(b_p, x, y, z) -> M(b_q, x', y, z)." in diff
    quot = encode(m, EncodingStyle.QUOTIENT).splitlines()
    assert "2 * x' = x || M(b_p, x, y, z) -> M(b_q, x', y, z)." in quot
    add = encode(m, "additive").splitlines()
    assert "x' + xm = 1, x' + xm' = 0 || M(b_p, x, xm, y, ym, z, zm) -> M(b_q, x', xm', y, ym, z, zm)." in add
    mul = encode(m, "multiplicative").splitlines()
    assert "x * xm' = 2, x' * xm' = 1 || M(b_p, x, xm, y, ym, z, zm) -> M(b_q, x', xm', y, ym, z, zm)." in mul


def test_decrement_shapes():
    diff = encode(parse_machine(SAMPLE), EncodingStyle.DIFFERENCE).splitlines()
    assert "x - z = 1 || M(b_1, x, y, z) -> M(b_2, x, y, z)." in diff
    assert "x - z > 1, y' - y = 1, z' - z = 1 || M(b_1, x, y, z) -> M(b_1, x, y', z')." in diff
    quot = encode(parse_machine(SAMPLE), EncodingStyle.QUOTIENT).splitlines()
    assert "2 * x < z, 2 * y' = y, 2 * z' = z || M(b_1, x, y, z) -> M(b_1, x, y', z')." in quot


@pytest.mark.parametrize("style", STYLES)
def test_signature_and_halt_clause(style):
    cs = parse_raw(encode(parse_machine(SAMPLE), style))
    assert set(cs.signature.predicates) == {"M"}
    assert len(cs.signature.predicates["M"]) == style.arity
    assert {FreeConst("b_1"), FreeConst("b_2")} <= cs.signature.constants
    halts = [c for c in cs.clauses if c.antecedent and not c.succedent]
    assert len(halts) == 1 and halts[0].antecedent[0].args[0] == FreeConst(label_const("2"))


# -- the encodings follow the machine ----------------------------------------------------

ADDITIVE = (EncodingStyle.DIFFERENCE, EncodingStyle.ADDITIVE)


def start_values(style, n, m):
    if style in ADDITIVE:
        x, y, z = Fraction(n + 1), Fraction(m + 1), Fraction(0)
        inv = lambda v: -v  # noqa: E731
    else:
        x, y, z = Fraction(1, 2 ** (n + 1)), Fraction(1, 2 ** (m + 1)), Fraction(1)
        inv = lambda v: 1 / v  # noqa: E731
    vals = {"x": x, "y": y, "z": z}
    if style.arity == 7:
        vals.update({k + "m": inv(v) for k, v in list(vals.items())})
    return vals


def decode(style, vals):
    if style in ADDITIVE:
        return tuple(int(vals[c] - vals["z"] - 1) for c in "xy")
    return tuple(int(-math.log2(2 * vals[c] / vals["z"])) for c in "xy")


def advance(style, vals, ins, state_before, state_after):
    """Next representation, computed from the counter formulas rather than the clauses."""
    vals = dict(vals)
    grow = (lambda v: v + 1) if style in ADDITIVE else (lambda v: v / 2)
    inv = (lambda v: -v) if style in ADDITIVE else (lambda v: 1 / v)
    moved = []
    if isinstance(ins, Inc):
        moved = ["x" if ins.counter == 1 else "y"]
    elif state_before[ins.counter] != 0:
        moved = ["y" if ins.counter == 1 else "x", "z"]
    for c in moved:
        vals[c] = grow(vals[c])
        if style.arity == 7:
            vals[c + "m"] = inv(vals[c])
    return vals


def holds(k, env) -> bool:
    def leaf(t):
        return Numeric(env[t.name]) if isinstance(t, Var) else t

    if isinstance(k, RawConstraint):
        lhs, rhs = evaluate(map_term(k.lhs, leaf)), evaluate(map_term(k.rhs, leaf))
    else:
        lhs, rhs = leaf(k.lhs).value, leaf(k.rhs).value
    return k.rel.holds(lhs, rhs)


def names(style):
    return ["x", "y", "z"] if style.arity == 4 else ["x", "xm", "y", "ym", "z", "zm"]


def fires(cs, style, label, before, after):
    """Instruction clauses applicable in ``before`` whose conclusion is ``after``."""
    env = dict(before)
    env.update({k + "'": v for k, v in after.items()})
    out = []
    for clause in instruction_clauses(cs):
        if clause.antecedent[0].args[0] != FreeConst(label_const(label)):
            continue
        if all(holds(k, env) for k in clause.constraints):
            target = clause.succedent[0].args
            out.append((target[0].name, [env[v.name] for v in target[1:]]))
    return out


@pytest.mark.parametrize("style", STYLES)
@pytest.mark.parametrize("text", [SAMPLE, TRANSFER])
def test_encoding_tracks_simulation(style, text):
    m = parse_machine(text)
    cs = parse_raw(encode(m, style))
    state = (m.start, *m.initial)
    vals = start_values(style, *m.initial)
    (start,) = [c for c in cs.clauses if not c.antecedent]
    assert all(holds(k, {k2: v for k2, v in vals.items()}) for k in start.constraints)
    while not isinstance(m.instructions[state[0]], Halt):
        nxt = step(m, state)
        new_vals = advance(style, vals, m.instructions[state[0]], state, nxt)
        assert decode(style, new_vals) == nxt[1:]
        result = fires(cs, style, state[0], vals, new_vals)
        assert result == [(label_const(nxt[0]), [new_vals[n] for n in names(style)])]
        state, vals = nxt, new_vals


@settings(max_examples=40, deadline=None)
@given(machines, st.sampled_from(STYLES))
def test_random_machines_track_simulation(spec, style):
    m = build(spec)
    cs = parse_raw(encode(m, style))
    state, vals = (m.start, *m.initial), start_values(style, *m.initial)
    for _ in range(12):
        if isinstance(m.instructions[state[0]], Halt):
            break
        nxt = step(m, state)
        new_vals = advance(style, vals, m.instructions[state[0]], state, nxt)
        assert decode(style, new_vals) == nxt[1:]
        assert fires(cs, style, state[0], vals, new_vals) == [
            (label_const(nxt[0]), [new_vals[n] for n in names(style)])
        ]
        state, vals = nxt, new_vals

import pytest
from hypothesis import given, settings, strategies as st

from bsrsb.core import AlphaEps, AlphaMinf, BaseR, FreeConst, FreeS, Numeric, Rel, Var, stats
from bsrsb.decide import prepare
from bsrsb.frontend import parse, parse_raw, print_problem
from bsrsb.ground import (
    MAX_LEN_ENV,
    GroundingTooLarge,
    apply_subst,
    ground_all,
    instantiate_base,
    instantiate_free,
    instantiate_var,
    is_essentially_ground,
    iterative_steps,
)
from randgen import random_problem

MINF = AlphaMinf()
EPS2 = AlphaEps(Numeric(2))


def texts(cs):
    return [str(c) for c in cs.clauses]


def fold(clause) -> str:
    """Clause text with every bound variable replaced by its value and the bindings dropped."""
    text = str(clause)
    binds = {k.lhs.name: str(k.rhs) for k in clause.constraints if k.rel is Rel.EQ and isinstance(k.lhs, Var)}
    head, rest = text.split("||", 1)
    parts = [p.strip() for p in head.split(",") if p.strip()]
    parts = [p for p in parts if not (p.split(" = ")[0] in binds and " = " in p)]
    body = rest
    for name in sorted(binds, key=len, reverse=True):
        body = body.replace(f"({name})", f"({binds[name]})").replace(f"({name},", f"({binds[name]},")
        body = body.replace(f" {name})", f" {binds[name]})").replace(f" {name},", f" {binds[name]},")
        parts = [p.replace(name, binds[name]) if p.startswith(name + " ") else p for p in parts]
    return f"{', '.join(parts)} ||{body}".strip()


# -- substitution --------------------------------------------------------------------------


def test_apply_subst_records_base_binding(shifted_text):
    (clause,) = parse_raw(shifted_text).clauses
    x = Var("x", BaseR)
    assert str(apply_subst(clause, {x: EPS2})) == "@eps(2) > 2, z = 4, x = @eps(2) || Q(x, z) -> T(x)."


def test_apply_subst_identity(intro_text):
    clause = parse_raw(intro_text).clauses[0]
    assert apply_subst(clause, {}) == clause


def test_apply_subst_free_variable(intro_text):
    clause = parse_raw(intro_text).clauses[0]
    out = apply_subst(clause, {Var("u1", FreeS): FreeConst("c")})
    assert str(out) == "x2 != 5 || R(x1) -> Q(c, x2)."


def test_apply_subst_sort_violation(intro_text):
    clause = parse_raw(intro_text).clauses[0]
    with pytest.raises(TypeError):
        apply_subst(clause, {Var("u1", FreeS): Numeric(1)})
    with pytest.raises(TypeError):
        apply_subst(clause, {Var("x1", BaseR): FreeConst("c")})


def test_hidden_binding_is_not_appended():
    (clause,) = parse_raw("pred P : S.\nx < 3 || -> P(u).\n").clauses
    assert str(apply_subst(clause, {Var("x", BaseR): Numeric(1)})) == "1 < 3 || -> P(u)."


# -- instantiation ---------------------------------------------------------------------------


def test_example_base_instances(shifted_text):
    cs = prepare(parse(shifted_text))
    out = instantiate_var(cs, 0, Var("x", BaseR))
    assert texts(out)[:2] == [
        "@minf > 2, z = 4, x = @minf || Q(x, z) -> T(x).",
        "@eps(2) > 2, z_1 = 4, x_1 = @eps(2) || Q(x_1, z_1) -> T(x_1).",
    ]
    axioms = [c for c in out.clauses if not c.has_free_part()]
    assert "@eps(2) <= 2 || ->." in map(str, axioms)
    assert "2 < 4, @eps(2) >= 4 || ->." in map(str, axioms)


def test_intro_ground_matches_display(intro_text):
    ground, axioms = ground_all(prepare(parse(intro_text)))
    assert sorted(fold(c) for c in ground.clauses) == sorted(
        [
            "@eps(5) != 5 || R(@minf) -> Q(c, @eps(5)).",
            "@minf != 5 || R(@minf) -> Q(c, @minf).",
            "@minf < 7, @eps(5) <= 2 || -> Q(c, @eps(5)), R(@minf).",
            "@minf < 7, @minf <= 2 || -> Q(c, @minf), R(@minf).",
        ]
    )
    assert texts(axioms) == [
        "@minf >= 2 || ->.",
        "@minf >= 5 || ->.",
        "@minf >= 7 || ->.",
        "@eps(5) <= 5 || ->.",
        "@eps(5) >= 7 || ->.",
    ]


def test_unsat_pair_instances(unsat_text):
    ground, axioms = ground_all(prepare(parse(unsat_text)))
    assert texts(ground) == [
        "@minf < 3, x = @minf || -> T(x).",
        "x_1 = 0 || -> T(x_1).",
        "@minf >= 0, y = @minf || T(y) ->.",
        "y_1 = 0 || T(y_1) ->.",
        "|| -> _d0 ~ _d0.",
    ]
    assert texts(axioms) == ["@minf >= 0 || ->.", "@minf >= 3 || ->."]


def test_instantiate_free_over_all_constants():
    cs = prepare(parse("pred P : S.\nconst a : S.\nconst b : S.\n|| -> P(u).\n|| -> a ~ b.\n"))
    assert texts(instantiate_free(cs)) == ["|| -> P(a).", "|| -> P(b).", "|| -> a ~ b."]


def test_no_variables_passes_through():
    cs = prepare(parse("pred P : S.\nconst a : S.\n|| -> P(a).\n"))
    assert instantiate_free(cs).clauses == cs.clauses
    assert instantiate_base(cs).clauses == cs.clauses
    ground, axioms = ground_all(cs)
    assert ground.clauses == cs.clauses and axioms.clauses == ()


def test_ground_all_is_idempotent_on_ground_input(intro_text):
    ground, axioms = ground_all(prepare(parse(intro_text)))
    closed = ground.replace(clauses=ground.clauses + axioms.clauses)
    again, delta = ground_all(closed)
    assert again.clauses == closed.clauses
    assert delta.clauses == ()


def test_size_cap(monkeypatch, intro_text):
    monkeypatch.setenv(MAX_LEN_ENV, "5")
    with pytest.raises(GroundingTooLarge):
        ground_all(prepare(parse(intro_text)))


@settings(max_examples=80, deadline=None)
@given(st.integers(0, 100_000))
def test_ground_is_essentially_ground(seed):
    ground, axioms = ground_all(prepare(parse(random_problem(seed))))
    assert is_essentially_ground(ground)
    for clause in ground.clauses:
        bound = [k.lhs for k in clause.constraints if k.rel is Rel.EQ and isinstance(k.lhs, Var)]
        # input multisets may repeat a binding, so compare as sets
        assert set(bound) == set(clause.variables())


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 100_000))
def test_ground_is_deterministic(seed):
    text = random_problem(seed)
    first = print_problem(*ground_all(prepare(parse(text))))
    assert print_problem(*ground_all(prepare(parse(text)))) == first


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 100_000))
def test_iteration_terminates_essentially_ground(seed):
    cs = prepare(parse(random_problem(seed)))
    last = cs
    for last in iterative_steps(cs):
        pass
    assert not any(k for c in last.clauses for k in c.constraints if isinstance(k.lhs, Var) and k.rel is not Rel.EQ
                   and k.lhs not in c.free_part_variables())
    assert all(
        {k.lhs for k in c.constraints if isinstance(k.lhs, Var) and k.rel is Rel.EQ} >= {
            v for v in c.variables() if v.sort is BaseR
        }
        for c in last.clauses
    )
    assert stats(last).bconsts == stats(cs).bconsts

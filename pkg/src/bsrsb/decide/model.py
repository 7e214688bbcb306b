"""Hierarchic models: construction helpers, checking, text and JSON I/O."""

from __future__ import annotations

import json
import re
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Mapping

from ..core import (
    AlphaEps,
    AlphaMinf,
    Clause,
    ClauseSet,
    Eq,
    FreeConst,
    Numeric,
    Pred,
    Rel,
    SkolemBase,
    Var,
    const_key,
    format_rational,
)


class ModelError(ValueError):
    pass


@dataclass(frozen=True)
class FreeCongruence:
    """Partition of the free constants; each class is named by its least member."""

    classes: tuple

    def __post_init__(self):
        blocks = [tuple(sorted(b, key=const_key)) for b in self.classes]
        object.__setattr__(self, "classes", tuple(sorted(blocks, key=lambda b: const_key(b[0]))))

    def rep(self, c: FreeConst) -> FreeConst:
        for block in self.classes:
            if c in block:
                return block[0]
        raise ModelError(f"model does not interpret free constant {c}")

    def representatives(self) -> list[FreeConst]:
        return [b[0] for b in self.classes]


@dataclass(frozen=True)
class HierarchicModel:
    base_values: Mapping = field(default_factory=dict)
    congruence: FreeCongruence = field(default_factory=lambda: FreeCongruence(()))
    extensions: Mapping = field(default_factory=dict)

    def value(self, t):
        if isinstance(t, Numeric):
            return t.value
        if isinstance(t, FreeConst):
            return self.congruence.rep(t)
        try:
            return self.base_values[t]
        except KeyError:
            raise ModelError(f"model does not interpret {t}") from None

    def holds(self, atom) -> bool:
        if isinstance(atom, Eq):
            return self.value(atom.lhs) == self.value(atom.rhs)
        return tuple(self.value(a) for a in atom.args) in self.extensions.get(atom.symbol, ())


def clause_assignment(clause: Clause) -> dict[Var, object]:
    """The forced value of every base variable: the first ``x = c`` on it."""
    beta: dict[Var, object] = {}
    for k in clause.constraints:
        if isinstance(k.lhs, Var) and k.rel is Rel.EQ:
            beta.setdefault(k.lhs, k.rhs)
    for v in clause.variables():
        if v not in beta:
            raise ModelError(f"clause {clause} is not essentially ground: {v} is unbound")
    return beta


def _ground_atom(atom, beta):
    if isinstance(atom, Eq):
        return atom
    return Pred(atom.symbol, tuple(beta.get(a, a) if isinstance(a, Var) else a for a in atom.args))


def clause_holds(clause: Clause, m: HierarchicModel) -> bool:
    beta = clause_assignment(clause)
    for k in clause.constraints:
        lhs = beta[k.lhs] if isinstance(k.lhs, Var) else k.lhs
        if not k.rel.holds(m.value(lhs), m.value(k.rhs)):
            return True
    if not all(m.holds(_ground_atom(a, beta)) for a in clause.antecedent):
        return True
    return any(m.holds(_ground_atom(a, beta)) for a in clause.succedent)


def verify_model(cs: ClauseSet | Iterable[Clause], m: HierarchicModel) -> tuple[bool, Clause | None]:
    """Check every clause of an essentially ground set; report the first failure."""
    clauses = cs.clauses if isinstance(cs, ClauseSet) else cs
    for clause in clauses:
        if not clause_holds(clause, m):
            return False, clause
    return True, None


# -- rendering -----------------------------------------------------------------------


def _fmt_value(v) -> str:
    return format_rational(v) if isinstance(v, Fraction) else str(v)


def _value_key(v):
    return (0, v) if isinstance(v, Fraction) else (1, v.name)


def _sorted_tuples(tuples):
    return sorted(tuples, key=lambda t: tuple(_value_key(v) for v in t))


def format_model(m: HierarchicModel) -> str:
    lines = []
    for c in sorted(m.base_values, key=const_key):
        if not isinstance(c, Numeric):
            lines.append(f"base {c} = {format_rational(m.base_values[c])}")
    for block in m.congruence.classes:
        lines.append(f"class {{{', '.join(map(str, block))}}} -> {block[0]}")
    for p in sorted(m.extensions):
        tuples = ", ".join(f"({', '.join(map(_fmt_value, t))})" for t in _sorted_tuples(m.extensions[p]))
        lines.append(f"pred {p} = {{{tuples}}}")
    return "".join(line + "\n" for line in lines)


def model_to_json(m: HierarchicModel) -> dict:
    return {
        "base": {
            str(c): format_rational(m.base_values[c])
            for c in sorted(m.base_values, key=const_key)
            if not isinstance(c, Numeric)
        },
        "classes": [{"members": [str(c) for c in b], "rep": str(b[0])} for b in m.congruence.classes],
        "predicates": {
            p: [[_fmt_value(v) for v in t] for t in _sorted_tuples(m.extensions[p])]
            for p in sorted(m.extensions)
        },
    }


_RATIONAL = re.compile(r"-?\d+(/\d+)?$")
_EPS = re.compile(r"@eps\((.*)\)$")


def parse_const_name(name: str):
    if name == "@minf":
        return AlphaMinf()
    m = _EPS.match(name)
    if m:
        return AlphaEps(parse_const_name(m.group(1)))
    if _RATIONAL.match(name):
        return Numeric(Fraction(name))
    return SkolemBase(name)


def model_from_json(doc: dict | str) -> HierarchicModel:
    if isinstance(doc, str):
        doc = json.loads(doc)
    base = {parse_const_name(k): Fraction(v) for k, v in doc["base"].items()}
    classes = [tuple(FreeConst(n) for n in b["members"]) for b in doc["classes"]]

    def value(text: str):
        return Fraction(text) if _RATIONAL.match(text) else FreeConst(text)

    ext = {p: frozenset(tuple(value(v) for v in t) for t in ts) for p, ts in doc["predicates"].items()}
    return HierarchicModel(base, FreeCongruence(tuple(classes)), ext)


__all__ = [
    "FreeCongruence",
    "HierarchicModel",
    "ModelError",
    "clause_holds",
    "format_model",
    "model_from_json",
    "model_to_json",
    "verify_model",
]

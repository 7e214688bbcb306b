"""Terms of the extended input syntax that exist only before basification."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Callable

from ..core import Numeric, Rel, Sort, Var, is_const

ARITH_OPS = ("+", "-", "*", "/", "neg")


class EvalError(ValueError):
    pass


@dataclass(frozen=True)
class App:
    """Arithmetic operation or free function application."""

    op: str
    args: tuple
    sort: Sort | None = None  # result sort of a function application

    def __post_init__(self):
        object.__setattr__(self, "args", tuple(self.args))

    @property
    def is_arith(self) -> bool:
        return self.op in ARITH_OPS

    def __str__(self) -> str:
        return format_term(self)


@dataclass(frozen=True)
class RawConstraint:
    lhs: object
    rel: Rel
    rhs: object

    def __str__(self) -> str:
        return f"{format_term(self.lhs)} {self.rel} {format_term(self.rhs)}"

    def map(self, fn: Callable) -> "RawConstraint":
        return RawConstraint(map_term(self.lhs, fn), self.rel, map_term(self.rhs, fn))


def map_term(t, fn: Callable):
    """Rebuild ``t`` applying ``fn`` to every leaf."""
    if isinstance(t, App):
        return App(t.op, tuple(map_term(a, fn) for a in t.args), t.sort)
    return fn(t)


def is_ground(t) -> bool:
    if isinstance(t, App):
        return all(is_ground(a) for a in t.args)
    return not isinstance(t, Var)


def variables_of(t) -> list[Var]:
    if isinstance(t, Var):
        return [t]
    if isinstance(t, App):
        return [v for a in t.args for v in variables_of(a)]
    return []


def evaluate(t) -> Fraction:
    """Exact value of a ground arithmetic term over numeric literals."""
    if isinstance(t, Numeric):
        return t.value
    if isinstance(t, App) and t.is_arith:
        vals = [evaluate(a) for a in t.args]
        if t.op == "neg":
            return -vals[0]
        a, b = vals
        if t.op == "+":
            return a + b
        if t.op == "-":
            return a - b
        if t.op == "*":
            return a * b
        if b == 0:
            raise EvalError(f"division by zero in {format_term(t)}")
        return a / b
    if isinstance(t, App):
        raise EvalError(f"base-sort function term {format_term(t)} is not supported")
    if isinstance(t, Var):
        raise EvalError(f"variable {t} in a term that must be ground")
    raise EvalError(f"symbolic base constant {t} inside arithmetic is not supported")


_PREC = {"+": 1, "-": 1, "*": 2, "/": 2, "neg": 3}


def format_term(t, parent: int = 0, right: bool = False) -> str:
    if not isinstance(t, App):
        text = str(t)
        if isinstance(t, Numeric) and t.value < 0 and parent:
            return f"({text})"
        return text
    if not t.is_arith:
        return f"{t.op}({', '.join(format_term(a) for a in t.args)})"
    prec = _PREC[t.op]
    if t.op == "neg":
        text = "-" + format_term(t.args[0], prec)
    else:
        lhs = format_term(t.args[0], prec)
        rhs = format_term(t.args[1], prec, right=True)
        text = f"{lhs} {t.op} {rhs}"
    if prec < parent or (prec == parent and right):
        return f"({text})"
    return text


def is_simple_leaf(t) -> bool:
    return isinstance(t, Var) or is_const(t)

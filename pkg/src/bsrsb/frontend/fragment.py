"""Classify a parsed clause set by the constraint language it uses."""

from __future__ import annotations

from dataclasses import dataclass

from ..core import ClauseSet, Numeric, Var
from .basify import BasifyError, _FreeTerms, solve_constraint
from .raw import App, RawConstraint


@dataclass(frozen=True)
class BsrSimpleBounds:
    def __str__(self) -> str:
        return "bsr-simple-bounds"


@dataclass(frozen=True)
class BsrGroundLA:
    def __str__(self) -> str:
        return "bsr-ground-la"


@dataclass(frozen=True)
class OutOfFragment:
    reason: str
    constraint: str = ""

    def __str__(self) -> str:
        where = f": {self.constraint}" if self.constraint else ""
        return f"out-of-fragment ({self.reason}){where}"


FragmentClass = BsrSimpleBounds | BsrGroundLA | OutOfFragment


def _is_mul(t, pred) -> bool:
    return isinstance(t, App) and t.op == "*" and len(t.args) == 2 and pred(*t.args)


def constraint_template(con) -> str | None:
    """Name of the two-variable template a constraint matches, if any.

    difference ``x - y ◁ c``, additive ``x + y ◁ c``, quotient ``x ◁ c·y``
    (either side, either factor order) and multiplicative ``x·y ◁ c``.
    """
    lhs, rhs = con.lhs, con.rhs
    two_vars = lambda a, b: isinstance(a, Var) and isinstance(b, Var) and a != b  # noqa: E731
    scaled = lambda a, b: (  # noqa: E731
        (isinstance(a, Numeric) and isinstance(b, Var)) or (isinstance(a, Var) and isinstance(b, Numeric))
    )
    if isinstance(rhs, Numeric) and isinstance(lhs, App) and len(lhs.args) == 2 and two_vars(*lhs.args):
        return {"-": "difference", "+": "additive", "*": "multiplicative"}.get(lhs.op)
    if (isinstance(lhs, Var) and _is_mul(rhs, scaled)) or (isinstance(rhs, Var) and _is_mul(lhs, scaled)):
        return "quotient"
    return None


def check_fragment(cs: ClauseSet) -> FragmentClass:
    simple = True
    terms = _FreeTerms(set())
    for clause in cs.clauses:
        for con in clause.constraints:
            if not isinstance(con, RawConstraint):
                continue
            simple = False
            template = constraint_template(con)
            if template is not None:
                return OutOfFragment(f"two-variable {template} constraint", str(con))
            try:
                solve_constraint(con)
            except BasifyError as e:
                return OutOfFragment(str(e), str(con))
        for atom in clause.atoms:
            for arg in atom.args:
                if isinstance(arg, App):
                    simple = False
                    try:
                        terms.flatten(arg)
                    except BasifyError as e:
                        return OutOfFragment(str(e), str(atom))
    return BsrSimpleBounds() if simple else BsrGroundLA()

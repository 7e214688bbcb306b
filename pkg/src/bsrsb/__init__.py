"""Decision procedure for BSR clause sets with simple bounds over the reals."""

from .core import ClauseSet, stats, wellformed
from .decide import Sat, Unknown, Unsat, oracle_solve, solve, verify_model
from .frontend import parse, print_problem
from .ground import ground_all
from .normalize import normalize

__all__ = [
    "ClauseSet",
    "Sat",
    "Unknown",
    "Unsat",
    "ground_all",
    "normalize",
    "oracle_solve",
    "parse",
    "print_problem",
    "solve",
    "stats",
    "verify_model",
    "wellformed",
]

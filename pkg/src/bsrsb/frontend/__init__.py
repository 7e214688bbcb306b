from .basify import BasifyError, basify
from .fragment import BsrGroundLA, BsrSimpleBounds, OutOfFragment, check_fragment, constraint_template
from .parser import ParseError, SortError, augment_problem, parse, parse_raw
from .printer import print_clause, print_problem
from .purify import purify
from .raw import App, RawConstraint

__all__ = [
    "App",
    "BasifyError",
    "BsrGroundLA",
    "BsrSimpleBounds",
    "OutOfFragment",
    "ParseError",
    "RawConstraint",
    "SortError",
    "augment_problem",
    "basify",
    "check_fragment",
    "constraint_template",
    "parse",
    "parse_raw",
    "print_clause",
    "print_problem",
    "purify",
]

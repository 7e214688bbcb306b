"""Canonical text rendering of clause sets."""

from __future__ import annotations

from ..core import ClauseSet, FreeConst, SkolemBase
from ..core import format_clause as print_clause


def print_declarations(cs: ClauseSet) -> list[str]:
    lines = []
    for name, sorts in sorted(cs.signature.predicates.items()):
        lines.append(f"pred {name} :{''.join(' ' + str(s) for s in sorts)}.")
    for c in sorted(cs.signature.constants, key=str):
        if isinstance(c, (FreeConst, SkolemBase)):
            lines.append(f"const {c} : {c.sort}.")
    return lines


def print_problem(cs: ClauseSet, axioms: ClauseSet | None = None) -> str:
    """Declarations first, then one clause per line.

    Clauses of ``axioms`` follow, each preceded by a ``# axiom`` line.
    """
    lines = print_declarations(cs)
    lines.extend(print_clause(c) for c in cs.clauses)
    if axioms is not None:
        for c in axioms.clauses:
            lines.append("# axiom")
            lines.append(print_clause(c))
    return "".join(line + "\n" for line in lines)

"""Two-counter machines: simulation and clause encodings over two-variable constraints.

The encodings use a single state predicate ``M`` whose first argument is
the free constant ``b_<label>`` of the current instruction.  They lie
outside the decidable fragment by design; nothing here tries to decide them.
"""

from __future__ import annotations

import enum
import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Union

from .core import format_rational


class MachineError(ValueError):
    pass


@dataclass(frozen=True)
class Inc:
    counter: int
    goto: str


@dataclass(frozen=True)
class Dec:
    counter: int
    goto_nonzero: str
    goto_zero: str


@dataclass(frozen=True)
class Halt:
    pass


Instruction = Union[Inc, Dec, Halt]


@dataclass(frozen=True)
class TwoCounterMachine:
    instructions: dict
    start: str
    initial: tuple = (0, 0)

    def __post_init__(self):
        if self.start not in self.instructions:
            raise MachineError(f"start label {self.start} is not defined")
        for label, ins in self.instructions.items():
            targets = {Inc: lambda i: [i.goto], Dec: lambda i: [i.goto_nonzero, i.goto_zero]}
            for t in targets.get(type(ins), lambda i: [])(ins):
                if t not in self.instructions:
                    raise MachineError(f"instruction {label} jumps to undefined label {t}")
            if isinstance(ins, (Inc, Dec)) and ins.counter not in (1, 2):
                raise MachineError(f"instruction {label} uses counter {ins.counter}")
        n, m = self.initial
        if n < 0 or m < 0:
            raise MachineError("initial counter values must be nonnegative")

    def labels(self) -> list[str]:
        return list(self.instructions)


_LINE = re.compile(
    r"""^\s*(?:
        start\s+(?P<start>\S+)\s+init\s+(?P<n>\d+)\s+(?P<m>\d+)
      | (?P<label>[^\s:]+)\s*:\s*(?:
            inc\s+c(?P<ic>[12])\s+goto\s+(?P<ig>\S+)
          | dec\s+c(?P<dc>[12])\s+goto\s+(?P<dg>\S+)\s+else\s+(?P<de>\S+)
          | (?P<halt>halt)
        )
    )\s*$""",
    re.VERBOSE,
)


def parse_machine(text: str) -> TwoCounterMachine:
    instructions: dict[str, Instruction] = {}
    start = None
    for lineno, line in enumerate(text.splitlines(), start=1):
        line = line.split("#", 1)[0]
        if not line.strip():
            continue
        m = _LINE.match(line)
        if m is None:
            raise MachineError(f"line {lineno}: cannot parse {line.strip()!r}")
        if m["start"]:
            if start is not None:
                raise MachineError(f"line {lineno}: second start line")
            start = (m["start"], (int(m["n"]), int(m["m"])))
            continue
        label = m["label"]
        if label in instructions:
            raise MachineError(f"line {lineno}: label {label} defined twice")
        if m["ic"]:
            instructions[label] = Inc(int(m["ic"]), m["ig"])
        elif m["dc"]:
            instructions[label] = Dec(int(m["dc"]), m["dg"], m["de"])
        else:
            instructions[label] = Halt()
    if start is None:
        raise MachineError("missing start line")
    return TwoCounterMachine(instructions, start[0], start[1])


@dataclass(frozen=True)
class Halted:
    steps: int
    state: tuple


@dataclass(frozen=True)
class Running:
    state: tuple


def step(m: TwoCounterMachine, state: tuple) -> tuple:
    label, c1, c2 = state
    ins = m.instructions[label]
    counters = [c1, c2]
    if isinstance(ins, Inc):
        counters[ins.counter - 1] += 1
        return (ins.goto, *counters)
    if isinstance(ins, Dec):
        if counters[ins.counter - 1] == 0:
            return (ins.goto_zero, *counters)
        counters[ins.counter - 1] -= 1
        return (ins.goto_nonzero, *counters)
    raise MachineError(f"machine has halted at {label}")


def simulate(m: TwoCounterMachine, bound: int) -> Halted | Running:
    """Run for at most ``bound`` transitions."""
    if bound < 0:
        raise ValueError("bound must be nonnegative")
    state = (m.start, *m.initial)
    for steps in range(bound + 1):
        if isinstance(m.instructions[state[0]], Halt):
            return Halted(steps, state)
        if steps == bound:
            break
        state = step(m, state)
    return Running(state)


# -- encodings -----------------------------------------------------------------------


class EncodingStyle(enum.Enum):
    DIFFERENCE = "difference"
    QUOTIENT = "quotient"
    ADDITIVE = "additive"
    MULTIPLICATIVE = "multiplicative"

    @property
    def arity(self) -> int:
        return 4 if self in (EncodingStyle.DIFFERENCE, EncodingStyle.QUOTIENT) else 7

    @property
    def template(self) -> str:
        return self.value


def label_const(label: str) -> str:
    return f"b_{label}"


_DIFF = {
    "inc": "{c}' - {c} = 1",
    "zero": "{c} - z = 1",
    "nonzero": "{c} - z > 1",
    "shift": "{c}' - {c} = 1",
}
_QUOT = {
    "inc": "2 * {c}' = {c}",
    "zero": "2 * {c} = z",
    "nonzero": "2 * {c} < z",
    "shift": "2 * {c}' = {c}",
}
_ADD = {
    "inc": "{c}' + {c}m = 1, {c}' + {c}m' = 0",
    "zero": "{c} + zm = 1",
    "nonzero": "{c} + zm > 1",
    "shift": "{c}' + {c}m = 1, {c}' + {c}m' = 0",
}
_MUL = {
    "inc": "{c} * {c}m' = 2, {c}' * {c}m' = 1",
    "zero": "z * {c}m = 2",
    "nonzero": "z * {c}m > 2",
    "shift": "{c} * {c}m' = 2, {c}' * {c}m' = 1",
}
_PATTERNS = {
    EncodingStyle.DIFFERENCE: _DIFF,
    EncodingStyle.QUOTIENT: _QUOT,
    EncodingStyle.ADDITIVE: _ADD,
    EncodingStyle.MULTIPLICATIVE: _MUL,
}


def _state(style: EncodingStyle, label: str, primed: set[str] = frozenset()) -> str:
    names = ["x", "y", "z"] if style.arity == 4 else ["x", "xm", "y", "ym", "z", "zm"]
    args = [n + "'" if n.rstrip("m") in primed else n for n in names]
    return f"M({label_const(label)}, {', '.join(args)})"


def _start_values(style: EncodingStyle, n: int, m: int) -> list[tuple[str, Fraction]]:
    if style in (EncodingStyle.DIFFERENCE, EncodingStyle.ADDITIVE):
        # counter value = x - z - 1 with offset z = 0
        x, y, z = Fraction(n + 1), Fraction(m + 1), Fraction(0)
        inverse = lambda v: -v  # noqa: E731
    else:
        # counter value = -log2(2x / z) with z = 1
        x, y, z = Fraction(1, 2 ** (n + 1)), Fraction(1, 2 ** (m + 1)), Fraction(1)
        inverse = lambda v: 1 / v  # noqa: E731
    if style.arity == 4:
        return [("x", x), ("y", y), ("z", z)]
    return [("x", x), ("xm", inverse(x)), ("y", y), ("ym", inverse(y)), ("z", z), ("zm", inverse(z))]


def instruction_clauses(m: TwoCounterMachine, style: EncodingStyle) -> list[str]:
    pat = _PATTERNS[style]
    out = []
    for label, ins in m.instructions.items():
        if isinstance(ins, Halt):
            continue
        c = "x" if ins.counter == 1 else "y"
        other = "y" if ins.counter == 1 else "x"
        here = _state(style, label)
        if isinstance(ins, Inc):
            out.append(f"{pat['inc'].format(c=c)} || {here} -> {_state(style, ins.goto, {c})}.")
            continue
        out.append(f"{pat['zero'].format(c=c)} || {here} -> {_state(style, ins.goto_zero)}.")
        # decrement by moving the offset up and compensating the other counter
        cons = [pat["nonzero"].format(c=c), pat["shift"].format(c=other), pat["shift"].format(c="z")]
        target = _state(style, ins.goto_nonzero, {other, "z"})
        out.append(f"{', '.join(cons)} || {here} -> {target}.")
    return out


def encode(m: TwoCounterMachine, style: EncodingStyle | str) -> str:
    """Problem text whose satisfiability is equivalent to the machine not halting."""
    style = EncodingStyle(style)
    sorts = " ".join(["S"] + ["R"] * (style.arity - 1))
    lines = [f"pred M : {sorts}."]
    lines += [f"const {label_const(label)} : S." for label in m.instructions]
    lines.append("# start")
    n, k = m.initial
    start = ", ".join(f"{v} = {format_rational(q)}" for v, q in _start_values(style, n, k))
    lines.append(f"{start} || -> {_state(style, m.start)}.")
    lines.append("# instructions")
    lines += instruction_clauses(m, style)
    lines.append("# halt")
    lines += [f"|| {_state(style, label)} ->." for label, ins in m.instructions.items() if isinstance(ins, Halt)]
    return "".join(line + "\n" for line in lines)

"""Command-line interface.

Exit codes: 10 sat, 20 unsat, 30 unknown, 1 for any error, 0 otherwise.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from .analysis import ap_classes, inst_points
from .core import const_key, stats
from .decide import Sat, SoundnessError, Unsat, decide_ground, format_model, model_to_json, prepare
from .frontend import OutOfFragment, check_fragment, parse, print_problem
from .ground import GroundingTooLarge, ground_all
from .tcm import EncodingStyle, Halted, encode, parse_machine, simulate

EXIT_SAT, EXIT_UNSAT, EXIT_UNKNOWN, EXIT_ERROR = 10, 20, 30, 1

OUTSIDE_FRAGMENT_NOTICE = (
    "notice: two-counter machine encodings lie outside the decidable fragment; not deciding them"
)


class CliError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise CliError(message)


def _read(path: str) -> str:
    try:
        return Path(path).read_text(encoding="utf-8")
    except OSError as e:
        raise CliError(f"cannot read {path}: {e.strerror or e}") from None


def _write(path: str | None, text: str, out) -> None:
    if path is None or path == "-":
        out.write(text)
        return
    try:
        Path(path).write_text(text, encoding="utf-8")
    except OSError as e:
        raise CliError(f"cannot write {path}: {e.strerror or e}") from None


def _fmt_position(pos) -> str:
    return f"{pos[0]}/{pos[1]}"


def cmd_check(args, out) -> int:
    prepared = prepare(parse(_read(args.file)))
    ground, axioms = ground_all(prepared)
    if args.emit_ground:
        _write(args.emit_ground, print_problem(ground, axioms), out)
    result = decide_ground(
        ground,
        axioms,
        max_arrangements=args.max_arrangements,
        max_partitions=args.max_partitions,
        threads=args.threads,
    )
    if args.json:
        doc = {"result": str(result)}
        if isinstance(result, Sat):
            doc["model"] = model_to_json(result.model)
        elif not isinstance(result, Unsat):
            doc["reason"] = result.reason
        out.write(json.dumps(doc, indent=2) + "\n")
    else:
        out.write(f"{result}\n")
        if isinstance(result, Sat) and args.model:
            out.write(format_model(result.model))
    if isinstance(result, Sat):
        return EXIT_SAT
    if isinstance(result, Unsat):
        return EXIT_UNSAT
    if not args.json:
        print(f"reason: {result.reason}", file=sys.stderr)
    return EXIT_UNKNOWN


def cmd_ground(args, out) -> int:
    ground, axioms = ground_all(prepare(parse(_read(args.file))))
    _write(args.output, print_problem(ground, axioms), out)
    return 0


def cmd_normalize(args, out) -> int:
    _write(args.output, print_problem(prepare(parse(_read(args.file)))), out)
    return 0


def cmd_info(args, out) -> int:
    cs = parse(_read(args.file))
    frag = check_fragment(cs)
    out.write(f"fragment: {frag}\n")
    if isinstance(frag, OutOfFragment):
        st = stats(cs)
        out.write(f"clauses: {len(cs.clauses)}\nlen: {st.len}\n")
        return 0
    cs = prepare(cs)
    st = stats(cs)
    out.write(f"clauses: {len(cs.clauses)}\n")
    out.write(f"len: {st.len}\n")
    for label, consts in (("base constants", st.bconsts), ("alpha constants", st.αconsts), ("free constants", st.fconsts)):
        out.write(f"{label}: {', '.join(map(str, sorted(consts, key=const_key)))}\n")
    out.write(f"variables: {', '.join(sorted(v.name for v in st.vars))}\n")
    classes = ap_classes(cs)
    points = inst_points(cs, classes)
    for cls, members in classes.classes().items():
        line = f"class {_fmt_position(cls)}: {{{', '.join(map(_fmt_position, members))}}} {classes.sort_of(cls)}"
        if cls in points:
            line += f" points {{{', '.join(map(str, points[cls]))}}}"
        out.write(line + "\n")
    return 0


def cmd_tcm_simulate(args, out) -> int:
    machine = parse_machine(_read(args.machine))
    r = simulate(machine, args.steps)
    if isinstance(r, Halted):
        label, c1, c2 = r.state
        out.write(f"halted after {r.steps} steps at {label} with counters {c1} {c2}\n")
    else:
        label, c1, c2 = r.state
        out.write(f"running after {args.steps} steps at {label} with counters {c1} {c2}\n")
    return 0


def cmd_tcm_encode(args, out) -> int:
    machine = parse_machine(_read(args.machine))
    print(OUTSIDE_FRAGMENT_NOTICE, file=sys.stderr)
    _write(args.output, encode(machine, EncodingStyle(args.style)), out)
    return 0


def _nonneg(text: str) -> int:
    try:
        n = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not an integer: {text}") from None
    if n < 0:
        raise argparse.ArgumentTypeError(f"must be nonnegative: {text}")
    return n


def _positive(text: str) -> int:
    n = _nonneg(text)
    if n == 0:
        raise argparse.ArgumentTypeError("must be positive")
    return n


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="bsrsb", description="Decide BSR clause sets with simple bounds over the reals.")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    c = sub.add_parser("check", help="decide satisfiability")
    c.add_argument("file")
    c.add_argument("--model", action="store_true", help="print the model on sat")
    c.add_argument("--json", action="store_true", help="machine-readable output")
    c.add_argument("--emit-ground", metavar="PATH", help="also write the ground set and its axioms")
    c.add_argument("--max-arrangements", type=_positive, metavar="N")
    c.add_argument("--max-partitions", type=_positive, metavar="N")
    c.add_argument("--threads", type=_positive, default=1, metavar="N")
    c.set_defaults(func=cmd_check)

    g = sub.add_parser("ground", help="write the ground set with its axioms")
    g.add_argument("file")
    g.add_argument("-o", "--output", metavar="PATH")
    g.set_defaults(func=cmd_ground)

    n = sub.add_parser("normalize", help="write the normal form")
    n.add_argument("file")
    n.add_argument("-o", "--output", metavar="PATH")
    n.set_defaults(func=cmd_normalize)

    i = sub.add_parser("info", help="print statistics, classes and instantiation points")
    i.add_argument("file")
    i.set_defaults(func=cmd_info)

    t = sub.add_parser("tcm", help="two-counter machines")
    tsub = t.add_subparsers(dest="tcm_command", required=True, parser_class=_Parser)
    s = tsub.add_parser("simulate", help="run a machine for a bounded number of steps")
    s.add_argument("machine")
    s.add_argument("--steps", type=_nonneg, required=True, metavar="N")
    s.set_defaults(func=cmd_tcm_simulate)
    e = tsub.add_parser("encode", help="encode a machine as a clause set")
    e.add_argument("machine")
    e.add_argument("--style", required=True, choices=[style.value for style in EncodingStyle])
    e.add_argument("-o", "--output", metavar="PATH")
    e.set_defaults(func=cmd_tcm_encode)
    return p


def run(argv=None, out=None) -> int:
    out = out if out is not None else sys.stdout
    try:
        args = build_parser().parse_args(argv)
        return args.func(args, out)
    except (CliError, ValueError, GroundingTooLarge, SoundnessError) as e:
        message = " ".join(str(e).split()) or type(e).__name__
        print(f"error: {message}", file=sys.stderr)
        return EXIT_ERROR


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()

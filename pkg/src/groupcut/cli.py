"""Command-line interface: ``groupcut <command> ...`` or ``python -m groupcut``.

Exit codes: 0/1/2 carry the verdict (minimal / extreme / not extreme /
inconclusive, per command), 64 usage errors, 65 bad input data, 66
unreadable files, 3 other library errors and 70 internal inconsistencies.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from pathlib import Path

from . import __version__
from .compendium import catalog, lookup
from .errors import BadFamilySpec, ConstructionError, GroupCutError, InternalInconsistency
from .extremality import NOT_EXTREME, extremality_test
from .family import FamilySpec, search_random
from .gridoracle import oracle_check
from .minimality import minimality_test
from .pwl import PwlPeriodic, as_rational, from_json
from .report import input_descriptor, run_report
from .svg import plot_complex, plot_function

EX_USAGE = 64
EX_DATAERR = 65
EX_NOINPUT = 66
EX_SOFTWARE = 70
EX_LIBRARY = 3


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(f"{self.prog}: {message}")


def use_color(stream) -> bool:
    return not os.environ.get("GROUPCUT_NO_COLOR") and hasattr(stream, "isatty") and stream.isatty()


_COLORS = {"Extreme": "32", "minimal": "32", "extreme": "32", "NotExtreme": "31", "not_extreme": "31",
           "not minimal": "31", "Inconclusive": "33"}


def _status_line(label: str, status: str):
    code = _COLORS.get(status)
    text = f"\x1b[{code}m{status}\x1b[0m" if code and use_color(sys.stderr) else status
    print(f"{label}: {text}", file=sys.stderr)


def catalog_help() -> str:
    lines = ["catalog (constructible entries accept --param name=value):", ""]
    for e in catalog():
        if e.status == "constructible":
            params = ", ".join(n for n, _ in e.parameters)
            lines.append(f"  {e.name}({params})")
            lines.append(f"      constraints: {e.constraints}")
            lines.append(f"      citation: {e.citation}")
        else:
            lines.append(f"  {e.name}  [stub] citation: {e.citation}")
    return "\n".join(lines)


def _json_out(data):
    print(json.dumps(data, indent=2, sort_keys=True))


def _parse_value(text: str):
    try:
        v = as_rational(text)
    except (ValueError, TypeError, ZeroDivisionError) as exc:
        raise UsageError(f"bad rational {text!r}: {exc}") from None
    return v.numerator if v.denominator == 1 else v


def _params(pairs: list[str]) -> dict:
    out = {}
    for pair in pairs or []:
        if "=" not in pair:
            raise UsageError(f"--param expects name=value, got {pair!r}")
        k, v = pair.split("=", 1)
        out[k.strip()] = _parse_value(v.strip())
    return out


def load_function(args) -> tuple[PwlPeriodic, dict]:
    """The function named on the command line, and its report descriptor."""
    if args.file:
        if args.name:
            raise UsageError("give either a catalog name or --file, not both")
        try:
            text = Path(args.file).read_text()
        except OSError as exc:
            raise FileNotFoundError(str(exc)) from None
        try:
            return from_json(text), input_descriptor(file=args.file)
        except (json.JSONDecodeError, KeyError, TypeError, ValueError) as exc:
            raise ConstructionError(f"{args.file}: not a breakpoint record list ({exc})") from None
    if not args.name:
        raise UsageError("a catalog name or --file is required")
    try:
        entry = lookup(args.name)
    except KeyError:
        raise UsageError(f"unknown function {args.name!r}; try 'list'") from None
    params = _params(args.param)
    allowed = {n for n, _ in entry.parameters}
    unknown = set(params) - allowed
    if entry.constructor is not None and unknown:
        raise UsageError(f"{entry.name} has no parameter(s) {', '.join(sorted(unknown))}")
    try:
        pi = entry.construct(**params)
    except NotImplementedError as exc:
        raise ConstructionError(str(exc)) from None
    return pi, input_descriptor(entry.name, params)


def _f(args):
    return None if getattr(args, "f", None) is None else _parse_value(args.f)


# -- commands ---------------------------------------------------------------


def cmd_list(args) -> int:
    entries = catalog()
    if args.json:
        _json_out([e.to_dict() for e in entries])
        return 0
    width = max(len(e.name) for e in entries)
    for e in entries:
        print(f"{e.name:<{width}}  {e.status:<13}  {e.constraints or '-'}")
    return 0


def cmd_show(args) -> int:
    pi, _ = load_function(args)
    if args.json:
        _json_out(pi.to_records())
        return 0
    print(f"{'point':>12} {'left':>12} {'value':>12} {'right':>12} {'slope':>12}")
    for rec in pi.to_records():
        print(
            f"{rec['point']:>12} {rec['left_limit']:>12} {rec['value']:>12} {rec['right_limit']:>12} "
            f"{rec['slope_to_next'] or '':>12}"
        )
    return 0


def cmd_minimality(args) -> int:
    pi, _ = load_function(args)
    report = minimality_test(pi, _f(args))
    _json_out(report.to_json())
    _status_line("minimality", "minimal" if report.is_minimal else "not minimal")
    return 0 if report.is_minimal else 1


def cmd_extremality(args) -> int:
    pi, _ = load_function(args)
    verdict = extremality_test(pi, _f(args))
    _json_out(verdict.to_json())
    _status_line("extremality", verdict.status)
    return verdict.exit_code


def cmd_oracle(args) -> int:
    pi, _ = load_function(args)
    report = oracle_check(pi, _f(args))
    _json_out(report.to_json())
    _status_line("oracle", report.verdict)
    return 0 if report.verdict == "extreme" else 1


def cmd_plot(args) -> int:
    pi, desc = load_function(args)
    title = desc.get("constructor") or desc.get("file")
    if args.function:
        funcs, labels = [pi], ["pi"]
        if args.witness:
            verdict = extremality_test(pi, _f(args))
            if verdict.status == NOT_EXTREME:
                w = verdict.witness
                funcs += [w.pi1, w.pi2, w.perturbation]
                labels += ["pi1 = pi + eps*pbar", "pi2 = pi - eps*pbar", "pbar"]
        svg = plot_function(funcs, labels, title=str(title))
    else:
        svg = plot_complex(pi, _f(args), title=str(title))
    Path(args.out).write_text(svg)
    return 0


def cmd_report(args) -> int:
    pi, desc = load_function(args)
    text = run_report(pi, desc, _f(args)).dumps(include_timings=args.timings)
    if args.json == "-":
        sys.stdout.write(text)
    else:
        Path(args.json).write_text(text)
    return 0


def cmd_search_random(args) -> int:
    try:
        spec = FamilySpec.from_file(args.family)
    except OSError as exc:
        raise FileNotFoundError(str(exc)) from None
    if args.count < 0:
        raise UsageError("--count must be nonnegative")
    summary = search_random(spec, args.count, args.seed)
    _json_out(summary.to_json())
    return 0


# -- parser -----------------------------------------------------------------


def _function_args(p: argparse.ArgumentParser, with_f: bool = True):
    p.add_argument("name", nargs="?", help="catalog name (see 'list')")
    p.add_argument("--param", action="append", metavar="K=V", help="constructor parameter, e.g. f=1/5")
    p.add_argument("--file", metavar="PATH", help="JSON list of breakpoint records instead of a catalog name")
    if with_f:
        p.add_argument("--f", metavar="F", help="override the detected f")


def build_parser() -> argparse.ArgumentParser:
    epilog = catalog_help()
    fmt = argparse.RawDescriptionHelpFormatter
    parser = _Parser(prog="groupcut", description="Exact minimality and extremality tests for cut-generating functions.",
                     epilog=epilog, formatter_class=fmt)
    parser.add_argument("--version", action="version", version=f"groupcut {__version__}")
    sub = parser.add_subparsers(dest="command", parser_class=_Parser, required=True)

    def add(name, help_, func):
        p = sub.add_parser(name, help=help_, description=help_, epilog=epilog, formatter_class=fmt)
        p.set_defaults(func=func)
        return p

    p = add("list", "list the function catalog", cmd_list)
    p.add_argument("--json", action="store_true")
    p = add("show", "construct a function and print its breakpoint table", cmd_show)
    _function_args(p, with_f=False)
    p.add_argument("--json", action="store_true")
    _function_args(add("minimality", "run the minimality test (exit 0 iff minimal)", cmd_minimality))
    _function_args(add("extremality", "run the extremality test (exit 0 Extreme, 1 NotExtreme, 2 Inconclusive)",
                       cmd_extremality))
    _function_args(add("oracle", "finite-group extremality oracle at N = 4q and 8q (continuous functions)",
                       cmd_oracle))
    p = add("plot", "write an SVG diagram of the complex or of the function", cmd_plot)
    _function_args(p)
    p.add_argument("--out", required=True, metavar="FILE.svg")
    kind = p.add_mutually_exclusive_group()
    kind.add_argument("--complex", action="store_true", help="Delta-P diagram (default)")
    kind.add_argument("--function", action="store_true", help="graph of the function")
    p.add_argument("--witness", action="store_true", help="with --function: overlay a NotExtreme decomposition")
    p = add("report", "write a JSON report of minimality and extremality", cmd_report)
    _function_args(p)
    p.add_argument("--json", required=True, metavar="FILE", help="output file, '-' for stdout")
    p.add_argument("--timings", action="store_true", help="include wall-clock timings (not byte-stable)")
    p = add("search-random", "classify seeded random samples of a parametric family", cmd_search_random)
    p.add_argument("--family", required=True, metavar="SPEC.json")
    p.add_argument("--count", type=int, default=100)
    p.add_argument("--seed", type=int, default=0)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        return args.func(args)
    except SystemExit as exc:  # --help and --version
        return exc.code if isinstance(exc.code, int) else 0
    except UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return EX_USAGE
    except (ConstructionError, BadFamilySpec) as exc:
        print(f"construction error: {exc}", file=sys.stderr)
        return EX_DATAERR
    except FileNotFoundError as exc:
        print(f"cannot read input: {exc}", file=sys.stderr)
        return EX_NOINPUT
    except InternalInconsistency as exc:
        print(f"internal error: {exc}", file=sys.stderr)
        return EX_SOFTWARE
    except GroupCutError as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EX_LIBRARY


def entry_point():
    sys.exit(main())

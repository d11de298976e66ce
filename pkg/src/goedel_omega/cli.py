"""Command-line front end.

Exit codes: 0 ok (or no counterexample found), 1 counterexample found,
2 parse error, 3 file or digit-source error.
"""

from __future__ import annotations

import argparse
import os
import sys
from dataclasses import dataclass
from fractions import Fraction
from pathlib import Path

from .embedding import Mode, fragment_report, real_const_formula, translate
from .numerics import DigitStreamError, TruthInterval, decimal_string, file_stream
from .parser import (ParseError, StreamRegistry, format_valuation, parse, parse_valuation,
                     print_formula, read_formula_lines)
from .semantics import (Counterexample, EvalConfig, Evaluator, Sampler, Valuation,
                        check_entailment, check_tautology)
from .syntax import structural_eq_to_depth

EXIT_OK, EXIT_COUNTEREXAMPLE, EXIT_PARSE, EXIT_IO = 0, 1, 2, 3
DEPTH_ENV = "GOEDEL_OMEGA_DEPTH"
DEFAULT_DEPTH = 10
DECIMAL_PLACES = 30


class InputError(Exception):
    """File-level failure; maps to exit code 3."""


def _frac(q: Fraction) -> str:
    return f"{q.numerator}/{q.denominator}" if q.denominator != 1 else str(q.numerator)


def _interval_rows(iv: TruthInterval) -> list[str]:
    exact = "\t".join(_frac(x) for x in (iv.lo, iv.hi, iv.width))
    approx = "\t".join(decimal_string(x, DECIMAL_PLACES) for x in (iv.lo, iv.hi, iv.width))
    return [f"exact\t{exact}", f"decimal\t{approx}"]


@dataclass
class RunContext:
    args: argparse.Namespace
    registry: StreamRegistry
    depth: int
    valuation: Valuation

    @property
    def sampler(self) -> Sampler:
        return Sampler(seed=self.args.seed, sample_count=self.args.samples)


def _read_text(path: str) -> str:
    try:
        return Path(path).read_text(encoding="utf-8")
    except (OSError, UnicodeDecodeError) as exc:
        raise InputError(f"cannot read {path}: {exc}") from None


def _formulas(ctx: RunContext) -> list[tuple[str, str]]:
    """``(label, text)`` pairs from the inline formula or the formula file."""
    args = ctx.args
    inline = args.formula_opt if args.formula_opt is not None else args.formula
    if inline is not None and args.formula_file:
        raise ParseError("give either a formula or --formula-file, not both")
    if inline is not None:
        return [("", inline)]
    if args.formula_file:
        lines = read_formula_lines(_read_text(args.formula_file))
        return [(f"{args.formula_file}:{k}", text) for k, text in lines]
    raise ParseError("no formula given")


def _parse(ctx: RunContext, label: str, text: str):
    try:
        return parse(text, ctx.registry)
    except ParseError as exc:
        prefix = f"{label}: " if label else ""
        raise ParseError(f"{prefix}{exc.message} in {text!r}", exc.position) from None


def _blocks(ctx: RunContext, render) -> tuple[int, str]:
    items = _formulas(ctx)
    code = EXIT_OK
    out = []
    for label, text in items:
        phi = _parse(ctx, label, text)
        block_code, lines = render(phi)
        code = max(code, block_code)
        if len(items) > 1:
            lines = [f"# {label}"] + lines
        out.append("\n".join(lines))
    return code, "\n\n".join(out) + "\n"


def cmd_eval(ctx: RunContext) -> tuple[int, str]:
    def render(phi):
        iv = Evaluator(ctx.depth).interval(phi, ctx.valuation)
        return EXIT_OK, [f"formula\t{print_formula(phi)}", "\tlo\thi\twidth"] + _interval_rows(iv)
    return _blocks(ctx, render)


def cmd_translate(ctx: RunContext) -> tuple[int, str]:
    mode = Mode.parse(ctx.args.mode or "+")

    def render(phi):
        out = translate(phi, mode)
        return EXIT_OK, [print_formula(out), f"fragments\t{fragment_report(out, ctx.depth)}"]
    return _blocks(ctx, render)


def _verdict_lines(verdict, depth: int, sampler: Sampler) -> tuple[int, list[str]]:
    if isinstance(verdict, Counterexample):
        iv = verdict.interval
        lines = ["verdict\tcounterexample",
                 f"source\t{verdict.source} {verdict.index}",
                 f"interval\t{_frac(iv.lo)}\t{_frac(iv.hi)}"]
        if verdict.premise_lo is not None:
            lines.append(f"premise_lo\t{_frac(verdict.premise_lo)}")
        lines.append("# valuation")
        lines.extend(format_valuation(verdict.valuation).splitlines())
        return EXIT_COUNTEREXAMPLE, lines
    random_count = verdict.samples - verdict.grid_points
    return EXIT_OK, [
        "verdict\tno-counterexample",
        f"checked\t{verdict.samples} valuations ({verdict.grid_points} grid, "
        f"{random_count} random, seed {sampler.seed}, depth {depth})",
        "note\tsampling is one-sided: no counterexample found does not prove validity",
    ]


def cmd_check(ctx: RunContext) -> tuple[int, str]:
    def render(phi):
        verdict = check_tautology(phi, ctx.depth, ctx.sampler)
        code, lines = _verdict_lines(verdict, ctx.depth, ctx.sampler)
        return code, [f"formula\t{print_formula(phi)}"] + lines
    return _blocks(ctx, render)


def cmd_entail(ctx: RunContext) -> tuple[int, str]:
    premises = [_parse(ctx, f"premise {k}", text)
                for k, text in enumerate(ctx.args.premise or [], start=1)]

    def render(phi):
        verdict = check_entailment(premises, phi, ctx.depth, ctx.sampler)
        code, lines = _verdict_lines(verdict, ctx.depth, ctx.sampler)
        head = [f"premise\t{print_formula(g)}" for g in premises]
        return code, head + [f"conclusion\t{print_formula(phi)}"] + lines
    return _blocks(ctx, render)


def cmd_converge(ctx: RunContext) -> tuple[int, str]:
    name = ctx.args.stream
    if name is None:
        raise ParseError("converge needs --stream NAME")
    try:
        d = ctx.registry.real(name)
    except KeyError:
        raise ParseError(f"unknown real constant {name!r}") from None
    modes = [Mode.parse(ctx.args.mode)] if ctx.args.mode else [Mode.PLUS, Mode.MINUS]
    val = ctx.valuation
    rows = [f"# stream {name}", "mode\tn\tlo\thi\twidth\tlo_decimal\thi_decimal"]
    for mode in modes:
        phi = real_const_formula(d, mode)
        for n in range(1, ctx.depth + 1):
            iv = Evaluator(n).interval(phi, val)
            rows.append("\t".join([mode.value, str(n), _frac(iv.lo), _frac(iv.hi),
                                   _frac(iv.width), decimal_string(iv.lo, DECIMAL_PLACES),
                                   decimal_string(iv.hi, DECIMAL_PLACES)]))
    return EXIT_OK, "\n".join(rows) + "\n"


def cmd_roundtrip(ctx: RunContext) -> tuple[int, str]:
    def render(phi):
        text = print_formula(phi)
        try:
            again = parse(text, ctx.registry)
        except ParseError as exc:
            return EXIT_COUNTEREXAMPLE, [f"roundtrip\tfailed\t{text}", f"error\t{exc}"]
        ok = structural_eq_to_depth(again, phi, ctx.depth)
        return (EXIT_OK if ok else EXIT_COUNTEREXAMPLE), [
            f"roundtrip\t{'ok' if ok else 'mismatch'}\t{text}"]
    return _blocks(ctx, render)


COMMANDS = {
    "eval": (cmd_eval, "certified truth interval of a formula"),
    "translate": (cmd_translate, "replace real constants by their rational definitions"),
    "check": (cmd_check, "search for a valuation refuting validity"),
    "entail": (cmd_entail, "search for a valuation refuting premises |= conclusion"),
    "converge": (cmd_converge, "convergence table of a real constant's definitions"),
    "roundtrip": (cmd_roundtrip, "parse, print and re-parse, comparing structurally"),
}


def _default_depth() -> int:
    raw = os.environ.get(DEPTH_ENV)
    if raw is None:
        return DEFAULT_DEPTH
    try:
        return int(raw)
    except ValueError:
        raise SystemExit(f"{DEPTH_ENV} must be an integer, got {raw!r}") from None


def _positive(text: str) -> int:
    value = int(text)
    if value < 1:
        raise argparse.ArgumentTypeError("must be at least 1")
    return value


def _nonnegative(text: str) -> int:
    value = int(text)
    if value < 0:
        raise argparse.ArgumentTypeError("must be nonnegative")
    return value


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("formula", nargs="?", help="formula text")
    common.add_argument("--formula", dest="formula_opt", help="formula text")
    common.add_argument("--formula-file", help="one formula per line")
    common.add_argument("--valuation", help="valuation file (p<k> = a/b, default = a/b)")
    common.add_argument("--depth", type=_positive, default=None,
                        help=f"truncation depth (default ${DEPTH_ENV} or {DEFAULT_DEPTH})")
    common.add_argument("--mode", choices=["+", "-"], default=None)
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--samples", type=_nonnegative, default=1000)
    common.add_argument("--digits", action="append", metavar="NAME=FILE", default=[],
                        help="register a digit file as a real constant")
    common.add_argument("--out", help="write the report here instead of stdout")

    parser = argparse.ArgumentParser(
        prog="goedel-omega",
        description="Infinitary Gödel logic with rational and real constants.")
    sub = parser.add_subparsers(dest="command", required=True)
    for name, (_, help_text) in COMMANDS.items():
        p = sub.add_parser(name, parents=[common], help=help_text)
        if name == "entail":
            p.add_argument("--premise", action="append", help="premise formula (repeatable)")
        if name == "converge":
            p.add_argument("--stream", help="registered real constant name")
    return parser


def _context(args: argparse.Namespace) -> RunContext:
    registry = StreamRegistry.default()
    for entry in args.digits:
        name, eq, path = entry.partition("=")
        if not eq or not name or not path:
            raise ParseError(f"--digits expects NAME=FILE, got {entry!r}")
        try:
            registry.add_real(name, file_stream(path, name))
        except OSError as exc:
            raise InputError(f"cannot read {path}: {exc}") from None
        except ValueError as exc:
            if isinstance(exc, DigitStreamError):
                raise InputError(str(exc)) from None
            raise ParseError(str(exc)) from None
    valuation = Valuation()
    if args.valuation:
        valuation = parse_valuation(_read_text(args.valuation))
    depth = args.depth if args.depth is not None else _default_depth()
    EvalConfig(depth)
    return RunContext(args, registry, depth, valuation)


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    handler = COMMANDS[args.command][0]
    try:
        ctx = _context(args)
        code, report = handler(ctx)
    except ParseError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except (InputError, DigitStreamError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_IO
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    if args.out:
        try:
            Path(args.out).write_text(report, encoding="utf-8")
        except OSError as exc:
            print(f"error: cannot write {args.out}: {exc}", file=sys.stderr)
            return EXIT_IO
    else:
        sys.stdout.write(report)
    return code


if __name__ == "__main__":
    sys.exit(main())

"""Command-line front end (``homsim``).

Subcommands::

    homsim scenario --name b1 --sign + --theta 0.5pi
    homsim sweep    --name b1 --sign + --min 0 --max 2pi --steps 361 --out dip.csv
    homsim ensemble --mix a1+:0.25,a1-:0.25,a2sym:0.25,a2anti:0.25 [--samples N --seed S]
    homsim washout  --name b1 --sign + [--samples N --seed S]
    homsim oracle   --state 1,1 --sign + [--stages 1] [--n-max 2] [--summary]
    homsim run      circuit.homc

Exit status is 0 on success, 1 on a domain error (one line on stderr) and 2
on a usage error.
"""

from __future__ import annotations

import argparse
import math
import os
import re
import sys
from typing import Iterable, Optional, Sequence

from . import __version__
from .circuit import evaluate_circuit, load_circuit, parse_angle
from .core_optics import BasisSign, Branch
from .ensemble import (
    EnsembleStats,
    MixComponent,
    SweepRow,
    UniformTheta,
    exact_mixture,
    monte_carlo,
    theta_sweep,
    washout_average,
)
from .errors import HomsimError, ParameterMismatch, UnknownScenario, WeightSumInvalid
from .fock_oracle import FockState, coincidence_probability, fock_apply_bs, port_probabilities
from .scenarios import ScenarioResult, ScenarioSpec, run

SWEEP_HEADER = ("theta_rad", "i_first", "i_second", "r_cd")
STATS_HEADER = ("mean_i_first", "mean_i_second", "mean_r", "g2_zero", "n_samples")
RESULT_HEADER = ("label", "re_first", "im_first", "re_second", "im_second", "i_first", "i_second", "r_cd")
ORACLE_HEADER = ("n_first", "n_second", "re", "im", "probability")
ORACLE_SUMMARY_HEADER = ("coincidence", "p_first", "p_second")

# values below this magnitude are rendered as 0 (double-precision residue)
ZERO_SNAP = 1e-12

MIX_HELP = """\
mixture grammar: TAG:WEIGHT[,TAG:WEIGHT...], weights summing to 1
  TAG := a1+ | a1- | c1+ | c1- | a2sym | a2anti
       | b1+@ANGLE | b1-@ANGLE | b2sym@ANGLE | b2anti@ANGLE
       | c2sym@ANGLE | c2anti@ANGLE
  ANGLE is a decimal, optionally suffixed with pi (e.g. 0.5pi)
example: a1+:0.25,a1-:0.25,a2sym:0.25,a2anti:0.25
"""

_TAG_RE = re.compile(r"(?P<name>[abc][12])(?P<param>\+|-|sym|anti)(?:@(?P<theta>.+))?")


class UsageError(Exception):
    pass


def format_number(x) -> str:
    """12 significant digits; sub-1e-12 magnitudes print as 0."""
    if isinstance(x, (int,)) and not isinstance(x, bool):
        return str(x)
    x = float(x)
    if math.isnan(x):
        return "nan"
    if abs(x) < ZERO_SNAP:
        return "0"
    return format(x, ".12g")


def _row_for(item) -> tuple:
    if isinstance(item, SweepRow):
        return SWEEP_HEADER, (item.theta, item.i_first, item.i_second, item.r_cd)
    if isinstance(item, EnsembleStats):
        return STATS_HEADER, (item.mean_i_first, item.mean_i_second, item.mean_r, item.g2_zero, item.n_samples)
    if isinstance(item, ScenarioResult):
        a, b = item.out.a, item.out.b
        return RESULT_HEADER, (item.branch_label, a.real, a.imag, b.real, b.imag,
                               item.i_first, item.i_second, item.r_cd)
    raise TypeError(f"cannot serialize {type(item).__name__}")


def render_csv(rows: Sequence, header: Optional[Sequence[str]] = None) -> str:
    rows = list(rows)
    lines = []
    for item in rows:
        head, values = _row_for(item) if not isinstance(item, tuple) else (header, item)
        if header is None:
            header = head
        elif head != header:
            raise TypeError("rows are not homogeneous")
        lines.append(",".join(v if isinstance(v, str) else format_number(v) for v in values))
    if header is None:
        raise TypeError("cannot infer a CSV header from an empty row list")
    return "\n".join([",".join(header)] + lines) + "\n"


def render_table(rows: Sequence, header: Optional[Sequence[str]] = None) -> str:
    """Right-aligned fixed-width text table."""
    csv_text = render_csv(rows, header)
    cells = [line.split(",") for line in csv_text.rstrip("\n").split("\n")]
    widths = [max(len(r[k]) for r in cells) for k in range(len(cells[0]))]
    out = ["  ".join(c.rjust(w) for c, w in zip(r, widths)) for r in cells]
    out.insert(1, "  ".join("-" * w for w in widths))
    return "\n".join(out) + "\n"


def _write(text: str, destination) -> None:
    if destination is None or destination == "-":
        sys.stdout.write(text)
        sys.stdout.flush()
    elif hasattr(destination, "write"):
        destination.write(text)
    else:
        try:
            with open(destination, "w", encoding="utf-8", newline="\n") as fh:
                fh.write(text)
        except OSError as exc:
            raise HomsimError(f"cannot write {destination}: {exc.strerror or exc}") from exc


def emit_csv(rows: Iterable, destination=None, header: Optional[Sequence[str]] = None) -> None:
    """Write rows as LF-terminated CSV to a path, a file object, or stdout (``None``/``-``).

    The header is inferred from the row type; pass ``header`` for an empty
    list or for plain tuples.
    """
    _write(render_csv(list(rows), header), destination)


def parse_mixture(text: str) -> list[MixComponent]:
    components = []
    for part in (p.strip() for p in text.split(",")):
        if not part:
            raise UnknownScenario(f"empty mixture entry in {text!r}")
        tag, sep, weight_text = part.rpartition(":")
        if not sep:
            raise WeightSumInvalid(f"mixture entry {part!r} has no :weight")
        try:
            weight = float(weight_text)
        except ValueError:
            raise WeightSumInvalid(f"bad weight {weight_text!r} in {part!r}") from None
        components.append(MixComponent(parse_tag(tag), weight))
    return components


def parse_tag(tag: str) -> ScenarioSpec:
    m = _TAG_RE.fullmatch(tag.strip().lower())
    if not m:
        raise UnknownScenario(f"unknown mixture tag {tag!r}")
    name, param, theta_text = m["name"].upper(), m["param"], m["theta"]
    theta = None
    if theta_text is not None:
        try:
            theta = parse_angle(theta_text).radians
        except ValueError as exc:
            raise ParameterMismatch(f"{tag!r}: {exc}") from None
    if name.endswith("1") and param in ("sym", "anti") or name.endswith("2") and param in ("+", "-"):
        raise UnknownScenario(f"unknown mixture tag {tag!r}")
    if param in ("+", "-"):
        spec = ScenarioSpec(name, sign=param, theta=theta)
    else:
        spec = ScenarioSpec(name, branch=param, theta=theta)
    if spec.uses_theta and spec.theta is None:
        raise ParameterMismatch(f"tag {tag!r} needs a phase, e.g. {tag}@0.5pi")
    return spec


def _angle_arg(text: str) -> float:
    try:
        return parse_angle(text).radians
    except ValueError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None


def _sign_arg(text: str) -> BasisSign:
    try:
        return BasisSign.coerce(text)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None


def _branch_arg(text: str) -> Branch:
    try:
        return Branch.coerce(text)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None


def _state_arg(text: str) -> tuple[int, int]:
    m = re.fullmatch(r"\s*(\d+)\s*,\s*(\d+)\s*", text)
    if not m:
        raise argparse.ArgumentTypeError(f"state must look like N1,N2, got {text!r}")
    return int(m[1]), int(m[2])


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(f"{self.prog}: error: {message}")


def build_parser() -> argparse.ArgumentParser:
    common = _Parser(add_help=False)
    common.add_argument("--out", metavar="PATH", help="write to PATH instead of stdout")
    common.add_argument("--format", choices=("csv", "table"), default="csv")

    def scenario_args(p, theta=True):
        p.add_argument("--name", required=True, type=str.upper,
                       choices=("A1", "A2", "B1", "B2", "C1", "C2"), metavar="NAME",
                       help="one of a1 a2 b1 b2 c1 c2")
        group = p.add_mutually_exclusive_group()
        group.add_argument("--sign", type=_sign_arg, help="beam-splitter basis, + or - (a1, b1, c1)")
        group.add_argument("--branch", type=_branch_arg, help="sym or anti (a2, b2, c2)")
        if theta:
            p.add_argument("--theta", type=_angle_arg, help="relative input phase, e.g. 0.5pi")

    def sampling_args(p):
        p.add_argument("--samples", type=int, default=0, help="Monte Carlo samples (0 = exact)")
        p.add_argument("--seed", type=int, default=None, help="RNG seed; defaults to $HOMSIM_SEED")
        p.add_argument("--shards", type=int, default=1, help="independent RNG streams (part of the seed contract)")

    parser = _Parser(prog="homsim", description="Wave-model beam-splitter and interferometer simulator.")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("scenario", parents=[common], help="evaluate one named scenario")
    scenario_args(p)

    p = sub.add_parser("sweep", parents=[common], help="sweep the relative input phase")
    scenario_args(p, theta=False)
    p.add_argument("--min", dest="theta_min", type=_angle_arg, default=0.0)
    p.add_argument("--max", dest="theta_max", type=_angle_arg, default=2 * math.pi)
    p.add_argument("--steps", type=int, default=361)

    p = sub.add_parser("ensemble", parents=[common], help="mixture statistics and g2(0)",
                       epilog=MIX_HELP, formatter_class=argparse.RawDescriptionHelpFormatter)
    p.add_argument("--mix", required=True, help="weighted scenario mixture, see below")
    sampling_args(p)

    p = sub.add_parser("washout", parents=[common], help="average a scenario over uniform phase")
    scenario_args(p, theta=False)
    sampling_args(p)

    p = sub.add_parser("oracle", parents=[common], help="Fock-space beam-splitter oracle")
    p.add_argument("--state", type=_state_arg, default=(1, 1), help="input occupations N1,N2")
    p.add_argument("--sign", type=_sign_arg, default=BasisSign.PLUS)
    p.add_argument("--stages", type=int, default=1, help="number of beam splitters in series")
    p.add_argument("--n-max", type=int, default=None, help="photon cap (default: input photon number)")
    p.add_argument("--summary", action="store_true", help="print coincidence and port probabilities only")

    p = sub.add_parser("run", parents=[common], help="evaluate a .homc circuit file")
    p.add_argument("path")
    return parser


def _spec_from(args, theta=None) -> ScenarioSpec:
    return ScenarioSpec(args.name, sign=args.sign, branch=args.branch, theta=theta)


def _resolve_seed(args) -> Optional[int]:
    if args.samples < 0:
        raise UsageError("homsim: error: --samples must be >= 0")
    seed = args.seed
    if seed is None and os.environ.get("HOMSIM_SEED", "").strip():
        try:
            seed = int(os.environ["HOMSIM_SEED"])
        except ValueError:
            raise UsageError(f"homsim: error: HOMSIM_SEED is not an integer: {os.environ['HOMSIM_SEED']!r}") from None
    if args.samples > 0 and seed is None:
        raise UsageError("homsim: error: --seed (or HOMSIM_SEED) is required when --samples > 0")
    return seed


def _dispatch(args) -> tuple[list, Optional[tuple]]:
    """Return (rows, explicit header or None)."""
    if args.command == "scenario":
        return [run(_spec_from(args, args.theta))], None
    if args.command == "sweep":
        return theta_sweep(_spec_from(args), args.theta_min, args.theta_max, args.steps), SWEEP_HEADER
    if args.command == "ensemble":
        seed = _resolve_seed(args)
        mix = parse_mixture(args.mix)
        if args.samples > 0:
            return [monte_carlo(mix, args.samples, seed, shards=args.shards)], None
        return [exact_mixture(mix)], None
    if args.command == "washout":
        seed = _resolve_seed(args)
        spec = _spec_from(args)
        if args.samples > 0:
            return [monte_carlo(UniformTheta(spec), args.samples, seed, shards=args.shards)], None
        return [washout_average(spec)], None
    if args.command == "oracle":
        n1, n2 = args.state
        n_max = n1 + n2 if args.n_max is None else args.n_max
        if args.stages < 0:
            raise UsageError("homsim: error: --stages must be >= 0")
        state = FockState.basis(n1, n2, n_max=n_max)
        for _ in range(args.stages):
            state = fock_apply_bs(state, args.sign)
        if args.summary:
            p1, p2 = port_probabilities(state)
            return [(coincidence_probability(state), p1, p2)], ORACLE_SUMMARY_HEADER
        rows = [(r[0], r[1], r[2].real, r[2].imag, r[3]) for r in state.table()]
        return rows, ORACLE_HEADER
    if args.command == "run":
        try:
            ast = load_circuit(args.path)
        except OSError as exc:
            raise HomsimError(f"cannot read {args.path}: {exc.strerror or exc}") from exc
        return [evaluate_circuit(ast)], None
    raise UsageError(f"homsim: error: unknown command {args.command!r}")


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        rows, header = _dispatch(args)
        render = render_table if args.format == "table" else render_csv
        _write(render(rows, header), args.out)
    except UsageError as exc:
        print(exc, file=sys.stderr)
        return 2
    except SystemExit as exc:  # --help / --version
        return int(exc.code or 0)
    except (HomsimError, ValueError) as exc:
        print(f"homsim: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())

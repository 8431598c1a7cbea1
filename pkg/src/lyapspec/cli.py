"""Command-line front end.

    spectra spectrum    --slopes 2,4 [--grid lo,hi,count|auto] [--format csv|json] [--out PATH]
    spectra classify    --log-slopes 1,45
    spectra bifurcation 2.718281828459045
    spectra bowen       --family sine --params '{"slopes": [2, 4], "eps": 0.2}' --depth 8

Map flags: exactly one of --slopes, --log-slopes, --two-branch, --family.
Slopes may be given raw (--slopes "-2,4" takes magnitudes) or on the log
scale (--log-slopes 1,45).  A JSON config file mirroring these options can
be supplied with --config; explicit flags override it.

Exit codes: 0 success (classify: concave), 1 classify found a non-concave
spectrum, 2 invalid input, 3 output I/O failure.  stdout carries data only;
diagnostics go to stderr.
"""

from __future__ import annotations

import argparse
import json
import sys

from pydantic import ValidationError

from . import ops
from .errors import CylinderBudgetError, DomainError, InvalidMapError, LyapSpecError
from .schemas import RunConfig, SpectrumResponse

CSV_HEADER = "t,alpha,pressure,sigma2,entropy,L,G"


def _parse_floats(text: str) -> list[float]:
    return [float(tok) for tok in text.split(",") if tok.strip()]


def _add_map_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--slopes", help="comma-separated branch slopes, e.g. 2,4")
    p.add_argument("--log-slopes", dest="log_slopes",
                   help="comma-separated log slopes, e.g. 1,45")
    p.add_argument("--two-branch", dest="two_branch",
                   help="two slopes a,b of a two-branch map")
    p.add_argument("--family", choices=("linear", "mobius", "sine"),
                   help="builtin nonlinear branch family")
    p.add_argument("--params", help="family parameters as a JSON object, "
                                    "e.g. '{\"slopes\": [2, 4], \"eps\": 0.2}'")
    p.add_argument("--depth", type=int, help="cylinder depth for family maps")
    p.add_argument("--config", help="JSON file with defaults; flags override")
    p.add_argument("--out", help="write output to PATH instead of stdout")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="spectra", description=__doc__,
                                     formatter_class=argparse.RawDescriptionHelpFormatter)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("spectrum", help="export the sampled dimension spectrum")
    _add_map_flags(p)
    p.add_argument("--grid", default=None,
                   help="t grid as lo,hi,count or 'auto'; values starting "
                        "with a dash need the --grid=-2,2,101 form")
    p.add_argument("--format", choices=("csv", "json"), default=None)

    p = sub.add_parser("classify", help="concavity verdict and inflection points")
    _add_map_flags(p)

    p = sub.add_parser("bifurcation",
                       help="threshold ratio and bifurcation slope for a given a")
    p.add_argument("a", type=float, help="shallow slope (> 1)")

    p = sub.add_parser("bowen", help="dimension of the repeller (pressure root)")
    _add_map_flags(p)
    return parser


_MAP_FLAGS = ("slopes", "log_slopes", "two_branch", "family")


def _merged_config(args: argparse.Namespace) -> RunConfig:
    data: dict = {}
    if getattr(args, "config", None):
        with open(args.config, encoding="utf-8") as fh:
            data.update(json.load(fh))
    given = [name for name in _MAP_FLAGS if getattr(args, name, None)]
    if len(given) > 1:
        raise InvalidMapError(
            f"conflicting map flags: {', '.join('--' + g.replace('_', '-') for g in given)}")
    if given:
        # an explicit map flag replaces the config file's map entirely
        for name in _MAP_FLAGS:
            data.pop(name, None)
        name = given[0]
        if name == "slopes":
            data["slopes"] = _parse_floats(args.slopes)
        elif name == "log_slopes":
            data["log_slopes"] = _parse_floats(args.log_slopes)
        elif name == "two_branch":
            pair = _parse_floats(args.two_branch)
            if len(pair) != 2:
                raise InvalidMapError("--two-branch needs exactly two slopes a,b")
            data["two_branch"] = tuple(pair)
        else:
            data["family"] = args.family
    if getattr(args, "params", None):
        data["params"] = json.loads(args.params)
    if getattr(args, "depth", None) is not None:
        data["depth"] = args.depth
    if getattr(args, "grid", None):
        if args.grid == "auto":
            data["grid"] = "auto"
        else:
            lo, hi, count = args.grid.split(",")
            data["grid"] = (float(lo), float(hi), int(count))
    if getattr(args, "format", None):
        data["format"] = args.format
    if getattr(args, "out", None):
        data["out"] = args.out
    return RunConfig(**data)


def _emit(text: str, out_path: str | None) -> None:
    if out_path:
        with open(out_path, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def format_curve_csv(resp: SpectrumResponse) -> str:
    # repr() floats round-trip exactly, so parsing the CSV reproduces the
    # in-memory curve bit for bit
    lines = [CSV_HEADER]
    for s in resp.samples:
        lines.append(",".join(repr(v) for v in
                              (s.t, s.alpha, s.pressure, s.sigma2,
                               s.entropy, s.L, s.G)))
    return "\n".join(lines) + "\n"


def cmd_spectrum(args) -> int:
    cfg = _merged_config(args)
    resp = ops.run_spectrum(cfg, grid=cfg.grid)
    if resp.degenerate:
        print("warning: equal-slope map; the spectrum collapses to a single point",
              file=sys.stderr)
    if cfg.format == "csv":
        text = format_curve_csv(resp)
    else:
        text = resp.model_dump_json(indent=2) + "\n"
    _emit(text, cfg.out)
    return 0


def cmd_classify(args) -> int:
    cfg = _merged_config(args)
    resp = ops.run_classify(cfg, tol=cfg.tolerances.classify)
    _emit(resp.model_dump_json(indent=2) + "\n", cfg.out)
    return 0 if resp.concave else 1


def cmd_bifurcation(args) -> int:
    resp = ops.run_bifurcation(args.a)
    lines = [
        f"a {resp.a!r}",
        f"critical_ratio {resp.critical_ratio!r}",
        f"log_b_star {resp.log_b_star!r}",
        f"b_star {resp.b_star!r}",
        f"classify_below {resp.verdict_below}",
        f"classify_above {resp.verdict_above}",
        f"flip_verified {'true' if resp.flip_verified else 'false'}",
    ]
    sys.stdout.write("\n".join(lines) + "\n")
    return 0


def cmd_bowen(args) -> int:
    cfg = _merged_config(args)
    resp = ops.run_bowen(cfg)
    lines = [
        f"t_d {resp.t_d!r}",
        f"alpha_d {resp.alpha_d!r}",
        f"L_at_alpha_d {resp.L_at_alpha_d!r}",
    ]
    if resp.depth is not None:
        lines.append(f"depth {resp.depth}")
        lines.append(f"depth_stability {resp.depth_stability!r}")
    text = "\n".join(lines) + "\n"
    _emit(text, cfg.out)
    return 0


_COMMANDS = {
    "spectrum": cmd_spectrum,
    "classify": cmd_classify,
    "bifurcation": cmd_bifurcation,
    "bowen": cmd_bowen,
}


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return _COMMANDS[args.command](args)
    except (CylinderBudgetError, ValidationError, ValueError,
            json.JSONDecodeError) as exc:
        # InvalidMapError / DomainError are ValueErrors; so are malformed
        # numbers in flag values
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"i/o error: {exc}", file=sys.stderr)
        return 3
    except LyapSpecError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 4


def entrypoint() -> None:
    raise SystemExit(main())


if __name__ == "__main__":
    entrypoint()

"""Command-line front end: ``surdnorm <subcommand> ...``.

Points are named by their radicand: ``--s 2`` means ``sqrt(2) - 1`` (the
fractional part), and commands working on the square use its square.
Output is JSON on one line unless a command emits CSV. Exit codes: 0 ok,
2 usage or validation error, 3 precision exhausted, 4 search exhausted.
"""

from __future__ import annotations

import argparse
import dataclasses
import json
import logging
import os
import sys
from collections.abc import Sequence
from dataclasses import dataclass
from pathlib import Path
from typing import Any

from . import boxes, expansion, findiff
from .bigint_core import DEFAULT_GUARD_BIT_CAP, guard_bit_cap
from .errors import PrecisionExhausted, SearchExhausted, SurdError

log = logging.getLogger("surdnorm")

CONFIG_ENV = "SURDNORM_CONFIG"

EXIT_OK, EXIT_USAGE, EXIT_PRECISION, EXIT_SEARCH = 0, 2, 3, 4


@dataclass(frozen=True)
class RunConfig:
    guard_bit_cap: int = DEFAULT_GUARD_BIT_CAP
    nr_cap: int | None = None
    mn_cap: int | None = None
    i_max: int | None = None
    output_format: str | None = None
    output_path: str | None = None

    def __post_init__(self) -> None:
        for name in ("guard_bit_cap", "nr_cap", "mn_cap", "i_max"):
            v = getattr(self, name)
            if v is not None and v < 1:
                raise ValueError(f"{name} must be positive, got {v}")
        if self.output_format not in (None, "json", "csv"):
            raise ValueError(f"output_format must be json or csv, got {self.output_format}")


def load_config(path: str | os.PathLike[str] | None) -> RunConfig:
    """Read a ``key = value`` file; ``#`` starts a comment."""
    if path is None:
        return RunConfig()
    fields = {f.name: f for f in dataclasses.fields(RunConfig)}
    values: dict[str, Any] = {}
    for lineno, raw in enumerate(Path(path).read_text().splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        key, sep, value = (part.strip() for part in line.partition("="))
        if not sep or key not in fields:
            raise ValueError(f"{path}:{lineno}: bad config line {raw!r}")
        values[key] = value if key in ("output_format", "output_path") else int(value)
    return RunConfig(**values)


def parse_flips(text: str, omega: expansion.QuadraticSurd) -> dict[int, int]:
    """``"1:+1,3:-1"``; a bare position toggles that digit."""
    flips: dict[int, int] = {}
    for item in filter(None, (p.strip() for p in text.split(","))):
        pos, _, direction = item.partition(":")
        j = int(pos)
        if direction:
            flips[j] = int(direction)
        else:
            flips[j] = -1 if findiff.pinned_floor(omega, j) & 1 else 1
    return flips


def _int_list(text: str) -> list[int]:
    return [int(x) for x in text.split(",") if x.strip()]


def _surd(x: expansion.QuadraticSurd) -> dict[str, int]:
    return x.as_dict()


def _dumps(obj: Any) -> str:
    return json.dumps(obj, separators=(",", ":"))


def _report_csv(report: findiff.DifferenceReport) -> str:
    lines = ["index,du,num,den"]
    for e in report.entries:
        du = "" if e.du is None else str(e.du)
        lines.append(f"{e.index},{du},{e.value.numerator},{e.value.denominator}")
    return "\n".join(lines)


def _emit_report(report: findiff.DifferenceReport, fmt: str) -> str:
    return _report_csv(report) if fmt == "csv" else report.to_json()


def _json_only(fmt: str | None, cmd: str) -> None:
    # only an explicit --format csv is an error; a config default is ignored here
    if fmt == "csv":
        raise SurdError(f"{cmd} has no CSV form")


def _pair(args: argparse.Namespace) -> findiff.PerturbationPair:
    omega = expansion.lambda_of(args.s)
    return findiff.apply_x_flips(omega, parse_flips(args.flips, omega))


def cmd_digits(args, cfg) -> str:
    _json_only(args.format, "digits")
    x = expansion.lambda_of(args.s)
    if args.square:
        x = expansion.square_surd(x)
    e = expansion.digits(x, args.bits)
    return _dumps({
        "op": "digits", "s": args.s, "point": "lambda_squared" if args.square else "lambda",
        "bits": args.bits, "exactness": e.exactness.value, "digits": e.to_string(),
    })


def cmd_freq(args, cfg) -> str:
    fmt = args.format or cfg.output_format or "csv"
    if args.stride < 1:
        raise SurdError("stride must be positive")
    log.info("extracting %d digits of sqrt(%d)", args.n, args.s)
    e = expansion.digits(expansion.lambda_of(args.s), args.n)
    points = expansion.freq_series(e, range(args.stride, args.n + 1, args.stride))
    log.info("computed %d frequency points", len(points))
    if fmt == "json":
        return _dumps({
            "op": "freq", "s": args.s, "n": args.n, "stride": args.stride,
            "points": [[p.n, p.ones, str(p.f.numerator), str(p.f.denominator)] for p in points],
        })
    return "\n".join([expansion.CSV_HEADER] + [p.csv_row() for p in points])


def _lemma_scale(args) -> int:
    return expansion.minimal_scale(args.s) if args.l is None else args.l


def cmd_lemma_points(args, cfg) -> str:
    _json_only(args.format, "lemma-points")
    l = _lemma_scale(args)
    a, b = expansion.build_lemma_points(args.s, l)
    return _dumps({
        "op": "lemma-points", "s": args.s, "l": l,
        "omega_s1": _surd(a), "omega_s2": _surd(b),
        "square_s1": _surd(expansion.square_surd(a)),
        "square_s2": _surd(expansion.square_surd(b)),
    })


def cmd_tailmatch(args, cfg) -> str:
    _json_only(args.format, "tailmatch")
    l = _lemma_scale(args)
    a, b = expansion.build_lemma_points(args.s, l)
    da = expansion.digits(expansion.square_surd(a), args.bits)
    db = expansion.digits(expansion.square_surd(b), args.bits)
    return _dumps({
        "op": "tailmatch", "s": args.s, "l": l, "bits": args.bits,
        "first_agreement": expansion.first_tail_agreement(da, db), "bound": 4 * l,
    })


def cmd_nr(args, cfg) -> str:
    _json_only(args.format, "nr")
    cap = args.cap or cfg.nr_cap
    result = boxes.compute_Nr(expansion.lambda_of(args.s), args.r, cap)
    return _dumps({"op": "Nr", "s": args.s, "r": args.r, "result": result})


def cmd_mn(args, cfg) -> str:
    _json_only(args.format, "mn")
    cap = args.cap or cfg.mn_cap
    nu = expansion.square_surd(expansion.lambda_of(args.s))
    result = boxes.compute_Mn(nu, args.n, cap)
    return _dumps({"op": "Mn", "s": args.s, "n": args.n, "result": result})


def cmd_xprefix(args, cfg) -> str:
    _json_only(args.format, "xprefix")
    res = boxes.x_prefix_from_u_prefix(args.u, args.n)
    return _dumps({
        "op": "xprefix", "u": args.u, "n": args.n, "determined": res.determined,
        "x_prefix": res.bit_string(), "witness_m": res.witness_m,
    })


def cmd_pair(args, cfg) -> str:
    _json_only(args.format, "pair")
    pair = _pair(args)
    imax = args.imax or cfg.i_max or 16
    return _dumps({
        "op": "pair", "pair": pair.describe(), "omega1": _surd(pair.omega1),
        "nu": _surd(pair.nu), "nu1": _surd(pair.nu1),
        "delta_u": [du for _, du in findiff.delta_u(pair, imax)],
    })


def cmd_totaldiff(args, cfg) -> str:
    report = findiff.total_diff_check(_pair(args), args.n, args.I or cfg.i_max)
    return _emit_report(report, args.format or cfg.output_format or "json")


def cmd_chain(args, cfg) -> str:
    report = findiff.chain_rule_check(_pair(args), args.n, args.j, args.imax or cfg.i_max)
    return _emit_report(report, args.format or cfg.output_format or "json")


def cmd_decay(args, cfg) -> str:
    report = findiff.decay_series(_pair(args), args.k, _int_list(args.n_list))
    return _emit_report(report, args.format or cfg.output_format or "json")


def cmd_invariance(args, cfg) -> str:
    pair = _pair(args)
    report = findiff.invariance_check(pair.nu, pair, args.k, args.n)
    return _emit_report(report, args.format or cfg.output_format or "json")


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", help=f"key = value config file (default ${CONFIG_ENV})")
    common.add_argument("--format", choices=("json", "csv"))
    common.add_argument("--output", help="write to this file instead of stdout")
    common.add_argument("-v", "--verbose", action="store_true", help="progress on stderr")

    parser = argparse.ArgumentParser(prog="surdnorm", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    def add(name: str, func, help: str) -> argparse.ArgumentParser:
        p = sub.add_parser(name, parents=[common], help=help)
        p.set_defaults(func=func)
        return p

    p = add("digits", cmd_digits, "binary digits of sqrt(s) - floor(sqrt(s))")
    p.add_argument("--s", type=int, required=True)
    p.add_argument("--bits", type=int, required=True)
    p.add_argument("--square", action="store_true", help="digits of the square instead")

    p = add("freq", cmd_freq, "running frequency of ones (CSV)")
    p.add_argument("--s", type=int, required=True)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--stride", type=int, default=1000)

    for name, func, help in (
        ("lemma-points", cmd_lemma_points, "the two points whose squares share a tail"),
        ("tailmatch", cmd_tailmatch, "first position of tail agreement of the squares"),
    ):
        p = add(name, func, help)
        p.add_argument("--s", type=int, required=True)
        p.add_argument("--l", type=int, help="scale exponent (default: smallest with 2**l > s)")
        if name == "tailmatch":
            p.add_argument("--bits", type=int, default=4096)

    p = add("nr", cmd_nr, "root digits needed to fix r digits of the square")
    p.add_argument("--s", type=int, required=True)
    p.add_argument("--r", type=int, required=True)
    p.add_argument("--cap", type=int)

    p = add("mn", cmd_mn, "square digits needed to fix n root digits")
    p.add_argument("--s", type=int, required=True)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--cap", type=int)

    p = add("xprefix", cmd_xprefix, "root digits determined by a square-digit prefix")
    p.add_argument("--u", required=True, help="bit string, most significant first")
    p.add_argument("--n", type=int, required=True)

    def add_pair(name: str, func, help: str) -> argparse.ArgumentParser:
        p = add(name, func, help)
        p.add_argument("--s", type=int, required=True)
        p.add_argument("--flips", default="1", help='e.g. "1:+1,3:-1"; bare j toggles digit j')
        return p

    p = add_pair("pair", cmd_pair, "perturbation pair and square-digit changes")
    p.add_argument("--imax", type=int)
    p = add_pair("totaldiff", cmd_totaldiff, "partial differences and telescoping checks")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--I", type=int)
    p = add_pair("chain", cmd_chain, "chain-rule sum against its expected value")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--j", type=int, required=True)
    p.add_argument("--imax", type=int)
    p = add_pair("decay", cmd_decay, "a fixed partial difference as n grows")
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--n-list", default="2,4,8,16,32,64")
    p = add_pair("invariance", cmd_invariance, "spread over prefix variants of the square")
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--n", type=int, required=True)
    return parser


def run(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_OK if exc.code in (0, None) else EXIT_USAGE
    handler = logging.StreamHandler(sys.stderr)
    handler.setFormatter(logging.Formatter("%(name)s: %(message)s"))
    log.addHandler(handler)
    log.setLevel(logging.INFO if args.verbose else logging.WARNING)
    log.propagate = False
    try:
        cfg = load_config(args.config or os.environ.get(CONFIG_ENV))
        with guard_bit_cap(cfg.guard_bit_cap):
            text = args.func(args, cfg)
    except PrecisionExhausted as exc:
        print(f"surdnorm: {exc}", file=sys.stderr)
        return EXIT_PRECISION
    except SearchExhausted as exc:
        print(f"surdnorm: {exc}", file=sys.stderr)
        return EXIT_SEARCH
    except (SurdError, ValueError, OSError) as exc:
        print(f"surdnorm: {exc}", file=sys.stderr)
        return EXIT_USAGE
    finally:
        log.removeHandler(handler)
    out = args.output or cfg.output_path
    if out:
        Path(out).write_text(text + "\n")
    else:
        sys.stdout.write(text + "\n")
    return EXIT_OK


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()

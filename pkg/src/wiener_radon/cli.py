"""Command-line front end: ``wiener-radon <command> [options]``.

Exit codes: 0 success, 1 verification failure, 2 input error.
"""

from __future__ import annotations

import argparse
import json
import logging
import math
import sys
from dataclasses import dataclass, field

from . import kernels
from .affine import bridge_subspace, closest_point, subspace_from_json
from .cm_space import Grid, grid_for_times, kernel_vector, vector_from_json
from .errors import SchemaError, WienerRadonError
from .grt_core import conditioned_law, multi_bridge_mean
from .hermite_ito import ProductFunctional, grt_power_ito, grt_symmetric_ito
from .mc_oracle import DEFAULT_SAMPLES
from .reports import Check, emit
from .suites import SUITES, fock_suite, run_suite

log = logging.getLogger("wiener_radon")

COMMANDS = ("grt-linear", "bridge-stats", "multi-bridge", "ito-grt", "fock-check", "verify")


@dataclass
class RunConfig:
    command: str
    input: str | None = None
    grid: int | None = None
    samples: int = DEFAULT_SAMPLES
    seed: int = 0
    output: str | None = None
    format: str = "json"
    T: list = field(default_factory=list)
    c: list = field(default_factory=list)
    t: list = field(default_factory=list)
    suite: str = "all"

    def __post_init__(self):
        if self.command not in COMMANDS:
            raise SchemaError(f"unknown command {self.command!r}")
        if self.samples < 1:
            raise SchemaError("--samples must be >= 1")
        if self.grid is not None and self.grid < 1:
            raise SchemaError("--grid must be >= 1")
        if self.format not in ("json", "csv"):
            raise SchemaError(f"unknown format {self.format!r}")


def _load_json(path: str):
    try:
        with open(path, encoding="utf-8") as fh:
            text = fh.read()
    except OSError as exc:
        raise SchemaError(f"cannot read {path}: {exc}") from exc
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise SchemaError(f"{path}: line {exc.lineno} column {exc.colno}: {exc.msg}") from exc


def _grid(config: RunConfig, times) -> Grid:
    if config.grid is not None:
        return Grid(config.grid)
    return grid_for_times(list(times))


def _bridge_stats(config: RunConfig) -> list:
    if len(config.T) != 1 or len(config.c) != 1:
        raise SchemaError("bridge-stats needs exactly one --T and one --c")
    if not config.t:
        raise SchemaError("bridge-stats needs at least one --t")
    grid = _grid(config, config.T + config.t)
    law = closest_point(bridge_subspace(config.T, config.c, grid))
    out = []
    for t in config.t:
        g = conditioned_law(law, kernel_vector(t, grid))
        out.append({"t": float(t), "mean": g.mean, "variance": g.variance})
    return out


def _multi_bridge(config: RunConfig) -> list:
    if not config.T or len(config.T) != len(config.c):
        raise SchemaError("multi-bridge needs matching --T and --c lists")
    if not config.t:
        raise SchemaError("multi-bridge needs at least one --t")
    grid = _grid(config, config.T + config.t)
    law = closest_point(bridge_subspace(config.T, config.c, grid))
    out = []
    for t in config.t:
        K = kernel_vector(t, grid)
        g = conditioned_law(law, K)
        out.append({"t": float(t), "mean": multi_bridge_mean(config.T, config.c, K),
                    "variance": g.variance})
    return out


def _grt_linear(config: RunConfig) -> list:
    if not config.input:
        raise SchemaError("grt-linear needs --input")
    spec = _load_json(config.input)
    grid = Grid(config.grid) if config.grid else None
    sub = subspace_from_json(spec, grid)
    law = closest_point(sub)
    hs = spec.get("h")
    if not isinstance(hs, list) or not hs:
        raise SchemaError("field 'h' must be a non-empty list of vector specs")
    out = []
    for i, item in enumerate(hs):
        try:
            h = vector_from_json(item, sub.grid)
        except SchemaError as exc:
            raise SchemaError(f"h[{i}]: {exc}") from exc
        g = conditioned_law(law, h)
        out.append({"h": i, "mean": g.mean, "variance": g.variance})
    return out


def _ito_grt(config: RunConfig) -> list:
    if not config.input:
        raise SchemaError("ito-grt needs --input")
    spec = _load_json(config.input)
    if not isinstance(spec, dict):
        raise SchemaError("ito-grt spec must be a JSON object")
    for key in ("factors", "T", "c", "n"):
        if key not in spec:
            raise SchemaError(f"ito-grt spec is missing field {key!r}")
    try:
        T, c, n = float(spec["T"]), float(spec["c"]), int(spec["n"])
    except (TypeError, ValueError) as exc:
        raise SchemaError(f"fields T, c, n must be numbers: {exc}") from exc
    factors = spec["factors"]
    if not isinstance(factors, list) or not factors:
        raise SchemaError("field 'factors' must be a non-empty list")
    if config.grid:
        grid = Grid(config.grid)
    elif "grid" in spec:
        grid = Grid(int(spec["grid"]))
    else:
        lengths = [len(f["deriv"]) for f in factors if isinstance(f, dict) and "deriv" in f]
        times = [T] + [float(f["s"]) for f in factors if isinstance(f, dict) and "s" in f]
        base = grid_for_times(times).n_steps
        for L in lengths:
            base = base * L // math.gcd(base, L)
        grid = Grid(base)
    fs = []
    for i, item in enumerate(factors):
        try:
            fs.append(vector_from_json(item, grid))
        except SchemaError as exc:
            raise SchemaError(f"factors[{i}]: {exc}") from exc
    if len(fs) == 1:
        value = grt_power_ito(fs[0], n, T, c)
    elif len(fs) == n:
        value = grt_symmetric_ito(ProductFunctional(tuple(fs)), T, c)
    else:
        raise SchemaError(f"need 1 or n={n} factors, got {len(fs)}")
    return [{"n": n, "T": T, "c": c, "value": value}]


def _fock_check(config: RunConfig) -> list:
    T, c = 0.5, 1.0
    if config.input:
        spec = _load_json(config.input)
        try:
            T, c = float(spec.get("T", T)), float(spec.get("c", c))
        except (AttributeError, TypeError, ValueError) as exc:
            raise SchemaError(f"fock-check spec: {exc}") from exc
    return fock_suite(config.grid or 64, config.samples, config.seed, T=T, c=c)


def _failed(record) -> bool:
    if isinstance(record, Check):
        return not record.passed
    return record.get("pass", True) is False


def run(config: RunConfig, stream=None) -> int:
    """Execute one command; returns the process exit code."""
    try:
        if config.command == "bridge-stats":
            records = _bridge_stats(config)
        elif config.command == "multi-bridge":
            records = _multi_bridge(config)
        elif config.command == "grt-linear":
            records = _grt_linear(config)
        elif config.command == "ito-grt":
            records = _ito_grt(config)
        elif config.command == "fock-check":
            records = _fock_check(config)
        else:
            if config.suite != "all" and config.suite not in SUITES:
                raise SchemaError(f"unknown suite {config.suite!r}")
            records = run_suite(config.suite, config)
        emit(records, config.format, config.output, stream=stream)
    except WienerRadonError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    failed = [r for r in records if _failed(r)]
    for r in failed:
        r = r.to_record() if isinstance(r, Check) else r
        log.warning("check failed: %s (closed form %r, estimate %r, z %r)",
                    r["check"], r["closed_form"], r["estimate"], r["z"])
    return 1 if failed else 0


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--input", help="JSON spec file")
    common.add_argument("--grid", type=int, help="grid steps (default: fitted to the times)")
    common.add_argument("--samples", type=int, default=DEFAULT_SAMPLES)
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--output", help="output path (default: stdout)")
    common.add_argument("--format", choices=("json", "csv"), default="json")

    p = argparse.ArgumentParser(prog="wiener-radon", description=__doc__.splitlines()[0])
    p.add_argument("--backend-info", action="store_true", help="print the kernel backend and exit")
    sub = p.add_subparsers(dest="command")
    for name in COMMANDS:
        sp = sub.add_parser(name, parents=[common])
        if name in ("bridge-stats", "multi-bridge"):
            sp.add_argument("--T", type=float, nargs="+", required=True)
            sp.add_argument("--c", type=float, nargs="+", required=True)
            sp.add_argument("--t", type=float, nargs="+", required=True)
        if name == "verify":
            sp.add_argument("--suite", default="all", choices=["all", *SUITES])
    return p


def main(argv=None) -> int:
    logging.basicConfig(level=logging.WARNING, format="%(levelname)s %(message)s")
    args = build_parser().parse_args(argv)
    if args.backend_info:
        print(kernels.BACKEND)
        return 0
    if args.command is None:
        build_parser().print_usage(sys.stderr)
        return 2
    try:
        config = RunConfig(
            command=args.command, input=args.input, grid=args.grid, samples=args.samples,
            seed=args.seed, output=args.output, format=args.format,
            T=list(getattr(args, "T", None) or []), c=list(getattr(args, "c", None) or []),
            t=list(getattr(args, "t", None) or []), suite=getattr(args, "suite", "all"),
        )
    except SchemaError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    return run(config)


if __name__ == "__main__":
    sys.exit(main())

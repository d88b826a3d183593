"""Command-line front end.

Runs the certification pipeline for one parameter set or a sweep file,
prints a table row per run (N | epsilon | tau_bar | t_max | exec time),
and emits certificates (json), step trajectories (csv), plot-ready surface
data (surface), and rendered figures (png) into the output directory.
"""

from __future__ import annotations

import argparse
import sys
from dataclasses import dataclass, replace
from pathlib import Path

from .certify import CertifyOptions, run_certification
from .errors import (
    BudgetExhausted,
    DomainError,
    InputError,
    ReframeNeeded,
    StepFailure,
    ValidationFailure,
)
from .integrator import IntegratorOptions
from .interval import Interval
from .model import ProblemParams, initial_data

__all__ = ["RunConfig", "run", "table_sweep", "main"]

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_VALIDATION = 3
EXIT_REFRAME = 4
EXIT_BUDGET = 5

_FORMATS = ("json", "csv", "surface", "png")


@dataclass(frozen=True)
class RunConfig:
    n: int = 6
    m: int = 1
    lam: str = "1"
    initial: str = "cosine_m1"
    order: int = 10
    h0: float = 1e-2
    hmin: float = 1e-8
    max_steps: int = 1_000_000
    epsilon_target: float | None = None
    out_dir: str = "."
    formats: tuple[str, ...] = ("json", "csv")

    def validate(self) -> None:
        if self.n % 2 != 0 or self.n < 4:
            raise InputError(f"n must be even and >= 4, got {self.n}")
        if self.m < 1:
            raise InputError(f"m must be >= 1, got {self.m}")
        try:
            lam = Interval.from_decimal(self.lam)
        except ValueError as e:
            raise InputError(str(e)) from e
        if lam.lo <= 0.0:
            raise InputError(f"lambda must be positive, got {self.lam}")
        if not (self.initial in ("cosine_m1", "cosine_m2")
                or self.initial.startswith("file:")):
            raise InputError(f"unknown initial data {self.initial!r}")
        for f in self.formats:
            if f not in _FORMATS:
                raise InputError(f"unknown emit format {f!r}")

    @property
    def tag(self) -> str:
        return f"n{self.n}_m{self.m}"


def _build_problem(config: RunConfig) -> ProblemParams:
    return ProblemParams(n=config.n, m=config.m,
                         lam=Interval.from_decimal(config.lam))


def _build_options(config: RunConfig) -> CertifyOptions:
    integ = IntegratorOptions(order=config.order, h0=config.h0,
                              hmin=config.hmin, max_steps=config.max_steps)
    opts = CertifyOptions(integrator=integ)
    if config.epsilon_target is not None:
        opts = replace(opts, epsilon_target=config.epsilon_target)
    return opts


def _summary_header() -> str:
    return (f"{'N':>4} | {'eps':>10} | {'tau_bar':>8} | "
            f"{'t_max':^44} | {'time':>9}")


def _summary_row(cert) -> str:
    tmax = f"[{cert.t_max.lo:.17g}, {cert.t_max.hi:.17g}]"
    return (f"{cert.params.n:>4} | {cert.epsilon:>10.3e} | "
            f"{cert.tau_bar:>8.3f} | {tmax:^44} | "
            f"{cert.wall_time_sec:>7.2f} s")


def _execute(config: RunConfig):
    """Run one certification and write the requested artifacts."""
    config.validate()
    p = _build_problem(config)
    if config.initial.startswith("file:"):
        u0 = initial_data("file", p, path=config.initial[len("file:"):])
    else:
        u0 = initial_data(config.initial, p)
    result = run_certification(p, u0, _build_options(config))
    out = Path(config.out_dir)
    out.mkdir(parents=True, exist_ok=True)
    tag = config.tag
    if "json" in config.formats:
        from .output import write_certificate

        write_certificate(out / f"{tag}.certificate.json", result.certificate)
    if "csv" in config.formats:
        from .output import write_trajectory_csv

        write_trajectory_csv(out / f"{tag}.trajectory.csv", p, result.steps)
    if "surface" in config.formats:
        from .output import write_surface_csv

        write_surface_csv(out / f"{tag}.surface.csv", p, result.steps)
    if "png" in config.formats:
        from .plots import render_decay, render_surface

        render_surface(out / f"{tag}.surface.png", p, result.steps,
                       result.certificate)
        render_decay(out / f"{tag}.decay.png", p, result.steps,
                     result.certificate)
    return result


_ERROR_CODES = (
    ((InputError, DomainError), EXIT_CONFIG),
    ((ValidationFailure,), EXIT_VALIDATION),
    ((ReframeNeeded,), EXIT_REFRAME),
    ((BudgetExhausted, StepFailure), EXIT_BUDGET),
)


def _code_for(err: Exception) -> int:
    for types, code in _ERROR_CODES:
        if isinstance(err, types):
            return code
    raise err


def run(config: RunConfig) -> int:
    """Execute one configured run; returns the process exit code."""
    try:
        result = _execute(config)
    except Exception as e:  # noqa: BLE001 - mapped to exit codes below
        code = _code_for(e)
        print(f"error: {e}", file=sys.stderr)
        return code
    print(_summary_header())
    print(_summary_row(result.certificate))
    return EXIT_OK


def table_sweep(configs: list[RunConfig]) -> int:
    """Run several configurations and print one combined table."""
    if not configs:
        print("error: empty sweep", file=sys.stderr)
        return EXIT_CONFIG
    rows = []
    worst = EXIT_OK
    for config in sorted(configs, key=lambda c: (c.n, c.m)):
        try:
            result = _execute(config)
            rows.append(_summary_row(result.certificate))
        except Exception as e:  # noqa: BLE001
            code = _code_for(e)
            worst = worst or code
            rows.append(f"{config.n:>4} | FAILED ({type(e).__name__}: {e})")
    print(_summary_header())
    for row in rows:
        print(row)
    return worst


def _parse_sweep_line(line: str, base: RunConfig) -> RunConfig:
    config = base
    for token in line.split():
        if "=" not in token:
            raise InputError(f"sweep tokens must be key=value, got {token!r}")
        key, value = token.split("=", 1)
        key = key.replace("-", "_")
        if key == "n":
            config = replace(config, n=int(value))
        elif key == "m":
            config = replace(config, m=int(value))
        elif key == "lambda":
            config = replace(config, lam=value)
        elif key == "initial":
            config = replace(config, initial=value)
        elif key == "order":
            config = replace(config, order=int(value))
        elif key == "h0":
            config = replace(config, h0=float(value))
        elif key == "hmin":
            config = replace(config, hmin=float(value))
        elif key == "max_steps":
            config = replace(config, max_steps=int(value))
        elif key == "epsilon_target":
            config = replace(config, epsilon_target=float(value))
        elif key == "emit":
            config = replace(config, formats=tuple(value.split(",")))
        else:
            raise InputError(f"unknown sweep key {key!r}")
    return config


def _build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="blowup",
        description="Certify finite-time blow-up of the discretized "
                    "exponential reaction-diffusion system and enclose the "
                    "blow-up time.",
    )
    ap.add_argument("--n", type=int, default=6, help="grid count (even, >= 4)")
    ap.add_argument("--m", type=int, default=1, help="exponent order (>= 1)")
    ap.add_argument("--lambda", dest="lam", default="1",
                    help="reaction coefficient as a decimal string")
    ap.add_argument("--initial", default=None,
                    help="cosine_m1 | cosine_m2 | file:<path> "
                         "(default matches m)")
    ap.add_argument("--order", type=int, default=10, help="Taylor order")
    ap.add_argument("--h0", type=float, default=1e-2, help="initial step")
    ap.add_argument("--hmin", type=float, default=1e-8, help="minimum step")
    ap.add_argument("--max-steps", type=int, default=1_000_000)
    ap.add_argument("--epsilon-target", type=float, default=None,
                    help="Lyapunov sublevel size to aim for")
    ap.add_argument("--out-dir", default=".")
    ap.add_argument("--emit", default="json,csv",
                    help="comma list from: json,csv,surface,png")
    ap.add_argument("--sweep", default=None,
                    help="file with one run per line (key=value tokens)")
    return ap


def main(argv: list[str] | None = None) -> int:
    args = _build_parser().parse_args(argv)
    initial = args.initial
    if initial is None:
        initial = "cosine_m2" if args.m == 2 else "cosine_m1"
    base = RunConfig(
        n=args.n, m=args.m, lam=args.lam, initial=initial,
        order=args.order, h0=args.h0, hmin=args.hmin,
        max_steps=args.max_steps, epsilon_target=args.epsilon_target,
        out_dir=args.out_dir, formats=tuple(args.emit.split(",")),
    )
    if args.sweep is not None:
        try:
            text = Path(args.sweep).read_text()
        except OSError as e:
            print(f"error: cannot read sweep file: {e}", file=sys.stderr)
            return EXIT_CONFIG
        configs = []
        try:
            for line in text.splitlines():
                line = line.strip()
                if not line or line.startswith("#"):
                    continue
                configs.append(_parse_sweep_line(line, base))
        except (InputError, ValueError) as e:
            print(f"error: {e}", file=sys.stderr)
            return EXIT_CONFIG
        return table_sweep(configs)
    return run(base)


if __name__ == "__main__":
    sys.exit(main())

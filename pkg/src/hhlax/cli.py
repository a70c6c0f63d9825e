"""Command-line front end.

Subcommands:
  verify     run the exact identity checks (exit 1 if any fails)
  potential  print one rung of the separable-potential hierarchy
  simulate   integrate an autonomous or deformed flow, export CSV/JSON
  pfaffian   integrate the multi-time system along a waypoint path
  spectral   print the spectral curve and numeric eigenvalue samples

Exit codes: 0 success, 1 verification failure, 2 usage error, 3 runtime
singularity (singular state or step-size underflow).
"""

from __future__ import annotations

import argparse
import sys
from typing import Sequence

from .algebra import VarId
from .dynamics import (
    IntegratorConfig,
    Path,
    PhaseState,
    SingularState,
    StepSizeUnderflow,
    TimePoint,
    Trajectory,
    eigenvalue_samples,
    integrate_autonomous,
    integrate_pfaffian,
    snapshot,
)
from .verify import CHECKS, run_checks, spectral_curve_coefficients

_USAGE_ERROR = 2
_RUNTIME_ERROR = 3


class UsageError(Exception):
    pass


def _parse_floats(text: str, count: int | None = None, what: str = "value") -> list[float]:
    try:
        values = [float(item) for item in text.split(",")]
    except ValueError as exc:
        raise UsageError(f"malformed {what} {text!r}") from exc
    if count is not None and len(values) != count:
        raise UsageError(f"expected {count} comma-separated values for {what}, got {len(values)}")
    return values

def _parse_state(text: str) -> PhaseState:
    return PhaseState(*_parse_floats(text, 4, "state"))


def _parse_timepoint(text: str) -> TimePoint:
    return TimePoint(*_parse_floats(text, 2, "time point"))


def _parse_waypoints(text: str) -> Path:
    points = [_parse_timepoint(chunk) for chunk in text.split(";") if chunk]
    if len(points) < 2:
        raise UsageError("need at least 2 waypoints")
    try:
        return Path(tuple(points))
    except ValueError as exc:
        raise UsageError(str(exc)) from exc


def _parse_bool(text: str) -> bool:
    lowered = text.strip().lower()
    if lowered in ("true", "1", "yes"):
        return True
    if lowered in ("false", "0", "no"):
        return False
    raise UsageError(f"expected a boolean, got {text!r}")


def _add_integrator_arguments(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--method", choices=["rk45-adaptive", "rk4-fixed"],
                        default="rk45-adaptive")
    parser.add_argument("--abs-tol", type=float, default=1e-12)
    parser.add_argument("--rel-tol", type=float, default=1e-12)
    parser.add_argument("--max-step", type=float, default=0.01)
    parser.add_argument("--alpha", type=float, default=0.0)
    parser.add_argument("--lambdas", default="0.5,1,2",
                        help="spectral-parameter samples, comma separated")
    parser.add_argument("--out", required=True, help="output file for the trajectory")
    parser.add_argument("--format", choices=["csv", "json"], default="csv")
    parser.add_argument("--svg", help="also write an SVG polyline of (s, x1)")


def _config_from_args(args: argparse.Namespace) -> IntegratorConfig:
    return IntegratorConfig(
        method=args.method,
        abs_tol=args.abs_tol,
        rel_tol=args.rel_tol,
        max_step=args.max_step,
        alpha=args.alpha,
        lambdas=tuple(_parse_floats(args.lambdas, what="lambdas")),
    )


def _export(trajectory: Trajectory, args: argparse.Namespace) -> None:
    with open(args.out, "w", newline="") as stream:
        if args.format == "csv":
            trajectory.write_csv(stream)
        else:
            trajectory.write_json(stream)
    summary = trajectory.summary()
    print(f"samples = {summary['samples']}")
    print(f"h1 drift = {summary['h1_drift']:.6e}")
    print(f"h2 drift = {summary['h2_drift']:.6e}")
    print(f"eigenvalue drift = {summary['eigenvalue_drift']:.6e}")
    print(f"wrote {args.out}")
    if args.svg:
        _write_svg(trajectory, args.svg)
        print(f"wrote {args.svg}")


def _write_svg(trajectory: Trajectory, filename: str, width: int = 640, height: int = 360) -> None:
    points = [(sample.s, sample.state.x1) for sample in trajectory.samples]
    s_values = [p[0] for p in points]
    x_values = [p[1] for p in points]
    s_span = (max(s_values) - min(s_values)) or 1.0
    x_span = (max(x_values) - min(x_values)) or 1.0
    pairs = " ".join(
        f"{(s - min(s_values)) / s_span * width:.2f},"
        f"{height - (x - min(x_values)) / x_span * height:.2f}"
        for s, x in points
    )
    with open(filename, "w") as stream:
        stream.write(
            f'<svg xmlns="http://www.w3.org/2000/svg" viewBox="0 0 {width} {height}">'
            f'<polyline fill="none" stroke="black" points="{pairs}"/></svg>\n'
        )


def _cmd_verify(args: argparse.Namespace) -> int:
    pattern = args.filter
    if pattern is not None and not any(pattern in name for name, _ in CHECKS):
        print(f"no checks match filter {pattern!r}", file=sys.stderr)
        return _USAGE_ERROR
    reports = run_checks(pattern)
    failures = 0
    for report in reports:
        print(report.describe())
        if not report.passed:
            failures += 1
            if report.expected is not None:
                print(f"  expected = {report.expected}")
            if report.intermediate is not None:
                print(f"  intermediate = {report.intermediate}")
    print(f"{len(reports) - failures}/{len(reports)} checks passed")
    return 0 if failures == 0 else 1


def _cmd_potential(args: argparse.Namespace) -> int:
    if abs(args.k) > 64:
        raise UsageError(f"k = {args.k} out of range (|k| <= 64)")
    from .model import potential

    pair = potential(args.k)
    print(f"v1 = {pair.v1}")
    print(f"v2 = {pair.v2}")
    return 0


def _cmd_simulate(args: argparse.Namespace) -> int:
    state0 = _parse_state(args.state)
    t0 = _parse_timepoint(args.t0)
    cfg = _config_from_args(args)
    deformed = _parse_bool(args.deformed)
    k = 1 if args.flow == "t1" else 2
    if args.duration < 0:
        raise UsageError("duration must be nonnegative")
    if not deformed:
        trajectory = integrate_autonomous(k, state0, args.duration, cfg)
    elif args.duration == 0:
        trajectory = snapshot(True, state0, t0, cfg)
    else:
        end = TimePoint(
            t0.t1 + (args.duration if k == 1 else 0.0),
            t0.t2 + (args.duration if k == 2 else 0.0),
        )
        trajectory = integrate_pfaffian(state0, t0, Path((t0, end)), cfg, deformed=True)
    _export(trajectory, args)
    return 0


def _cmd_pfaffian(args: argparse.Namespace) -> int:
    state0 = _parse_state(args.state)
    path = _parse_waypoints(args.waypoints)
    cfg = _config_from_args(args)
    deformed = _parse_bool(args.deformed)
    trajectory = integrate_pfaffian(state0, path.waypoints[0], path, cfg, deformed=deformed)
    _export(trajectory, args)
    return 0


def _cmd_spectral(args: argparse.Namespace) -> int:
    state = _parse_state(args.state)
    t = _parse_timepoint(args.t)
    lambdas = _parse_floats(args.lambdas, what="lambdas")
    deformed = _parse_bool(args.deformed)
    print(f"det L(lambda) coefficients ({'deformed' if deformed else 'autonomous'}):")
    for power, coefficient in spectral_curve_coefficients(deformed).items():
        print(f"  lambda^{power}: {coefficient}")
    print(
        f"eigenvalues at state = ({state.x1:g}, {state.x2:g}, {state.p1:g}, {state.p2:g}), "
        f"t = ({t.t1:g}, {t.t2:g}), alpha = {args.alpha:g}:"
    )
    for lam, (plus, minus) in zip(
        lambdas, eigenvalue_samples(deformed, state, t, args.alpha, lambdas)
    ):
        print(
            f"  lambda = {lam:g}: {plus.real:.12g}{plus.imag:+.12g}j, "
            f"{minus.real:.12g}{minus.imag:+.12g}j"
        )
    return 0


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="hhlax",
        description="Extended Henon-Heiles system and its Painleve-type deformation: "
        "exact identity checks and numeric flows.",
    )
    subparsers = parser.add_subparsers(dest="command", required=True)

    sub = subparsers.add_parser("verify", help="run the exact identity checks")
    sub.add_argument("--filter", help="run only checks whose name contains this substring")
    sub.set_defaults(handler=_cmd_verify)

    sub = subparsers.add_parser("potential", help="print one separable potential pair")
    sub.add_argument("--k", type=int, required=True)
    sub.set_defaults(handler=_cmd_potential)

    sub = subparsers.add_parser("simulate", help="integrate one flow")
    sub.add_argument("--flow", choices=["t1", "t2"], required=True)
    sub.add_argument("--deformed", default="false")
    sub.add_argument("--state", default="1,1,0,0")
    sub.add_argument("--duration", type=float, required=True)
    sub.add_argument("--t0", default="0,0")
    _add_integrator_arguments(sub)
    sub.set_defaults(handler=_cmd_simulate)

    sub = subparsers.add_parser("pfaffian", help="integrate the multi-time system along a path")
    sub.add_argument("--waypoints", required=True, help='e.g. "0,0;0.5,0;0.5,0.5"')
    sub.add_argument("--deformed", default="true")
    sub.add_argument("--state", default="1,1,0,0")
    _add_integrator_arguments(sub)
    sub.set_defaults(handler=_cmd_pfaffian)

    sub = subparsers.add_parser("spectral", help="spectral curve and eigenvalue samples")
    sub.add_argument("--state", required=True)
    sub.add_argument("--t", default="0,0")
    sub.add_argument("--alpha", type=float, default=0.0)
    sub.add_argument("--lambdas", default="0.5,1,2")
    sub.add_argument("--deformed", default="false")
    sub.set_defaults(handler=_cmd_spectral)

    return parser


def main(argv: Sequence[str] | None = None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        return args.handler(args)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return _USAGE_ERROR
    except (SingularState, StepSizeUnderflow) as exc:
        print(f"integration aborted: {exc}", file=sys.stderr)
        return _RUNTIME_ERROR


if __name__ == "__main__":
    sys.exit(main())

"""Numerical integration of the autonomous and multi-time flows.

The autonomous flows are integrated in their own time; the non-autonomous
system is integrated as a Pfaffian system along piecewise-linear paths in
the (t1, t2) plane, each segment parameterized by arclength with the two
Hamiltonian fields combined by the segment direction.  Per-sample
diagnostics record the Hamiltonian values and eigenvalues of the Lax matrix
at configurable spectral-parameter samples.

Integrators: classic fixed-step RK4 and an adaptive Dormand-Prince 5(4)
pair.  Right-hand sides are evaluated through the compiled kernel tables
(see `hhlax.kernels`), with the runtime value of alpha folded exactly into
the tables beforehand.  Every run owns its working buffers, so independent
integrations may proceed in parallel.
"""

from __future__ import annotations

import cmath
import csv
import json
import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Callable, Iterable, Sequence

import numpy as np

from .algebra import LaurentPoly, VarId, substitute_numeric
from .kernels import CompiledPolySet
from .model import VectorField4, hamiltonian_vector_field, hamiltonians, lax_matrices

__all__ = [
    "SingularState",
    "StepSizeUnderflow",
    "PhaseState",
    "TimePoint",
    "Path",
    "IntegratorConfig",
    "TrajectorySample",
    "Trajectory",
    "flow_rhs",
    "snapshot",
    "integrate_autonomous",
    "integrate_pfaffian",
    "check_flow_commutation_numeric",
    "eigenvalue_samples",
    "check_reparametrization_numeric",
]

# |x2| below this with alpha != 0 counts as sitting on the singular set.
_X2_SINGULAR_TOL = 1e-12
# A step shorter than this fraction of the span aborts the run.
_MIN_STEP_FRACTION = 1e-14


class SingularState(RuntimeError):
    """The state reached the x2 = 0 singular set while alpha != 0."""


class StepSizeUnderflow(RuntimeError):
    """The adaptive integrator could not meet the tolerance with any
    representable step (typically a finite-time blow-up)."""


@dataclass(frozen=True)
class PhaseState:
    x1: float
    x2: float
    p1: float
    p2: float

    def as_array(self) -> np.ndarray:
        return np.array([self.x1, self.x2, self.p1, self.p2], dtype=np.float64)

    @classmethod
    def from_array(cls, values: Sequence[float]) -> "PhaseState":
        return cls(float(values[0]), float(values[1]), float(values[2]), float(values[3]))


@dataclass(frozen=True)
class TimePoint:
    t1: float
    t2: float


@dataclass(frozen=True)
class Path:
    """Piecewise-linear route in the (t1, t2) plane."""

    waypoints: tuple[TimePoint, ...]

    def __post_init__(self):
        if len(self.waypoints) < 2:
            raise ValueError("a path needs at least 2 waypoints")
        for a, b in zip(self.waypoints, self.waypoints[1:]):
            if a == b:
                raise ValueError("consecutive waypoints must be distinct")

    @classmethod
    def from_pairs(cls, pairs: Iterable[Sequence[float]]) -> "Path":
        return cls(tuple(TimePoint(float(a), float(b)) for a, b in pairs))

    def segments(self) -> Iterable[tuple[TimePoint, TimePoint]]:
        return zip(self.waypoints, self.waypoints[1:])


@dataclass(frozen=True)
class IntegratorConfig:
    """Integration settings.

    `max_step` doubles as the fixed step of the rk4-fixed method.  `lambdas`
    are the spectral-parameter samples for the eigenvalue diagnostics.
    """

    method: str = "rk45-adaptive"
    abs_tol: float = 1e-12
    rel_tol: float = 1e-12
    max_step: float = 0.01
    alpha: float = 0.0
    lambdas: tuple[float, ...] = (0.5, 1.0, 2.0)

    def __post_init__(self):
        if self.method not in ("rk4-fixed", "rk45-adaptive"):
            raise ValueError(f"unknown method {self.method!r}")
        if self.abs_tol <= 0 or self.rel_tol <= 0:
            raise ValueError("tolerances must be positive")
        if self.max_step <= 0:
            raise ValueError("max_step must be positive")


@dataclass(frozen=True)
class TrajectorySample:
    s: float
    t: TimePoint
    state: PhaseState
    h1: float
    h2: float
    eigenvalues: tuple[complex, ...]


@dataclass
class Trajectory:
    samples: list[TrajectorySample]
    lambdas: tuple[float, ...] = (0.5, 1.0, 2.0)

    @property
    def final_state(self) -> PhaseState:
        return self.samples[-1].state

    @property
    def final_time(self) -> TimePoint:
        return self.samples[-1].t

    def h1_drift(self) -> float:
        first = self.samples[0].h1
        return max(abs(sample.h1 - first) for sample in self.samples)

    def h2_drift(self) -> float:
        first = self.samples[0].h2
        return max(abs(sample.h2 - first) for sample in self.samples)

    def eigenvalue_drift(self) -> float:
        first = self.samples[0].eigenvalues
        if not first:
            return 0.0
        return max(
            abs(value - ref)
            for sample in self.samples
            for value, ref in zip(sample.eigenvalues, first)
        )

    def summary(self) -> dict:
        return {
            "samples": len(self.samples),
            "h1_drift": self.h1_drift(),
            "h2_drift": self.h2_drift(),
            "eigenvalue_drift": self.eigenvalue_drift(),
        }

    # -- export ---------------------------------------------------------

    def column_names(self) -> list[str]:
        names = ["s", "t1", "t2", "x1", "x2", "p1", "p2", "h1", "h2"]
        for lam in self.lambdas:
            names.append(f"eig_re_{lam:g}")
            names.append(f"eig_im_{lam:g}")
        return names

    def rows(self) -> Iterable[list[float]]:
        for sample in self.samples:
            row = [
                sample.s,
                sample.t.t1,
                sample.t.t2,
                sample.state.x1,
                sample.state.x2,
                sample.state.p1,
                sample.state.p2,
                sample.h1,
                sample.h2,
            ]
            for value in sample.eigenvalues:
                row.append(value.real)
                row.append(value.imag)
            yield row

    def write_csv(self, stream) -> None:
        writer = csv.writer(stream, lineterminator="\n")
        writer.writerow(self.column_names())
        for row in self.rows():
            writer.writerow([repr(value) for value in row])

    def to_json_dict(self) -> dict:
        return {
            "columns": self.column_names(),
            "rows": [list(row) for row in self.rows()],
            "summary": self.summary(),
        }

    def write_json(self, stream) -> None:
        json.dump(self.to_json_dict(), stream, indent=1)
        stream.write("\n")


# -- compiled right-hand sides and diagnostics --------------------------


def _fold_alpha(poly: LaurentPoly, alpha: float) -> LaurentPoly:
    # Fraction(float) is exact, so this loses nothing and lets alpha = 0
    # remove the singular terms entirely.
    return poly.substitute_rational(VarId.ALPHA, Fraction(alpha))


@lru_cache(maxsize=None)
def _symbolic_field(deformed: bool, k: int) -> VectorField4:
    hams = hamiltonians(deformed)
    return hamiltonian_vector_field(hams.h1 if k == 1 else hams.h2)


@lru_cache(maxsize=None)
def _field_tables(deformed: bool, k: int, alpha: float) -> tuple[CompiledPolySet, bool]:
    components = [_fold_alpha(c, alpha) for c in _symbolic_field(deformed, k).components]
    singular = any(c.degree_range(VarId.X2)[0] < 0 for c in components)
    return CompiledPolySet(components), singular


@lru_cache(maxsize=None)
def _hamiltonian_tables(deformed: bool, alpha: float) -> CompiledPolySet:
    hams = hamiltonians(deformed)
    return CompiledPolySet([_fold_alpha(hams.h1, alpha), _fold_alpha(hams.h2, alpha)])


@lru_cache(maxsize=None)
def _det_table(deformed: bool, alpha: float) -> CompiledPolySet:
    return CompiledPolySet([_fold_alpha(lax_matrices(deformed).L.det(), alpha)])


def _check_singular(x2: float, alpha: float, singular_terms: bool) -> None:
    if alpha != 0.0 and singular_terms and abs(x2) <= _X2_SINGULAR_TOL:
        raise SingularState(f"x2 = {x2!r} with alpha = {alpha!r}")


def flow_rhs(
    deformed: bool, k: int, state: PhaseState, t: TimePoint, alpha: float
) -> tuple[float, float, float, float]:
    """Numeric right-hand side of flow k at (state, t).

    Compiled from the symbolic Hamiltonian vector field, so it agrees with
    the model layer by construction.
    """
    if k not in (1, 2):
        raise ValueError("flow index must be 1 or 2")
    table, singular_terms = _field_tables(deformed, k, float(alpha))
    _check_singular(state.x2, alpha, singular_terms)
    vals = np.array(
        [state.x1, state.x2, state.p1, state.p2, t.t1, t.t2, 1.0, alpha],
        dtype=np.float64,
    )
    out = table(vals)
    return (float(out[0]), float(out[1]), float(out[2]), float(out[3]))


# -- steppers ------------------------------------------------------------

# Dormand-Prince 5(4) tableau; the last row of _DP_A equals the 5th-order
# weights, so the final stage doubles as the first stage of the next step.
_DP_C = (0.0, 1 / 5, 3 / 10, 4 / 5, 8 / 9, 1.0, 1.0)
_DP_A = (
    (),
    (1 / 5,),
    (3 / 40, 9 / 40),
    (44 / 45, -56 / 15, 32 / 9),
    (19372 / 6561, -25360 / 2187, 64448 / 6561, -212 / 729),
    (9017 / 3168, -355 / 33, 46732 / 5247, 49 / 176, -5103 / 18656),
    (35 / 384, 0.0, 500 / 1113, 125 / 192, -2187 / 6784, 11 / 84),
)
_DP_B5 = (35 / 384, 0.0, 500 / 1113, 125 / 192, -2187 / 6784, 11 / 84, 0.0)
_DP_B4 = (5179 / 57600, 0.0, 7571 / 16695, 393 / 640, -92097 / 339200, 187 / 2100, 1 / 40)
_DP_ERR = tuple(b5 - b4 for b5, b4 in zip(_DP_B5, _DP_B4))


def _error_norm(error: np.ndarray, y_old: np.ndarray, y_new: np.ndarray, cfg: IntegratorConfig) -> float:
    scale = cfg.abs_tol + cfg.rel_tol * np.maximum(np.abs(y_old), np.abs(y_new))
    return float(np.sqrt(np.mean((error / scale) ** 2)))


def _integrate_ode(
    rhs: Callable[[float, np.ndarray], np.ndarray],
    s_end: float,
    y0: np.ndarray,
    cfg: IntegratorConfig,
) -> list[tuple[float, np.ndarray]]:
    """Integrate dy/ds = rhs(s, y) from s = 0 to s_end >= 0.

    Returns the accepted samples, endpoints included.
    """
    samples = [(0.0, y0.copy())]
    if s_end == 0.0:
        return samples
    if cfg.method == "rk4-fixed":
        n_steps = max(1, math.ceil(s_end / cfg.max_step))
        h = s_end / n_steps
        s, y = 0.0, y0.copy()
        for i in range(n_steps):
            k1 = rhs(s, y)
            k2 = rhs(s + h / 2, y + (h / 2) * k1)
            k3 = rhs(s + h / 2, y + (h / 2) * k2)
            k4 = rhs(s + h, y + h * k3)
            y = y + (h / 6) * (k1 + 2 * k2 + 2 * k3 + k4)
            s = s_end if i == n_steps - 1 else (i + 1) * h
            samples.append((s, y.copy()))
        return samples

    h_min = _MIN_STEP_FRACTION * max(1.0, s_end)
    s, y = 0.0, y0.copy()
    h = min(cfg.max_step, s_end)
    k1 = rhs(s, y)
    stages: list[np.ndarray] = [k1] * 7
    while s < s_end:
        h = min(h, cfg.max_step)
        is_last = h >= s_end - s
        if is_last:
            h = s_end - s
        if h < h_min:
            raise StepSizeUnderflow(f"step {h!r} below minimum near s = {s!r}")
        stages[0] = k1
        for stage in range(1, 7):
            increment = sum(
                coeff * stages[j] for j, coeff in enumerate(_DP_A[stage]) if coeff
            )
            stages[stage] = rhs(s + _DP_C[stage] * h, y + h * increment)
        y_new = y + h * sum(b * stages[j] for j, b in enumerate(_DP_B5) if b)
        error = h * sum(e * stages[j] for j, e in enumerate(_DP_ERR) if e)
        norm = _error_norm(error, y, y_new, cfg)
        if norm <= 1.0:
            s = s_end if is_last else s + h
            y = y_new
            k1 = stages[6]  # FSAL: the last stage was evaluated at (s, y)
            samples.append((s, y.copy()))
            factor = 5.0 if norm == 0.0 else min(5.0, 0.9 * norm**-0.2)
        else:
            # stages[0] still holds f(s, y); only shrink the step.
            factor = max(0.2, 0.9 * norm**-0.2)
        h = h * factor
    return samples


# -- public integration ---------------------------------------------------


def _diagnose(
    raw: list[tuple[float, float, float, np.ndarray]],
    deformed: bool,
    cfg: IntegratorConfig,
) -> Trajectory:
    ham_table = _hamiltonian_tables(deformed, cfg.alpha)
    det_table = _det_table(deformed, cfg.alpha)
    vals = np.empty(8, dtype=np.float64)
    vals[7] = cfg.alpha
    samples = []
    for s, t1v, t2v, y in raw:
        vals[0:4] = y
        vals[4] = t1v
        vals[5] = t2v
        vals[6] = 1.0
        h1v, h2v = ham_table(vals)
        eigenvalues = []
        for lam in cfg.lambdas:
            vals[6] = lam
            det = det_table(vals)[0]
            eigenvalues.append(cmath.sqrt(complex(-det)))
        samples.append(
            TrajectorySample(
                s, TimePoint(t1v, t2v), PhaseState.from_array(y), float(h1v), float(h2v),
                tuple(eigenvalues),
            )
        )
    return Trajectory(samples, cfg.lambdas)


def _guarded_rhs(
    table: CompiledPolySet,
    singular_terms: bool,
    alpha: float,
) -> Callable[[np.ndarray, float, float], np.ndarray]:
    vals = np.empty(8, dtype=np.float64)
    vals[7] = alpha

    def evaluate(y: np.ndarray, t1v: float, t2v: float) -> np.ndarray:
        _check_singular(y[1], alpha, singular_terms)
        vals[0:4] = y
        vals[4] = t1v
        vals[5] = t2v
        vals[6] = 1.0
        return table(vals)

    return evaluate


def snapshot(
    deformed: bool, state: PhaseState, t: TimePoint, cfg: IntegratorConfig | None = None
) -> Trajectory:
    """Single-sample trajectory: the diagnostics of one (state, t) point."""
    cfg = cfg or IntegratorConfig()
    return _diagnose([(0.0, t.t1, t.t2, state.as_array())], deformed, cfg)


def integrate_autonomous(
    k: int, state0: PhaseState, duration: float, cfg: IntegratorConfig | None = None
) -> Trajectory:
    """Integrate the autonomous flow k for `duration` (>= 0, finite).

    The trajectory records h1, h2 and the Lax eigenvalue samples at every
    accepted step; for the autonomous system all of them are conserved.
    """
    cfg = cfg or IntegratorConfig()
    if k not in (1, 2):
        raise ValueError("flow index must be 1 or 2")
    if not math.isfinite(duration) or duration < 0:
        raise ValueError("duration must be finite and nonnegative")
    table, singular_terms = _field_tables(False, k, cfg.alpha)
    evaluate = _guarded_rhs(table, singular_terms, cfg.alpha)

    def rhs(s: float, y: np.ndarray) -> np.ndarray:
        return evaluate(y, 0.0, 0.0)

    steps = _integrate_ode(rhs, duration, state0.as_array(), cfg)
    raw = [
        (s, s if k == 1 else 0.0, s if k == 2 else 0.0, y)
        for s, y in steps
    ]
    return _diagnose(raw, False, cfg)


def integrate_pfaffian(
    state0: PhaseState,
    t0: TimePoint,
    path: Path,
    cfg: IntegratorConfig | None = None,
    deformed: bool = True,
) -> Trajectory:
    """Integrate d(state) = Y_1 dt1 + Y_2 dt2 along a piecewise-linear path.

    Each segment is one ODE in its arclength, with the combined right-hand
    side weighted by the segment direction.  With `deformed=False` the
    autonomous fields are used instead (their flows commute, so the same
    path independence holds).
    """
    cfg = cfg or IntegratorConfig()
    if path.waypoints[0] != t0:
        raise ValueError("path must start at t0")
    table1, singular1 = _field_tables(deformed, 1, cfg.alpha)
    table2, singular2 = _field_tables(deformed, 2, cfg.alpha)
    singular_terms = singular1 or singular2
    evaluate1 = _guarded_rhs(table1, singular_terms, cfg.alpha)
    evaluate2 = _guarded_rhs(table2, singular_terms, cfg.alpha)

    y = state0.as_array()
    s_offset = 0.0
    raw: list[tuple[float, float, float, np.ndarray]] = [(0.0, t0.t1, t0.t2, y.copy())]
    for start, stop in path.segments():
        d1, d2 = stop.t1 - start.t1, stop.t2 - start.t2
        length = math.hypot(d1, d2)
        w1, w2 = d1 / length, d2 / length

        def rhs(s: float, y_local: np.ndarray, start=start, w1=w1, w2=w2) -> np.ndarray:
            t1v = start.t1 + w1 * s
            t2v = start.t2 + w2 * s
            combined = np.zeros(4, dtype=np.float64)
            if w1:
                combined += w1 * evaluate1(y_local, t1v, t2v)
            if w2:
                combined += w2 * evaluate2(y_local, t1v, t2v)
            return combined

        steps = _integrate_ode(rhs, length, y, cfg)
        for s, y_step in steps[1:]:
            fraction = s / length
            raw.append(
                (
                    s_offset + s,
                    start.t1 + d1 * fraction,
                    start.t2 + d2 * fraction,
                    y_step,
                )
            )
        y = steps[-1][1]
        s_offset += length
    return _diagnose(raw, deformed, cfg)


def check_flow_commutation_numeric(
    state0: PhaseState, s: float, u: float, cfg: IntegratorConfig | None = None
) -> float:
    """Max-norm distance between the two compositions of the autonomous flows."""
    cfg = cfg or IntegratorConfig()
    first = integrate_autonomous(1, state0, s, cfg).final_state
    one_then_two = integrate_autonomous(2, first, u, cfg).final_state
    second = integrate_autonomous(2, state0, u, cfg).final_state
    two_then_one = integrate_autonomous(1, second, s, cfg).final_state
    return float(
        np.max(np.abs(one_then_two.as_array() - two_then_one.as_array()))
    )


def eigenvalue_samples(
    deformed: bool,
    state: PhaseState,
    t: TimePoint,
    alpha: float,
    lambdas: Sequence[float],
) -> list[tuple[complex, complex]]:
    """Eigenvalue pairs +-sqrt(-det L(lambda_j)) of the traceless Lax matrix."""
    det_table = _det_table(deformed, float(alpha))
    vals = np.array(
        [state.x1, state.x2, state.p1, state.p2, t.t1, t.t2, 1.0, alpha],
        dtype=np.float64,
    )
    pairs = []
    for lam in lambdas:
        vals[6] = lam
        det = det_table(vals)[0]
        root = cmath.sqrt(complex(-det))
        pairs.append((root, -root))
    return pairs


def check_reparametrization_numeric(
    k: int,
    state: PhaseState,
    t: TimePoint,
    mu_samples: Sequence[float],
    fd_step: float = 1e-6,
) -> float:
    """Residual of the chain rule under lambda -> exp(2 mu).

    Compares a central finite difference of U_k(exp(2 mu)) in mu against the
    symbolic 2 lambda dU_k/dlambda evaluated at lambda = exp(2 mu); a small
    residual confirms the deformation term turns into a plain mu-derivative
    after the reparametrization.
    """
    if k not in (1, 2):
        raise ValueError("flow index must be 1 or 2")
    u_matrix = lax_matrices(True).flow_matrix(k)
    lam_poly = LaurentPoly.variable(VarId.LAMBDA)
    target_matrix = u_matrix.map(lambda entry: 2 * lam_poly * entry.diff(VarId.LAMBDA))
    base_point = {
        VarId.X1: state.x1,
        VarId.X2: state.x2,
        VarId.P1: state.p1,
        VarId.P2: state.p2,
        VarId.T1: t.t1,
        VarId.T2: t.t2,
        VarId.ALPHA: 0.0,
    }
    worst = 0.0
    for mu in mu_samples:
        for entry, target in zip(u_matrix.entries(), target_matrix.entries()):
            plus = substitute_numeric(
                entry, {**base_point, VarId.LAMBDA: math.exp(2 * (mu + fd_step))}
            )
            minus = substitute_numeric(
                entry, {**base_point, VarId.LAMBDA: math.exp(2 * (mu - fd_step))}
            )
            difference = (plus - minus) / (2 * fd_step)
            exact = substitute_numeric(
                target, {**base_point, VarId.LAMBDA: math.exp(2 * mu)}
            )
            worst = max(worst, abs(difference - exact))
    return worst

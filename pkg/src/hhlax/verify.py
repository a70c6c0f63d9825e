"""Exact verification of the structural identities of the system.

Each check computes a residual in the Laurent ring (a polynomial, a 2x2
polynomial matrix, or a vector field) and passes only on exact structural
equality with the expected value — no numeric tolerance is involved.  The
residual object itself is kept in the report for debugging and golden tests.

All checks accept the model objects as optional arguments so corrupted
inputs can be injected; the defaults are the genuine model objects.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Optional, Union

from .algebra import (
    LaurentPoly,
    PolyMatrix2,
    VarId,
    mat_commutator,
    poisson_bracket,
)
from .model import (
    PHASE_VARS,
    HamiltonianSet,
    LaxTriple,
    VectorField4,
    deformation_coefficients,
    hamiltonian_vector_field,
    hamiltonians,
    lax_matrices,
    lie_bracket,
)

__all__ = [
    "IdentityReport",
    "check_involution",
    "check_frobenius",
    "check_zero_curvature",
    "check_isospectral_lax",
    "check_isomonodromic_lax",
    "check_sign_convention",
    "spectral_curve",
    "spectral_curve_coefficients",
    "CHECKS",
    "run_checks",
]

Residual = Union[LaurentPoly, PolyMatrix2, VectorField4]

_lam = LaurentPoly.variable(VarId.LAMBDA)


@dataclass(frozen=True)
class IdentityReport:
    """Outcome of one exact check.

    `passed` is true iff `residual` equals `expected` structurally (the
    expected value is zero unless stated otherwise).  Isomonodromic checks
    additionally carry the intermediate matrix they compare against the
    closed-form deformation term.
    """

    name: str
    residual: Residual
    passed: bool
    expected: Optional[Residual] = None
    intermediate: Optional[PolyMatrix2] = None

    def describe(self) -> str:
        status = "PASS" if self.passed else "FAIL"
        return f"{status} {self.name}: residual = {self.residual}"

    def to_dict(self) -> dict:
        payload = {
            "name": self.name,
            "passed": self.passed,
            "residual": str(self.residual),
        }
        if self.expected is not None:
            payload["expected"] = str(self.expected)
        if self.intermediate is not None:
            payload["intermediate"] = str(self.intermediate)
        return payload


def _flow_derivative(matrix: PolyMatrix2, field: VectorField4) -> PolyMatrix2:
    """Entrywise derivative of `matrix` along `field` (chain rule over phase space)."""

    def transport(entry: LaurentPoly) -> LaurentPoly:
        acc = LaurentPoly.zero()
        for j, var in enumerate(PHASE_VARS):
            acc = acc + entry.diff(var) * field.components[j]
        return acc

    return matrix.map(transport)


def check_involution(hams: HamiltonianSet | None = None) -> IdentityReport:
    """{h1, h2} must vanish identically."""
    hams = hams or hamiltonians(False)
    residual = poisson_bracket(hams.h1, hams.h2)
    return IdentityReport("involution", residual, residual.is_zero)


def check_frobenius(hams: HamiltonianSet | None = None) -> IdentityReport:
    """dH1/dt2 - dH2/dt1 + {H1, H2} must equal -c2, a function of t only."""
    hams = hams or hamiltonians(True)
    residual = (
        hams.h1.diff(VarId.T2)
        - hams.h2.diff(VarId.T1)
        + poisson_bracket(hams.h1, hams.h2)
    )
    c2, _ = deformation_coefficients()
    expected = -c2
    return IdentityReport("frobenius", residual, residual == expected, expected=expected)


def check_zero_curvature(hams: HamiltonianSet | None = None) -> IdentityReport:
    """dY1/dt2 - dY2/dt1 + [Y2, Y1] must be the zero vector field."""
    hams = hams or hamiltonians(True)
    field1 = hamiltonian_vector_field(hams.h1)
    field2 = hamiltonian_vector_field(hams.h2)
    residual = field1.partial(VarId.T2) - field2.partial(VarId.T1) + lie_bracket(field2, field1)
    return IdentityReport("zero_curvature", residual, residual.is_zero)


def check_isospectral_lax(
    k: int,
    triple: LaxTriple | None = None,
    hams: HamiltonianSet | None = None,
) -> IdentityReport:
    """Derivative of L along flow k must equal [U_k, L] (autonomous triple)."""
    if k not in (1, 2):
        raise ValueError("flow index must be 1 or 2")
    triple = triple or lax_matrices(False)
    hams = hams or hamiltonians(False)
    field = hamiltonian_vector_field(hams.h1 if k == 1 else hams.h2)
    residual = _flow_derivative(triple.L, field) - mat_commutator(triple.flow_matrix(k), triple.L)
    return IdentityReport(f"isospectral_lax_t{k}", residual, residual.is_zero)


def _isomonodromy_deformation_term(u_matrix: PolyMatrix2) -> PolyMatrix2:
    return u_matrix.map(lambda entry: 2 * _lam * entry.diff(VarId.LAMBDA))


# The two defect matrices the deformed system must produce, transcribed in
# closed form: D_{t1}L - [U1, L] and D_{t2}L - [U2, L].
def _expected_defect(k: int) -> PolyMatrix2:
    zero = LaurentPoly.zero()
    x1 = LaurentPoly.variable(VarId.X1)
    t2 = LaurentPoly.variable(VarId.T2)
    if k == 1:
        return PolyMatrix2(zero, zero, -2 * _lam, zero)
    return PolyMatrix2(zero, _lam, -4 * _lam**2 - 2 * (x1 + 3 * t2) * _lam, zero)


def check_isomonodromic_lax(
    k: int,
    triple: LaxTriple | None = None,
    hams: HamiltonianSet | None = None,
) -> IdentityReport:
    """Full time derivative of L minus [U_k, L] minus 2 lambda dU_k/dlambda
    must vanish; the intermediate defect must match its closed form."""
    if k not in (1, 2):
        raise ValueError("flow index must be 1 or 2")
    triple = triple or lax_matrices(True)
    hams = hams or hamiltonians(True)
    t_var = VarId.T1 if k == 1 else VarId.T2
    field = hamiltonian_vector_field(hams.h1 if k == 1 else hams.h2)
    u_matrix = triple.flow_matrix(k)

    total_derivative = triple.L.map(lambda entry: entry.diff(t_var)) + _flow_derivative(
        triple.L, field
    )
    intermediate = total_derivative - mat_commutator(u_matrix, triple.L)
    residual = intermediate - _isomonodromy_deformation_term(u_matrix)
    passed = residual.is_zero and intermediate == _expected_defect(k)
    return IdentityReport(
        f"isomonodromic_lax_t{k}",
        residual,
        passed,
        expected=_expected_defect(k),
        intermediate=intermediate,
    )


def check_sign_convention(hams: HamiltonianSet | None = None) -> IdentityReport:
    """Hamiltonian field of {H1, H2} must equal -[Y_{H1}, Y_{H2}]."""
    hams = hams or hamiltonians(True)
    field1 = hamiltonian_vector_field(hams.h1)
    field2 = hamiltonian_vector_field(hams.h2)
    residual = hamiltonian_vector_field(poisson_bracket(hams.h1, hams.h2)) + lie_bracket(
        field1, field2
    )
    return IdentityReport("sign_convention", residual, residual.is_zero)


def spectral_curve(deformed: bool = False) -> LaurentPoly:
    """det L(lambda): the spectral invariant of the traceless Lax matrix.

    In the autonomous case this expands to
    2 lambda^5 - 2 h1 lambda^2 - 2 h2 lambda + alpha/2, so every
    lambda-coefficient Poisson-commutes with both Hamiltonians.  The
    eigenvalue pair of L is +-sqrt(-det L).
    """
    return lax_matrices(deformed).L.det()


def spectral_curve_coefficients(deformed: bool = False) -> dict[int, LaurentPoly]:
    """Coefficients of det L(lambda) collected by power of lambda."""
    return spectral_curve(deformed).coefficients_in(VarId.LAMBDA)


# Default registry run by the CLI: one entry per exact identity, with both
# flow directions counted separately.
CHECKS: tuple[tuple[str, Callable[[], IdentityReport]], ...] = (
    ("involution", check_involution),
    ("frobenius", check_frobenius),
    ("zero_curvature", check_zero_curvature),
    ("isospectral_lax_t1", lambda: check_isospectral_lax(1)),
    ("isospectral_lax_t2", lambda: check_isospectral_lax(2)),
    ("isomonodromic_lax_t1", lambda: check_isomonodromic_lax(1)),
    ("isomonodromic_lax_t2", lambda: check_isomonodromic_lax(2)),
)


def run_checks(name_filter: str | None = None) -> list[IdentityReport]:
    """Run all registry checks whose name contains `name_filter`."""
    selected = [
        build for name, build in CHECKS if name_filter is None or name_filter in name
    ]
    return [build() for build in selected]

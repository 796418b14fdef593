"""Casimir and local SU(2)xU(1) invariants of the qutrit Bloch vector.

Definitions (all polynomial in the eight Bloch components):

    c2 = xi . xi
    c3 = sqrt(3) d_abc xi_a xi_b xi_c
    f1 = xi8
    f2 = xi1^2 + xi2^2 + xi3^2
    f3 = xi4^2 + xi5^2 + xi6^2 + xi7^2
    f4 = 2(-xi1(xi4 xi6 + xi5 xi7) + xi2(xi4 xi7 - xi5 xi6))
         + xi3(-xi4^2 - xi5^2 + xi6^2 + xi7^2)

The relation c2 = f1^2 + f2 + f3 is an identity.  The corresponding relation
for c3 is *fitted* here as an exact polynomial identity rather than taken
from its published form, whose coefficients fail direct substitution; see
``fit_c3_relation``.  Both residuals are reported by
``casimir_relation_check`` so the discrepancy stays visible.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

import numpy as np

from . import su3
from .exactalg import scaled_basis_polynomials
from .polynomials import solve_exact


@dataclass(frozen=True)
class GlobalInvariants:
    c2: float
    c3: float


@dataclass(frozen=True)
class LocalInvariants:
    f1: float
    f2: float
    f3: float
    f4: float


@dataclass(frozen=True)
class LocalInvariantPoint:
    """A point of the candidate local orbit space in the basis {f1, f2, c2, c3}."""

    f1: float
    f2: float
    c2: float
    c3: float

    @property
    def f3(self) -> float:
        # determined by the basis: c2 = f1^2 + f2 + f3
        return self.c2 - self.f1**2 - self.f2

    def as_array(self) -> np.ndarray:
        return np.array([self.f1, self.f2, self.c2, self.c3])


@dataclass(frozen=True)
class TraceCoordinates:
    t2: float
    t3: float
    c2: float
    c3: float


@dataclass(frozen=True)
class RelationResiduals:
    """Residuals of the Casimir-through-local-invariant relations."""

    c2: float
    c3_printed: float
    c3_fitted: float


def casimir_arrays(xi: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """(c2, c3) for xi of shape (..., 8)."""
    xi = np.asarray(xi, dtype=float)
    d = su3.d_tensor()
    c2 = np.einsum("...a,...a->...", xi, xi)
    dxx = np.einsum("abc,...b,...c->...a", d, xi, xi)
    c3 = su3.SQRT3 * np.einsum("...a,...a->...", dxx, xi)
    return c2, c3


def local_invariant_arrays(xi: np.ndarray) -> tuple[np.ndarray, ...]:
    """(f1, f2, f3, f4) for xi of shape (..., 8)."""
    x = np.asarray(xi, dtype=float)
    f1 = x[..., 7]
    f2 = x[..., 0] ** 2 + x[..., 1] ** 2 + x[..., 2] ** 2
    f3 = x[..., 3] ** 2 + x[..., 4] ** 2 + x[..., 5] ** 2 + x[..., 6] ** 2
    f4 = 2.0 * (
        -x[..., 0] * (x[..., 3] * x[..., 5] + x[..., 4] * x[..., 6])
        + x[..., 1] * (x[..., 3] * x[..., 6] - x[..., 4] * x[..., 5])
    ) + x[..., 2] * (-x[..., 3] ** 2 - x[..., 4] ** 2 + x[..., 5] ** 2 + x[..., 6] ** 2)
    return f1, f2, f3, f4


def casimirs(xi) -> GlobalInvariants:
    c2, c3 = casimir_arrays(np.asarray(xi, dtype=float).reshape(8))
    return GlobalInvariants(float(c2), float(c3))


def local_invariants(xi) -> LocalInvariants:
    f1, f2, f3, f4 = local_invariant_arrays(np.asarray(xi, dtype=float).reshape(8))
    return LocalInvariants(float(f1), float(f2), float(f3), float(f4))


def local_point(xi) -> LocalInvariantPoint:
    """Invariants of a Bloch vector in the integrity basis {f1, f2, c2, c3}."""
    g = casimirs(xi)
    loc = local_invariants(xi)
    return LocalInvariantPoint(loc.f1, loc.f2, g.c2, g.c3)


def trace_coordinates(rho: np.ndarray) -> TraceCoordinates:
    """t2 = tr rho^2, t3 = tr rho^3 and the Casimirs they determine."""
    rho = np.asarray(rho, dtype=complex)
    su3.density_to_bloch(rho)  # validates hermiticity / trace
    r2 = rho @ rho
    t2 = float(np.trace(r2).real)
    t3 = float(np.trace(r2 @ rho).real)
    c2 = (3.0 * t2 - 1.0) / 2.0
    c3 = (9.0 * t3 - 1.0 - 6.0 * c2) / 2.0
    return TraceCoordinates(t2, t3, c2, c3)


@dataclass(frozen=True)
class C3Relation:
    """Exact coefficients of c3 = a f1^3 + b f1 f2 + c f1 f3 + e f4.

    a, b, c are rational; e is an exact rational multiple of sqrt(3), stored
    as that multiple (``e = e_sqrt3 * sqrt(3)``).
    """

    a: Fraction
    b: Fraction
    c: Fraction
    e_sqrt3: Fraction

    @property
    def e(self) -> float:
        return float(self.e_sqrt3) * su3.SQRT3

    def evaluate(self, f1, f2, f3, f4):
        return (
            float(self.a) * f1**3
            + float(self.b) * f1 * f2
            + float(self.c) * f1 * f3
            + self.e * f4
        )


# coefficients of the published c3 relation, kept for the comparison report:
# c3 = f1 (f2 - f3/2) - (3 sqrt3 / 4) f4 - f1^3
PRINTED_C3_COEFFS = {"a": -1.0, "b": 1.0, "c": -0.5, "e": -0.75 * su3.SQRT3}


@lru_cache(maxsize=1)
def fit_c3_relation() -> C3Relation:
    """Solve c3 = a f1^3 + b f1 f2 + c f1 f3 + e f4 as an exact identity.

    Works in scaled coordinates (eta8 = xi8/sqrt3) where both sides divided
    by sqrt(3) are rational polynomials; the degree-3 invariant space is
    4-dimensional, so the solution is unique.  Raises if the system is
    inconsistent, and verifies the residual vanishes identically.
    """
    basis = scaled_basis_polynomials()
    F1, F2, F3, F4, C3R = (basis[k] for k in ("F1", "F2", "F3", "F4", "C3R"))
    # c3/sqrt3 = a' F1^3 + b' F1 F2 + c' F1 F3 + e' F4 with
    # a = 3 a', b = b', c = c', e = e' sqrt(3)   (since f1 = sqrt3 F1)
    candidates = [F1 * F1 * F1, F1 * F2, F1 * F3, F4]
    sol = solve_exact([p.coeffs for p in candidates], C3R.coeffs)
    residual = C3R
    for coeff, poly in zip(sol, candidates):
        residual = residual - coeff * poly
    if not residual.is_zero():
        raise AssertionError("fitted c3 relation residual is not identically zero")
    return C3Relation(a=sol[0] / 3, b=sol[1], c=sol[2], e_sqrt3=sol[3])


def casimir_relation_check(xi) -> RelationResiduals:
    """Residuals of the c2 identity and of both c3 relations at one point."""
    xi = np.asarray(xi, dtype=float).reshape(8)
    c2, c3 = casimir_arrays(xi)
    f1, f2, f3, f4 = local_invariant_arrays(xi)
    r_c2 = float(c2 - (f1**2 + f2 + f3))
    p = PRINTED_C3_COEFFS
    r_printed = float(c3 - (p["a"] * f1**3 + p["b"] * f1 * f2 + p["c"] * f1 * f3 + p["e"] * f4))
    fitted = fit_c3_relation()
    r_fitted = float(c3 - fitted.evaluate(f1, f2, f3, f4))
    return RelationResiduals(c2=r_c2, c3_printed=r_printed, c3_fitted=r_fitted)


def invariants_json_dict(xi) -> dict:
    """Flat JSON record with keys c2, c3, f1..f4 for one Bloch vector."""
    g = casimirs(xi)
    loc = local_invariants(xi)
    return {
        "c2": g.c2,
        "c3": g.c3,
        "f1": loc.f1,
        "f2": loc.f2,
        "f3": loc.f3,
        "f4": loc.f4,
    }


__all__ = [
    "GlobalInvariants",
    "LocalInvariants",
    "LocalInvariantPoint",
    "TraceCoordinates",
    "RelationResiduals",
    "C3Relation",
    "PRINTED_C3_COEFFS",
    "casimirs",
    "local_invariants",
    "local_point",
    "casimir_arrays",
    "local_invariant_arrays",
    "trace_coordinates",
    "casimir_relation_check",
    "fit_c3_relation",
    "invariants_json_dict",
]

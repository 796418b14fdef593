"""Count and construct homogeneous invariants from infinitesimal invariance.

A polynomial p on Bloch space is invariant under a connected subgroup iff
V_a p = 0 for the adjoint vector fields V_a of its generators (lambda_1,
lambda_2, lambda_3, lambda_8 locally; all eight for SU(3)).  The fields are
lifted to the monomial basis of each degree by the Leibniz rule and the
common kernel is computed by exact rational elimination, so dimensions are
exact integers.  Kernels are computed in scaled coordinates (eta8 =
xi8/sqrt3) where all matrices are rational; dimensions and spans are
unaffected by that rescaling.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

import numpy as np

from . import su3
from .exactalg import NVARS, scaled_vector_field
from .polynomials import Polynomial, kernel_basis, monomial_exponents

LOCAL_GENERATORS = (1, 2, 3, 8)
SU3_GENERATORS = tuple(range(1, 9))


@dataclass(frozen=True)
class GeneratorAction:
    """Adjoint vector field of generator lambda_a on degree-1 polynomials."""

    a: int
    matrix: np.ndarray  # 8x8, d(xi_c)/dt = matrix[c, b] xi_b


def generator_vector_field(a: int) -> GeneratorAction:
    """The 8x8 matrix of V_a, i.e. 2 f_{acb} on (row c, column b).

    Sign convention: exp(t V_a) applied to xi reproduces the Bloch vector of
    exp(i lambda_a t) rho exp(-i lambda_a t) (checked against finite
    conjugation in the tests).
    """
    f = su3.f_tensor()
    m = -2.0 * f[a - 1].T  # (c, b) entry = -2 f_{a b c}
    return GeneratorAction(a=a, matrix=m)


def flow(action: GeneratorAction, t: float) -> np.ndarray:
    """exp(t V_a) as an 8x8 rotation (via the Hermitian form of i V)."""
    h = 1j * action.matrix  # antisymmetric real -> Hermitian
    w, v = np.linalg.eigh(h)
    return (v @ np.diag(np.exp(-1j * t * w)) @ v.conj().T).real


def _lifted_rows(gen: int, exponents: list[tuple], index: dict) -> list[dict]:
    """Invariance constraints of one generator on a monomial basis.

    Row beta of the result is the equation sum_alpha p_alpha *
    [coefficient of monomial beta in V(x^alpha)] = 0, i.e. rows are indexed
    by target monomials and columns by the unknown coefficients.
    """
    vf = scaled_vector_field(gen)
    by_target: dict[int, dict[int, Fraction]] = {}
    for i, e in enumerate(exponents):
        for c in range(NVARS):
            if not e[c]:
                continue
            for b in range(NVARS):
                coeff = vf[c][b]
                if not coeff:
                    continue
                t = list(e)
                t[c] -= 1
                t[b] += 1
                j = index[tuple(t)]
                row = by_target.setdefault(j, {})
                v = row.get(i, Fraction(0)) + e[c] * coeff
                if v:
                    row[i] = v
                else:
                    row.pop(i, None)
    return [row for row in by_target.values() if row]


@lru_cache(maxsize=None)
def _kernel(generators: tuple, degree: int) -> tuple[tuple, list]:
    exponents = monomial_exponents(NVARS, degree)
    index = {e: i for i, e in enumerate(exponents)}
    rows: list[dict] = []
    for g in generators:
        rows.extend(_lifted_rows(g, exponents, index))
    basis = kernel_basis(rows, len(exponents))
    return tuple(exponents), basis


def invariant_dimension(degree: int, generators=LOCAL_GENERATORS) -> tuple[int, list[Polynomial]]:
    """Dimension and exact basis of degree-k invariants of the local group.

    Basis polynomials are in scaled coordinates (xi1..xi7, eta8 = xi8/sqrt3)
    with Fraction coefficients.
    """
    exponents, vecs = _kernel(tuple(generators), degree)
    polys = [
        Polynomial({exponents[j]: c for j, c in vec.items()}, NVARS) for vec in vecs
    ]
    return len(polys), polys


def su3_invariant_dimension(degree: int) -> int:
    """Dimension of the degree-k SU(3) invariants (kernel of all eight fields)."""
    dim, _ = invariant_dimension(degree, SU3_GENERATORS)
    return dim


def kernel_counts(group: str, max_degree: int) -> list[int]:
    """Invariant dimensions for k = 0..max_degree; group "su3" or "u2"."""
    gens = SU3_GENERATORS if group == "su3" else LOCAL_GENERATORS
    return [invariant_dimension(k, gens)[0] for k in range(max_degree + 1)]


def spans_equal(polys_a: list[Polynomial], polys_b: list[Polynomial]) -> bool:
    """Exact test that two sets of polynomials span the same space."""
    keys = sorted({e for p in polys_a + polys_b for e in p.coeffs})
    kidx = {k: i for i, k in enumerate(keys)}

    def rank(polys):
        rows = [{kidx[e]: c for e, c in p.coeffs.items()} for p in polys]
        return len(keys) - len(kernel_basis(rows, len(keys)))

    ra, rb, rab = rank(polys_a), rank(polys_b), rank(polys_a + polys_b)
    return ra == rb == rab


def evaluate_scaled(poly: Polynomial, xi: np.ndarray) -> np.ndarray:
    """Evaluate a scaled-coordinate polynomial at true Bloch vectors xi."""
    xi = np.asarray(xi, dtype=float)
    pts = xi.copy()
    pts[..., 7] = pts[..., 7] / su3.SQRT3
    out = np.zeros(pts.shape[:-1])
    for e, c in poly.coeffs.items():
        term = np.full(pts.shape[:-1], float(c))
        for k, p in enumerate(e):
            if p:
                term = term * pts[..., k] ** p
        out = out + term
    return out

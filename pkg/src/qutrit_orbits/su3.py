"""Gell-Mann basis of su(3), structure constants, and Bloch-vector conversions.

A qutrit state is parameterized as

    rho = (1/3) * (I + sqrt(3) * sum_a xi_a * lambda_a),    a = 1..8,

where lambda_a are the eight Gell-Mann matrices.  The symmetric (d) and
antisymmetric (f) structure constants are always computed from the matrices
via the quarter-trace formulas

    d_abc = (1/4) Tr({lambda_a, lambda_b} lambda_c)
    f_abc = (1/4i) Tr([lambda_a, lambda_b] lambda_c)

so the sign convention is fixed by [lambda_a, lambda_b] = 2i f_abc lambda_c
with the standard matrix ordering below.  Nothing is transcribed from tables.
"""

from __future__ import annotations

from functools import lru_cache

import numpy as np

SQRT3 = np.sqrt(3.0)

# the eight Gell-Mann matrices, in the conventional order
_LAMBDA = np.zeros((8, 3, 3), dtype=complex)
_LAMBDA[0] = [[0, 1, 0], [1, 0, 0], [0, 0, 0]]
_LAMBDA[1] = [[0, -1j, 0], [1j, 0, 0], [0, 0, 0]]
_LAMBDA[2] = [[1, 0, 0], [0, -1, 0], [0, 0, 0]]
_LAMBDA[3] = [[0, 0, 1], [0, 0, 0], [1, 0, 0]]
_LAMBDA[4] = [[0, 0, -1j], [0, 0, 0], [1j, 0, 0]]
_LAMBDA[5] = [[0, 0, 0], [0, 0, 1], [0, 1, 0]]
_LAMBDA[6] = [[0, 0, 0], [0, 0, -1j], [0, 1j, 0]]
_LAMBDA[7] = np.diag([1.0, 1.0, -2.0]) / SQRT3
_LAMBDA.setflags(write=False)


def gell_mann(a: int) -> np.ndarray:
    """Return lambda_a for a in 1..8 (copy; the cached array is immutable)."""
    if not 1 <= a <= 8:
        raise IndexError(f"Gell-Mann index must be in 1..8, got {a}")
    return _LAMBDA[a - 1].copy()


def gell_mann_basis() -> np.ndarray:
    """All eight matrices as a read-only (8, 3, 3) array."""
    return _LAMBDA


@lru_cache(maxsize=1)
def structure_constants() -> tuple[np.ndarray, np.ndarray]:
    """Compute (d, f) as dense (8, 8, 8) arrays from the matrices.

    d is totally symmetric, f totally antisymmetric; both are cached and
    returned read-only.
    """
    lam = _LAMBDA
    # P[a,b] = lambda_a lambda_b
    prod = np.einsum("aij,bjk->abik", lam, lam)
    tr_abc = np.einsum("abij,cji->abc", prod, lam)
    d = 0.25 * (tr_abc + np.einsum("bac->abc", tr_abc)).real
    f = 0.25 * (tr_abc - np.einsum("bac->abc", tr_abc)).imag
    # drop numerical dust so exact zeros are exact
    d[np.abs(d) < 1e-14] = 0.0
    f[np.abs(f) < 1e-14] = 0.0
    d.setflags(write=False)
    f.setflags(write=False)
    return d, f


def d_tensor() -> np.ndarray:
    return structure_constants()[0]


def f_tensor() -> np.ndarray:
    return structure_constants()[1]


def bloch_to_density(xi: np.ndarray) -> np.ndarray:
    """rho = (1/3)(I + sqrt(3) xi.lambda).  Accepts (8,) or (N, 8)."""
    xi = np.asarray(xi, dtype=float)
    rho = np.tensordot(xi, _LAMBDA, axes=([-1], [0])) * (SQRT3 / 3.0)
    eye = np.eye(3) / 3.0
    return rho + eye


def density_to_bloch(rho: np.ndarray, check: bool = True, tol: float = 1e-9) -> np.ndarray:
    """Invert the Bloch parametrization: xi_a = (sqrt(3)/2) Tr(rho lambda_a).

    With ``check``, non-Hermitian or non-unit-trace input raises ValueError
    reporting the violating magnitude.  Accepts (3,3) or (N,3,3).
    """
    rho = np.asarray(rho, dtype=complex)
    if check:
        herm = np.max(np.abs(rho - np.conj(np.swapaxes(rho, -1, -2))))
        if herm > tol:
            raise ValueError(f"density matrix not Hermitian: max |rho - rho^dag| = {herm:.3e}")
        tr_err = np.max(np.abs(np.trace(rho, axis1=-2, axis2=-1) - 1.0))
        if tr_err > tol:
            raise ValueError(f"density matrix trace differs from 1 by {tr_err:.3e}")
    xi = np.einsum("...ij,aji->...a", rho, _LAMBDA).real
    return (SQRT3 / 2.0) * xi


def eigenvalues(rho: np.ndarray) -> np.ndarray:
    """Real spectrum of a Hermitian 3x3 (or stacked) matrix, descending."""
    w = np.linalg.eigvalsh(np.asarray(rho, dtype=complex))
    return w[..., ::-1]


def density_to_json_dict(rho: np.ndarray) -> dict:
    """Serialize a single 3x3 density matrix as {"re": ..., "im": ...}."""
    rho = np.asarray(rho, dtype=complex)
    if rho.shape != (3, 3):
        raise ValueError(f"expected a single 3x3 matrix, got shape {rho.shape}")
    return {"re": rho.real.tolist(), "im": rho.imag.tolist()}


def density_from_json_dict(obj: dict) -> np.ndarray:
    """Parse the {"re", "im"} row-major JSON form back into a complex array."""
    try:
        re = np.asarray(obj["re"], dtype=float)
        im = np.asarray(obj["im"], dtype=float)
    except (KeyError, TypeError) as exc:
        raise ValueError("density JSON must contain 3x3 arrays 're' and 'im'") from exc
    if re.shape != (3, 3) or im.shape != (3, 3):
        raise ValueError(f"density JSON arrays must be 3x3, got {re.shape} and {im.shape}")
    return re + 1j * im

from fractions import Fraction

import numpy as np
import pytest

from qutrit_orbits import gradgeom, sampling
from qutrit_orbits.invariants import casimir_arrays, local_invariant_arrays
from qutrit_orbits.polynomials import Polynomial

SQRT3 = np.sqrt(3.0)


def test_numeric_grad_vanishes_at_origin():
    g = gradgeom.numeric_grad(np.zeros(8), "global")
    assert np.allclose(g, 0.0)


def test_global_entries_match_closed_form():
    xi = sampling.uniform_bloch_cube(5000, seed=41)
    c2, c3 = casimir_arrays(xi)
    g = gradgeom.numeric_grad(xi, "global")
    assert np.max(np.abs(g[:, 0, 0] - 4 * c2)) < 1e-12
    assert np.max(np.abs(g[:, 0, 1] - 6 * c3)) < 1e-11
    assert np.max(np.abs(g[:, 1, 1] - 9 * c2**2)) < 1e-10


def test_grad_su3_det_is_discriminant():
    assert np.allclose(gradgeom.grad_su3_closed(0.0, 0.0), 0.0)
    xi = sampling.uniform_bloch_cube(5000, seed=42)
    c2, c3 = casimir_arrays(xi)
    det = np.linalg.det(gradgeom.grad_su3_closed(c2, c3))
    assert np.max(np.abs(det - 36 * (c2**3 - c3**2)) / np.maximum(1, c2**3)) < 1e-12


def test_dxx_squared_identity():
    # (d xi xi).(d xi xi) = c2^2 / 3, equivalent to Grad22 = 9 c2^2
    from qutrit_orbits import su3

    xi = sampling.uniform_bloch_cube(2000, seed=43)
    d = su3.d_tensor()
    dxx = np.einsum("abc,nb,nc->na", d, xi, xi)
    c2 = np.einsum("na,na->n", xi, xi)
    assert np.max(np.abs(np.einsum("na,na->n", dxx, dxx) - c2**2 / 3.0)) < 1e-12


def test_fit_grad_entry_examples():
    assert gradgeom.fit_grad_entry(3, 3).coeffs == {(0, 0, 1, 0): Fraction(4)}
    assert gradgeom.fit_grad_entry(3, 4).coeffs == {(0, 0, 0, 1): Fraction(6)}
    assert gradgeom.fit_grad_entry(1, 1).coeffs == {(0, 0, 0, 0): Fraction(1)}
    assert gradgeom.fit_grad_entry(1, 2).coeffs == {}
    assert gradgeom.fit_grad_entry(1, 3).coeffs == {(1, 0, 0, 0): Fraction(2)}
    assert gradgeom.fit_grad_entry(4, 4).coeffs == {(0, 0, 2, 0): Fraction(9)}


def test_fitted_24_entry_corrects_printed_form():
    fitted = gradgeom.fit_grad_entry(2, 4)
    printed = gradgeom.PRINTED_LOCAL_ENTRIES[(2, 4)]
    assert fitted != printed
    diff = dict(fitted.coeffs)
    for e, c in printed.coeffs.items():
        diff[e] = diff.get(e, Fraction(0)) - c
        if not diff[e]:
            del diff[e]
    assert diff == {(3, 0, 0, 0): Fraction(-1)}  # exactly the missing -f1^3


def test_all_printed_entries_except_24_validate():
    fitted = gradgeom.validated_local_entries()
    for key, printed in gradgeom.PRINTED_LOCAL_ENTRIES.items():
        if key == (2, 4):
            continue
        assert fitted[key] == printed, key


def test_closed_form_matches_oracle_and_fit():
    xi = sampling.uniform_bloch_cube(20000, seed=44)
    c2, c3 = casimir_arrays(xi)
    f1, f2, _, _ = local_invariant_arrays(xi)
    oracle = gradgeom.numeric_grad(xi, "local")
    closed = gradgeom.grad_local_closed(f1, f2, c2, c3)
    scale = np.maximum(1.0, np.abs(oracle))
    assert np.max(np.abs(closed - oracle) / scale) < 1e-10
    fitted = gradgeom.validated_local_entries()
    for (i, j), poly in fitted.items():
        vals = poly.evaluate(f1, f2, c2, c3)
        assert np.max(np.abs(vals - closed[:, i - 1, j - 1])) < 1e-10, (i, j)


def _as_poly4(ip: gradgeom.InvariantPolynomial) -> Polynomial:
    return Polynomial(dict(ip.coeffs), 4)


def test_det_factorization_is_exact_polynomial_identity():
    """det(closed form) = FACTOR1 * FACTOR2 in exact rational arithmetic."""
    entries = gradgeom.validated_local_entries()
    m = [[_as_poly4(entries[(min(i, j) + 1, max(i, j) + 1)]) for j in range(4)] for i in range(4)]

    def det4(mat):
        # cofactor expansion; fine for 4x4 polynomial matrices
        def det_n(rows, cols):
            if len(rows) == 1:
                return mat[rows[0]][cols[0]]
            total = Polynomial.zero(4)
            r = rows[0]
            for k, c in enumerate(cols):
                minor = det_n(rows[1:], cols[:k] + cols[k + 1 :])
                term = mat[r][c] * minor
                total = total + (term if k % 2 == 0 else Fraction(-1) * term)
            return total

        return det_n(list(range(4)), list(range(4)))

    det = det4(m)
    product = _as_poly4(gradgeom.DET_FACTOR1) * _as_poly4(gradgeom.DET_FACTOR2)
    assert (det - product).is_zero()


def test_det_grad_local_examples():
    assert gradgeom.det_grad_local(0.0, 0.0, 0.0, 0.0).value == 0.0
    rho = sampling.random_density(sampling.SamplerConfig(seed=45, count=2000))
    from qutrit_orbits import su3

    xi = su3.density_to_bloch(rho, check=False)
    c2, c3 = casimir_arrays(xi)
    f1, f2, _, _ = local_invariant_arrays(xi)
    for k in range(0, 2000, 200):
        fac = gradgeom.det_grad_local(f1[k], f2[k], c2[k], c3[k])
        assert fac.value == pytest.approx(fac.factor1 * fac.factor2, rel=1e-12, abs=1e-15)
        # physical states have nonnegative determinant (PSD Grad)
        g = gradgeom.grad_local_closed(f1[k], f2[k], c2[k], c3[k])
        scale = max(1.0, np.abs(g).max() ** 4)
        assert fac.value >= -1e-9 * scale


def test_det_matches_numeric_oracle():
    xi = sampling.uniform_bloch_cube(20000, seed=46)
    c2, c3 = casimir_arrays(xi)
    f1, f2, _, _ = local_invariant_arrays(xi)
    oracle = np.linalg.det(gradgeom.numeric_grad(xi, "local"))
    closed = gradgeom.DET_FACTOR1.evaluate(f1, f2, c2, c3) * gradgeom.DET_FACTOR2.evaluate(
        f1, f2, c2, c3
    )
    g = gradgeom.grad_local_closed(f1, f2, c2, c3)
    scale = np.maximum(1.0, np.abs(g).max(axis=(1, 2)) ** 4)
    assert np.max(np.abs(closed - oracle) / scale) < 1e-8


def test_sigma_roots_back_substitute():
    rng = np.random.default_rng(47)
    f1 = rng.uniform(-1, 0.5, 3000)
    f2 = rng.uniform(0, 1, 3000)
    c2 = rng.uniform(0, 1, 3000)
    lo, hi = gradgeom.sigma_surfaces(f1, f2, c2)
    assert np.all(lo <= hi + 1e-14)
    for c3 in (lo, hi):
        det = gradgeom.DET_FACTOR1.evaluate(f1, f2, c2, c3) * gradgeom.DET_FACTOR2.evaluate(
            f1, f2, c2, c3
        )
        g = gradgeom.grad_local_closed(f1, f2, c2, c3)
        scale = np.maximum(1.0, np.abs(g).max(axis=(1, 2)) ** 4)
        assert np.max(np.abs(det) / scale) < 1e-9


def test_sigma_collapse_on_delta1_and_delta2():
    rng = np.random.default_rng(48)
    f1 = rng.uniform(-1, 0.5, 1000)
    c2 = rng.uniform(0, 1, 1000)
    lo, hi = gradgeom.sigma_surfaces(f1, np.zeros_like(f1), c2)
    assert np.max(hi - lo) < 1e-10
    assert np.max(np.abs(lo - gradgeom.delta1_c3(f1, c2))) < 1e-10
    f2 = np.clip(c2 - f1**2, 0, None)
    c2d = f1**2 + f2
    lo, hi = gradgeom.sigma_surfaces(f1, f2, c2d)
    assert np.max(hi - lo) < 1e-10
    assert np.max(np.abs(lo - gradgeom.delta2_c3(f1, c2d))) < 1e-10


def test_sigma_rejects_negative_f2():
    with pytest.raises(ValueError):
        gradgeom.sigma_surfaces(0.1, -0.5, 0.3)


def test_psd_implies_f2_nonnegative():
    # A-block diagonal carries 4 f2: min eigenvalue >= -tol forces f2 >= -tol/4
    rng = np.random.default_rng(49)
    pts = rng.uniform(-1, 1, size=(500, 4))
    g = gradgeom.grad_local_closed(pts[:, 0], pts[:, 1], pts[:, 2], pts[:, 3])
    eigmin = np.linalg.eigvalsh(g)[:, 0]
    psd = eigmin >= -1e-10
    assert np.all(pts[psd, 1] >= -1e-10)


def test_gradcheck_report_shape():
    rep = gradgeom.gradcheck_report(samples=5000, seed=50)
    assert rep["pass"] is True
    assert len(rep["entries"]) == 10
    flagged = [e for e in rep["entries"] if not e["printed_matches_fit"]]
    assert [tuple(e["entry"]) for e in flagged] == [(2, 4)]
    assert rep["det"]["pass"] and rep["global"]["pass"]

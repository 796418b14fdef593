"""Acceptance suite: every criterion at its stated tolerance.

Each test prints one `[criterion-N] PASS/FAIL` line (run pytest with -s to
see them on success; they also appear in captured output on failure).
"""

import time
from fractions import Fraction

import numpy as np
import pytest

from qutrit_orbits import counting, gradgeom, membership, molien, sampling, su3
from qutrit_orbits.invariants import (
    casimir_arrays,
    fit_c3_relation,
    local_invariant_arrays,
    trace_coordinates,
)

SEED = 20240901
N_SAMPLES = 100_000


def _report(num: int, ok: bool, detail: str):
    print(f"[criterion-{num}] {'PASS' if ok else 'FAIL'}: {detail}")
    assert ok, detail


def test_criterion_1_algebra_self_test():
    t0 = time.perf_counter()
    lam = su3.gell_mann_basis()
    gram = np.einsum("aij,bji->ab", lam, lam)
    dev_ortho = np.max(np.abs(gram - 2 * np.eye(8)))
    d, f = su3.structure_constants()
    recon = (2 / 3) * np.einsum("ab,ij->abij", np.eye(8), np.eye(3)) + np.einsum(
        "abc,cij->abij", d + 1j * f, lam
    )
    dev_prod = np.max(np.abs(recon - np.einsum("aij,bjk->abik", lam, lam)))
    dev_consts = max(abs(f[0, 1, 2] - 1.0), abs(d[7, 7, 7] + 1 / np.sqrt(3)))
    elapsed = time.perf_counter() - t0
    ok = dev_ortho <= 1e-12 and dev_prod <= 1e-12 and dev_consts <= 1e-12 and elapsed < 1.0
    _report(
        1,
        ok,
        f"orthogonality {dev_ortho:.1e}, product identity {dev_prod:.1e}, "
        f"f123/d888 {dev_consts:.1e}, {elapsed:.2f} s",
    )


def test_criterion_2_grad_su3_determinant():
    t0 = time.perf_counter()
    xi = sampling.uniform_bloch_cube(N_SAMPLES, SEED)
    c2, c3 = casimir_arrays(xi)
    g = gradgeom.numeric_grad(xi, "global")
    det = np.linalg.det(g)
    rel_det = np.max(np.abs(det - 36 * (c2**3 - c3**2)) / np.maximum(1.0, np.abs(c2) ** 3))
    rel_g22 = np.max(np.abs(g[:, 1, 1] - 9 * c2**2) / np.maximum(1.0, c2**2))
    elapsed = time.perf_counter() - t0
    ok = rel_det <= 1e-10 and rel_g22 <= 1e-10 and elapsed < 5.0
    _report(2, ok, f"det rel {rel_det:.1e}, Grad22 rel {rel_g22:.1e}, {elapsed:.2f} s ({N_SAMPLES} pts)")


def test_criterion_3_triangle_vertices():
    cases = [
        (np.eye(3) / 3.0, (0.0, 0.0), "A"),
        (np.diag([1.0, 0.0, 0.0]), (1.0, 1.0), "C"),
        (np.diag([0.5, 0.5, 0.0]), (0.25, -0.125), "B"),
    ]
    worst = 0.0
    all_binding = True
    for rho, (c2e, c3e), _name in cases:
        tc = trace_coordinates(rho)
        worst = max(worst, abs(tc.c2 - c2e), abs(tc.c3 - c3e))
        verdict = membership.in_global_orbit_space(tc.c2, tc.c3)
        all_binding = all_binding and verdict.inside and len(verdict.binding) > 0
    ok = worst <= 1e-12 and all_binding
    _report(3, ok, f"vertex coordinates exact to {worst:.1e}, boundary-binding flagged")


def test_criterion_4_monte_carlo_inclusion():
    t0 = time.perf_counter()
    cfg = sampling.SamplerConfig(seed=SEED, count=N_SAMPLES)
    failures = 0
    worst = np.inf
    for start in range(0, N_SAMPLES, 25_000):
        xi = sampling.random_bloch(cfg, start=start, count=25_000)
        c2, c3 = casimir_arrays(xi)
        f1, f2, _, _ = local_invariant_arrays(xi)
        q = c2 - 2 * c3 / 3
        pos_slacks = np.stack([1 - c2, q, 1 / 3 - q])
        glob = np.stack([c2, 1 - c2, 3 * c2 - 2 * c3, 1 - (3 * c2 - 2 * c3), c2**3 - c3**2])
        loc = membership.local_membership_slack_arrays(f1, f2, c2, c3)
        worst = min(
            worst,
            float(pos_slacks.min()),
            float(glob.min()),
            float(loc["grad_psd"].min()),
            float(loc["f2"].min()),
            float(loc["f3"].min()),
        )
        failures += int((pos_slacks < -1e-10).any(axis=0).sum())
        failures += int((glob < -1e-10).any(axis=0).sum())
        failures += int(
            (
                (loc["grad_psd"] < -1e-10) | (loc["f2"] < -1e-10) | (loc["f3"] < -1e-10)
            ).sum()
        )
    elapsed = time.perf_counter() - t0
    ok = failures == 0 and elapsed < 60.0
    _report(4, ok, f"{failures} failures over {N_SAMPLES} states, worst slack {worst:.1e}, {elapsed:.1f} s")


def test_criterion_5_invariance_drift():
    n_states, n_group = 100, 1000
    rho = sampling.random_density(sampling.SamplerConfig(seed=SEED + 1, count=n_states))
    xi0 = su3.density_to_bloch(rho, check=False)
    f0 = np.stack(local_invariant_arrays(xi0), axis=-1)
    c0 = np.stack(casimir_arrays(xi0), axis=-1)
    drift_f = drift_c = 0.0
    for start in range(0, n_group, 250):
        g = sampling.local_u2(SEED + 2, count=250, start=start)
        conj = np.einsum("gij,njk,glk->gnil", g, rho, g.conj())
        fv = np.stack(local_invariant_arrays(su3.density_to_bloch(conj, check=False)), axis=-1)
        drift_f = max(drift_f, float(np.max(np.abs(fv - f0[None]))))
        u = sampling.haar_u3(SEED + 3, count=250, start=start)
        conj = np.einsum("gij,njk,glk->gnil", u, rho, u.conj())
        cv = np.stack(casimir_arrays(su3.density_to_bloch(conj, check=False)), axis=-1)
        drift_c = max(drift_c, float(np.max(np.abs(cv - c0[None]))))
    ok = drift_f <= 1e-10 and drift_c <= 1e-10
    _report(
        5,
        ok,
        f"f1..f4 drift {drift_f:.1e} over {n_states}x{n_group} local conjugations, "
        f"c2,c3 drift {drift_c:.1e} under Haar U(3)",
    )


def test_criterion_6_molien_agreement():
    t0 = time.perf_counter()
    t_u2 = molien.molien_table("su2xu1", "bloch8", 4, "all")
    t_su3 = molien.molien_table("su3", "bloch8", 6, "all")
    ok_u2 = all(m["counts"] == [1, 1, 3, 4, 7] for m in t_u2["methods"].values())
    ok_su3 = all(m["counts"] == [1, 0, 1, 1, 1, 1, 2] for m in t_su3["methods"].values())
    residual = max(
        t_u2["methods"]["quadrature"]["max_residual"],
        t_su3["methods"]["quadrature"]["max_residual"],
    )
    rep = molien.residue_consistency_report(4)
    reported = (
        rep["su2xu1"]["printed_matches_bloch8"] is True
        and rep["su2xu1"]["printed_matches_matrix9"] is False
        and rep["su2xu1"]["quadrature_matrix9"] == [1, 2, 5, 9, 16]
    )
    elapsed = time.perf_counter() - t0
    ok = ok_u2 and ok_su3 and residual <= 1e-8 and reported and elapsed < 60.0
    _report(
        6,
        ok,
        f"three methods agree (u2: 1,1,3,4,7; su3: 1,0,1,1,1,1,2), residual {residual:.1e}, "
        f"d=9 label discrepancy reported, {elapsed:.1f} s",
    )


def test_criterion_7_formula_validation():
    t0 = time.perf_counter()
    rep = gradgeom.gradcheck_report(samples=N_SAMPLES, seed=SEED, tol=1e-10)
    rel = fit_c3_relation()  # construction verifies the exact zero residual
    ok = (
        rep["pass"]
        and all(e["max_rel_deviation"] <= 1e-10 for e in rep["entries"])
        and rel.a == Fraction(-1)
    )
    elapsed = time.perf_counter() - t0
    worst = max(e["max_rel_deviation"] for e in rep["entries"])
    _report(
        7,
        ok,
        f"all 10 entries certified at {N_SAMPLES} pts (worst rel {worst:.1e}), "
        f"fitted c3 relation exact with f1^3 coefficient {rel.a}, {elapsed:.1f} s",
    )


def test_criterion_8_geometry_regression():
    n = 64
    mesh0 = membership.slice_mesh(0.0, n)
    hausdorff = membership.projection_hausdorff_to_triangle(mesh0.projection)
    ok_h = hausdorff <= 2.0 / n

    tb = membership.triangle_boundary(3000)
    ok_nest = True
    for f1 in (0.4, -0.4, -0.9):
        mesh = membership.slice_mesh(f1, 48)
        proj = np.asarray(mesh.projection)
        outside = ~membership.triangle_contains(proj[:, 0], proj[:, 1])
        overshoot = (
            float(membership._point_to_segments(proj[outside], tb).max()) if outside.any() else 0.0
        )
        strictly_smaller = proj[:, 0].min() >= f1**2 - 1.0 / 48 and f1**2 > 2.0 / 48
        ok_nest = ok_nest and overshoot <= 2.0 / 48 and strictly_smaller

    rng = np.random.Generator(np.random.Philox(key=[np.uint64(SEED), np.uint64(0x88)]))
    f1 = rng.uniform(-1, 0.5, 5000)
    f2 = rng.uniform(0, 1, 5000)
    c2 = rng.uniform(0, 1, 5000)
    lo, hi = gradgeom.sigma_surfaces(f1, f2, c2)
    worst_root = 0.0
    for c3 in (lo, hi):
        g = gradgeom.grad_local_closed(f1, f2, c2, c3)
        scale = np.maximum(1.0, np.abs(g).max(axis=(1, 2)) ** 4)
        det = gradgeom.DET_FACTOR1.evaluate(f1, f2, c2, c3) * gradgeom.DET_FACTOR2.evaluate(
            f1, f2, c2, c3
        )
        worst_root = max(worst_root, float(np.max(np.abs(det) / scale)))
    lo1, hi1 = gradgeom.sigma_surfaces(f1, np.zeros_like(f1), c2)
    f2d = np.clip(c2 - f1**2, 0, None)
    lo2, hi2 = gradgeom.sigma_surfaces(f1, f2d, f1**2 + f2d)
    collapse = max(float(np.max(hi1 - lo1)), float(np.max(hi2 - lo2)))

    ok = ok_h and ok_nest and worst_root <= 1e-9 and collapse <= 1e-10
    _report(
        8,
        ok,
        f"slice(0) Hausdorff {hausdorff:.4f} <= {2/n:.4f}, nesting holds for f1 in "
        f"{{2/5, -2/5, -0.9}}, root back-substitution {worst_root:.1e}, "
        f"double-root collapse {collapse:.1e}",
    )

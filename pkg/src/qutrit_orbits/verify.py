"""The aggregated property suite behind ``qutrit-orbits verify``.

Each check is named, carries its own tolerance, and reports a worst-case
figure (signed slack or absolute deviation).  Sample-driven checks are
evaluated in fixed-size index chunks; chunk results are reduced in index
order, so the report is bit-identical for any worker count.
"""

from __future__ import annotations

import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from . import gradgeom, molien, sampling, su3
from .invariants import (
    PRINTED_C3_COEFFS,
    casimir_arrays,
    fit_c3_relation,
    local_invariant_arrays,
)
from .membership import local_membership_slack_arrays

DEFAULT_SEED = 20240901
_CHUNK = 20_000


@dataclass
class CheckResult:
    name: str
    passed: bool
    worst: float
    threshold: float
    detail: str = ""

    def __post_init__(self):
        self.passed = bool(self.passed)
        self.worst = float(self.worst)

    def to_json(self) -> dict:
        return {
            "name": self.name,
            "pass": self.passed,
            "worst": self.worst,
            "threshold": self.threshold,
            "detail": self.detail,
        }


@dataclass
class RunReport:
    command: str
    seed: int
    samples: int
    jobs: int
    checks: list[CheckResult] = field(default_factory=list)
    elapsed_seconds: float = 0.0

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)

    def worst_offender(self) -> CheckResult | None:
        failing = [c for c in self.checks if not c.passed]
        if not failing:
            return None
        return max(failing, key=lambda c: abs(c.worst) / max(c.threshold, 1e-300))

    def to_json(self) -> dict:
        return {
            "schema_version": 1,
            "command": self.command,
            "seed": self.seed,
            "samples": self.samples,
            "jobs": self.jobs,
            "pass": self.passed,
            "elapsed_seconds": self.elapsed_seconds,
            "checks": [c.to_json() for c in self.checks],
        }


def _chunks(total: int, size: int = _CHUNK) -> list[tuple[int, int]]:
    return [(s, min(size, total - s)) for s in range(0, total, size)]


def _sample_chunk(args: tuple) -> dict:
    """Per-chunk worst cases for all sample-driven checks (picklable)."""
    seed, start, count, tol = args
    out: dict[str, float] = {}

    cfg = sampling.SamplerConfig(seed=seed, count=count, ensemble=sampling.HILBERT_SCHMIDT)
    rho = sampling.random_density(cfg, start=start, count=count)
    xi = su3.density_to_bloch(rho, check=False)

    # round trip
    back = su3.bloch_to_density(xi)
    out["roundtrip"] = float(np.max(np.abs(back - rho)))

    # trace identities and the determinant identity
    c2, c3 = casimir_arrays(xi)
    t2 = np.einsum("nij,nji->n", rho, rho).real
    r2 = rho @ rho
    t3 = np.einsum("nij,nji->n", r2, rho).real
    dev_t2 = np.abs(t2 - (1.0 / 3.0 + 2.0 / 3.0 * c2))
    dev_t3 = np.abs(t3 - (1.0 / 9.0 + 2.0 / 3.0 * c2 + 2.0 / 9.0 * c3))
    det = np.linalg.det(rho).real
    dev_det = np.abs((3.0 * c2 - 2.0 * c3) - (1.0 - 27.0 * det))
    out["trace_identities"] = float(max(dev_t2.max(), dev_t3.max(), dev_det.max()))

    # memberships: physical states must satisfy everything
    f1, f2, f3, f4 = local_invariant_arrays(xi)
    q = c2 - 2.0 * c3 / 3.0
    edge = 3.0 * c2 - 2.0 * c3
    global_slacks = np.stack(
        [1.0 - c2, q, 1.0 / 3.0 - q, c2, 1.0 - c2, edge, 1.0 - edge, c2**3 - c3**2]
    )
    out["membership_global"] = float(global_slacks.min())
    local = local_membership_slack_arrays(f1, f2, c2, c3)
    out["membership_psd"] = float(local["grad_psd"].min())
    out["membership_f2f3"] = float(min(local["f2"].min(), local["f3"].min()))
    out["f1_min"] = float(f1.min())
    out["f1_max"] = float(f1.max())

    # physicality predicate vs eigenvalue test on a mix of states
    xi_mix = sampling.uniform_bloch_cube(count, seed, start=start) * 1.1
    c2m, c3m = casimir_arrays(xi_mix)
    qm = c2m - 2.0 * c3m / 3.0
    by_ineq = (
        (c2m <= 1.0 + tol) & (qm >= -tol) & (qm <= 1.0 / 3.0 + tol)
    )
    eig = np.linalg.eigvalsh(su3.bloch_to_density(xi_mix))
    by_eig = eig[:, 0] >= -1e-9
    out["physicality_disagreements"] = float(np.sum(by_ineq != by_eig))

    # gradient oracle on the uniform cube
    xic = sampling.uniform_bloch_cube(count, seed, start=start)
    c2c, c3c = casimir_arrays(xic)
    f1c, f2c, _f3c, _f4c = local_invariant_arrays(xic)
    g2 = gradgeom.numeric_grad(xic, "global")
    closed2 = gradgeom.grad_su3_closed(c2c, c3c)
    scale2 = np.maximum(1.0, np.abs(g2)).max(axis=0)
    out["grad_su3"] = float(np.max(np.abs(closed2 - g2) / scale2))
    det2 = np.linalg.det(g2)
    out["grad_su3_det"] = float(
        np.max(np.abs(det2 - 36.0 * (c2c**3 - c3c**2)) / np.maximum(1.0, np.abs(c2c) ** 3))
    )
    g4 = gradgeom.numeric_grad(xic, "local")
    closed4 = gradgeom.grad_local_closed(f1c, f2c, c2c, c3c)
    scale4 = np.maximum(1.0, np.abs(g4)).max(axis=0)
    out["grad_local"] = float(np.max(np.abs(closed4 - g4) / scale4))
    det4 = np.linalg.det(g4)
    detc = gradgeom.DET_FACTOR1.evaluate(f1c, f2c, c2c, c3c) * gradgeom.DET_FACTOR2.evaluate(
        f1c, f2c, c2c, c3c
    )
    dscale = np.maximum(1.0, np.abs(g4).max(axis=(1, 2)) ** 4)
    out["grad_local_det"] = float(np.max(np.abs(det4 - detc) / dscale))

    # casimir relations
    f1x, f2x, f3x, f4x = local_invariant_arrays(xic)
    out["relation_c2"] = float(np.max(np.abs(c2c - (f1x**2 + f2x + f3x))))
    fitted = fit_c3_relation()
    out["relation_c3_fitted"] = float(np.max(np.abs(c3c - fitted.evaluate(f1x, f2x, f3x, f4x))))
    p = PRINTED_C3_COEFFS
    printed = p["a"] * f1x**3 + p["b"] * f1x * f2x + p["c"] * f1x * f3x + p["e"] * f4x
    out["relation_c3_printed"] = float(np.max(np.abs(c3c - printed)))
    return out


def _reduce(parts: list[dict]) -> dict:
    out: dict[str, float] = {}
    for part in parts:
        for k, v in part.items():
            if k == "f1_min":
                out[k] = min(out.get(k, np.inf), v)
            elif k.startswith("physicality"):
                out[k] = out.get(k, 0.0) + v
            else:
                out[k] = max(out.get(k, -np.inf), v)
    return out


def _structure_checks(inject_fault: str | None) -> list[CheckResult]:
    lam = su3.gell_mann_basis()
    ortho = np.einsum("aij,bji->ab", lam, lam)
    dev_o = float(np.max(np.abs(ortho - 2.0 * np.eye(8))))
    d, f = (t.copy() for t in su3.structure_constants())
    if inject_fault == "flip-d":
        # flip the whole symmetric orbit of d_118, as a mis-derived constant would
        for idx in ((0, 0, 7), (0, 7, 0), (7, 0, 0)):
            d[idx] = -d[idx]
    recon = (2.0 / 3.0) * np.einsum("ab,ij->abij", np.eye(8), np.eye(3)) + np.einsum(
        "abc,cij->abij", d + 1j * f, lam
    )
    prod = np.einsum("aij,bjk->abik", lam, lam)
    dev_p = float(np.max(np.abs(recon - prod)))
    dev_sym = max(
        float(np.max(np.abs(d - np.einsum("abc->bac", d)))),
        float(np.max(np.abs(d - np.einsum("abc->acb", d)))),
        float(np.max(np.abs(f + np.einsum("abc->bac", f)))),
        float(np.max(np.abs(f + np.einsum("abc->acb", f)))),
    )
    dev_vals = max(abs(f[0, 1, 2] - 1.0), abs(d[7, 7, 7] + 1.0 / su3.SQRT3))
    return [
        CheckResult("gellmann-orthogonality", dev_o <= 1e-13, dev_o, 1e-13),
        CheckResult("product-identity", dev_p <= 1e-12, dev_p, 1e-12),
        CheckResult("structure-symmetry", dev_sym <= 1e-14, dev_sym, 1e-14),
        CheckResult(
            "structure-values", dev_vals <= 1e-14, dev_vals, 1e-14, "f123 = 1, d888 = -1/sqrt3"
        ),
    ]


def _invariance_checks(seed: int) -> list[CheckResult]:
    n_states, n_group = 100, 1000
    cfg = sampling.SamplerConfig(seed=seed + 1, count=n_states)
    rho = sampling.random_density(cfg)
    xi0 = su3.density_to_bloch(rho, check=False)
    f0 = np.stack(local_invariant_arrays(xi0), axis=-1)
    c0 = np.stack(casimir_arrays(xi0), axis=-1)

    drift_local = 0.0
    drift_global = 0.0
    for start in range(0, n_group, 200):
        g_loc = sampling.local_u2(seed + 2, count=200, start=start)
        g_u3 = sampling.haar_u3(seed + 3, count=200, start=start)
        # conjugate every state by every group element in this block
        r1 = np.einsum("gij,njk,glk->gnil", g_loc, rho, g_loc.conj())
        xi1 = su3.density_to_bloch(r1, check=False)
        f1v = np.stack(local_invariant_arrays(xi1), axis=-1)
        drift_local = max(drift_local, float(np.max(np.abs(f1v - f0[None, :, :]))))
        r2 = np.einsum("gij,njk,glk->gnil", g_u3, rho, g_u3.conj())
        xi2 = su3.density_to_bloch(r2, check=False)
        c1v = np.stack(casimir_arrays(xi2), axis=-1)
        drift_global = max(drift_global, float(np.max(np.abs(c1v - c0[None, :, :]))))
    return [
        CheckResult(
            "local-invariance",
            drift_local <= 1e-10,
            drift_local,
            1e-10,
            f"f1..f4 drift over {n_states}x{n_group} local conjugations",
        ),
        CheckResult(
            "global-invariance",
            drift_global <= 1e-10,
            drift_global,
            1e-10,
            f"c2, c3 drift over {n_states}x{n_group} Haar U(3) conjugations",
        ),
    ]


def _molien_check() -> CheckResult:
    t_u2 = molien.molien_table("su2xu1", "bloch8", 4, "all")
    t_su3 = molien.molien_table("su3", "bloch8", 6, "all")
    t_su3_9 = molien.molien_table("su3", "matrix9", 6, "series")
    q9 = molien.quadrature_coefficients(molien.su3_rep(9), 6)
    expected_u2 = [1, 1, 3, 4, 7]
    expected_su3 = [1, 0, 1, 1, 1, 1, 2]
    expected_su3_9 = [1, 1, 2, 3, 4, 5, 7]
    ok = (
        all(m["counts"] == expected_u2 for m in t_u2["methods"].values())
        and all(m["counts"] == expected_su3 for m in t_su3["methods"].values())
        and t_su3_9["methods"]["series"]["counts"] == expected_su3_9
        and list(q9.counts) == expected_su3_9
    )
    residual = max(
        t_u2["methods"]["quadrature"]["max_residual"],
        t_su3["methods"]["quadrature"]["max_residual"],
        q9.max_residual,
    )
    return CheckResult(
        "molien-agreement",
        ok and residual <= 1e-8,
        residual,
        1e-8,
        "series = quadrature = kernel on bloch8 for both groups; su3 matrix9 = printed series",
    )


def _sigma_delta_check(seed: int) -> CheckResult:
    rng = np.random.Generator(np.random.Philox(key=[np.uint64(seed), np.uint64(0x51)]))
    f1 = rng.uniform(-1.0, 0.5, 4000)
    f2 = rng.uniform(0.0, 1.0, 4000)
    c2 = rng.uniform(0.0, 1.0, 4000)
    lo, hi = gradgeom.sigma_surfaces(f1, f2, c2)
    worst = 0.0
    for c3 in (lo, hi):
        g = gradgeom.grad_local_closed(f1, f2, c2, c3)
        scale = np.maximum(1.0, np.abs(g).max(axis=(1, 2)) ** 4)
        det = gradgeom.DET_FACTOR1.evaluate(f1, f2, c2, c3) * gradgeom.DET_FACTOR2.evaluate(
            f1, f2, c2, c3
        )
        worst = max(worst, float(np.max(np.abs(det) / scale)))
    # double-root collapse on Delta1 and Delta2
    lo1, hi1 = gradgeom.sigma_surfaces(f1, np.zeros_like(f1), c2)
    d2_f2 = np.clip(c2 - f1**2, 0.0, None)
    lo2, hi2 = gradgeom.sigma_surfaces(f1, d2_f2, f1**2 + d2_f2)
    collapse = max(float(np.max(hi1 - lo1)), float(np.max(hi2 - lo2)))
    d1_dev = float(np.max(np.abs(0.5 * (lo1 + hi1) - gradgeom.delta1_c3(f1, c2))))
    d2_dev = float(np.max(np.abs(0.5 * (lo2 + hi2) - gradgeom.delta2_c3(f1, f1**2 + d2_f2))))
    worst_all = max(worst, collapse, d1_dev, d2_dev)
    return CheckResult(
        "sigma-delta-geometry",
        worst <= 1e-9 and collapse <= 1e-10 and max(d1_dev, d2_dev) <= 1e-10,
        worst_all,
        1e-9,
        "root back-substitution and double-root loci",
    )


def run_verification(
    samples: int = 100_000,
    seed: int = DEFAULT_SEED,
    jobs: int = 1,
    tol: float = 1e-10,
    inject_fault: str | None = None,
    command: str = "verify",
) -> RunReport:
    """Run the whole property suite and assemble a RunReport."""
    if samples < 1:
        raise ValueError("samples must be >= 1")
    t0 = time.perf_counter()
    report = RunReport(command=command, seed=seed, samples=samples, jobs=jobs)
    report.checks.extend(_structure_checks(inject_fault))

    tasks = [(seed, start, count, 1e-9) for start, count in _chunks(samples)]
    if jobs > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            parts = list(pool.map(_sample_chunk, tasks))
    else:
        parts = [_sample_chunk(t) for t in tasks]
    agg = _reduce(parts)

    checks = report.checks
    checks.append(CheckResult("bloch-roundtrip", agg["roundtrip"] <= 1e-12, agg["roundtrip"], 1e-12))
    checks.append(
        CheckResult(
            "trace-identities", agg["trace_identities"] <= 1e-12, agg["trace_identities"], 1e-12
        )
    )
    checks.append(
        CheckResult(
            "physicality-equivalence",
            agg["physicality_disagreements"] == 0,
            agg["physicality_disagreements"],
            0.0,
            "predicate vs eigenvalue verdicts, mixed physical/unphysical draws",
        )
    )
    worst_member = min(agg["membership_global"], agg["membership_psd"], agg["membership_f2f3"])
    checks.append(
        CheckResult(
            "membership-inclusion",
            agg["membership_global"] >= -1e-10
            and agg["membership_psd"] >= -1e-10
            and agg["membership_f2f3"] >= -1e-10,
            worst_member,
            -1e-10,
            f"worst slack over {samples} Hilbert-Schmidt states",
        )
    )
    checks.append(
        CheckResult(
            "f1-range",
            -1.0 - 1e-12 <= agg["f1_min"] and agg["f1_max"] <= 0.5 + 1e-12,
            agg["f1_min"],
            1e-12,
            f"observed f1 in [{agg['f1_min']:.6f}, {agg['f1_max']:.6f}]",
        )
    )
    checks.append(CheckResult("grad-su3-oracle", agg["grad_su3"] <= tol, agg["grad_su3"], tol))
    checks.append(
        CheckResult("grad-su3-det", agg["grad_su3_det"] <= tol, agg["grad_su3_det"], tol)
    )
    checks.append(CheckResult("grad-local-oracle", agg["grad_local"] <= tol, agg["grad_local"], tol))
    checks.append(
        CheckResult("grad-local-det", agg["grad_local_det"] <= 1e-8, agg["grad_local_det"], 1e-8)
    )
    checks.append(CheckResult("relation-c2", agg["relation_c2"] <= 1e-12, agg["relation_c2"], 1e-12))
    checks.append(
        CheckResult(
            "relation-c3-fitted",
            agg["relation_c3_fitted"] <= tol,
            agg["relation_c3_fitted"],
            tol,
            f"printed-relation residual {agg['relation_c3_printed']:.3e} reported, not gated",
        )
    )
    checks.extend(_invariance_checks(seed))
    checks.append(_molien_check())
    checks.append(_sigma_delta_check(seed))

    report.elapsed_seconds = time.perf_counter() - t0
    return report

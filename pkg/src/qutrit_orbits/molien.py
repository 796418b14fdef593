"""Molien series: closed-form expansion, torus quadrature, kernel counts.

Three independent routes to the number of linearly independent invariants of
each degree:

  * series   -- integer Taylor expansion of prod_i 1/(1 - q^{d_i});
  * quadrature -- Weyl integration over the maximal torus.  The integrand
    1/det(1 - q pi) expands as sum_k h_k(eigenvalues) q^k with h_k the
    complete homogeneous symmetric function, computed via Newton's
    recursion k h_k = sum_j p_j h_{k-j} from power sums of the torus
    weights.  Uniform circle grids integrate trigonometric polynomials
    exactly once the node count exceeds the bandwidth, so the only float
    error is roundoff; the pre-rounding residual is reported.
  * kernel   -- exact dimensions from the infinitesimal-invariance solver.

Conventions: the SU(2) Weyl density is 1 - (x^2 + x^{-2})/2 = 1 - cos 2t
(the published form has a minus sign inside, which is not a real density;
the plus-sign form is what integrates characters correctly and is used
throughout).  The SU(3) factor is |Vandermonde|^2 / 3!.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import counting

MAX_QUADRATURE_DEGREE = 12


@dataclass(frozen=True)
class TorusRep:
    """Weights of a representation restricted to the maximal torus.

    For group "su2xu1" weights are (m, n): the monomial x^m y^n in the
    SU(2)-torus coordinate x and the U(1) coordinate y.  For group "su3"
    weights are exponent triples over (x1, x2, x3) with x1 x2 x3 = 1.
    """

    group: str
    weights: tuple
    name: str

    def self_conjugate(self) -> bool:
        inv = [tuple(-c for c in w) for w in self.weights]
        return sorted(inv) == sorted(self.weights)


def su2xu1_rep(dim: int = 8) -> TorusRep:
    """Conjugation action of SU(2)xU(1): (x, x^-1, y) (x) its conjugate.

    dim=9 is the full matrix space; dim=8 removes one zero weight (the
    trace direction), leaving the Bloch representation.
    """
    w9 = [(0, 0), (2, 0), (1, -1), (-2, 0), (0, 0), (-1, -1), (-1, 1), (1, 1), (0, 0)]
    if dim == 9:
        return TorusRep("su2xu1", tuple(w9), "su2xu1-matrix9")
    if dim == 8:
        return TorusRep("su2xu1", tuple(w9[1:]), "su2xu1-bloch8")
    raise ValueError("dim must be 8 or 9")


def su3_rep(dim: int = 8) -> TorusRep:
    """Conjugation action of SU(3) on matrices: weights x_i / x_j."""
    basis = [(1, 0, 0), (0, 1, 0), (0, 0, 1)]
    w9 = [
        tuple(ei - ej for ei, ej in zip(basis[i], basis[j]))
        for i in range(3)
        for j in range(3)
    ]
    if dim == 9:
        return TorusRep("su3", tuple(w9), "su3-matrix9")
    if dim == 8:
        w8 = list(w9)
        w8.remove((0, 0, 0))
        return TorusRep("su3", tuple(w8), "su3-bloch8")
    raise ValueError("dim must be 8 or 9")


@dataclass(frozen=True)
class MolienCoefficients:
    counts: tuple
    method: str
    max_residual: float = 0.0


def expand_closed_form(degrees, max_degree: int) -> MolienCoefficients:
    """Taylor coefficients of prod_i 1/(1 - q^{d_i}) by integer convolution."""
    if max_degree < 0:
        raise ValueError("max_degree must be >= 0")
    c = [0] * (max_degree + 1)
    c[0] = 1
    for d in degrees:
        if d <= 0:
            raise ValueError("denominator degrees must be positive")
        for k in range(d, max_degree + 1):
            c[k] += c[k - d]
    return MolienCoefficients(tuple(c), method="series")


def _weight_phases(rep: TorusRep, grids) -> list[np.ndarray]:
    phases = []
    if rep.group == "su2xu1":
        tx, ty = grids
        for (m, n) in rep.weights:
            phases.append(m * tx + n * ty)
    else:
        t1, t2 = grids
        t3 = -(t1 + t2)
        for (a, b, c) in rep.weights:
            phases.append(a * t1 + b * t2 + c * t3)
    return phases


def _weyl_factor(group: str, grids) -> np.ndarray:
    if group == "su2xu1":
        return 1.0 - np.cos(2.0 * grids[0])
    t1, t2 = grids
    x = [np.exp(1j * t1), np.exp(1j * t2), np.exp(-1j * (t1 + t2))]
    delta = (x[0] - x[1]) * (x[0] - x[2]) * (x[1] - x[2])
    return (np.abs(delta) ** 2) / 6.0


def quadrature_coefficients(
    rep: TorusRep, max_degree: int, nodes: int | None = None
) -> MolienCoefficients:
    """Molien coefficients by trapezoid quadrature on the torus.

    The node count defaults to 2*K*wmax + 9 per circle, beyond the bandwidth
    of h_K times the Weyl factor, so the rule is exact up to roundoff.  A
    pre-rounding residual above 0.1 raises (wrong Weyl factor or too few
    nodes); the max residual is recorded in the result.
    """
    if max_degree > MAX_QUADRATURE_DEGREE:
        raise ValueError(f"quadrature supported up to degree {MAX_QUADRATURE_DEGREE}")
    wmax = max((max(abs(c) for c in w) for w in rep.weights), default=1)
    n = nodes or (2 * max_degree * max(wmax, 2) + 9)
    t = np.arange(n) * (2.0 * np.pi / n)
    grids = np.meshgrid(t, t, indexing="ij")
    weyl = _weyl_factor(rep.group, grids)
    phases = _weight_phases(rep, grids)

    h = [np.ones_like(weyl, dtype=complex)]
    p = [None]
    for j in range(1, max_degree + 1):
        p.append(sum(np.exp(1j * j * ph) for ph in phases))
    for k in range(1, max_degree + 1):
        h.append(sum(p[j] * h[k - j] for j in range(1, k + 1)) / k)

    counts = []
    residual = 0.0
    for k in range(max_degree + 1):
        v = np.mean(h[k] * weyl)
        c = round(v.real)
        r = abs(v - c)
        residual = max(residual, r)
        counts.append(int(c))
    if residual > 0.1:
        raise ArithmeticError(
            f"quadrature residual {residual:.3g} too large: "
            "insufficient nodes or wrong Weyl factor"
        )
    return MolienCoefficients(tuple(counts), method="quadrature", max_residual=float(residual))


def kernel_coefficients(group: str, max_degree: int) -> MolienCoefficients:
    """Exact invariant dimensions from the infinitesimal-invariance kernels."""
    return MolienCoefficients(
        tuple(counting.kernel_counts(group, max_degree)), method="kernel"
    )


# closed-form denominators: degrees of the free generators
SERIES_DEGREES = {
    ("su3", "matrix9"): (1, 2, 3),  # published SU(3) Molien function
    ("su3", "bloch8"): (2, 3),
    ("su2xu1", "matrix9"): (1, 1, 2, 2, 3),  # trace plus the four local invariants
    ("su2xu1", "bloch8"): (1, 2, 2, 3),  # equals the published "d=9" series
}


def molien_table(group: str, space: str, max_degree: int, method: str = "all") -> dict:
    """Coefficients per method for one (group, space); JSON-friendly."""
    if group not in ("su3", "su2xu1"):
        raise ValueError("group must be su3 or su2xu1")
    if space not in ("bloch8", "matrix9"):
        raise ValueError("space must be bloch8 or matrix9")
    rows = {}
    wanted = ("series", "quadrature", "kernel") if method == "all" else (method,)
    for m in wanted:
        if m == "series":
            rows[m] = expand_closed_form(SERIES_DEGREES[(group, space)], max_degree)
        elif m == "quadrature":
            rows[m] = quadrature_coefficients(
                su3_rep(9 if space == "matrix9" else 8)
                if group == "su3"
                else su2xu1_rep(9 if space == "matrix9" else 8),
                max_degree,
            )
        elif m == "kernel":
            if space != "bloch8":
                raise ValueError("kernel method counts invariants on the 8-variable Bloch space")
            rows[m] = kernel_coefficients("su3" if group == "su3" else "u2", max_degree)
        else:
            raise ValueError(f"unknown method {m!r}")
    return {
        "schema_version": 1,
        "group": group,
        "space": space,
        "max_degree": max_degree,
        "methods": {
            m: {"counts": list(r.counts), "max_residual": r.max_residual}
            for m, r in rows.items()
        },
        "agree": len({r.counts for r in rows.values()}) <= 1,
    }


def residue_consistency_report(max_degree: int = 4) -> dict:
    """Compare the published SU(2)xU(1) Molien function against both spaces.

    The published rational function (denominator degrees 1, 2, 2, 3) is
    labeled d=9 but its coefficients count the 8-variable (traceless Bloch)
    invariants; the true 9-dimensional space carries one extra degree-1
    invariant (the trace), giving denominator degrees (1, 1, 2, 2, 3).  Both
    counts are produced and tabulated; nothing is silently resolved.
    """
    printed = expand_closed_form((1, 2, 2, 3), max_degree)
    quad9 = quadrature_coefficients(su2xu1_rep(9), max_degree)
    quad8 = quadrature_coefficients(su2xu1_rep(8), max_degree)
    kern8 = kernel_coefficients("u2", max_degree)
    series9 = expand_closed_form((1, 1, 2, 2, 3), max_degree)
    su3_quad9 = quadrature_coefficients(su3_rep(9), max_degree)
    su3_printed = expand_closed_form((1, 2, 3), max_degree)
    return {
        "schema_version": 1,
        "max_degree": max_degree,
        "su2xu1": {
            "printed_series_d9_label": list(printed.counts),
            "quadrature_matrix9": list(quad9.counts),
            "quadrature_bloch8": list(quad8.counts),
            "kernel_bloch8": list(kern8.counts),
            "series_matrix9_with_trace": list(series9.counts),
            "printed_matches_bloch8": printed.counts == quad8.counts == kern8.counts,
            "printed_matches_matrix9": printed.counts == quad9.counts,
            "matrix9_matches_trace_series": quad9.counts == series9.counts,
        },
        "su3": {
            "printed_series": list(su3_printed.counts),
            "quadrature_matrix9": list(su3_quad9.counts),
            "printed_matches_matrix9": su3_printed.counts == su3_quad9.counts,
        },
    }

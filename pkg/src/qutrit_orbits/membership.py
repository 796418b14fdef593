"""Membership predicates for the state space and both orbit spaces; slices.

Global orbit space (the curvilinear triangle ABC in the (c2, c3) plane):

    0 <= c2 <= 1,   0 <= 3 c2 - 2 c3 <= 1,   c2^3 - c3^2 >= 0.

Local orbit space (4-dimensional, coordinates (f1, f2, c2, c3)): the closed
Grad matrix must be positive semidefinite; both integrity bases are free, so
there is no syzygy test and the ambient set is all of R^4.  Physicality of
the underlying state adds the two Casimir inequalities above, and f2 >= 0,
f3 = c2 - f1^2 - f2 >= 0 are carried as explicit named slacks (they are
implied by PSD minors, but reporting them keeps failures diagnosable).

Every verdict reports signed slacks, positive = satisfied, so callers can
see which constraints bind on the boundary.
"""

from __future__ import annotations

import csv
import json
from dataclasses import dataclass, field

import numpy as np

from . import su3
from .gradgeom import grad_local_closed, sigma_surfaces
from .invariants import LocalInvariantPoint, casimir_arrays

VERTEX_A = (0.0, 0.0)
VERTEX_B = (0.25, -0.125)
VERTEX_C = (1.0, 1.0)


@dataclass(frozen=True)
class MembershipVerdict:
    inside: bool
    slacks: dict[str, float]
    binding: tuple[str, ...]

    @classmethod
    def from_slacks(cls, slacks: dict[str, float], tol: float) -> "MembershipVerdict":
        inside = all(v >= -tol for v in slacks.values())
        binding = tuple(k for k, v in slacks.items() if abs(v) <= tol)
        return cls(inside=inside, slacks=slacks, binding=binding)

    def to_json(self) -> dict:
        return {"inside": self.inside, "slacks": self.slacks, "binding": list(self.binding)}


def is_physical_bloch(xi, tol: float = 1e-9) -> MembershipVerdict:
    """Physicality of a Bloch vector via the two polynomial constraints.

    Slacks: pos1 = 1 - xi.xi, and the two sides of
    0 <= xi.xi - (2/sqrt3) d xi xi xi <= 1/3.  Equivalent to rho >= 0.
    """
    xi = np.asarray(xi, dtype=float).reshape(8)
    c2, c3 = casimir_arrays(xi)
    # (2/sqrt3) d xi xi xi = (2/3) c3 with c3 = sqrt3 d xi xi xi
    q = float(c2 - 2.0 * c3 / 3.0)
    slacks = {
        "pos1": float(1.0 - c2),
        "pos2_lower": q,
        "pos2_upper": float(1.0 / 3.0 - q),
    }
    return MembershipVerdict.from_slacks(slacks, tol)


def in_global_orbit_space(c2: float, c3: float, tol: float = 1e-9) -> MembershipVerdict:
    """Membership of (c2, c3) in the triangle ABC."""
    edge = 3.0 * c2 - 2.0 * c3
    slacks = {
        "c2_lower": float(c2),
        "c2_upper": float(1.0 - c2),
        "edge_lower": float(edge),
        "edge_upper": float(1.0 - edge),
        "disc": float(c2**3 - c3**2),
    }
    return MembershipVerdict.from_slacks(slacks, tol)


def in_local_orbit_space(point, tol: float = 1e-9) -> MembershipVerdict:
    """Membership of (f1, f2, c2, c3) in the local orbit space (physical part).

    The PSD slack is the smallest eigenvalue of the closed-form Grad matrix
    normalized by (1 + trace), so a uniform tolerance applies across scales.
    """
    if not isinstance(point, LocalInvariantPoint):
        point = LocalInvariantPoint(*point)
    g = grad_local_closed(point)
    eigmin = float(np.linalg.eigvalsh(g)[0])
    scale = 1.0 + float(np.trace(g))
    edge = 3.0 * point.c2 - 2.0 * point.c3
    slacks = {
        "grad_psd": eigmin / scale,
        "c2_lower": float(point.c2),
        "c2_upper": float(1.0 - point.c2),
        "edge_lower": float(edge),
        "edge_upper": float(1.0 - edge),
        "f2": float(point.f2),
        "f3": float(point.f3),
    }
    return MembershipVerdict.from_slacks(slacks, tol)


# vectorized core of the local predicate, used by the verifier
def local_membership_slack_arrays(f1, f2, c2, c3) -> dict[str, np.ndarray]:
    g = grad_local_closed(f1, f2, c2, c3)
    eig = np.linalg.eigvalsh(g)[..., 0]
    scale = 1.0 + np.trace(g, axis1=-2, axis2=-1)
    edge = 3.0 * c2 - 2.0 * c3
    return {
        "grad_psd": eig / scale,
        "c2_lower": c2,
        "c2_upper": 1.0 - c2,
        "edge_lower": edge,
        "edge_upper": 1.0 - edge,
        "f2": f2,
        "f3": c2 - f1**2 - f2,
    }


# --------------------------------------------------------------------------
# slice geometry
# --------------------------------------------------------------------------


@dataclass
class SliceMesh:
    """Cross-section of the local orbit space at fixed f1.

    ``cells`` rows are (f2, c2, c3_lo, c3_hi); ``projection`` is the
    polygonal outline of the attainable (c2, c3) region.
    """

    f1: float
    n: int
    cells: list[tuple[float, float, float, float]] = field(default_factory=list)
    projection: list[tuple[float, float]] = field(default_factory=list)
    key_points: dict = field(default_factory=dict)
    dropped_cells: int = 0

    @property
    def empty(self) -> bool:
        return not self.cells

    def projection_area(self) -> float:
        if len(self.projection) < 3:
            return 0.0
        p = np.asarray(self.projection)
        x, y = p[:, 0], p[:, 1]
        return 0.5 * abs(np.dot(x, np.roll(y, -1)) - np.dot(np.roll(x, -1), y))

    def write_csv(self, path) -> None:
        with open(path, "w", newline="") as fh:
            w = csv.writer(fh)
            w.writerow(["f2", "c2", "c3_lo", "c3_hi"])
            w.writerows(self.cells)

    def write_json(self, path) -> None:
        with open(path, "w") as fh:
            json.dump(self.to_json(), fh, indent=1)

    def to_json(self) -> dict:
        return {
            "schema_version": 1,
            "f1": self.f1,
            "n": self.n,
            "cells": [list(c) for c in self.cells],
            "projection": [list(p) for p in self.projection],
            "key_points": {k: list(v) for k, v in self.key_points.items()},
        }


def _cell_interval(f1, f2, c2):
    """[Sigma-, Sigma+] cut to the physical c3 strip; NaNs when empty."""
    lo, hi = sigma_surfaces(f1, f2, c2)
    lo = np.maximum(lo, (3.0 * c2 - 1.0) / 2.0)
    hi = np.minimum(hi, 1.5 * c2)
    return lo, hi


def slice_mesh(f1: float, n: int, tol: float = 1e-9) -> SliceMesh:
    """Grid the attainable (f2, c2) window and collect c3 intervals.

    The window is [0, (1 + f1)^2 / 3] x [f1^2, 1]: c2 >= f1^2 always, and
    no state with this f1 exceeds that f2 (the bound is attained by
    diag((2 + 2 f1)/3, 0, (1 - 2 f1)/3)), so extreme slices keep full grid
    resolution.  Cell centers are tested; cells adjacent to a validity
    change get one bisection pass (2x2 subcells), so boundary accuracy is
    O(window/n).  Every surviving cell is re-checked through the full local
    membership predicate at its c3 midpoint.
    """
    if n < 2:
        raise ValueError("grid size must be at least 2")
    mesh = SliceMesh(f1=float(f1), n=n, key_points=key_points(f1))
    if not -1.0 - tol <= f1 <= 0.5 + tol:
        return mesh  # no physical states at this f1

    f2_width = (1.0 + f1) ** 2 / 3.0
    c2_lo = f1**2
    if f2_width <= 0.0 or c2_lo >= 1.0:
        return mesh  # the slice is a single point; below grid resolution
    hf = f2_width / n
    hc = (1.0 - c2_lo) / n
    f2c = (np.arange(n) + 0.5) * hf
    c2c = c2_lo + (np.arange(n) + 0.5) * hc
    f2g, c2g = np.meshgrid(f2c, c2c, indexing="ij")
    valid = _valid_centers(f1, f2g, c2g, tol)

    # straddle detection: any 4-neighbour differs (boundary of the valid set)
    pad = np.zeros((n + 2, n + 2), dtype=bool)
    pad[1:-1, 1:-1] = valid
    straddle = (
        (pad[1:-1, 1:-1] != pad[:-2, 1:-1])
        | (pad[1:-1, 1:-1] != pad[2:, 1:-1])
        | (pad[1:-1, 1:-1] != pad[1:-1, :-2])
        | (pad[1:-1, 1:-1] != pad[1:-1, 2:])
    )

    cells = []
    dropped = 0

    def emit(f2v, c2v):
        nonlocal dropped
        lo, hi = _cell_interval(f1, f2v, c2v)
        if not np.isfinite(lo) or lo > hi:
            return
        mid = 0.5 * (lo + hi)
        verdict = in_local_orbit_space(LocalInvariantPoint(f1, f2v, c2v, mid), tol=max(tol, 1e-9))
        if not verdict.inside:
            dropped += 1
            return
        cells.append((float(f2v), float(c2v), float(lo), float(hi)))

    for i in range(n):
        for j in range(n):
            if straddle[i, j]:
                for df in (-0.25, 0.25):
                    for dc in (-0.25, 0.25):
                        f2v, c2v = f2g[i, j] + df * hf, c2g[i, j] + dc * hc
                        if f2v < 0 or c2v < c2_lo or c2v > 1:
                            continue
                        if _valid_centers(f1, np.asarray(f2v), np.asarray(c2v), tol):
                            emit(f2v, c2v)
            elif valid[i, j]:
                emit(f2g[i, j], c2g[i, j])

    mesh.cells = cells
    mesh.dropped_cells = dropped
    mesh.projection = _projection_outline(cells, n, c2_lo, hc)
    return mesh


def _valid_centers(f1, f2, c2, tol) -> np.ndarray:
    f3 = c2 - f1**2 - f2
    lo, hi = _cell_interval(f1, np.maximum(f2, 0.0), c2)
    return (f3 >= -tol) & (lo <= hi + tol) & (c2 <= 1.0 + tol)


def _projection_outline(cells, n, c2_lo, hc) -> list[tuple[float, float]]:
    """Per-c2-column envelope of the c3 intervals, as a closed polygon."""
    if not cells:
        return []
    cols: dict[int, list[float]] = {}
    for f2v, c2v, lo, hi in cells:
        j = min(int((c2v - c2_lo) / hc), n - 1)
        cc = c2_lo + (j + 0.5) * hc
        rec = cols.setdefault(j, [cc, np.inf, -np.inf])
        rec[1] = min(rec[1], lo)
        rec[2] = max(rec[2], hi)
    order = sorted(cols)
    lower = [(cols[j][0], cols[j][1]) for j in order]
    upper = [(cols[j][0], cols[j][2]) for j in reversed(order)]
    return lower + upper


def key_points(f1: float) -> dict[str, tuple[float, float]]:
    """Named (c2, c3) points: triangle vertices, plus D and E when defined.

    D = (f1^2, -f1^3) is where the Delta2 projection line meets the
    discriminant curve transversally (the tip of the slice); E is its second
    meeting with the triangle boundary: the tangency (4 f1^2, 8 f1^3) when
    that lies inside the triangle (f1 >= -1/4), otherwise the crossing with
    the BC edge 3 c2 - 2 c3 = 1.
    """
    pts = {"A": VERTEX_A, "B": VERTEX_B, "C": VERTEX_C}
    if not -1.0 <= f1 <= 0.5:
        return pts
    pts["D"] = (f1**2, -(f1**3))
    if f1 >= -0.25:
        pts["E"] = (4.0 * f1**2, 8.0 * f1**3)
    else:
        c2e = (1.0 - 8.0 * f1**3) / (3.0 - 6.0 * f1)
        pts["E"] = (c2e, (3.0 * c2e - 1.0) / 2.0)
    return pts


# --------------------------------------------------------------------------
# analytic triangle and Hausdorff comparison (used by tests and CLI summary)
# --------------------------------------------------------------------------


def triangle_contains(c2, c3, tol: float = 0.0) -> np.ndarray:
    c2 = np.asarray(c2, dtype=float)
    c3 = np.asarray(c3, dtype=float)
    edge = 3.0 * c2 - 2.0 * c3
    return (
        (c2 >= -tol)
        & (c2 <= 1.0 + tol)
        & (edge >= -tol)
        & (edge <= 1.0 + tol)
        & (c2**3 - c3**2 >= -tol * np.maximum(1.0, c2**2))
    )


def triangle_boundary(m: int = 2000) -> np.ndarray:
    """Dense sample of the analytic boundary of ABC, shape (~3m, 2)."""
    t = np.linspace(0.0, 1.0, m)
    upper = np.stack([t, t**1.5], axis=1)  # A -> C
    tb = np.linspace(0.0, 0.25, m)
    lower = np.stack([tb, -(tb**1.5)], axis=1)  # A -> B
    tl = np.linspace(0.25, 1.0, m)
    bc = np.stack([tl, (3.0 * tl - 1.0) / 2.0], axis=1)  # B -> C
    return np.concatenate([upper, lower, bc], axis=0)


def _point_to_segments(points: np.ndarray, poly: np.ndarray) -> np.ndarray:
    """Distance from each point to a closed polyline."""
    a = poly
    b = np.roll(poly, -1, axis=0)
    ab = b - a
    denom = np.maximum((ab**2).sum(axis=1), 1e-300)
    ap = points[:, None, :] - a[None, :, :]
    t = np.clip((ap * ab[None]).sum(axis=2) / denom[None], 0.0, 1.0)
    proj = a[None] + t[..., None] * ab[None]
    d = np.linalg.norm(points[:, None, :] - proj, axis=2)
    return d.min(axis=1)


def _polygon_contains(poly: np.ndarray, points: np.ndarray) -> np.ndarray:
    x, y = points[:, 0], points[:, 1]
    inside = np.zeros(len(points), dtype=bool)
    px, py = poly[:, 0], poly[:, 1]
    qx, qy = np.roll(px, -1), np.roll(py, -1)
    for (x1, y1, x2, y2) in zip(px, py, qx, qy):
        crosses = (y1 > y) != (y2 > y)
        with np.errstate(divide="ignore", invalid="ignore"):
            xint = x1 + (y - y1) * (x2 - x1) / (y2 - y1)
        inside ^= crosses & (x < np.where(crosses, xint, np.inf))
    return inside


def projection_hausdorff_to_triangle(projection, m: int = 2000) -> float:
    """Hausdorff distance between the outline region and the analytic triangle."""
    poly = np.asarray(projection, dtype=float)
    if len(poly) < 3:
        return float("inf")
    tb = triangle_boundary(m)
    # triangle points not covered by the polygon region
    outside_poly = ~_polygon_contains(poly, tb)
    d1 = 0.0
    if outside_poly.any():
        d1 = float(_point_to_segments(tb[outside_poly], poly).max())
    # polygon vertices not covered by the triangle region
    verts = poly
    outside_tri = ~triangle_contains(verts[:, 0], verts[:, 1])
    d2 = 0.0
    if outside_tri.any():
        d2 = float(_point_to_segments(verts[outside_tri], tb).max())
    return max(d1, d2)

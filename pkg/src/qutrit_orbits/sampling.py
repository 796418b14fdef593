"""Deterministic random states and group elements for Monte-Carlo checks.

All streams are counter-based: sample i of a stream family is generated from
a fixed block of Philox output fully determined by (seed, family, i), so any
index range can be produced independently and in parallel with bit-identical
results.  Normals come from Box-Muller on fixed-size uniform blocks (the
ziggurat would consume a data-dependent number of draws and break the fixed
block layout).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import su3

_BLOCK = 32  # doubles reserved per sample, every family

# stream family tags (second word of the Philox key)
_FAMILY_DENSITY = 0x1
_FAMILY_UNITARY_U3 = 0x2
_FAMILY_UNITARY_U2 = 0x3
_FAMILY_CUBE = 0x4

HILBERT_SCHMIDT = "hilbert-schmidt"
PURE_HAAR = "pure"
RANK_DEFICIENT = "rank-deficient"


@dataclass(frozen=True)
class SamplerConfig:
    """Seeded, replayable description of a density-matrix ensemble."""

    seed: int
    count: int
    ensemble: str = HILBERT_SCHMIDT
    rank: int = 2  # rank-deficient ensembles only
    equal_weights: bool = False  # rank-deficient: force a flat spectrum

    def __post_init__(self):
        if self.ensemble not in (HILBERT_SCHMIDT, PURE_HAAR, RANK_DEFICIENT):
            raise ValueError(f"unknown ensemble {self.ensemble!r}")
        if self.count < 1:
            raise ValueError("count must be positive")
        if self.ensemble == RANK_DEFICIENT and not 1 <= self.rank <= 3:
            raise ValueError("rank must be 1, 2 or 3")


def _uniform_blocks(seed: int, family: int, start: int, count: int) -> np.ndarray:
    """(count, _BLOCK) doubles; row i holds the block of sample start+i.

    Philox.advance counts 128-bit counter steps and each step yields four
    64-bit outputs, i.e. four doubles, so the block size must divide by 4.
    """
    bg = np.random.Philox(key=[np.uint64(seed), np.uint64(family)])
    bg = bg.advance(start * (_BLOCK // 4))
    return np.random.Generator(bg).random((count, _BLOCK))


def _box_muller(u: np.ndarray) -> np.ndarray:
    """Standard normals from an even number of uniforms (last axis)."""
    n = u.shape[-1] // 2
    u1 = 1.0 - u[..., :n]  # in (0, 1]
    u2 = u[..., n : 2 * n]
    r = np.sqrt(-2.0 * np.log(u1))
    return np.concatenate([r * np.cos(2.0 * np.pi * u2), r * np.sin(2.0 * np.pi * u2)], axis=-1)


def _ginibre(seed: int, family: int, start: int, count: int) -> np.ndarray:
    """(count, 3, 3) complex standard-normal matrices."""
    u = _uniform_blocks(seed, family, start, count)
    z = _box_muller(u[:, :36])  # 18 normals used, 18 spare
    g = z[:, :9] + 1j * z[:, 9:18]
    return g.reshape(count, 3, 3)


def random_density(config: SamplerConfig, start: int = 0, count: int | None = None) -> np.ndarray:
    """Density matrices for samples [start, start+count) of the stream.

    Hilbert-Schmidt: rho = G G^dag / tr(G G^dag) with complex-normal G.
    Pure: rho = |v><v| with Haar-random unit |v>.
    Rank-deficient: Hilbert-Schmidt spectrum truncated to the top ``rank``
    eigenvalues (or set flat with ``equal_weights``) and renormalized.
    """
    if count is None:
        count = config.count
    g = _ginibre(config.seed, _FAMILY_DENSITY, start, count)
    if config.ensemble == PURE_HAAR:
        v = g[:, :, 0]
        v = v / np.linalg.norm(v, axis=1, keepdims=True)
        return np.einsum("ni,nj->nij", v, v.conj())
    rho = g @ g.conj().transpose(0, 2, 1)
    rho /= np.trace(rho, axis1=1, axis2=2).real[:, None, None]
    if config.ensemble == HILBERT_SCHMIDT:
        return rho
    w, v = np.linalg.eigh(rho)
    w[:, : 3 - config.rank] = 0.0
    if config.equal_weights:
        w[:, 3 - config.rank :] = 1.0 / config.rank
    else:
        w /= w.sum(axis=1, keepdims=True)
    return np.einsum("nik,nk,njk->nij", v, w, v.conj())


def random_bloch(config: SamplerConfig, start: int = 0, count: int | None = None) -> np.ndarray:
    """Bloch vectors of ``random_density`` samples, shape (count, 8)."""
    return su3.density_to_bloch(random_density(config, start, count), check=False)


def uniform_bloch_cube(count: int, seed: int, start: int = 0) -> np.ndarray:
    """Uniform xi in [-1, 1]^8 (not restricted to physical states)."""
    u = _uniform_blocks(seed, _FAMILY_CUBE, start, count)
    return 2.0 * u[:, :8] - 1.0


def haar_u3(seed: int, count: int = 1, start: int = 0) -> np.ndarray:
    """Haar-distributed U(3) elements via phase-fixed QR of Ginibre matrices."""
    g = _ginibre(seed, _FAMILY_UNITARY_U3, start, count)
    q, r = np.linalg.qr(g)
    phase = np.diagonal(r, axis1=1, axis2=2).copy()
    phase /= np.abs(phase)
    q = q * phase[:, None, :]
    return q


def local_u2(seed: int, count: int = 1, start: int = 0) -> np.ndarray:
    """Haar samples of the local subgroup, in the Euler-angle form

        g = exp(i lambda1 a) exp(i lambda2 b) exp(i lambda3 c) exp(i t lambda8).

    a, c are uniform on [0, 2pi); t is uniform on the lambda8 period
    [0, 2 pi sqrt(3)); b carries the Haar density |cos 2b| on [-pi/4, pi/4]
    (inverse transform: b = arcsin(2u - 1)/2).  Haar correctness of the
    SU(2) block is spot-checked against moment identities in the test suite.
    """
    u = _uniform_blocks(seed, _FAMILY_UNITARY_U2, start, count)
    alpha = 2.0 * np.pi * u[:, 0]
    beta = np.arcsin(2.0 * u[:, 1] - 1.0) / 2.0
    gamma = 2.0 * np.pi * u[:, 2]
    theta = 2.0 * np.pi * su3.SQRT3 * u[:, 3]

    def block_exp(lam_idx: int, angle: np.ndarray) -> np.ndarray:
        # exp(i lam t) for lam with lam^2 = diag(1, 1, 0): block rotation
        lam = su3.gell_mann(lam_idx)
        out = np.zeros((angle.size, 3, 3), dtype=complex)
        out[:] = np.eye(3)
        c, s = np.cos(angle), np.sin(angle)
        out[:, :2, :2] = (
            np.eye(2)[None] * c[:, None, None] + 1j * s[:, None, None] * lam[None, :2, :2]
        )
        return out

    g = block_exp(1, alpha) @ block_exp(2, beta) @ block_exp(3, gamma)
    phase = np.exp(1j * theta / su3.SQRT3)
    u1 = np.zeros((count, 3, 3), dtype=complex)
    u1[:, 0, 0] = phase
    u1[:, 1, 1] = phase
    u1[:, 2, 2] = phase**-2
    return g @ u1


def random_unitary(group: str, seed: int, count: int = 1, start: int = 0) -> np.ndarray:
    """Unitaries from "u3" (Haar) or "local-u2" (the embedded subgroup)."""
    if group == "u3":
        return haar_u3(seed, count, start)
    if group == "local-u2":
        return local_u2(seed, count, start)
    raise ValueError(f"unknown group {group!r}")


def conjugate(rho: np.ndarray, g: np.ndarray) -> np.ndarray:
    """g rho g^dagger, broadcasting over stacked inputs."""
    return g @ rho @ np.conj(np.swapaxes(g, -1, -2))

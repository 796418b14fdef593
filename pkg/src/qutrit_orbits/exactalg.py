"""Exact structure constants and exact invariant polynomials.

Every d_abc and f_abc of su(3) lies in Q + Q*sqrt(3); this module computes
them once, symbolically, from the Gell-Mann matrices (sympy quarter-traces)
and hands them out as pairs of Fractions (r0, r1) meaning r0 + r1*sqrt(3).

For exact polynomial work we use *scaled* Bloch coordinates

    (xi_1, ..., xi_7, eta_8),    eta_8 = xi_8 / sqrt(3),

in which everything needed downstream is a rational polynomial:

    f1 = sqrt(3) * F1, F1 := eta8
    f2, f3, f4 rational as printed
    c2 = xi_1^2 + ... + xi_7^2 + 3 eta8^2
    c3 = sqrt(3) * C3R with C3R rational.

The sqrt(3) bookkeeping reduces to a parity: a product of integrity-basis
elements carries one sqrt(3) per f1 or c3 factor, matching the parity of its
polynomial degree, so all linear fits close over Q.
"""

from __future__ import annotations

from fractions import Fraction
from functools import lru_cache

from .polynomials import Polynomial

NVARS = 8  # xi1..xi7, eta8


@lru_cache(maxsize=1)
def exact_structure_constants() -> tuple[dict, dict]:
    """Exact d and f as {(a,b,c): (Fraction r0, Fraction r1)} on canonical
    triples (sorted indices); value = r0 + r1*sqrt(3)."""
    import sympy as sp

    i, s3 = sp.I, sp.sqrt(3)
    lam = [
        sp.Matrix([[0, 1, 0], [1, 0, 0], [0, 0, 0]]),
        sp.Matrix([[0, -i, 0], [i, 0, 0], [0, 0, 0]]),
        sp.Matrix([[1, 0, 0], [0, -1, 0], [0, 0, 0]]),
        sp.Matrix([[0, 0, 1], [0, 0, 0], [1, 0, 0]]),
        sp.Matrix([[0, 0, -i], [0, 0, 0], [i, 0, 0]]),
        sp.Matrix([[0, 0, 0], [0, 0, 1], [0, 1, 0]]),
        sp.Matrix([[0, 0, 0], [0, 0, -i], [0, i, 0]]),
        sp.Matrix([[1, 0, 0], [0, 1, 0], [0, 0, -2]]) / s3,
    ]

    def split(expr):
        expr = sp.expand(expr)
        r1 = expr.coeff(s3)
        r0 = sp.expand(expr - r1 * s3)
        if not (r0.is_Rational and r1.is_Rational):
            raise RuntimeError(f"structure constant not in Q + Q*sqrt(3): {expr}")
        return Fraction(int(r0.p), int(r0.q)), Fraction(int(r1.p), int(r1.q))

    d, f = {}, {}
    for a in range(8):
        for b in range(a, 8):
            ab = lam[a] * lam[b]
            ba = lam[b] * lam[a]
            for c in range(b, 8):
                dv = split(sp.trace((ab + ba) * lam[c]) / 4)
                if dv != (Fraction(0), Fraction(0)):
                    d[(a + 1, b + 1, c + 1)] = dv
                if a < b < c:
                    fv = split(sp.trace((ab - ba) * lam[c]) / (4 * i))
                    if fv != (Fraction(0), Fraction(0)):
                        f[(a + 1, b + 1, c + 1)] = fv
    return d, f


def _perm_sign(triple) -> int:
    t = list(triple)
    s = 1
    for _ in range(2):
        for j in range(2):
            if t[j] > t[j + 1]:
                t[j], t[j + 1] = t[j + 1], t[j]
                s = -s
    return s


def d_exact(a: int, b: int, c: int) -> tuple[Fraction, Fraction]:
    table, _ = exact_structure_constants()
    return table.get(tuple(sorted((a, b, c))), (Fraction(0), Fraction(0)))


def f_exact(a: int, b: int, c: int) -> tuple[Fraction, Fraction]:
    _, table = exact_structure_constants()
    key = tuple(sorted((a, b, c)))
    if key not in table:
        return Fraction(0), Fraction(0)
    r0, r1 = table[key]
    s = _perm_sign((a, b, c))
    return r0 * s, r1 * s


def _sqrt3_times(r0: Fraction, r1: Fraction, power: int) -> tuple[Fraction, Fraction]:
    """(r0 + r1*sqrt3) * sqrt3^power as a new (r0, r1) pair (power >= 0)."""
    for _ in range(power):
        r0, r1 = 3 * r1, r0
    return r0, r1


@lru_cache(maxsize=1)
def scaled_basis_polynomials() -> dict[str, Polynomial]:
    """Rational polynomials in (xi1..xi7, eta8) for the invariants.

    Keys: F1 (= f1/sqrt3), F2, F3, F4, C2, C3R (= c3/sqrt3).
    """
    x = [Polynomial.variable(k, NVARS) for k in range(NVARS)]
    f1 = x[7]
    f2 = x[0] * x[0] + x[1] * x[1] + x[2] * x[2]
    f3 = x[3] * x[3] + x[4] * x[4] + x[5] * x[5] + x[6] * x[6]
    f4 = (
        Fraction(-2) * (x[0] * (x[3] * x[5] + x[4] * x[6]))
        + Fraction(2) * (x[1] * (x[3] * x[6] - x[4] * x[5]))
        + x[2] * (x[5] * x[5] + x[6] * x[6] - x[3] * x[3] - x[4] * x[4])
    )
    c2 = f2 + f3 + Fraction(3) * (x[7] * x[7])

    # c3 = sqrt(3) d_abc xi_a xi_b xi_c.  A canonical triple with value
    # r0 + r1*sqrt3, multiplicity m and k indices equal to 8 contributes
    # m * (r0 + r1 sqrt3) * sqrt3^k to C3R = c3/sqrt3 (the xi8 = sqrt3*eta8
    # substitution supplies sqrt3^k); the result must land in Q.
    c3r = Polynomial.zero(NVARS)
    dtab, _ = exact_structure_constants()
    for (a, b, c), (r0, r1) in dtab.items():
        k = (a == 8) + (b == 8) + (c == 8)
        q0, q1 = _sqrt3_times(r0, r1, k)
        if q1 != 0:
            raise RuntimeError("c3 coefficient not of the form sqrt(3) * rational")
        e = [0] * NVARS
        for idx in (a, b, c):
            e[idx - 1] += 1
        c3r = c3r + Polynomial({tuple(e): q0 * _multiplicity(a, b, c)}, NVARS)

    return {"F1": f1, "F2": f2, "F3": f3, "F4": f4, "C2": c2, "C3R": c3r}


def _multiplicity(a: int, b: int, c: int) -> int:
    if a == b == c:
        return 1
    if a == b or b == c or a == c:
        return 3
    return 6


@lru_cache(maxsize=16)
def scaled_vector_field(a: int) -> tuple[tuple[Fraction, ...], ...]:
    """Exact 8x8 adjoint vector-field matrix in scaled coordinates.

    Row c, column b holds the coefficient of coordinate b in d(coord_c)/dt
    for the flow rho -> exp(i lambda_a t) rho exp(-i lambda_a t); the raw
    entry is -2 f_abc, with row/column 8 rescaled by eta8 = xi8/sqrt3.  For
    a = 8 the whole field is sqrt(3) times a rational matrix and is returned
    divided by sqrt(3); only kernels are computed from it, so the overall
    scale is irrelevant.
    """
    rows = [[Fraction(0)] * NVARS for _ in range(NVARS)]
    for c in range(1, 9):
        for b in range(1, 9):
            r0, r1 = f_exact(a, b, c)
            if r0 == 0 and r1 == 0:
                continue
            p = (1 if b == 8 else 0) - (1 if c == 8 else 0)
            if a == 8:
                p -= 1
            # value = -2 (r0 + r1 sqrt3) sqrt3^p, demanded rational
            if p % 2 == 0:
                if r1 != 0:
                    raise RuntimeError(f"irrational vector-field entry for a={a}")
                rows[c - 1][b - 1] = -2 * r0 * Fraction(3) ** (p // 2)
            else:
                if r0 != 0:
                    raise RuntimeError(f"irrational vector-field entry for a={a}")
                rows[c - 1][b - 1] = -2 * r1 * Fraction(3) ** ((p + 1) // 2)
    return tuple(tuple(r) for r in rows)

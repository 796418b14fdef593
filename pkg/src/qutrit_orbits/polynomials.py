"""Exact multivariate polynomials over Fraction, plus rational linear algebra.

Small by design: dict-of-exponent-tuples polynomials and a sparse Gaussian
elimination over Q.  Used for the polynomial-identity fits (the c3 relation,
the Grad closed forms) and for the infinitesimal-invariance kernels, where
dimensions must come out as exact integers.
"""

from __future__ import annotations

from fractions import Fraction
from itertools import combinations_with_replacement
from typing import Iterable, Mapping


class Polynomial:
    """Multivariate polynomial with Fraction coefficients.

    ``coeffs`` maps exponent tuples (length ``nvars``) to nonzero Fractions.
    Instances are treated as immutable.
    """

    __slots__ = ("coeffs", "nvars")

    def __init__(self, coeffs: Mapping[tuple, Fraction], nvars: int):
        self.coeffs = {e: Fraction(c) for e, c in coeffs.items() if c != 0}
        self.nvars = nvars

    @classmethod
    def zero(cls, nvars: int) -> "Polynomial":
        return cls({}, nvars)

    @classmethod
    def variable(cls, idx: int, nvars: int) -> "Polynomial":
        e = [0] * nvars
        e[idx] = 1
        return cls({tuple(e): Fraction(1)}, nvars)

    @classmethod
    def constant(cls, c, nvars: int) -> "Polynomial":
        return cls({(0,) * nvars: Fraction(c)}, nvars)

    def __add__(self, other: "Polynomial") -> "Polynomial":
        out = dict(self.coeffs)
        for e, c in other.coeffs.items():
            v = out.get(e, Fraction(0)) + c
            if v:
                out[e] = v
            else:
                out.pop(e, None)
        return Polynomial(out, self.nvars)

    def __sub__(self, other: "Polynomial") -> "Polynomial":
        return self + other * Fraction(-1)

    def __mul__(self, other):
        if isinstance(other, Polynomial):
            out: dict = {}
            for e1, c1 in self.coeffs.items():
                for e2, c2 in other.coeffs.items():
                    e = tuple(a + b for a, b in zip(e1, e2))
                    v = out.get(e, Fraction(0)) + c1 * c2
                    if v:
                        out[e] = v
                    else:
                        out.pop(e, None)
            return Polynomial(out, self.nvars)
        return Polynomial({e: c * Fraction(other) for e, c in self.coeffs.items()}, self.nvars)

    __rmul__ = __mul__

    def __pow__(self, n: int) -> "Polynomial":
        out = Polynomial.constant(1, self.nvars)
        for _ in range(n):
            out = out * self
        return out

    def __eq__(self, other) -> bool:
        return isinstance(other, Polynomial) and self.coeffs == other.coeffs

    def is_zero(self) -> bool:
        return not self.coeffs

    def degree(self) -> int:
        return max((sum(e) for e in self.coeffs), default=0)

    def evaluate(self, point: Iterable[float]) -> float:
        pt = list(point)
        total = 0.0
        for e, c in self.coeffs.items():
            term = float(c)
            for x, p in zip(pt, e):
                if p:
                    term *= x**p
            total += term
        return total

    def __repr__(self) -> str:
        if not self.coeffs:
            return "0"
        parts = []
        for e, c in sorted(self.coeffs.items(), reverse=True):
            mono = "*".join(f"x{i + 1}^{p}" if p > 1 else f"x{i + 1}" for i, p in enumerate(e) if p)
            parts.append(f"{c}" + (f"*{mono}" if mono else ""))
        return " + ".join(parts)


def monomial_exponents(nvars: int, degree: int) -> list[tuple]:
    """All exponent tuples of the given total degree, in a fixed order."""
    out = []
    for comb in combinations_with_replacement(range(nvars), degree):
        e = [0] * nvars
        for c in comb:
            e[c] += 1
        out.append(tuple(e))
    return out


def solve_exact(columns: list[dict], target: dict) -> list[Fraction]:
    """Solve sum_j x_j * columns[j] == target exactly over Q.

    Columns and target are sparse vectors (dict row-key -> Fraction).  Raises
    ValueError if the system is inconsistent or underdetermined.
    """
    keys = set(target)
    for col in columns:
        keys.update(col)
    keys = sorted(keys)
    kidx = {k: i for i, k in enumerate(keys)}
    n = len(columns)
    rows = [[Fraction(0)] * (n + 1) for _ in keys]
    for j, col in enumerate(columns):
        for k, v in col.items():
            rows[kidx[k]][j] = v
    for k, v in target.items():
        rows[kidx[k]][n] = v

    piv_of_col: dict[int, list] = {}
    for row in rows:
        r = list(row)
        for j in range(n):
            if r[j] == 0:
                continue
            if j in piv_of_col:
                f = r[j]
                p = piv_of_col[j]
                for jj in range(j, n + 1):
                    r[jj] -= f * p[jj]
            else:
                f = r[j]
                piv_of_col[j] = [v / f for v in r]
                break
        else:
            if r[n] != 0:
                raise ValueError("inconsistent linear system in exact fit")
    if len(piv_of_col) < n:
        raise ValueError("underdetermined linear system in exact fit")
    # back-substitute
    x = [Fraction(0)] * n
    for j in sorted(piv_of_col, reverse=True):
        p = piv_of_col[j]
        v = p[n]
        for jj in range(j + 1, n):
            v -= p[jj] * x[jj]
        x[j] = v
    return x


def kernel_basis(rows: Iterable[dict], ncols: int) -> list[dict]:
    """Basis of the kernel of a sparse rational matrix given by rows.

    Each row is {column index: Fraction}.  Returns kernel vectors as sparse
    dicts.  Plain fraction-arithmetic Gaussian elimination; the matrices we
    meet (lifted vector fields on monomial bases) stay sparse enough for this
    to be fast at the degrees the spec allows.
    """
    pivots: dict[int, dict] = {}
    for row in rows:
        r = dict(row)
        while r:
            c = min(r)
            if c in pivots:
                f = r.pop(c)
                for cc, vv in pivots[c].items():
                    if cc == c:
                        continue
                    nv = r.get(cc, Fraction(0)) - f * vv
                    if nv:
                        r[cc] = nv
                    else:
                        r.pop(cc, None)
            else:
                f = r[c]
                pivots[c] = {cc: vv / f for cc, vv in r.items()}
                break

    # back-substitution pass so each pivot row references free columns only
    piv_cols = sorted(pivots, reverse=True)
    for c in piv_cols:
        row = pivots[c]
        for cc in [k for k in row if k != c and k in pivots]:
            f = row.pop(cc)
            for c3, v3 in pivots[cc].items():
                if c3 == cc:
                    continue
                nv = row.get(c3, Fraction(0)) - f * v3
                if nv:
                    row[c3] = nv
                else:
                    row.pop(c3, None)

    free = [j for j in range(ncols) if j not in pivots]
    basis = []
    for j in free:
        vec = {j: Fraction(1)}
        for c, row in pivots.items():
            v = row.get(j)
            if v:
                vec[c] = -v
        basis.append(vec)
    return basis

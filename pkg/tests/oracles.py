"""Independent reference computations built on sympy, sharing no code with the package."""
from __future__ import annotations

from fractions import Fraction

import sympy
from sympy.polys.domains import GF as SymGF
from sympy.polys.matrices import DomainMatrix


def sym(rows, ncols=None):
    rows = [list(r) for r in rows]
    if not rows:
        return sympy.zeros(0, ncols or 0)
    return sympy.Matrix([[sympy.Rational(Fraction(x).numerator, Fraction(x).denominator)
                          if not hasattr(x, "p") else int(x.v) for x in r] for r in rows])


def rank_q(rows, ncols=None) -> int:
    m = sym(rows, ncols)
    return 0 if 0 in m.shape else m.rank()


def rank_mod(rows, p: int) -> int:
    rows = [[int(getattr(x, "v", x)) % p for x in r] for r in rows]
    if not rows or not rows[0]:
        return 0
    dm = DomainMatrix([[SymGF(p)(x) for x in r] for r in rows], (len(rows), len(rows[0])), SymGF(p))
    return dm.rank()


def homology_dim(d) -> int:
    return d.shape[0] - 2 * (0 if 0 in d.shape else d.rank())


def _span_dim(cols, n):
    if not cols:
        return 0
    return sympy.Matrix.hstack(*cols).rank()


def _nullspace_cols(D: sympy.Matrix, row_idx, col_idx, n):
    """Vectors x supported on col_idx with (D x) vanishing on row_idx, embedded in Q^n."""
    if not col_idx:
        return []
    if not row_idx:
        basis = [sympy.eye(len(col_idx))[:, i] for i in range(len(col_idx))]
    else:
        basis = D.extract(row_idx, col_idx).nullspace()
    out = []
    for v in basis:
        w = sympy.zeros(n, 1)
        for a, i in enumerate(col_idx):
            w[i] = v[a]
        out.append(w)
    return out


def classical_pages(d_rows, levels, s1, s2, last):
    """E_r^p = Z_r^p / (Z_{r-1}^{p+1} + d Z_{r-1}^{p-r+1}) with Z_r^p = F_p cap d^{-1} F_{p+r}.

    F_p is spanned by the basis vectors of level >= p, and d preserves levels.
    Returns {r: {p: dim}} for r = 1..last.
    """
    n = len(levels)
    D = sym(d_rows, n) if n else sympy.zeros(0, 0)

    def Z(r, p):
        cols = [i for i in range(n) if levels[i] >= p]
        rows = [i for i in range(n) if levels[i] < p + r]
        return _nullspace_cols(D, rows, cols, n)

    out = {}
    for r in range(1, last + 1):
        out[r] = {}
        for p in range(s1, s2 + 1):
            z = Z(r, p)
            den = Z(r - 1, p + 1) + [D * v for v in Z(r - 1, p - r + 1)]
            out[r][p] = _span_dim(z, n) - _span_dim(den, n) if z else 0
    return out


def bent_dim(dp_rows, dm_rows, grading, s, dual=False, q=1):
    """Dense oracle: keep class indices, then select entries from d_plus and d_minus by offset."""
    idx = [i for i, z in enumerate(grading) if (z - s) % q == 0]
    k = {i: (grading[i] - s) // q for i in idx}
    m = sympy.zeros(len(idx), len(idx))
    for a, i in enumerate(idx):
        for b, j in enumerate(idx):
            v = 0
            if dual:
                if k[i] <= 0:
                    v += Fraction(dp_rows[i][j])
                if k[i] >= 0:
                    v += Fraction(dm_rows[i][j])
            else:
                if k[j] >= 0:
                    v += Fraction(dp_rows[i][j])
                if k[j] <= 0:
                    v += Fraction(dm_rows[i][j])
            m[a, b] = sympy.Rational(v.numerator, v.denominator)
    return homology_dim(m) if idx else 0

"""Bounded unrolled exact couples and their spectral sequences.

A couple is bounded by [s1, s2]: E(s) vanishes outside that interval, so the
maps i: A(s+1) -> A(s) are isomorphisms for s < s1 and s > s2.  We store A(s)
for s in [s1, s2 + 1] only; A(s1 - 1) and beyond are canonically A(s1) and
longer composites of i are clamped to the stored range.

Spaces here are plain coordinate spaces: only dimensions and exactness matter
to the pages, so internal gradings are not tracked.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Mapping, Sequence

from .errors import DimensionMismatch, LiftFailure, NotConvergentCase, NotExact, NotSquareZero, NotSubcomplex
from .linalg import (QQ, ExactMatrix, Field, Quotient, Solver, Subspace, image_basis, kernel_basis,
                     preimage, rank)


def _apply_subspace(m: ExactMatrix, s: Subspace) -> Subspace:
    return Subspace.span([m.apply(b) for b in s.basis], m.rows, m.field)


@dataclass(frozen=True)
class UnrolledCouple:
    s1: int
    s2: int
    a_dims: Mapping[int, int]
    e_dims: Mapping[int, int]
    i: Mapping[int, ExactMatrix]   # i[s]: A(s+1) -> A(s), s in [s1, s2]
    j: Mapping[int, ExactMatrix]   # j[s]: A(s) -> E(s)
    k: Mapping[int, ExactMatrix]   # k[s]: E(s) -> A(s+1)
    field: Field = QQ

    def __post_init__(self):
        if self.s2 < self.s1:
            raise ValueError("empty bounding interval")
        for s in range(self.s1, self.s2 + 2):
            if s not in self.a_dims:
                raise DimensionMismatch(f"missing A({s})")
        for s in self.s_range:
            a0, a1, e = self.a_dims[s], self.a_dims[s + 1], self.e_dims.get(s, 0)
            for name, m, shape in (("i", self.i[s], (a0, a1)), ("j", self.j[s], (e, a0)),
                                   ("k", self.k[s], (a1, e))):
                if m.shape != shape:
                    raise DimensionMismatch(f"{name}({s}) has shape {m.shape}, expected {shape}")
            if not self._triangle_exact(s):
                raise NotExact(f"triangle at s={s} is not exact")

    @property
    def s_range(self) -> range:
        return range(self.s1, self.s2 + 1)

    @property
    def length(self) -> int:
        """Number of filtration steps, s2 - s1 + 1: pages from this index on are E_infinity."""
        return self.s2 - self.s1 + 1

    def _triangle_exact(self, s: int) -> bool:
        i, j, k = self.i[s], self.j[s], self.k[s]
        return (image_basis(i) == kernel_basis(j) and image_basis(j) == kernel_basis(k)
                and image_basis(k) == kernel_basis(i))

    def triangle_report(self) -> dict[int, tuple[bool, bool, bool]]:
        out = {}
        for s in self.s_range:
            i, j, k = self.i[s], self.j[s], self.k[s]
            out[s] = (image_basis(i) == kernel_basis(j), image_basis(j) == kernel_basis(k),
                      image_basis(k) == kernel_basis(i))
        return out

    def e_dim(self, s: int) -> int:
        return self.e_dims.get(s, 0) if self.s1 <= s <= self.s2 else 0

    def _clamp(self, s: int) -> int:
        return min(max(s, self.s1), self.s2 + 1)

    def i_power(self, src: int, dst: int) -> ExactMatrix:
        """The composite A(src) -> A(dst) of i maps, src >= dst, using the isomorphic tails."""
        if src < dst:
            raise ValueError("i only lowers the index")
        return self._i_power(self._clamp(src), self._clamp(dst))

    def _i_power(self, src: int, dst: int) -> ExactMatrix:
        cache = self.__dict__.setdefault("_ipow", {})
        key = (src, dst)
        if key not in cache:
            if src <= dst:
                cache[key] = ExactMatrix.identity(self.a_dims[src], self.field)
            else:
                cache[key] = self.i[dst] @ self._i_power(src, dst + 1)
        return cache[key]

    def ker_power(self, r: int, s: int) -> Subspace:
        """ker^r A^s = ker(i^(r): A^s -> A^{s-r})."""
        return kernel_basis(self.i_power(s, s - r))

    def im_power(self, r: int, s: int) -> Subspace:
        """im^r A^s = im(i^(r): A^{s+r} -> A^s)."""
        return image_basis(self.i_power(s + r, s))


def boundary_subgroup(c: UnrolledCouple, r: int, s: int) -> Subspace:
    """B_r^s = j(ker^{r-1} A^s)."""
    if r < 1:
        raise ValueError("pages start at r = 1")
    if not c.s1 <= s <= c.s2:
        return Subspace.zero(0, c.field)
    return _apply_subspace(c.j[s], c.ker_power(r - 1, s))


def cycle_subgroup(c: UnrolledCouple, r: int, s: int) -> Subspace:
    """Z_r^s = k^{-1}(im^{r-1} A^{s+1})."""
    if r < 1:
        raise ValueError("pages start at r = 1")
    if not c.s1 <= s <= c.s2:
        return Subspace.zero(0, c.field)
    return preimage(c.k[s], c.im_power(r - 1, s + 1))


@dataclass(frozen=True)
class Page:
    r: int
    s1: int
    s2: int
    quotients: Mapping[int, Quotient]          # s -> Z_r^s / B_r^s
    differential: Mapping[int, ExactMatrix]    # s -> d_r^s : E_r^s -> E_r^{s+r}

    def dim(self, s: int) -> int:
        q = self.quotients.get(s)
        return q.dim if q is not None else 0

    @property
    def dims(self) -> dict[int, int]:
        return {s: self.dim(s) for s in range(self.s1, self.s2 + 1)}

    @property
    def total(self) -> int:
        return sum(self.dims.values())

    def d_squared_zero(self) -> bool:
        for s, d in self.differential.items():
            nxt = self.differential.get(s + self.r)
            if nxt is not None and d.rows and not (nxt @ d).is_zero():
                return False
        return True

    def homology_dims(self) -> dict[int, int]:
        """dim ker d_r^s - dim im d_r^{s-r}: what the next page must have."""
        out = {}
        for s in range(self.s1, self.s2 + 1):
            d_out = self.differential[s]
            d_in = self.differential.get(s - self.r)
            out[s] = self.dim(s) - rank(d_out) - (rank(d_in) if d_in is not None else 0)
        return out


def page(c: UnrolledCouple, r: int, check: bool = True) -> Page:
    """The r-th page with its differential j (i^(r-1))^{-1} k."""
    if r < 1:
        raise ValueError("pages start at r = 1")
    quotients = {s: Quotient(cycle_subgroup(c, r, s), boundary_subgroup(c, r, s)) for s in c.s_range}
    diffs = {}
    for s in c.s_range:
        q = quotients[s]
        t = s + r
        if t > c.s2:
            diffs[s] = ExactMatrix.zeros(0, q.dim, c.field)
            continue
        lift = Solver(c.i_power(t, s + 1))
        qt = quotients[t]

        def d_of(v, s=s, t=t, lift=lift, qt=qt):
            a = lift.solve(c.k[s].apply(v))
            if a is None:
                raise LiftFailure(f"k(x) has no preimage under i^({r - 1}) at s={s}")
            x = qt.coords(c.j[t].apply(a))
            if x is None:
                raise LiftFailure(f"image of d_{r} at s={s} is not a cycle of page {r}")
            return x

        cols = [d_of(v) for v in q.basis]
        if check:
            for b in q.boundaries.basis:
                if any(d_of(b)):
                    raise LiftFailure(f"d_{r} is not well defined on the quotient at s={s}")
        diffs[s] = (ExactMatrix.from_columns(cols, qt.dim, c.field) if cols
                    else ExactMatrix.zeros(qt.dim, 0, c.field))
    p = Page(r, c.s1, c.s2, quotients, diffs)
    if check and not p.d_squared_zero():
        raise LiftFailure(f"d_{r} does not square to zero")
    return p


def pages(c: UnrolledCouple, last: int | None = None, check: bool = True) -> list[Page]:
    """Pages 1..last (default: through the first stable page), checking E_{r+1} = H(E_r, d_r)."""
    last = c.length + 1 if last is None else last
    out = [page(c, 1, check)]
    for r in range(2, last + 1):
        nxt = page(c, r, check)
        if check and out[-1].homology_dims() != nxt.dims:
            raise LiftFailure(f"page {r} does not match the homology of page {r - 1}")
        out.append(nxt)
    return out


def e_infinity(c: UnrolledCouple) -> dict[int, int]:
    # d_r lands outside [s1, s2] once r >= s2 - s1 + 1
    return page(c, c.length, check=False).dims


@dataclass(frozen=True)
class Convergence:
    direction: str            # "kernel": G = A^{s2+1};  "image": G = A^{s1}
    total: int
    dims: Mapping[int, int]   # s -> dim F^s G / F^{s+1} G


def converge(c: UnrolledCouple) -> Convergence:
    lo, hi = c.a_dims[c.s1], c.a_dims[c.s2 + 1]
    if hi == 0:
        # G = A^{s1}, F^s G = im(A^s -> A^{s1})
        f = {s: rank(c.i_power(s, c.s1)) for s in range(c.s1, c.s2 + 2)}
        return Convergence("image", lo, {s: f[s] - f[s + 1] for s in c.s_range})
    if lo == 0:
        # G = A^{s2+1}, F^s G = ker(A^{s2+1} -> A^s)
        top = c.s2 + 1
        f = {s: hi - rank(c.i_power(top, s)) for s in range(c.s1, c.s2 + 2)}
        return Convergence("kernel", hi, {s: f[s] - f[s + 1] for s in c.s_range})
    raise NotConvergentCase("neither A(s1) nor A(s2+1) vanishes")


# filtered complexes

@dataclass(frozen=True)
class FilteredComplex:
    """A differential on coordinates with a filtration level per basis vector.

    F^s is spanned by the basis vectors of level >= s; the differential must not
    lower levels.
    """

    d: ExactMatrix
    levels: tuple[int, ...]
    s1: int
    s2: int

    def __post_init__(self):
        n = self.d.rows
        if self.d.cols != n or len(self.levels) != n:
            raise DimensionMismatch("filtered complex needs a square differential and one level per basis vector")
        if any(not self.s1 <= lv <= self.s2 for lv in self.levels):
            raise ValueError("filtration level outside [s1, s2]")
        if not (self.d @ self.d).is_zero():
            raise NotSquareZero("differential does not square to zero")
        for a in range(n):
            for b in range(n):
                if self.d[a, b] and self.levels[a] < self.levels[b]:
                    raise NotSubcomplex(
                        f"differential sends basis vector {b} (level {self.levels[b]}) to level {self.levels[a]}")

    @classmethod
    def build(cls, d: ExactMatrix, levels: Sequence[int], s1: int | None = None,
              s2: int | None = None) -> "FilteredComplex":
        levels = tuple(int(x) for x in levels)
        if s1 is None:
            s1 = min(levels, default=0)
        if s2 is None:
            s2 = max(levels, default=s1)
        return cls(d, levels, s1, s2)

    @property
    def dim(self) -> int:
        return self.d.rows

    @property
    def field(self) -> Field:
        return self.d.field

    def support(self, s: int, exact: bool = False) -> list[int]:
        return [b for b, lv in enumerate(self.levels) if (lv == s if exact else lv >= s)]


def _coordinate_span(idx: Sequence[int], n: int, field: Field) -> Subspace:
    one, zero = field.one, field.zero
    return Subspace.span([[one if j == i else zero for j in range(n)] for i in idx], n, field)


def couple_from_filtered(fc: FilteredComplex) -> UnrolledCouple:
    """A(s) = H(F^s), E(s) = H(F^s / F^{s+1}) with the maps of the long exact sequences."""
    n, field, d = fc.dim, fc.field, fc.d
    a_q: dict[int, Quotient] = {}
    for s in range(fc.s1, fc.s2 + 2):
        span = _coordinate_span(fc.support(s), n, field)
        cycles = span.intersect(kernel_basis(d))
        bounds = _apply_subspace(d, span)
        a_q[s] = Quotient(cycles, bounds)
    e_q: dict[int, Quotient] = {}
    proj: dict[int, ExactMatrix] = {}
    for s in range(fc.s1, fc.s2 + 1):
        idx = fc.support(s, exact=True)
        one, zero = field.one, field.zero
        p = ExactMatrix.from_rows([[one if (i == j and i in idx) else zero for j in range(n)] for i in range(n)],
                                  field, cols=n)
        proj[s] = p
        span = _coordinate_span(idx, n, field)
        pd = p @ d
        cycles = span.intersect(kernel_basis(pd))
        bounds = _apply_subspace(pd, span)
        e_q[s] = Quotient(cycles, bounds)

    def matrix(cols, rows):
        return ExactMatrix.from_columns(cols, rows, field) if cols else ExactMatrix.zeros(rows, 0, field)

    i_m, j_m, k_m = {}, {}, {}
    for s in range(fc.s1, fc.s2 + 1):
        i_m[s] = matrix([a_q[s].coords(v) for v in a_q[s + 1].basis], a_q[s].dim)
        j_m[s] = matrix([e_q[s].coords(proj[s].apply(v)) for v in a_q[s].basis], e_q[s].dim)
        k_m[s] = matrix([a_q[s + 1].coords(d.apply(v)) for v in e_q[s].basis], a_q[s + 1].dim)
    return UnrolledCouple(fc.s1, fc.s2, {s: q.dim for s, q in a_q.items()}, {s: q.dim for s, q in e_q.items()},
                          i_m, j_m, k_m, field)


def total_homology_dim(d: ExactMatrix) -> int:
    return d.rows - 2 * rank(d)

"""Recover a filtered chain complex from a bounded spectral sequence.

Fix the standard inner product on E = (+)_s E^s.  Iterated orthogonal complements
split E into pieces B'_p (complement of B_p in B_{p+1}), Z'_p (complement of
Z_{p+1} in Z_p) and E'_inf (complement of B_{N+1} in Z_{N+1}), N = s2 - s1.
Each page differential d_r then lifts to I d_r P on E, nonzero only from Z'_r
to B'_r, and the sum of the lifts is a differential whose filtration by
F^s = (+)_{p >= s} E^p induces the original pages.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Mapping

from .couple import FilteredComplex, Page, UnrolledCouple, couple_from_filtered, pages
from .errors import LiftFailure
from .linalg import ExactMatrix, Solver, Subspace, image_basis, orthogonal_complement, rank


@dataclass(frozen=True)
class LiftedComplex:
    s1: int
    s2: int
    e_dims: Mapping[int, int]
    levels: tuple[int, ...]
    parts: Mapping[int, ExactMatrix]     # r -> d'_r
    d: ExactMatrix
    splitting: Mapping[str, int]         # dimensions of B'_p, Z'_p, E'_inf

    @property
    def dim(self) -> int:
        return self.d.rows

    def homology_dim(self) -> int:
        return self.dim - 2 * rank(self.d)

    def parts_compose_to_zero(self) -> bool:
        return all((a @ b).is_zero() for a in self.parts.values() for b in self.parts.values())

    def filtered(self) -> FilteredComplex:
        return FilteredComplex(self.d, self.levels, self.s1, self.s2)


def _offsets(c: UnrolledCouple) -> dict[int, int]:
    out, pos = {}, 0
    for s in c.s_range:
        out[s] = pos
        pos += c.e_dim(s)
    return out


def _embed(vectors, offset: int, n: int, field) -> list[tuple]:
    zero = field.zero
    out = []
    for v in vectors:
        w = [zero] * n
        w[offset:offset + len(v)] = v
        out.append(tuple(w))
    return out


def _total(pg: Page, which: str, offsets, n, field) -> Subspace:
    vecs = []
    for s, q in pg.quotients.items():
        sub = q.cycles if which == "Z" else q.boundaries
        vecs += _embed(sub.basis, offsets[s], n, field)
    return Subspace.span(vecs, n, field)


def _projection_coords(basis: ExactMatrix) -> ExactMatrix:
    """(C^T C)^{-1} C^T: coordinates of the orthogonal projection onto the column span of C."""
    field = basis.field
    if basis.cols == 0:
        return ExactMatrix.zeros(0, basis.rows, field)
    gram = basis.T @ basis
    solver = Solver(gram)
    ct = basis.T
    cols = [solver.solve(ct.col(j)) for j in range(ct.cols)]
    return ExactMatrix.from_columns(cols, basis.cols, field)


def lift(c: UnrolledCouple) -> LiftedComplex:
    field = c.field
    n_steps = c.s2 - c.s1
    offsets = _offsets(c)
    n = sum(c.e_dim(s) for s in c.s_range)
    levels = tuple(s for s in c.s_range for _ in range(c.e_dim(s)))
    pgs = pages(c, n_steps + 1)
    Z = {p.r: _total(p, "Z", offsets, n, field) for p in pgs}
    B = {p.r: _total(p, "B", offsets, n, field) for p in pgs}
    b_prime = {p: orthogonal_complement(B[p], B[p + 1]) for p in range(1, n_steps + 1)}
    z_prime = {p: orthogonal_complement(Z[p + 1], Z[p]) for p in range(1, n_steps + 1)}
    e_inf = orthogonal_complement(B[n_steps + 1], Z[n_steps + 1])
    splitting = {f"B'_{p}": b_prime[p].dim for p in b_prime}
    splitting.update({f"Z'_{p}": z_prime[p].dim for p in z_prime})
    splitting["E'_inf"] = e_inf.dim
    if sum(splitting.values()) != n:
        raise LiftFailure("splitting does not exhaust E")

    parts = {}
    for pg in pgs[:n_steps]:
        r = pg.r
        rows = [[field.zero] * n for _ in range(n)]
        for s in c.s_range:
            t = s + r
            if t > c.s2 or pg.dim(s) == 0 or pg.dim(t) == 0:
                continue
            src = ExactMatrix.from_columns(pg.quotients[s].basis, c.e_dim(s), field)
            tgt = ExactMatrix.from_columns(pg.quotients[t].basis, c.e_dim(t), field)
            block = tgt @ pg.differential[s] @ _projection_coords(src)
            for a in range(block.rows):
                for b in range(block.cols):
                    if block[a, b]:
                        rows[offsets[t] + a][offsets[s] + b] = block[a, b]
        m = ExactMatrix.from_rows(rows, field, cols=n)
        # d'_r lives on Z'_r and lands in B'_r
        if not image_basis(m) <= b_prime[r]:
            raise LiftFailure(f"d'_{r} leaves B'_{r}")
        if any(any(m.apply(v)) for v in z_prime[r].annihilator().basis):
            raise LiftFailure(f"d'_{r} is nonzero off Z'_{r}")
        parts[r] = m
    d = ExactMatrix.zeros(n, n, field)
    for m in parts.values():
        d = d + m
    return LiftedComplex(c.s1, c.s2, {s: c.e_dim(s) for s in c.s_range}, levels, parts, d, splitting)


@dataclass(frozen=True)
class RoundTripReport:
    ok: bool
    mismatches: tuple[tuple[int, int, int, int], ...]   # (r, s, original, recovered)
    original: Mapping[int, Mapping[int, int]]
    recovered: Mapping[int, Mapping[int, int]]
    homology_dim: int
    e_infinity_dim: int
    parts_compose_to_zero: bool


def roundtrip_check(c: UnrolledCouple) -> RoundTripReport:
    lc = lift(c)
    c2 = couple_from_filtered(lc.filtered())
    last = c.length + 1
    orig = {p.r: p.dims for p in pages(c, last)}
    back = {p.r: p.dims for p in pages(c2, last)}
    mism = tuple((r, s, orig[r][s], back[r].get(s, 0))
                 for r in orig for s in orig[r] if orig[r][s] != back[r].get(s, 0))
    e_inf = sum(orig[last].values())
    h = lc.homology_dim()
    pz = lc.parts_compose_to_zero()
    return RoundTripReport(not mism and h == e_inf and pz, mism, orig, back, h, e_inf, pz)

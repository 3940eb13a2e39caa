"""Bent complexes built from a pair of filtered differentials on a graded space.

A profile is a Z x Z/2 graded space with two square-zero maps: d_plus raises the
Z-grading, d_minus lowers it, and both flip parity.  For an integer s the pieces
at gradings s + kq form the underlying space of every complex below.

* bent A_s: d_plus on pieces with k >= 0, d_minus on pieces with k <= 0.
* dual bent A_s^v: d_plus components landing at k <= 0, d_minus components
  landing at k >= 0.  This is the transpose of A_{-s} of the mirror profile.
* B_s^+: the pieces at k >= 0 with d_plus; B_s^-: the pieces at k <= 0 with d_minus.
  The projections A_s -> B_s^+ and A_s -> B_s^- are chain maps.
"""
from __future__ import annotations

from dataclasses import dataclass, field as dc_field
from functools import cached_property
from typing import Literal, Mapping, Sequence

from .errors import ClassInconsistency, InvalidProfile, NotLargeSurgery
from .graded import (Complex, GradedMap, GradedSpace, Homology, Key, MapSum, homology, homology_dim,
                     verify_square_zero)
from .linalg import QQ, ExactMatrix, Field

Variant = Literal["bent", "dual_bent", "B_plus", "B_minus"]


def _blocks_of(space: GradedSpace, blocks: Mapping, field: Field) -> MapSum:
    conv = {}
    for (sk, tk), m in blocks.items():
        sk, tk = tuple(sk), tuple(tk)
        if not isinstance(m, ExactMatrix):
            m = ExactMatrix.from_rows(m, field, cols=space.dim_at(sk))
        conv[(sk, tk)] = m
    return MapSum.from_blocks(space, space, conv, field)


@dataclass(frozen=True)
class KhiProfile:
    genus: int
    q: int
    space: GradedSpace
    d_plus: MapSum
    d_minus: MapSum
    field: Field = QQ

    def __post_init__(self):
        if self.genus < 0:
            raise InvalidProfile("genus must be nonnegative")
        if self.q < 1:
            raise InvalidProfile("q must be positive")
        for name, d, sign in (("d_plus", self.d_plus, 1), ("d_minus", self.d_minus, -1)):
            d = MapSum.of(d)
            object.__setattr__(self, name, d)
            if d.source != self.space or d.target != self.space:
                raise InvalidProfile(f"{name} must act on the profile's space")
            for (sk, tk) in d.blocks():
                shift = tk[0] - sk[0]
                if sign * shift <= 0:
                    raise InvalidProfile(f"{name} block {sk} -> {tk} does not move the grading the right way")
                if shift % self.q:
                    raise InvalidProfile(f"{name} block {sk} -> {tk} shifts by {shift}, not a multiple of q={self.q}")
                if sk[1] == tk[1]:
                    raise InvalidProfile(f"{name} block {sk} -> {tk} does not flip parity")
            if not verify_square_zero(d):
                raise InvalidProfile(f"{name} does not square to zero")
        if self.q == 1 and any(abs(z) > self.genus for z, _ in self.space.keys):
            raise InvalidProfile(f"gradings must lie in [-{self.genus}, {self.genus}]")

    @classmethod
    def build(cls, genus: int, dims: Mapping[Key, int], d_plus: Mapping | None = None,
              d_minus: Mapping | None = None, q: int = 1, field: Field = QQ,
              labels: Mapping[Key, Sequence[str]] | None = None) -> "KhiProfile":
        """Blocks of d_plus and d_minus are keyed by (source piece, target piece)."""
        try:
            space = GradedSpace.of(dims, labels)
            dp = _blocks_of(space, d_plus or {}, field)
            dm = _blocks_of(space, d_minus or {}, field)
        except (ValueError, KeyError) as exc:
            raise InvalidProfile(str(exc)) from exc
        return cls(genus, q, space, dp, dm, field)

    @cached_property
    def gradings(self) -> list[int]:
        return sorted({z for z, _ in self.space.keys}, reverse=True)

    @property
    def top(self) -> int:
        return self.gradings[0] if self.gradings else 0

    @property
    def bottom(self) -> int:
        return self.gradings[-1] if self.gradings else 0

    @property
    def i_bound(self) -> int:
        return max((abs(z) for z in self.gradings), default=0)

    def class_keys(self, s: int) -> list[Key]:
        return [k for k in self.space.keys if (k[0] - s) % self.q == 0]

    def offset(self, s: int, z: int) -> int:
        return (z - s) // self.q

    def whole(self, which: str) -> Complex:
        return Complex(self.space, self.d_plus if which == "+" else self.d_minus)


@dataclass(frozen=True)
class BentComplex:
    s: int
    variant: Variant
    complex: Complex
    offsets: dict = dc_field(compare=False, default_factory=dict)   # piece -> k

    @property
    def space(self) -> GradedSpace:
        return self.complex.space

    @cached_property
    def homology(self) -> Homology:
        return homology(self.complex)

    @cached_property
    def dim_homology(self) -> int:
        return homology_dim(self.complex)


def _restricted(p: KhiProfile, keys: Sequence[Key], pick) -> Complex:
    """Complex on ``keys`` whose differential keeps the blocks for which pick(sign, k_src, k_tgt)."""
    space = p.space.restrict(keys)
    keep = set(space.keys)
    blocks: dict[tuple[Key, Key], ExactMatrix] = {}
    for sign, d in (("+", p.d_plus), ("-", p.d_minus)):
        for (sk, tk), m in d.blocks().items():
            if sk in keep and tk in keep and pick(sign, sk[0], tk[0]):
                if (sk, tk) in blocks:
                    m = blocks[(sk, tk)] + m
                blocks[(sk, tk)] = m
    return Complex(space, MapSum.from_blocks(space, space, blocks, p.field))


def _make(p: KhiProfile, s: int, variant: Variant, keys, pick) -> BentComplex:
    c = _restricted(p, keys, lambda sign, zs, zt: pick(sign, p.offset(s, zs), p.offset(s, zt)))
    return BentComplex(s, variant, c, {k: p.offset(s, k[0]) for k in c.space.keys})


def build_bent(p: KhiProfile, s: int) -> BentComplex:
    return _make(p, s, "bent", p.class_keys(s),
                 lambda sign, ks, kt: ks >= 0 if sign == "+" else ks <= 0)


def build_dual_bent(p: KhiProfile, s: int) -> BentComplex:
    return _make(p, s, "dual_bent", p.class_keys(s),
                 lambda sign, ks, kt: kt <= 0 if sign == "+" else kt >= 0)


def build_half(p: KhiProfile, s: int, sign: str) -> BentComplex:
    if sign not in ("+", "-"):
        raise ValueError("sign must be '+' or '-'")
    keys = [k for k in p.class_keys(s) if (p.offset(s, k[0]) >= 0 if sign == "+" else p.offset(s, k[0]) <= 0)]
    return _make(p, s, "B_plus" if sign == "+" else "B_minus", keys, lambda sg, ks, kt: sg == sign)


def projection(p: KhiProfile, s: int, sign: str) -> GradedMap:
    """A_s -> B_s^sign: identity on the pieces kept by the half complex, zero on the rest."""
    src = build_bent(p, s).space
    tgt = build_half(p, s, sign).space
    blocks = {k: ExactMatrix.identity(d, p.field) for k, d in tgt.pieces}
    return GradedMap.make(src, tgt, 0, 0, blocks, p.field)


def projection_is_chain_map(p: KhiProfile, s: int, sign: str) -> bool:
    pi = projection(p, s, sign).to_matrix()
    a, b = build_bent(p, s).complex.matrix, build_half(p, s, sign).complex.matrix
    return pi @ a == b @ pi


@dataclass(frozen=True)
class SurgeryDimReport:
    n: int
    s_min: int
    s_max: int
    class_dims: tuple[tuple[int, int], ...]
    total: int
    per_s: tuple[tuple[int, int], ...] = ()

    def __post_init__(self):
        if self.total != sum(d for _, d in self.class_dims):
            raise ValueError("total must equal the sum of class dimensions")


def large_surgery_dims(p: KhiProfile, n: int) -> SurgeryDimReport:
    """Class dimensions for large n-surgery: H(A_{-s}) when n > 0, H(A^v_{-s}) when n < 0.

    Only q = 1 is handled; the general bookkeeping needs the meridian class data.
    """
    if p.q != 1:
        raise InvalidProfile("large surgery dimensions are implemented for q = 1 only")
    if n == 0 or abs(n) < 2 * p.genus + 1:
        raise NotLargeSurgery(f"|n| = {abs(n)} is below 2g+1 = {2 * p.genus + 1}")
    m = abs(n)
    s_min, s_max = -m + 1 + p.genus, m - 1 - p.genus
    build = build_bent if n > 0 else build_dual_bent
    per_s = []
    by_class: dict[int, int] = {}
    for s in range(s_min, s_max + 1):
        d = build(p, -s).dim_homology
        per_s.append((s, d))
        c = (s - s_min) % m
        if c in by_class and by_class[c] != d:
            raise ClassInconsistency(f"class {c} has dimensions {by_class[c]} and {d}")
        by_class[c] = d
    if len(by_class) != m:
        raise NotLargeSurgery(f"only {len(by_class)} of {m} classes are represented")
    dims = tuple(sorted(by_class.items()))
    return SurgeryDimReport(n, s_min, s_max, dims, sum(by_class.values()), tuple(per_s))


def _class_generators(p: KhiProfile, s: int) -> list[int] | None:
    """Basis indices of the class of s in descending grading, or None if some grading has dim > 1."""
    out = []
    for k in p.class_keys(s):
        if sum(d for kk, d in p.space.pieces if kk[0] == k[0]) > 1:
            return None
        out.extend(p.space.indices(k))
    return out


def _is_unit_pattern(m: ExactMatrix, gens: list[int], col: int, want: int | None) -> bool:
    """Column ``col`` of m is supported on exactly the generator ``want`` (or is zero if None)."""
    for g in gens:
        v = m[g, col]
        if g == want:
            if not v:
                return False
        elif v:
            return False
    return True


def _chain(p: KhiProfile, s: int, positive: bool) -> bool:
    gens = _class_generators(p, s)
    if gens is None or len(gens) % 2 == 0:
        return False
    dp, dm = p.d_plus.to_matrix(), p.d_minus.to_matrix()
    xs, ys = gens[0::2], gens[1::2]
    if positive:
        # d_+(y_i) = x_i,  d_-(y_i) = x_{i+1}, d_±(x_i) = 0
        return (all(_is_unit_pattern(dp, gens, y, xs[i]) and _is_unit_pattern(dm, gens, y, xs[i + 1])
                    for i, y in enumerate(ys))
                and all(_is_unit_pattern(dp, gens, x, None) and _is_unit_pattern(dm, gens, x, None) for x in xs))
    # d_-(x_i) = y_i,  d_+(x_i) = y_{i-1}, d_±(y_i) = 0
    ok = True
    for i, x in enumerate(xs):
        ok &= _is_unit_pattern(dm, gens, x, ys[i] if i < len(ys) else None)
        ok &= _is_unit_pattern(dp, gens, x, ys[i - 1] if i >= 1 else None)
    ok &= all(_is_unit_pattern(dp, gens, y, None) and _is_unit_pattern(dm, gens, y, None) for y in ys)
    return ok


def is_positive_chain(p: KhiProfile, s: int = 0) -> bool:
    return _chain(p, s, True)


def is_negative_chain(p: KhiProfile, s: int = 0) -> bool:
    return _chain(p, s, False)


def floer_simple_check(p: KhiProfile) -> bool:
    """Every class is both a positive and a negative chain; same as every class having dimension 1."""
    classes = range(p.q)
    by_chains = all(is_positive_chain(p, c) and is_negative_chain(p, c) for c in classes)
    by_dims = all(sum(p.space.dim_at(k) for k in p.class_keys(c)) == 1 for c in classes)
    if by_chains != by_dims:
        raise InvalidProfile("chain and dimension characterizations of Floer simplicity disagree")
    return by_dims


def mirror(p: KhiProfile) -> KhiProfile:
    """Negate gradings and transpose both differentials."""
    def flip(d: MapSum) -> MapSum:
        parts = [g.transpose(negate_gradings=True) for g in d.parts]
        space = parts[0].source if parts else _neg_space(p.space)
        return MapSum(space, space, tuple(parts), p.field)
    dp, dm = flip(p.d_plus), flip(p.d_minus)
    space = _neg_space(p.space)
    dp = MapSum(space, space, dp.parts, p.field)
    dm = MapSum(space, space, dm.parts, p.field)
    return KhiProfile(p.genus, p.q, space, dp, dm, p.field)


def _neg_space(s: GradedSpace) -> GradedSpace:
    lab = dict(s.labels)
    return GradedSpace.of({(-z, par): d for (z, par), d in s.pieces}, {(-z, par): v for (z, par), v in lab.items()})


@dataclass(frozen=True)
class DualityReport:
    comparisons: tuple[tuple[int, int, int], ...]   # (s, dim H(A_s^v), dim H(A_{-s} of mirror))

    @property
    def ok(self) -> bool:
        return all(a == b for _, a, b in self.comparisons)


def duality_check(p: KhiProfile, s_range: Sequence[int] | None = None) -> DualityReport:
    m = mirror(p)
    if s_range is None:
        s_range = range(p.bottom - 1, p.top + 2)
    rows = tuple((s, build_dual_bent(p, s).dim_homology, build_bent(m, -s).dim_homology) for s in s_range)
    return DualityReport(rows)

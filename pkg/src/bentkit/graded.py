"""Z x Z/2 graded vector spaces, graded maps, chain complexes and mapping cones.

Basis order of a graded space is fixed: pieces sorted by descending Z-grading,
then parity, and inside a piece by label order.  Dense matrices of maps are
always written against that order.
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from typing import Iterable, Mapping, Sequence

from .errors import DimensionMismatch, NotChainMap, NotHomogeneous, NotSquareZero, ShapeMismatch
from .linalg import QQ, ExactMatrix, Field, rank
from .linalg import equal_up_to_unit as _matrices_equal_up_to_unit

Key = tuple[int, int]


def _order(key: Key) -> tuple[int, int]:
    return (-key[0], key[1])


@dataclass(frozen=True)
class GradedSpace:
    pieces: tuple[tuple[Key, int], ...]
    labels: tuple[tuple[Key, tuple[str, ...]], ...] = ()

    def __post_init__(self):
        for (z, p), d in self.pieces:
            if p not in (0, 1):
                raise ValueError(f"parity must be 0 or 1, got {p}")
            if d <= 0:
                raise ValueError("pieces must have positive dimension; omit empty pieces")
        keys = [k for k, _ in self.pieces]
        if keys != sorted(set(keys), key=_order):
            raise ValueError("pieces must be unique and in canonical order; use GradedSpace.of")
        for k, labs in self.labels:
            if len(labs) != self.dim_at(k):
                raise ValueError(f"piece {k} has {self.dim_at(k)} basis vectors but {len(labs)} labels")

    @classmethod
    def of(cls, dims: Mapping[Key, int], labels: Mapping[Key, Sequence[str]] | None = None) -> "GradedSpace":
        pieces = tuple(sorted(((tuple(k), int(d)) for k, d in dims.items() if d), key=lambda kd: _order(kd[0])))
        labs = ()
        if labels:
            labs = tuple(sorted(((tuple(k), tuple(v)) for k, v in labels.items() if v),
                                key=lambda kv: _order(kv[0])))
        return cls(pieces, labs)

    @classmethod
    def zero(cls) -> "GradedSpace":
        return cls(())

    @cached_property
    def dims(self) -> dict[Key, int]:
        return dict(self.pieces)

    @property
    def keys(self) -> list[Key]:
        return [k for k, _ in self.pieces]

    def dim_at(self, key: Key) -> int:
        return self.dims.get(tuple(key), 0)

    @property
    def dim(self) -> int:
        return sum(d for _, d in self.pieces)

    @cached_property
    def offsets(self) -> dict[Key, int]:
        out, pos = {}, 0
        for k, d in self.pieces:
            out[k] = pos
            pos += d
        return out

    def indices(self, key: Key) -> range:
        key = tuple(key)
        if key not in self.dims:
            return range(0)
        o = self.offsets[key]
        return range(o, o + self.dims[key])

    @cached_property
    def key_of_index(self) -> tuple[Key, ...]:
        return tuple(k for k, d in self.pieces for _ in range(d))

    def label(self, key: Key, i: int) -> str:
        labs = dict(self.labels).get(tuple(key))
        if labs:
            return labs[i]
        return f"e[{key[0]},{key[1]}]_{i}"

    def parity_dims(self) -> dict[int, int]:
        out = {0: 0, 1: 0}
        for (_, p), d in self.pieces:
            out[p] += d
        return out

    def euler_characteristic(self) -> int:
        return sum(d if p == 0 else -d for (_, p), d in self.pieces)

    def z_dims(self) -> dict[int, int]:
        out: dict[int, int] = {}
        for (z, _), d in self.pieces:
            out[z] = out.get(z, 0) + d
        return out

    def restrict(self, keep: Iterable[Key]) -> "GradedSpace":
        keep = {tuple(k) for k in keep}
        lab = dict(self.labels)
        return GradedSpace.of({k: d for k, d in self.pieces if k in keep},
                              {k: lab[k] for k in keep if k in lab})


def shift(s: GradedSpace, j: int) -> GradedSpace:
    """Move every piece from grading i to grading i + j."""
    lab = dict(s.labels)
    return GradedSpace.of({(z + j, p): d for (z, p), d in s.pieces},
                          {(z + j, p): v for (z, p), v in lab.items()})


def flip_parity(s: GradedSpace) -> GradedSpace:
    """The {1} shift: exchange odd and even."""
    lab = dict(s.labels)
    return GradedSpace.of({(z, 1 - p): d for (z, p), d in s.pieces},
                          {(z, 1 - p): v for (z, p), v in lab.items()})


def direct_sum(a: GradedSpace, b: GradedSpace) -> tuple[GradedSpace, list[int], list[int]]:
    """A (+) B together with the positions of A's and B's basis vectors in the sum."""
    dims = dict(a.dims)
    for k, d in b.pieces:
        dims[k] = dims.get(k, 0) + d
    la, lb = dict(a.labels), dict(b.labels)
    labels = {}
    if la or lb:
        for k in dims:
            labels[k] = tuple(la.get(k, tuple(a.label(k, i) for i in range(a.dim_at(k))))) + \
                tuple(lb.get(k, tuple(b.label(k, i) for i in range(b.dim_at(k)))))
    s = GradedSpace.of(dims, labels or None)
    ia = [0] * a.dim
    ib = [0] * b.dim
    for k in s.keys:
        o = s.offsets[k]
        for n, i in enumerate(a.indices(k)):
            ia[i] = o + n
        for n, i in enumerate(b.indices(k)):
            ib[i] = o + a.dim_at(k) + n
    return s, ia, ib


@dataclass(frozen=True)
class GradedMap:
    """Homogeneous map: piece (i, p) goes to piece (i + z_shift, p + parity_shift)."""

    source: GradedSpace
    target: GradedSpace
    z_shift: int
    parity_shift: int
    blocks: tuple[tuple[Key, ExactMatrix], ...] = ()
    field: Field = QQ

    def __post_init__(self):
        if self.parity_shift not in (0, 1):
            raise ValueError("parity shift must be 0 or 1")
        for k, m in self.blocks:
            t = self.target_key(k)
            if (m.rows, m.cols) != (self.target.dim_at(t), self.source.dim_at(k)):
                raise DimensionMismatch(
                    f"block at {k} is {m.rows}x{m.cols}, expected {self.target.dim_at(t)}x{self.source.dim_at(k)}")
            if m.field != self.field:
                raise ValueError("block field differs from map field")

    def target_key(self, key: Key) -> Key:
        return (key[0] + self.z_shift, (key[1] + self.parity_shift) % 2)

    @classmethod
    def make(cls, source: GradedSpace, target: GradedSpace, z_shift: int, parity_shift: int,
             blocks: Mapping[Key, object], field: Field = QQ) -> "GradedMap":
        out = []
        for k, m in blocks.items():
            k = tuple(k)
            if not isinstance(m, ExactMatrix):
                m = ExactMatrix.from_rows(m, field, cols=source.dim_at(k))
            if m.is_zero():
                continue
            out.append((k, m))
        out.sort(key=lambda km: _order(km[0]))
        return cls(source, target, z_shift, parity_shift % 2, tuple(out), field)

    @classmethod
    def zero(cls, source: GradedSpace, target: GradedSpace, field: Field = QQ) -> "GradedMap":
        return cls(source, target, 0, 0, (), field)

    @classmethod
    def identity(cls, space: GradedSpace, field: Field = QQ) -> "GradedMap":
        return cls.make(space, space, 0, 0, {k: ExactMatrix.identity(d, field) for k, d in space.pieces}, field)

    def block(self, key: Key) -> ExactMatrix:
        for k, m in self.blocks:
            if k == tuple(key):
                return m
        return ExactMatrix.zeros(self.target.dim_at(self.target_key(key)), self.source.dim_at(key), self.field)

    def is_zero(self) -> bool:
        return not self.blocks

    def to_matrix(self) -> ExactMatrix:
        rows = [[self.field.zero] * self.source.dim for _ in range(self.target.dim)]
        for k, m in self.blocks:
            r0 = self.target.offsets[self.target_key(k)]
            c0 = self.source.offsets[k]
            for i in range(m.rows):
                for j in range(m.cols):
                    rows[r0 + i][c0 + j] = m[i, j]
        return ExactMatrix.from_rows(rows, self.field, cols=self.source.dim)

    @classmethod
    def from_matrix(cls, source: GradedSpace, target: GradedSpace, m: ExactMatrix,
                    z_shift: int, parity_shift: int) -> "GradedMap":
        if (m.rows, m.cols) != (target.dim, source.dim):
            raise DimensionMismatch(f"matrix {m.shape} for spaces of dims {target.dim}, {source.dim}")
        blocks = {}
        allowed = set()
        for k in source.keys:
            t = (k[0] + z_shift, (k[1] + parity_shift) % 2)
            rows_t = list(target.indices(t))
            cols = list(source.indices(k))
            allowed.update((r, c) for r in rows_t for c in cols)
            if rows_t:
                blocks[k] = m.submatrix(rows_t, cols)
        for r in range(m.rows):
            for c in range(m.cols):
                if m[r, c] and (r, c) not in allowed:
                    raise NotHomogeneous(f"entry ({r},{c}) is not of shift ({z_shift},{parity_shift})")
        return cls.make(source, target, z_shift, parity_shift, blocks, m.field)

    def __matmul__(self, other: "GradedMap") -> "GradedMap":
        # self after other
        if other.target != self.source:
            raise ShapeMismatch("composition of maps with mismatched spaces")
        return GradedMap.from_matrix(other.source, self.target, self.to_matrix() @ other.to_matrix(),
                                     self.z_shift + other.z_shift, (self.parity_shift + other.parity_shift) % 2)

    def __neg__(self) -> "GradedMap":
        return GradedMap(self.source, self.target, self.z_shift, self.parity_shift,
                         tuple((k, -m) for k, m in self.blocks), self.field)

    def transpose(self, negate_gradings: bool = False) -> "GradedMap":
        """Dual map target* -> source*.  With ``negate_gradings`` pieces (i, p) become (-i, p)."""
        sgn = -1 if negate_gradings else 1
        src = _regrade(self.target, sgn)
        tgt = _regrade(self.source, sgn)
        blocks = {}
        for k, m in self.blocks:
            t = self.target_key(k)
            blocks[(sgn * t[0], t[1])] = m.T
        return GradedMap.make(src, tgt, -sgn * self.z_shift, self.parity_shift, blocks, self.field)


def _regrade(s: GradedSpace, sgn: int) -> GradedSpace:
    if sgn == 1:
        return s
    lab = dict(s.labels)
    return GradedSpace.of({(-z, p): d for (z, p), d in s.pieces}, {(-z, p): v for (z, p), v in lab.items()})


@dataclass(frozen=True)
class MapSum:
    """Finite sum of homogeneous maps sharing source and target."""

    source: GradedSpace
    target: GradedSpace
    parts: tuple[GradedMap, ...] = ()
    field: Field = QQ

    def __post_init__(self):
        for p in self.parts:
            if p.source != self.source or p.target != self.target:
                raise ShapeMismatch("summands must share source and target")

    @classmethod
    def of(cls, m: "GradedMap | MapSum") -> "MapSum":
        if isinstance(m, MapSum):
            return m
        return cls(m.source, m.target, (m,) if not m.is_zero() else (), m.field)

    @classmethod
    def zero(cls, source: GradedSpace, target: GradedSpace, field: Field = QQ) -> "MapSum":
        return cls(source, target, (), field)

    @classmethod
    def from_blocks(cls, source: GradedSpace, target: GradedSpace,
                    blocks: Mapping[tuple[Key, Key], object], field: Field = QQ) -> "MapSum":
        """Build from blocks keyed by (source piece, target piece), grouping them by shift."""
        groups: dict[tuple[int, int], dict[Key, object]] = {}
        for (sk, tk), m in blocks.items():
            sh = (tk[0] - sk[0], (tk[1] - sk[1]) % 2)
            if tuple(sk) in groups.setdefault(sh, {}):
                raise ValueError(f"duplicate block from {sk} with shift {sh}")
            groups[sh][tuple(sk)] = m
        parts = [GradedMap.make(source, target, zs, ps, bl, field) for (zs, ps), bl in sorted(groups.items())]
        return cls(source, target, tuple(p for p in parts if not p.is_zero()), field)

    @classmethod
    def from_matrix(cls, source: GradedSpace, target: GradedSpace, m: ExactMatrix) -> "MapSum":
        if (m.rows, m.cols) != (target.dim, source.dim):
            raise DimensionMismatch(f"matrix {m.shape} for spaces of dims {target.dim}, {source.dim}")
        blocks = {}
        for sk in source.keys:
            cols = list(source.indices(sk))
            for tk in target.keys:
                b = m.submatrix(list(target.indices(tk)), cols)
                if not b.is_zero():
                    blocks[(sk, tk)] = b
        return cls.from_blocks(source, target, blocks, m.field)

    def to_matrix(self) -> ExactMatrix:
        rows = [[self.field.zero] * self.source.dim for _ in range(self.target.dim)]
        offs_t, offs_s = self.target.offsets, self.source.offsets
        for p in self.parts:
            for k, m in p.blocks:
                r0, c0 = offs_t[p.target_key(k)], offs_s[k]
                for i in range(m.rows):
                    row = rows[r0 + i]
                    for j in range(m.cols):
                        v = m[i, j]
                        if v:
                            row[c0 + j] = row[c0 + j] + v if row[c0 + j] else v
        return ExactMatrix(self.target.dim, self.source.dim, tuple(x for r in rows for x in r), self.field)

    def blocks(self) -> dict[tuple[Key, Key], ExactMatrix]:
        """All nonzero blocks keyed by (source piece, target piece)."""
        out = {}
        for p in self.parts:
            for k, m in p.blocks:
                out[(k, p.target_key(k))] = m
        return out

    @property
    def shifts(self) -> list[tuple[int, int]]:
        return sorted({(p.z_shift, p.parity_shift) for p in self.parts})

    def __add__(self, other: "MapSum | GradedMap") -> "MapSum":
        other = MapSum.of(other)
        return MapSum.from_matrix(self.source, self.target, self.to_matrix() + other.to_matrix())


def verify_square_zero(d: "GradedMap | MapSum") -> bool:
    if d.source != d.target:
        raise ShapeMismatch("a differential must be an endomorphism")
    m = d.to_matrix()
    return (m @ m).is_zero()


@dataclass(frozen=True)
class Complex:
    space: GradedSpace
    differential: MapSum

    def __post_init__(self):
        d = MapSum.of(self.differential)
        object.__setattr__(self, "differential", d)
        if d.source != self.space or d.target != self.space:
            raise ShapeMismatch("differential must act on the complex's space")
        if not verify_square_zero(d):
            raise NotSquareZero("differential does not square to zero")

    @classmethod
    def zero(cls, space: GradedSpace, field: Field = QQ) -> "Complex":
        return cls(space, MapSum.zero(space, space, field))

    @cached_property
    def matrix(self) -> ExactMatrix:
        return self.differential.to_matrix()

    @property
    def field(self) -> Field:
        return self.differential.field


@dataclass(frozen=True)
class Homology:
    """Dimensions of homology.

    ``graded`` is filled when the differential is homogeneous, ``by_parity`` when
    it at least has a single parity shift; ``total`` is always available.
    """

    total: int
    by_parity: dict[int, int] | None
    graded: GradedSpace | None

    @property
    def dim(self) -> int:
        return self.total


def _group_homology(d: ExactMatrix, idx: list[int]) -> int:
    if not idx:
        return 0
    all_idx = list(range(d.rows))
    out_rank = rank(d.submatrix(all_idx, idx))
    in_rank = rank(d.submatrix(idx, all_idx))
    return len(idx) - out_rank - in_rank


def homology_dim(c: Complex) -> int:
    """Total dimension only; skips the per-piece ranks."""
    return c.space.dim - 2 * rank(c.matrix)


def homology(c: Complex) -> Homology:
    d = c.matrix
    n = c.space.dim
    total = n - 2 * rank(d)
    shifts = c.differential.shifts
    graded = by_parity = None
    if len(shifts) <= 1:
        dims = {k: _group_homology(d, list(c.space.indices(k))) for k in c.space.keys}
        graded = GradedSpace.of(dims)
    if len({ps for _, ps in shifts}) <= 1:
        by_parity = {}
        for par in (0, 1):
            idx = [i for i, k in enumerate(c.space.key_of_index) if k[1] == par]
            by_parity[par] = _group_homology(d, idx)
    return Homology(total, by_parity, graded)


def mapping_cone(f: "GradedMap | MapSum", source: Complex | None = None, target: Complex | None = None) -> Complex:
    """Cone of a chain map f: X -> Y, living on Y (+) X{1} with differential [[d_Y, f], [0, -d_X]]."""
    f = MapSum.of(f)
    field = f.field
    src = source if source is not None else Complex.zero(f.source, field)
    tgt = target if target is not None else Complex.zero(f.target, field)
    if src.space != f.source or tgt.space != f.target:
        raise ShapeMismatch("complexes do not match the map's spaces")
    fm = f.to_matrix()
    if fm @ src.matrix != tgt.matrix @ fm:
        raise NotChainMap("f does not commute with the differentials")
    space, iy, ix = direct_sum(tgt.space, flip_parity(src.space))
    n = space.dim
    rows = [[field.zero] * n for _ in range(n)]
    dy, dx = tgt.matrix, src.matrix
    for a in range(dy.rows):
        for b in range(dy.cols):
            if dy[a, b]:
                rows[iy[a]][iy[b]] = dy[a, b]
    for a in range(fm.rows):
        for b in range(fm.cols):
            if fm[a, b]:
                rows[iy[a]][ix[b]] = fm[a, b]
    for a in range(dx.rows):
        for b in range(dx.cols):
            if dx[a, b]:
                rows[ix[a]][ix[b]] = -dx[a, b]
    m = ExactMatrix.from_rows(rows, field, cols=n)
    return Complex(space, MapSum.from_matrix(space, space, m))


def equal_up_to_unit(a: "GradedMap | MapSum | ExactMatrix", b: "GradedMap | MapSum | ExactMatrix") -> bool:
    """Equality of maps up to a nonzero scalar, the natural notion for projective systems."""
    ma = a if isinstance(a, ExactMatrix) else a.to_matrix()
    mb = b if isinstance(b, ExactMatrix) else b.to_matrix()
    return _matrices_equal_up_to_unit(ma, mb)

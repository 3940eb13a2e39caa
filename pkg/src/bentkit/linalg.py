"""Exact dense linear algebra over the rationals or a prime field.

Everything here is immutable.  Subspaces are stored by their canonical basis:
the nonzero rows of the reduced row echelon form of any spanning set (that is,
reduced column echelon form of the basis matrix), so two subspaces are equal
exactly when their bases compare equal.
"""
from __future__ import annotations

from dataclasses import dataclass, field as dc_field
from fractions import Fraction
from functools import cached_property
from typing import Iterable, Sequence

from .errors import DegenerateInnerProduct, DimensionMismatch, NotContained

DEFAULT_PRIME = 32003


class Mod:
    """Element of Z/p.  Interoperates with plain ints."""

    __slots__ = ("v", "p")

    def __init__(self, v: int, p: int):
        self.v = v % p
        self.p = p

    def _coerce(self, other):
        if isinstance(other, Mod):
            if other.p != self.p:
                raise ValueError("mixing elements of different prime fields")
            return other.v
        if isinstance(other, int):
            return other
        if isinstance(other, Fraction):
            return other.numerator * pow(other.denominator, -1, self.p)
        return NotImplemented

    def __add__(self, other):
        o = self._coerce(other)
        return NotImplemented if o is NotImplemented else Mod(self.v + o, self.p)

    __radd__ = __add__

    def __sub__(self, other):
        o = self._coerce(other)
        return NotImplemented if o is NotImplemented else Mod(self.v - o, self.p)

    def __rsub__(self, other):
        o = self._coerce(other)
        return NotImplemented if o is NotImplemented else Mod(o - self.v, self.p)

    def __mul__(self, other):
        o = self._coerce(other)
        return NotImplemented if o is NotImplemented else Mod(self.v * o, self.p)

    __rmul__ = __mul__

    def __truediv__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        if o % self.p == 0:
            raise ZeroDivisionError("division by zero in prime field")
        return Mod(self.v * pow(o, -1, self.p), self.p)

    def __rtruediv__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        if self.v == 0:
            raise ZeroDivisionError("division by zero in prime field")
        return Mod(o * pow(self.v, -1, self.p), self.p)

    def __neg__(self):
        return Mod(-self.v, self.p)

    def __bool__(self):
        return self.v != 0

    def __eq__(self, other):
        o = self._coerce(other) if isinstance(other, (Mod, int, Fraction)) else NotImplemented
        if o is NotImplemented:
            return NotImplemented
        return (self.v - o) % self.p == 0

    def __hash__(self):
        return hash((self.v, self.p))

    def __repr__(self):
        return f"{self.v} (mod {self.p})"

    def __str__(self):
        # symmetric representative reads better in reports
        v = self.v if self.v <= self.p // 2 else self.v - self.p
        return str(v)


@dataclass(frozen=True)
class Field:
    """Coefficient field: rationals when ``p`` is None, otherwise Z/p."""

    p: int | None = None

    def __call__(self, x) -> Fraction | Mod:
        if self.p is None:
            if type(x) is Fraction:
                return x
            if isinstance(x, Mod):
                raise ValueError("prime-field element used over the rationals")
            return Fraction(x)
        if isinstance(x, Mod):
            if x.p != self.p:
                raise ValueError("mixing elements of different prime fields")
            return x
        fr = Fraction(x)
        if fr.denominator % self.p == 0:
            raise ZeroDivisionError(f"denominator {fr.denominator} vanishes mod {self.p}")
        return Mod(fr.numerator * pow(fr.denominator, -1, self.p), self.p)

    @property
    def zero(self):
        return self(0)

    @property
    def one(self):
        return self(1)

    @property
    def name(self) -> str:
        return "rational" if self.p is None else f"prime:{self.p}"

    @classmethod
    def parse(cls, text: str | None) -> "Field":
        if text is None or text == "" or text == "rational":
            return cls()
        if text.startswith("prime"):
            _, _, rest = text.partition(":")
            p = int(rest) if rest else DEFAULT_PRIME
            if p < 2 or any(p % d == 0 for d in range(2, int(p ** 0.5) + 1)):
                raise ValueError(f"{p} is not prime")
            return cls(p)
        raise ValueError(f"unknown field {text!r}; expected 'rational' or 'prime:p'")


QQ = Field()
GF = Field(DEFAULT_PRIME)


def _rref(rows: list[list], ncols: int) -> tuple[list[list], list[int]]:
    """Gauss-Jordan in place, pivoting only in the first ``ncols`` columns.

    Row operations act on the full rows, so trailing columns ride along as an
    augmented block.  Returns all rows (pivot rows first) and the pivot columns.
    """
    m = rows
    nrows = len(m)
    pivots: list[int] = []
    r = 0
    for c in range(ncols):
        if r == nrows:
            break
        piv = None
        for i in range(r, nrows):
            if m[i][c]:
                piv = i
                break
        if piv is None:
            continue
        m[r], m[piv] = m[piv], m[r]
        pr = m[r]
        lead = pr[c]
        if lead != 1:
            pr = [x / lead for x in pr]
            m[r] = pr
        nz = [j for j in range(c, len(pr)) if pr[j]]
        for i in range(nrows):
            if i == r:
                continue
            mi = m[i]
            f = mi[c]
            if f:
                for j in nz:
                    mi[j] -= f * pr[j]
        pivots.append(c)
        r += 1
    return m, pivots


@dataclass(frozen=True)
class ExactMatrix:
    """Dense matrix with exact entries, stored row-major."""

    rows: int
    cols: int
    entries: tuple
    field: Field = QQ

    def __post_init__(self):
        if self.rows < 0 or self.cols < 0:
            raise DimensionMismatch("negative matrix size")
        if len(self.entries) != self.rows * self.cols:
            raise DimensionMismatch(
                f"{len(self.entries)} entries for a {self.rows}x{self.cols} matrix")

    # construction
    @classmethod
    def from_rows(cls, rows: Sequence[Sequence], field: Field = QQ, cols: int | None = None) -> "ExactMatrix":
        rows = [list(r) for r in rows]
        if cols is None:
            cols = len(rows[0]) if rows else 0
        if any(len(r) != cols for r in rows):
            raise DimensionMismatch("ragged rows")
        return cls(len(rows), cols, tuple(field(x) for r in rows for x in r), field)

    @classmethod
    def from_columns(cls, columns: Sequence[Sequence], nrows: int, field: Field = QQ) -> "ExactMatrix":
        if any(len(c) != nrows for c in columns):
            raise DimensionMismatch("column length differs from row count")
        return cls.from_rows([[c[i] for c in columns] for i in range(nrows)], field, cols=len(columns))

    @classmethod
    def zeros(cls, rows: int, cols: int, field: Field = QQ) -> "ExactMatrix":
        return cls(rows, cols, (field.zero,) * (rows * cols), field)

    @classmethod
    def identity(cls, n: int, field: Field = QQ) -> "ExactMatrix":
        z, o = field.zero, field.one
        return cls(n, n, tuple(o if i == j else z for i in range(n) for j in range(n)), field)

    @classmethod
    def block(cls, grid: Sequence[Sequence["ExactMatrix | None"]], row_sizes: Sequence[int],
              col_sizes: Sequence[int], field: Field = QQ) -> "ExactMatrix":
        """Assemble from a grid of blocks; ``None`` means a zero block."""
        out = [[field.zero] * sum(col_sizes) for _ in range(sum(row_sizes))]
        r0 = 0
        for bi, rs in enumerate(row_sizes):
            c0 = 0
            for bj, cs in enumerate(col_sizes):
                b = grid[bi][bj]
                if b is not None:
                    if (b.rows, b.cols) != (rs, cs):
                        raise DimensionMismatch(
                            f"block ({bi},{bj}) is {b.rows}x{b.cols}, expected {rs}x{cs}")
                    for i in range(rs):
                        out[r0 + i][c0:c0 + cs] = b.row(i)
                c0 += cs
            r0 += rs
        return cls.from_rows(out, field, cols=sum(col_sizes))

    # access
    def __getitem__(self, ij):
        i, j = ij
        return self.entries[i * self.cols + j]

    def row(self, i: int) -> list:
        return list(self.entries[i * self.cols:(i + 1) * self.cols])

    def col(self, j: int) -> tuple:
        return tuple(self.entries[j::self.cols]) if self.rows else ()

    def to_rows(self) -> list[list]:
        return [self.row(i) for i in range(self.rows)]

    def columns(self) -> list[tuple]:
        return [self.col(j) for j in range(self.cols)]

    @property
    def shape(self) -> tuple[int, int]:
        return self.rows, self.cols

    def is_zero(self) -> bool:
        return not any(self.entries)

    def submatrix(self, row_idx: Sequence[int], col_idx: Sequence[int]) -> "ExactMatrix":
        e, c = self.entries, self.cols
        return ExactMatrix(len(row_idx), len(col_idx), tuple(e[i * c + j] for i in row_idx for j in col_idx),
                           self.field)

    # arithmetic
    def _check_same(self, other: "ExactMatrix"):
        if self.shape != other.shape:
            raise DimensionMismatch(f"{self.shape} vs {other.shape}")

    def __add__(self, other: "ExactMatrix") -> "ExactMatrix":
        self._check_same(other)
        return ExactMatrix(self.rows, self.cols,
                           tuple((a + b if a else b) if b else a for a, b in zip(self.entries, other.entries)),
                           self.field)

    def __sub__(self, other: "ExactMatrix") -> "ExactMatrix":
        self._check_same(other)
        return ExactMatrix(self.rows, self.cols,
                           tuple(a - b for a, b in zip(self.entries, other.entries)), self.field)

    def __neg__(self) -> "ExactMatrix":
        return ExactMatrix(self.rows, self.cols, tuple(-a for a in self.entries), self.field)

    def scale(self, c) -> "ExactMatrix":
        c = self.field(c)
        return ExactMatrix(self.rows, self.cols, tuple(c * a for a in self.entries), self.field)

    def __matmul__(self, other: "ExactMatrix") -> "ExactMatrix":
        if self.cols != other.rows:
            raise DimensionMismatch(f"cannot multiply {self.shape} by {other.shape}")
        zero = self.field.zero
        a_rows = [self.row(i) for i in range(self.rows)]
        b_rows = [other.row(k) for k in range(other.rows)]
        out = []
        for ar in a_rows:
            acc = [zero] * other.cols
            for k, a in enumerate(ar):
                if a:
                    br = b_rows[k]
                    for j in range(other.cols):
                        b = br[j]
                        if b:
                            acc[j] += a * b
            out.extend(acc)
        return ExactMatrix(self.rows, other.cols, tuple(out), self.field)

    def apply(self, v: Sequence) -> tuple:
        if len(v) != self.cols:
            raise DimensionMismatch(f"vector of length {len(v)} for {self.cols} columns")
        zero = self.field.zero
        out = []
        for i in range(self.rows):
            acc = zero
            base = i * self.cols
            for j, x in enumerate(v):
                if x:
                    a = self.entries[base + j]
                    if a:
                        acc += a * x
            out.append(acc)
        return tuple(out)

    @property
    def T(self) -> "ExactMatrix":
        return ExactMatrix(self.cols, self.rows,
                           tuple(self.entries[i * self.cols + j] for j in range(self.cols) for i in range(self.rows)),
                           self.field)

    def hstack(self, other: "ExactMatrix") -> "ExactMatrix":
        if self.rows != other.rows:
            raise DimensionMismatch("hstack needs equal row counts")
        return ExactMatrix.from_rows([self.row(i) + other.row(i) for i in range(self.rows)],
                                     self.field, cols=self.cols + other.cols)

    def vstack(self, other: "ExactMatrix") -> "ExactMatrix":
        if self.cols != other.cols:
            raise DimensionMismatch("vstack needs equal column counts")
        return ExactMatrix(self.rows + other.rows, self.cols, self.entries + other.entries, self.field)

    def rref(self) -> tuple[list[list], list[int]]:
        """Nonzero rows of the reduced row echelon form and the pivot columns."""
        red, piv = _rref(self.to_rows(), self.cols)
        return red[:len(piv)], piv

    def __str__(self):
        return "\n".join("[" + " ".join(str(x) for x in self.row(i)) + "]" for i in range(self.rows))


def rank(m: ExactMatrix) -> int:
    return len(m.rref()[1])


@dataclass(frozen=True)
class Subspace:
    """Subspace of field^ambient, held by its canonical basis."""

    ambient: int
    basis: tuple[tuple, ...]
    field: Field = QQ

    @classmethod
    def span(cls, vectors: Iterable[Sequence], ambient: int, field: Field = QQ) -> "Subspace":
        rows = [[field(x) for x in v] for v in vectors]
        if any(len(r) != ambient for r in rows):
            raise DimensionMismatch(f"vector length differs from ambient dimension {ambient}")
        red, piv = _rref(rows, ambient)
        return cls(ambient, tuple(tuple(r) for r in red[:len(piv)]), field)

    @classmethod
    def zero(cls, ambient: int, field: Field = QQ) -> "Subspace":
        return cls(ambient, (), field)

    @classmethod
    def full(cls, ambient: int, field: Field = QQ) -> "Subspace":
        return cls.span(ExactMatrix.identity(ambient, field).to_rows(), ambient, field)

    @property
    def dim(self) -> int:
        return len(self.basis)

    @cached_property
    def pivots(self) -> tuple[int, ...]:
        return tuple(next(j for j, x in enumerate(b) if x) for b in self.basis)

    def matrix(self) -> ExactMatrix:
        """Basis vectors as the columns of an ambient x dim matrix."""
        return ExactMatrix.from_columns(self.basis, self.ambient, self.field)

    def coordinates(self, v: Sequence) -> tuple | None:
        """Coefficients of v in the canonical basis, or None if v is not in the subspace."""
        v = tuple(self.field(x) for x in v)
        coeffs = tuple(v[p] for p in self.pivots)
        recon = [self.field.zero] * self.ambient
        for c, b in zip(coeffs, self.basis):
            if c:
                for j, x in enumerate(b):
                    if x:
                        recon[j] += c * x
        return coeffs if tuple(recon) == v else None

    def contains(self, v: Sequence) -> bool:
        return self.coordinates(v) is not None

    def __le__(self, other: "Subspace") -> bool:
        if self.ambient != other.ambient:
            raise DimensionMismatch("subspaces of different ambient spaces")
        return all(other.contains(b) for b in self.basis)

    def __add__(self, other: "Subspace") -> "Subspace":
        if self.ambient != other.ambient:
            raise DimensionMismatch("subspaces of different ambient spaces")
        return Subspace.span(self.basis + other.basis, self.ambient, self.field)

    def intersect(self, other: "Subspace") -> "Subspace":
        if self.ambient != other.ambient:
            raise DimensionMismatch("subspaces of different ambient spaces")
        # x = A a = B b  <=>  [A | -B] (a, b) = 0
        if not self.basis or not other.basis:
            return Subspace.zero(self.ambient, self.field)
        a = self.matrix()
        m = a.hstack(-other.matrix())
        ker = kernel_basis(m)
        vecs = [a.apply(k[:self.dim]) for k in ker.basis]
        return Subspace.span(vecs, self.ambient, self.field)

    def annihilator(self) -> "Subspace":
        """Vectors whose dot product with every element of the subspace is zero."""
        if not self.basis:
            return Subspace.full(self.ambient, self.field)
        return kernel_basis(ExactMatrix.from_rows(self.basis, self.field, cols=self.ambient))


def kernel_basis(m: ExactMatrix) -> Subspace:
    red, pivots = m.rref()
    free = [c for c in range(m.cols) if c not in set(pivots)]
    zero, one = m.field.zero, m.field.one
    vecs = []
    for f in free:
        v = [zero] * m.cols
        v[f] = one
        for row, p in zip(red, pivots):
            if row[f]:
                v[p] = -row[f]
        vecs.append(v)
    return Subspace.span(vecs, m.cols, m.field)


def image_basis(m: ExactMatrix) -> Subspace:
    return Subspace.span(m.columns(), m.rows, m.field)


def _dot(u, v):
    acc = 0
    for a, b in zip(u, v):
        if a and b:
            acc = acc + a * b
    return acc


def orthogonal_complement(s: Subspace, within: Subspace) -> Subspace:
    """Complement of s inside ``within`` for the standard dot product."""
    if s.ambient != within.ambient:
        raise DimensionMismatch("subspaces of different ambient spaces")
    if not s <= within:
        raise NotContained("subspace is not contained in the enclosing subspace")
    if not s.basis:
        return within
    field = within.field
    # w = sum c_i W_i with w . b_j = 0 for all j
    gram = ExactMatrix.from_rows([[_dot(w, b) for w in within.basis] for b in s.basis], field,
                                 cols=within.dim)
    ker = kernel_basis(gram)
    w_mat = within.matrix()
    out = Subspace.span([w_mat.apply(c) for c in ker.basis], within.ambient, field)
    if out.dim != within.dim - s.dim or out.intersect(s).dim:
        raise DegenerateInnerProduct("dot product is degenerate on this subspace")
    return out


def preimage(m: ExactMatrix, target: Subspace) -> Subspace:
    """{v : m v in target}."""
    if target.ambient != m.rows:
        raise DimensionMismatch(f"target lives in dimension {target.ambient}, map has {m.rows} rows")
    ann = target.annihilator()
    if not ann.basis:
        return Subspace.full(m.cols, m.field)
    phi = ExactMatrix.from_rows(ann.basis, m.field, cols=m.rows)
    return kernel_basis(phi @ m)


class Solver:
    """Precomputed elimination for repeated solves of M x = b."""

    def __init__(self, m: ExactMatrix):
        self.m = m
        self.field = field = m.field
        n, k = m.rows, m.cols
        zero, one = field.zero, field.one
        aug = [m.row(i) + [one if j == i else zero for j in range(n)] for i in range(n)]
        red, pivots = _rref(aug, k)
        r = len(pivots)
        # E M = R with E the right block; rows of E past the rank annihilate M
        self._solve_rows = [(p, row[k:]) for row, p in zip(red, pivots)]
        self._checks = [row[k:] for row in red[r:]]
        self.rank = r

    def solve(self, b: Sequence) -> tuple | None:
        if len(b) != self.m.rows:
            raise DimensionMismatch(f"right-hand side of length {len(b)} for {self.m.rows} rows")
        b = [self.field(x) for x in b]
        for c in self._checks:
            if _dot(c, b):
                return None
        x = [self.field.zero] * self.m.cols
        for p, e in self._solve_rows:
            x[p] = self.field(_dot(e, b))
        return tuple(x)


def solve(m: ExactMatrix, b: Sequence) -> tuple | None:
    return Solver(m).solve(b)


def equal_up_to_unit(a: ExactMatrix, b: ExactMatrix) -> bool:
    """True iff a = c b for some nonzero scalar c."""
    if a.shape != b.shape:
        return False
    c = None
    for x, y in zip(a.entries, b.entries):
        if bool(x) != bool(y):
            return False
        if x:
            r = x / y
            if c is None:
                c = r
            elif r != c:
                return False
    return True


@dataclass(frozen=True)
class Quotient:
    """The quotient Z / B presented by the orthogonal complement of B in Z."""

    cycles: Subspace
    boundaries: Subspace
    complement: Subspace = dc_field(init=False)

    def __post_init__(self):
        object.__setattr__(self, "complement", orthogonal_complement(self.boundaries, self.cycles))

    @property
    def dim(self) -> int:
        return self.complement.dim

    @property
    def basis(self) -> tuple[tuple, ...]:
        return self.complement.basis

    @cached_property
    def _solver(self) -> Solver:
        cols = list(self.complement.basis) + list(self.boundaries.basis)
        return Solver(ExactMatrix.from_columns(cols, self.cycles.ambient, self.cycles.field))

    def coords(self, v: Sequence) -> tuple | None:
        """Coordinates of the class of v in the complement basis; None if v is not a cycle."""
        x = self._solver.solve(v)
        return None if x is None else x[:self.dim]

    def class_is_zero(self, v: Sequence) -> bool:
        c = self.coords(v)
        return c is not None and not any(c)


def homology_quotient(d: ExactMatrix) -> Quotient:
    """ker d / im d for a square-zero endomorphism."""
    return Quotient(kernel_basis(d), image_basis(d))


def induced_map(f: ExactMatrix, src: Quotient, tgt: Quotient) -> ExactMatrix:
    """Matrix of the map induced by f between two quotient presentations."""
    cols = []
    for c in src.basis:
        x = tgt.coords(f.apply(c))
        if x is None:
            raise DimensionMismatch("map does not send cycles to cycles")
        cols.append(x)
    return ExactMatrix.from_columns(cols, tgt.dim, f.field) if cols else ExactMatrix.zeros(tgt.dim, 0, f.field)

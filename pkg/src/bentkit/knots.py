"""Knot-level layer: Alexander polynomials, L-space obstructions, genus-one surgery dimensions."""
from __future__ import annotations

import math
import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Literal, Mapping

from .bent import KhiProfile, build_bent, large_surgery_dims
from .errors import (BadSlope, InvalidCase, NotApplicable, NotGenusOne, NotSymmetrizable,
                     PreconditionViolated, UnitValueViolation)
from .graded import GradedSpace, Key, homology
from .linalg import QQ, ExactMatrix, Field, image_basis, kernel_basis, rank


# ---------------------------------------------------------------- polynomials

@dataclass(frozen=True)
class AlexanderPolynomial:
    coefficients: tuple[tuple[int, int], ...]   # (exponent, coefficient), descending, nonzero

    @classmethod
    def from_mapping(cls, coeffs: Mapping[int, int]) -> "AlexanderPolynomial":
        return cls(tuple(sorted(((int(e), int(c)) for e, c in coeffs.items() if c), reverse=True)))

    @property
    def as_dict(self) -> dict[int, int]:
        return dict(self.coefficients)

    def coeff(self, e: int) -> int:
        return self.as_dict.get(e, 0)

    @property
    def degree(self) -> int:
        return max((e for e, _ in self.coefficients), default=0)

    def __call__(self, t) -> Fraction:
        return sum((Fraction(c) * Fraction(t) ** e for e, c in self.coefficients), Fraction(0))

    def is_symmetric(self) -> bool:
        d = self.as_dict
        return all(d.get(-e, 0) == c for e, c in d.items())

    def to_cell(self) -> str:
        """CSV cell form: ``exponent:coefficient`` pairs joined by ';'."""
        return ";".join(f"{e}:{c}" for e, c in self.coefficients)

    def __str__(self) -> str:
        terms = []
        for e, c in self.coefficients:
            mag = abs(c)
            if e == 0:
                body = str(mag)
            else:
                body = ("" if mag == 1 else str(mag)) + ("t" if e == 1 else f"t^{e}")
            terms.append(("-" if c < 0 else "+") + body)
        s = "".join(terms) or "+0"
        return s[1:] if s[0] == "+" else s


_CELL_RE = re.compile(r"^\s*(-?\d+)\s*:\s*(-?\d+)\s*$")


def parse_alexander_cell(cell: str) -> dict[int, int]:
    out: dict[int, int] = {}
    if not cell.strip():
        raise ValueError("empty alexander cell")
    for part in cell.split(";"):
        m = _CELL_RE.match(part)
        if not m:
            raise ValueError(f"bad exponent:coefficient pair {part!r}")
        e, c = int(m.group(1)), int(m.group(2))
        if e in out:
            raise ValueError(f"exponent {e} repeated")
        out[e] = c
    return out


def normalize_alexander(raw: Mapping[int, int] | AlexanderPolynomial) -> AlexanderPolynomial:
    """Center the support at 0 and fix the sign so that the value at 1 is 1."""
    d = raw.as_dict if isinstance(raw, AlexanderPolynomial) else {int(e): int(c) for e, c in raw.items() if c}
    if not d:
        raise UnitValueViolation("zero polynomial")
    lo, hi = min(d), max(d)
    if (lo + hi) % 2:
        raise NotSymmetrizable(f"support [{lo}, {hi}] has no center")
    mid = (lo + hi) // 2
    d = {e - mid: c for e, c in d.items()}
    if any(d.get(-e, 0) != c for e, c in d.items()):
        raise NotSymmetrizable("coefficients are not palindromic")
    v = sum(d.values())
    if v not in (1, -1):
        raise UnitValueViolation(f"value at t = 1 is {v}")
    return AlexanderPolynomial.from_mapping({e: v * c for e, c in d.items()})


# ---------------------------------------------------------------- L-space obstructions

@dataclass(frozen=True)
class LspaceForm:
    n: tuple[int, ...]   # n_k > ... > n_1 > n_0 = 0

    def __post_init__(self):
        if not self.n or self.n[-1] != 0 or any(a <= b for a, b in zip(self.n, self.n[1:])):
            raise ValueError("gap sequence must be strictly decreasing and end at 0")

    @property
    def k(self) -> int:
        return len(self.n) - 1

    @property
    def genus(self) -> int:
        return self.n[0]

    def polynomial(self) -> AlexanderPolynomial:
        k = self.k
        d = {0: (-1) ** k}
        for j in range(1, k + 1):
            e = self.n[k - j]
            d[e] = d[-e] = (-1) ** (k - j)
        return AlexanderPolynomial.from_mapping(d)


def lspace_form_check(delta: AlexanderPolynomial, g: int) -> LspaceForm | None:
    d = delta.as_dict
    if d == {0: 1}:
        return LspaceForm((0,)) if g == 0 else None
    pos = sorted((e for e in d if e > 0), reverse=True)
    k = len(pos)
    for i, e in enumerate(pos):
        if d[e] != (-1) ** i:
            return None
    if d.get(0, 0) != (-1) ** k or not delta.is_symmetric():
        return None
    n = tuple(pos) + (0,)
    if g != n[0] or n[0] != n[1] + 1:
        return None
    return LspaceForm(n)


@dataclass(frozen=True)
class DeterminantCheck:
    det: int
    bound: int
    ok: bool


def determinant_bound_check(delta: AlexanderPolynomial, g: int) -> DeterminantCheck:
    det = abs(delta(-1))
    assert det.denominator == 1
    det = int(det)
    res = DeterminantCheck(det, 2 * g + 1, det <= 2 * g + 1)
    if not res.ok and lspace_form_check(delta, g) is not None:
        raise AssertionError(f"L-space form with det {det} > {2 * g + 1}")
    return res


@dataclass(frozen=True)
class ProfileShell:
    """Graded dimensions without differentials."""

    genus: int
    dims: tuple[tuple[Key, int], ...]

    @classmethod
    def of(cls, genus: int, dims: Mapping[Key, int]) -> "ProfileShell":
        return cls(genus, GradedSpace.of(dims).pieces)

    @property
    def space(self) -> GradedSpace:
        return GradedSpace(self.dims)

    def z_dims(self) -> dict[int, int]:
        return self.space.z_dims()

    def dims_by_grading(self) -> list[int]:
        zd = self.z_dims()
        return [zd.get(z, 0) for z in range(self.genus, -self.genus - 1, -1)]

    def euler(self) -> dict[int, int]:
        out: dict[int, int] = {}
        for (z, p), d in self.dims:
            out[z] = out.get(z, 0) + (d if p == 0 else -d)
        return {z: c for z, c in out.items() if c}


def lspace_profile(form: LspaceForm, field: Field = QQ) -> KhiProfile:
    """Positive chain with unit coefficients on generators at +-n_j, top parity even."""
    exps = list(form.n) + [-e for e in reversed(form.n[:-1])]
    keys = [(e, i % 2) for i, e in enumerate(exps)]
    dims = {k: 1 for k in keys}
    one = [[1]]
    dp, dm = {}, {}
    for i in range(1, len(keys), 2):
        dp[(keys[i], keys[i - 1])] = one
        dm[(keys[i], keys[i + 1])] = one
    labels = {k: [("x" if i % 2 == 0 else "y") + str(i // 2 + 1)] for i, k in enumerate(keys)}
    return KhiProfile.build(form.genus, dims, dp, dm, field=field, labels=labels)


def thin_profile(delta: AlexanderPolynomial) -> ProfileShell:
    if delta.degree != 1 or not delta.is_symmetric():
        raise NotGenusOne(f"degree {delta.degree} polynomial is not genus one")
    a1, a0 = delta.coeff(1), delta.coeff(0)
    sgn = 1 if a1 > 0 else -1
    dims = {}
    for z, a in ((1, a1), (0, a0), (-1, a1)):
        if a:
            dims[(z, 0 if a * sgn > 0 else 1)] = abs(a)
    return ProfileShell.of(1, dims)


def connected_sum_profile(p1: "KhiProfile | ProfileShell", p2: "KhiProfile | ProfileShell") -> ProfileShell:
    """Tensor product of graded dimensions: gradings add, parities add mod 2."""
    s1, s2 = p1.space, p2.space
    out: dict[Key, int] = {}
    for (z1, q1), d1 in s1.pieces:
        for (z2, q2), d2 in s2.pieces:
            k = (z1 + z2, (q1 + q2) % 2)
            out[k] = out.get(k, 0) + d1 * d2
    return ProfileShell.of(p1.genus + p2.genus, out)


# ---------------------------------------------------------------- grading arithmetic

def _ceil_half(m: int) -> int:
    """ceil(m / 2) for an integer m."""
    return -((-m) // 2)


@dataclass(frozen=True)
class GradingBounds:
    y: int
    g: int
    i_max: int
    i_min: int


def grading_bounds(y: int, g: int) -> GradingBounds:
    if y < 0 or g < 0:
        raise ValueError("y and g must be nonnegative")
    hi = _ceil_half(y - 1) + g
    lo = _ceil_half(-(y - 1)) - g
    if hi - lo != 2 * g + y - 1:
        raise AssertionError("grading width identity failed")
    return GradingBounds(y, g, hi, lo)


@dataclass(frozen=True)
class JnValues:
    first: int
    second: int

    @property
    def consistent(self) -> bool:
        return self.first == self.second


def jn_values(q: int, q0: int, g: int, n: int) -> JnValues:
    if (n - 1) * q < 2 * g:
        raise PreconditionViolated(f"(n-1)q = {(n - 1) * q} < 2g = {2 * g}")
    qn = n * q - q0
    if min(qn, (2 * n - 1) * q - 2 * q0) < 0:
        raise PreconditionViolated(f"negative y-value for q={q}, q0={q0}, n={n}")
    bn, bmu, bsh = grading_bounds(qn, g), grading_bounds(q, g), grading_bounds((2 * n - 1) * q - 2 * q0, g)
    first = bsh.i_min - bn.i_min + bn.i_max - bmu.i_max
    second = bsh.i_max - bn.i_max + bn.i_min - bmu.i_min
    return JnValues(first, second)


def jn_consistency(q: int, q0: int, g: int, n: int) -> bool:
    return jn_values(q, q0, g, n).consistent


# ---------------------------------------------------------------- genus one

Case = Literal["2a+1", "2a-1"]
Subcase = Literal["A", "B"]
CASES: tuple[Case, ...] = ("2a+1", "2a-1")


def genus_one_case(delta: AlexanderPolynomial) -> tuple[Case, int]:
    """a1 t + a0 + a1 t^-1 with a1 < 0 has middle dimension 2a+1, a = -a1; a1 > 0 gives 2a-1, a = a1."""
    thin_profile(delta)
    a1 = delta.coeff(1)
    return ("2a-1", a1) if a1 > 0 else ("2a+1", -a1)


def subcase_for_nu(nu_sharp: int | None, case: Case) -> Subcase | None:
    if case == "2a+1":
        return None
    if nu_sharp == 1:
        return "A"
    if nu_sharp == -1:
        return "B"
    raise NotApplicable(f"case 2a-1 needs nu_sharp = +-1, got {nu_sharp}")


@dataclass(frozen=True)
class SurgeryInvariants:
    nu_sharp: int
    tau_sharp: Fraction


def invariants_from_signature(signature: int, case: Case) -> SurgeryInvariants | None:
    """For genus-one alternating knots: -sigma/2 when sigma != 0, and 0 in case 2a+1."""
    if signature % 2:
        raise ValueError("knot signatures are even")
    if signature != 0:
        v = -signature // 2
        return SurgeryInvariants(v, Fraction(v))
    if case == "2a+1":
        return SurgeryInvariants(0, Fraction(0))
    return None


def _z(field, n, m):
    return ExactMatrix.zeros(n, m, field)


def _unit_map(rows: int, cols: int, pairs: Iterable[tuple[int, int]], field: Field) -> ExactMatrix:
    r = [[field.zero] * cols for _ in range(rows)]
    for i, j in pairs:
        r[i][j] = field.one
    return ExactMatrix.from_rows(r, field, cols=cols)


@dataclass(frozen=True)
class GenusOneMaps:
    """Components of d_plus and d_minus between gradings 1, 0, -1.

    ``down`` is the common value of the maps from gradings +1 and -1 into grading 0,
    ``up`` the common value of the maps from grading 0 out to gradings +1 and -1.
    """

    a: int
    mid: int
    down: ExactMatrix   # mid x a
    up: ExactMatrix     # a x mid


def synthesize_genus_one(a: int, case: Case, subcase: Subcase | None = None, field: Field = QQ) -> GenusOneMaps:
    if case == "2a+1":
        if a < 0:
            raise InvalidCase("a must be nonnegative")
        mid = 2 * a + 1
        down = _unit_map(mid, a, ((i, i) for i in range(a)), field)
        up = _unit_map(a, mid, ((i, a + 1 + i) for i in range(a)), field)
    elif case == "2a-1":
        if a < 1:
            raise InvalidCase("case 2a-1 needs a >= 1")
        mid = 2 * a - 1
        if subcase == "A":
            down = _unit_map(mid, a, ((i, i) for i in range(a)), field)
            up = _unit_map(a, mid, ((i, a + i) for i in range(a - 1)), field)
        elif subcase == "B":
            down = _unit_map(mid, a, ((i, i) for i in range(a - 1)), field)
            up = _unit_map(a, mid, ((i, a - 1 + i) for i in range(a)), field)
        else:
            raise InvalidCase(f"case 2a-1 needs subcase A or B, got {subcase!r}")
    else:
        raise InvalidCase(f"unknown case {case!r}")
    maps = GenusOneMaps(a, mid, down, up)
    check_genus_one_conditions(maps, case)
    return maps


def _ker_dim(m: ExactMatrix) -> int:
    return m.cols - rank(m)


def check_genus_one_conditions(maps: GenusOneMaps, case: Case) -> None:
    """Kernel dimensions of the map out of grading 0 and vanishing composites."""
    a, mid, down, up = maps.a, maps.mid, maps.down, maps.up
    if not (up @ down).is_zero():
        raise InvalidCase("composite through grading 0 is nonzero")
    want = a + 1 if case == "2a+1" else None
    k = _ker_dim(up)
    if case == "2a+1" and k != want:
        raise InvalidCase(f"kernel out of grading 0 has dim {k}, expected {want}")
    if case == "2a-1" and k not in (a, a - 1):
        raise InvalidCase(f"kernel out of grading 0 has dim {k}")
    if not image_basis(down) <= kernel_basis(up):
        raise InvalidCase("image into grading 0 is not inside the kernel out of it")


def genus_one_profile(a: int, case: Case, subcase: Subcase | None = None, field: Field = QQ) -> KhiProfile:
    maps = synthesize_genus_one(a, case, subcase, field)
    top, mid, bot = (1, 0), (0, 1), (-1, 0)
    dims = {top: a, mid: maps.mid, bot: a}
    dp, dm = {}, {}
    if a:
        dp = {(bot, mid): maps.down, (mid, top): maps.up}
        dm = {(top, mid): maps.down, (mid, bot): maps.up}
    p = KhiProfile.build(1, dims, dp, dm, field=field)
    for which in ("+", "-"):
        if homology(p.whole(which)).total != 1:
            raise InvalidCase(f"homology of d_{which} is not one dimensional")
    return p


@dataclass(frozen=True)
class GenusOneReport:
    a: int
    case: Case
    subcase: Subcase | None
    nu_sharp: int
    dim_H_A0: int
    dim_slope_minus3: int    # large surgery with n = 3
    dim_slope_plus3: int     # large surgery with n = -3
    closed_form: tuple[int, int, int]

    @property
    def agrees(self) -> bool:
        return (self.dim_H_A0, self.dim_slope_minus3, self.dim_slope_plus3) == self.closed_form


def closed_forms(a: int, case: Case, subcase: Subcase | None = None) -> tuple[int, int, int]:
    """(dim H(A_0), dim at slope -3, dim at slope +3)."""
    if case == "2a+1":
        return (2 * a + 1, 2 * a + 3, 2 * a + 3)
    if subcase == "A":
        return (2 * a + 1, 2 * a + 3, 2 * a + 1)
    if subcase == "B":
        return (2 * a - 1, 2 * a + 1, 2 * a + 3)
    raise InvalidCase(f"case 2a-1 needs subcase A or B, got {subcase!r}")


def nu_for(case: Case, subcase: Subcase | None) -> int:
    return 0 if case == "2a+1" else (1 if subcase == "A" else -1)


def genus_one_pipeline(a: int, case: Case, subcase: Subcase | None = None, field: Field = QQ) -> GenusOneReport:
    """Closed forms next to brute-force homology of a synthesized profile; see ``agrees``."""
    if case == "2a+1":
        subcase = None
    p = genus_one_profile(a, case, subcase, field)
    h0 = build_bent(p, 0).dim_homology
    minus3 = large_surgery_dims(p, 3).total
    plus3 = large_surgery_dims(p, -3).total
    return GenusOneReport(a, case, subcase, nu_for(case, subcase), h0, minus3, plus3,
                          closed_forms(a, case, subcase))


def _check_slope(u: int, v: int) -> None:
    if v <= 0 or u == 0 or math.gcd(u, v) != 1:
        raise BadSlope(f"slope {u}/{v} needs u != 0, v > 0 and gcd 1")


@dataclass(frozen=True)
class SurgeryDim:
    dim: int
    case: Case
    formula: str
    nu_sharp: int


def surgery_dim_report(case: Case, a: int, u: int, v: int, nu_sharp: int | None = None) -> SurgeryDim:
    _check_slope(u, v)
    if case == "2a+1":
        if a < 0:
            raise InvalidCase("a must be nonnegative")
        return SurgeryDim(2 * a * v + abs(u), case, "2av+|u|", 0)
    if case != "2a-1" or a < 1:
        raise InvalidCase(f"bad case {case!r} with a = {a}")
    sub = subcase_for_nu(nu_sharp, case)
    if sub == "A":
        return SurgeryDim((2 * a - 1) * v + abs(u - v), case, "(2a-1)v+|u-v|", 1)
    return SurgeryDim((2 * a - 1) * v + abs(u + v), case, "(2a-1)v+|u+v|", -1)


def surgery_dim(case: Case, a: int, u: int, v: int, nu_sharp: int | None = None) -> int:
    return surgery_dim_report(case, a, u, v, nu_sharp).dim


# ---------------------------------------------------------------- records and verdicts

FAMILIES = ("alternating", "montesinos", "three_braid_closure", "other")

_T2 = re.compile(r"^T\(2,(-?\d+)\)$")
_P = re.compile(r"^P\(-2,3,(-?\d+)\)$")
_K3 = re.compile(r"^K\(3,(-?\d+);2,(-?\d+)\)$")


def parse_exception_flag(flag: str) -> tuple[str, tuple[int, ...]]:
    """'T(2,2n+1)', 'P(-2,3,2n+1)' or 'K(3,q;2,p)' with pq > 0."""
    f = flag.replace(" ", "")
    if m := _T2.match(f):
        m_ = int(m.group(1))
        if m_ % 2 == 0:
            raise ValueError(f"{flag}: second index must be odd")
        return "T2", (m_,)
    if m := _P.match(f):
        m_ = int(m.group(1))
        if m_ % 2 == 0:
            raise ValueError(f"{flag}: last index must be odd")
        return "P", (m_,)
    if m := _K3.match(f):
        q, p = int(m.group(1)), int(m.group(2))
        if p * q <= 0:
            raise ValueError(f"{flag}: needs pq > 0")
        return "K3", (q, p)
    raise ValueError(f"unknown exception flag {flag!r}")


@dataclass(frozen=True)
class KnotRecord:
    name: str
    alexander: AlexanderPolynomial
    four_ball_genus: int | None = None
    signature: int | None = None
    two_bridge: str | None = None
    families: tuple[str, ...] = ()
    exceptions: tuple[str, ...] = ()
    genus: int | None = None
    is_composite: bool = False
    nu_sharp: int | None = None
    table_id: str | None = None

    def __post_init__(self):
        for f in self.families:
            if f not in FAMILIES:
                raise ValueError(f"unknown family {f!r}")
        for e in self.exceptions:
            parse_exception_flag(e)
        if self.genus is not None and self.genus < self.alexander.degree:
            raise ValueError(f"genus {self.genus} is below the Alexander degree {self.alexander.degree}")

    @property
    def seifert_genus(self) -> int:
        return self.genus if self.genus is not None else self.alexander.degree

    def invariants(self) -> SurgeryInvariants | None:
        if self.nu_sharp is not None:
            return SurgeryInvariants(self.nu_sharp, Fraction(self.nu_sharp))
        if self.signature is None or self.seifert_genus != 1:
            return None
        return invariants_from_signature(self.signature, genus_one_case(self.alexander)[0])


@dataclass(frozen=True)
class Verdict:
    verdict: Literal["Abundant", "NotDetermined", "KnownLspaceKnot"]
    reasons: tuple[str, ...]


def su2_verdict(rec: KnotRecord) -> Verdict:
    g = rec.seifert_genus
    delta = rec.alexander
    if delta.as_dict == {0: 1} and g == 0:
        return Verdict("KnownLspaceKnot", ("trivial_knot",))
    reasons = []
    form = lspace_form_check(delta, g)
    if form is None:
        reasons.append("lspace_form_fails")
    det = determinant_bound_check(delta, g)
    if not det.ok:
        reasons.append(f"determinant_bound_fails:{det.det}>{det.bound}")
    if rec.is_composite:
        reasons.append("composite")
    if reasons:
        return Verdict("Abundant", tuple(reasons))
    if rec.exceptions:
        return Verdict("KnownLspaceKnot", tuple(f"exception:{e}" for e in rec.exceptions))
    fam = [f for f in rec.families if f in ("alternating", "montesinos", "three_braid_closure")]
    if fam:
        return Verdict("Abundant", tuple(f"family_without_exception:{f}" for f in fam))
    return Verdict("NotDetermined", ("lspace_form_holds", "no_family_rule"))

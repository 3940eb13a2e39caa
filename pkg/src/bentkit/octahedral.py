"""Explicit octahedral certificate for two composable maps of graded spaces.

With X, Y, Z carrying zero differentials and cone(f) = Y (+) X{1} with
d(y, x) = (f x, 0):

    psi : cone(f)  -> cone(gf),  (y, x)  -> (g y, x)
    phi : cone(gf) -> cone(g),   (z, x)  -> (z, f x)
    cone(psi) = Z (+) X{1} (+) Y{1} (+) X{2},
        d(z, x, y, x') = (gf x + g y, x', -f x', 0)
    eta : cone(g) -> cone(psi),  (z, y) -> (z, 0, y, 0)
    zeta: cone(psi) -> cone(g),  (z, x, y, x') -> (z, y + f x)
    D   : cone(psi) -> cone(psi), (z, x, y, x') -> (0, 0, 0, -x)

Solving eta zeta - id = dD + Dd on the four blocks: eta zeta - id sends
(z, x, y, x') to (0, -x, f x, -x'), and D = c * (X{1} -> X{2}) gives
dD + Dd = (0, c x, -c f x, c x'), so c = -1.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

from .errors import NotChainMap, ShapeMismatch
from .graded import GradedMap, MapSum
from .linalg import QQ, ExactMatrix, Field, Quotient, homology_quotient, image_basis, induced_map, kernel_basis


@dataclass(frozen=True)
class DenseComplex:
    """Coordinates, a square-zero differential, and a parity per coordinate."""

    d: ExactMatrix
    parity: tuple[int, ...]

    @property
    def dim(self) -> int:
        return self.d.rows

    def euler_characteristic(self) -> int:
        return sum(1 if p == 0 else -1 for p in self.parity)

    def homology(self) -> Quotient:
        return homology_quotient(self.d)


def _cone(f: ExactMatrix, src: DenseComplex, tgt: DenseComplex) -> DenseComplex:
    field = f.field
    d = ExactMatrix.block([[tgt.d, f], [None, -src.d]], [tgt.dim, src.dim], [tgt.dim, src.dim], field)
    return DenseComplex(d, tgt.parity + tuple(1 - p for p in src.parity))


def is_chain_map(m: ExactMatrix, src: DenseComplex, tgt: DenseComplex) -> bool:
    return m @ src.d == tgt.d @ m


@dataclass(frozen=True)
class OctahedralData:
    f: ExactMatrix
    g: ExactMatrix
    cone_f: DenseComplex
    cone_gf: DenseComplex
    cone_g: DenseComplex
    cone_psi: DenseComplex
    psi: ExactMatrix
    phi: ExactMatrix
    delta: ExactMatrix      # cone(g) -> cone(f){1}, (z, y) -> (y, 0)
    eta: ExactMatrix
    zeta: ExactMatrix
    homotopy: ExactMatrix

    def zeta_eta_is_identity(self) -> bool:
        return self.zeta @ self.eta == ExactMatrix.identity(self.cone_g.dim, self.f.field)

    def homotopy_holds(self) -> bool:
        d, h = self.cone_psi.d, self.homotopy
        lhs = self.eta @ self.zeta - ExactMatrix.identity(self.cone_psi.dim, self.f.field)
        return lhs == d @ h + h @ d

    def euler_identity_holds(self) -> bool:
        return (self.cone_gf.euler_characteristic()
                == self.cone_f.euler_characteristic() + self.cone_g.euler_characteristic())


def _dense(m: "ExactMatrix | GradedMap | MapSum") -> tuple[ExactMatrix, tuple[int, ...] | None, tuple[int, ...] | None]:
    if isinstance(m, ExactMatrix):
        return m, None, None
    mat = m.to_matrix()
    return mat, tuple(k[1] for k in m.source.key_of_index), tuple(k[1] for k in m.target.key_of_index)


def build_octahedron(f, g, parities: Sequence[Sequence[int]] | None = None) -> OctahedralData:
    """Build every map of the octahedron for X --f--> Y --g--> Z and verify the identities.

    ``f`` and ``g`` are matrices or graded maps; for matrices the parities of X, Y, Z
    default to even and may be given explicitly as ``parities``.
    """
    f, px, py = _dense(f)
    g, py2, pz = _dense(g)
    if f.rows != g.cols:
        raise ShapeMismatch(f"target of f has dimension {f.rows}, source of g has {g.cols}")
    if f.field != g.field:
        raise ShapeMismatch("f and g are over different fields")
    field: Field = f.field
    nx, ny, nz = f.cols, f.rows, g.rows
    if parities is not None:
        px, py, pz = (tuple(p) for p in parities)
    px = px or (0,) * nx
    py = py or py2 or (0,) * ny
    pz = pz or (0,) * nz
    X = DenseComplex(ExactMatrix.zeros(nx, nx, field), tuple(px))
    Y = DenseComplex(ExactMatrix.zeros(ny, ny, field), tuple(py))
    Z = DenseComplex(ExactMatrix.zeros(nz, nz, field), tuple(pz))
    gf = g @ f
    I = lambda n: ExactMatrix.identity(n, field)  # noqa: E731
    cone_f, cone_gf, cone_g = _cone(f, X, Y), _cone(gf, X, Z), _cone(g, Y, Z)

    psi = ExactMatrix.block([[g, None], [None, I(nx)]], [nz, nx], [ny, nx], field)
    phi = ExactMatrix.block([[I(nz), None], [None, f]], [nz, ny], [nz, nx], field)
    delta = ExactMatrix.block([[None, I(ny)], [None, None]], [ny, nx], [nz, ny], field)
    cone_psi = _cone(psi, cone_f, cone_gf)
    # cone(psi) blocks: Z, X{1}, Y{1}, X{2}
    sizes = [nz, nx, ny, nx]
    eta = ExactMatrix.block([[I(nz), None], [None, None], [None, I(ny)], [None, None]], sizes, [nz, ny], field)
    zeta = ExactMatrix.block([[I(nz), None, None, None], [None, f, I(ny), None]], [nz, ny], sizes, field)
    homotopy = ExactMatrix.block([[None] * 4, [None] * 4, [None] * 4, [None, -I(nx), None, None]],
                                 sizes, sizes, field)

    for name, m, s, t in (("psi", psi, cone_f, cone_gf), ("phi", phi, cone_gf, cone_g),
                          ("eta", eta, cone_g, cone_psi), ("zeta", zeta, cone_psi, cone_g)):
        if not is_chain_map(m, s, t):
            raise NotChainMap(f"{name} is not a chain map")
    shifted_f = DenseComplex(-cone_f.d, tuple(1 - p for p in cone_f.parity))
    if not is_chain_map(delta, cone_g, shifted_f):
        raise NotChainMap("connecting map is not a chain map")
    data = OctahedralData(f, g, cone_f, cone_gf, cone_g, cone_psi, psi, phi, delta, eta, zeta, homotopy)
    if not data.zeta_eta_is_identity():
        raise NotChainMap("zeta eta is not the identity")
    if not data.homotopy_holds():
        raise NotChainMap("eta zeta - id is not dD + Dd")
    return data


@dataclass(frozen=True)
class SequenceReport:
    exact: tuple[bool, bool, bool]   # at H(cone gf), H(cone g), H(cone f){1}
    dims: tuple[int, int, int]       # H(cone f), H(cone gf), H(cone g)

    @property
    def ok(self) -> bool:
        return all(self.exact)


def fourth_sequence_report(data: OctahedralData) -> SequenceReport:
    hf, hgf, hg = data.cone_f.homology(), data.cone_gf.homology(), data.cone_g.homology()
    psi_h = induced_map(data.psi, hf, hgf)
    phi_h = induced_map(data.phi, hgf, hg)
    delta_h = induced_map(data.delta, hg, hf)
    exact = (image_basis(psi_h) == kernel_basis(phi_h),
             image_basis(phi_h) == kernel_basis(delta_h),
             image_basis(delta_h) == kernel_basis(psi_h))
    return SequenceReport(exact, (hf.dim, hgf.dim, hg.dim))


def fourth_sequence_exactness(data: OctahedralData) -> bool:
    """Exactness of H(cone f) -> H(cone gf) -> H(cone g) -> H(cone f){1} at every spot."""
    return fourth_sequence_report(data).ok

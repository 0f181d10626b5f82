"""Bipartite Hilbert-space primitives.

Dimensions, product vectors, Hermitian operators, partial transpose,
invertible product (SL x SL) transformations and the PPT test.  The index
convention used everywhere in this library is subsystem-a major: the
composite row index is I = i*nb + j.
"""

from __future__ import annotations

import dataclasses

import numpy as np

from .errors import DimensionMismatch, SingularTransform

HERMITICITY_TOL = 1e-9
PHASE_ANCHOR_TOL = 1e-12


@dataclasses.dataclass(frozen=True)
class Dims:
    """Dimensions (na, nb) of the two factors, with n = na*nb."""

    na: int
    nb: int

    def __post_init__(self):
        if self.na < 2 or self.nb < 2:
            raise ValueError("both factor dimensions must be at least 2")

    @property
    def n(self) -> int:
        return self.na * self.nb


def _canonical_phase(v: np.ndarray) -> np.ndarray:
    """Rotate the global phase so the first component with modulus above
    the anchor threshold is real and positive."""
    for x in v:
        if abs(x) > PHASE_ANCHOR_TOL:
            return v * (x.conjugate() / abs(x))
    raise ValueError("cannot phase-fix the zero vector")


@dataclasses.dataclass(frozen=True)
class ProductVector:
    """A pair of unit vectors (phi, chi), one per factor.

    Vectors are normalized and phase-fixed to a canonical representative
    on construction, so (a*phi, b*chi) compares equal to (phi, chi) for
    any nonzero complex a, b.
    """

    phi: np.ndarray
    chi: np.ndarray

    def __init__(self, phi, chi):
        phi = np.asarray(phi, dtype=complex).ravel()
        chi = np.asarray(chi, dtype=complex).ravel()
        nphi = np.linalg.norm(phi)
        nchi = np.linalg.norm(chi)
        if nphi == 0 or nchi == 0:
            raise ValueError("product vector factors must be nonzero")
        phi = _canonical_phase(phi / nphi)
        chi = _canonical_phase(chi / nchi)
        phi.setflags(write=False)
        chi.setflags(write=False)
        object.__setattr__(self, "phi", phi)
        object.__setattr__(self, "chi", chi)

    @property
    def dims(self) -> Dims:
        return Dims(len(self.phi), len(self.chi))

    def fidelity(self, other: "ProductVector") -> float:
        """|<phi1,phi2>|^2 * |<chi1,chi2>|^2, equal to 1 iff same zero."""
        return (abs(np.vdot(self.phi, other.phi)) ** 2
                * abs(np.vdot(self.chi, other.chi)) ** 2)

    def geodesic_distance(self, other: "ProductVector") -> float:
        """Distance on the product of projective spheres."""
        ca = min(abs(np.vdot(self.phi, other.phi)), 1.0)
        cb = min(abs(np.vdot(self.chi, other.chi)), 1.0)
        return float(np.hypot(np.arccos(ca), np.arccos(cb)))

    def partial_conjugate(self) -> "ProductVector":
        return ProductVector(self.phi, self.chi.conjugate())

    def __eq__(self, other):
        if not isinstance(other, ProductVector):
            return NotImplemented
        return (np.array_equal(self.phi, other.phi)
                and np.array_equal(self.chi, other.chi))

    def __hash__(self):
        return hash((self.phi.tobytes(), self.chi.tobytes()))


@dataclasses.dataclass(frozen=True)
class HermitianOp:
    """An N x N Hermitian matrix on the composite space.

    Entries are symmetrized on construction; a deviation from Hermiticity
    above 1e-9 is treated as a caller bug and raises.
    """

    dims: Dims
    entries: np.ndarray

    def __init__(self, dims: Dims, entries):
        entries = np.asarray(entries, dtype=complex)
        n = dims.n
        if entries.shape != (n, n):
            raise DimensionMismatch(
                f"expected {(n, n)} matrix, got {entries.shape}")
        dev = np.linalg.norm(entries - entries.conj().T)
        scale = max(np.linalg.norm(entries), 1.0)
        if dev > HERMITICITY_TOL * scale:
            raise ValueError(
                f"matrix is not Hermitian (deviation {dev:.2e})")
        entries = 0.5 * (entries + entries.conj().T)
        entries.setflags(write=False)
        object.__setattr__(self, "dims", dims)
        object.__setattr__(self, "entries", entries)

    @classmethod
    def identity(cls, dims: Dims) -> "HermitianOp":
        return cls(dims, np.eye(dims.n))

    @classmethod
    def maximally_mixed(cls, dims: Dims) -> "HermitianOp":
        return cls(dims, np.eye(dims.n) / dims.n)

    def as4(self) -> np.ndarray:
        """Entries reshaped to (na, nb, na, nb), indices (i, j, k, l)."""
        na, nb = self.dims.na, self.dims.nb
        return self.entries.reshape(na, nb, na, nb)

    @property
    def trace(self) -> float:
        return float(np.trace(self.entries).real)

    def norm(self) -> float:
        return float(np.linalg.norm(self.entries))

    def eigenvalues(self) -> np.ndarray:
        return np.linalg.eigvalsh(self.entries)

    def min_eigenvalue(self) -> float:
        return float(self.eigenvalues()[0])

    def normalized(self) -> "HermitianOp":
        """Unit-trace rescaling."""
        tr = self.trace
        if abs(tr) < 1e-14:
            raise ValueError("cannot trace-normalize a traceless operator")
        return HermitianOp(self.dims, self.entries / tr)

    def __add__(self, other):
        self._check(other)
        return HermitianOp(self.dims, self.entries + other.entries)

    def __sub__(self, other):
        self._check(other)
        return HermitianOp(self.dims, self.entries - other.entries)

    def __mul__(self, scalar):
        return HermitianOp(self.dims, self.entries * float(scalar))

    __rmul__ = __mul__

    def _check(self, other):
        if self.dims != other.dims:
            raise DimensionMismatch("operator dimensions differ")


def kron_product(p: ProductVector) -> np.ndarray:
    """The composite vector phi (x) chi, component I = i*nb + j."""
    return np.kron(p.phi, p.chi)


def pure_product_state(p: ProductVector) -> HermitianOp:
    psi = kron_product(p)
    return HermitianOp(p.dims, np.outer(psi, psi.conjugate()))


def partial_transpose(a: HermitianOp) -> HermitianOp:
    """(A^P)_{ij;kl} = A_{il;kj}: transpose of the second factor."""
    n = a.dims.n
    pt = a.as4().transpose(0, 3, 2, 1).reshape(n, n)
    return HermitianOp(a.dims, pt)


def is_ppt(a: HermitianOp, tol: float = 1e-10) -> bool:
    """True iff the partial transpose has no eigenvalue below -tol."""
    return partial_transpose(a).min_eigenvalue() >= -tol


def sl_transform(a: HermitianOp, va: np.ndarray, vb: np.ndarray) -> HermitianOp:
    """Conjugation by the invertible product matrix va (x) vb.

    The zeros transform contragrediently: (phi, chi) is a zero of the
    result iff (va^dag phi, vb^dag chi), normalized, is a zero of a.
    """
    va = np.asarray(va, dtype=complex)
    vb = np.asarray(vb, dtype=complex)
    if va.shape != (a.dims.na,) * 2 or vb.shape != (a.dims.nb,) * 2:
        raise DimensionMismatch("transform factors must match the dims")
    for m in (va, vb):
        sv = np.linalg.svd(m, compute_uv=False)
        if sv[-1] <= 1e-12 * sv[0]:
            raise SingularTransform("transform factor is numerically singular")
    v = np.kron(va, vb)
    return HermitianOp(a.dims, v @ a.entries @ v.conj().T)


def random_product_vector(dims: Dims, rng: np.random.Generator) -> ProductVector:
    """Haar-uniform product vector (factors independently uniform)."""
    phi = rng.standard_normal(dims.na) + 1j * rng.standard_normal(dims.na)
    chi = rng.standard_normal(dims.nb) + 1j * rng.standard_normal(dims.nb)
    return ProductVector(phi, chi)


def random_hermitian(dims: Dims, rng: np.random.Generator) -> HermitianOp:
    g = rng.standard_normal((dims.n, dims.n)) \
        + 1j * rng.standard_normal((dims.n, dims.n))
    return HermitianOp(dims, 0.5 * (g + g.conj().T))

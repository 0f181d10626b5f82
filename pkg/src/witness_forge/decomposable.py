"""Decomposable witnesses: rho + (partial transpose of sigma).

A decomposable witness is built from two positive semidefinite operators,
one used directly and one partially transposed; it is nonnegative on all
PPT states and therefore useless for detecting PPT entanglement.  Given a
prescribed zero set, maximal-rank decomposable witnesses with those zeros
are constructed from projectors onto the orthogonal complements of the
zero vectors and their partial conjugates; the overlap of the two operator
subspaces controls the dimension of the resulting family and the partial
decomposition of an arbitrary witness over a zero set.
"""

from __future__ import annotations

import dataclasses
from typing import List, Optional, Sequence, Tuple

import numpy as np
import scipy.optimize

from .constraints import hermitian_to_real, real_to_hermitian
from .errors import ConvergenceFailure, TooManyZeros
from .hilbert import (Dims, HermitianOp, ProductVector, kron_product,
                      partial_transpose)


def pure_state_witness(psi: np.ndarray, dims: Dims) -> HermitianOp:
    """The projector onto psi as a witness; zeros are the product vectors
    orthogonal to psi."""
    psi = np.asarray(psi, dtype=complex)
    psi = psi / np.linalg.norm(psi)
    return HermitianOp(dims, np.outer(psi, psi.conj()))


def _pt_array(m: np.ndarray, dims: Dims) -> np.ndarray:
    return m.reshape(dims.na, dims.nb, dims.na, dims.nb) \
            .transpose(0, 3, 2, 1).reshape(dims.n, dims.n)


def _complement_projector(vectors: np.ndarray) -> np.ndarray:
    """Projector onto the orthogonal complement of the column span."""
    n = vectors.shape[0]
    if vectors.shape[1] == 0:
        return np.eye(n, dtype=complex)
    q, _ = np.linalg.qr(vectors)
    return np.eye(n, dtype=complex) - q @ q.conj().T


@dataclasses.dataclass(frozen=True)
class DecompWitness:
    """rho + sigma^P with both parts positive semidefinite."""

    rho: HermitianOp
    sigma: HermitianOp

    @property
    def witness(self) -> HermitianOp:
        return self.rho + partial_transpose(self.sigma)


def zero_residuals(rho: HermitianOp, sigma: HermitianOp,
                   zs: Sequence[ProductVector]) -> List[Tuple[float, float]]:
    """Per-zero residuals (|rho (phi x chi)|, |sigma (phi x chi*)|).

    Both must vanish for (phi, chi) to be a zero of rho + sigma^P.
    """
    out = []
    for z in zs:
        v = kron_product(z)
        vt = kron_product(z.partial_conjugate())
        out.append((float(np.linalg.norm(rho.entries @ v)),
                    float(np.linalg.norm(sigma.entries @ vt))))
    return out


def with_prescribed_zeros(zs: Sequence[ProductVector],
                          rng: Optional[np.random.Generator] = None
                          ) -> DecompWitness:
    """Maximal-rank decomposable witness vanishing on the given zeros.

    rho is supported on the complement of the zero vectors, sigma on the
    complement of their partial conjugates; random full-rank factors
    saturate both ranks at N - k generically.
    """
    if not zs:
        raise TooManyZeros("need at least one prescribed zero")
    if rng is None:
        rng = np.random.default_rng(0)
    dims = zs[0].dims
    n = dims.n
    z = np.array([kron_product(p) for p in zs]).T
    zt = np.array([kron_product(p.partial_conjugate()) for p in zs]).T
    p = _complement_projector(z)
    pt = _complement_projector(zt)
    d1 = int(round(np.real(np.trace(p))))
    d2 = int(round(np.real(np.trace(pt))))
    if d1 == 0 or d2 == 0:
        raise TooManyZeros(
            f"{len(zs)} zeros leave no room (d1={d1}, d2={d2})")
    x = rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))
    y = rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))
    u = p @ x
    v = pt @ y
    rho = HermitianOp(dims, u @ u.conj().T)
    sigma = HermitianOp(dims, v @ v.conj().T)
    return DecompWitness(rho=rho, sigma=sigma)


def _super_matrix(dims: Dims, conjugation) -> np.ndarray:
    """Real matrix of a Hermiticity-preserving super-operator in the
    orthonormal Hermitian basis."""
    n2 = dims.n ** 2
    cols = np.empty((n2, n2))
    e = np.zeros(n2)
    for a in range(n2):
        e[a] = 1.0
        cols[:, a] = hermitian_to_real(conjugation(real_to_hermitian(e)))
        e[a] = 0.0
    return cols


def overlap_projector(zs: Sequence[ProductVector]):
    """Super-projectors (P, Pt, O) on the real space of Hermitian operators.

    P maps X -> P X P with P the complement projector of the zero vectors;
    Pt maps X -> (Ptilde X^P Ptilde)^P with Ptilde from the partial
    conjugates; O projects onto the overlap of their ranges (the
    eigenvalue-2 eigenspace of P + Pt).
    """
    dims = zs[0].dims
    z = np.array([kron_product(p) for p in zs]).T
    zt = np.array([kron_product(p.partial_conjugate()) for p in zs]).T
    p = _complement_projector(z)
    pt = _complement_projector(zt)
    sup_p = _super_matrix(dims, lambda x: p @ x @ p)
    sup_pt = _super_matrix(
        dims, lambda x: _pt_array(pt @ _pt_array(x, dims) @ pt, dims))
    evals, evecs = np.linalg.eigh(sup_p + sup_pt)
    sel = evecs[:, evals > 2.0 - 1e-8]
    o = sel @ sel.T
    return sup_p, sup_pt, o


def decomposable_dimension(zs: Sequence[ProductVector]) -> int:
    """Dimension d_D = d1^2 + d2^2 - rank(O) of the decomposable family
    with the given zeros."""
    dims = zs[0].dims
    z = np.array([kron_product(p) for p in zs]).T
    zt = np.array([kron_product(p.partial_conjugate()) for p in zs]).T
    d1 = dims.n - np.linalg.matrix_rank(z, tol=1e-10)
    d2 = dims.n - np.linalg.matrix_rank(zt, tol=1e-10)
    _, _, o = overlap_projector(zs)
    rank_o = int(round(np.real(np.trace(o))))
    return d1 ** 2 + d2 ** 2 - rank_o


@dataclasses.dataclass(frozen=True)
class PartialDecomposition:
    """Unique split of the overlap-free part of a witness."""

    rho1: HermitianOp
    sigma1: HermitianOp
    remainder: HermitianOp
    rho1_min_eig: float
    sigma1_min_eig: float
    residual: float


def partial_decompose(omega: HermitianOp,
                      zs: Sequence[ProductVector]) -> PartialDecomposition:
    """Split omega - O(omega) uniquely into a rho part and a sigma^P part.

    The remainder O(omega) lies in the overlap of the two operator
    subspaces and is returned undecomposed; indefiniteness of rho1 or
    sigma1 (reported, not raised) signals that omega is not visibly
    decomposable over this zero set.
    """
    dims = omega.dims
    sup_p, sup_pt, o = overlap_projector(zs)
    p1 = sup_p - o
    p2 = sup_pt - o
    evals1, evecs1 = np.linalg.eigh(p1)
    evals2, evecs2 = np.linalg.eigh(p2)
    q1 = evecs1[:, evals1 > 0.5]
    q2 = evecs2[:, evals2 > 0.5]
    v = hermitian_to_real(omega.entries)
    rem = o @ v
    target = v - rem
    basis = np.hstack([q1, q2])
    coef, *_ = np.linalg.lstsq(basis, target, rcond=None)
    fit = basis @ coef
    residual = float(np.linalg.norm(fit - target))
    rho1 = HermitianOp(dims, real_to_hermitian(q1 @ coef[:q1.shape[1]]))
    sig1_pt = real_to_hermitian(q2 @ coef[q1.shape[1]:])
    sigma1 = HermitianOp(dims, _pt_array(sig1_pt, dims))
    remainder = HermitianOp(dims, real_to_hermitian(rem))
    return PartialDecomposition(
        rho1=rho1, sigma1=sigma1, remainder=remainder,
        rho1_min_eig=rho1.min_eigenvalue(),
        sigma1_min_eig=sigma1.min_eigenvalue(),
        residual=residual)


def _dependency_residual(params: np.ndarray, dims: Dims, count: int):
    n = dims.n
    na, nb = dims.na, dims.nb
    per = 2 * (na + nb)
    cols = np.empty((n, count), dtype=complex)
    colst = np.empty((n, count), dtype=complex)
    for i in range(count):
        chunk = params[i * per:(i + 1) * per]
        phi = chunk[:na] + 1j * chunk[na:2 * na]
        chi = chunk[2 * na:2 * na + nb] + 1j * chunk[2 * na + nb:]
        v = np.kron(phi, chi)
        vt = np.kron(phi, chi.conj())
        nv = np.linalg.norm(v)
        if nv < 1e-12:
            return np.array([1.0, 1.0])
        cols[:, i] = v / nv
        colst[:, i] = vt / nv
    s1 = np.linalg.svd(cols, compute_uv=False)[-1]
    s2 = np.linalg.svd(colst, compute_uv=False)[-1]
    return np.array([s1, s2])


def dependent_product_vectors(count: int, dims: Dims, rng_seed: int = 0,
                              max_starts: int = 50,
                              tol: float = 1e-8) -> List[ProductVector]:
    """Product vectors that are linearly dependent together with their
    partial conjugates.

    Minimizes the pair of smallest singular values of the two kron
    matrices; both must drop below tol, and the vectors must stay pairwise
    distinct (parallel pairs are a degenerate way to force dependency).
    """
    if count > dims.n:
        raise ValueError("count exceeds the space dimension")
    per = 2 * (dims.na + dims.nb)
    streams = np.random.SeedSequence((rng_seed, 23)).spawn(max_starts)
    for ss in streams:
        rng = np.random.default_rng(ss)
        x0 = rng.standard_normal(count * per)
        sol = scipy.optimize.least_squares(
            _dependency_residual, x0, args=(dims, count),
            method="trf", xtol=1e-15, ftol=1e-15, gtol=1e-15)
        if np.any(sol.fun > tol):
            continue
        pts = []
        for i in range(count):
            chunk = sol.x[i * per:(i + 1) * per]
            phi = chunk[:dims.na] + 1j * chunk[dims.na:2 * dims.na]
            chi = chunk[2 * dims.na:2 * dims.na + dims.nb] \
                + 1j * chunk[2 * dims.na + dims.nb:]
            pts.append(ProductVector(phi, chi))
        distinct = all(pts[i].fidelity(pts[j]) < 1.0 - 1e-6
                       for i in range(count) for j in range(i + 1, count))
        if distinct:
            return pts
    raise ConvergenceFailure(
        f"no dependent configuration of {count} distinct product vectors "
        f"found in {max_starts} starts")

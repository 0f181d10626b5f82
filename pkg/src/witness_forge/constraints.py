"""Linear constraints a zero imposes on the space of Hermitian operators.

Each zero (phi0, chi0) of a witness forces its form, gradient, Hessian
kernel directions, and (for quartic zeros) third-order terms to vanish.
Every such condition is linear in the witness, Tr(E W) = 0 for a Hermitian
operator E.  Stacking the operators E as real row vectors in a fixed
Hermitian basis gives a real constraint matrix whose kernel is the face of
the witness cone containing W; the witness is extremal exactly when that
kernel is one-dimensional.
"""

from __future__ import annotations

import dataclasses
import itertools
from typing import List, Optional, Sequence, Tuple

import numpy as np

from .biquadratic import Zero, tangent_frame
from .errors import DimensionMismatch
from .hilbert import Dims, HermitianOp, ProductVector

EPS_SVD = 1e-8


def hermitian_to_real(m: np.ndarray) -> np.ndarray:
    """Coordinates of a Hermitian d x d matrix in the orthonormal real basis.

    Basis: the d diagonal matrix units, then for each i < j the pair
    (e_ij + e_ji)/sqrt(2) and (i e_ij - i e_ji)/sqrt(2).  The map is an
    isometry from the Hilbert-Schmidt inner product to the Euclidean one.
    """
    d = m.shape[0]
    iu, ju = np.triu_indices(d, k=1)
    out = np.empty(d * d)
    out[:d] = np.real(np.diagonal(m))
    out[d:d + len(iu)] = np.sqrt(2.0) * np.real(m[iu, ju])
    out[d + len(iu):] = np.sqrt(2.0) * np.imag(m[iu, ju])
    return out


def real_to_hermitian(v: np.ndarray) -> np.ndarray:
    """Inverse of hermitian_to_real."""
    d = int(round(np.sqrt(len(v))))
    if d * d != len(v):
        raise DimensionMismatch("coordinate vector length is not a square")
    iu, ju = np.triu_indices(d, k=1)
    m = np.zeros((d, d), dtype=complex)
    np.fill_diagonal(m, v[:d])
    re = v[d:d + len(iu)] / np.sqrt(2.0)
    im = v[d + len(iu):] / np.sqrt(2.0)
    m[iu, ju] = re + 1j * im
    m[ju, iu] = re - 1j * im
    return m


def _sym(a: np.ndarray) -> np.ndarray:
    return a + a.conj().T


def zero_order_rows(p: ProductVector) -> List[np.ndarray]:
    """The single constraint f(phi0, chi0) = 0."""
    pa = np.outer(p.phi, p.phi.conj())
    pb = np.outer(p.chi, p.chi.conj())
    return [np.kron(pa, pb)]


def first_order_rows(zero_or_point, frame=None) -> List[np.ndarray]:
    """Gradient constraints: one row per real tangent coordinate.

    Accepts either a classified Zero (its stored frame is used) or a bare
    product vector with an explicit tangent frame.
    """
    if frame is None:
        frame = zero_or_point.frame
        p = zero_or_point.point
    else:
        p = zero_or_point
    pa = np.outer(p.phi, p.phi.conj())
    pb = np.outer(p.chi, p.chi.conj())
    rows = []
    for m in range(frame.j0.shape[1]):
        rows.append(np.kron(_sym(np.outer(frame.j0[:, m], p.phi.conj())), pb))
    for n in range(frame.k0.shape[1]):
        rows.append(np.kron(pa, _sym(np.outer(frame.k0[:, n], p.chi.conj()))))
    return rows


def second_order_rows(zero: Zero) -> List[np.ndarray]:
    """Hessian-kernel constraints: rows F^1_im and F^2_in per kernel vector.

    A kernel direction z = (x, y) gives displacement pair (xi, zeta) and
    2 * (na + nb - 2) rows stating that the mixed second derivatives of the
    form along z vanish.
    """
    frame = zero.frame
    p = zero.point
    na2 = frame.j0.shape[1]
    pa = np.outer(p.phi, p.phi.conj())
    pb = np.outer(p.chi, p.chi.conj())
    rows = []
    for z in zero.hessian_kernel:
        x, y = z[:na2], z[na2:]
        xi = frame.j0 @ x
        zeta = frame.k0 @ y
        for m in range(na2):
            jm = frame.j0[:, m]
            rows.append(
                np.kron(_sym(np.outer(xi, jm.conj())), pb)
                + np.kron(_sym(np.outer(p.phi, jm.conj())),
                          _sym(np.outer(zeta, p.chi.conj()))))
        for n in range(frame.k0.shape[1]):
            kn = frame.k0[:, n]
            rows.append(
                np.kron(pa, _sym(np.outer(zeta, kn.conj())))
                + np.kron(_sym(np.outer(xi, p.phi.conj())),
                          _sym(np.outer(p.chi, kn.conj()))))
    return rows


def third_order_rows(zero: Zero) -> List[np.ndarray]:
    """Cubic constraints over multisets of Hessian kernel directions.

    For kernel vectors z_l, z_m, z_n (l <= m <= n) the third directional
    derivative of the form must vanish; the row is the symmetrized average
    of the raw operator over permutations of (l, m, n).
    """
    frame = zero.frame
    p = zero.point
    na2 = frame.j0.shape[1]
    k = len(zero.hessian_kernel)
    pairs = []
    for z in zero.hessian_kernel:
        pairs.append((frame.j0 @ z[:na2], frame.k0 @ z[na2:]))

    def raw(l, m, n):
        xi_l, zeta_l = pairs[l]
        xi_m, zeta_m = pairs[m]
        _, zeta_n = pairs[n]
        return (np.kron(_sym(np.outer(xi_m, p.phi.conj())),
                        _sym(np.outer(zeta_n, zeta_l.conj())))
                + np.kron(_sym(np.outer(xi_m, xi_l.conj())),
                          _sym(np.outer(zeta_n, p.chi.conj())))) * 0.5

    rows = []
    for combo in itertools.combinations_with_replacement(range(k), 3):
        perms = set(itertools.permutations(combo))
        e = sum(raw(l, m, n) for (l, m, n) in perms) / len(perms)
        rows.append(e)
    return rows


def constraint_rows_for_zero(zero: Zero,
                             quartic: bool = True) -> List[np.ndarray]:
    """All constraint operators contributed by one zero.

    Quadratic zeros contribute 1 + 2*(na + nb) - 4 rows (value plus
    gradient); quartic zeros additionally contribute the Hessian-kernel
    and cubic rows when quartic is True.
    """
    rows = zero_order_rows(zero.point)
    rows += first_order_rows(zero)
    if quartic and zero.is_quartic:
        rows += second_order_rows(zero)
        rows += third_order_rows(zero)
    return rows


@dataclasses.dataclass(frozen=True)
class RankReport:
    """Numerical rank of a constraint matrix with its spectral evidence."""

    matrix: np.ndarray
    singular_values: np.ndarray
    rank: int
    gap: float

    @property
    def kernel_dim(self) -> int:
        return self.matrix.shape[1] - self.rank

    def kernel_basis(self) -> np.ndarray:
        """Orthonormal kernel basis, columns in real Hermitian coordinates."""
        _, _, vt = np.linalg.svd(self.matrix, full_matrices=True)
        return vt[self.rank:].T


def stack_rows(dims: Dims, rows: Sequence[np.ndarray]) -> np.ndarray:
    """Real constraint matrix: one vectorized Hermitian operator per row."""
    n2 = dims.n * dims.n
    if not rows:
        return np.zeros((0, n2))
    return np.array([hermitian_to_real(r) for r in rows])


def numerical_rank(matrix: np.ndarray,
                   eps_svd: float = EPS_SVD) -> RankReport:
    """Rank by SVD with a relative cutoff, reporting the spectral gap.

    The gap is the ratio of the smallest retained to the largest dropped
    singular value (inf when nothing is dropped).
    """
    if matrix.shape[0] == 0:
        return RankReport(matrix, np.array([]), 0, np.inf)
    sv = np.linalg.svd(matrix, compute_uv=False)
    cut = eps_svd * sv[0] if len(sv) else 0.0
    rank = int(np.sum(sv > cut))
    if rank == 0:
        gap = np.inf if sv[0] == 0 else 0.0
    elif rank == len(sv) or sv[rank] == 0.0:
        gap = np.inf
    else:
        gap = float(sv[rank - 1] / sv[rank])
    return RankReport(matrix, sv, rank, gap)


def constraint_matrix(omega_dims: Dims, zeros: Sequence[Zero],
                      quartic: bool = True) -> np.ndarray:
    """Stack the rows of every zero into one real matrix."""
    rows: List[np.ndarray] = []
    for z in zeros:
        rows += constraint_rows_for_zero(z, quartic=quartic)
    return stack_rows(omega_dims, rows)


def product_vector_rank(dims: Dims, points: Sequence[ProductVector],
                        rng: Optional[np.random.Generator] = None,
                        quartic: bool = False,
                        eps_svd: float = EPS_SVD) -> RankReport:
    """Rank of value+gradient constraints from arbitrary product vectors.

    Useful for generic product vectors that need not be zeros of any
    particular witness; only zeroth- and first-order rows make sense there.
    """
    rows: List[np.ndarray] = []
    for p in points:
        frame = tangent_frame(p, rng)
        rows += zero_order_rows(p)
        rows += first_order_rows(p, frame)
    return numerical_rank(stack_rows(dims, rows), eps_svd)

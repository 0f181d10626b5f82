"""Witness <-> positive-map correspondence and structural approximation.

A Hermitian operator A on the tensor product defines linear maps between
the factor operator spaces by contracting one side of A.  Mixing a witness
with the maximally mixed state until it becomes positive semidefinite
gives its structural physical approximation (SPA); comparing the mixing
parameters of a witness and of its partial transpose decides which SPA is
a PPT state.
"""

from __future__ import annotations

import dataclasses

import numpy as np

from .errors import DimensionMismatch
from .hilbert import HermitianOp, is_ppt, partial_transpose

SPA_TIE_TOL = 1e-10


def apply_map(a: HermitianOp, x: np.ndarray) -> np.ndarray:
    """The map L_A: Y_{jl} = sum_{ik} A_{ij;kl} X_{ki} (na x na -> nb x nb)."""
    x = np.asarray(x)
    if x.shape != (a.dims.na, a.dims.na):
        raise DimensionMismatch(
            f"expected {a.dims.na}x{a.dims.na} input, got {x.shape}")
    return np.einsum("ijkl,ki->jl", a.as4(), x)


def apply_transpose_map(a: HermitianOp, y: np.ndarray) -> np.ndarray:
    """The transposed map L_A^T: X_{ik} = sum_{jl} A_{ij;kl} Y_{lj}."""
    y = np.asarray(y)
    if y.shape != (a.dims.nb, a.dims.nb):
        raise DimensionMismatch(
            f"expected {a.dims.nb}x{a.dims.nb} input, got {y.shape}")
    return np.einsum("ijkl,lj->ik", a.as4(), y)


def _mix_parameter(min_eig: float, n: int) -> float:
    """Smallest p making (1-p)*W + (p/N)*I positive, for trace-1 W."""
    if min_eig >= 0.0:
        return 0.0
    return -n * min_eig / (1.0 - n * min_eig)


@dataclasses.dataclass(frozen=True)
class SpaResult:
    """Mixing parameters and PPT status of the two approximations."""

    p1: float
    p2: float
    lambda1: float
    lambda2: float
    spa_of_omega_is_ppt: bool
    spa_of_pt_is_ppt: bool


def spa_state(omega: HermitianOp, p: float) -> HermitianOp:
    """Sigma(p) = (1-p) * Omega + (p/N) * I for trace-normalized Omega."""
    omega = (1.0 / omega.trace) * omega
    return (1.0 - p) * omega + (p / omega.dims.n) * HermitianOp.identity(omega.dims)


def spa(omega: HermitianOp) -> SpaResult:
    """Structural approximation parameters of a witness and of its partial
    transpose.

    p1 (p2) is the smallest mixing weight making the witness (its partial
    transpose) positive semidefinite; the approximation of the witness is
    PPT exactly when p1 >= p2, and for extremal witnesses exactly one of
    the two approximations is PPT apart from ties within 1e-10.
    """
    omega = (1.0 / omega.trace) * omega
    n = omega.dims.n
    lam1 = omega.min_eigenvalue()
    lam2 = partial_transpose(omega).min_eigenvalue()
    p1 = _mix_parameter(lam1, n)
    p2 = _mix_parameter(lam2, n)
    if abs(p1 - p2) <= SPA_TIE_TOL:
        return SpaResult(p1, p2, lam1, lam2, True, True)
    return SpaResult(p1, p2, lam1, lam2, p1 >= p2, p2 >= p1)


def separability_threshold(omega: HermitianOp):
    """Placeholder for the exact separability onset of the mixing family.

    Deciding where (1-p)*Omega + (p/N)*I becomes separable requires a
    separability oracle, which this library does not provide.
    """
    raise NotImplementedError(
        "the separability onset requires a separability oracle")

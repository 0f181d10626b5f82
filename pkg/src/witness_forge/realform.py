"""Embedding complex witnesses into real witnesses on doubled dimensions.

A complex vector phi in C^na is encoded as a real vector x in R^{2na} via
phi = J x with J = (I, iI).  Pulling a witness back through J (x) K gives
a real symmetric matrix W on the doubled tensor product whose biquadratic
form over real vectors reproduces the complex form.  W is invariant under
the real partial transpose and has the block structure (U, -V; V, U) with
U symmetric and V antisymmetric.
"""

from __future__ import annotations

import dataclasses

import numpy as np

from .hilbert import Dims, HermitianOp


@dataclasses.dataclass(frozen=True)
class RealWitness:
    """Real symmetric witness on R^{2na} (x) R^{2nb}."""

    matrix: np.ndarray
    source_dims: Dims

    @property
    def dims(self) -> Dims:
        """Dimensions of the real tensor factors."""
        return Dims(2 * self.source_dims.na, 2 * self.source_dims.nb)

    def form(self, x: np.ndarray, y: np.ndarray) -> float:
        """g_W(x, y) on real factor vectors."""
        v = np.kron(np.asarray(x, dtype=float), np.asarray(y, dtype=float))
        return float(v @ self.matrix @ v)

    def blocks(self):
        """The (U, V) blocks of W = (U, -V; V, U)."""
        m = 2 * self.source_dims.na * self.source_dims.nb
        w = self.matrix.reshape(2, m, 2, m)
        return w[0, :, 0, :], w[1, :, 0, :]


def _embedding(d: int) -> np.ndarray:
    """J = (I_d, i I_d), mapping R^{2d} onto C^d."""
    return np.hstack([np.eye(d), 1j * np.eye(d)])


def real_partial_transpose(m: np.ndarray, dims: Dims) -> np.ndarray:
    """Partial transpose over the doubled second factor (2nb blocks)."""
    a, b = 2 * dims.na, 2 * dims.nb
    return m.reshape(a, b, a, b).transpose(0, 3, 2, 1).reshape(a * b, a * b)


def to_real(omega: HermitianOp) -> RealWitness:
    """The real witness W = Re(Z + Z^P)/2 with Z the pullback of omega.

    The biquadratic form of W over real vectors equals the form of omega
    over the encoded complex vectors.
    """
    dims = omega.dims
    jk = np.kron(_embedding(dims.na), _embedding(dims.nb))
    z = jk.conj().T @ omega.entries @ jk
    w = 0.5 * np.real(z + real_partial_transpose(z, dims))
    w = 0.5 * (w + w.T)
    return RealWitness(matrix=w, source_dims=dims)


def encode(v: np.ndarray) -> np.ndarray:
    """Real coordinates x with v = J x."""
    v = np.asarray(v, dtype=complex)
    return np.concatenate([v.real, v.imag])


def pure_state_split(psi: np.ndarray, dims: Dims):
    """Split the real form of a pure state into two nonnegative parts.

    With p the pullback of psi, W_r is built from (Re p)(Re p)^T and W_i
    from (Im p)(Im p)^T; their forms are the squares Re(z)^2 and Im(z)^2
    of the complex amplitude, and they sum to the real form of the
    projector onto psi.  For entangled psi the two parts differ, so the
    projector is not extremal among real witnesses.
    """
    psi = np.asarray(psi, dtype=complex)
    psi = psi / np.linalg.norm(psi)
    jk = np.kron(_embedding(dims.na), _embedding(dims.nb))
    p = jk.conj().T @ psi

    def half(vec):
        z = np.outer(vec, vec)
        w = 0.5 * (z + real_partial_transpose(z, dims))
        return RealWitness(matrix=0.5 * (w + w.T), source_dims=dims)

    return half(np.real(p)), half(np.imag(p))

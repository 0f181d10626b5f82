"""The biquadratic form of a witness and its local calculus at zeros.

For a Hermitian operator W the form is f_W(phi, chi) =
(phi (x) chi)^dag W (phi (x) chi).  Around a candidate zero (phi0, chi0)
we parametrize phi = phi0 + J0 x, chi = chi0 + K0 y with real vectors x, y
and tangent matrices J0, K0 whose columns are orthogonal to phi0 and chi0.
In these coordinates f is a real polynomial, quadratic in x and in y, and
its gradient and Hessian at the origin classify the zero as quadratic
(positive definite Hessian) or quartic (singular Hessian).
"""

from __future__ import annotations

import dataclasses
from typing import Optional

import numpy as np

from .errors import DimensionMismatch, NegativeHessian, NotAZero
from .hilbert import Dims, HermitianOp, ProductVector, kron_product

EPS_ZERO = 1e-9
EPS_GRAD = 1e-7
EPS_HESS_REL = 1e-8


def hessian_cutoff(hess_or_max) -> float:
    """Scale-aware threshold below which Hessian eigenvalues count as zero."""
    if isinstance(hess_or_max, np.ndarray):
        top = float(np.max(np.abs(np.linalg.eigvalsh(hess_or_max))))
    else:
        top = float(hess_or_max)
    return EPS_HESS_REL * max(top, 1.0)


def eval_form(omega: HermitianOp, p: ProductVector) -> float:
    """f_omega(phi, chi); the imaginary residue is discarded."""
    if p.dims != omega.dims:
        raise DimensionMismatch("product vector does not match operator dims")
    psi = kron_product(p)
    return float(np.real(np.vdot(psi, omega.entries @ psi)))


def _completion(v0: np.ndarray, rng: np.random.Generator) -> np.ndarray:
    """Orthonormal completion of the unit vector v0, columns spanning v0-perp."""
    d = len(v0)
    m = np.empty((d, d), dtype=complex)
    m[:, 0] = v0
    m[:, 1:] = rng.standard_normal((d, d - 1)) \
        + 1j * rng.standard_normal((d, d - 1))
    q, _ = np.linalg.qr(m)
    # QR may flip the phase of the first column; the rest still spans v0-perp.
    return q[:, 1:]


@dataclasses.dataclass(frozen=True)
class TangentFrame:
    """Real tangent parametrization at a base product vector.

    j0 has 2*na-2 columns j_{2l-1} = phi_l, j_{2l} = i*phi_l built from an
    orthonormal completion phi_1..phi_{na-1} of phi0, and similarly k0.
    Only ranks and kernels computed from a frame are contractual; the raw
    rows depend on the random completion.
    """

    base: ProductVector
    j0: np.ndarray
    k0: np.ndarray

    @property
    def size(self) -> int:
        """Number of real tangent coordinates 2*(na + nb - 2)."""
        return self.j0.shape[1] + self.k0.shape[1]


def tangent_frame(p: ProductVector,
                  rng: Optional[np.random.Generator] = None) -> TangentFrame:
    """Build the real tangent frame at p.

    The completion basis is drawn from rng; the default is a fixed seed so
    repeated calls on the same point give identical frames.
    """
    if rng is None:
        rng = np.random.default_rng(0)
    na, nb = p.dims.na, p.dims.nb

    def interleave(comp):
        cols = np.empty((comp.shape[0], 2 * comp.shape[1]), dtype=complex)
        cols[:, 0::2] = comp
        cols[:, 1::2] = 1j * comp
        return cols

    j0 = interleave(_completion(p.phi, rng))
    k0 = interleave(_completion(p.chi, rng))
    j0.setflags(write=False)
    k0.setflags(write=False)
    return TangentFrame(p, j0, k0)


def gradient(omega: HermitianOp, frame: TangentFrame) -> np.ndarray:
    """Gradient of f at the frame base, concatenated (d/dx, d/dy)."""
    phi0, chi0 = frame.base.phi, frame.base.chi
    psi0 = np.kron(phi0, chi0)
    w = omega.entries @ psi0
    jx = np.kron(frame.j0, chi0[:, None])          # N x (2na-2)
    ky = np.kron(phi0[:, None], frame.k0)          # N x (2nb-2)
    gx = 2.0 * np.real(jx.conj().T @ w)
    gy = 2.0 * np.real(ky.conj().T @ w)
    return np.concatenate([gx, gy])


def hessian(omega: HermitianOp, frame: TangentFrame) -> np.ndarray:
    """Second-derivative matrix of f at the frame base.

    Assembled exactly from its bilinear blocks, so it is symmetric by
    construction.  It carries the constraint meaning of a Hessian only
    when the base point is a zero, but may be computed anywhere.
    """
    phi0, chi0 = frame.base.phi, frame.base.chi
    psi0 = np.kron(phi0, chi0)
    jx = np.kron(frame.j0, chi0[:, None])
    ky = np.kron(phi0[:, None], frame.k0)
    o = omega.entries
    gxx = np.real(jx.conj().T @ o @ jx)
    gyy = np.real(ky.conj().T @ o @ ky)
    # Cross block: Re[(phi0 (x) k_n)^dag W (j_m (x) chi0)]
    # plus the term pairing psi0 with j_m (x) k_n.
    cross1 = ky.conj().T @ o @ jx
    w = o @ psi0
    na2, nb2 = frame.j0.shape[1], frame.k0.shape[1]
    w4 = w.reshape(omega.dims.na, omega.dims.nb)
    # cross2[n, m] = conj( (phi0 (x) chi0)^dag W (j_m (x) k_n) )^T taken so
    # that f2 cross term is 2 y^T Re(cross1 + cross2) x.
    cross2 = np.empty((nb2, na2), dtype=complex)
    # (psi0^dag W (j_m (x) k_n)) = sum_{k,l} conj-free contraction of W psi0?
    # Use: v_{kl} = conj(psi0)^T W over composite index -> need W^dag psi0.
    u = (o.conj().T @ psi0).conj()  # row vector psi0^dag W as a 1-D array
    u4 = u.reshape(omega.dims.na, omega.dims.nb)
    cross2 = np.einsum("kl,km,ln->nm", u4, frame.j0, frame.k0)
    g_yx = np.real(cross1 + cross2)
    top = np.hstack([gxx, g_yx.T])
    bot = np.hstack([g_yx, gyy])
    g = np.vstack([top, bot])
    return 0.5 * (g + g.T)


def form_terms(omega: HermitianOp, frame: TangentFrame,
               x: np.ndarray, y: np.ndarray):
    """The exact degree decomposition f = f0 + f1 + f2 + f3 + f4 at (x, y).

    Returns the five terms; f4(x, y) equals f_omega evaluated on the raw
    displacement pair (xi, zeta).
    """
    phi0, chi0 = frame.base.phi, frame.base.chi
    xi = frame.j0 @ x
    zeta = frame.k0 @ y
    o = omega.entries

    def form(u, v):
        return complex(np.vdot(np.kron(u[0], u[1]), o @ np.kron(v[0], v[1])))

    f0 = form((phi0, chi0), (phi0, chi0)).real
    f1 = 2.0 * (form((xi, chi0), (phi0, chi0))
                + form((phi0, zeta), (phi0, chi0))).real
    f2 = (form((xi, chi0), (xi, chi0)).real
          + form((phi0, zeta), (phi0, zeta)).real
          + 2.0 * (form((phi0, zeta), (xi, chi0))
                   + form((phi0, chi0), (xi, zeta))).real)
    f3 = 2.0 * (form((phi0, zeta), (xi, zeta))
                + form((xi, chi0), (xi, zeta))).real
    f4 = form((xi, zeta), (xi, zeta)).real
    return f0, f1, f2, f3, f4


QUADRATIC = "quadratic"
QUARTIC = "quartic"


@dataclasses.dataclass(frozen=True)
class Zero:
    """A product vector where the form vanishes, with its local data."""

    point: ProductVector
    value: float
    gradient_norm: float
    hessian: np.ndarray
    kind: str
    hessian_kernel: tuple  # tuple of real vectors z_i
    frame: TangentFrame

    @property
    def kernel_dim(self) -> int:
        return len(self.hessian_kernel)

    @property
    def is_quartic(self) -> bool:
        return self.kind == QUARTIC


def classify_zero(omega: HermitianOp, p: ProductVector,
                  rng: Optional[np.random.Generator] = None,
                  eps_zero: float = EPS_ZERO) -> Zero:
    """Verify that p is a zero of omega and classify it by its Hessian."""
    value = eval_form(omega, p)
    if value > eps_zero:
        raise NotAZero(f"form value {value:.3e} exceeds {eps_zero:.1e}")
    frame = tangent_frame(p, rng)
    grad = gradient(omega, frame)
    hess = hessian(omega, frame)
    evals, evecs = np.linalg.eigh(hess)
    cut = hessian_cutoff(float(np.max(np.abs(evals), initial=1.0)))
    if evals[0] < -cut:
        raise NegativeHessian(
            f"Hessian eigenvalue {evals[0]:.3e} is negative at the zero")
    kernel = tuple(evecs[:, i].copy()
                   for i in range(len(evals)) if abs(evals[i]) <= cut)
    kind = QUARTIC if kernel else QUADRATIC
    return Zero(point=p, value=value,
                gradient_norm=float(np.linalg.norm(grad)),
                hessian=hess, kind=kind, hessian_kernel=kernel, frame=frame)

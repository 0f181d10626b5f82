"""Geometry of simplexes spanned by pure product states.

The zeros of a witness span a simplex of separable states.  Its shape is
probed through Cayley-Menger volumes, the distance of its center and of
its closest point to the maximally mixed state, and local optimization of
these quantities over determinant-normalized product transformations.
"""

from __future__ import annotations

import dataclasses
from math import factorial
from typing import List, Optional, Sequence, Tuple

import numpy as np
import scipy.linalg
import scipy.optimize

from .hilbert import Dims, HermitianOp, ProductVector, pure_product_state

MAX_VOLUME = "MaxVolume"
MIN_CENTER_DISTANCE = "MinCenterDistance"


@dataclasses.dataclass(frozen=True)
class SimplexFace:
    """Simplex with pure-state vertices, usually product states."""

    vertices: Tuple[HermitianOp, ...]
    dims: Dims

    def __post_init__(self):
        object.__setattr__(self, "vertices", tuple(self.vertices))

    @property
    def order(self) -> int:
        """Simplex dimension n = (number of vertices) - 1."""
        return len(self.vertices) - 1

    def vertex_matrix(self) -> np.ndarray:
        """Vertices as columns of real operator coordinates."""
        return np.array([v.entries.real.ravel().tolist()
                         + v.entries.imag.ravel().tolist()
                         for v in self.vertices]).T


def face_from_zeros(points: Sequence[ProductVector]) -> SimplexFace:
    """The simplex of pure product states over a set of product vectors."""
    pts = list(points)
    return SimplexFace(tuple(pure_product_state(p) for p in pts),
                       pts[0].dims)


def _hs_dist2(a: HermitianOp, b: HermitianOp) -> float:
    d = a.entries - b.entries
    return float(np.real(np.vdot(d, d)))


def cm_volume(face: SimplexFace) -> float:
    """Simplex volume from squared Hilbert-Schmidt edge lengths.

    Uses the Cayley-Menger determinant; degenerate (affinely dependent)
    vertex sets give zero.
    """
    k = len(face.vertices)
    if k < 2:
        return 0.0
    n = k - 1
    d = np.zeros((k + 1, k + 1))
    d[0, 1:] = 1.0
    d[1:, 0] = 1.0
    for i in range(k):
        for j in range(i + 1, k):
            f = _hs_dist2(face.vertices[i], face.vertices[j])
            d[i + 1, j + 1] = f
            d[j + 1, i + 1] = f
    det = np.linalg.det(d)
    return float(np.sqrt(abs(det) / 2.0 ** n) / factorial(n))


def v_reg(n: int, s: float) -> float:
    """Volume of the regular n-simplex with edge length s."""
    if n < 1:
        raise ValueError("n >= 1 required")
    return (s ** n / factorial(n)) * np.sqrt((n + 1) / 2.0 ** n)


def r_m(dims: Dims) -> float:
    """Radius of the maximal ball of separable states around I/N."""
    n = dims.n
    return 1.0 / np.sqrt(n * (n - 1.0))


def center_distance(face: SimplexFace) -> float:
    """Distance of the vertex average to the maximally mixed state."""
    if not face.vertices:
        raise ValueError("empty face")
    center = sum(v.entries for v in face.vertices) / len(face.vertices)
    rho0 = np.eye(face.dims.n) / face.dims.n
    return float(np.linalg.norm(center - rho0))


@dataclasses.dataclass(frozen=True)
class ClosestState:
    rho_min: HermitianOp
    d_min: float
    rank: int
    interior: bool
    weights: np.ndarray


def _kkt_polish(a: np.ndarray, b: np.ndarray, support: np.ndarray,
                k: int) -> np.ndarray:
    """Exact equality-constrained least squares on an active support."""
    w = np.zeros(k)
    for _ in range(k):
        idx = np.flatnonzero(support)
        asub = a[:, idx]
        m = asub.shape[1]
        kkt = np.zeros((m + 1, m + 1))
        kkt[:m, :m] = asub.T @ asub
        kkt[:m, m] = 1.0
        kkt[m, :m] = 1.0
        rhs = np.concatenate([asub.T @ b, [1.0]])
        sol = np.linalg.lstsq(kkt, rhs, rcond=None)[0]
        w = np.zeros(k)
        w[idx] = sol[:m]
        neg = w < -1e-12
        if not neg.any():
            break
        support = support & ~neg
        if not support.any():
            support[np.argmax(w)] = True
    return np.clip(w, 0.0, None)


def closest_state(face: SimplexFace, eps: float = 1e-9) -> ClosestState:
    """Projection of the maximally mixed state onto the simplex.

    Solves the simplex-constrained least-squares problem for the convex
    weights, then polishes the active set exactly so the returned state is
    a genuine convex combination of the vertices.
    """
    k = len(face.vertices)
    n = face.dims.n
    a = np.array([np.concatenate([v.entries.real.ravel(),
                                  v.entries.imag.ravel()])
                  for v in face.vertices]).T
    b = np.concatenate([(np.eye(n) / n).ravel(), np.zeros(n * n)])

    def obj(w):
        r = a @ w - b
        return float(r @ r), 2.0 * (a.T @ r)

    w0 = np.full(k, 1.0 / k)
    res = scipy.optimize.minimize(
        obj, w0, jac=True, method="SLSQP",
        bounds=[(0.0, 1.0)] * k,
        constraints=[{"type": "eq", "fun": lambda w: w.sum() - 1.0,
                      "jac": lambda w: np.ones(k)}],
        options={"maxiter": 500, "ftol": 1e-14})
    w = _kkt_polish(a, b, res.x > eps, k)
    s = w.sum()
    if s > 0:
        w = w / s
    rho = sum(wi * v.entries for wi, v in zip(w, face.vertices))
    rho_min = HermitianOp(face.dims, rho)
    evals = np.linalg.eigvalsh(rho)
    rank = int(np.sum(evals > 1e-8 * max(evals[-1], 1e-30)))
    d_min = float(np.linalg.norm(rho - np.eye(n) / n))
    return ClosestState(rho_min=rho_min, d_min=d_min, rank=rank,
                        interior=bool(np.all(w > eps)), weights=w)


def _sl_pair(params: np.ndarray, dims: Dims):
    """Determinant-one factors from a real parameter vector."""
    na, nb = dims.na, dims.nb
    ka = na * na - 1
    kb = nb * nb - 1

    def build(vec, d):
        m = np.zeros((d, d), dtype=complex)
        half = len(vec) // 2
        re, im = vec[:half], vec[half:]
        idx = 0
        for i in range(d):
            for j in range(d):
                if i == d - 1 and j == d - 1:
                    continue
                m[i, j] = re[idx] + 1j * im[idx]
                idx += 1
        m[d - 1, d - 1] = -np.trace(m)
        return scipy.linalg.expm(m)

    va = build(params[:2 * ka], na)
    vb = build(params[2 * ka:], nb)
    return va, vb


def transform_face(face: SimplexFace, va: np.ndarray,
                   vb: np.ndarray) -> SimplexFace:
    """Apply a product transformation to all vertices, renormalizing each
    to unit trace (pure states stay pure)."""
    v = np.kron(va, vb)
    out = []
    for vert in face.vertices:
        m = v @ vert.entries @ v.conj().T
        out.append(HermitianOp(face.dims, m / np.real(np.trace(m))))
    return SimplexFace(tuple(out), face.dims)


def optimize_shape(face: SimplexFace, objective: str,
                   max_iter: int = 400,
                   seed: int = 0) -> Tuple[SimplexFace, float, bool]:
    """Locally optimize the simplex shape over product transformations.

    Maximizes the volume or minimizes the center distance over pairs of
    determinant-one factors written as exponentials of traceless matrices,
    starting from the identity.  Returns (best face, best value,
    converged); the best iterate is returned even without convergence.
    """
    if objective not in (MAX_VOLUME, MIN_CENTER_DISTANCE):
        raise ValueError(f"unknown objective {objective!r}")
    dims = face.dims
    nparams = 2 * (dims.na ** 2 - 1) + 2 * (dims.nb ** 2 - 1)
    sign = -1.0 if objective == MAX_VOLUME else 1.0

    def cost(params):
        va, vb = _sl_pair(params, dims)
        f = transform_face(face, va, vb)
        val = cm_volume(f) if objective == MAX_VOLUME else center_distance(f)
        return sign * val

    res = scipy.optimize.minimize(
        cost, np.zeros(nparams), method="Nelder-Mead",
        options={"maxiter": max_iter * nparams, "xatol": 1e-8,
                 "fatol": 1e-12})
    va, vb = _sl_pair(res.x, dims)
    best = transform_face(face, va, vb)
    value = cm_volume(best) if objective == MAX_VOLUME \
        else center_distance(best)
    return best, float(value), bool(res.success)


def ppt_entangled_state(omega: HermitianOp, rho: HermitianOp,
                        fraction: float = 0.9) -> Tuple[HermitianOp, float]:
    """PPT state detected by omega, mixed outward from a separable rho.

    rho must be a full-rank separable state on which omega vanishes (for
    example an interior closest state of a witness-zero simplex); mixing
    sigma = p*rho + (1-p)*I/N with p slightly above 1 keeps the partial
    transpose positive up to p = 1/(1 - N*lambda) while Tr(omega sigma)
    turns negative.
    """
    from .hilbert import partial_transpose
    n = omega.dims.n
    lam = partial_transpose(rho).min_eigenvalue()
    if lam >= 1.0 / n:
        raise ValueError("rho's partial transpose leaves no mixing room")
    p_max = 1.0 / (1.0 - n * lam)
    p = 1.0 + fraction * (p_max - 1.0)
    sigma = p * rho + ((1.0 - p) / n) * HermitianOp.identity(omega.dims)
    return sigma, p

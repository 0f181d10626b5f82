"""Locating the zeros of the biquadratic form of a candidate witness.

The form f_W(phi, chi) is, for fixed chi, a Hermitian quadratic form in
phi (and vice versa), so alternating minimization reduces to repeated
minimum-eigenvector computations of the two partially contracted maps

    L_W(A)   = sum_{i,k} W_{ij;kl} A_{ki}   (acts on system-a operators)
    L_W^T(B) = sum_{j,l} W_{ij;kl} B_{lj}   (acts on system-b operators).

A short quasi-Newton polish of the normalized form follows each sweep.
Zeros are deduplicated by product-state fidelity; a witness candidate with
a strictly negative minimum raises NotAWitness carrying the certificate.
"""

from __future__ import annotations

import dataclasses
import os
from concurrent.futures import ThreadPoolExecutor
from typing import List, Optional, Tuple

import numpy as np
from scipy.optimize import least_squares, minimize

from .biquadratic import EPS_ZERO, classify_zero, eval_form
from .errors import NotAWitness
from .hilbert import Dims, HermitianOp, ProductVector

DEDUP_FIDELITY = 1.0 - 1e-8
CONTINUUM_DISTANCE = 0.05


def min_eig_map(omega: HermitianOp, a: np.ndarray) -> np.ndarray:
    """L_W(A): contract the a-side of the witness against the operator A.

    Result is the nb x nb Hermitian matrix M with chi^dag M chi =
    f-like pairing sum_{i,k} A_{ki} (e_i (x) chi)^dag W (e_k (x) chi).
    """
    return np.einsum("ijkl,ki->jl", omega.as4(), a)


def min_eig_map_t(omega: HermitianOp, b: np.ndarray) -> np.ndarray:
    """L_W^T(B): contract the b-side, producing an na x na matrix."""
    return np.einsum("ijkl,lj->ik", omega.as4(), b)


def _min_eigvec(m: np.ndarray) -> Tuple[float, np.ndarray]:
    m = 0.5 * (m + m.conj().T)
    evals, evecs = np.linalg.eigh(m)
    return float(evals[0]), evecs[:, 0]


def _split(z: np.ndarray, na: int, nb: int):
    phi = z[:na] + 1j * z[na:2 * na]
    chi = z[2 * na:2 * na + nb] + 1j * z[2 * na + nb:]
    return phi, chi


def _pack(phi: np.ndarray, chi: np.ndarray) -> np.ndarray:
    return np.concatenate([phi.real, phi.imag, chi.real, chi.imag])


class FormEvaluator:
    """Cached contraction matrices for repeated form minimization.

    The two partial contractions of the witness are stored as ordinary
    matrices acting on vectorized rank-one factor operators, so each sweep
    iteration is two matrix-vector products and two small eigensolves.
    """

    def __init__(self, omega: HermitianOp):
        self.omega = omega
        self.na, self.nb = omega.dims.na, omega.dims.nb
        o4 = omega.as4()
        # x_op: chi -> X with X_{ik} = sum_{jl} W_{ij;kl} chi_l chi_j^*
        self._mx = np.ascontiguousarray(
            o4.transpose(0, 2, 3, 1).reshape(self.na ** 2, self.nb ** 2))
        # y_op: phi -> Y with Y_{jl} = sum_{ik} W_{ij;kl} phi_k phi_i^*
        self._my = np.ascontiguousarray(
            o4.transpose(1, 3, 2, 0).reshape(self.nb ** 2, self.na ** 2))

    def x_op(self, chi: np.ndarray) -> np.ndarray:
        b = np.outer(chi, chi.conj()).ravel()
        return (self._mx @ b).reshape(self.na, self.na)

    def y_op(self, phi: np.ndarray) -> np.ndarray:
        a = np.outer(phi, phi.conj()).ravel()
        return (self._my @ a).reshape(self.nb, self.nb)

    def norm_form_and_grad(self, z):
        """Value and real gradient of f / (|phi|^2 |chi|^2)."""
        phi, chi = _split(z, self.na, self.nb)
        p2 = float(np.real(np.vdot(phi, phi)))
        c2 = float(np.real(np.vdot(chi, chi)))
        if p2 < 1e-300 or c2 < 1e-300:
            return np.inf, np.zeros_like(z)
        x = self.x_op(chi)
        y = self.y_op(phi)
        f = float(np.real(np.vdot(phi, x @ phi)))
        g = f / (p2 * c2)
        gphi = 2.0 * (x @ phi) / (p2 * c2) - 2.0 * g * phi / p2
        gchi = 2.0 * (y @ chi) / (p2 * c2) - 2.0 * g * chi / c2
        return g, _pack(gphi, gchi)


def minimize_form(omega, start: ProductVector,
                  sweeps: int = 60, polish="auto",
                  tol: float = 5e-15) -> Tuple[ProductVector, float]:
    """Minimize the normalized form from one starting product vector.

    polish=True always runs the quasi-Newton polish after the alternating
    eigenvector sweeps, False never does, and "auto" polishes only when
    the sweep minimum is small enough to matter for zero detection.
    """
    ev = omega if isinstance(omega, FormEvaluator) else FormEvaluator(omega)
    na, nb = ev.na, ev.nb
    phi, chi = start.phi.copy(), start.chi.copy()
    prev = np.inf
    val = np.inf
    for _ in range(sweeps):
        _, chi = _min_eigvec(ev.y_op(phi))
        val, phi = _min_eigvec(ev.x_op(chi))
        if abs(prev - val) < tol * max(1.0, abs(val)):
            break
        prev = val
    if polish == "auto":
        polish = val < 1e-3 * max(ev.omega.norm() / ev.omega.dims.n, 1e-12)
    if polish:
        res = minimize(ev.norm_form_and_grad, _pack(phi, chi),
                       jac=True, method="BFGS",
                       options={"gtol": 1e-12, "maxiter": 200})
        phi, chi = _split(res.x, na, nb)
    p = ProductVector(phi, chi)
    return p, eval_form(ev.omega, p)


def polish_zero(omega: HermitianOp, p: ProductVector) -> ProductVector:
    """Sharpen a zero to machine precision via its stationarity system.

    At a zero of a witness both partially contracted operators annihilate
    the factors exactly (they are positive semidefinite with the factor in
    their kernel), so solving L^T(chi chi^dag) phi = 0, L(phi phi^dag) chi
    = 0 by least squares pins the position far more accurately than
    minimizing the form value, including along flat quartic valleys.
    """
    na, nb = omega.dims.na, omega.dims.nb
    o4 = omega.as4()

    def residual(z):
        phi, chi = _split(z, na, nb)
        x = np.einsum("ijkl,lj->ik", o4, np.outer(chi, chi.conj()))
        y = np.einsum("ijkl,ki->jl", o4, np.outer(phi, phi.conj()))
        r1 = x @ phi
        r2 = y @ chi
        return np.concatenate([
            r1.real, r1.imag, r2.real, r2.imag,
            [np.real(np.vdot(phi, phi)) - 1.0,
             np.real(np.vdot(chi, chi)) - 1.0]])

    sol = least_squares(residual, _pack(p.phi, p.chi), method="lm",
                        xtol=1e-15, ftol=1e-15, gtol=1e-15)
    phi, chi = _split(sol.x, na, nb)
    return ProductVector(phi, chi)


@dataclasses.dataclass
class ZeroSet:
    """Deduplicated zeros of a witness plus a continuum heuristic flag."""

    zeros: List  # list of biquadratic.Zero
    continuum: bool
    min_value: float
    restarts: int
    min_point: Optional[ProductVector] = None

    def __len__(self):
        return len(self.zeros)

    def __iter__(self):
        return iter(self.zeros)

    @property
    def points(self) -> List[ProductVector]:
        return [z.point for z in self.zeros]


def _is_duplicate(p: ProductVector, seen: List[ProductVector]) -> bool:
    return any(p.fidelity(q) >= DEDUP_FIDELITY for q in seen)


def default_threads() -> int:
    value = os.environ.get("WITNESS_FORGE_THREADS", "1")
    try:
        return max(1, int(value))
    except ValueError:
        return 1


def find_zeros(omega: HermitianOp, restarts: Optional[int] = None,
               seed: int = 0, eps_zero: float = EPS_ZERO,
               raise_on_negative: bool = True,
               classify: bool = True,
               threads: Optional[int] = None) -> ZeroSet:
    """Multistart search for all zeros of the form of omega.

    Each restart draws its seed from an independent spawned stream, so the
    zero set found with r restarts is a subset of the set found with
    r' > r restarts of the same seed, and the result is independent of the
    thread count (restarts are merged in index order).  If the form dips
    below -eps_zero, NotAWitness is raised (unless raise_on_negative is
    False, in which case the negative minimum is simply reported in
    min_value).
    """
    dims = omega.dims
    if restarts is None:
        restarts = 100 * dims.n
    if threads is None:
        threads = default_threads()
    streams = np.random.SeedSequence(seed).spawn(restarts)
    ev = FormEvaluator(omega)

    def run_one(ss):
        rng = np.random.default_rng(ss)
        phi = rng.standard_normal(dims.na) + 1j * rng.standard_normal(dims.na)
        chi = rng.standard_normal(dims.nb) + 1j * rng.standard_normal(dims.nb)
        return minimize_form(ev, ProductVector(phi, chi))

    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            results = list(pool.map(run_one, streams))
    else:
        results = [run_one(ss) for ss in streams]

    points: List[ProductVector] = []
    min_value = np.inf
    min_point = None
    for p, val in results:
        if val < min_value:
            min_value, min_point = val, p
        if val < -eps_zero:
            if raise_on_negative:
                raise NotAWitness(
                    f"form reaches {val:.3e} < 0",
                    certificate=p, value=val)
            continue
        if val <= eps_zero and not _is_duplicate(p, points):
            p = polish_zero(omega, p)
            if eval_form(omega, p) <= eps_zero and not _is_duplicate(p, points):
                points.append(p)
    continuum = len(points) > 5 * dims.n
    if not continuum:
        for i in range(len(points)):
            for j in range(i + 1, len(points)):
                if points[i].geodesic_distance(points[j]) < CONTINUUM_DISTANCE:
                    continuum = True
                    break
            if continuum:
                break
    if classify:
        slack = max(eps_zero, 10 * abs(min(min_value, 0.0)))
        zeros = [classify_zero(omega, p, eps_zero=slack) for p in points]
    else:
        zeros = points
    return ZeroSet(zeros=zeros, continuum=continuum,
                   min_value=float(min_value), restarts=restarts,
                   min_point=min_point)


def refine_zero(omega: HermitianOp, guess: ProductVector) -> ProductVector:
    """Warm-started re-minimization from a previous zero location."""
    p, val = minimize_form(omega, guess)
    if val <= 1e-6:
        p = polish_zero(omega, p)
    return p

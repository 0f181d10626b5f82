"""Extremality certification and face descent for witnesses.

A witness is extremal in the cone of witnesses exactly when the stacked
linear constraint system of all its zeros (and Hessian zeros) has a
one-dimensional kernel, necessarily spanned by the witness itself.  When
the kernel is larger, the witness sits on a face of positive dimension;
moving inside the kernel until a new zero or a new Hessian zero appears
lands on a sub-face, and repeating this descent terminates at an extremal
witness.
"""

from __future__ import annotations

import dataclasses
import logging
from typing import List, Optional, Sequence, Tuple

import numpy as np
import scipy.linalg
from scipy.optimize import brentq

from . import constraints as cn
from .biquadratic import (EPS_HESS_REL, classify_zero, eval_form, hessian,
                          hessian_cutoff)
from .errors import (EmptyZeroSet, NegativeHessian, NotInKernel, Unbounded)
from .hilbert import HermitianOp, ProductVector, kron_product
from .zerofinder import (FormEvaluator, ZeroSet, find_zeros, minimize_form,
                         refine_zero)

logger = logging.getLogger(__name__)

NEW_ZERO = "NewZero"
NEW_HESSIAN_ZERO = "NewHessianZero"

EXTREMAL = "Extremal"
QUARTIC_STALL = "QuarticStall"
MAX_STEPS = "MaxSteps"

T_START = 2.0 ** -4
T_MAX = 2.0 ** 10
KERNEL_RESIDUAL_TOL = 1e-6
MAX_RETRIES = 12


@dataclasses.dataclass(frozen=True)
class Certificate:
    """Outcome of the kernel-rank test at a witness."""

    extremal: bool
    kernel_dim: int
    zero_count: int
    quartic_count: int
    spectral_gap: float
    report: cn.RankReport

    @property
    def face_dim(self) -> int:
        return self.kernel_dim - 1


@dataclasses.dataclass
class DescentStep:
    witness: HermitianOp
    zeros: ZeroSet
    kernel_dim: int
    t_c: float
    trigger: str


@dataclasses.dataclass
class FaceDescent:
    steps: List[DescentStep]
    final: HermitianOp
    final_zeros: ZeroSet
    certificate: Certificate
    terminated: str


def certify(omega: HermitianOp, zeros,
            quartic: bool = True,
            eps_svd: float = cn.EPS_SVD) -> Certificate:
    """Rank-certify extremality of omega from its zero set.

    When the kernel is one-dimensional the basis element is checked to be
    parallel to omega; a mismatch would indicate an inconsistent zero set
    and is surfaced through the returned spectral gap and overlap.
    """
    zero_list = list(zeros)
    if not zero_list:
        raise EmptyZeroSet(
            "witness has no zeros; it is interior and trivially "
            f"non-extremal (kernel dimension {omega.dims.n ** 2})")
    u = cn.constraint_matrix(omega.dims, zero_list, quartic=quartic)
    report = cn.numerical_rank(u, eps_svd)
    kdim = report.kernel_dim
    extremal = kdim == 1
    if extremal:
        k = cn.real_to_hermitian(report.kernel_basis()[:, 0])
        overlap = abs(np.vdot(k, omega.entries)) / (
            np.linalg.norm(k) * omega.norm())
        extremal = bool(overlap >= 1.0 - 1e-8)
    quartic_count = sum(1 for z in zero_list if z.is_quartic)
    return Certificate(extremal=extremal, kernel_dim=kdim,
                       zero_count=len(zero_list),
                       quartic_count=quartic_count,
                       spectral_gap=report.gap, report=report)


def _kernel_residual(u: np.ndarray, gamma: HermitianOp) -> float:
    v = cn.hermitian_to_real(gamma.entries)
    nv = np.linalg.norm(v)
    if nv == 0.0:
        return np.inf
    return float(np.linalg.norm(u @ v)) / (nv * max(1.0, np.linalg.norm(u, 2)))


def _hessian_event(omega: HermitianOp, gamma: HermitianOp,
                   zeros) -> float:
    """Smallest t > 0 at which some zero's Hessian becomes singular.

    det(G_omega + t G_gamma) = 0 is a generalized eigenvalue problem for
    the pencil (G_omega, -G_gamma); only finite real positive eigenvalues
    correspond to events.
    """
    best = np.inf
    for z in zeros:
        g0 = z.hessian
        g1 = hessian(gamma, z.frame)
        if np.linalg.norm(g1) < 1e-14:
            continue
        vals = scipy.linalg.eigvals(g0, -g1)
        vals = vals[np.isfinite(vals)]
        real = vals[np.abs(vals.imag) <= 1e-9 * (1.0 + np.abs(vals.real))].real
        cut = hessian_cutoff(g0)
        pos = real[real > cut]
        if len(pos):
            best = min(best, float(pos.min()))
    return best


def _probe_min(omega: HermitianOp, gamma: HermitianOp, t: float,
               seed: int, restarts: int) -> Tuple[float, ProductVector]:
    """Cheap multistart estimate of the global form minimum of omega + t*gamma."""
    w = omega + t * gamma
    dims = w.dims
    streams = np.random.SeedSequence((seed, 17)).spawn(restarts)
    ev = FormEvaluator(w)
    best_val, best_p = np.inf, None
    for ss in streams:
        rng = np.random.default_rng(ss)
        phi = rng.standard_normal(dims.na) + 1j * rng.standard_normal(dims.na)
        chi = rng.standard_normal(dims.nb) + 1j * rng.standard_normal(dims.nb)
        p, val = minimize_form(ev, ProductVector(phi, chi), polish=False)
        if val < best_val:
            best_val, best_p = val, p
    return best_val, best_p


def _tracked_root(omega: HermitianOp, gamma: HermitianOp,
                  t_lo: float, t_hi: float, start: ProductVector,
                  known: Sequence[ProductVector]
                  ) -> Tuple[float, ProductVector]:
    """Root of the tracked emerging-minimum value between t_lo and t_hi.

    The minimum born along the ray is followed by warm-started local
    minimization; drifting into an already-known zero (whose value stays
    pinned at zero) is ignored so the bracket sees the new branch only.
    """
    warm = {"p": start}

    def is_known(p):
        return any(p.fidelity(q) >= 1.0 - 1e-6 for q in known)

    def value(t):
        # Minimize from both the anchor (inside the emerging basin at the
        # right end) and the warm continuation point; the anchor prevents
        # the tracker from losing the basin when walking left of t_c.
        ev = FormEvaluator(omega + t * gamma)
        p1, v1 = minimize_form(ev, start, polish=True)
        p, val = p1, v1
        if warm["p"] is not start:
            p2, v2 = minimize_form(ev, warm["p"], polish=True)
            if v2 < val:
                p, val = p2, v2
        if not is_known(p):
            warm["p"] = p
        return val

    lo, hi = t_lo, t_hi
    v_lo = value(lo)
    tries = 0
    while v_lo <= 0.0 and tries < 10:
        # The tracker fell into an existing zero; move the left end up.
        lo = lo + 0.125 * (hi - lo)
        v_lo = value(lo)
        tries += 1
    if v_lo <= 0.0:
        return hi, warm["p"]
    t = float(brentq(value, lo, hi, xtol=1e-13, rtol=8.9e-16))
    return t, warm["p"]


def face_boundary(omega: HermitianOp, gamma: HermitianOp, zeros,
                  seed: int = 0, eps_zero: float = 1e-9,
                  probe_restarts: Optional[int] = None,
                  check_kernel: bool = True) -> Tuple[float, str, Optional[ProductVector]]:
    """Largest t with omega + t*gamma still a witness, and what stops it.

    Returns (t_c, trigger, new_zero_point); the point is None for a
    Hessian-zero event.  gamma must lie in the constraint kernel of the
    zero set (so existing zeros persist along the ray) and be nonzero.
    """
    zero_list = list(zeros)
    if gamma.norm() < 1e-14:
        raise NotInKernel("gamma is zero (degenerate direction)")
    if check_kernel and zero_list:
        u = cn.constraint_matrix(omega.dims, zero_list, quartic=True)
        res = _kernel_residual(u, gamma)
        if res > KERNEL_RESIDUAL_TOL:
            raise NotInKernel(
                f"direction has kernel residual {res:.3e} > "
                f"{KERNEL_RESIDUAL_TOL:.1e}")
    t_hess = _hessian_event(omega, gamma, zero_list)

    if probe_restarts is None:
        probe_restarts = 12 * omega.dims.n
    known = [z.point for z in zero_list]

    def is_known(p):
        return any(p.fidelity(q) >= 1.0 - 1e-6 for q in known)

    # Exponential scan for the first t where the form dips negative.  When
    # a Hessian event happens very early, start below it so a still-earlier
    # new-zero event is not skipped.
    t_lo, t_hi, hit = 0.0, None, None
    t = T_START if not np.isfinite(t_hess) else min(T_START, t_hess / 8.0)
    while t <= min(T_MAX, 2.0 * t_hess if np.isfinite(t_hess) else T_MAX):
        val, p = _probe_min(omega, gamma, t, seed, probe_restarts)
        if val < -eps_zero:
            t_hi, hit = t, p
            break
        t_lo = t
        t *= 2.0
    def hessian_or_earlier_zero():
        # A Hessian singularity only marks the boundary if the operator is
        # still a witness there; emerging zeros are shallow near that point,
        # so confirm with a much stronger probe before accepting the event.
        val, p = _probe_min(omega, gamma, t_hess, seed + 1,
                            6 * probe_restarts)
        if val >= -eps_zero:
            return t_hess, NEW_HESSIAN_ZERO, None
        t_nz, new_point = _tracked_root(omega, gamma, 0.0, t_hess, p, known)
        return t_nz, NEW_ZERO, new_point

    if t_hi is None:
        if np.isfinite(t_hess):
            return hessian_or_earlier_zero()
        raise Unbounded(
            f"no boundary event found below t_max = {T_MAX:g}; "
            "multistart probe may have missed the emerging zero")

    t_nz, new_point = _tracked_root(omega, gamma, t_lo, t_hi, hit, known)
    if np.isfinite(t_hess) and t_hess < t_nz:
        return hessian_or_earlier_zero()
    return t_nz, NEW_ZERO, new_point


def check_optimal(omega: HermitianOp, zeros) -> Tuple[bool, bool]:
    """Spanning tests on the zero set.

    A witness whose zeros span the full space is optimal; when the partial
    conjugates also span, it cannot be improved by partial transposition
    either.  For quadratic extremal witnesses these conditions are also
    necessary.
    """
    pts = [z.point if hasattr(z, "point") else z for z in zeros]
    if not pts:
        return False, False
    n = omega.dims.n
    m = np.array([kron_product(p) for p in pts]).T
    mt = np.array([kron_product(p.partial_conjugate()) for p in pts]).T
    spanning = np.linalg.matrix_rank(m, tol=1e-8) == n
    doubly = spanning and np.linalg.matrix_rank(mt, tol=1e-8) == n
    return spanning, doubly


def _random_kernel_direction(omega: HermitianOp, zeros,
                             rng: np.random.Generator) -> HermitianOp:
    """Random unit direction in the constraint kernel, orthogonal to omega
    and trace-projected."""
    dims = omega.dims
    zero_list = list(zeros)
    if zero_list:
        u = cn.constraint_matrix(dims, zero_list, quartic=True)
        basis = cn.numerical_rank(u).kernel_basis()
    else:
        basis = np.eye(dims.n ** 2)
    coeffs = rng.standard_normal(basis.shape[1])
    g = cn.real_to_hermitian(basis @ coeffs)
    # Orthogonalize against omega in the Hilbert-Schmidt inner product,
    # then remove the trace along omega (trace-1 normalized).
    o = omega.entries / omega.trace
    g = g - (np.vdot(o, g).real / np.vdot(o, o).real) * o
    g = g - np.trace(g).real * o
    g = 0.5 * (g + g.conj().T)
    gamma = HermitianOp(dims, g)
    return (1.0 / gamma.norm()) * gamma


def _update_zeros(omega: HermitianOp, found: ZeroSet, old_zeros, new_point,
                  eps_zero: float) -> ZeroSet:
    """Merge a fresh multistart zero set with refined survivors of the
    previous step and the boundary event's new zero."""
    points = list(found.zeros)
    candidates = [z.point for z in old_zeros]
    if new_point is not None:
        candidates.append(new_point)
    for guess in candidates:
        p = refine_zero(omega, guess)
        val = eval_form(omega, p)
        dup = any(p.fidelity(q) >= 1.0 - 1e-8 for q in points)
        if val <= eps_zero and not dup:
            points.append(p)
        else:
            logger.debug("zero candidate dropped: value=%.3e dup=%s",
                         val, dup)
    zeros = [classify_zero(omega, p, eps_zero=eps_zero) for p in points]
    return ZeroSet(zeros=zeros, continuum=found.continuum,
                   min_value=found.min_value, restarts=found.restarts)


def find_extremal(start: Optional[HermitianOp] = None,
                  dims=None, rng_seed: int = 0,
                  restarts: Optional[int] = None,
                  max_steps: int = 60,
                  eps_zero: float = 1e-9) -> FaceDescent:
    """Face descent from a witness to an extremal witness.

    Each step draws a random traceless direction in the current constraint
    kernel, walks to the face boundary, and re-certifies.  The kernel
    dimension strictly decreases on accepted steps; a step that fails to
    decrease it retries with a fresh direction, a descent that exhausts
    its retries restarts from the beginning with fresh randomness, and
    repeated stalls terminate with a stall flag.
    """
    if start is None:
        if dims is None:
            raise ValueError("either start or dims is required")
        start = HermitianOp.maximally_mixed(dims)
    if restarts is None:
        restarts = 30 * start.dims.n
    # The descent is stochastic: a face can exhaust its direction retries
    # even when other random paths from the same start succeed, so restart
    # the whole descent with fresh randomness before reporting a stall.
    result = None
    for attempt in range(3):
        result = _descend(start, rng_seed, restarts, max_steps, eps_zero,
                          attempt)
        if result.terminated != QUARTIC_STALL:
            return result
        logger.debug("descent stalled on attempt %d; restarting", attempt)
    return result


def _descend(start: HermitianOp, rng_seed: int, restarts: int,
             max_steps: int, eps_zero: float, attempt: int) -> FaceDescent:
    omega = (1.0 / start.trace) * start
    dims = omega.dims
    if attempt == 0:
        seq = np.random.SeedSequence((rng_seed, 101))
        zero_seed = rng_seed
    else:
        seq = np.random.SeedSequence((rng_seed, 101, attempt))
        zero_seed = rng_seed + 7919 * attempt
    rng = np.random.default_rng(seq)
    zeros = find_zeros(omega, restarts=restarts, seed=zero_seed,
                       eps_zero=eps_zero)
    steps: List[DescentStep] = []

    def kernel_dim_of(zs):
        zl = list(zs)
        if not zl:
            return dims.n ** 2
        return certify(omega, zl).kernel_dim

    kdim = kernel_dim_of(zeros)
    retries = 0
    while kdim > 1 and len(steps) < max_steps:
        gamma = _random_kernel_direction(omega, zeros, rng)
        try:
            t_c, trigger, new_point = face_boundary(
                omega, gamma, zeros, seed=int(rng.integers(2 ** 31)),
                eps_zero=eps_zero, check_kernel=False)
        except Unbounded:
            retries += 1
            if retries > MAX_RETRIES:
                raise
            continue
        # Verify the candidate really sits on the boundary; if a missed
        # minimum dips negative, re-root on it and shrink the step.
        known = [z.point for z in zeros]
        candidate, found = None, None
        for _ in range(8):
            trial = omega + t_c * gamma
            trial = (1.0 / trial.trace) * trial
            probe = find_zeros(trial, restarts=restarts,
                               seed=int(rng.integers(2 ** 31)),
                               raise_on_negative=False, classify=False,
                               eps_zero=eps_zero)
            if probe.min_value >= -eps_zero:
                candidate, found = trial, probe
                break
            t_c, new_point = _tracked_root(
                omega, gamma, 0.0, t_c, probe.min_point, known)
            trigger = NEW_ZERO
        if candidate is None or found.continuum:
            # No consistent boundary point, or the ray hit a degenerate
            # stratum with a zero continuum (e.g. decomposable operators);
            # both are unusable for rank tracking, so redraw the direction.
            logger.debug("step rejected: %s (t_c=%.4g, trigger=%s)",
                         "no boundary point" if candidate is None
                         else "zero continuum", t_c, trigger)
            retries += 1
            if retries > MAX_RETRIES:
                cert = certify(omega, list(zeros)) if list(zeros) else None
                return FaceDescent(steps=steps, final=omega,
                                   final_zeros=zeros, certificate=cert,
                                   terminated=QUARTIC_STALL)
            continue
        try:
            new_zeros = _update_zeros(candidate, found, zeros, new_point,
                                      eps_zero=eps_zero)
        except NegativeHessian:
            # the multistart probe missed a shallow negative direction; the
            # candidate overshot the boundary, so discard it and retry
            retries += 1
            if retries > MAX_RETRIES:
                cert = certify(omega, list(zeros)) if list(zeros) else None
                return FaceDescent(steps=steps, final=omega,
                                   final_zeros=zeros, certificate=cert,
                                   terminated=QUARTIC_STALL)
            continue
        zl = list(new_zeros)
        if (any(z.is_quartic for z in zl)
                and not any(z.is_quartic for z in zeros)):
            # a quartic zero appears only where the ray meets a degenerate
            # stratum; its searched position is far less accurate than a
            # quadratic one, which poisons the rank bookkeeping downstream,
            # so redraw the direction instead of stepping onto it
            logger.debug("step rejected: quartic zero appeared (t_c=%.4g, "
                         "trigger=%s)", t_c, trigger)
            retries += 1
            if retries > MAX_RETRIES:
                cert = certify(omega, list(zeros)) if list(zeros) else None
                return FaceDescent(steps=steps, final=omega,
                                   final_zeros=zeros, certificate=cert,
                                   terminated=QUARTIC_STALL)
            continue
        new_kdim = certify(candidate, zl).kernel_dim if zl else dims.n ** 2
        # kernel 0 is impossible for a true witness (it lies in its own
        # constraint kernel): the zero positions are too inaccurate to rank
        if new_kdim < 1 or new_kdim >= kdim:
            logger.debug("step rejected: kernel %d -> %d (t_c=%.4g, "
                         "trigger=%s, zeros=%d)", kdim, new_kdim, t_c,
                         trigger, len(zl))
            retries += 1
            if retries > MAX_RETRIES:
                cert = certify(omega, list(zeros)) if list(zeros) else None
                return FaceDescent(steps=steps, final=omega,
                                   final_zeros=zeros, certificate=cert,
                                   terminated=QUARTIC_STALL)
            continue
        retries = 0
        omega, zeros, kdim = candidate, new_zeros, new_kdim
        steps.append(DescentStep(witness=omega, zeros=zeros,
                                 kernel_dim=kdim, t_c=t_c, trigger=trigger))
    cert = certify(omega, list(zeros))
    terminated = EXTREMAL if cert.kernel_dim == 1 else MAX_STEPS
    return FaceDescent(steps=steps, final=omega, final_zeros=zeros,
                       certificate=cert, terminated=terminated)

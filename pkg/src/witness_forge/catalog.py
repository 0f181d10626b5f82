"""Analytic witnesses with known zero structure.

Two families with exactly known matrices and zero sets serve as ground
truth for the numerical machinery: a one-parameter 3x3 family (containing
the classic nondecomposable witness as the endpoint a = 1) and a 4x4
witness derived from an extremal positive map.  Each entry carries its
isolated zeros and a sampler for its continuum of zeros.
"""

from __future__ import annotations

import dataclasses
from typing import Callable, List, Optional

import numpy as np

from .hilbert import Dims, HermitianOp, ProductVector


@dataclasses.dataclass(frozen=True)
class CatalogEntry:
    """A witness with analytically known zeros."""

    name: str
    witness: HermitianOp
    analytic_zeros: List[ProductVector]
    continuum_sampler: Callable[..., ProductVector]


def choi_lam(a: float, b: float, c: float, theta: float = 0.0,
             check_family: bool = False) -> CatalogEntry:
    """The 9x9 witness Omega(a, b, c; theta).

    Diagonal (a,c,b, b,a,c, c,b,a); the three corner entries linking the
    diagonal composite indices 11, 22, 33 are -exp(+/- i theta).  The
    choice (1, 0, 1; 0) is the classic nondecomposable witness with three
    isolated zeros e1(x)e3, e2(x)e1, e3(x)e2 and a continuum
    phi = (1, e^{i alpha}, e^{i beta}), chi = conj(phi).

    With check_family=True the parameters are required to satisfy
    0 <= a <= 1, a+b+c = 2, bc = (1-a)^2, the one-parameter family in
    which every member is extremal.
    """
    if check_family:
        if not (0.0 <= a <= 1.0 and abs(a + b + c - 2.0) < 1e-12
                and abs(b * c - (1.0 - a) ** 2) < 1e-12):
            raise ValueError("parameters outside the extremal family")
    m = np.zeros((9, 9), dtype=complex)
    np.fill_diagonal(m, [a, c, b, b, a, c, c, b, a])
    w = -np.exp(1j * theta)
    for i, j in ((0, 4), (4, 8), (8, 0)):
        m[i, j] = w
        m[j, i] = np.conj(w)
    dims = Dims(3, 3)
    ee = np.eye(3)
    zeros = [ProductVector(ee[0], ee[2]),
             ProductVector(ee[1], ee[0]),
             ProductVector(ee[2], ee[1])]

    def sampler(alpha: Optional[float] = None, beta: Optional[float] = None,
                rng: Optional[np.random.Generator] = None) -> ProductVector:
        if alpha is None or beta is None:
            if rng is None:
                rng = np.random.default_rng()
            if alpha is None:
                alpha = float(rng.uniform(0.0, 2.0 * np.pi))
            if beta is None:
                beta = float(rng.uniform(0.0, 2.0 * np.pi))
        phi = np.array([1.0, np.exp(1j * alpha), np.exp(1j * beta)])
        return ProductVector(phi, phi.conj())

    return CatalogEntry("choi-lam", HermitianOp(dims, m), zeros, sampler)


def ha_kye_parameters(a: float):
    """Complete (a, b, c) on the extremal family a+b+c = 2, bc = (1-a)^2."""
    if not 0.0 <= a <= 1.0:
        raise ValueError("family requires 0 <= a <= 1")
    disc = np.sqrt(a * (4.0 - 3.0 * a))
    b = 0.5 * ((2.0 - a) + disc)
    c = 0.5 * ((2.0 - a) - disc)
    return a, b, c


_ROBERTSON_ENTRIES = [
    # (row, col, value), 0-based, upper part; symmetrized below.
    (1, 11, 1.0), (1, 14, -1.0),
    (2, 2, 1.0), (2, 8, 1.0),
    (3, 3, 1.0), (3, 12, 1.0),
    (4, 11, -1.0), (4, 14, 1.0),
    (6, 6, 1.0), (6, 9, 1.0),
    (7, 7, 1.0), (7, 13, 1.0),
    (8, 8, 1.0),
    (9, 9, 1.0),
    (12, 12, 1.0),
    (13, 13, 1.0),
]


def robertson() -> CatalogEntry:
    """The 16x16 witness of the extremal positive map on 4x4 matrices.

    Isolated zeros e1(x)e1, e1(x)e2, e3(x)e3, e3(x)e4; the continuum
    sampler picks chi1, chi2 at random for a given phi, solves the two
    bilinear zero equations for chi3, chi4, and rescales the halves to
    balance the quadratic equation.
    """
    m = np.zeros((16, 16), dtype=complex)
    for i, j, v in _ROBERTSON_ENTRIES:
        m[i, j] = v
        m[j, i] = v
    dims = Dims(4, 4)
    ee = np.eye(4)
    zeros = [ProductVector(ee[0], ee[0]),
             ProductVector(ee[0], ee[1]),
             ProductVector(ee[2], ee[2]),
             ProductVector(ee[2], ee[3])]

    def sampler(phi: Optional[np.ndarray] = None,
                rng: Optional[np.random.Generator] = None) -> ProductVector:
        if rng is None:
            rng = np.random.default_rng()
        if phi is None:
            phi = rng.standard_normal(4) + 1j * rng.standard_normal(4)
        phi = np.asarray(phi, dtype=complex)
        a = np.conj(phi[0]) * phi[2] + np.conj(phi[3]) * phi[1]
        b = np.conj(phi[1]) * phi[2] - np.conj(phi[3]) * phi[0]
        chi12 = rng.standard_normal(2) + 1j * rng.standard_normal(2)
        s = float(np.abs(chi12[0]) ** 2 + np.abs(chi12[1]) ** 2)
        chi3 = (-a * chi12[0] - b * chi12[1]) / s
        chi4 = (np.conj(b) * chi12[0] - np.conj(a) * chi12[1]) / s
        top = (np.abs(phi[0]) ** 2 + np.abs(phi[1]) ** 2) \
            * (np.abs(chi3) ** 2 + np.abs(chi4) ** 2)
        bot = (np.abs(phi[2]) ** 2 + np.abs(phi[3]) ** 2) * s
        cc = (top / bot) ** 0.25
        chi = np.array([cc * chi12[0], cc * chi12[1], chi3 / cc, chi4 / cc])
        return ProductVector(phi, chi)

    return CatalogEntry("robertson", HermitianOp(dims, m), zeros, sampler)


def by_name(name: str, **params) -> CatalogEntry:
    """Look up a catalog entry: 'choi-lam' (a, b, c, theta) or 'robertson'."""
    if name == "choi-lam":
        return choi_lam(params.get("a", 1.0), params.get("b", 0.0),
                        params.get("c", 1.0), params.get("theta", 0.0))
    if name == "robertson":
        return robertson()
    raise KeyError(f"unknown catalog entry {name!r}")

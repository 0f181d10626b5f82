import numpy as np
import pytest

from witness_forge.biquadratic import eval_form
from witness_forge.catalog import choi_lam
from witness_forge.decomposable import (DecompWitness, decomposable_dimension,
                                        dependent_product_vectors,
                                        overlap_projector, partial_decompose,
                                        pure_state_witness,
                                        with_prescribed_zeros, zero_residuals)
from witness_forge.errors import TooManyZeros
from witness_forge.hilbert import (Dims, HermitianOp, ProductVector,
                                   kron_product, partial_transpose,
                                   random_product_vector)
from witness_forge.zerofinder import find_zeros


def _random_points(dims, k, seed):
    rng = np.random.default_rng(seed)
    return [random_product_vector(dims, rng) for _ in range(k)]


def test_decomposable_form_splits_pointwise():
    # f_{rho + sigma^P}(phi, chi) = f_rho(phi, chi) + f_sigma(phi, chi*)
    dims = Dims(3, 3)
    rng = np.random.default_rng(0)
    dw = with_prescribed_zeros(_random_points(dims, 3, 1), rng)
    omega = dw.witness
    for _ in range(50):
        p = random_product_vector(dims, rng)
        lhs = eval_form(omega, p)
        rhs = eval_form(dw.rho, p) + eval_form(dw.sigma, p.partial_conjugate())
        assert lhs == pytest.approx(rhs, abs=1e-12)
        assert lhs >= -1e-12  # nonnegative on all product vectors


def test_prescribed_zeros_are_zeros_with_zero_residuals():
    dims = Dims(3, 3)
    zs = _random_points(dims, 4, 2)
    dw = with_prescribed_zeros(zs, np.random.default_rng(3))
    for (r1, r2), p in zip(zero_residuals(dw.rho, dw.sigma, zs), zs):
        assert r1 < 1e-12 and r2 < 1e-12
        assert eval_form(dw.witness, p) < 1e-12
    # generic ranks: N - k on both sides
    assert np.linalg.matrix_rank(dw.rho.entries, tol=1e-10) == 9 - 4
    assert np.linalg.matrix_rank(dw.sigma.entries, tol=1e-10) == 9 - 4


def test_with_prescribed_zeros_rejects_overfull_sets():
    dims = Dims(2, 2)
    with pytest.raises(TooManyZeros):
        with_prescribed_zeros(_random_points(dims, 4, 4))
    with pytest.raises(TooManyZeros):
        with_prescribed_zeros([])


def test_overlap_projector_properties():
    dims = Dims(3, 3)
    zs = _random_points(dims, 3, 5)
    sup_p, sup_pt, o = overlap_projector(zs)
    for m in (sup_p, sup_pt, o):
        assert np.max(np.abs(m @ m - m)) < 1e-10  # idempotent
        assert np.max(np.abs(m - m.T)) < 1e-12
    # the overlap projector commutes with and is dominated by both
    assert np.max(np.abs(sup_p @ o - o)) < 1e-10
    assert np.max(np.abs(sup_pt @ o - o)) < 1e-10


@pytest.mark.parametrize("k,expect", [(1, 72), (2, 63), (3, 54)])
def test_decomposable_dimension_generic_3x3(k, expect):
    # generic zero sets in 3x3 lose nine dimensions per added zero
    dims = Dims(3, 3)
    zs = _random_points(dims, k, 6 + k)
    assert decomposable_dimension(zs) == expect


def test_partial_decompose_recovers_construction():
    # for 7 zeros in 2x4 the complements are one-dimensional, the overlap
    # vanishes, and the split of a decomposable witness is exact and
    # positive on both sides
    dims = Dims(2, 4)
    zs = _random_points(dims, 7, 7)
    dw = with_prescribed_zeros(zs, np.random.default_rng(8))
    _, _, o = overlap_projector(zs)
    assert np.max(np.abs(o)) < 1e-10
    pd = partial_decompose(dw.witness, zs)
    assert pd.residual < 1e-10
    assert np.max(np.abs(pd.remainder.entries)) < 1e-10
    assert np.max(np.abs(pd.rho1.entries - dw.rho.entries)) < 1e-8
    assert np.max(np.abs(pd.sigma1.entries - dw.sigma.entries)) < 1e-8
    assert pd.rho1_min_eig > -1e-10
    assert pd.sigma1_min_eig > -1e-10


def test_partial_decompose_flags_nondecomposable_witness():
    # the extremal 3x3 witness detects PPT entangled states and cannot be
    # split with both parts positive over its own zeros
    cl = choi_lam(1.0, 0.0, 1.0)
    pd = partial_decompose(cl.witness, cl.analytic_zeros)
    assert pd.rho1_min_eig < -1e-6 or pd.sigma1_min_eig < -1e-6 \
        or pd.residual > 1e-6


def test_pure_state_witness_zero_structure():
    dims = Dims(2, 2)
    psi = np.array([1.0, 0.0, 0.0, 1.0]) / np.sqrt(2)
    omega = pure_state_witness(psi, dims)
    assert omega.trace == pytest.approx(1.0)
    # zeros are the product vectors orthogonal to psi
    e = np.eye(2)
    p = ProductVector(e[0], e[1])
    assert eval_form(omega, p) < 1e-14
    zs = find_zeros(omega, restarts=60, seed=9)
    assert len(zs) == 0 or zs.continuum or all(
        abs(np.vdot(psi, kron_product(z.point))) < 1e-7 for z in zs)


def test_dependent_product_vectors_2x4():
    # eight product vectors in the 8-dimensional space that are dependent
    # together with their partial conjugates, all pairwise distinct
    dims = Dims(2, 4)
    pts = dependent_product_vectors(8, dims, rng_seed=0)
    m = np.array([kron_product(p) for p in pts]).T
    mt = np.array([kron_product(p.partial_conjugate()) for p in pts]).T
    assert np.linalg.svd(m, compute_uv=False)[-1] < 1e-7
    assert np.linalg.svd(mt, compute_uv=False)[-1] < 1e-7
    for i in range(8):
        for j in range(i + 1, 8):
            assert pts[i].fidelity(pts[j]) < 1.0 - 1e-6


def test_dependent_product_vectors_rejects_bad_count():
    with pytest.raises(ValueError):
        dependent_product_vectors(9, Dims(2, 4))


def test_decomp_witness_container():
    dims = Dims(2, 2)
    rho = HermitianOp.identity(dims)
    sigma = HermitianOp.maximally_mixed(dims)
    dw = DecompWitness(rho=rho, sigma=sigma)
    want = rho + partial_transpose(sigma)
    assert np.max(np.abs(dw.witness.entries - want.entries)) < 1e-15

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from witness_forge.errors import DimensionMismatch, SingularTransform
from witness_forge.hilbert import (Dims, HermitianOp, ProductVector, is_ppt,
                                   kron_product, partial_transpose,
                                   pure_product_state, random_hermitian,
                                   random_product_vector, sl_transform)


def test_dims_validation():
    with pytest.raises(ValueError):
        Dims(1, 3)
    assert Dims(3, 4).n == 12


def test_product_vector_normalized_and_phase_fixed():
    p = ProductVector(np.array([2.0, 0.0, 0.0]), np.array([0.0, -3j, 0.0]))
    assert np.isclose(np.linalg.norm(p.phi), 1.0)
    assert np.isclose(np.linalg.norm(p.chi), 1.0)
    # first nonzero component is rotated to the positive real axis
    assert p.phi[0] == pytest.approx(1.0)
    assert p.chi[1] == pytest.approx(1.0)


def test_product_vector_fidelity_and_distance():
    rng = np.random.default_rng(0)
    p = random_product_vector(Dims(3, 3), rng)
    assert p.fidelity(p) == pytest.approx(1.0)
    assert p.geodesic_distance(p) == pytest.approx(0.0, abs=1e-7)
    q = random_product_vector(Dims(3, 3), rng)
    f = p.fidelity(q)
    assert 0.0 <= f < 1.0


def test_hermitian_op_rejects_non_hermitian():
    m = np.arange(16, dtype=complex).reshape(4, 4)
    with pytest.raises(ValueError):
        HermitianOp(Dims(2, 2), m)


def test_partial_transpose_involution_exact():
    rng = np.random.default_rng(1)
    for dims in (Dims(2, 2), Dims(2, 4), Dims(3, 3)):
        a = random_hermitian(dims, rng)
        twice = partial_transpose(partial_transpose(a))
        assert np.array_equal(twice.entries, a.entries)


def test_partial_transpose_index_formula():
    rng = np.random.default_rng(2)
    dims = Dims(2, 3)
    a = random_hermitian(dims, rng)
    ap = partial_transpose(a)
    for i in range(2):
        for j in range(3):
            for k in range(2):
                for l in range(3):
                    assert ap.entries[i * 3 + j, k * 3 + l] == \
                        a.entries[i * 3 + l, k * 3 + j]


def test_bell_state_partial_transpose_not_ppt():
    # Oracle: the partial transpose of a maximally entangled state has a
    # negative eigenvalue -1/d, so the state is not PPT.
    d = 3
    dims = Dims(d, d)
    psi = np.zeros(d * d, dtype=complex)
    for i in range(d):
        psi[i * d + i] = 1.0 / np.sqrt(d)
    rho = HermitianOp(dims, np.outer(psi, psi.conj()))
    assert not is_ppt(rho)
    assert partial_transpose(rho).min_eigenvalue() == pytest.approx(-1.0 / d)


def test_separable_state_is_ppt():
    rng = np.random.default_rng(3)
    dims = Dims(3, 3)
    m = sum(pure_product_state(random_product_vector(dims, rng)).entries
            for _ in range(5)) / 5.0
    assert is_ppt(HermitianOp(dims, m))


def test_kron_product_matches_numpy():
    rng = np.random.default_rng(4)
    p = random_product_vector(Dims(2, 4), rng)
    assert np.allclose(kron_product(p), np.kron(p.phi, p.chi))


def test_sl_transform_dimension_and_singularity_checks():
    rng = np.random.default_rng(5)
    dims = Dims(3, 3)
    a = random_hermitian(dims, rng)
    with pytest.raises(DimensionMismatch):
        sl_transform(a, np.eye(2), np.eye(3))
    with pytest.raises(SingularTransform):
        sl_transform(a, np.zeros((3, 3)), np.eye(3))
    out = sl_transform(a, np.eye(3), np.eye(3))
    assert np.allclose(out.entries, a.entries)


@settings(max_examples=25, deadline=None)
@given(st.integers(2, 4), st.integers(2, 4), st.integers(0, 10 ** 6))
def test_pure_product_state_is_rank_one_projector(na, nb, seed):
    rng = np.random.default_rng(seed)
    p = random_product_vector(Dims(na, nb), rng)
    rho = pure_product_state(p)
    assert rho.trace == pytest.approx(1.0)
    evals = rho.eigenvalues()
    assert evals[-1] == pytest.approx(1.0)
    assert np.all(np.abs(evals[:-1]) < 1e-12)


@settings(max_examples=25, deadline=None)
@given(st.integers(0, 10 ** 6))
def test_partial_transpose_is_linear_and_trace_preserving(seed):
    rng = np.random.default_rng(seed)
    dims = Dims(2, 3)
    a = random_hermitian(dims, rng)
    b = random_hermitian(dims, rng)
    lhs = partial_transpose(a + 2.0 * b).entries
    rhs = (partial_transpose(a) + 2.0 * partial_transpose(b)).entries
    assert np.array_equal(lhs, rhs)
    assert partial_transpose(a).trace == pytest.approx(a.trace)

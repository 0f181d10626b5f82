import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from witness_forge.biquadratic import (classify_zero, eval_form, form_terms,
                                       gradient, hessian, tangent_frame)
from witness_forge.catalog import choi_lam, robertson
from witness_forge.errors import NotAZero
from witness_forge.hilbert import (Dims, ProductVector, kron_product,
                                   random_hermitian, random_product_vector)


def _dense_form(omega, phi, chi):
    vec = np.kron(phi, chi)
    return float(np.real(np.vdot(vec, omega.entries @ vec)))


def _fd_gradient(omega, frame, eps=1e-6):
    nx = frame.j0.shape[1]
    ny = frame.k0.shape[1]
    g = np.zeros(nx + ny)

    def f(x, y):
        return _dense_form(omega, frame.base.phi + frame.j0 @ x,
                           frame.base.chi + frame.k0 @ y)

    for i in range(nx + ny):
        dx = np.zeros(nx)
        dy = np.zeros(ny)
        if i < nx:
            dx[i] = eps
        else:
            dy[i - nx] = eps
        g[i] = (f(dx, dy) - f(-dx, -dy)) / (2 * eps)
    return g


def _fd_hessian(omega, frame, eps=1e-4):
    nx = frame.j0.shape[1]
    ny = frame.k0.shape[1]
    n = nx + ny

    def f(z):
        return _dense_form(omega, frame.base.phi + frame.j0 @ z[:nx],
                           frame.base.chi + frame.k0 @ z[nx:])

    h = np.zeros((n, n))
    for i in range(n):
        for j in range(n):
            ei = np.zeros(n)
            ej = np.zeros(n)
            ei[i] = eps
            ej[j] = eps
            h[i, j] = (f(ei + ej) - f(ei - ej) - f(ej - ei)
                       + f(-ei - ej)) / (4 * eps * eps)
    return h


@pytest.mark.parametrize("na,nb,seed", [(2, 2, 0), (2, 4, 1), (3, 3, 2),
                                        (3, 4, 3)])
def test_gradient_matches_finite_differences(na, nb, seed):
    rng = np.random.default_rng(seed)
    dims = Dims(na, nb)
    omega = random_hermitian(dims, rng)
    frame = tangent_frame(random_product_vector(dims, rng), rng)
    g = gradient(omega, frame)
    gfd = _fd_gradient(omega, frame)
    assert np.max(np.abs(g - gfd)) <= 1e-6 * max(1.0, np.max(np.abs(gfd)))


@pytest.mark.parametrize("na,nb,seed", [(2, 2, 4), (3, 3, 5), (3, 4, 6)])
def test_hessian_matches_finite_differences(na, nb, seed):
    # The stored matrix collects the quadratic Taylor coefficients, i.e.
    # half of the literal second derivative.
    rng = np.random.default_rng(seed)
    dims = Dims(na, nb)
    omega = random_hermitian(dims, rng)
    frame = tangent_frame(random_product_vector(dims, rng), rng)
    h = 2.0 * hessian(omega, frame)
    hfd = _fd_hessian(omega, frame)
    assert np.max(np.abs(h - hfd)) <= 1e-6 * np.max(np.abs(hfd))


@settings(max_examples=30, deadline=None)
@given(st.integers(0, 10 ** 6))
def test_taylor_decomposition_identity(seed):
    rng = np.random.default_rng(seed)
    dims = Dims(3, 3)
    omega = random_hermitian(dims, rng)
    p = random_product_vector(dims, rng)
    frame = tangent_frame(p, rng)
    x = 0.5 * rng.standard_normal(frame.j0.shape[1])
    y = 0.5 * rng.standard_normal(frame.k0.shape[1])
    terms = form_terms(omega, frame, x, y)
    direct = _dense_form(omega, p.phi + frame.j0 @ x, p.chi + frame.k0 @ y)
    scale = max(1.0, sum(abs(t) for t in terms))
    assert abs(sum(terms) - direct) <= 1e-12 * scale


def test_form_terms_match_gradient_and_hessian():
    rng = np.random.default_rng(7)
    dims = Dims(2, 3)
    omega = random_hermitian(dims, rng)
    frame = tangent_frame(random_product_vector(dims, rng), rng)
    nx = frame.j0.shape[1]
    z = rng.standard_normal(nx + frame.k0.shape[1])
    f0, f1, f2, f3, f4 = form_terms(omega, frame, z[:nx], z[nx:])
    g = gradient(omega, frame)
    h = hessian(omega, frame)
    assert f1 == pytest.approx(g @ z, rel=1e-10)
    assert f2 == pytest.approx(z @ h @ z, rel=1e-10)


def test_quartic_term_is_form_of_displacements():
    rng = np.random.default_rng(8)
    dims = Dims(3, 3)
    omega = random_hermitian(dims, rng)
    frame = tangent_frame(random_product_vector(dims, rng), rng)
    x = rng.standard_normal(frame.j0.shape[1])
    y = rng.standard_normal(frame.k0.shape[1])
    *_, f4 = form_terms(omega, frame, x, y)
    xi = frame.j0 @ x
    zeta = frame.k0 @ y
    assert f4 == pytest.approx(_dense_form(omega, xi, zeta), rel=1e-12)


def test_tangent_frame_shapes_and_orthogonality():
    rng = np.random.default_rng(9)
    p = random_product_vector(Dims(3, 4), rng)
    frame = tangent_frame(p, rng)
    assert frame.j0.shape == (3, 4)
    assert frame.k0.shape == (4, 6)
    assert frame.size == 10
    assert np.max(np.abs(frame.j0.conj().T @ p.phi)) < 1e-12
    assert np.max(np.abs(frame.k0.conj().T @ p.chi)) < 1e-12


def test_classify_zero_quadratic_vs_quartic():
    cl = choi_lam(1.0, 0.0, 1.0)
    z = classify_zero(cl.witness, cl.analytic_zeros[0])
    assert z.is_quartic
    assert z.kernel_dim == 2
    assert z.gradient_norm < 1e-10

    rb = robertson()
    z = classify_zero(rb.witness, rb.analytic_zeros[0])
    assert z.kernel_dim == 8


def test_classify_zero_rejects_non_zero():
    cl = choi_lam(1.0, 0.0, 1.0)
    p = ProductVector(np.array([1.0, 0, 0]), np.array([1.0, 0, 0]))
    assert eval_form(cl.witness, p) > 0.1
    with pytest.raises(NotAZero):
        classify_zero(cl.witness, p)


def test_eval_form_matches_dense_contraction():
    rng = np.random.default_rng(10)
    dims = Dims(2, 4)
    omega = random_hermitian(dims, rng)
    p = random_product_vector(dims, rng)
    assert eval_form(omega, p) == pytest.approx(
        _dense_form(omega, p.phi, p.chi))
    assert np.allclose(kron_product(p), np.kron(p.phi, p.chi))

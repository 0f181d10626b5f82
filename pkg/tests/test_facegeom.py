import itertools
from math import factorial

import numpy as np
import pytest

from witness_forge.catalog import choi_lam
from witness_forge.facegeom import (MAX_VOLUME, MIN_CENTER_DISTANCE,
                                    SimplexFace, center_distance,
                                    closest_state, cm_volume, face_from_zeros,
                                    optimize_shape, ppt_entangled_state, r_m,
                                    transform_face, v_reg)
from witness_forge.hilbert import (Dims, HermitianOp, ProductVector, is_ppt,
                                   pure_product_state, random_product_vector)


def _basis_face(na, nb, count=None):
    dims = Dims(na, nb)
    ea, eb = np.eye(na), np.eye(nb)
    pts = [ProductVector(ea[i], eb[j])
           for i, j in itertools.product(range(na), range(nb))]
    if count is not None:
        pts = pts[:count]
    return face_from_zeros(pts), dims


def test_v_reg_reference_values():
    assert v_reg(8, np.sqrt(2.0)) == pytest.approx(3.0 / factorial(8),
                                                   rel=1e-12)
    assert v_reg(2, 1.0) == pytest.approx(np.sqrt(3.0) / 4.0, rel=1e-12)
    assert v_reg(1, np.sqrt(2.0)) == pytest.approx(np.sqrt(2.0), rel=1e-12)
    with pytest.raises(ValueError):
        v_reg(0, 1.0)


@pytest.mark.parametrize("n", range(1, 9))
def test_cm_volume_matches_regular_simplex(n):
    # n+1 mutually orthogonal pure product states form a regular simplex
    # with edge length sqrt(2) in Hilbert-Schmidt distance
    face, _ = _basis_face(3, 3, count=n + 1)
    assert cm_volume(face) == pytest.approx(v_reg(n, np.sqrt(2.0)),
                                            rel=1e-12)


def test_cm_volume_orthogonal_segment():
    face, _ = _basis_face(2, 2, count=2)
    assert cm_volume(face) == pytest.approx(np.sqrt(2.0), rel=1e-14)
    single, _ = _basis_face(2, 2, count=1)
    assert cm_volume(single) == 0.0


def test_cm_volume_degenerate_vertices():
    dims = Dims(2, 2)
    p = random_product_vector(dims, np.random.default_rng(0))
    v = pure_product_state(p)
    face = SimplexFace((v, v, v), dims)
    assert cm_volume(face) == pytest.approx(0.0, abs=1e-12)


def test_cm_volume_permutation_invariant():
    rng = np.random.default_rng(1)
    pts = [random_product_vector(Dims(3, 3), rng) for _ in range(5)]
    base = cm_volume(face_from_zeros(pts))
    for perm in itertools.islice(itertools.permutations(pts), 6):
        assert cm_volume(face_from_zeros(list(perm))) == pytest.approx(
            base, rel=1e-10)


def test_r_m_reference_value():
    assert r_m(Dims(3, 3)) == pytest.approx(1.0 / np.sqrt(72.0), rel=1e-14)
    assert r_m(Dims(2, 4)) == pytest.approx(1.0 / np.sqrt(56.0), rel=1e-14)


def test_closest_state_single_vertex():
    face, dims = _basis_face(3, 3, count=1)
    cs = closest_state(face)
    n = dims.n
    assert cs.d_min == pytest.approx(np.sqrt((n - 1.0) / n), rel=1e-12)
    assert cs.rank == 1
    assert cs.weights == pytest.approx(np.array([1.0]))


def test_closest_state_full_basis_contains_center():
    face, dims = _basis_face(3, 3)
    cs = closest_state(face)
    assert cs.d_min < 1e-10
    assert cs.interior
    assert cs.rank == 9
    assert np.max(np.abs(cs.weights - 1.0 / 9.0)) < 1e-8
    assert np.max(np.abs(cs.rho_min.entries - np.eye(9) / 9.0)) < 1e-10


def test_closest_state_is_convex_combination():
    rng = np.random.default_rng(2)
    pts = [random_product_vector(Dims(3, 3), rng) for _ in range(6)]
    face = face_from_zeros(pts)
    cs = closest_state(face)
    assert cs.weights.sum() == pytest.approx(1.0, abs=1e-12)
    assert np.all(cs.weights >= 0.0)
    rho = sum(w * v.entries for w, v in zip(cs.weights, face.vertices))
    assert np.max(np.abs(rho - cs.rho_min.entries)) < 1e-12
    # no direction inside the simplex improves the distance
    n = face.dims.n
    for v in face.vertices:
        step = 1e-6 * (v.entries - cs.rho_min.entries)
        moved = cs.rho_min.entries + step
        assert np.linalg.norm(moved - np.eye(n) / n) \
            >= cs.d_min - 1e-9


def test_center_distance_matches_vertex_average():
    face, dims = _basis_face(2, 2, count=2)
    center = 0.5 * (face.vertices[0].entries + face.vertices[1].entries)
    want = np.linalg.norm(center - np.eye(4) / 4.0)
    assert center_distance(face) == pytest.approx(want, rel=1e-14)


def test_transform_face_keeps_vertices_pure():
    rng = np.random.default_rng(3)
    face, dims = _basis_face(2, 2)
    va = np.eye(2) + 0.2 * rng.standard_normal((2, 2))
    vb = np.eye(2) + 0.2 * rng.standard_normal((2, 2))
    out = transform_face(face, va, vb)
    for v in out.vertices:
        evals = np.linalg.eigvalsh(v.entries)
        assert evals[-1] == pytest.approx(1.0, abs=1e-10)
        assert np.max(np.abs(evals[:-1])) < 1e-10


def test_optimize_shape_recovers_regular_volume():
    # distort the regular product-basis simplex with a product
    # transformation, then ask the optimizer to restore the volume
    face, dims = _basis_face(2, 2)
    regular = cm_volume(face)
    va = np.array([[1.25, 0.3], [0.1, 0.8]])
    vb = np.array([[0.8, -0.2], [0.25, 1.25]])
    distorted = transform_face(face, va, vb)
    assert cm_volume(distorted) < regular
    best, value, _ = optimize_shape(distorted, MAX_VOLUME)
    assert value >= cm_volume(distorted) - 1e-12
    assert value / regular > 1.0 - 1e-6


def test_optimize_shape_center_distance_and_bad_objective():
    face, _ = _basis_face(2, 2, count=3)
    best, value, _ = optimize_shape(face, MIN_CENTER_DISTANCE, max_iter=50)
    assert value <= center_distance(face) + 1e-12
    with pytest.raises(ValueError):
        optimize_shape(face, "spin")


def test_ppt_entangled_state_from_witness_face():
    # mix the closest separable state of the witness's zero simplex
    # toward the outside: the result stays PPT but the witness detects it
    from witness_forge.catalog import robertson
    rb = robertson()
    rng = np.random.default_rng(4)
    pts = list(rb.analytic_zeros)
    pts += [rb.continuum_sampler(rng=rng) for _ in range(30)]
    cs = closest_state(face_from_zeros(pts))
    assert cs.rank == 16  # full rank, so there is room to mix outward
    sigma, p = ppt_entangled_state(rb.witness, cs.rho_min)
    assert p > 1.0
    assert is_ppt(sigma)
    overlap = np.real(np.trace(rb.witness.entries @ sigma.entries))
    assert overlap < -1e-12

import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from immobilization import (
    apply_displacement,
    centred_contacts,
    centred_feasible_witness,
    centroid_contacts,
    contacts_from_points,
    displacement_basis,
    displacement_space_rank,
    immobilizes,
    make_simplex,
    normals_from_vertices,
    penetration_matrix,
    symmetry_projection_coords,
    worked_example,
)
from immobilization.errors import BadInput, LeftFace, NotCentredFeasible, NotInSpace
from immobilization.sampling import random_coeffs, random_simplex
from immobilization.synthesis import centred_barycentric, displacement_dependency, displacement_matrix, wedge_defect


def regular_simplex(n):
    E = np.eye(n + 1)
    E -= E.mean(axis=0)
    # orthonormal coordinates inside the sum-zero hyperplane
    Q, _ = np.linalg.qr(E.T)
    return make_simplex(E @ Q[:, :n])


def test_triangle_centroids(triangle):
    c = centroid_contacts(triangle)
    np.testing.assert_allclose(c.points, [[.5, .5], [0, .5], [.5, 0]], atol=1e-15)


def test_centroid_eigenvalues_n4(rng):
    s = random_simplex(rng, 4)
    v = immobilizes(s, centroid_contacts(s))
    np.testing.assert_allclose(v.eigenvalues, [s.volume] * 4, rtol=1e-10)


def test_worked_example_simplex_centroids():
    s = worked_example.build().simplex
    v = immobilizes(s, centroid_contacts(s))
    assert v.immobilizes and v.margin == pytest.approx(1.0)


def test_centred_witness_triangle(triangle):
    w = centred_feasible_witness(triangle)
    r2 = math.sqrt(2)
    np.testing.assert_allclose(w.mu, np.array([r2, 1, 1]) / (2 + r2))
    c, w2 = centred_contacts(triangle, w.z)
    assert immobilizes(triangle, c).immobilizes
    np.testing.assert_allclose(w2.z, w.z)


def test_centred_witness_lambda_formula(rng):
    s = random_simplex(rng, 3)
    f = normals_from_vertices(s)
    N = f.normals
    norms = np.linalg.norm(N, axis=1)
    w = centred_feasible_witness(s)
    L = centred_barycentric(f, w.mu)
    for i in range(4):
        for j in range(4):
            if i != j:
                expect = norms[j] * (norms[j] * norms[i] - N[i] @ N[j]) / (norms[j] ** 2 * norms.sum())
                assert L[i, j] == pytest.approx(expect, rel=1e-10)
                assert L[i, j] > 0


def test_centred_normal_lines_meet_at_z(rng):
    s = random_simplex(rng, 4)
    f = normals_from_vertices(s)
    w = centred_feasible_witness(s)
    c, _ = centred_contacts(s, w.z)
    for p, k, t in zip(c.points, f.normals, w.t):
        np.testing.assert_allclose(p, w.z + t * k, atol=1e-12 * s.diameter)
    A = penetration_matrix(f, c).A
    np.testing.assert_allclose(A, sum(t * np.outer(k, k) for k, t in zip(f.normals, w.t)),
                               atol=1e-10 * np.abs(A).max())


def test_worked_example_simplex_centred():
    s = worked_example.build().simplex
    c, _ = centred_contacts(s, centred_feasible_witness(s).z)
    off = c.Lam[~np.eye(5, dtype=bool)]
    assert off.min() > 0


def test_centred_exterior_point(triangle, triangle_fan):
    # beyond vertex 0 the lines to faces 1 and 2 run backwards
    z = np.array([1 / 3, 1 / 3]) - 10 * triangle_fan.normals[0]
    with pytest.raises(NotCentredFeasible) as err:
        centred_contacts(triangle, z)
    assert ("t", 1) in err.value.violations and ("t", 2) in err.value.violations
    # beyond face 0 the line to face 0 itself runs backwards
    with pytest.raises(NotCentredFeasible) as err:
        centred_contacts(triangle, np.array([1 / 3, 1 / 3]) + 10 * triangle_fan.normals[0])
    assert ("t", 0) in err.value.violations


@pytest.mark.parametrize("n", [2, 3, 5])
def test_regular_simplex_uniform_weights(n):
    w = centred_feasible_witness(regular_simplex(n))
    np.testing.assert_allclose(w.mu, 1 / (n + 1), rtol=1e-12)


def test_triangle_projected_normals(triangle_fan):
    b = displacement_basis(triangle_fan)
    np.testing.assert_allclose(b.projected[0, 1], [-0.5, 0.5], atol=1e-15)
    np.testing.assert_allclose(b.projected[1, 0], [0, 1], atol=1e-15)


@given(n=st.integers(2, 7), seed=st.integers(0, 2**32 - 1))
@settings(max_examples=40, deadline=None)
def test_projection_properties(n, seed):
    f = normals_from_vertices(random_simplex(np.random.default_rng(seed), n))
    b = displacement_basis(f)
    N = f.normals
    scale = np.abs(N).max() ** 2
    for i in range(n + 1):
        others = [j for j in range(n + 1) if j != i]
        np.testing.assert_allclose(N[i] @ b.projected[i, others].T, 0, atol=1e-12 * scale)
        np.testing.assert_allclose(b.projected[i, others].sum(axis=0), 0,
                                   atol=1e-12 * np.abs(N).max())


@pytest.mark.parametrize("n,rank", [(2, 2), (3, 5), (4, 9), (5, 14)])
def test_displacement_rank(n, rank, rng):
    b = displacement_basis(normals_from_vertices(random_simplex(rng, n)))
    assert displacement_space_rank(b) == rank
    dep = displacement_dependency(b)
    assert dep.shape == (len(b.pairs), 1)
    np.testing.assert_allclose(dep[:, 0], 1.0, atol=1e-10)


def test_generators_keep_symmetry_and_faces(rng):
    s = random_simplex(rng, 4)
    f = normals_from_vertices(s)
    for dP in displacement_basis(f).generators.values():
        assert wedge_defect(f, dP) <= 1e-12 * np.abs(f.K).max() ** 2
        np.testing.assert_allclose(np.einsum("ij,ji->i", f.normals, dP), 0,
                                   atol=1e-12 * np.abs(f.K).max() ** 2)


def test_zero_coeffs_leave_contacts(rng):
    s = random_simplex(rng, 3)
    c = centroid_contacts(s)
    moved = apply_displacement(s, c, {(0, 1): 0.0, (2, 3): 0.0})
    np.testing.assert_allclose(moved.P, c.P, atol=1e-15)


def test_small_pair_displacement_spectrum(rng):
    s = random_simplex(rng, 4)
    f = normals_from_vertices(s)
    b = displacement_basis(f)
    rate = np.linalg.norm(b.projected[0, 1]) * np.linalg.norm(b.projected[1, 0])
    t = 0.1 * s.volume / rate
    c = apply_displacement(s, centroid_contacts(s), {(0, 1): t})
    w = penetration_matrix(f, c).eigenvalues
    vol = s.volume
    np.testing.assert_allclose(w, np.sort([vol - t * rate, vol, vol, vol + t * rate]), rtol=1e-9)


def test_critical_displacement_is_not_immobilizing(rng):
    # the critical single-pair step leaves the faces, so keep the contacts on
    # their face hyperplanes only; the verdict still applies with strict cleared
    s = random_simplex(rng, 4)
    f = normals_from_vertices(s)
    b = displacement_basis(f)
    rate = np.linalg.norm(b.projected[0, 1]) * np.linalg.norm(b.projected[1, 0])
    t = 2 * s.volume / rate
    with pytest.raises(LeftFace):
        apply_displacement(s, centroid_contacts(s), {(0, 1): t})
    dP = displacement_matrix(b, {(0, 1): t})
    c = contacts_from_points(s, centroid_contacts(s).points + dP.T)
    m = penetration_matrix(f, c)
    assert abs(m.min_pair_sum) <= 1e-9 * np.abs(m.A).max()
    v = immobilizes(s, c)
    assert v.symmetric and not v.immobilizes and not v.strict


def test_huge_step_leaves_face(triangle):
    with pytest.raises(LeftFace):
        apply_displacement(triangle, centroid_contacts(triangle), {(0, 1): 10.0})


def test_reversed_key_is_same_generator(rng):
    s = random_simplex(rng, 3)
    b = displacement_basis(normals_from_vertices(s))
    np.testing.assert_array_equal(displacement_matrix(b, {(2, 0): 0.3}),
                                  displacement_matrix(b, {(0, 2): 0.3}))
    with pytest.raises(ValueError):
        displacement_matrix(b, {(1, 1): 1.0})


def test_projection_of_single_generator(rng):
    f = normals_from_vertices(random_simplex(rng, 3))
    b = displacement_basis(f)
    coords = symmetry_projection_coords(f, b.generator(0, 1))
    vals = np.array([coords[p] for p in b.pairs])
    # min-norm solution: the generator minus the mean along the all-equal dependency
    unit = np.array([1.0 if p == (0, 1) else 0.0 for p in b.pairs])
    np.testing.assert_allclose(vals, unit - unit.mean(), atol=1e-9)
    np.testing.assert_allclose(displacement_matrix(b, coords), b.generator(0, 1), atol=1e-10)


def test_projection_rejects_single_column(rng):
    f = normals_from_vertices(random_simplex(rng, 3))
    dP = np.zeros((3, 4))
    dP[:, 0] = displacement_basis(f).projected[0, 1]
    with pytest.raises(NotInSpace) as err:
        symmetry_projection_coords(f, dP)
    assert err.value.wedge_defect > 0


def test_projection_rejects_off_face_column(rng):
    f = normals_from_vertices(random_simplex(rng, 2))
    dP = np.zeros((2, 3))
    dP[:, 0] = f.normals[0]
    with pytest.raises(BadInput):
        symmetry_projection_coords(f, dP)


@given(n=st.integers(2, 6), seed=st.integers(0, 2**32 - 1))
@settings(max_examples=40, deadline=None)
def test_projection_round_trip(n, seed):
    rng = np.random.default_rng(seed)
    f = normals_from_vertices(random_simplex(rng, n))
    b = displacement_basis(f)
    dP = displacement_matrix(b, random_coeffs(rng, n))
    back = displacement_matrix(b, symmetry_projection_coords(f, dP))
    np.testing.assert_allclose(back, dP, atol=1e-9 * max(1.0, np.abs(dP).max()))

import dataclasses

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from immobilization import (
    centroid_contacts,
    contacts_from_barycentric,
    contacts_from_points,
    immobilizes,
    is_almost_positive_definite,
    make_simplex,
    normals_from_vertices,
    penetration_matrix,
    spectral_link_check,
    stochastic_spectrum_bound,
    worked_example,
)
from immobilization.contacts import PenetrationMatrix
from immobilization.errors import BadStochastic, NotSymmetric, OffFace
from immobilization.linalg import jacobi_eigh
from immobilization.sampling import low_pair_sum_contacts, random_barycentric, random_contacts, random_simplex

# columns (0, .9, .1), (.5, 0, .5), (.4, .6, 0)
ASYMMETRIC_TRIANGLE = np.array([[0, .5, .4], [.9, 0, .6], [.1, .5, 0]])


def _diag_matrix(d):
    A = np.diag(np.asarray(d, dtype=float))
    w, Q = jacobi_eigh(A)
    return PenetrationMatrix(A, 0.0, True, w, Q)


def test_edge_midpoints_of_triangle(triangle):
    mids = [[0.5, 0.5], [0, 0.5], [0.5, 0]]
    c = contacts_from_points(triangle, mids)
    np.testing.assert_allclose(c.Lam, (np.ones((3, 3)) - np.eye(3)) / 2, atol=1e-15)
    assert c.strict


def test_worked_example_barycentric_from_points():
    ex = worked_example.build()
    c = contacts_from_points(ex.simplex, ex.contacts.points)
    np.testing.assert_allclose(c.Lam.T, worked_example._f(worked_example.BARYCENTRIC_COLUMNS),
                               atol=1e-12)


def test_point_off_its_face(triangle, triangle_fan):
    pts = centroid_contacts(triangle).points
    pts[1] += 1e-3 * triangle_fan.normals[1]
    with pytest.raises(OffFace) as err:
        contacts_from_points(triangle, pts)
    assert err.value.index == 1


def test_centroid_barycentric(rng):
    s = random_simplex(rng, 4)
    c = contacts_from_barycentric(s, (np.ones((5, 5)) - np.eye(5)) / 4)
    np.testing.assert_allclose(c.P, centroid_contacts(s).P, atol=1e-12)


def test_identity_diagonal_rejected(triangle):
    with pytest.raises(BadStochastic):
        contacts_from_barycentric(triangle, np.eye(3))


def test_non_stochastic_columns_rejected(triangle):
    with pytest.raises(BadStochastic):
        contacts_from_barycentric(triangle, [[0, .5, .5], [.9, 0, .1], [.1, .5, 0]])


@given(n=st.integers(2, 6), seed=st.integers(0, 2**32 - 1))
@settings(max_examples=40, deadline=None)
def test_points_barycentric_round_trip(n, seed):
    rng = np.random.default_rng(seed)
    s = random_simplex(rng, n)
    L = random_barycentric(rng, n)
    c = contacts_from_barycentric(s, L)
    back = contacts_from_points(s, c.points)
    np.testing.assert_allclose(back.Lam, L, atol=1e-10)


def test_worked_example_penetration_matrix():
    ex = worked_example.build()
    np.testing.assert_allclose(ex.A_reference_scale, np.diag([47.6, 27.2, 6.8, -13.6]), atol=1e-9)
    m = penetration_matrix(ex.fan, ex.contacts)
    assert m.symmetric
    np.testing.assert_allclose(m.eigenvalues, np.array([-68, 34, 136, 238]) / 30, atol=1e-12)


@given(n=st.integers(2, 6), seed=st.integers(0, 2**32 - 1))
@settings(max_examples=40, deadline=None)
def test_centroid_matrix_is_volume_identity(n, seed):
    s = random_simplex(np.random.default_rng(seed), n)
    A = penetration_matrix(normals_from_vertices(s), centroid_contacts(s)).A
    np.testing.assert_allclose(A, s.volume * np.eye(n), atol=1e-10 * s.volume)


def test_common_point_gives_zero_matrix(rng):
    s = random_simplex(rng, 3)
    z = rng.standard_normal(3)
    c = contacts_from_points(s, np.tile(z, (4, 1)), check_plane=False)
    A = penetration_matrix(normals_from_vertices(s), c).A
    np.testing.assert_allclose(A, 0, atol=1e-12 * np.abs(normals_from_vertices(s).K).max())


def test_apd_definition_cases():
    assert not is_almost_positive_definite(_diag_matrix([238 / 5, 136 / 5, 34 / 5, -68 / 5]))
    assert is_almost_positive_definite(_diag_matrix([1, 1, 1]))
    assert is_almost_positive_definite(_diag_matrix([3, -1]))


def test_apd_requires_symmetric():
    with pytest.raises(NotSymmetric):
        is_almost_positive_definite(PenetrationMatrix(np.array([[1.0, 2], [0, 1]]), 2.0, False))


def test_triangle_centroids_immobilize(triangle):
    v = immobilizes(triangle, centroid_contacts(triangle))
    assert v.symmetric and v.almost_positive_definite and v.immobilizes
    assert v.margin == pytest.approx(1.0)
    np.testing.assert_allclose(v.eigenvalues, [0.5, 0.5])


def test_worked_example_verdict():
    ex = worked_example.build()
    v = ex.verdict
    assert v.symmetric and not v.almost_positive_definite and not v.immobilizes
    assert ex.reproduced


def test_asymmetric_triangle_contacts(triangle):
    c = contacts_from_barycentric(triangle, ASYMMETRIC_TRIANGLE)
    v = immobilizes(triangle, c)
    assert not v.symmetric and not v.immobilizes
    assert v.eigenvalues is None and v.margin is None
    assert v.symmetric_defect > 0.1


def test_boundary_contact_is_flagged(triangle):
    L = np.array([[0, .5, .5], [1, 0, .5], [0, .5, 0]])
    v = immobilizes(triangle, contacts_from_barycentric(triangle, L))
    assert not v.strict
    assert (2, 0) in v.boundary


def test_verdict_json_keys(triangle):
    d = immobilizes(triangle, centroid_contacts(triangle)).to_json()
    assert set(d) == {"symmetric", "apd", "immobilizes", "margin", "eigenvalues",
                      "symmetric_defect", "strict_interior"}


def test_n3_low_pair_sum_search_stays_positive():
    # the LP search finds negative pair sums readily for n >= 4 but never for n = 3
    rng = np.random.default_rng(3)
    for _ in range(20):
        s = random_simplex(rng, 3)
        m = penetration_matrix(normals_from_vertices(s), low_pair_sum_contacts(s, rng))
        assert m.symmetric and m.min_pair_sum > 0
    s = random_simplex(rng, 4)
    m = penetration_matrix(normals_from_vertices(s), low_pair_sum_contacts(s, rng))
    assert m.symmetric and m.min_pair_sum < 0


def test_spectral_link_worked_example():
    ex = worked_example.build()
    assert spectral_link_check(ex.simplex, ex.contacts)


def test_spectral_link_centroid_block(rng):
    s = random_simplex(rng, 4)
    c = centroid_contacts(s)
    assert spectral_link_check(s, c).ok
    KPt = normals_from_vertices(s).K @ c.P.T
    np.testing.assert_allclose(KPt[1:, 1:], s.volume * np.eye(4), atol=1e-10 * s.volume)


def test_spectral_link_corrupted_lambda(rng):
    s = random_simplex(rng, 3)
    c = random_contacts(rng, s)
    L = c.Lam.copy()
    L[0, 0] = 0.1
    L[1, 0] -= 0.1
    broken = dataclasses.replace(c, Lam=L)
    chk = spectral_link_check(s, broken)
    assert not chk and chk.similarity_residual > 1e-3


def test_spectrum_bound_centroid_matrix():
    L = (np.ones((4, 4)) - np.eye(4)) / 3
    rep = stochastic_spectrum_bound(L)
    assert rep.ok
    assert rep.radius_estimate == pytest.approx(1 / 3, rel=1e-9)


def test_spectrum_bound_two_by_two_swap():
    with pytest.raises(BadStochastic):
        stochastic_spectrum_bound([[0, 1], [1, 0]])


def test_spectrum_bound_random_m5(rng):
    assert stochastic_spectrum_bound(random_barycentric(rng, 4), seed=1).ok


def test_spectrum_bound_rejects_nonzero_diagonal():
    with pytest.raises(BadStochastic):
        stochastic_spectrum_bound(np.full((3, 3), 1 / 3))


def test_spectrum_bound_radius_below_one_matches_eigs(rng):
    L = random_barycentric(rng, 5)
    rep = stochastic_spectrum_bound(L, n_iter=512)
    sub = np.sort(np.abs(np.linalg.eigvals(L)))[-2]
    assert rep.radius_estimate == pytest.approx(sub, rel=0.05)


def test_dimension_mismatch(triangle, rng):
    s3 = random_simplex(rng, 3)
    with pytest.raises(ValueError):
        penetration_matrix(normals_from_vertices(s3), centroid_contacts(triangle))


def test_explicit_triangle_is_positively_oriented():
    s = make_simplex([[0, 0], [2, 0], [0, 3]])
    assert immobilizes(s, centroid_contacts(s)).margin == pytest.approx(1.0)

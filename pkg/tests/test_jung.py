"""Circumcenters, the extended Jung bound and the circumradius function J."""

import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from oracles import brute_enclosing_ball, great_circle, minimax_grid, sphere_xyz
from ripsrecon.jung import (
    NO_EXISTENCE_FLAG,
    check_circum_bound,
    check_subset_center,
    circum_bound_campaign,
    euclidean_circumcenter,
    geodesic_circumcenter,
    jung_J,
    jung_min_diam,
    random_small_set,
    subset_center_campaign,
)
from ripsrecon.manifolds import ManifoldModel, UnsupportedModel

SPHERE = ManifoldModel.sphere2()
CIRCLE = ManifoldModel.circle()
FLAT = ManifoldModel.flat_torus()

# 2 asin(sqrt(3/8)), evaluated independently as 2 atan(x / sqrt(1 - x^2))
JUNG_SPHERE_N2 = 1.318116071652818


@st.composite
def euclidean_sets(draw, dim=2, max_n=9):
    n = draw(st.integers(1, max_n))
    seed = draw(st.integers(0, 2**32 - 1))
    return np.random.default_rng(seed).normal(size=(n, dim))


# -- Euclidean ----------------------------------------------------------------------

def test_euclidean_examples():
    one = euclidean_circumcenter([[0.3, -1.0]])
    assert one.radius == 0 and np.array_equal(one.center, [0.3, -1.0])
    two = euclidean_circumcenter([[0.0, 0.0], [2.0, 2.0]])
    np.testing.assert_allclose(two.center, [1, 1])
    assert two.radius == pytest.approx(math.sqrt(2))
    tri = np.array([[0, 0], [1, 0], [0.5, math.sqrt(3) / 2]])
    res = euclidean_circumcenter(tri)
    oracle_x, oracle_r = minimax_grid(lambda x: np.linalg.norm(tri - x, axis=1).max(), [0, 0], [1, 1])
    assert res.radius == pytest.approx(1 / math.sqrt(3), abs=1e-12)
    assert res.radius == pytest.approx(oracle_r, abs=1e-9)
    np.testing.assert_allclose(res.center, tri.mean(axis=0), atol=1e-12)
    with pytest.raises(ValueError):
        euclidean_circumcenter(np.zeros((0, 2)))


@settings(max_examples=60, deadline=None)
@given(st.sampled_from([1, 2, 3]).flatmap(lambda d: euclidean_sets(dim=d)))
def test_euclidean_matches_support_enumeration(P):
    res = euclidean_circumcenter(P)
    c, r = brute_enclosing_ball(P)
    assert res.radius == pytest.approx(r, abs=1e-9)
    np.testing.assert_allclose(res.center, c, atol=1e-6)
    assert np.all(np.linalg.norm(P - res.center, axis=1) <= res.radius + 1e-12)


def test_high_dimension_residual_is_certified():
    P = np.random.default_rng(4).normal(size=(12, 5))
    res = euclidean_circumcenter(P)
    _, r = brute_enclosing_ball(P)
    assert res.residual > 0
    assert r - 1e-12 <= res.radius <= r + res.residual + 1e-12


# -- geodesic -------------------------------------------------------------------------

def test_sphere_two_points_midpoint():
    p = np.array([1.0, 0.3])
    q = np.array([1.0 + 0.4, 0.3])  # same meridian, geodesic distance 0.4
    res = geodesic_circumcenter(SPHERE, [p, q])
    assert res.radius == pytest.approx(0.2, abs=1e-12)
    np.testing.assert_allclose(res.center, [1.2, 0.3], atol=1e-12)


def test_sphere_polar_circle_centers_on_pole():
    P = np.array([[0.1, 0.0], [0.1, 2 * math.pi / 3], [0.1, 4 * math.pi / 3]])
    res = geodesic_circumcenter(SPHERE, P)
    assert res.radius == pytest.approx(0.1, abs=1e-12)
    assert res.center[0] == pytest.approx(0.0, abs=1e-9)
    U = [sphere_xyz(*p) for p in P]

    def worst(x):
        c = sphere_xyz(x[0], x[1])
        return max(great_circle(c, u) for u in U)

    _, r = minimax_grid(worst, [0, 0], [0.3, 2 * math.pi], steps=31, rounds=25)
    assert res.radius == pytest.approx(r, abs=1e-8)


@pytest.mark.parametrize("seed", range(6))
def test_sphere_center_matches_grid_oracle(seed):
    rng = np.random.default_rng(seed)
    P = random_small_set(SPHERE, 4, rng)
    res = geodesic_circumcenter(SPHERE, P)
    U = [sphere_xyz(*p) for p in P]
    c0 = SPHERE.embed(res.center[None])[0]
    e1 = np.cross(c0, [0.3, 0.5, 0.8])
    e1 /= np.linalg.norm(e1)
    e2 = np.cross(c0, e1)

    def worst(x):
        v = c0 + x[0] * e1 + x[1] * e2
        v /= np.linalg.norm(v)
        return max(great_circle(v, u) for u in U)

    _, r = minimax_grid(worst, [-0.2, -0.2], [0.2, 0.2], steps=21, rounds=25)
    assert res.radius == pytest.approx(r, abs=1e-8)


def test_single_point_and_unsupported():
    res = geodesic_circumcenter(SPHERE, [[0.4, 0.2]])
    assert res.radius == 0
    with pytest.raises(UnsupportedModel):
        geodesic_circumcenter(ManifoldModel.embedded_torus(), [[0.0, 0.0]])


def test_circle_center():
    res = geodesic_circumcenter(CIRCLE, [[0.1], [0.5], [6.2]])
    assert res.radius == pytest.approx((0.5 - (6.2 - 2 * math.pi)) / 2)


@settings(max_examples=30, deadline=None)
@given(st.integers(0, 2**32 - 1), st.integers(2, 6))
def test_flat_torus_agrees_with_euclidean(seed, k):
    rng = np.random.default_rng(seed)
    L = FLAT.params["L"]
    c = rng.uniform(0.3 * L, 0.7 * L, 2)
    P = c + rng.uniform(-0.2, 0.2, (k, 2)) * L / 4
    a = geodesic_circumcenter(FLAT, P)
    b = euclidean_circumcenter(P)
    assert a.radius == pytest.approx(b.radius, abs=1e-7)
    np.testing.assert_allclose(a.center, b.center, atol=1e-7)


@pytest.mark.parametrize("m", [SPHERE, CIRCLE, FLAT])
def test_radius_between_jung_and_diameter(m):
    rng = np.random.default_rng(11)
    for _ in range(100):
        P = random_small_set(m, int(rng.integers(2, 7)), rng)
        res = geodesic_circumcenter(m, P)
        diam = m.pairwise_geodesic(P).max()
        assert 4 / 3 * res.radius <= diam + 1e-8
        assert diam <= 2 * res.radius + 1e-9
        assert res.radius <= diam + 1e-12


def test_fallback_is_flagged_and_deterministic():
    P = np.array([[0.2, 0.0], [1.2, 2.0], [2.5, 4.0]])
    a = geodesic_circumcenter(SPHERE, P, seed=3)
    b = geodesic_circumcenter(SPHERE, P, seed=3)
    assert NO_EXISTENCE_FLAG in a.flags
    assert a.center.tobytes() == b.center.tobytes()
    assert np.all(SPHERE.pairwise_geodesic(a.center[None], P) <= a.radius + 1e-12)


@settings(max_examples=20, deadline=None)
@given(st.integers(0, 2**32 - 1))
def test_solver_determinism(seed):
    P = random_small_set(SPHERE, 5, np.random.default_rng(seed))
    a, b = geodesic_circumcenter(SPHERE, P), geodesic_circumcenter(SPHERE, P)
    assert a.center.tobytes() == b.center.tobytes() and a.radius == b.radius


# -- Jung bound and J --------------------------------------------------------------

def test_jung_min_diam_examples():
    assert jung_min_diam(1, 2, 0) == pytest.approx(math.sqrt(3), abs=1e-15)
    assert jung_min_diam(1, 1, 0) == 2
    assert jung_min_diam(math.pi / 4, 2, 1) == pytest.approx(JUNG_SPHERE_N2, abs=1e-15)
    with pytest.raises(ValueError, match="pi/\\(2 sqrt\\(kappa\\)\\)"):
        jung_min_diam(2.0, 2, 1)


@pytest.mark.parametrize("n", [1, 2, 3, 7])
def test_jung_continuous_at_zero_curvature(n):
    for R in np.linspace(0, 1, 21):
        flat = jung_min_diam(R, n, 0.0)
        assert abs(jung_min_diam(R, n, 1e-9) - flat) <= 1e-6
        assert abs(jung_min_diam(R, n, -1e-9) - flat) <= 1e-6


@pytest.mark.parametrize("n", [2, 3])
def test_equilateral_meets_flat_jung(n):
    simplex = np.eye(n + 1)  # regular n-simplex in R^{n+1}
    for side in (0.5, 1.0, 3.0):
        P = simplex * side / math.sqrt(2)
        res = euclidean_circumcenter(P)
        diam = side
        assert abs(diam - jung_min_diam(res.radius, n, 0.0)) <= 1e-9


def test_J_examples():
    assert jung_J(math.pi / 4, 1.0, 2) == pytest.approx(JUNG_SPHERE_N2, abs=1e-15)
    for n in (2, 3, 10, 100):
        assert jung_J(math.pi / 4, 1.0, n) / (math.pi / 4) >= 4 / 3
    for n in (2, 5):
        r = 1e-6
        assert jung_J(r, 1.0, n) / r == pytest.approx(2 * math.sqrt((n + 1) / (2 * n)), abs=1e-4)
    with pytest.raises(ValueError):
        jung_J(0.0, 1.0, 2)
    with pytest.raises(ValueError):
        jung_J(1.0, 1.0, 2)


def test_J_vectorised():
    r = np.linspace(0.1, math.pi / 4, 5)
    np.testing.assert_allclose(jung_J(r, 1.0, 3), [jung_J(float(x), 1.0, 3) for x in r])


# -- checks -----------------------------------------------------------------------------

def test_circum_bound_examples():
    rep = check_circum_bound(SPHERE, [[0.5, 0.1], [0.9, 0.1]])
    assert rep["ratio"] == pytest.approx(2) and rep["pass"] and rep["in_hypothesis"]
    tri = np.array([[0, 0], [1, 0], [0.5, math.sqrt(3) / 2]])
    rep = check_circum_bound(None, tri)
    assert rep["ratio"] == pytest.approx(math.sqrt(3)) and rep["pass"]
    far = check_circum_bound(SPHERE, [[0.2, 0.0], [2.5, 0.0]])
    assert not far["in_hypothesis"] and "out of hypothesis" in far["flags"]


def test_subset_center_examples():
    rng = np.random.default_rng(2)
    P = random_small_set(SPHERE, 5, rng)
    rep = check_subset_center(SPHERE, P, range(5))
    assert rep["distance"] == pytest.approx(0, abs=1e-12)
    single = check_subset_center(SPHERE, P, [2])
    radius = geodesic_circumcenter(SPHERE, P).radius
    assert single["distance"] <= radius + 1e-12 <= single["bound"] + 1e-8
    with pytest.raises(ValueError):
        check_subset_center(SPHERE, P, [7])
    with pytest.raises(ValueError):
        check_subset_center(SPHERE, P, [])


@pytest.mark.parametrize("m", [SPHERE, CIRCLE, FLAT])
def test_small_campaigns(m):
    assert circum_bound_campaign(m, 60, 5)["pass"]
    assert subset_center_campaign(m, 60, 6)["pass"]


def test_random_small_set_below_delta():
    rng = np.random.default_rng(0)
    for _ in range(200):
        P = random_small_set(SPHERE, 6, rng)
        assert SPHERE.pairwise_geodesic(P).max() < SPHERE.delta

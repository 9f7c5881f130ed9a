"""Simplicial complexes, Rips construction, subdivision and simplicial maps."""

import itertools
import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from oracles import brute_rips, face_chains
from ripsrecon.complex import (
    ComplexTooLarge,
    NotSimplicialError,
    PreconditionError,
    SimplicialComplex,
    SimplicialMap,
    barycentric_subdivision,
    check_homotopy_conditions,
    check_simplicial,
    connected_components,
    contiguous,
    cycle_complex,
    is_connected,
    rips_complex,
)
from ripsrecon.homology import betti_numbers, euler_characteristic
from ripsrecon.manifolds import Grid, ManifoldModel, Random, sample
from ripsrecon.metric import FiniteMetricSpace


def circle_ms(n):
    th = 2 * math.pi * np.arange(n) / n
    return FiniteMetricSpace(ManifoldModel.circle().pairwise_geodesic(th[:, None]))


@st.composite
def point_sets(draw, max_n=10):
    n = draw(st.integers(1, max_n))
    seed = draw(st.integers(0, 2**32 - 1))
    return FiniteMetricSpace.from_points(np.random.default_rng(seed).uniform(0, 1, (n, 2)))


@st.composite
def small_complexes(draw, max_vertices=7):
    nv = draw(st.integers(1, max_vertices))
    gens = draw(st.lists(st.lists(st.integers(0, nv - 1), min_size=1, max_size=4, unique=True),
                         min_size=1, max_size=8))
    return SimplicialComplex(gens)


# -- Rips --------------------------------------------------------------------

def test_rips_strict_threshold():
    ms = FiniteMetricSpace(np.ones((3, 3)) - np.eye(3))
    K = rips_complex(ms, 1.0, max_dim=2)
    assert K.f_vector() == (3, 0, 0)
    assert rips_complex(ms, 1.01, max_dim=2).f_vector() == (3, 3, 1)


def test_rips_four_cycle():
    K = rips_complex(circle_ms(4), 1.6, max_dim=2)
    assert K.f_vector() == (4, 4, 0)
    assert (0, 2) not in K and (1, 3) not in K


def test_rips_rejects_nonpositive_beta():
    with pytest.raises(ValueError):
        rips_complex(circle_ms(4), 0.0)


@settings(max_examples=40, deadline=None)
@given(point_sets(), st.floats(0.05, 1.5), st.integers(0, 3))
def test_rips_matches_brute_force(ms, beta, max_dim):
    K = rips_complex(ms, beta, max_dim=max_dim)
    assert set(K) == brute_rips(ms.dist, beta, max_dim)


@settings(max_examples=30, deadline=None)
@given(point_sets(), st.floats(0.05, 1.5))
def test_rips_is_flag(ms, beta):
    K = rips_complex(ms, beta, max_dim=3)
    edges = set(K.simplices(1))
    for k in range(3, 5):
        for s in itertools.combinations(range(ms.n), k):
            if all(e in edges for e in itertools.combinations(s, 2)):
                assert s in set(K)


@settings(max_examples=30, deadline=None)
@given(point_sets(), st.floats(0.05, 1.5), st.floats(0.0, 0.5))
def test_rips_monotone(ms, beta, extra):
    small = rips_complex(ms, beta, max_dim=2)
    big = rips_complex(ms, beta + extra, max_dim=2)
    assert set(small) <= set(big)
    assert small.is_subcomplex_of(big)


def test_rips_membership_above_max_dim():
    K = rips_complex(circle_ms(12), 1.2, max_dim=1)
    assert (0, 1, 2) in K
    assert K.margin((0, 1)) == pytest.approx(1.2 - math.pi / 6)


def test_rips_budget():
    with pytest.raises(ComplexTooLarge):
        rips_complex(circle_ms(30), 10.0, max_dim=5, budget=1000)


def test_truncated_complex_roundtrip(tmp_path):
    K = SimplicialComplex([(0, 1, 2, 3)], max_dim=1)
    assert not K.complete
    K.save(tmp_path / "k.json")
    L = SimplicialComplex.load(tmp_path / "k.json")
    assert L == K and not L.complete
    full = SimplicialComplex([(0, 1, 2)])
    full.save(tmp_path / "f.json")
    assert SimplicialComplex.load(tmp_path / "f.json") == full


# -- subdivision ---------------------------------------------------------------

def test_subdivision_examples():
    assert barycentric_subdivision(SimplicialComplex([(0, 1)])).f_vector() == (3, 2)
    tri = barycentric_subdivision(SimplicialComplex([(0, 1, 2)]))
    chains = face_chains(SimplicialComplex([(0, 1, 2)]))
    assert tri.f_vector() == (7, 12, 6) == tuple(chains[k] for k in range(3))
    pts = barycentric_subdivision(SimplicialComplex([(0,), (1,)]))
    assert pts.f_vector() == (2,)


@settings(max_examples=40, deadline=None)
@given(small_complexes())
def test_subdivision_matches_chain_enumeration(K):
    sd = barycentric_subdivision(K)
    chains = face_chains(K)
    assert sd.f_vector() == tuple(chains.get(k, 0) for k in range(len(sd.f_vector())))
    for s in sd:
        ch = sd.chain(s)
        assert all(set(a) < set(b) for a, b in zip(ch, ch[1:]))


@settings(max_examples=40, deadline=None)
@given(small_complexes())
def test_subdivision_preserves_euler_and_betti(K):
    sd = barycentric_subdivision(K)
    assert euler_characteristic(sd) == euler_characteristic(K)
    assert tuple(betti_numbers(sd)) == tuple(betti_numbers(K))


# -- simplicial maps ---------------------------------------------------------------

def square():
    return SimplicialComplex([(0, 1), (1, 2), (2, 3), (0, 3)])


def test_check_simplicial_examples():
    K = square()
    ident = check_simplicial({v: v for v in K.vertices}, K, K)
    assert isinstance(ident, SimplicialMap)
    check_simplicial({v: 2 for v in K.vertices}, K, K)
    # edge {0,1} sent onto the diagonal {0,2}, which is not in L
    with pytest.raises(NotSimplicialError) as err:
        check_simplicial({0: 0, 1: 2, 2: 2, 3: 3}, K, K)
    assert err.value.simplex == (0, 1)
    with pytest.raises(ValueError):
        check_simplicial({0: 0}, K, K)


def test_contiguity_examples():
    K, L = SimplicialComplex([(0, 1)]), square()
    a = check_simplicial({0: 0, 1: 1}, K, L)
    assert contiguous(a, a)
    b = check_simplicial({0: 2, 1: 2}, K, L)
    res = contiguous(a, b)
    assert not res and res.witness in {(0,), (0, 1)}
    with pytest.raises(ValueError):
        contiguous(a, check_simplicial({0: 0, 1: 1}, K, K))


@settings(max_examples=40, deadline=None)
@given(small_complexes(5), st.data())
def test_contiguous_symmetric(K, data):
    L = SimplicialComplex([tuple(range(6))], max_dim=3)
    vs = K.vertices
    f = check_simplicial({v: data.draw(st.integers(0, 5)) for v in vs}, K, L)
    g = check_simplicial({v: data.draw(st.integers(0, 5)) for v in vs}, K, L)
    assert bool(contiguous(f, g)) == bool(contiguous(g, f))
    C = cycle_complex(6)
    f2 = {v: v % 6 for v in vs}
    g2 = {v: (v + data.draw(st.integers(0, 2))) % 6 for v in vs}
    try:
        fm, gm = check_simplicial(f2, K, C), check_simplicial(g2, K, C)
    except NotSimplicialError:
        return
    assert bool(contiguous(fm, gm)) == bool(contiguous(gm, fm))


def test_homotopy_conditions_examples():
    K = SimplicialComplex([(0, 1, 2)])
    sd = barycentric_subdivision(K)
    L = rips_complex(FiniteMetricSpace.from_points([[0, 0], [1, 0], [0, 1]]), 2.0, max_dim=2)
    f = check_simplicial({0: 0, 1: 1, 2: 2}, K, L)
    gmap = {i: s[0] for i, s in enumerate(sd.barycenters)}
    g = check_simplicial(gmap, sd, L)
    res = check_homotopy_conditions(f, g, L)
    assert res and res.margins["condition_b"] > 0
    bad = dict(gmap)
    bad[sd.vertex_of[(1,)]] = 0
    res = check_homotopy_conditions(f, check_simplicial(bad, sd, L), L)
    assert not res and res.witness == ("a", (1,))


def test_homotopy_conditions_preconditions():
    K = SimplicialComplex([(0, 1, 2), (2, 3)])
    sd = barycentric_subdivision(K)
    L = SimplicialComplex([tuple(range(4))])
    f = check_simplicial({v: v for v in K.vertices}, K, L)
    g = check_simplicial({i: s[0] for i, s in enumerate(sd.barycenters)}, sd, L)
    with pytest.raises(PreconditionError, match="pure"):
        check_homotopy_conditions(f, g, L)
    hollow = SimplicialComplex([(0, 1), (1, 2), (0, 2)], max_dim=2)
    K2 = SimplicialComplex([(0, 1)])
    sd2 = barycentric_subdivision(K2)
    f2 = check_simplicial({0: 0, 1: 1}, K2, hollow)
    g2 = check_simplicial({0: 0, 1: 1, 2: 0}, sd2, hollow)
    with pytest.raises(PreconditionError, match="flag"):
        check_homotopy_conditions(f2, g2, hollow)


# -- connectivity -----------------------------------------------------------------

def test_connectivity_examples():
    assert is_connected(SimplicialComplex([(0,)]))
    assert not is_connected(SimplicialComplex([(0,), (1,)]))
    assert is_connected(rips_complex(circle_ms(50), 1.0, max_dim=1))


@settings(max_examples=30, deadline=None)
@given(small_complexes())
def test_components_match_b0(K):
    assert connected_components(K) == betti_numbers(K, 0)[0]


@pytest.mark.parametrize("model", [ManifoldModel.circle(), ManifoldModel.sphere2(),
                                   ManifoldModel.flat_torus(), ManifoldModel.embedded_torus()])
@pytest.mark.parametrize("seed", [0, 1, 2])
def test_rips_connected_above_twice_fill(model, seed):
    smp = sample(model, Random(40, seed))
    beta = smp.fill_bound * (1 + 1e-9)
    alpha = 1e-3
    assert is_connected(rips_complex(smp.metric_space(), alpha + 2 * beta, max_dim=1))


def test_cycle_complex():
    C = cycle_complex(5)
    assert C.f_vector() == (5, 5) and C.is_pure() == 1
    with pytest.raises(ValueError):
        cycle_complex(2)
    assert tuple(betti_numbers(rips_complex(circle_ms(9), 0.8, max_dim=3), 2)) == (1, 1, 0)
    assert tuple(betti_numbers(barycentric_subdivision(C))) == (1, 1)


def test_grid_sample_connectivity():
    smp = sample(ManifoldModel.circle(), Grid(50))
    assert is_connected(rips_complex(smp.metric_space(), 1.0, max_dim=1))

import itertools

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from kpal2d.grid import Grid, InvalidCenterError, brute_sq_maximal, orbit_of, sq_mismatch_positions
from kpal2d.sq2dp import (QUERY_BOUND_A, QUERY_BOUND_B, SquareIndex, match_trapezoids, sq_baseline,
                          sq_improved, with_positions)


def same(a, b):
    return np.array_equal(a.records(), b.records())


def test_sator_fixtures(sator):
    for algo in (sq_improved, sq_baseline):
        hit = algo(sator, 1, positions=True).find((4, 4))
        assert (hit.side, hit.mismatches, hit.mismatch_positions) == (5, 1, ((3, 2),))
        assert algo(sator, 0).find((4, 4)).record() == ("sq", 4, 4, 1, 0)


def test_uniform_grid_reaches_the_boundary():
    g = Grid.from_rows(["aaaaaaa"] * 7)
    res = sq_improved(g, 0)
    assert res.find((6, 6)).side == 7
    assert same(res, sq_baseline(g, 0))


def test_unproductive_even_centers_are_omitted():
    g = Grid.from_rows(["ab", "cd"])
    assert sq_improved(g, 0).find((1, 1)) is None
    assert sq_improved(g, 2).find((1, 1)).side == 2


def test_trapezoid_streams(sator):
    ix = SquareIndex.build(sator)
    assert match_trapezoids(ix, (4, 4), 0, 1) == []
    stream = match_trapezoids(ix, (4, 4), 1, 1)
    assert (1, (2, 3), (3, 2)) in stream
    uniform = SquareIndex.build(Grid.from_rows(["aaaaa"] * 5))
    assert all(match_trapezoids(uniform, (4, 4), p, 3) == [] for p in range(4))
    with pytest.raises(InvalidCenterError):
        match_trapezoids(ix, (3, 4), 0, 1)
    with pytest.raises(ValueError):
        match_trapezoids(ix, (4, 4), 4, 1)


@settings(max_examples=40, deadline=None)
@given(st.integers(2, 9), st.integers(2, 9), st.integers(0, 2**32 - 1), st.integers(0, 4))
def test_trapezoid_flags_cover_every_nonuniform_orbit(n, m, seed, k):
    g = Grid.from_symbols(np.random.default_rng(seed).integers(0, 2, (n, m)))
    ix = SquareIndex.build(g)
    for cr in range(2 * n - 1):
        for cc in range(cr % 2, 2 * m - 1, 2):
            streams = [match_trapezoids(ix, (cr, cc), p, k) for p in range(4)]
            for s in streams:
                layers = [e[0] for e in s]
                assert layers == sorted(layers) and len(s) <= k + 1
                for _, a, b in s:
                    assert g[a] != g[b]
                    assert orbit_of((cr, cc), a).positions == orbit_of((cr, cc), b).positions
            if all(len(s) <= k for s in streams):
                flagged = {orbit_of((cr, cc), a).positions for s in streams for _, a, _ in s}
                top = (min(cr, cc, 2 * n - 2 - cr, 2 * m - 2 - cc) + cr % 2) // 2
                side = 2 * top + 1 - cr % 2
                for p in sq_mismatch_positions(g, (cr, cc), side) if side > 0 else ():
                    assert orbit_of((cr, cc), p).positions in flagged


def test_exhaustive_3x3_binary():
    for bits in itertools.product((0, 1), repeat=9):
        g = Grid.from_symbols(np.array(bits).reshape(3, 3))
        for k in range(3):
            want = brute_sq_maximal(g, k)
            assert same(sq_improved(g, k), want)
            assert same(sq_baseline(g, k), want)


@settings(max_examples=60, deadline=None)
@given(st.integers(1, 14), st.integers(1, 14), st.sampled_from([1, 2, 3, 26]),
       st.integers(0, 2**32 - 1), st.integers(0, 6))
def test_random_grids_match_oracle(n, m, sigma, seed, k):
    g = Grid.from_symbols(np.random.default_rng(seed).integers(0, sigma, (n, m)))
    want = brute_sq_maximal(g, k)
    got = sq_improved(g, k, positions=True)
    assert same(got, want)
    assert same(sq_baseline(g, k), want)
    ref = with_positions(g, brute_sq_maximal(g, k), k)
    for a, b in zip(got, ref):
        assert a.mismatch_positions == b.mismatch_positions
        assert a.mismatch_positions == sq_mismatch_positions(g, a.center, a.side)


def test_query_bound_on_random_grid():
    g = Grid.from_symbols(np.random.default_rng(9).integers(0, 2, (32, 32)))
    for k in (0, 3):
        q = sq_improved(g, k).queries
        assert q.shape[0] == sum(len(range(cr % 2, 63, 2)) for cr in range(63))
        assert q[:, 2].max() <= QUERY_BOUND_A * (5 + 5 + k) + QUERY_BOUND_B


def test_negative_budget_rejected(sator):
    with pytest.raises(ValueError):
        sq_improved(sator, -1)

import itertools

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from kpal2d.grid import (BoundsError, Grid, GridFormatError, InvalidCenterError,
                         brute_rect_maximal, brute_sq_maximal, layer_of, orbit_of,
                         rect_mismatch_count, rotate180, sq_layer_deficits,
                         sq_mismatch_count, sq_mismatch_positions)


def grids(max_n=6, max_m=6, sigma=3):
    return st.tuples(st.integers(1, max_n), st.integers(1, max_m), st.integers(0, 2**32 - 1)).map(
        lambda a: Grid.from_symbols(np.random.default_rng(a[2]).integers(0, sigma, (a[0], a[1]))))


def test_from_rows_densifies_codes(sator):
    assert (sator.n, sator.m, sator.sigma) == (5, 5, 9)
    assert sator.rows_text()[3] == "OPXRA"
    assert sator.cells.min() == 0 and sator.cells.max() == 8


def test_ragged_rows_name_the_row():
    with pytest.raises(GridFormatError, match="row 2"):
        Grid.from_rows(["ab", "abc"])
    with pytest.raises(GridFormatError):
        Grid.from_rows([])


def test_cells_are_read_only(sator):
    with pytest.raises(ValueError):
        sator.cells[0, 0] = 1


def test_rotate180_examples():
    assert rotate180((4, 4), (0, 0)) == (4, 4)
    assert rotate180((4, 4), (2, 2)) == (2, 2)
    assert rotate180((1, 4), (0, 4)) == (1, 0)


def test_orbit_examples():
    assert orbit_of((4, 4), (1, 2)).positions == {(1, 2), (2, 1), (2, 3), (3, 2)}
    assert orbit_of((4, 4), (1, 1)).positions == {(1, 1), (3, 3)}
    assert orbit_of((4, 4), (2, 2)).positions == {(2, 2)}
    assert orbit_of((4, 4), (0, 3)).layer == 2
    with pytest.raises(InvalidCenterError):
        orbit_of((1, 2), (0, 0))


def test_sq_count_examples(sator):
    assert sq_mismatch_count(sator, (4, 4), 5) == 1
    assert sq_mismatch_positions(sator, (4, 4), 5) == ((3, 2),)
    assert sq_mismatch_count(Grid.from_rows(["ab", "ba"]), (1, 1), 2) == 0
    assert sq_mismatch_count(Grid.from_rows(["ab", "ca"]), (1, 1), 2) == 1
    assert sq_mismatch_count(Grid.from_rows(["aaa"] * 3), (2, 2), 3) == 0


def test_tie_goes_to_smallest_symbol():
    # both diagonal 2-orbits of the 2x2 square hold {a, b}
    g = Grid.from_rows(["ab", "ab"])
    assert sq_mismatch_count(g, (1, 1), 2) == 2
    assert sq_mismatch_positions(g, (1, 1), 2) == ((0, 1), (1, 1))
    # a 2-2 tie in a 4-orbit costs 2 whichever symbol wins
    g2 = Grid.from_rows(["aba", "bcb", "aba"])
    assert sq_mismatch_count(g2, (2, 2), 3) == 0
    t = Grid.from_rows(["xax", "bcb", "xax"])
    assert sq_mismatch_count(t, (2, 2), 3) == 2
    assert sq_mismatch_positions(t, (2, 2), 3) == ((1, 0), (1, 2))


def test_rect_count_examples(never_seven):
    assert rect_mismatch_count(never_seven, (1, 4), 5, 2) == 1
    assert rect_mismatch_count(Grid.from_rows(["abc"]), (0, 2), 3, 1) == 1
    with pytest.raises(BoundsError):
        rect_mismatch_count(never_seven, (1, 4), 7, 2)
    with pytest.raises(InvalidCenterError):
        rect_mismatch_count(never_seven, (1, 4), 5, 1)


def test_brute_fixtures(sator, never_seven):
    assert brute_sq_maximal(sator, 1).find((4, 4)).record()[1:] == (4, 4, 5, 1)
    assert brute_sq_maximal(sator, 0).find((4, 4)).side == 1
    assert [(r.width, r.height, r.mismatches) for r in brute_rect_maximal(never_seven, 1).at((1, 4))] \
        == [(5, 2, 1)]
    assert [(r.width, r.height, r.mismatches) for r in brute_rect_maximal(never_seven, 0).at((1, 4))] \
        == [(3, 2, 0)]


def test_uniform_grids_are_boundary_limited():
    g = Grid.from_rows(["aaaa"] * 4)
    res = brute_sq_maximal(g, 0)
    assert res.find((2, 2)).side == 3
    for r in res:
        cr, cc = r.center
        assert r.side == min(cr, cc, 6 - cr, 6 - cc) + 1
    rects = brute_rect_maximal(g, 0)
    assert len(rects) == 7 * 7
    assert len(brute_rect_maximal(Grid.from_rows(["aa", "aa"]), 0)) == 9


@settings(max_examples=60, deadline=None)
@given(grids())
def test_orbits_partition_every_square(g):
    for cr in range(2 * g.n - 1):
        for cc in range(cr % 2, 2 * g.m - 1, 2):
            side = min(cr, cc, 2 * g.n - 2 - cr, 2 * g.m - 2 - cc) + 1
            rows = range((cr - side + 1) // 2, (cr + side - 1) // 2 + 1)
            cols = range((cc - side + 1) // 2, (cc + side - 1) // 2 + 1)
            cells = set(itertools.product(rows, cols))
            orbits = {orbit_of((cr, cc), p).positions for p in cells}
            assert set().union(*orbits) == cells
            assert sum(len(o) for o in orbits) == len(cells)
            assert all(len(o) in (1, 2, 4) for o in orbits)
            assert sum(len(o) == 1 for o in orbits) == side % 2
            for o in orbits:
                assert len({layer_of((cr, cc), p) for p in o}) == 1


@settings(max_examples=100, deadline=None)
@given(st.integers(0, 40), st.integers(0, 40), st.integers(-5, 25), st.integers(-5, 25))
def test_rotate180_is_an_involution(cr, cc, i, j):
    assert rotate180((cr, cc), rotate180((cr, cc), (i, j))) == (i, j)


@settings(max_examples=40, deadline=None)
@given(grids())
def test_counts_are_monotone_and_layered(g):
    for cr in range(2 * g.n - 1):
        for cc in range(cr % 2, 2 * g.m - 1, 2):
            top = min(cr, cc, 2 * g.n - 2 - cr, 2 * g.m - 2 - cc) + 1
            prev = 0
            for side in range(1 + cr % 2, top + 1, 2):
                c = sq_mismatch_count(g, (cr, cc), side)
                assert c >= prev
                assert sum(sq_layer_deficits(g, (cr, cc), side)) == c
                assert len(sq_mismatch_positions(g, (cr, cc), side)) == c
                prev = c
    for cr in range(2 * g.n - 1):
        for cc in range(2 * g.m - 1):
            hs = range(1 + cr % 2, min(cr, 2 * g.n - 2 - cr) + 2, 2)
            ws = range(1 + cc % 2, min(cc, 2 * g.m - 2 - cc) + 2, 2)
            table = [[rect_mismatch_count(g, (cr, cc), w, h) for h in hs] for w in ws]
            for a in range(len(ws)):
                for b in range(len(hs)):
                    if a:
                        assert table[a][b] >= table[a - 1][b]
                    if b:
                        assert table[a][b] >= table[a][b - 1]


@settings(max_examples=30, deadline=None)
@given(grids(5, 5, 2))
def test_large_budget_gives_largest_squares(g):
    for r in brute_sq_maximal(g, g.n * g.m):
        cr, cc = r.center
        assert r.side == min(cr, cc, 2 * g.n - 2 - cr, 2 * g.m - 2 - cc) + 1


@settings(max_examples=30, deadline=None)
@given(grids(5, 6, 2), st.integers(0, 3))
def test_rect_oracle_is_a_strict_staircase(g, k):
    res = brute_rect_maximal(g, k)
    for cr in range(2 * g.n - 1):
        for cc in range(2 * g.m - 1):
            pts = [(r.width, r.height) for r in res.at((cr, cc))]
            for (w1, h1), (w2, h2) in zip(pts, pts[1:]):
                assert w1 > w2 and h1 < h2
            for w, h in pts:
                assert rect_mismatch_count(g, (cr, cc), w, h) <= k

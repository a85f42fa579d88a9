import itertools

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from kpal2d.grid import Grid
from kpal2d.naming import (FAMILIES, SQUARE_STREAMS, build_names, char_pos, char_text, diag_layout,
                           diag_pos, naive_name_key, rect_pos, rect_text, sequences_for_rect,
                           sequences_for_square, square_text)


def all_keys(names, t):
    """(level, direction, i, c) -> raw string for every in-range name."""
    out = {}
    for ng in names:
        n, m = ng.names.shape
        for i in range(n):
            for c in range(m):
                key = naive_name_key(t, ng.direction, ng.level, i, c)
                assert (key is None) == (ng.names[i, c] < 0)
                if key is not None:
                    out[(ng.level, ng.direction, i, c)] = (key, int(ng.names[i, c]))
    return out


def assert_sound_and_complete(g):
    names = build_names(g)
    entries = all_keys(names, g.cells)
    by_level = {}
    for (lev, _, _, _), (key, name) in entries.items():
        by_level.setdefault(lev, []).append((key, name))
    for pairs in by_level.values():
        key_to_name = {}
        name_to_key = {}
        for key, name in pairs:
            assert key_to_name.setdefault(key, name) == name
            assert name_to_key.setdefault(name, key) == key


def test_uniform_grid_has_one_name_per_level():
    g = Grid.from_rows(["aaaa"] * 3)
    names = build_names(g)
    for ng in names:
        vals = ng.names[ng.names >= 0]
        assert len(set(vals.tolist())) == 1
    assert names.max_row_level == 2 and names.max_col_level == 1


def test_abba_directions():
    g = Grid.from_rows(["abba"])
    r1 = build_names(g).grids["R"][1][0]
    rb1 = build_names(g).grids["Rb"][1][0]
    assert len({r1[0], r1[1], r1[2]}) == 3
    assert r1[0] == rb1[3]
    assert r1[3] == -1 and rb1[0] == -1


def test_exhaustive_small_binary_grids():
    for n, m in ((1, 4), (2, 2), (2, 3), (3, 3), (2, 4)):
        for bits in itertools.product((0, 1), repeat=n * m):
            assert_sound_and_complete(Grid.from_symbols(np.array(bits).reshape(n, m)))


@settings(max_examples=40, deadline=None)
@given(st.integers(1, 9), st.integers(1, 9), st.integers(1, 3), st.integers(0, 2**32 - 1))
def test_random_grids_sound_and_complete(n, m, sigma, seed):
    g = Grid.from_symbols(np.random.default_rng(seed).integers(0, sigma, (n, m)))
    assert_sound_and_complete(g)


def test_name_storage_bound():
    for n, m in ((8, 8), (17, 5), (3, 40)):
        g = Grid.from_symbols(np.random.default_rng(n).integers(0, 2, (n, m)))
        names = build_names(g)
        assert names.entry_count <= 4 * n * m * (max(n, m).bit_length())


def test_rows_only_and_level_cap():
    g = Grid.from_rows(["abcd", "dcba"])
    names = build_names(g, axes="rows")
    assert names.max_col_level == 0 and names.grids["C"][1] is None
    assert build_names(g, max_level=1).max_row_level == 1
    with pytest.raises(ValueError):
        build_names(g, max_level=3)


def test_rect_sequences():
    rng = np.random.default_rng(0)
    g = Grid.from_symbols(rng.integers(0, 3, (3, 4)))
    names = build_names(g, axes="rows")
    seqs = sequences_for_rect(names)
    assert sum(1 for s in seqs if s.level == 1 and s.direction == "R") == 4 - 2 + 1
    for s in seqs:
        assert len(s.values) == 3
        for (i, c), v in zip(s.cells, s.values):
            assert v == names.grids[s.direction][s.level][i, c]
    ones = build_names(Grid.from_rows(["aaaa"] * 3), axes="rows")
    assert all(len(set(s.values.tolist())) == 1 for s in sequences_for_rect(ones))


def test_square_sequences_map_back_to_cells():
    rng = np.random.default_rng(1)
    g = Grid.from_symbols(rng.integers(0, 2, (4, 5)))
    names = build_names(g)
    seen = set()
    for s in sequences_for_square(names):
        assert s.direction in FAMILIES
        for (i, c), v in zip(s.cells, s.values):
            assert v == names.grids[s.direction][s.level][i, c]
            key = (s.level, s.direction, s.line, s.orientation, i, c)
            assert key not in seen
            seen.add(key)


def test_flat_layouts_round_trip():
    rng = np.random.default_rng(2)
    g = Grid.from_symbols(rng.integers(0, 3, (4, 6)))
    n, m = g.n, g.m
    names = build_names(g)
    lay = diag_layout(n, m)
    text, _ = square_text(names, 1, lay)
    for s, (fam, _, _) in enumerate(SQUARE_STREAMS):
        arr = names.grids[fam][1]
        for i in range(n):
            for j in range(m):
                if arr[i, j] >= 0:
                    assert text[diag_pos(lay.start, lay.block, n, m, s, i, j)] == arr[i, j]
    rt, _ = rect_text(build_names(g, axes="rows"), 1)
    r = build_names(g, axes="rows")
    for i in range(n):
        for c in range(m):
            if r.grids["R"][1][i, c] >= 0:
                assert rt[rect_pos(n, m, 0, c, i)] == r.grids["R"][1][i, c]
            if r.grids["Rb"][1][i, c] >= 0:
                assert rt[rect_pos(n, m, 1, c, i)] == r.grids["Rb"][1][i, c]
    ct, _ = char_text(g)
    for i in range(n):
        for j in range(m):
            assert {int(ct[char_pos(n, m, s, i, j)]) for s in range(4)} == {int(g.cells[i, j])}

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import E, WORKED_PSI_MOD, WORKED_SUPPORT
from fsic.errors import InvariantViolation
from fsic.seq_mine import Pattern, PatternSet, mine_closed_frequent
from fsic.support_adjust import compute_modified_support, tokens_in_order
from oracles import replay_removal


def _set(supports):
    return PatternSet([Pattern.mined(s, v) for s, v in supports.items()], 1, 256)


E_PATTERNS = {(3, 3, 3): 2, (1, 1): 2, (4, 4): 2, (1,): 2, (2,): 1, (3,): 2, (4,): 2}


def test_e_matrix():
    adjusted, parse = compute_modified_support(_set(E_PATTERNS), E)
    assert adjusted.modified_supports() == {
        (3, 3, 3): 2, (1, 1): 2, (4, 4): 2, (1,): 0, (2,): 1, (3,): 1, (4,): 0,
    }
    assert [t.symbols for t in parse.rows[0]] == [(4, 4), (1, 1), (2,), (3, 3, 3)]


def test_worked_grid(a_prime_rows):
    adjusted, parse = compute_modified_support(_set(WORKED_SUPPORT), a_prime_rows)
    psi_mod = adjusted.modified_supports()
    assert psi_mod == WORKED_PSI_MOD
    assert sum(v * len(s) for s, v in psi_mod.items()) == 64
    assert sum(psi_mod.values()) == len(tokens_in_order(parse)) == 28
    counts, _ = replay_removal(WORKED_SUPPORT, a_prime_rows)
    assert counts == psi_mod


def test_longest_wins():
    adjusted, parse = compute_modified_support(_set({(7, 7): 1, (7,): 1}), [[7, 7]])
    assert adjusted.modified_supports() == {(7, 7): 1, (7,): 0}
    assert tokens_in_order(parse) == [(7, 7)]


def test_uncovered_cell_is_an_error():
    with pytest.raises(InvariantViolation):
        compute_modified_support(_set({(1,): 1}), [[1, 2]])


grids = st.tuples(st.integers(1, 8), st.integers(1, 12), st.integers(1, 4)).flatmap(
    lambda t: st.lists(
        st.lists(st.integers(0, t[2] - 1), min_size=t[1], max_size=t[1]), min_size=t[0], max_size=t[0]
    )
)


@settings(max_examples=200, deadline=None)
@given(grids, st.integers(1, 3))
def test_against_replay(rows, psi):
    mined = mine_closed_frequent(rows, psi)
    adjusted, parse = compute_modified_support(mined, rows)
    counts, tokens = replay_removal(mined.supports(), rows)
    psi_mod = adjusted.modified_supports()
    assert psi_mod == counts
    assert [[(t.start, t.symbols) for t in r] for r in parse.rows] == tokens

    cells = len(rows) * len(rows[0])
    assert sum(v * len(s) for s, v in psi_mod.items()) == cells
    assert sum(psi_mod.values()) == len(tokens_in_order(parse))
    assert parse.expand() == rows
    flat = [s for t in tokens_in_order(parse) for s in t]
    assert flat == [s for r in rows for s in r]
    for row in parse.rows:
        ends = [t.start + len(t.symbols) for t in row]
        assert [t.start for t in row] == [0] + ends[:-1]

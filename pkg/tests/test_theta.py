"""Delay-offset set construction and its telescoping identities."""

import pytest

from gridnc.theta import ThetaTable, build_theta, check_theta_identity


def test_table_d2_matches_reference_values():
    table = build_theta(2)
    assert table.sets[2] == {2}
    assert table.sets[1] == {1, 3}
    assert table.sets[0] == {4}


def test_table_d1_and_d3_hand_derived():
    # shift recurrence applied by hand on length-2 and length-6 vectors
    assert build_theta(1).sets == (frozenset({2}), frozenset({1}))
    table = build_theta(3)
    assert table.sets[3] == {3}
    assert table.sets[2] == {2, 4}
    assert table.sets[1] == {1, 5}
    assert table.sets[0] == {2, 4, 6}


def _brute_recurrence(d):
    """Independent recomputation with list slicing instead of index loops."""
    vec = [0] * (2 * d)         # zero-based positions 0..2d-1 for 1..2d
    vec[d - 1] = 1
    out = [vec]
    for _ in range(d):
        left = vec[1:] + [0]    # toward position 1, first entry discarded
        right = [0] + vec[:-1]  # toward position 2d, last entry discarded
        vec = [a ^ b for a, b in zip(left, right)]
        out.append(vec)
    out.reverse()
    return [frozenset(j + 1 for j, x in enumerate(v) if x) for v in out]


@pytest.mark.parametrize("d", range(1, 9))
def test_recurrence_matches_independent_oracle(d):
    assert list(build_theta(d).sets) == _brute_recurrence(d)


@pytest.mark.parametrize("d", range(1, 9))
def test_identities_all_deltas(d):
    table = build_theta(d)
    for delta in range(d):
        assert check_theta_identity(table, delta)


@pytest.mark.parametrize("d", range(1, 9))
def test_members_bounded_for_history_window(d):
    table = build_theta(d)
    assert table.sets[d] == {d}
    for s in table.sets:
        assert s  # never empty
        assert min(s) >= 1 and max(s) <= 2 * d


def test_identity_residues_explicitly_d2():
    # delta=1: the distance-2 set shifted both ways lands twice on {1,3}
    table = build_theta(2)
    shifted = sorted([t + 1 for t in table.sets[2]] + [t - 1 for t in table.sets[2]])
    assert shifted == sorted(table.sets[1])
    # delta=0: {2,4} xor {4} xor {0,2} leaves exactly {0}
    offsets = (
        [t + 1 for t in table.sets[1]]
        + list(table.sets[0])
        + [t - 1 for t in table.sets[1]]
    )
    residue = set()
    for o in offsets:
        residue ^= {o}
    assert residue == {0}


def test_rejects_bad_arguments():
    with pytest.raises(ValueError):
        build_theta(0)
    table = build_theta(2)
    with pytest.raises(ValueError):
        check_theta_identity(table, 2)
    with pytest.raises(ValueError):
        check_theta_identity(table, -1)


def test_tables_are_cached_and_frozen():
    assert build_theta(4) is build_theta(4)
    assert isinstance(build_theta(4), ThetaTable)

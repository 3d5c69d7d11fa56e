import numpy as np
import pytest

from mols_forge.errors import InvalidAnchorError
from mols_forge.latin import validate_pol
from mols_forge.transversals import (
    Transversal,
    check_anchors,
    common_transversals,
    count_all_transversals,
    delete,
    is_common_transversal,
)

from conftest import brute_transversals, load, prefix, random_latin

# (fixture, w, anchors) for every reference deletion view
DELETIONS = {
    "ex43_delete_1": ("ex43_pol", 1, (1,)),
    "ex43_delete_1_7": ("ex43_pol", 1, (1, 7)),
    "ex43_delete_1_8": ("ex43_pol", 1, (1, 8)),
    "ex43_delete_1_9": ("ex43_pol", 1, (1, 9)),
    "ex44_delete_1": ("ex44_pol", 1, (1,)),
    "ex44_delete_13": ("ex44_pol", 1, (13,)),
    "ex44_case2_delete_1": ("ex44_pol", 2, (1,)),
    "ex45_delete_1": ("ex45_pol", 1, (1,)),
    "ex45_case2_delete_1": ("ex45_pol", 2, (1,)),
    "ex46_delete_1": ("ex46_pol", 5, (1,)),
    "ex46_case2_delete_1": ("ex46_pol", 4, (1,)),
}


@pytest.mark.parametrize("key", sorted(DELETIONS))
def test_deletion_views_match_reference(key, deletions):
    name, w, anchors = DELETIONS[key]
    view = delete(prefix(name, w), anchors)
    assert sorted(view.surviving | set(view.anchors)) == deletions[key]


def test_deletion_array_and_pause():
    pol = prefix("ex43_pol", 1)
    view = delete(pol, (1, 7))
    arr = view.as_array()
    assert arr[0, 0] == 1 and arr[1, 1] == 7 and arr[0, 1] == 0
    assert not view.paused
    # order 3 with a full orthogonal pair: after one anchor nothing can finish
    z3 = validate_pol([[[0, 1, 2], [1, 2, 0], [2, 0, 1]], [[0, 1, 2], [2, 0, 1], [1, 2, 0]]])
    assert delete(z3, (1,)).paused


def test_anchor_errors_name_pair_and_relation():
    pol = prefix("ex43_pol", 1)
    cases = {(1, 2): "same row", (1, 6): "same column"}
    for pair, rel in cases.items():
        with pytest.raises(InvalidAnchorError) as err:
            check_anchors(pol, pair)
        assert err.value.pair == pair and err.value.relation == rel
    sq = pol[0]
    same = [t for t in range(2, 26) if sq[divmod(t - 1, 5)] == sq[0, 0] and t not in (1,)]
    with pytest.raises(InvalidAnchorError) as err:
        check_anchors(pol, (1, same[0]))
    assert err.value.relation == "same symbol of L1"
    with pytest.raises(InvalidAnchorError) as err:
        check_anchors(pol, (3, 3))
    assert err.value.relation == "duplicate"
    with pytest.raises(InvalidAnchorError):
        check_anchors(pol, (0,))
    assert check_anchors(pol, (13, 1)) == (1, 13)


def test_anchored_collection_ex43():
    found = [str(t) for t in common_transversals(prefix("ex43_pol", 1), (1,))]
    assert found == ["1-7-13-19-25", "1-8-15-17-24", "1-9-12-20-23"]


def test_anchored_collection_ex44_1_13():
    found = [str(t) for t in common_transversals(prefix("ex44_pol", 1), (1, 13))]
    assert found == [
        "1-13-18-23-35-40-45",
        "1-13-18-24-30-40-49",
        "1-13-18-26-35-38-44",
        "1-13-19-25-35-37-45",
        "1-13-21-23-33-39-45",
    ]


def test_full_anchor_set_returns_itself_or_raises():
    pol = prefix("ex43_pol", 1)
    assert common_transversals(pol, (1, 7, 13, 19, 25)) == [Transversal(5, (1, 7, 13, 19, 25))]
    with pytest.raises(InvalidAnchorError):
        common_transversals(pol, (1, 2))


@pytest.mark.parametrize(
    "name, counts",
    [
        ("ex43_pol", [15]),
        ("ex44_pol", [133, 28, 21]),
        ("ex45_pol", [384, 96, 32, 24]),
        ("ex46_pol", [2241, 126, 81, 72, 27]),
    ],
)
def test_prefix_counts(name, counts):
    for w, want in enumerate(counts, start=1):
        pol = prefix(name, w)
        assert count_all_transversals(pol) == want
        assert len(common_transversals(pol)) == want


def test_counts_independent_of_threads():
    pol = prefix("ex46_pol", 2)
    one = common_transversals(pol, threads=1)
    assert common_transversals(pol, threads=4) == one
    assert count_all_transversals(pol, threads=3) == len(one)


def test_every_result_is_a_common_transversal():
    pol = prefix("ex45_pol", 3)
    for t in common_transversals(pol):
        assert is_common_transversal(pol, t.treatments)
    assert not is_common_transversal(pol, (1, 2, 3))


def test_engine_matches_brute_force_on_random_pairs():
    rng = np.random.default_rng(7)
    for s in (3, 4, 5):
        for _ in range(5):
            m = random_latin(s, rng)
            pol = validate_pol([m])
            assert [t.treatments for t in common_transversals(pol)] == brute_transversals([m], s)


def test_transversal_parse_and_mask():
    t = Transversal.parse("13-1-25-19-7", 5)
    assert t.treatments == (1, 7, 13, 19, 25)
    assert t.mask == sum(1 << (x - 1) for x in t.treatments)
    assert 7 in t and len(t) == 5 and str(t) == "1-7-13-19-25"

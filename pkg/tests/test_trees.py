import pytest
from hypothesis import given, settings, strategies as st

from ainfree.errors import TreeError
from ainfree.trees import (
    LEAF,
    Layer,
    canonical_order,
    check_sign_cancellation,
    contract,
    contractions,
    corolla,
    edge_sign_exponent,
    enumerate_trees,
    forest_decomposition,
    graft,
    height,
    parse_tree,
    replay_forest,
    schroeder_count,
)

T2 = corolla(2)
COUNTS = [1, 1, 3, 11, 45, 197, 903]


def _brute_force(n):
    # every way to graft at least two smaller trees under a root
    if n == 1:
        return {"|"}
    found = set()

    def forests(total):
        if total == 0:
            yield []
            return
        for first in range(1, min(total, n - 1) + 1):
            for key in _brute_force(first):
                for rest in forests(total - first):
                    yield [key] + rest

    for forest in forests(n):
        found.add("(" + " ".join(forest) + ")")
    return found


def test_counts():
    assert [len(enumerate_trees(n)) for n in range(1, 8)] == COUNTS
    assert [schroeder_count(n) for n in range(1, 8)] == COUNTS


def test_enumeration_matches_grafting_oracle():
    for n in range(1, 6):
        assert {t.key for t in enumerate_trees(n)} == _brute_force(n)


def test_text_form_round_trip():
    for n in range(1, 6):
        for t in enumerate_trees(n):
            assert parse_tree(t.key) == t
    assert str(LEAF) == "|"
    assert graft([T2, LEAF]).key == "((| |) |)"


@pytest.mark.parametrize("text", ["", "(|)", "(| |", "| |", "(| x)"])
def test_bad_tree_text(text):
    with pytest.raises(TreeError):
        parse_tree(text)


def test_enumeration_rejects_zero_leaves():
    with pytest.raises(TreeError):
        enumerate_trees(0)


def test_heights_are_preorder():
    assert canonical_order(graft([T2, LEAF])).heights == {(): 1, (0,): 2}
    assert canonical_order(graft([T2, T2])).heights == {(): 1, (0,): 2, (1,): 3}
    assert height(graft([LEAF, T2]), (1,)) == 2
    with pytest.raises(TreeError):
        height(T2, (0,))


def test_forest_layers():
    assert forest_decomposition(graft([T2, LEAF])) == [Layer(0, 2, 1), Layer(0, 2, 0)]
    assert forest_decomposition(graft([T2, T2])) == [Layer(2, 2, 0), Layer(0, 2, 1), Layer(0, 2, 0)]
    assert forest_decomposition(LEAF) == []


def test_layers_rebuild_every_tree():
    for n in range(1, 7):
        for t in enumerate_trees(n):
            layers = forest_decomposition(t)
            assert len(layers) == t.size
            assert replay_forest(layers, t.leaves) == t


def test_contraction():
    assert contract(graft([T2, LEAF]), (0,)) == corolla(3)
    assert contract(graft([T2, T2]), (1,)) == graft([T2, LEAF, LEAF])
    with pytest.raises(TreeError):
        contract(T2, ())
    with pytest.raises(TreeError):
        contract(T2, (0,))


def test_contractions_of_corolla():
    found = contractions(corolla(3))
    assert {c.parent.key for c in found} == {"((| |) |)", "(| (| |))"}
    assert all(c.beta == 3 for c in found)
    assert all(contract(c.parent, c.edge) == corolla(3) for c in found)
    assert contractions(LEAF) == []


def test_sign_exponent():
    t = graft([T2, T2])
    assert edge_sign_exponent(t, (0,)) == 3
    assert edge_sign_exponent(t, (1,)) == 4


def test_double_contractions_cancel():
    assert check_sign_cancellation(6) == []


@settings(max_examples=25, deadline=None)
@given(st.sampled_from(enumerate_trees(5)))
def test_contractions_lower_vertex_count(t):
    for c in contractions(t):
        assert c.parent.size == t.size + 1
        assert c.parent.leaves == t.leaves
        assert c.beta == 1 + height(c.parent, c.edge)

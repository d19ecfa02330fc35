import pytest
from hypothesis import given, settings, strategies as st
from sympy import Matrix

from ainfree.errors import InputError, ScalarKindMismatch
from ainfree.scalars import Ring, SparseMatrix, add_term, image_membership, mat_mul, render_vector, tensor_product


def test_ring_tags():
    assert Ring.parse("Z") == Ring("Z")
    assert Ring.parse("Q").is_field
    assert Ring.parse("Zp:5") == Ring("Zp", 5)
    assert Ring.parse("Z/7").tag == "Z/7"
    with pytest.raises(InputError):
        Ring.parse("Zp:4")
    with pytest.raises(InputError):
        Ring.parse("R")


def test_coercion():
    assert Ring("Q")("3/2") * Ring("Q")(2) == Ring("Q")(3)
    with pytest.raises(ScalarKindMismatch):
        Ring("Z")("1/2")
    gf5 = Ring("Zp", 5)
    assert gf5("1/2") == gf5(3)
    with pytest.raises(ScalarKindMismatch):
        gf5("1/5")


def test_add_term_drops_zeros():
    ring = Ring("Z")
    vec = {}
    add_term(vec, "a", ring(2))
    add_term(vec, "a", ring(-2))
    assert vec == {}


def test_tensor_product():
    ring = Ring("Z")
    out = tensor_product([{"a": ring(2), "b": ring(1)}, {"c": ring(3)}])
    assert out == {("a", "c"): ring(6), ("b", "c"): ring(3)}
    assert tensor_product([{"a": ring(1)}, {}]) == {}


def test_render_is_sorted():
    ring = Ring("Z")
    assert list(render_vector({"b": ring(1), "a": ring(-1)}, ring)) == ["a", "b"]


def test_membership_over_integers():
    ring = Ring("Z")
    m = SparseMatrix.from_rows(ring, [[2, 0], [0, 3]])
    assert image_membership(m, [4, 3]) == [ring(2), ring(1)]
    assert image_membership(m, [1, 0]) is None
    assert image_membership(m, [0, 0]) == [ring.zero, ring.zero]


def test_membership_over_rationals():
    ring = Ring("Q")
    m = SparseMatrix.from_rows(ring, [[2, 0], [0, 3]])
    x = image_membership(m, [1, 0])
    assert m.left_apply(x) == [ring(1), ring(0)]
    singular = SparseMatrix.from_rows(ring, [[1, 1], [2, 2]])
    assert image_membership(singular, [1, 0]) is None


def test_rank_and_product():
    ring = Ring("Z")
    a = SparseMatrix.from_rows(ring, [[1, 2], [2, 4]])
    assert a.rank() == 1
    identity = SparseMatrix.from_rows(ring, [[1, 0], [0, 1]])
    assert mat_mul(a, identity).dense() == a.dense()


@settings(max_examples=50, deadline=None)
@given(st.integers(-50, 50), st.integers(-50, 50), st.integers(-50, 50))
def test_distributivity_mod_p(x, y, z):
    ring = Ring("Zp", 7)
    a, b, c = ring(x), ring(y), ring(z)
    assert a * (b + c) == a * b + a * c


@settings(max_examples=30, deadline=None)
@given(st.lists(st.lists(st.integers(-3, 3), min_size=3, max_size=3), min_size=1, max_size=3),
       st.lists(st.integers(-3, 3), min_size=1, max_size=3))
def test_membership_finds_true_preimages(rows, coefficients):
    ring = Ring("Z")
    m = SparseMatrix.from_rows(ring, rows)
    x = [ring(c) for c in (coefficients + [0] * len(rows))[:len(rows)]]
    v = m.left_apply(x)
    found = image_membership(m, v)
    assert found is not None
    assert m.left_apply(found) == v


def test_product_of_two_by_two():
    ring = Ring("Z")
    a = SparseMatrix.from_rows(ring, [[1, 2], [3, 4]])
    swap = SparseMatrix.from_rows(ring, [[0, 1], [1, 0]])
    assert mat_mul(a, swap).dense() == [[ring(2), ring(1)], [ring(4), ring(3)]]
    with pytest.raises(ScalarKindMismatch):
        mat_mul(a, SparseMatrix.from_rows(Ring("Q"), [[0, 1], [1, 0]]))


def test_membership_mod_p():
    ring = Ring("Zp", 5)
    m = SparseMatrix.from_rows(ring, [[1, 2], [2, 4]])
    x = image_membership(m, [3, 1])
    assert x is not None
    assert m.left_apply(x) == [ring(3), ring(1)]
    assert image_membership(m, [1, 0]) is None


@settings(max_examples=40, deadline=None)
@given(st.lists(st.lists(st.integers(-3, 3), min_size=3, max_size=3), min_size=1, max_size=4))
def test_rank_over_rationals(rows):
    assert SparseMatrix.from_rows(Ring("Q"), rows).rank() == Matrix(rows).rank()

import gc
import weakref

import pytest

from ainfree.ainfty import M_compose, unit_coderivation
from ainfree.errors import DegreeError, EndpointMismatch, TruncationError
from ainfree.free import FreeCategory
from ainfree.lift import extend_strict
from ainfree.quiver import GradedMap, IdentityMap, unit_word
from ainfree.tensor import (
    CocatHom,
    Coderivation,
    chain_functors,
    coder_matrix_coeff,
    compose,
    hom_matrix_coeff,
    identity_functor,
    theta,
    theta_matrix_coeff,
)


def test_unit_coderivation_expansion(unital):
    i, a, b = (unital.quiver.generator(name) for name in "iab")
    r = unit_coderivation(unital, unital.units, 3)
    one = unital.ring.one
    assert r.expand((a,), 2) == {(i, a): -one, (a, i): one}
    assert r.expand((b,), 2) == {(i, b): one, (b, i): one}
    assert r.expand((), 1, "X") == {(i,): one}
    assert coder_matrix_coeff(r, 1, 2)((b,)) == {(i, b): one, (b, i): one}


def test_identity_expansion(unital):
    a, b = unital.quiver.generator("a"), unital.quiver.generator("b")
    identity = identity_functor(unital)
    assert identity.expand((a, b), 2) == {(a, b): unital.ring.one}
    assert identity.expand((a, b), 1) == {}
    assert hom_matrix_coeff(identity, 2, 2)((a, b)) == {(a, b): unital.ring.one}


def test_compose_with_identity(dg_quiver, dg_map, unital):
    f = extend_strict(dg_map, 3, FreeCategory(dg_quiver, 3))
    composite = compose(f, identity_functor(unital))
    assert composite.object_map == f.object_map
    for x in f.source.hom_basis("P", "R") + f.source.hom_basis("R", "P"):
        assert composite.component(1)((x,)) == f.component(1)((x,))


def test_truncated_homomorphism(unital):
    identity = CocatHom(unital.ring, unital, unital, {"X": "X"}, {}, level=1)
    with pytest.raises(TruncationError):
        identity.component(2)
    with pytest.raises(TruncationError):
        CocatHom(unital.ring, unital, unital, {"X": "X"}, {2: GradedMap(0)}, level=1)
    with pytest.raises(DegreeError):
        CocatHom(unital.ring, unital, unital, {"X": "X"}, {1: GradedMap(1)})


def test_coderivation_components_share_degree(unital):
    identity = identity_functor(unital)
    with pytest.raises(DegreeError):
        Coderivation(identity, identity, -1, {0: GradedMap(-1), 1: GradedMap(0)})


def test_combination(unital):
    r = unit_coderivation(unital, unital.units, 2)
    twice = Coderivation.combine([(unital.ring(3), r), (unital.ring(-1), r)], r.source, r.target, -1)
    i = unital.quiver.generator("i")
    assert twice.value((), "X") == {i: unital.ring(2)}


def test_theta_of_single_coderivation(unital):
    r = unit_coderivation(unital, unital.units, 2)
    b = unital.quiver.generator("b")
    assert theta_matrix_coeff([r], 1, 2)((b,)) == r.expand((b,), 2)


def test_long_tails_vanish(unital):
    r = unit_coderivation(unital, unital.units, 2)
    base = identity_functor(unital)
    composite = M_compose([], [r, r], base=base)
    assert composite.components == {}
    assert composite.value((), "X") == {}


def test_unit_composed_with_identity(unital):
    r = unit_coderivation(unital, unital.units, 2)
    composite = M_compose([], [r], base=identity_functor(unital))
    i, b = unital.quiver.generator("i"), unital.quiver.generator("b")
    assert composite.value((), "X") == {i: unital.ring.one}
    assert composite.value((b,)) == {}
    assert unit_word("X") in r.components[0].images


def test_compose_is_built_once_per_pair(unital):
    f, g = identity_functor(unital), identity_functor(unital)
    composite = compose(f, g)
    assert compose(f, g) is composite
    assert compose(f, identity_functor(unital)) is not composite
    assert compose(g, f) is not composite


def test_composites_are_released_with_their_factors(unital):
    f, g = identity_functor(unital), identity_functor(unital)
    ref = weakref.ref(compose(f, g))
    del f, g
    gc.collect()
    assert ref() is None


def test_chain_needs_the_same_homomorphism(unital):
    r = unit_coderivation(unital, unital.units, 2)
    s = unit_coderivation(unital, unital.units, 2)
    assert r.source.object_map == s.source.object_map
    assert len(chain_functors([r, r])) == 3
    with pytest.raises(EndpointMismatch):
        chain_functors([r, s])
    with pytest.raises(EndpointMismatch):
        chain_functors([])


@pytest.fixture
def curved(unital):
    """id on arity 1 plus f₂(b, b) = b and f₂(i, b) = a"""
    i, a, b = (unital.quiver.generator(name) for name in "iab")
    one = unital.ring.one
    f2 = GradedMap(0, {(b, b): {b: one}, (i, b): {a: one}}, name="f2")
    return CocatHom(unital.ring, unital, unital, {"X": "X"}, {1: IdentityMap(unital.ring), 2: f2})


def test_matrix_coefficients_of_a_homomorphism(curved, unital):
    i, a, b = (unital.quiver.generator(name) for name in "iab")
    one = unital.ring.one
    f32 = hom_matrix_coeff(curved, 3, 2)
    assert f32((b, b, b)) == {(b, b): unital.ring(2)}
    assert f32((i, b, b)) == {(i, b): one, (a, b): one}
    assert hom_matrix_coeff(curved, 2, 1)((i, b)) == {(a,): one}
    assert hom_matrix_coeff(curved, 2, 1)((b, i)) == {}
    assert hom_matrix_coeff(curved, 1, 2)((b,)) == {}
    assert theta([curved], [], (i, b, b), l=2) == f32((i, b, b))


def test_theta_inserts_units_between_letters(unital):
    i, a, b = (unital.quiver.generator(name) for name in "iab")
    one = unital.ring.one
    r = unit_coderivation(unital, unital.units, 2)
    twice = theta_matrix_coeff([r, r], 1, 3)
    assert twice((b,)) == {(b, i, i): one, (i, b, i): one, (i, i, b): one}
    assert twice((a,)) == {(a, i, i): one, (i, a, i): -one, (i, i, a): one}
    assert theta_matrix_coeff([r, r], 1, 4)((b,)) == {}
    assert theta_matrix_coeff([r, r], 1, 1)((b,)) == {}
    assert coder_matrix_coeff(r, 1, 3)((b,)) == {}

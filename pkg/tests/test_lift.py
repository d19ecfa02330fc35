import pytest

from conftest import data_file
from ainfree.ainfty import UnitData, check_an_functor, functor_category
from ainfree.data_loader import DataLoader, functor_document
from ainfree.errors import NotAChainMap, PreconditionError
from ainfree.free import FreeCategory, leaf
from ainfree.lift import (
    PHI,
    PSI,
    ExtensionProblem,
    LiftProblem,
    QuiverMap,
    check_bracket_identity,
    extend_functor,
    extend_strict,
    hom_complex,
    lift_chain_map,
    lift_homotopy,
    low_category,
    restrict,
    restrict_vector,
    strict_f1_explicit,
    strictify_iso,
    verify_chain_lift,
    verify_lift_restricts,
    verify_restriction_equivalence,
)
from ainfree.quiver import FiniteComplex, GradedMap
from ainfree.trees import LEAF, corolla


@pytest.fixture
def unit_map(dg_quiver, unital):
    """u ↦ i, w ↦ b: a chain map hitting the unit, so grafted values do not vanish"""
    g = dg_quiver.generator
    one = unital.ring.one
    images = {g("u"): {unital.quiver.generator("i"): one}, g("v"): {}, g("w"): {unital.quiver.generator("b"): one}}
    return QuiverMap(dg_quiver, unital, {"P": "X", "R": "X"}, images)


@pytest.fixture
def free2(quiver):
    return FreeCategory(quiver, 2)


@pytest.fixture
def strict_pair(free2, phi):
    return extend_strict(phi, 2, free2), extend_strict(phi, 2, free2)


@pytest.fixture
def twisted(free2, phi, unital):
    """Extension of phi with f₂(x, x) = b"""
    x = phi.quiver.generator("x")
    f2 = GradedMap(0, {(leaf(x), leaf(x)): {unital.quiver.generator("b"): unital.ring.one}}, name="f2")
    return extend_functor(ExtensionProblem(phi, 2, higher={2: f2}), free2)


def _all_basis(free):
    return [e for x in free.objects for y in free.objects for e in free.hom_basis(x, y)]


def test_strict_extension_is_a_functor(dg_map, unit_map):
    assert check_an_functor(extend_strict(dg_map, 3)).passed
    assert check_an_functor(extend_strict(unit_map, 4)).passed


def test_explicit_formula_matches_recursion(dg_quiver, unit_map):
    free = FreeCategory(dg_quiver, 4)
    f = extend_strict(unit_map, 4, free)
    nonzero = 0
    for x in _all_basis(free):
        if x.tree.is_leaf:
            continue
        explicit = strict_f1_explicit(x.tree, unit_map)((x,))
        assert dict(explicit) == dict(f.component(1)((x,))), str(x)
        nonzero += bool(explicit)
    assert nonzero > 0


def test_grafted_value_on_two_leaves(dg_quiver, unit_map, unital):
    free = FreeCategory(dg_quiver, 2)
    f = extend_strict(unit_map, 2, free)
    b = unital.quiver.generator("b")
    one = unital.ring.one
    # b₂(i, b) = −b and b₂(b, i) = b
    assert f.component(1)((free.basis(corolla(2), ["u", "w"]),)) == {b: -one}
    assert f.component(1)((free.basis(corolla(2), ["w", "u"]),)) == {b: one}
    assert f.component(1)((free.basis(LEAF, ["u"]),)) == {unital.quiver.generator("i"): one}


def test_restrict_and_extend_are_inverse(dg_quiver, dg_map):
    free = FreeCategory(dg_quiver, 3)
    f = extend_strict(dg_map, 3, free)
    restricted = restrict(f)
    assert restricted.images == dg_map.images
    assert restricted.object_map == dg_map.object_map
    again = extend_strict(restricted, 3, free)
    for x in _all_basis(free):
        assert again.component(1)((x,)) == f.component(1)((x,))


def test_zero_map_extends_to_zero(dg_quiver, unital):
    qmap = QuiverMap(dg_quiver, unital, {"P": "X", "R": "X"}, {e: {} for e in dg_quiver.generators})
    document = functor_document(extend_strict(qmap, 3))
    assert document.components == []
    assert document.leaves == 3
    assert document.object_map == {"P": "X", "R": "X"}


def test_broken_map_is_rejected(dg_quiver, unital):
    broken = DataLoader(data_file("broken_map.json")).load_map(dg_quiver, unital)
    with pytest.raises(NotAChainMap):
        extend_strict(broken, 2)


def test_extension_with_prescribed_higher_component(twisted):
    assert check_an_functor(twisted).passed
    assert set(twisted.components) == {1, 2}


def test_lift_of_identity(strict_pair, free2):
    f, g = strict_pair
    low = low_category(f, g)
    complex_ = hom_complex(low)
    seed = {slot: {slot: low.ring.one} for slot in complex_.basis}
    lifted = lift_chain_map(LiftProblem(free2, f, g, complex_, seed, low=low))
    assert verify_chain_lift(lifted).passed
    assert verify_lift_restricts(lifted).passed


def test_lift_rejects_non_chain_seed(strict_pair, free2):
    f, g = strict_pair
    low = low_category(f, g)
    complex_ = hom_complex(low)
    assert any(low.b(1, (slot,)) for slot in complex_.basis)
    seed = {slot: {slot: low.ring.one} for slot in complex_.basis}
    # same basis, zero differential
    flat = FiniteComplex(low.ring, complex_.basis, {slot: {} for slot in complex_.basis})
    with pytest.raises(NotAChainMap):
        lift_chain_map(LiftProblem(free2, f, g, flat, seed, low=low))


def test_restriction_commutes_with_differential(strict_pair, free2, unital):
    f, g = strict_pair
    low = low_category(f, g)
    full = functor_category(free2, unital, {PHI: f, PSI: g}, level=1, width=2)
    for p in full.hom_basis(PHI, PSI):
        image = restrict_vector(full.b(1, (p,)))
        restricted = restrict_vector({p: full.ring.one})
        expected = low.apply(1, {(q,): c for q, c in restricted.items()})
        assert image == expected, str(p)


def test_homotopy_needs_restricted_boundary(strict_pair, free2, unital):
    f, g = strict_pair
    full = functor_category(free2, unital, {PHI: f, PSI: g}, level=1, width=2)
    complex_ = hom_complex(full)
    target = {p: full.slot_coderivation(p) for p in complex_.basis}
    with pytest.raises(PreconditionError):
        lift_homotopy(LiftProblem(free2, f, g, complex_, {}), target, {})


def test_restriction_equivalence(strict_pair, unital):
    f, g = strict_pair
    result = verify_restriction_equivalence(f, g, unital.units)
    assert len(result.reports) == 6
    assert result.reports[0].name == "A_3 identities of A"
    assert result.passed, [r.name for r in result.reports if not r.passed]
    assert set(result.homotopy) == set(result.full.hom_basis(PHI, PSI))


def test_strictification(twisted, unital):
    result = strictify_iso(twisted, unital.units)
    assert all(report.passed for report in result.reports)
    assert set(result.strict.components) == {1}
    assert result.transformation.degree == -1
    assert dict(result.transformation.value((), "X")) == dict(unital.units.identities["X"])


def test_strictification_needs_units(twisted):
    with pytest.raises(PreconditionError):
        strictify_iso(twisted, None)


def test_bracket_identity(strict_pair, free2, unital):
    f, g = strict_pair
    full = functor_category(free2, unital, {PHI: f, PSI: g}, level=1, width=2)
    for p in full.hom_basis(PHI, PSI):
        assert check_bracket_identity(full.slot_coderivation(p), 2).passed, str(p)


def test_equivalence_stops_on_a_broken_target(quiver, mutated_with_units):
    mutated = DataLoader(mutated_with_units).load_category()
    qmap = DataLoader(data_file("phi.json")).load_map(quiver, mutated)
    free = FreeCategory(quiver, 2)
    f = extend_strict(qmap, 2, free)
    result = verify_restriction_equivalence(f, extend_strict(qmap, 2, free), mutated.units)
    assert not result.passed
    assert len(result.reports) == 1
    assert result.reports[0].counterexample.arity == 2
    assert result.low is None and result.full is None
    assert result.homotopy == {}


def test_equivalence_reports_a_vanishing_unit(strict_pair, unital):
    f, g = strict_pair
    zero_units = UnitData({"X": {}})
    result = verify_restriction_equivalence(f, g, zero_units)
    assert not result.passed
    assert [r.passed for r in result.reports[:-2]] == [True] * 4
    assert result.reports[-1].counterexample.note == "The unit of psi vanishes"


def test_bracket_identity_on_three_leaves(quiver, phi, unital):
    free = FreeCategory(quiver, 3)
    f = extend_strict(phi, 3, free)
    full = functor_category(free, unital, {PHI: f}, level=1, width=3)
    slots = full.hom_basis(PHI, PHI)
    for p in slots[:4] + slots[-4:]:
        assert check_bracket_identity(full.slot_coderivation(p), 3).passed, str(p)


def test_restriction_equivalence_between_different_maps(dg_quiver, dg_map, unit_map, unital):
    free = FreeCategory(dg_quiver, 2)
    result = verify_restriction_equivalence(extend_strict(dg_map, 2, free), extend_strict(unit_map, 2, free), unital.units)
    assert len(result.reports) == 6
    assert result.passed, [r.name for r in result.reports if not r.passed]

"""Extending quiver maps to A∞-functors F𝒬 → 𝒜 and lifting transformations.

Every value on a basis element (t, w) with t not a leaf is forced by the
A∞ identity on the branches of t, so all constructions here are recursions
on the number of vertices, evaluated lazily.
"""
import logging
from dataclasses import dataclass, field
from typing import Dict, Hashable, List, Mapping, Optional, Tuple

from .ainfty import (
    AnCategory,
    B1,
    ExplicitCategory,
    FunctorCategory,
    Slot,
    UnitData,
    _counterexample,
    _report,
    bar_differential,
    check_an_category,
    functor_category,
    M_compose,
    unit_coderivation,
    unit_cycle_check,
)
from .errors import DegreeError, EndpointMismatch, InputError, NotAChainMap, PreconditionError, TreeError
from .free import FreeCategory, decompose, leaf
from .models import CheckReport, Counterexample
from .quiver import (
    Block,
    Cell,
    ConeKey,
    DGQuiver,
    FiniteComplex,
    Generator,
    GradedMap,
    IdentityMap,
    Word,
    apply_blocks,
    cone,
    identity_chain_map,
    koszul_apply,
    unit_word,
)
from .scalars import Vector, add_scaled, signed
from .tensor import CocatHom, Coderivation, first_difference
from .trees import PlaneTree, forest_decomposition

logger = logging.getLogger(__name__)

PHI, PSI = "phi", "psi"


@dataclass
class QuiverMap:
    """A chain map of quivers s𝒬 → s𝒜: objects to objects, generators to morphisms of equal degree"""

    quiver: DGQuiver
    target: AnCategory
    object_map: Dict[str, str]
    images: Dict[Generator, Mapping]

    def __post_init__(self):
        for obj in self.quiver.objects:
            if self.object_map.get(obj) not in self.target.objects:
                raise EndpointMismatch(f"Object {obj} is not sent to an object of {self.target.name}")
        for e, vec in self.images.items():
            for key in vec:
                if (key.src, key.dst) != (self.object_map[e.src], self.object_map[e.dst]):
                    raise EndpointMismatch(f"The image of {e} has wrong endpoints")
                if key.degree != e.degree:
                    raise DegreeError(f"The image of {e} has degree {key.degree}, expected {e.degree}")
        self._component = GradedMap(0, {(e,): vec for e, vec in self.images.items()}, name="f1")

    @property
    def component(self) -> GradedMap:
        return self._component

    def check_chain(self) -> None:
        """(e d) f₁ = (e f₁) b₁ for every generator"""
        for e in self.quiver.generators:
            via_quiver = self._component.apply({(g,): c for g, c in self.quiver.d((e,)).items()})
            via_target = self.target.apply(1, {(key,): c for key, c in self._component((e,)).items()})
            if via_quiver != via_target:
                raise NotAChainMap(f"The quiver map does not commute with the differentials on {e}")

    def as_functor(self, source: AnCategory, name: str = "f") -> CocatHom:
        """The A₁-functor on the A₁-category (s𝒬, d)"""
        return CocatHom(self.quiver.ring, source, self.target, self.object_map, {1: self._component}, 1, name)


@dataclass
class ExtensionProblem:
    map: QuiverMap
    leaves: int
    arity: Optional[int] = None
    higher: Mapping[int, GradedMap] = field(default_factory=dict)


def extend_functor(problem: ExtensionProblem, source: Optional[FreeCategory] = None) -> CocatHom:
    """The unique A∞-functor f: F𝒬 → 𝒜 with the given f₁ on generators and f_k (k ≥ 2)"""
    qmap = problem.map
    qmap.check_chain()
    free = source or FreeCategory(qmap.quiver, problem.leaves, problem.arity)
    target = qmap.target
    holder: Dict[str, CocatHom] = {}

    def rule(word: Word, obj: Optional[str]) -> Dict:
        (x,) = word
        if x.tree.is_leaf:
            return qmap.component((x.word[0],))
        f = holder["f"]
        exponent, parts = decompose(x)
        out: Dict = {}
        for image, c in f.expand_all(parts).items():
            add_scaled(out, target.b(len(image), image), c)
        for inner, c in bar_differential(free, parts, proper=True).items():
            component = f.component(len(inner))
            if component is not None:
                add_scaled(out, component(inner), -c)
        return {key: signed(c, exponent) for key, c in out.items()}

    components = {1: GradedMap(0, rule=rule, name="f1")}
    for n, op in problem.higher.items():
        if n < 2:
            raise InputError("Only components of arity ≥ 2 can be prescribed")
        components[n] = op
    f = CocatHom(qmap.quiver.ring, free, target, qmap.object_map, components, name="f")
    holder["f"] = f
    return f


def extend_strict(qmap: QuiverMap, leaves: int, source: Optional[FreeCategory] = None) -> CocatHom:
    """The strict extension: f_k = 0 for k > 1"""
    return extend_functor(ExtensionProblem(qmap, leaves), source)


def strict_f1_explicit(tree: PlaneTree, qmap: QuiverMap) -> GradedMap:
    """Closed form of the strict extension on the t-slice: f₁^{⊗n} followed by b along the layers of t"""
    target = qmap.target
    ring = qmap.quiver.ring
    identity = IdentityMap(ring)
    layers = forest_decomposition(tree)

    def rule(word: Word, obj: Optional[str]) -> Dict:
        (x,) = word
        if x.tree != tree:
            raise TreeError(f"{x} is not in the slice of {tree}")
        current = apply_blocks([Block(1, qmap.component)] * len(x.word), x.word, ring.one)
        for layer in layers:
            blocks = (
                [Block(1, identity)] * layer.alpha
                + [Block(layer.arity, target.operation_map(layer.arity))]
                + [Block(1, identity)] * layer.beta
            )
            current = koszul_apply(blocks, current)
        return {image[0]: c for image, c in current.items()}

    return GradedMap(0, rule=rule, name=f"f1|{tree}")


# Restriction to the quiver

def restrict(f: CocatHom) -> QuiverMap:
    """f ↦ f̄: the values of f₁ on generators"""
    source = f.source
    if not isinstance(source, FreeCategory):
        raise InputError("Only functors out of a free category restrict to quiver maps")
    images = {e: dict(f.component(1)((leaf(e),))) for e in source.quiver.generators}
    return QuiverMap(source.quiver, f.target, dict(f.object_map), images)


def restrict_vector(vec: Mapping[Slot, object], names: Tuple[str, str] = (PHI, PSI)) -> Vector:
    """Slots of A∞(F𝒬, 𝒜) restricted to A₁(𝒬, 𝒜): keep arity 0 and single generators"""
    out: Vector = {}
    for slot, c in vec.items():
        if slot.arity == 0:
            word = slot.word
        elif slot.arity == 1 and slot.word[0].tree.is_leaf:
            word = (slot.word[0].word[0],)
        else:
            continue
        out[Slot(names[0], names[1], word, slot.key)] = c
    return out


def restrict_coderivation(r: Coderivation, names: Tuple[str, str] = (PHI, PSI)) -> Vector:
    source = r.source.source
    out: Vector = {}
    for obj in source.objects:
        for key, c in r.value((), obj).items():
            out[Slot(names[0], names[1], unit_word(obj), key)] = c
    for e in source.quiver.generators:
        for key, c in r.value((leaf(e),)).items():
            out[Slot(names[0], names[1], (e,), key)] = c
    return out


def quiver_category(quiver: DGQuiver) -> ExplicitCategory:
    return ExplicitCategory.from_dg_quiver(quiver)


def low_category(phi: CocatHom, psi: CocatHom, level: int = 2) -> FunctorCategory:
    """A₁(𝒬, 𝒜) on the restrictions of two functors out of F𝒬"""
    q = quiver_category(phi.source.quiver)
    functors = {PHI: restrict(phi).as_functor(q, PHI), PSI: restrict(psi).as_functor(q, PSI)}
    return functor_category(q, phi.target, functors, level=level, width=1)


# Lifting chain maps P → sA₁(𝒬,𝒜)(φ̄,ψ̄) to sA∞(F𝒬,𝒜)(φ,ψ)

@dataclass
class LiftProblem:
    """A complex P, a chain map u′ into the A₁ level and components u_k (k ≥ 2) for each basis element"""

    free: FreeCategory
    phi: CocatHom
    psi: CocatHom
    complex: FiniteComplex
    seed: Mapping[Hashable, Mapping[Slot, object]]
    higher: Mapping[Hashable, Mapping[int, GradedMap]] = field(default_factory=dict)
    low: Optional[FunctorCategory] = None

    def __post_init__(self):
        if self.phi.source is not self.free or self.psi.source is not self.free:
            raise EndpointMismatch("Both functors must start at the free category of the problem")
        if self.low is None:
            self.low = low_category(self.phi, self.psi)


class ChainLift:
    """The lift u: P → sA∞(F𝒬, 𝒜)(φ, ψ); u(p) is built on demand"""

    def __init__(self, problem: LiftProblem):
        self.problem = problem
        self._lifted: Dict[Hashable, Coderivation] = {}
        self._check_seed()

    def _check_seed(self) -> None:
        low = self.problem.low
        complex_ = self.problem.complex
        for p in complex_.basis:
            seed = self.problem.seed.get(p, {})
            for slot in seed:
                if slot.degree != p.degree:
                    raise DegreeError(f"The seed of {p} has a term of degree {slot.degree}, expected {p.degree}")
            boundary = low.apply(1, {(slot,): c for slot, c in seed.items()})
            expected: Vector = {}
            for q, c in complex_.differential_of(p).items():
                add_scaled(expected, self.problem.seed.get(q, {}), c)
            if boundary != expected:
                raise NotAChainMap(f"The A₁-level data is not a chain map at {p}")

    def coderivation(self, p: Hashable) -> Coderivation:
        found = self._lifted.get(p)
        if found is None:
            found = self._build(p)
            self._lifted[p] = found
        return found

    def _build(self, p: Hashable) -> Coderivation:
        problem = self.problem
        degree = p.degree
        seed = problem.seed.get(p, {})
        free, target = problem.free, problem.phi.target
        units: Dict[Word, Dict] = {}
        on_generators: Dict[Generator, Dict] = {}
        for slot, c in seed.items():
            if slot.arity == 0:
                units.setdefault(slot.word, {})[slot.key] = c
            else:
                on_generators.setdefault(slot.word[0], {})[slot.key] = c
        higher = dict(problem.higher.get(p, {}))
        boundary_terms = list(problem.complex.differential_of(p).items())
        holder: Dict[str, Coderivation] = {}

        def rule(word: Word, obj: Optional[str]) -> Dict:
            (x,) = word
            if x.tree.is_leaf:
                return on_generators.get(x.word[0], {})
            u = holder["u"]
            exponent, parts = decompose(x)
            k = len(parts)
            out: Dict = {}
            for q, c in boundary_terms:
                component = problem.higher.get(q, {}).get(k)
                if component is not None:
                    add_scaled(out, component(parts), -c)
            for image, c in u.expand_all(parts).items():
                add_scaled(out, target.b(len(image), image), c)
            for inner, c in bar_differential(free, parts, proper=True).items():
                add_scaled(out, u.value(inner), c if degree & 1 else -c)
            # u₁(x) carries (−1)^{deg p} from moving b_k past u
            return {key: signed(c, exponent + degree) for key, c in out.items()}

        components = {0: GradedMap(degree, units), 1: GradedMap(degree, rule=rule)}
        for n, op in higher.items():
            if n < 2:
                raise InputError("Only components of arity ≥ 2 can be prescribed")
            components[n] = op
        u = Coderivation(problem.phi, problem.psi, degree, components, name=f"u({p})")
        holder["u"] = u
        return u

    def vector(self, p: Hashable, category: FunctorCategory) -> Vector:
        return category.from_coderivation(self.coderivation(p), PHI, PSI)


def lift_chain_map(problem: LiftProblem) -> ChainLift:
    lifted = ChainLift(problem)
    logger.info("Lifting a chain map on %d basis elements", len(problem.complex.basis))
    return lifted


def _coderivation_words(free: FreeCategory):
    return list(free.domain_words(free.leaves))


def verify_chain_lift(lifted: ChainLift) -> CheckReport:
    """(pd)u = (pu)B₁ for every basis element p, on all words of the free category"""
    problem = lifted.problem
    words = _coderivation_words(problem.free)
    ring = problem.free.ring
    failures: List[Optional[Counterexample]] = []
    for p in problem.complex.basis:
        terms = [(c, lifted.coderivation(q)) for q, c in problem.complex.differential_of(p).items()]

        def lhs(word, obj, terms=terms):
            out: Dict = {}
            for c, u in terms:
                add_scaled(out, u.value(word, obj), c)
            return out

        closed = B1(lifted.coderivation(p))
        found = first_difference(lhs, closed.value, iter(words))
        if found is not None:
            word, obj, left, right = found
            failures.append(_counterexample(ring, word or unit_word(obj), left, right, f"chain condition at {p}"))
            break
    return _report("lifted chain map", len(words) * len(problem.complex.basis), failures)


def verify_lift_restricts(lifted: ChainLift) -> CheckReport:
    """restr(u(p)) = u′(p)"""
    problem = lifted.problem
    failure = None
    for p in problem.complex.basis:
        restricted = restrict_coderivation(lifted.coderivation(p))
        expected = {slot: c for slot, c in problem.seed.get(p, {}).items()}
        if restricted != expected:
            failure = _counterexample(problem.free.ring, (), restricted, expected, f"restriction at {p}")
            break
    return _report("lift restricts to the A₁ data", len(problem.complex.basis), [failure])


# Homotopies, through the cone of the identity

@dataclass
class HomotopyLift:
    homotopy: Dict[Hashable, Coderivation]
    report: CheckReport


def lift_homotopy(
    problem: LiftProblem,
    target: Mapping[Hashable, Coderivation],
    seed: Mapping[Hashable, Mapping[Slot, object]],
    higher: Optional[Mapping[Hashable, Mapping[int, GradedMap]]] = None,
) -> HomotopyLift:
    """Given a chain map u = target(p) with restr(u) = B₁h′ + h′B₁, find h with u = (pd)h + (ph)B₁.

    h restricts to h′ and has the prescribed components h_k for k ≥ 2.
    """
    higher = higher or {}
    complex_ = problem.complex
    low = problem.low
    for p in complex_.basis:
        boundary: Vector = {}
        for q, c in complex_.differential_of(p).items():
            add_scaled(boundary, seed.get(q, {}), c)
        add_scaled(boundary, low.apply(1, {(slot,): c for slot, c in seed.get(p, {}).items()}), low.ring.one)
        if boundary != restrict_coderivation(target[p]):
            raise PreconditionError(f"restr(u) ≠ (pd)h′ + (ph′)B₁ at {p}")

    cone_complex = cone(identity_chain_map(complex_), complex_, complex_)
    cone_seed: Dict[ConeKey, Mapping] = {}
    cone_higher: Dict[ConeKey, Mapping[int, GradedMap]] = {}
    for p in complex_.basis:
        cone_seed[ConeKey("Q", p)] = restrict_coderivation(target[p])
        cone_seed[ConeKey("sP", p)] = dict(seed.get(p, {}))
        cone_higher[ConeKey("Q", p)] = {n: op for n, op in target[p].components.items() if n >= 2}
        cone_higher[ConeKey("sP", p)] = dict(higher.get(p, {}))
    lifted = lift_chain_map(
        LiftProblem(problem.free, problem.phi, problem.psi, cone_complex, cone_seed, cone_higher, problem.low)
    )
    homotopy = {p: lifted.coderivation(ConeKey("sP", p)) for p in complex_.basis}
    return HomotopyLift(homotopy, verify_homotopy(problem, target, homotopy))


def verify_homotopy(
    problem: LiftProblem, target: Mapping[Hashable, Coderivation], homotopy: Mapping[Hashable, Coderivation]
) -> CheckReport:
    words = _coderivation_words(problem.free)
    ring = problem.free.ring
    failures: List[Optional[Counterexample]] = []
    for p in problem.complex.basis:
        terms = [(c, homotopy[q]) for q, c in problem.complex.differential_of(p).items()]
        closed = B1(homotopy[p])

        def rhs(word, obj, terms=terms, closed=closed):
            out: Dict = dict(closed.value(word, obj))
            for c, h in terms:
                add_scaled(out, h.value(word, obj), c)
            return out

        found = first_difference(target[p].value, rhs, iter(words))
        if found is not None:
            word, obj, left, right = found
            failures.append(_counterexample(ring, word or unit_word(obj), left, right, f"homotopy at {p}"))
            break
    return _report("null-homotopy", len(words) * len(problem.complex.basis), failures)


# Complexes of transformations

def hom_complex(category: FunctorCategory, x: str = PHI, y: str = PSI) -> FiniteComplex:
    """The truncated complex (sA(x, y), B₁)"""
    basis = category.hom_basis(x, y)
    differential = {slot: category.b(1, (slot,)) for slot in basis}
    return FiniteComplex(category.ring, basis, differential)


@dataclass
class Equivalence:
    """Data produced while checking that restr is a homotopy equivalence on one pair of functors.

    The suite stops at the first check that cannot go on; the parts it did
    not reach stay None.
    """

    reports: List[CheckReport]
    low: Optional[FunctorCategory] = None
    full: Optional[FunctorCategory] = None
    section: Optional[ChainLift] = None
    homotopy: Dict[Hashable, Coderivation] = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return all(report.passed for report in self.reports)


def _refusal(name: str, error: Exception) -> CheckReport:
    """A failed report for a step whose preconditions do not hold"""
    return _report(name, 0, [Counterexample(arity=0, word="", note=str(error))])


def verify_restriction_equivalence(
    f: CocatHom, g: CocatHom, units: Optional[UnitData] = None
) -> Equivalence:
    """restr: A∞(F𝒬,𝒜) → A₁(𝒬,𝒜) is a homotopy equivalence on (f, g), and f̄, ḡ have invertible unit cycles.

    The A∞ identities of 𝒜 are checked first, up to one more than the leaf
    budget; every later step relies on them.
    """
    free = f.source
    result = Equivalence([check_an_category(f.target, free.leaves + 1)])
    if not result.passed:
        return result

    step = "functor categories"
    try:
        result.low = low = low_category(f, g)

        # u: the lift of the identity of sA₁(f̄, ḡ)
        step = "lift of the identity"
        low_complex = hom_complex(low)
        identity_seed = {slot: {slot: low.ring.one} for slot in low_complex.basis}
        result.section = section = lift_chain_map(LiftProblem(free, f, g, low_complex, identity_seed, low=low))
        result.reports.append(verify_chain_lift(section))
        result.reports.append(verify_lift_restricts(section))

        # v = id − restr·u on the truncated sA∞(f, g) is null-homotopic with h′ = 0
        step = "null-homotopy"
        result.full = full = functor_category(free, f.target, {PHI: f, PSI: g}, level=1, width=free.leaves)
        full_complex = hom_complex(full)
        target: Dict[Hashable, Coderivation] = {}
        for p in full_complex.basis:
            terms = [(full.ring.one, full.slot_coderivation(p))]
            for q, c in restrict_vector({p: full.ring.one}).items():
                terms.append((-c, section.coderivation(q)))
            target[p] = Coderivation.combine(terms, f, g, p.degree, name=f"v({p})")
        problem = LiftProblem(free, f, g, full_complex, {}, low=low)
        homotopy = lift_homotopy(problem, target, {})
        result.homotopy = homotopy.homotopy
        result.reports.append(homotopy.report)
    except (PreconditionError, NotAChainMap) as e:
        logger.warning("%s: %s", step, e)
        result.reports.append(_refusal(step, e))
        return result

    if units is not None:
        for name in (PHI, PSI):
            unit = _unit_vector(low, name, name, units)
            if not unit:
                result.reports.append(_refusal("unit cycles", PreconditionError(f"The unit of {name} vanishes")))
                continue
            try:
                result.reports.append(unit_cycle_check(low, name, name, unit, unit, units))
            except PreconditionError as e:
                logger.warning("unit cycles: %s", e)
                result.reports.append(_refusal("unit cycles", e))
    return result


def _unit_vector(low: FunctorCategory, x: str, y: str, units: UnitData) -> Vector:
    """x𝐢 read as a vector of (x, y); x and y must restrict to the same quiver map"""
    i = unit_coderivation(low.target, units, low.width)
    value = M_compose([], [i], base=low.functors[x])
    return low.from_coderivation(value, x, y)


# Strictification

@dataclass
class Strictification:
    functor: CocatHom
    strict: CocatHom
    transformation: Coderivation
    reports: List[CheckReport]


def strictify_iso(f: CocatHom, units: Optional[UnitData]) -> Strictification:
    """A natural isomorphism from f to the strict extension of f̄, whose A₁ part is f̄𝐢"""
    if units is None or not any(units.identities.values()):
        raise PreconditionError("Strictification needs a unit transformation of the target")
    free = f.source
    strict = extend_strict(restrict(f), free.leaves, free)
    low = low_category(f, strict)
    cell = Cell("unit", -1)
    seed = {cell: _unit_vector(low, PHI, PSI, units)}
    problem = LiftProblem(free, f, strict, FiniteComplex(free.ring, [cell], {}), seed, low=low)
    lifted = lift_chain_map(problem)
    transformation = lifted.coderivation(cell)
    reports = [verify_chain_lift(lifted), verify_lift_restricts(lifted), _check_unit_component(transformation, f, units)]
    return Strictification(f, strict, transformation, reports)


def _check_unit_component(t: Coderivation, f: CocatHom, units: UnitData) -> CheckReport:
    failure = None
    for obj in f.source.objects:
        expected = dict(units.identities.get(f.map_object(obj), {}))
        actual = dict(t.value((), obj))
        if actual != expected:
            failure = _counterexample(f.ring, unit_word(obj), actual, expected, "T₀ ≠ 𝐢₀")
            break
    return _report("unit component of the isomorphism", len(f.source.objects), [failure])


# Bracket identity for coderivations between functors F𝒬 → 𝒜

def check_bracket_identity(r: Coderivation, max_k: Optional[int] = None) -> CheckReport:
    """−Σ_l (rB₁)_{kl} b_l = (−1)^r Σ (1^γ ⊗ b_j ⊗ 1^δ)·Σ_l r_{·l} b_l on words of length ≤ max_k"""
    source = r.source.source
    target = r.source.target
    closed = B1(r)
    ring = r.ring
    top = max_k if max_k is not None else source.word_bound

    def lhs(word: Word, obj: Optional[str]) -> Dict:
        out: Dict = {}
        for image, c in closed.expand_all(word, obj).items():
            add_scaled(out, target.b(len(image), image), -c)
        return out

    def after_r(word: Word) -> Dict:
        out: Dict = {}
        for image, c in r.expand_all(word).items():
            add_scaled(out, target.b(len(image), image), c)
        return out

    def rhs(word: Word, obj: Optional[str]) -> Dict:
        out: Dict = {}
        for inner, c in bar_differential(source, word).items():
            add_scaled(out, after_r(inner), -c if r.degree & 1 else c)
        return out

    words = [(w, s) for w, s in source.domain_words(top) if w]
    found = first_difference(lhs, rhs, iter(words))
    failure = None
    if found is not None:
        word, obj, left, right = found
        failure = _counterexample(ring, word, left, right, "bracket identity")
    return _report(f"bracket identity of {r.name}", len(words), [failure])

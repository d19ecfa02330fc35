"""A_N-categories, A_N-functors, functor categories and their checks.

Everything is in shifted form: b_n: (s𝒜)^{⊗n} → s𝒜 has degree +1 and the
A_N identities read Σ (1^r ⊗ b_n ⊗ 1^t) b_{r+1+t} = 0.
"""
import logging
from abc import ABC, abstractmethod
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Callable, Dict, Hashable, Iterator, List, Mapping, Optional, Sequence, Tuple, Union

from .config import get_settings
from .errors import (
    DegreeError,
    DimensionMismatch,
    EndpointMismatch,
    InputError,
    PreconditionError,
    TruncationError,
)
from .models import CheckReport, Counterexample
from .quiver import (
    GradedMap,
    GradedQuiver,
    DGQuiver,
    ObjectUnit,
    Tensor,
    Word,
    check_composable,
    path_objects,
    unit_word,
    word_degree,
)
from .scalars import (
    Ring,
    SparseMatrix,
    Vector,
    add_scaled,
    add_term,
    image_membership,
    key_label,
    render_vector,
    sort_key,
    tensor_product,
)
from .tensor import (
    CocatHom,
    Coderivation,
    chain_functors,
    compose,
    first_difference,
    identity_functor,
    theta,
    zero_coderivation,
)
from .trees import compositions

logger = logging.getLogger(__name__)


class AnCategory(ABC):
    """Objects, graded hom bases of s𝒜 and operations b_n for n ≤ level (None = all n)"""

    def __init__(self, ring: Ring, objects: Sequence[str], level: Optional[int] = None, name: str = "A"):
        self.ring = ring
        self.objects = tuple(objects)
        self.level = level
        self.name = name
        self._ops: Dict[Tuple[int, Word], Mapping] = {}
        self._outgoing: Dict[str, List] = {}
        self._words: Dict[Tuple[int, Optional[str]], List[Word]] = {}

    @abstractmethod
    def hom_basis(self, x: str, y: str) -> List:
        """Basis of s𝒜(x, y), sorted"""

    @abstractmethod
    def _operation(self, n: int, word: Word) -> Mapping:
        """b_n on a composable word of basis elements"""

    @property
    def word_bound(self) -> Optional[int]:
        """Longest word this category hands out, if its words are bounded"""
        return None

    def b(self, n: int, word: Word) -> Mapping:
        if n < 1:
            raise InputError(f"There is no operation b_{n}")
        if self.level is not None and n > self.level:
            raise TruncationError(f"{self.name} is an A_{self.level}-category, b_{n} is not defined")
        if len(word) != n:
            raise DimensionMismatch(f"b_{n} applied to {len(word)} arguments")
        cached = self._ops.get((n, word))
        if cached is None:
            check_composable(word)
            cached = self._operation(n, word)
            self._ops[(n, word)] = cached
        return cached

    def apply(self, n: int, tensor: Mapping[Word, object]) -> Vector:
        out: Vector = {}
        for word, c in tensor.items():
            add_scaled(out, self.b(n, word), c)
        return out

    def operation_map(self, n: int) -> GradedMap:
        return GradedMap(1, rule=lambda word, obj: self.b(n, word), name=f"b{n}")

    def outgoing(self, x: str) -> List:
        found = self._outgoing.get(x)
        if found is None:
            found = [key for y in self.objects for key in self.hom_basis(x, y)]
            self._outgoing[x] = found
        return found

    def words(self, k: int, start: Optional[str] = None) -> List[Word]:
        """Composable words of k basis elements"""
        cached = self._words.get((k, start))
        if cached is None:
            starts = [start] if start is not None else list(self.objects)
            cached = []
            for x in starts:
                found: List[Word] = [()]
                for _ in range(k):
                    found = [w + (key,) for w in found for key in self.outgoing(w[-1].dst if w else x)]
                cached.extend(found)
            self._words[(k, start)] = cached
        return cached

    def domain_words(self, max_k: int) -> Iterator[Tuple[Word, Optional[str]]]:
        """(word, start object) pairs of length 0 … max_k; the start matters only for ()"""
        for x in self.objects:
            yield (), x
        for k in range(1, max_k + 1):
            for word in self.words(k):
                yield word, word[0].src

    def __repr__(self):
        return f"{type(self).__name__}({self.name})"


class ExplicitCategory(AnCategory):
    """A finite A_N-category given by operation tables on a graded quiver"""

    def __init__(
        self,
        quiver: GradedQuiver,
        operations: Mapping[int, GradedMap],
        level: Optional[int] = None,
        units: Optional["UnitData"] = None,
        name: str = "A",
    ):
        super().__init__(quiver.ring, quiver.objects, level, name)
        self.quiver = quiver
        self.operations: Dict[int, GradedMap] = {}
        for n, op in operations.items():
            if op.degree != 1:
                raise DegreeError(f"b_{n} has degree {op.degree}, expected +1")
            if level is not None and n > level:
                raise TruncationError(f"b_{n} supplied for an A_{level}-category")
            self.operations[n] = op
        self.units = units
        if units is not None:
            units.check(self)

    @classmethod
    def from_dg_quiver(cls, quiver: DGQuiver, name: str = "Q") -> "ExplicitCategory":
        """The A₁-category (s𝒬, d)"""
        return cls(quiver, {1: quiver.d}, level=1, name=name)

    def hom_basis(self, x: str, y: str) -> List:
        return self.quiver.hom_basis(x, y)

    def _operation(self, n: int, word: Word) -> Mapping:
        op = self.operations.get(n)
        return op(word) if op is not None else {}


class TruncatedCategory(AnCategory):
    """The same category with the operations above `level` forgotten"""

    def __init__(self, base: AnCategory, level: int):
        if base.level is not None and level > base.level:
            raise TruncationError(f"Cannot view an A_{base.level}-category as A_{level}")
        super().__init__(base.ring, base.objects, level, f"{base.name}|{level}")
        self.base = base

    @property
    def word_bound(self) -> Optional[int]:
        return self.base.word_bound

    def hom_basis(self, x: str, y: str) -> List:
        return self.base.hom_basis(x, y)

    def _operation(self, n: int, word: Word) -> Mapping:
        return self.base.b(n, word)


def restrict_level(category: AnCategory, level: int) -> TruncatedCategory:
    return TruncatedCategory(category, level)


def restrict_functor_level(f: CocatHom, level: int) -> CocatHom:
    """restr_{K,N}: keep the components f₁ … f_N"""
    if f.level is not None and level > f.level:
        raise TruncationError(f"{f.name} is only known up to arity {f.level}")
    kept = {n: op for n, op in f.components.items() if n <= level}
    return CocatHom(f.ring, f.source, f.target, f.object_map, kept, level, name=f.name)


@dataclass
class UnitData:
    """Unit elements 𝐢₀ ∈ s𝒜⁻¹(X, X) and optional higher components 𝐢_n of the unit transformation"""

    identities: Mapping[str, Mapping]
    higher: Mapping[int, GradedMap] = field(default_factory=dict)

    def check(self, category: AnCategory) -> None:
        for obj, vec in self.identities.items():
            if obj not in category.objects:
                raise InputError(f"Unit given for unknown object {obj}")
            for key in vec:
                if (key.src, key.dst) != (obj, obj) or key.degree != -1:
                    raise DegreeError(f"Unit of {obj} must lie in s𝒜⁻¹({obj}, {obj}), found {key}")
            if category.apply(1, {(key,): c for key, c in vec.items()}):
                raise PreconditionError(f"The unit of {obj} is not a b₁-cycle")


def bar_differential(category: AnCategory, word: Word, proper: bool = False) -> Tensor:
    """Σ (1^r ⊗ b_n ⊗ 1^t) on one word; `proper` drops the term with r = t = 0"""
    out: Tensor = {}
    k = len(word)
    top = k if category.level is None else min(k, category.level)
    for n in range(1, top + 1):
        for r in range(0, k - n + 1):
            if proper and r == 0 and n == k:
                continue
            image = category.b(n, word[r:r + n])
            if not image:
                continue
            odd = word_degree(word[r + n:]) & 1
            for key, c in image.items():
                add_term(out, word[:r] + (key,) + word[r + n:], -c if odd else c)
    return out


def bar_coderivation(category: AnCategory, width: int) -> Coderivation:
    """b viewed as a coderivation id → id of degree 1"""
    identity = identity_functor(category)
    top = width if category.level is None else min(width, category.level)
    components = {n: category.operation_map(n) for n in range(1, top + 1)}
    return Coderivation(identity, identity, 1, components, name="b")


# Checks

def _scan(tasks: Sequence[Callable[[], Optional[Counterexample]]]) -> List[Optional[Counterexample]]:
    threads = get_settings().threads
    if threads <= 1 or len(tasks) <= 1:
        return [task() for task in tasks]
    with ThreadPoolExecutor(max_workers=threads) as pool:
        return list(pool.map(lambda task: task(), tasks))


def _counterexample(ring: Ring, word: Word, lhs: Mapping, rhs: Mapping, note: str = "") -> Counterexample:
    arity = 0 if not word or isinstance(word[0], ObjectUnit) else len(word)
    return Counterexample(
        arity=arity,
        word=key_label(word),
        lhs=render_vector(lhs, ring),
        rhs=render_vector(rhs, ring),
        note=note,
    )


def _report(name: str, instances: int, failures: Sequence[Optional[Counterexample]]) -> CheckReport:
    failure = next((f for f in failures if f is not None), None)
    if failure is not None:
        logger.warning("%s fails on %s", name, failure.word)
    else:
        logger.info("%s holds on %d instances", name, instances)
    return CheckReport(name=name, passed=failure is None, instances=instances, counterexample=failure)


def _top_arity(category: AnCategory, max_k: Optional[int]) -> int:
    top = max_k if max_k is not None else category.level
    if top is None:
        top = category.word_bound
    if top is None:
        raise InputError(f"{category.name} has unbounded operations; give max_k")
    if category.level is not None:
        top = min(top, category.level)
    return top


def check_an_category(category: AnCategory, max_k: Optional[int] = None) -> CheckReport:
    """Σ (1^r ⊗ b_n ⊗ 1^t) b_{r+1+t} = 0 on every word of length ≤ max_k"""
    top = _top_arity(category, max_k)

    def check_length(k: int) -> Callable[[], Optional[Counterexample]]:
        def run() -> Optional[Counterexample]:
            for word in category.words(k):
                total: Vector = {}
                for inner, c in bar_differential(category, word).items():
                    add_scaled(total, category.b(len(inner), inner), c)
                if total:
                    return _counterexample(category.ring, word, total, {}, "b·b ≠ 0")
            return None
        return run

    failures = _scan([check_length(k) for k in range(1, top + 1)])
    instances = sum(len(category.words(k)) for k in range(1, top + 1))
    return _report(f"A_{top} identities of {category.name}", instances, failures)


def functor_lhs(f: CocatHom, word: Word) -> Vector:
    """Σ_l f_{kl} b_l"""
    out: Vector = {}
    for image, c in f.expand_all(word).items():
        add_scaled(out, f.target.b(len(image), image), c)
    return out


def functor_rhs(f: CocatHom, word: Word) -> Vector:
    """Σ (1^r ⊗ b_n ⊗ 1^t) f_{r+1+t}"""
    out: Vector = {}
    for inner, c in bar_differential(f.source, word).items():
        component = f.component(len(inner))
        if component is not None:
            add_scaled(out, component(inner), c)
    return out


def check_an_functor(f: CocatHom, max_k: Optional[int] = None) -> CheckReport:
    """Σ_l f_{kl} b_l = Σ (1^r ⊗ b_n ⊗ 1^t) f_{r+1+t} on words of length ≤ max_k"""
    top = _top_arity(f.source, max_k)
    if f.level is not None:
        top = min(top, f.level)

    def check_length(k: int) -> Callable[[], Optional[Counterexample]]:
        def run() -> Optional[Counterexample]:
            for word in f.source.words(k):
                lhs = functor_lhs(f, word)
                rhs = functor_rhs(f, word)
                if lhs != rhs:
                    return _counterexample(f.ring, word, lhs, rhs, "fb ≠ bf")
            return None
        return run

    failures = _scan([check_length(k) for k in range(1, top + 1)])
    instances = sum(len(f.source.words(k)) for k in range(1, top + 1))
    return _report(f"A_{top}-functor identities of {f.name}", instances, failures)


# The operations B_n of functor categories

def _coderivation_bound(source: AnCategory, *levels: Optional[int]) -> int:
    known = [n for n in levels if n is not None]
    if known:
        return min(known)
    if source.word_bound is not None:
        return source.word_bound
    raise InputError(f"Coderivations on {source.name} need a truncation level")


def B1(r: Coderivation) -> Coderivation:
    """[rB₁]_k = Σ_l r_{kl} b_l − (−1)^r Σ (1^α ⊗ b_n ⊗ 1^β) r_{α+1+β}"""
    source, target = r.source.source, r.source.target

    def rule(word: Word, obj: Optional[str]) -> Dict:
        out: Dict = {}
        for image, c in r.expand_all(word, obj).items():
            add_scaled(out, target.b(len(image), image), c)
        for inner, c in bar_differential(source, word).items():
            add_scaled(out, r.value(inner), c if r.degree & 1 else -c)
        return out

    top = _coderivation_bound(source, r.level)
    components = {n: GradedMap(r.degree + 1, rule=rule) for n in range(0, top + 1)}
    return Coderivation(r.source, r.target, r.degree + 1, components, r.level, name=f"{r.name}B1")


def Bn(rs: Sequence[Coderivation]) -> Coderivation:
    """B_n = Σ θ_{kl} b_l for n ≥ 2 composable coderivations"""
    if len(rs) < 2:
        raise InputError("Bn takes at least two coderivations; use B1 for one")
    functors = chain_functors(rs)
    source, target = functors[0].source, functors[0].target

    def rule(word: Word, obj: Optional[str]) -> Dict:
        out: Dict = {}
        for image, c in theta(functors, rs, word, obj).items():
            add_scaled(out, target.b(len(image), image), c)
        return out

    degree = sum(r.degree for r in rs) + 1
    level = _min_level([r.level for r in rs])
    top = _coderivation_bound(source, level)
    components = {n: GradedMap(degree, rule=rule) for n in range(0, top + 1)}
    return Coderivation(functors[0], functors[-1], degree, components, level, name=f"B{len(rs)}")


def _min_level(levels: Sequence[Optional[int]]) -> Optional[int]:
    known = [n for n in levels if n is not None]
    return min(known) if known else None


def M_compose(
    rs: Sequence[Coderivation],
    tail: Union[CocatHom, Sequence[Coderivation]],
    base: Optional[CocatHom] = None,
) -> Coderivation:
    """Components of M: A∞(𝒜,𝓑) ⊠ A∞(𝓑,𝒞) → A∞(𝒜,𝒞).

    With a homomorphism g as tail this is M_{n0} = θ·g_l; with one coderivation
    t it is M_{n1} = θ·t_l; longer tails give zero. `base` is the homomorphism
    to use when rs is empty.
    """
    functors = chain_functors(rs, base)
    source = functors[0].source
    degree = sum(r.degree for r in rs)
    if isinstance(tail, CocatHom):
        g = tail
        start, end = compose(functors[0], g), compose(functors[-1], g)
        if not rs:
            return zero_coderivation(start, end, 0, _min_level([g.level]))

        def rule(word: Word, obj: Optional[str]) -> Dict:
            out: Dict = {}
            for image, c in theta(functors, rs, word, obj).items():
                component = g.component(len(image))
                if component is not None:
                    add_scaled(out, component(image), c)
            return out

        level = _min_level([r.level for r in rs] + [g.level])
    else:
        ts = list(tail)
        if not ts:
            raise InputError("M needs a homomorphism or at least one coderivation on the right")
        start = compose(functors[0], ts[0].source)
        end = compose(functors[-1], ts[-1].target)
        degree += sum(t.degree for t in ts)
        if len(ts) > 1:
            return zero_coderivation(start, end, degree, _min_level([t.level for t in ts]))
        t = ts[0]

        def rule(word: Word, obj: Optional[str]) -> Dict:
            out: Dict = {}
            first = functors[0].map_object(path_objects(word, obj)[0])
            for image, c in theta(functors, rs, word, obj).items():
                add_scaled(out, t.value(image, first), c)
            return out

        level = _min_level([r.level for r in rs] + [t.level])
    top = _coderivation_bound(source, level)
    components = {n: GradedMap(degree, rule=rule) for n in range(0, top + 1)}
    return Coderivation(start, end, degree, components, level, name="M")


def _functor_of(x: Union[CocatHom, Coderivation]) -> CocatHom:
    return x if isinstance(x, CocatHom) else x.source


def check_composition_identity(
    rs: Sequence[Coderivation],
    ts: Sequence[Coderivation],
    max_k: int,
    base: Optional[CocatHom] = None,
    g: Optional[CocatHom] = None,
) -> CheckReport:
    """(1⊠B + B⊠1)M = MB on r¹⊗…⊗rⁿ ⊠ t (or ⊠ g when ts is empty)"""
    if len(ts) > 1:
        raise InputError("Only tails with at most one transformation are supported")
    functors = chain_functors(rs, base)
    g0 = ts[0].source if ts else g
    if g0 is None:
        raise InputError("Give the homomorphism g when there is no transformation on the right")
    g1 = ts[0].target if ts else g0
    n = len(rs)
    t_degree = ts[0].degree if ts else 0

    def piece(block: Sequence[Coderivation], position: int, tail) -> Coderivation:
        return M_compose(block, tail, base=functors[position])

    lhs: List[Tuple[int, Coderivation]] = []
    for a in range(n):
        for j in range(1, n - a + 1):
            middle = B1(rs[a]) if j == 1 else Bn(rs[a:a + j])
            new = list(rs[:a]) + [middle] + list(rs[a + j:])
            passed = sum(r.degree for r in rs[a + j:]) + t_degree
            lhs.append((passed, piece(new, 0, list(ts) if ts else g0)))
    if ts:
        lhs.append((0, piece(rs, 0, [B1(ts[0])])))

    rhs: List[Tuple[int, Coderivation]] = []
    whole = piece(rs, 0, list(ts) if ts else g0)
    rhs.append((0, B1(whole)))
    for l in range(2, n + len(ts) + 1):
        for sizes, marked in _splits(n, l, bool(ts)):
            pieces = []
            exponent = 0
            position = 0
            for index, size in enumerate(sizes):
                block = list(rs[position:position + size])
                if not ts:
                    pieces.append(piece(block, position, g0))
                elif index < marked:
                    pieces.append(piece(block, position, g0))
                elif index == marked:
                    pieces.append(piece(block, position, [ts[0]]))
                else:
                    pieces.append(piece(block, position, g1))
                    exponent += t_degree * sum(r.degree for r in block)
                position += size
            rhs.append((exponent, Bn(pieces)))

    source = functors[0].source
    ring = functors[0].ring

    def evaluate(terms: List[Tuple[int, Coderivation]]) -> Callable[[Word, Optional[str]], Dict]:
        def value(word: Word, obj: Optional[str]) -> Dict:
            out: Dict = {}
            for exponent, term in terms:
                add_scaled(out, term.value(word, obj), -ring.one if exponent & 1 else ring.one)
            return out
        return value

    words = list(source.domain_words(max_k))
    found = first_difference(evaluate(lhs), evaluate(rhs), iter(words))
    failure = None
    if found is not None:
        word, obj, left, right = found
        failure = _counterexample(ring, word or unit_word(obj), left, right, "(1⊠B+B⊠1)M ≠ MB")
    return _report(f"M compatibility for n={n}, m={len(ts)}", len(words), [failure])


def _splits(n: int, l: int, marked: bool) -> Iterator[Tuple[Tuple[int, ...], int]]:
    """Cuts of n coderivations into l consecutive pieces.

    Without a marked piece every piece is nonempty; with one, the marked piece
    (which carries the transformation) may be empty.
    """
    if not marked:
        for sizes in compositions(n, l):
            yield sizes, -1
        return
    for index in range(l):
        for own in range(0, n + 1):
            for rest in compositions(n - own, l - 1):
                yield rest[:index] + (own,) + rest[index:], index


def check_b_decomposition(rs: Sequence[Coderivation], max_k: int) -> CheckReport:
    """B = (1⊠b)M − (b⊠1)M with b = b^𝓑 resp. b^𝒜 as coderivations id → id"""
    functors = chain_functors(rs)
    source, target = functors[0].source, functors[0].target
    direct = B1(rs[0]) if len(rs) == 1 else Bn(rs)
    right = M_compose(rs, [bar_coderivation(target, max_k + len(rs))])
    left = M_compose([bar_coderivation(source, max_k)], rs)
    ring = functors[0].ring
    sign = -ring.one if sum(r.degree for r in rs) & 1 else ring.one

    def split(word: Word, obj: Optional[str]) -> Dict:
        out = dict(right.value(word, obj))
        add_scaled(out, left.value(word, obj), -sign)
        return out

    words = list(source.domain_words(max_k))
    found = first_difference(direct.value, split, iter(words))
    failure = None
    if found is not None:
        word, obj, lhs, rhs = found
        failure = _counterexample(ring, word or unit_word(obj), lhs, rhs, "B ≠ (1⊠b)M − (b⊠1)M")
    return _report(f"B_{len(rs)} from M", len(words), [failure])


# Functor categories

@dataclass(frozen=True)
class Slot:
    """Basis element of sA(𝒜,𝓑)(f, g): the word `word` ↦ `key`"""

    source: str
    target: str
    word: Word
    key: Hashable

    @property
    def arity(self) -> int:
        return 0 if isinstance(self.word[0], ObjectUnit) else len(self.word)

    @property
    def degree(self) -> int:
        return self.key.degree - word_degree(self.word)

    @property
    def src(self) -> str:
        return self.source

    @property
    def dst(self) -> str:
        return self.target

    @property
    def sort_key(self) -> tuple:
        return (self.arity, sort_key(self.word), sort_key(self.key))

    def __str__(self):
        return f"[{key_label(self.word)} ↦ {self.key}]"


class FunctorCategory(AnCategory):
    """A_N(𝒜, 𝓑) truncated to words of length ≤ width.

    Objects are the names of the supplied A∞-functors; a morphism is a
    coderivation, stored as a vector of slots.
    """

    def __init__(
        self,
        source: AnCategory,
        target: AnCategory,
        functors: Mapping[str, CocatHom],
        level: Optional[int],
        width: int,
        name: str = "Fun",
    ):
        super().__init__(source.ring, list(functors), level, name)
        if target.level is not None and (level is None or width + level > target.level):
            raise TruncationError(f"{target.name} is only A_{target.level}; too short for this functor category")
        self.source = source
        self.target = target
        self.functors = dict(functors)
        self.width = width
        self._basis: Dict[Tuple[str, str], List[Slot]] = {}
        self._single: Dict[Slot, Coderivation] = {}

    def hom_basis(self, x: str, y: str) -> List[Slot]:
        found = self._basis.get((x, y))
        if found is None:
            f, g = self.functors[x], self.functors[y]
            found = []
            for word, start in self.source.domain_words(self.width):
                objects = path_objects(word, start)
                keys = self.target.hom_basis(f.map_object(objects[0]), g.map_object(objects[-1]))
                stored = word if word else unit_word(start)
                found.extend(Slot(x, y, stored, key) for key in keys)
            found.sort(key=sort_key)
            self._basis[(x, y)] = found
        return found

    def to_coderivation(self, vec: Mapping[Slot, object], x: str, y: str) -> Coderivation:
        degrees = {slot.degree for slot in vec}
        if len(degrees) > 1:
            raise DegreeError(f"Vector mixes degrees {sorted(degrees)}")
        degree = degrees.pop() if degrees else 0
        tables: Dict[int, Dict[Word, Dict]] = {}
        for slot, c in vec.items():
            if (slot.source, slot.target) != (x, y):
                raise EndpointMismatch(f"{slot} does not lie in ({x}, {y})")
            tables.setdefault(slot.arity, {}).setdefault(slot.word, {})[slot.key] = c
        components = {n: GradedMap(degree, images) for n, images in tables.items()}
        return Coderivation(self.functors[x], self.functors[y], degree, components, self.width, name=f"{x}→{y}")

    def slot_coderivation(self, slot: Slot) -> Coderivation:
        found = self._single.get(slot)
        if found is None:
            found = self.to_coderivation({slot: self.ring.one}, slot.source, slot.target)
            self._single[slot] = found
        return found

    def from_coderivation(self, r: Coderivation, x: str, y: str) -> Vector:
        out: Vector = {}
        for word, start in self.source.domain_words(self.width):
            stored = word if word else unit_word(start)
            for key, c in r.value(word, start).items():
                out[Slot(x, y, stored, key)] = c
        return out

    def _operation(self, n: int, word: Word) -> Mapping:
        rs = [self.slot_coderivation(slot) for slot in word]
        result = B1(rs[0]) if n == 1 else Bn(rs)
        return self.from_coderivation(result, word[0].source, word[-1].target)


def functor_category(
    source: AnCategory,
    target: AnCategory,
    functors: Mapping[str, CocatHom],
    level: Optional[int] = None,
    width: Optional[int] = None,
    verify: bool = True,
) -> FunctorCategory:
    """Build A_N(𝒜, 𝓑) on the given A∞-functors, checking each of them first"""
    span = width if width is not None else source.word_bound
    if span is None:
        span = source.level
    if span is None:
        raise InputError("The width of the functor category must be given for unbounded sources")
    if verify:
        for name, f in functors.items():
            report = check_an_functor(f, span)
            if not report.passed:
                raise PreconditionError(f"{name} is not an A∞-functor: fails on {report.counterexample.word}")
    logger.info("Functor category on %s with %d objects, width %d", source.name, len(functors), span)
    return FunctorCategory(source, target, functors, level, span)


# Units

def unit_coderivation(category: AnCategory, units: UnitData, width: int) -> Coderivation:
    """The unit transformation id → id: 𝐢₀ on objects plus the given higher components"""
    identity = identity_functor(category)
    components = {0: GradedMap(-1, {unit_word(obj): vec for obj, vec in units.identities.items()})}
    for n, op in units.higher.items():
        components[n] = op
    return Coderivation(identity, identity, -1, components, width, name="i")


def unit_transformation(cat: FunctorCategory, x: str, units: UnitData) -> Vector:
    """x·𝐢 = (1⊠𝐢)M, the unit element of the functor category at x"""
    f = cat.functors[x]
    i = unit_coderivation(cat.target, units, cat.width)
    return cat.from_coderivation(M_compose([], [i], base=f), x, x)


def boundary_preimage(cat: FunctorCategory, x: str, y: str, target: Mapping[Slot, object]) -> Optional[Vector]:
    """Some z with zB₁ = target, or None when target is not a boundary"""
    if not target:
        return {}
    degrees = {slot.degree for slot in target}
    if len(degrees) != 1:
        raise DegreeError(f"Target mixes degrees {sorted(degrees)}")
    degree = degrees.pop()
    basis = cat.hom_basis(x, y)
    rows = [slot for slot in basis if slot.degree == degree - 1]
    cols = [slot for slot in basis if slot.degree == degree]
    index = {slot: j for j, slot in enumerate(cols)}
    entries = {}
    for i, slot in enumerate(rows):
        for image, c in cat.b(1, (slot,)).items():
            entries[(i, index[image])] = c
    matrix = SparseMatrix(cat.ring, len(rows), len(cols), entries)
    v = [target.get(slot, cat.ring.zero) for slot in cols]
    logger.debug("Boundary test in a %dx%d image", matrix.rows, matrix.cols)
    solution = image_membership(matrix, v)
    if solution is None:
        return None
    return {slot: c for slot, c in zip(rows, solution) if c}


def unit_cycle_check(
    cat: FunctorCategory,
    x: str,
    y: str,
    r0: Mapping[Slot, object],
    p0: Mapping[Slot, object],
    units: UnitData,
) -> CheckReport:
    """r0 ∈ (x, y) and p0 ∈ (y, x) are mutually inverse up to boundaries.

    Both must be B₁-cycles; the report carries a preimage under B₁ of
    (r0⊗p0)B₂ − x𝐢 and of (p0⊗r0)B₂ − y𝐢.
    """
    for label, vec in (("r0", r0), ("p0", p0)):
        boundary = cat.apply(1, {(slot,): c for slot, c in vec.items()})
        if boundary:
            raise PreconditionError(f"{label} is not a B₁-cycle")
    witnesses: Dict[str, Dict[str, str]] = {}
    failure = None
    for label, pair, (a, b) in (("r0·p0", (r0, p0), (x, x)), ("p0·r0", (p0, r0), (y, y))):
        difference = cat.apply(2, tensor_product(list(pair)))
        add_scaled(difference, unit_transformation(cat, a, units), -cat.ring.one)
        witness = boundary_preimage(cat, a, b, difference)
        if witness is None:
            failure = failure or _counterexample(cat.ring, (), difference, {}, f"{label}B₂ − 𝐢 is not a boundary")
            continue
        witnesses[label] = render_vector(witness, cat.ring)
    report = _report("unit cycles", 2, [failure])
    report.witnesses = witnesses
    return report

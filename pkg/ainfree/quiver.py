"""Graded quivers, graded maps and the Koszul rule.

Operators act on the right: applying o₁⊗…⊗oₘ to a word cut into blocks
x₁…xₘ costs the sign (−1)^{Σ_{i<j} deg(oᵢ)·deg(xⱼ)}.
Basis keys (generators, free basis elements, slots) carry ``src``, ``dst``,
``degree`` and ``sort_key``; words are tuples of keys.
"""
import logging
from dataclasses import dataclass, field
from itertools import product
from typing import Callable, Dict, Hashable, Iterable, List, Mapping, NamedTuple, Optional, Sequence, Tuple

from .errors import DegreeError, DimensionMismatch, EndpointMismatch, InputError, NotAChainMap
from .scalars import Ring, Scalar, SparseMatrix, Vector, add_scaled, add_term, sort_key

logger = logging.getLogger(__name__)

Word = Tuple[Hashable, ...]
Tensor = Dict[Word, Scalar]

_ZERO: Mapping = {}


@dataclass(frozen=True)
class Generator:
    """A morphism generator e: src → dst of degree deg(e) in s𝒬"""

    name: str
    src: str
    dst: str
    degree: int

    @property
    def sort_key(self) -> tuple:
        return (0, self.name)

    def __str__(self):
        return self.name


@dataclass(frozen=True)
class ObjectUnit:
    """Stand-in key for the empty word at an object, the T⁰ summand"""

    obj: str

    @property
    def src(self) -> str:
        return self.obj

    @property
    def dst(self) -> str:
        return self.obj

    @property
    def degree(self) -> int:
        return 0

    @property
    def sort_key(self) -> tuple:
        return (-1, self.obj)

    def __str__(self):
        return f"1_{self.obj}"


@dataclass(frozen=True)
class Cell:
    """Basis element of a user-supplied complex"""

    name: str
    degree: int

    @property
    def sort_key(self) -> tuple:
        return (self.degree, self.name)

    def __str__(self):
        return self.name


def word_degree(word: Iterable) -> int:
    return sum(key.degree for key in word)


def check_composable(word: Sequence) -> None:
    for left, right in zip(word, word[1:]):
        if left.dst != right.src:
            raise EndpointMismatch(f"{left} ends at {left.dst} but {right} starts at {right.src}")


def path_objects(word: Sequence, start: Optional[str] = None) -> List[str]:
    """Objects X₀ … X_k visited by a word; `start` is needed for the empty word"""
    if not word:
        if start is None:
            raise EndpointMismatch("The empty word needs an object")
        return [start]
    return [word[0].src] + [key.dst for key in word]


def unit_word(obj: str) -> Word:
    return (ObjectUnit(obj),)


class GradedMap:
    """Homogeneous linear map from words to vectors, given by a table and/or a rule.

    Table images are checked for homogeneity. A rule is called on words missing
    from the table and its values are memoized. The empty word at X is stored
    under ``unit_word(X)``.
    """

    is_identity = False

    def __init__(
        self,
        degree: int,
        images: Optional[Mapping[Word, Mapping]] = None,
        rule: Optional[Callable[[Word, Optional[str]], Mapping]] = None,
        name: str = "",
    ):
        self.degree = degree
        self.name = name
        self._rule = rule
        self._cache: Dict[Word, Mapping] = {}
        self._images: Dict[Word, Mapping] = {}
        for word, value in (images or {}).items():
            self._check_homogeneous(word, value)
            if value:
                self._images[tuple(word)] = dict(value)

    def _check_homogeneous(self, word: Word, value: Mapping) -> None:
        expected = word_degree(word) + self.degree
        for key in value:
            actual = word_degree(key) if isinstance(key, tuple) else key.degree
            if actual != expected:
                raise DegreeError(
                    f"{self.name or 'map'} of degree {self.degree} sends degree {word_degree(word)} "
                    f"to {key} of degree {actual}"
                )

    def __call__(self, word: Word, obj: Optional[str] = None) -> Mapping:
        lookup = tuple(word) if word else unit_word(obj)
        hit = self._images.get(lookup)
        if hit is not None:
            return hit
        if self._rule is None:
            return _ZERO
        cached = self._cache.get(lookup)
        if cached is None:
            cached = self._rule(tuple(word), obj)
            self._cache[lookup] = cached
        return cached

    @property
    def images(self) -> Dict[Word, Mapping]:
        return dict(self._images)

    def apply(self, tensor: Mapping[Word, Scalar], obj: Optional[str] = None) -> Vector:
        """Linear extension to a combination of words"""
        out: Vector = {}
        for word, c in tensor.items():
            add_scaled(out, self(word, obj), c)
        return out


class IdentityMap(GradedMap):
    is_identity = True

    def __init__(self, ring: Ring):
        super().__init__(0, name="id")
        self._one = ring.one

    def __call__(self, word: Word, obj: Optional[str] = None) -> Mapping:
        if len(word) != 1:
            raise DimensionMismatch("The identity acts on single morphisms")
        return {word[0]: self._one}


class Block(NamedTuple):
    arity: int
    op: GradedMap


def apply_blocks(blocks: Sequence[Block], word: Word, coeff: Scalar, start: Optional[str] = None) -> Tensor:
    """Apply op₁⊗…⊗opₘ to one word, blocks taken left to right"""
    objects = path_objects(word, start)
    position = 0
    exponent = 0
    passed = 0
    factors = []
    for block in blocks:
        piece = word[position:position + block.arity]
        if len(piece) != block.arity:
            raise DimensionMismatch(f"Blocks need {sum(b.arity for b in blocks)} factors, word has {len(word)}")
        exponent += passed * word_degree(piece)
        if block.op.is_identity:
            factors.append(((piece[0], None),))
        else:
            out = block.op(piece, objects[position])
            if not out:
                return {}
            factors.append(tuple(out.items()))
            passed += block.op.degree
        position += block.arity
    if position != len(word):
        raise DimensionMismatch(f"Blocks need {position} factors, word has {len(word)}")
    if exponent & 1:
        coeff = -coeff
    result: Tensor = {}
    for combo in product(*factors):
        c = coeff
        keys = []
        for key, value in combo:
            keys.append(key)
            if value is not None:
                c = c * value
        add_term(result, tuple(keys), c)
    return result


def koszul_apply(blocks: Sequence[Block], tensor: Mapping[Word, Scalar], start: Optional[str] = None) -> Tensor:
    """Linear extension of apply_blocks to a homogeneous combination of words"""
    degrees = {word_degree(word) for word in tensor}
    if len(degrees) > 1:
        raise DegreeError(f"Tensor mixes degrees {sorted(degrees)}")
    out: Tensor = {}
    for word, c in tensor.items():
        for image, d in apply_blocks(blocks, word, c, start).items():
            add_term(out, image, d)
    return out


class GradedQuiver:
    """Objects plus graded generators e: X → Y (degrees are those of s𝒬)"""

    def __init__(self, ring: Ring, objects: Sequence[str], generators: Sequence[Generator]):
        self.ring = ring
        self.objects = tuple(objects)
        if len(set(self.objects)) != len(self.objects):
            raise InputError("Object names must be unique")
        self.generators = tuple(generators)
        self._by_name: Dict[str, Generator] = {}
        for g in self.generators:
            if g.name in self._by_name:
                raise InputError(f"Duplicate generator {g.name}")
            if g.src not in self.objects or g.dst not in self.objects:
                raise InputError(f"Generator {g.name} uses an unknown object")
            self._by_name[g.name] = g

    def generator(self, name: str) -> Generator:
        try:
            return self._by_name[name]
        except KeyError:
            raise InputError(f"Unknown generator {name!r}") from None

    def hom_basis(self, x: str, y: str) -> List[Generator]:
        return [g for g in self.generators if g.src == x and g.dst == y]

    def outgoing(self, x: str) -> List[Generator]:
        return [g for g in self.generators if g.src == x]

    def paths(self, x: str, n: int) -> List[Tuple[Generator, ...]]:
        """Composable words of n generators starting at x"""
        found: List[Tuple[Generator, ...]] = [()]
        for _ in range(n):
            found = [w + (g,) for w in found for g in self.outgoing(w[-1].dst if w else x)]
        return found


class DGQuiver(GradedQuiver):
    """Graded quiver with a differential of degree +1, d² = 0"""

    def __init__(
        self,
        ring: Ring,
        objects: Sequence[str],
        generators: Sequence[Generator],
        differential: Optional[Mapping[Generator, Mapping]] = None,
    ):
        super().__init__(ring, objects, generators)
        images = {}
        for g, value in (differential or {}).items():
            for key in value:
                if (key.src, key.dst) != (g.src, g.dst):
                    raise EndpointMismatch(f"d({g}) contains {key} with different endpoints")
            images[(g,)] = value
        self.d = GradedMap(1, images, name="d")
        for g in self.generators:
            square = self.d.apply({(key,): c for key, c in self.d((g,)).items()})
            if square:
                raise InputError(f"d² ≠ 0 on {g}")


# Suspension

@dataclass(frozen=True)
class Suspended:
    """The element w·s^shift"""

    word: Word
    shift: int

    @property
    def degree(self) -> int:
        return word_degree(self.word) - self.shift

    @property
    def src(self) -> str:
        return self.word[0].src

    @property
    def dst(self) -> str:
        return self.word[-1].dst

    @property
    def sort_key(self) -> tuple:
        return (self.shift, sort_key(self.word))


def suspend(vec: Mapping[Suspended, Scalar], k: int) -> Dict[Suspended, Scalar]:
    """Right multiplication by s^k; s has degree −1 and acts without sign"""
    out = {}
    for element, c in vec.items():
        if not element.word:
            raise DimensionMismatch("Cannot suspend an empty word")
        out[Suspended(element.word, element.shift + k)] = c
    return out


def unshifted_operation(ring: Ring, b: Callable[[Word], Mapping], n: int) -> Callable[[Word], Dict]:
    """m_n on unshifted morphisms, defined by s^{⊗n}·b_n = m_n·s.

    Inputs are the keys of s𝒜 read as elements of 𝒜 (degree one higher);
    so is the output.
    """
    lift = GradedMap(-1, rule=lambda word, obj: {Suspended(word[0].word, word[0].shift + 1): ring.one})

    def m(word: Word) -> Dict:
        if len(word) != n:
            raise DimensionMismatch(f"m_{n} takes {n} arguments, got {len(word)}")
        unshifted = tuple(Suspended((key,), -1) for key in word)
        shifted = apply_blocks([Block(1, lift)] * n, unshifted, ring.one)
        out: Dict = {}
        for suspended_word, c in shifted.items():
            add_scaled(out, b(tuple(element.word[0] for element in suspended_word)), c)
        return out

    return m


# Finite complexes

class FiniteComplex:
    """Finite-rank complex with basis keys carrying `degree`; d raises degree by one"""

    def __init__(self, ring: Ring, basis: Sequence, differential: Mapping[Hashable, Mapping]):
        self.ring = ring
        self.basis = sorted(basis, key=sort_key)
        self._d = {key: dict(differential.get(key, {})) for key in self.basis}
        known = set(self.basis)
        for key, value in self._d.items():
            for target in value:
                if target not in known:
                    raise InputError(f"d({key}) leaves the complex")
                if target.degree != key.degree + 1:
                    raise DegreeError(f"d({key}) has a term {target} of the wrong degree")
        for key in self.basis:
            if self.d(self._d[key]):
                raise InputError(f"d² ≠ 0 on {key}")

    def d(self, vec: Mapping) -> Vector:
        out: Vector = {}
        for key, c in vec.items():
            add_scaled(out, self._d[key], c)
        return out

    def differential_of(self, key) -> Mapping:
        return self._d[key]

    def component(self, degree: int) -> List:
        return [key for key in self.basis if key.degree == degree]

    @property
    def degrees(self) -> List[int]:
        return sorted({key.degree for key in self.basis})


@dataclass(frozen=True)
class ConeKey:
    """Basis of Cone(α) = Q ⊕ sP"""

    part: str
    key: Hashable

    @property
    def degree(self) -> int:
        return self.key.degree if self.part == "Q" else self.key.degree - 1

    @property
    def sort_key(self) -> tuple:
        return (self.part, sort_key(self.key))

    def __str__(self):
        return f"{'s' if self.part == 'sP' else ''}{self.key}"


def check_chain_map(alpha: Mapping[Hashable, Mapping], source: FiniteComplex, target: FiniteComplex) -> None:
    for p in source.basis:
        via_source = {}
        for q, c in source.differential_of(p).items():
            add_scaled(via_source, alpha.get(q, {}), c)
        if via_source != target.d(alpha.get(p, {})):
            raise NotAChainMap(f"The map does not commute with d on {p}")


def cone(alpha: Mapping[Hashable, Mapping], source: FiniteComplex, target: FiniteComplex) -> FiniteComplex:
    """Cone of a chain map: d(sp) = pα − s(pd), d(q) = qd"""
    check_chain_map(alpha, source, target)
    basis = [ConeKey("Q", q) for q in target.basis] + [ConeKey("sP", p) for p in source.basis]
    differential: Dict[ConeKey, Vector] = {}
    for q in target.basis:
        differential[ConeKey("Q", q)] = {ConeKey("Q", k): c for k, c in target.differential_of(q).items()}
    for p in source.basis:
        image = {ConeKey("Q", k): c for k, c in alpha.get(p, {}).items()}
        for k, c in source.differential_of(p).items():
            add_term(image, ConeKey("sP", k), -c)
        differential[ConeKey("sP", p)] = image
    return FiniteComplex(source.ring, basis, differential)


def identity_chain_map(complex_: FiniteComplex) -> Dict[Hashable, Vector]:
    return {key: {key: complex_.ring.one} for key in complex_.basis}


def differential_matrix(complex_: FiniteComplex, degree: int) -> SparseMatrix:
    rows = complex_.component(degree)
    cols = complex_.component(degree + 1)
    index = {key: j for j, key in enumerate(cols)}
    entries = {}
    for i, key in enumerate(rows):
        for target, c in complex_.differential_of(key).items():
            entries[(i, index[target])] = c
    return SparseMatrix(complex_.ring, len(rows), len(cols), entries)


def homology_ranks(complex_: FiniteComplex) -> Dict[int, int]:
    """dim Hᵈ over the fraction field, for every degree carrying basis elements"""
    ranks = {}
    for degree in complex_.degrees:
        outgoing = differential_matrix(complex_, degree).rank()
        incoming = differential_matrix(complex_, degree - 1).rank()
        ranks[degree] = len(complex_.component(degree)) - outgoing - incoming
    return ranks

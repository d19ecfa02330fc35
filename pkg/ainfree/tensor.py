"""Cocategory homomorphisms and coderivations of tensor cocategories.

A homomorphism f: Ts𝒜 → Ts𝓑 is stored through its components f_n: T^n s𝒜 → s𝓑,
a coderivation r: f → g through r_n (n ≥ 0, r₀ living on the empty words).
Their matrix coefficients f_{kl}, r_{kl} are sums over ways of cutting a word
into consecutive blocks, evaluated lazily and memoized per word.
"""
import logging
from itertools import chain
from typing import Any, Callable, Dict, Iterator, List, Mapping, Optional, Sequence, Tuple

from .errors import DegreeError, EndpointMismatch, TruncationError
from .quiver import Block, GradedMap, IdentityMap, Tensor, Word, apply_blocks
from .scalars import Ring, Scalar, add_scaled, add_term
from .trees import all_compositions

logger = logging.getLogger(__name__)


class CocatHom:
    """Pointed cocategory homomorphism between tensor cocategories.

    `source` and `target` are the categories the homomorphism runs between;
    `level` is None for a full homomorphism and N for an A_N truncation.
    Components missing from `components` are zero.
    """

    def __init__(
        self,
        ring: Ring,
        source: Any,
        target: Any,
        object_map: Mapping[str, str],
        components: Mapping[int, GradedMap],
        level: Optional[int] = None,
        name: str = "f",
    ):
        self.ring = ring
        self.source = source
        self.target = target
        self.object_map = dict(object_map)
        self.level = level
        self.name = name
        self.components: Dict[int, GradedMap] = {}
        for n, component in components.items():
            if n < 1:
                raise DegreeError(f"A homomorphism has no component of arity {n}")
            if component.degree != 0:
                raise DegreeError(f"Component {n} of {name} has degree {component.degree}, expected 0")
            if level is not None and n > level:
                raise TruncationError(f"Component {n} given for an A_{level} homomorphism")
            self.components[n] = component
        self._cache: Dict[Tuple[Word, Optional[str]], Tensor] = {}
        # id(g) -> (g, self·g)
        self._composites: Dict[int, Tuple["CocatHom", "CocatHom"]] = {}

    def component(self, n: int) -> Optional[GradedMap]:
        if self.level is not None and n > self.level:
            raise TruncationError(f"{self.name} is only known up to arity {self.level}")
        return self.components.get(n)

    def arities(self, limit: int) -> List[int]:
        top = limit if self.level is None else min(limit, self.level)
        return [n for n in range(1, top + 1) if n in self.components]

    def map_object(self, obj: str) -> str:
        try:
            return self.object_map[obj]
        except KeyError:
            raise EndpointMismatch(f"{self.name} does not map object {obj}") from None

    def expand_all(self, word: Word, start: Optional[str] = None) -> Tensor:
        """Σ_l f_{kl}(word): every way of cutting the word into component blocks"""
        key = (word, start if not word else None)
        cached = self._cache.get(key)
        if cached is None:
            cached = theta([self], [], word, start)
            self._cache[key] = cached
        return cached

    def expand(self, word: Word, l: int, start: Optional[str] = None) -> Tensor:
        if self.level is not None and len(word) > self.level:
            raise TruncationError(f"f_{{{len(word)}{l}}} needs components beyond arity {self.level}")
        return {w: c for w, c in self.expand_all(word, start).items() if len(w) == l}

    def __repr__(self):
        return f"CocatHom({self.name})"


class Coderivation:
    """(f, g)-coderivation of degree `degree`, components r₀ … r_level"""

    def __init__(
        self,
        source: CocatHom,
        target: CocatHom,
        degree: int,
        components: Mapping[int, GradedMap],
        level: Optional[int] = None,
        name: str = "r",
    ):
        if set(source.object_map) != set(target.object_map):
            raise EndpointMismatch(f"{source.name} and {target.name} have different sources")
        self.source = source
        self.target = target
        self.ring = source.ring
        self.degree = degree
        self.level = level
        self.name = name
        self.components: Dict[int, GradedMap] = {}
        for n, component in components.items():
            if component.degree != degree:
                raise DegreeError(f"Component {n} of {name} has degree {component.degree}, expected {degree}")
            if level is not None and n > level:
                raise TruncationError(f"Component {n} given for a coderivation truncated at {level}")
            self.components[n] = component
        self._cache: Dict[Tuple[Word, Optional[str]], Tensor] = {}

    def component(self, n: int) -> Optional[GradedMap]:
        if self.level is not None and n > self.level:
            raise TruncationError(f"{self.name} is only known up to arity {self.level}")
        return self.components.get(n)

    def arities(self, limit: int) -> List[int]:
        top = limit if self.level is None else min(limit, self.level)
        return [n for n in range(0, top + 1) if n in self.components]

    def expand_all(self, word: Word, start: Optional[str] = None) -> Tensor:
        """Σ_l r_{kl}(word)"""
        key = (word, start if not word else None)
        cached = self._cache.get(key)
        if cached is None:
            cached = theta([self.source, self.target], [self], word, start)
            self._cache[key] = cached
        return cached

    def expand(self, word: Word, l: int, start: Optional[str] = None) -> Tensor:
        return {w: c for w, c in self.expand_all(word, start).items() if len(w) == l}

    def value(self, word: Word, start: Optional[str] = None) -> Mapping:
        """r_n applied to a word of length n"""
        component = self.component(len(word))
        return component(word, start) if component is not None else {}

    @classmethod
    def combine(
        cls,
        terms: Sequence[Tuple[Scalar, "Coderivation"]],
        source: CocatHom,
        target: CocatHom,
        degree: int,
        level: Optional[int] = None,
        name: str = "r",
    ) -> "Coderivation":
        """Linear combination Σ c·r of coderivations sharing endpoints and degree"""
        for _, r in terms:
            if r.degree != degree:
                raise DegreeError(f"Cannot add {r.name} of degree {r.degree} to degree {degree}")

        def rule(word: Word, obj: Optional[str]) -> Dict:
            out: Dict = {}
            for coeff, r in terms:
                add_scaled(out, r.value(word, obj), coeff)
            return out

        arities = sorted(set(chain.from_iterable(r.components for _, r in terms)))
        return cls(source, target, degree, {n: GradedMap(degree, rule=rule) for n in arities}, level, name)

    def __repr__(self):
        return f"Coderivation({self.name}: {self.source.name} → {self.target.name}, deg {self.degree})"


def zero_coderivation(source: CocatHom, target: CocatHom, degree: int, level: Optional[int] = None) -> Coderivation:
    return Coderivation(source, target, degree, {}, level, name="0")


def _interleavings(
    functors: Sequence[CocatHom], coders: Sequence[Coderivation], length: int
) -> Iterator[Tuple[Block, ...]]:
    """Block sequences f⁰…f⁰ r¹ f¹…f¹ r² … rⁿ fⁿ…fⁿ covering `length` factors"""
    count = len(coders)

    def run(segment: int, remaining: int) -> Iterator[Tuple[Block, ...]]:
        functor = functors[segment]
        for used in range(remaining + 1):
            if segment == count and used != remaining:
                continue
            for parts in all_compositions(used):
                head = []
                for p in parts:
                    op = functor.component(p)
                    if op is None:
                        break
                    head.append(Block(p, op))
                else:
                    if segment == count:
                        yield tuple(head)
                        continue
                    coder = coders[segment]
                    for arity in coder.arities(remaining - used):
                        op = coder.component(arity)
                        for tail in run(segment + 1, remaining - used - arity):
                            yield tuple(head) + (Block(arity, op),) + tail

    yield from run(0, length)


def theta(
    functors: Sequence[CocatHom],
    coders: Sequence[Coderivation],
    word: Word,
    start: Optional[str] = None,
    l: Optional[int] = None,
) -> Tensor:
    """θ: the sign-free multilinear sum over block sequences, with Koszul signs on evaluation.

    functors are f⁰ … fⁿ and coders r¹ … rⁿ, rⁱ: f^{i-1} → f^i. Returns the
    combination of output words; with `l` only outputs of length l are kept.
    """
    if len(functors) != len(coders) + 1:
        raise EndpointMismatch("θ needs one more homomorphism than coderivations")
    ring = functors[0].ring
    out: Tensor = {}
    for blocks in _interleavings(functors, coders, len(word)):
        if l is not None and len(blocks) != l:
            continue
        for image, c in apply_blocks(blocks, word, ring.one, start).items():
            add_term(out, image, c)
    return out


def hom_matrix_coeff(f: CocatHom, k: int, l: int) -> GradedMap:
    """f_{kl}: T^k → T^l as a map to combinations of words"""
    if f.level is not None and k > f.level:
        raise TruncationError(f"f_{{{k}{l}}} is not available for an A_{f.level} homomorphism")
    return GradedMap(0, rule=lambda word, obj: f.expand(word, l, obj), name=f"{f.name}_{k}{l}")


def coder_matrix_coeff(r: Coderivation, k: int, l: int) -> GradedMap:
    if r.level is not None and k - l + 1 > r.level:
        raise TruncationError(f"r_{{{k}{l}}} needs r_{k - l + 1}, beyond the truncation {r.level}")
    return GradedMap(r.degree, rule=lambda word, obj: r.expand(word, l, obj), name=f"{r.name}_{k}{l}")


def theta_matrix_coeff(rs: Sequence[Coderivation], k: int, l: int) -> GradedMap:
    """θ_{kl} for composable coderivations r¹ … rⁿ (n ≥ 1)"""
    if not rs:
        raise EndpointMismatch("θ needs at least one coderivation; use hom_matrix_coeff for n = 0")
    functors = chain_functors(rs)
    degree = sum(r.degree for r in rs)
    return GradedMap(degree, rule=lambda word, obj: theta(functors, rs, word, obj, l), name=f"theta_{k}{l}")


def chain_functors(rs: Sequence[Coderivation], base: Optional[CocatHom] = None) -> List[CocatHom]:
    """f⁰, f¹, …, fⁿ for composable coderivations, checking that they chain up"""
    if not rs:
        if base is None:
            raise EndpointMismatch("An empty chain of coderivations needs a base homomorphism")
        return [base]
    functors = [rs[0].source]
    for r in rs:
        if r.source is not functors[-1]:
            raise EndpointMismatch(f"{r.name} does not start where the previous coderivation ends")
        functors.append(r.target)
    return functors


def compose(f: CocatHom, g: CocatHom) -> CocatHom:
    """(fg)_k = Σ_l f_{kl} g_l, built once per pair and kept on f"""
    hit = f._composites.get(id(g))
    if hit is not None and hit[0] is g:
        return hit[1]
    object_map = {x: g.map_object(y) for x, y in f.object_map.items()}
    if f.level is None and g.level is None:
        level = None
    else:
        level = min(n for n in (f.level, g.level) if n is not None)

    def rule(word: Word, obj: Optional[str]) -> Dict:
        out: Dict = {}
        for image, c in f.expand_all(word).items():
            component = g.component(len(image))
            if component is not None:
                add_scaled(out, component(image), c)
        return out

    top = level if level is not None else max(1, max(f.components, default=1) * max(g.components, default=1))
    components = {n: GradedMap(0, rule=rule, name=f"{f.name}{g.name}_{n}") for n in range(1, top + 1)}
    composite = CocatHom(f.ring, f.source, g.target, object_map, components, level, name=f"{f.name}·{g.name}")
    f._composites[id(g)] = (g, composite)
    return composite


def identity_functor(category: Any, level: Optional[int] = None) -> CocatHom:
    ring = category.ring
    return CocatHom(ring, category, category, {x: x for x in category.objects}, {1: IdentityMap(ring)}, level, name="id")


def first_difference(
    lhs: Callable[[Word, Optional[str]], Mapping],
    rhs: Callable[[Word, Optional[str]], Mapping],
    words: Iterator[Tuple[Word, Optional[str]]],
) -> Optional[Tuple[Word, Optional[str], Mapping, Mapping]]:
    """First (word, start) on which two component functions disagree"""
    for word, start in words:
        left = lhs(word, start)
        right = rhs(word, start)
        if dict(left) != dict(right):
            return word, start, left, right
    return None

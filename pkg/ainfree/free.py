"""The free A∞-category F𝒬 generated by a differential graded quiver.

A basis element is a plane tree t with n leaves together with a composable
word e₁…e_n of generators; it lives in (s𝒬^{⊗n})[−|t|], so its degree is
Σ deg eᵢ + |t|. b_k grafts k basis elements onto a new root and b₁ is the
differential of the word plus the sum over ways to split a vertex.
"""
import logging
from dataclasses import dataclass, field
from typing import Dict, List, Mapping, Optional, Sequence, Tuple

from .ainfty import AnCategory
from .errors import BudgetExceeded, InputError, TreeError
from .quiver import DGQuiver, Generator, Word, check_composable, word_degree
from .scalars import Scalar, Vector, add_scaled, add_term, signed, tensor_product
from .trees import LEAF, PlaneTree, contractions, enumerate_trees, graft, parse_tree

logger = logging.getLogger(__name__)


@dataclass(frozen=True, eq=False)
class FreeBasis:
    tree: PlaneTree
    word: Tuple[Generator, ...]
    degree: int = field(init=False, repr=False)

    def __post_init__(self):
        object.__setattr__(self, "word", tuple(self.word))
        if self.tree.leaves != len(self.word):
            raise TreeError(f"Tree {self.tree} has {self.tree.leaves} leaves but the word has {len(self.word)} letters")
        check_composable(self.word)
        object.__setattr__(self, "degree", word_degree(self.word) + self.tree.size)

    @property
    def src(self) -> str:
        return self.word[0].src

    @property
    def dst(self) -> str:
        return self.word[-1].dst

    @property
    def leaves(self) -> int:
        return len(self.word)

    @property
    def sort_key(self) -> tuple:
        return (len(self.word), self.tree.size, self.tree.key, tuple(g.name for g in self.word))

    def __eq__(self, other):
        return isinstance(other, FreeBasis) and self.tree == other.tree and self.word == other.word

    def __hash__(self):
        return hash((self.tree.key, self.word))

    def __str__(self):
        return f"{self.tree.key}[{','.join(g.name for g in self.word)}]"


def leaf(generator: Generator) -> FreeBasis:
    return FreeBasis(LEAF, (generator,))


def graft_basis(parts: Sequence[FreeBasis]) -> Tuple[int, FreeBasis]:
    """b_k on basis elements: the grafted element and its sign exponent Σ_{i<j} |tᵢ|·deg xⱼ"""
    exponent = 0
    passed = 0
    for x in parts:
        exponent += passed * x.degree
        passed += x.tree.size
    word = tuple(g for x in parts for g in x.word)
    return exponent, FreeBasis(graft([x.tree for x in parts]), word)


def decompose(x: FreeBasis) -> Tuple[int, Tuple[FreeBasis, ...]]:
    """Inverse of graft_basis: the root's branches with their words, and the same sign exponent"""
    if x.tree.is_leaf:
        raise TreeError(f"{x} is a generator and does not decompose")
    parts = []
    position = 0
    for child in x.tree.children:
        parts.append(FreeBasis(child, x.word[position:position + child.leaves]))
        position += child.leaves
    exponent, _ = graft_basis(parts)
    return exponent, tuple(parts)


class FreeCategory(AnCategory):
    """F𝒬 truncated to at most `leaves` leaves; b_k is available for k ≤ `arity`"""

    def __init__(self, quiver: DGQuiver, leaves: int, arity: Optional[int] = None, name: str = "FQ"):
        if leaves < 1:
            raise InputError(f"The leaf budget must be positive, got {leaves}")
        self.max_arity = arity if arity is not None else leaves
        super().__init__(quiver.ring, quiver.objects, self.max_arity, name)
        self.quiver = quiver
        self.leaves = leaves
        self._hom: Dict[Tuple[str, str], List[FreeBasis]] = {}
        logger.debug("Free category on %d generators, %d leaves", len(quiver.generators), leaves)

    @property
    def word_bound(self) -> Optional[int]:
        return self.leaves

    def basis(self, tree: PlaneTree, names: Sequence[str]) -> FreeBasis:
        if tree.leaves > self.leaves:
            raise BudgetExceeded(f"{tree} has more than {self.leaves} leaves")
        return FreeBasis(tree, tuple(self.quiver.generator(name) for name in names))

    def hom_basis(self, x: str, y: str) -> List[FreeBasis]:
        found = self._hom.get((x, y))
        if found is None:
            found = []
            for n in range(1, self.leaves + 1):
                trees = enumerate_trees(n)
                for path in self.quiver.paths(x, n):
                    if path[-1].dst == y:
                        found.extend(FreeBasis(t, path) for t in trees)
            found.sort(key=lambda element: element.sort_key)
            self._hom[(x, y)] = found
        return found

    def words(self, k: int, start: Optional[str] = None) -> List[Word]:
        """Composable words of k basis elements with at most `leaves` leaves in total"""
        cached = self._words.get((k, start))
        if cached is None:
            starts = [start] if start is not None else list(self.objects)
            cached = []

            def grow(word: Word, obj: str, used: int):
                if len(word) == k:
                    cached.append(word)
                    return
                room = self.leaves - used - (k - len(word) - 1)
                for element in self.outgoing(obj):
                    if element.leaves <= room:
                        grow(word + (element,), element.dst, used + element.leaves)

            if k > 0:
                for x in starts:
                    grow((), x, 0)
            self._words[(k, start)] = cached
        return cached

    def b(self, n: int, word: Word) -> Mapping:
        if n > self.max_arity:
            raise BudgetExceeded(f"b_{n} is beyond the arity budget {self.max_arity}")
        return super().b(n, word)

    def _operation(self, n: int, word: Word) -> Mapping:
        total = sum(x.leaves for x in word)
        if total > self.leaves:
            raise BudgetExceeded(f"The result would have {total} leaves, budget is {self.leaves}")
        if n == 1:
            return free_b1_basis(self.quiver, word[0])
        exponent, grafted = graft_basis(word)
        return {grafted: signed(self.ring.one, exponent)}


def free_b1_basis(quiver: DGQuiver, x: FreeBasis) -> Vector:
    """b₁(t, e₁…e_n): differentiate one letter, or split one vertex of t"""
    out: Vector = {}
    one = quiver.ring.one
    for p, e in enumerate(x.word):
        exponent = x.tree.size + word_degree(x.word[p + 1:])
        for image, c in quiver.d((e,)).items():
            word = x.word[:p] + (image,) + x.word[p + 1:]
            add_term(out, FreeBasis(x.tree, word), signed(c, exponent))
    for split in contractions(x.tree):
        add_term(out, FreeBasis(split.parent, x.word), signed(one, split.beta))
    return out


def free_category(quiver: DGQuiver, leaves: int, arity: Optional[int] = None) -> FreeCategory:
    return FreeCategory(quiver, leaves, arity)


def free_bk(category: FreeCategory, xs: Sequence[Mapping[FreeBasis, Scalar]]) -> Vector:
    """Multilinear b_k on free elements"""
    if not xs:
        raise InputError("b_k needs at least one argument")
    out: Vector = {}
    for word, c in tensor_product(xs).items():
        add_scaled(out, category.b(len(word), word), c)
    return out


def free_b1(category: FreeCategory, x: Mapping[FreeBasis, Scalar]) -> Vector:
    return free_bk(category, [x])


def free_element(category: FreeCategory, terms: Mapping[Tuple[str, Sequence[str]], int]) -> Vector:
    """Build a free element from {(tree text, generator names): coefficient}"""
    out: Vector = {}
    for (text, names), c in terms.items():
        element = category.basis(parse_tree(text), names)
        add_term(out, element, category.ring(c))
    return out


"""Plane rooted trees without unary vertices.

A tree is either the leaf ``|`` or a vertex with at least two ordered
children. Internal vertices are addressed by their path from the root, a
tuple of child indices, so ``()`` is the root.
"""
import logging
from dataclasses import dataclass, field
from functools import lru_cache
from itertools import combinations, product
from typing import Dict, Iterator, List, NamedTuple, Sequence, Tuple

from .errors import TreeError

logger = logging.getLogger(__name__)

Path = Tuple[int, ...]


@dataclass(frozen=True, eq=False)
class PlaneTree:
    children: Tuple["PlaneTree", ...] = ()
    leaves: int = field(init=False, repr=False)
    size: int = field(init=False, repr=False)
    key: str = field(init=False, repr=False)

    def __post_init__(self):
        if len(self.children) == 1:
            raise TreeError("A vertex needs at least two children")
        object.__setattr__(self, "children", tuple(self.children))
        if not self.children:
            object.__setattr__(self, "leaves", 1)
            object.__setattr__(self, "size", 0)
            object.__setattr__(self, "key", "|")
            return
        object.__setattr__(self, "leaves", sum(c.leaves for c in self.children))
        object.__setattr__(self, "size", 1 + sum(c.size for c in self.children))
        object.__setattr__(self, "key", "(" + " ".join(c.key for c in self.children) + ")")

    @property
    def is_leaf(self) -> bool:
        return not self.children

    @property
    def arity(self) -> int:
        return len(self.children)

    @property
    def sort_key(self) -> tuple:
        return (self.size, self.key)

    def __eq__(self, other):
        return isinstance(other, PlaneTree) and self.key == other.key

    def __hash__(self):
        return hash(self.key)

    def __str__(self):
        return self.key


LEAF = PlaneTree()


def graft(children: Sequence[PlaneTree]) -> PlaneTree:
    """Join k ≥ 2 trees under a new root"""
    if len(children) < 2:
        raise TreeError(f"graft needs at least 2 trees, got {len(children)}")
    return PlaneTree(tuple(children))


def corolla(k: int) -> PlaneTree:
    """The tree with one vertex and k leaves"""
    if k == 1:
        return LEAF
    return graft([LEAF] * k)


def parse_tree(text: str) -> PlaneTree:
    """Read the canonical text form, e.g. "((| |) |)" """
    tokens = text.replace("(", " ( ").replace(")", " ) ").split()
    if not tokens:
        raise TreeError("Empty tree text")
    tree, position = _parse(tokens, 0)
    if position != len(tokens):
        raise TreeError(f"Trailing input in tree text {text!r}")
    return tree


def _parse(tokens: List[str], position: int) -> Tuple[PlaneTree, int]:
    if position >= len(tokens):
        raise TreeError("Unexpected end of tree text")
    token = tokens[position]
    if token == "|":
        return LEAF, position + 1
    if token != "(":
        raise TreeError(f"Unexpected token {token!r} in tree text")
    children = []
    position += 1
    while position < len(tokens) and tokens[position] != ")":
        child, position = _parse(tokens, position)
        children.append(child)
    if position >= len(tokens):
        raise TreeError("Unbalanced parentheses in tree text")
    return graft(children), position + 1


def compositions(total: int, parts: int) -> Iterator[Tuple[int, ...]]:
    """Ordered ways to write total as a sum of `parts` positive integers"""
    if parts == 0:
        if total == 0:
            yield ()
        return
    if total < parts:
        return
    for cuts in combinations(range(1, total), parts - 1):
        bounds = (0,) + cuts + (total,)
        yield tuple(bounds[i + 1] - bounds[i] for i in range(parts))


def all_compositions(total: int) -> Iterator[Tuple[int, ...]]:
    """Compositions of total into any number of positive parts; () for 0"""
    if total == 0:
        yield ()
        return
    for parts in range(1, total + 1):
        yield from compositions(total, parts)


@lru_cache(maxsize=None)
def _trees_with_leaves(n: int) -> Tuple[PlaneTree, ...]:
    if n == 1:
        return (LEAF,)
    found: Dict[str, PlaneTree] = {}
    for parts in range(2, n + 1):
        for shape in compositions(n, parts):
            for children in product(*(_trees_with_leaves(p) for p in shape)):
                tree = graft(children)
                found[tree.key] = tree
    return tuple(sorted(found.values(), key=lambda t: t.sort_key))


def enumerate_trees(n: int) -> List[PlaneTree]:
    """All trees with n leaves, ordered by vertex count then text form"""
    if n < 1:
        raise TreeError(f"A tree has at least one leaf, asked for {n}")
    return list(_trees_with_leaves(n))


@lru_cache(maxsize=None)
def schroeder_count(n: int) -> int:
    """Number of trees with n leaves, from the grafting recurrence"""
    if n == 1:
        return 1
    # first tree with j < n leaves, then a nonempty forest with the rest
    return sum(schroeder_count(j) * _forest_count(n - j) for j in range(1, n))


@lru_cache(maxsize=None)
def _forest_count(m: int) -> int:
    """Ordered forests of one or more trees with m leaves in total"""
    return sum(schroeder_count(j) * (_forest_count(m - j) if m > j else 1) for j in range(1, m + 1))


# Vertex addressing

def internal_vertices(t: PlaneTree) -> List[Path]:
    """Internal vertices in preorder: ancestors first, left branches before right"""
    out: List[Path] = []

    def walk(node: PlaneTree, path: Path):
        if node.is_leaf:
            return
        out.append(path)
        for i, child in enumerate(node.children):
            walk(child, path + (i,))

    walk(t, ())
    return out


def subtree(t: PlaneTree, path: Path) -> PlaneTree:
    node = t
    for index in path:
        if index < 0 or index >= len(node.children):
            raise TreeError(f"No vertex at {path} in {t}")
        node = node.children[index]
    return node


def _replace(t: PlaneTree, path: Path, new: PlaneTree) -> PlaneTree:
    if not path:
        return new
    index = path[0]
    children = list(t.children)
    children[index] = _replace(children[index], path[1:], new)
    return PlaneTree(tuple(children))


class Layer(NamedTuple):
    alpha: int
    arity: int
    beta: int


@dataclass(frozen=True)
class OrderedTree:
    """A tree together with the heights h of its internal vertices"""

    tree: PlaneTree
    heights: Dict[Path, int]


def canonical_order(t: PlaneTree) -> OrderedTree:
    """Preorder heights: the root gets 1, each vertex lies below its descendants"""
    return OrderedTree(t, {path: i + 1 for i, path in enumerate(internal_vertices(t))})


def height(t: PlaneTree, path: Path) -> int:
    order = internal_vertices(t)
    if path not in order:
        raise TreeError(f"{path} is not an internal vertex of {t}")
    return order.index(path) + 1


def forest_decomposition(t: PlaneTree) -> List[Layer]:
    """Layers of the canonical order, highest vertex first.

    Replaying the layers in order on the word of leaves applies one vertex
    at a time; each layer is (leaves left of the vertex, its arity, leaves right).
    """
    layers: List[Layer] = []
    # leaf ranges covered by the trees of the current forest
    spans: List[Tuple[int, int]] = [(i, i + 1) for i in range(t.leaves)]
    for path in reversed(internal_vertices(t)):
        node = subtree(t, path)
        start = _leaf_offset(t, path)
        alpha = next(i for i, span in enumerate(spans) if span[0] == start)
        spans[alpha:alpha + node.arity] = [(start, start + node.leaves)]
        layers.append(Layer(alpha, node.arity, len(spans) - alpha - 1))
    return layers


def _leaf_offset(t: PlaneTree, path: Path) -> int:
    """Number of leaves of t lying left of the subtree at path"""
    offset = 0
    node = t
    for index in path:
        offset += sum(child.leaves for child in node.children[:index])
        node = node.children[index]
    return offset


def replay_forest(layers: Sequence[Layer], leaves: int) -> PlaneTree:
    """Apply layers to a row of leaves, rebuilding the tree"""
    forest: List[PlaneTree] = [LEAF] * leaves
    for layer in layers:
        if layer.alpha + layer.arity + layer.beta != len(forest):
            raise TreeError(f"Layer {tuple(layer)} does not fit a forest of {len(forest)} trees")
        node = graft(forest[layer.alpha:layer.alpha + layer.arity])
        forest = forest[:layer.alpha] + [node] + forest[layer.alpha + layer.arity:]
    if len(forest) != 1:
        raise TreeError(f"Layers leave {len(forest)} trees, not one")
    return forest[0]


# Contractions

@dataclass(frozen=True)
class Contraction:
    """t′ with an internal edge whose contraction gives t"""

    parent: PlaneTree
    edge: Path
    tree: PlaneTree
    beta: int


def contract(t: PlaneTree, edge: Path) -> PlaneTree:
    """Contract the edge above the internal vertex at `edge` (not the root)"""
    if not edge:
        raise TreeError("The root has no edge to its parent")
    node = subtree(t, edge)
    if node.is_leaf:
        raise TreeError(f"{edge} is a leaf of {t}, not an internal vertex")
    parent_path, index = edge[:-1], edge[-1]
    parent = subtree(t, parent_path)
    children = parent.children[:index] + node.children + parent.children[index + 1:]
    return _replace(t, parent_path, PlaneTree(children))


def edge_sign_exponent(t: PlaneTree, edge: Path) -> int:
    """β(t′, e) = 1 + h(upper endpoint)"""
    return 1 + height(t, edge)


@lru_cache(maxsize=None)
def _contractions(t: PlaneTree) -> Tuple[Contraction, ...]:
    found = []
    for parent in enumerate_trees(t.leaves):
        if parent.size != t.size + 1:
            continue
        for rank, edge in enumerate(internal_vertices(parent)):
            if edge and contract(parent, edge) == t:
                found.append(Contraction(parent, edge, t, 1 + (rank + 1)))
    return tuple(found)


def contractions(t: PlaneTree) -> List[Contraction]:
    """Every (t′, e) with t′/e = t, with its sign exponent β"""
    if t.is_leaf:
        return []
    return list(_contractions(t))


def _relocate(path: Path, contracted: Path, arity: int) -> Path:
    # address of `path` after the vertex at `contracted` is merged into its parent
    parent, index = contracted[:-1], contracted[-1]
    if path[:len(contracted)] == contracted:
        rest = path[len(contracted):]
        return parent + (index + rest[0],) + rest[1:]
    depth = len(parent)
    if len(path) > depth and path[:depth] == parent and path[depth] > index:
        return parent + (path[depth] + arity - 1,) + path[depth + 1:]
    return path


def check_sign_cancellation(max_leaves: int) -> List[Tuple[PlaneTree, Path, Path]]:
    """Contracting two edges in either order must give opposite signs.

    Returns the failing (t″, e₁, e₂) triples; an empty list means the suite passed.
    """
    failures = []
    for n in range(1, max_leaves + 1):
        for t2 in enumerate_trees(n):
            edges = [p for p in internal_vertices(t2) if p]
            for a, b in combinations(edges, 2):
                if not _double_contraction_cancels(t2, a, b):
                    failures.append((t2, a, b))
    if failures:
        logger.warning("Sign cancellation fails for %d edge pairs", len(failures))
    return failures


def _double_contraction_cancels(t2: PlaneTree, a: Path, b: Path) -> bool:
    first_b = contract(t2, b)
    a_moved = _relocate(a, b, subtree(t2, b).arity)
    via_b = contract(first_b, a_moved)
    sign_b = edge_sign_exponent(first_b, a_moved) + edge_sign_exponent(t2, b)

    first_a = contract(t2, a)
    b_moved = _relocate(b, a, subtree(t2, a).arity)
    via_a = contract(first_a, b_moved)
    sign_a = edge_sign_exponent(first_a, b_moved) + edge_sign_exponent(t2, a)

    return via_a == via_b and (sign_a - sign_b) % 2 == 1

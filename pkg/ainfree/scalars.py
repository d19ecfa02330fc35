"""Exact coefficient rings, sparse vectors and sparse matrices.

Vectors are plain dicts ``key -> coefficient`` that never store a zero
coefficient. Coefficients are elements of a sympy domain (ZZ, QQ or GF(p)),
so every computation stays exact.
"""
import logging
from dataclasses import dataclass, field
from functools import cached_property
from typing import Any, Dict, Hashable, List, Mapping, Optional, Sequence, Tuple

from sympy import Rational, isprime
from sympy.polys.domains import GF, QQ, ZZ
from sympy.polys.matrices import DomainMatrix
from sympy.polys.matrices.normalforms import smith_normal_decomp

from .errors import DimensionMismatch, InputError, ScalarKindMismatch

logger = logging.getLogger(__name__)

Scalar = Any
Vector = Dict[Hashable, Scalar]

_EMPTY: Mapping = {}


@dataclass(frozen=True)
class Ring:
    """One of ℤ, ℚ or ℤ/p, tagged "Z", "Q" or "Zp:p" (also "Z/p") in files"""

    kind: str
    modulus: Optional[int] = None

    def __post_init__(self):
        if self.kind not in ("Z", "Q", "Zp"):
            raise InputError(f"Unknown ring kind {self.kind!r}")
        if self.kind == "Zp" and (self.modulus is None or not isprime(self.modulus)):
            raise InputError(f"Z/p needs a prime modulus, got {self.modulus}")

    @classmethod
    def parse(cls, tag: str) -> "Ring":
        text = str(tag).strip().upper().replace(" ", "")
        if text in ("Z", "ZZ"):
            return cls("Z")
        if text in ("Q", "QQ"):
            return cls("Q")
        for prefix in ("Z/", "ZP:", "GF(", "F"):
            if text.startswith(prefix):
                digits = text[len(prefix):].rstrip(")")
                if digits.isdigit():
                    return cls("Zp", int(digits))
        raise InputError(f"Unknown ring tag {tag!r}; use Z, Q or Z/p")

    @property
    def tag(self) -> str:
        return f"Z/{self.modulus}" if self.kind == "Zp" else self.kind

    @cached_property
    def domain(self):
        if self.kind == "Z":
            return ZZ
        if self.kind == "Q":
            return QQ
        return GF(self.modulus, symmetric=False)

    @property
    def is_field(self) -> bool:
        return self.kind != "Z"

    @property
    def zero(self) -> Scalar:
        return self.domain.zero

    @property
    def one(self) -> Scalar:
        return self.domain.one

    def __call__(self, value) -> Scalar:
        """Coerce an int, a Rational or a string like "-3/2" into the ring"""
        try:
            number = Rational(value)
        except (TypeError, ValueError) as e:
            raise InputError(f"Not a scalar: {value!r}") from e
        if number.q == 1:
            return self.domain(int(number.p))
        if self.kind == "Z":
            raise ScalarKindMismatch(f"{value} is not an integer")
        if self.kind == "Q":
            return QQ(int(number.p), int(number.q))
        denominator = self.domain(int(number.q))
        if not denominator:
            raise ScalarKindMismatch(f"{value} has a denominator divisible by {self.modulus}")
        return self.domain(int(number.p)) / denominator

    def render(self, value: Scalar) -> str:
        return str(self.domain.to_sympy(value))


# Sparse vectors

def add_term(acc: Vector, key: Hashable, coeff: Scalar) -> None:
    value = acc.get(key)
    value = coeff if value is None else value + coeff
    if value:
        acc[key] = value
    else:
        acc.pop(key, None)


def add_scaled(acc: Vector, vec: Mapping, coeff: Scalar) -> None:
    for key, c in vec.items():
        add_term(acc, key, c * coeff)


def signed(coeff: Scalar, exponent: int) -> Scalar:
    return -coeff if exponent & 1 else coeff


def tensor_product(vectors: Sequence[Mapping]) -> Vector:
    """Tensor of vectors as a dict keyed by tuples"""
    out: Vector = {(): None}
    for vec in vectors:
        grown: Vector = {}
        for word, c in out.items():
            for key, d in vec.items():
                grown[word + (key,)] = d if c is None else c * d
        out = grown
    return {word: c for word, c in out.items() if c is not None and c}


def sort_key(key) -> tuple:
    if isinstance(key, tuple):
        return (len(key),) + tuple(sort_key(k) for k in key)
    ordering = getattr(key, "sort_key", None)
    return ordering if ordering is not None else (str(key),)


def key_label(key) -> str:
    if isinstance(key, tuple):
        return " ⊗ ".join(key_label(k) for k in key) if key else "()"
    return str(key)


def render_vector(vec: Mapping, ring: Ring) -> Dict[str, str]:
    return {key_label(k): ring.render(vec[k]) for k in sorted(vec, key=sort_key)}


# Sparse matrices

@dataclass(frozen=True)
class SparseMatrix:
    """Matrix with (row, col) -> nonzero coefficient entries; row vectors act from the left"""

    ring: Ring
    rows: int
    cols: int
    entries: Mapping[Tuple[int, int], Scalar] = field(default_factory=dict)

    def __post_init__(self):
        if self.rows < 0 or self.cols < 0:
            raise DimensionMismatch(f"Negative shape {self.rows}x{self.cols}")
        clean = {}
        for (i, j), value in self.entries.items():
            if not (0 <= i < self.rows and 0 <= j < self.cols):
                raise DimensionMismatch(f"Entry ({i}, {j}) outside a {self.rows}x{self.cols} matrix")
            if value:
                clean[(i, j)] = value
        object.__setattr__(self, "entries", clean)

    @classmethod
    def from_rows(cls, ring: Ring, rows: Sequence[Sequence], cols: Optional[int] = None) -> "SparseMatrix":
        width = cols if cols is not None else (len(rows[0]) if rows else 0)
        entries = {}
        for i, row in enumerate(rows):
            if len(row) != width:
                raise DimensionMismatch(f"Row {i} has {len(row)} entries, expected {width}")
            for j, value in enumerate(row):
                entries[(i, j)] = ring(value) if not ring.domain.of_type(value) else value
        return cls(ring, len(rows), width, entries)

    @classmethod
    def from_domain_matrix(cls, ring: Ring, dm: DomainMatrix) -> "SparseMatrix":
        rows, cols = dm.shape
        return cls(ring, rows, cols, dict(dm.to_dok()))

    def to_domain_matrix(self) -> DomainMatrix:
        nested: Dict[int, Dict[int, Scalar]] = {}
        for (i, j), value in self.entries.items():
            nested.setdefault(i, {})[j] = value
        return DomainMatrix(nested, (self.rows, self.cols), self.ring.domain)

    def dense(self) -> List[List[Scalar]]:
        out = [[self.ring.zero] * self.cols for _ in range(self.rows)]
        for (i, j), value in self.entries.items():
            out[i][j] = value
        return out

    def left_apply(self, x: Sequence[Scalar]) -> List[Scalar]:
        """Row vector x times the matrix"""
        if len(x) != self.rows:
            raise DimensionMismatch(f"Vector of length {len(x)} against {self.rows} rows")
        out = [self.ring.zero] * self.cols
        for (i, j), value in self.entries.items():
            if x[i]:
                out[j] = out[j] + x[i] * value
        return out

    def rank(self) -> int:
        if not self.entries:
            return 0
        dm = self.to_domain_matrix()
        if not self.ring.is_field:
            dm = dm.convert_to(QQ)
        return dm.rank()


def mat_mul(a: SparseMatrix, b: SparseMatrix) -> SparseMatrix:
    if a.ring != b.ring:
        raise ScalarKindMismatch(f"Cannot multiply a {a.ring.tag} matrix by a {b.ring.tag} matrix")
    if a.cols != b.rows:
        raise DimensionMismatch(f"Shapes {a.rows}x{a.cols} and {b.rows}x{b.cols} do not compose")
    if not a.entries or not b.entries:
        return SparseMatrix(a.ring, a.rows, b.cols)
    product = a.to_domain_matrix().matmul(b.to_domain_matrix())
    return SparseMatrix.from_domain_matrix(a.ring, product)


def image_membership(m: SparseMatrix, v: Sequence[Scalar]) -> Optional[List[Scalar]]:
    """Find x with x·m = v, or None when v is not in the row space of m"""
    if len(v) != m.cols:
        raise DimensionMismatch(f"Target of length {len(v)} against {m.cols} columns")
    domain = m.ring.domain
    target = [value if domain.of_type(value) else m.ring(value) for value in v]
    if not any(target):
        return [m.ring.zero] * m.rows
    if m.rows == 0:
        return None
    x = _solve_field(m, target) if m.ring.is_field else _solve_integers(m, target)
    if x is not None and m.left_apply(x) != target:
        logger.warning("Discarding a preimage that does not reproduce the target")
        return None
    return x


def _solve_field(m: SparseMatrix, v: List[Scalar]) -> Optional[List[Scalar]]:
    # rref of [mᵀ | vᵀ]; v is in the row space iff the last column has no pivot
    augmented: Dict[int, Dict[int, Scalar]] = {}
    for (i, j), value in m.entries.items():
        augmented.setdefault(j, {})[i] = value
    for j, value in enumerate(v):
        if value:
            augmented.setdefault(j, {})[m.rows] = value
    dm = DomainMatrix(augmented, (m.cols, m.rows + 1), m.ring.domain)
    reduced, pivots = dm.rref()
    if m.rows in pivots:
        return None
    entries = reduced.to_dok()
    x = [m.ring.zero] * m.rows
    for row, column in enumerate(pivots):
        x[column] = entries.get((row, m.rows), m.ring.zero)
    return x


def _solve_integers(m: SparseMatrix, v: List[Scalar]) -> Optional[List[Scalar]]:
    # D = S·m·T is diagonal, so x·m = v becomes y·D = v·T with x = y·S
    dense = m.to_domain_matrix().to_dense()
    diagonal, left, right = smith_normal_decomp(dense)
    row = DomainMatrix([list(v)], (1, m.cols), ZZ)
    w = row.matmul(right).to_list()[0]
    d = diagonal.to_list()
    y = [ZZ.zero] * m.rows
    for j in range(m.cols):
        pivot = d[j][j] if j < m.rows else ZZ.zero
        if not pivot:
            if w[j]:
                return None
            continue
        if w[j] % pivot:
            return None
        y[j] = w[j] // pivot
    x = DomainMatrix([y], (1, m.rows), ZZ).matmul(left).to_list()[0]
    return list(x)

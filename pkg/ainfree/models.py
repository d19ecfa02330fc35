from pydantic import BaseModel, Field
from typing import Dict, List, Optional, Union


# Input documents

class MorphismSpec(BaseModel):
    name: str
    src: str
    dst: str
    sdeg: int  # degree in the suspended quiver s𝒬


class Term(BaseModel):
    name: str
    coeff: Union[int, str] = 1


class DifferentialSpec(BaseModel):
    on: str
    value: List[Term] = []


class QuiverFile(BaseModel):
    ring: str = "Z"
    objects: List[str]
    morphisms: List[MorphismSpec] = []
    differential: List[DifferentialSpec] = []


class OperationSpec(BaseModel):
    inputs: List[str]
    value: List[Term] = []


class UnitSpec(BaseModel):
    object: str
    value: List[Term]


class CategoryFile(QuiverFile):
    """A finite A_N-category; `differential` is b₁ and `operations` holds b_n for n ≥ 2"""
    level: Optional[int] = None
    operations: List[OperationSpec] = []
    units: List[UnitSpec] = []


class BasisRef(BaseModel):
    """A free basis element: tree text plus the word on its leaves"""
    tree: str = "|"
    word: List[str]


class ComponentEntry(BaseModel):
    inputs: List[Union[str, BasisRef]] = []
    object: Optional[str] = None  # for the arity-0 components of transformations
    value: List[Term] = []


class MapFile(BaseModel):
    """A chain quiver map s𝒬 → s𝒜"""
    object_map: Dict[str, str]
    generators: List[ComponentEntry] = []


class FunctorFile(BaseModel):
    ring: str = "Z"
    leaves: int
    object_map: Dict[str, str]
    components: List[ComponentEntry] = []


class TransformationFile(BaseModel):
    ring: str = "Z"
    leaves: int
    degree: int
    components: List[ComponentEntry] = []


# Reports

class Counterexample(BaseModel):
    arity: int
    word: str
    lhs: Dict[str, str] = {}
    rhs: Dict[str, str] = {}
    note: str = ""


class CheckReport(BaseModel):
    name: str
    passed: bool
    instances: int = 0
    counterexample: Optional[Counterexample] = None
    witnesses: Dict[str, Dict[str, str]] = {}


class SuiteReport(BaseModel):
    title: str
    ring: str = "Z"
    leaves: Optional[int] = None
    checks: List[CheckReport] = []
    details: Dict[str, Union[int, str, List[int], Dict[str, int]]] = {}

    @property
    def passed(self) -> bool:
        return all(check.passed for check in self.checks)


class TreeEntry(BaseModel):
    tree: str
    vertices: int
    heights: Dict[str, int] = {}
    layers: List[List[int]] = []
    contractions: List[Dict[str, Union[str, int]]] = []


class TreesReport(BaseModel):
    leaves: int
    count: int
    trees: List[TreeEntry] = []


# API requests

class VerifyRequest(BaseModel):
    """`category` is read as the quiver in free and equivalence modes; `target` is then 𝒜"""
    category: CategoryFile
    mode: str = Field("free", pattern="^(free|an-category|equivalence)$")
    leaves: Optional[int] = None
    arity: Optional[int] = None
    map: Optional[MapFile] = None
    map_g: Optional[MapFile] = None
    target: Optional[CategoryFile] = None


class ExtendRequest(BaseModel):
    quiver: QuiverFile
    category: CategoryFile
    map: MapFile
    leaves: Optional[int] = None


class LiftFile(BaseModel):
    """Lifts of the basis of sA₁(𝒬,𝒜)(f̄, ḡ) to transformations f → g"""
    ring: str = "Z"
    leaves: int
    transformations: Dict[str, TransformationFile] = {}

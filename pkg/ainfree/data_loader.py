import json
import logging
from pathlib import Path
from typing import Dict, List, Mapping, Optional, Sequence, Type, TypeVar

from pydantic import BaseModel, ValidationError

from .ainfty import AnCategory, ExplicitCategory, UnitData
from .errors import InputError
from .free import FreeBasis, FreeCategory
from .lift import QuiverMap
from .models import (
    BasisRef,
    CategoryFile,
    ComponentEntry,
    FunctorFile,
    MapFile,
    QuiverFile,
    Term,
    TransformationFile,
)
from .quiver import DGQuiver, Generator, GradedMap, GradedQuiver
from .scalars import Ring, Vector, add_term, sort_key
from .tensor import CocatHom, Coderivation
from .trees import parse_tree

logger = logging.getLogger(__name__)

Document = TypeVar("Document", bound=BaseModel)


class DataLoader:
    """Reads the JSON documents describing quivers, categories and maps"""

    def __init__(self, path: str):
        self.path = Path(path)

    def read(self, model: Type[Document]) -> Document:
        try:
            text = self.path.read_text(encoding="utf-8")
        except OSError as e:
            raise InputError(f"Cannot read {self.path}: {e}") from e
        try:
            return model.model_validate_json(text)
        except ValidationError as e:
            raise InputError(f"{self.path} is not a valid {model.__name__}: {e.errors()[0]['msg']}") from e

    def load_quiver(self) -> DGQuiver:
        document = self.read(QuiverFile)
        quiver = build_quiver(document)
        logger.info("Loaded quiver with %d objects and %d generators from %s",
                    len(quiver.objects), len(quiver.generators), self.path)
        return quiver

    def load_category(self) -> ExplicitCategory:
        document = self.read(CategoryFile)
        category = build_category(document)
        logger.info("Loaded category %s from %s", category.name, self.path)
        return category

    def load_map(self, quiver: DGQuiver, category: AnCategory) -> QuiverMap:
        return build_map(self.read(MapFile), quiver, category)

    def load_functor(self, quiver: DGQuiver, category: AnCategory) -> CocatHom:
        """A functor F𝒬 → 𝒜 written by functor_document, on a free category with the same leaf budget"""
        document = self.read(FunctorFile)
        f = build_functor(document, FreeCategory(quiver, document.leaves), category)
        logger.info("Loaded functor with components %s on %d leaves from %s",
                    sorted(f.components), document.leaves, self.path)
        return f


def write_document(document: BaseModel, path: Optional[str] = None) -> str:
    text = json.dumps(document.model_dump(mode="json"), indent=2, ensure_ascii=False)
    if path is not None:
        Path(path).write_text(text + "\n", encoding="utf-8")
    return text


# Building objects from documents

def _generators(document: QuiverFile) -> List[Generator]:
    return [Generator(m.name, m.src, m.dst, m.sdeg) for m in document.morphisms]


def _vector(ring: Ring, terms: Sequence[Term], lookup) -> Vector:
    out: Vector = {}
    for term in terms:
        add_term(out, lookup(term.name), ring(term.coeff))
    return out


def build_quiver(document: QuiverFile) -> DGQuiver:
    ring = Ring.parse(document.ring)
    graded = GradedQuiver(ring, document.objects, _generators(document))
    differential = {}
    for entry in document.differential:
        differential[graded.generator(entry.on)] = _vector(ring, entry.value, graded.generator)
    return DGQuiver(ring, graded.objects, graded.generators, differential)


def build_category(document: CategoryFile, name: str = "A") -> ExplicitCategory:
    """b₁ comes from `differential`, b_n from the `operations` with n inputs"""
    ring = Ring.parse(document.ring)
    quiver = GradedQuiver(ring, document.objects, _generators(document))
    tables: Dict[int, Dict[tuple, Vector]] = {}
    for entry in document.differential:
        tables.setdefault(1, {})[(quiver.generator(entry.on),)] = _vector(ring, entry.value, quiver.generator)
    for op in document.operations:
        if not op.inputs:
            raise InputError("An operation needs at least one input")
        word = tuple(quiver.generator(name) for name in op.inputs)
        tables.setdefault(len(word), {})[word] = _vector(ring, op.value, quiver.generator)
    operations = {n: GradedMap(1, images, name=f"b{n}") for n, images in tables.items()}
    units = None
    if document.units:
        identities = {u.object: _vector(ring, u.value, quiver.generator) for u in document.units}
        units = UnitData(identities)
    return ExplicitCategory(quiver, operations, document.level, units, name)


def build_map(document: MapFile, quiver: DGQuiver, category: AnCategory) -> QuiverMap:
    lookup = category.quiver.generator if isinstance(category, ExplicitCategory) else None
    if lookup is None:
        raise InputError("Quiver maps need a category given by tables")
    images = {}
    for entry in document.generators:
        if len(entry.inputs) != 1 or not isinstance(entry.inputs[0], str):
            raise InputError("Each generator entry of a map names exactly one generator")
        images[quiver.generator(entry.inputs[0])] = _vector(quiver.ring, entry.value, lookup)
    return QuiverMap(quiver, category, dict(document.object_map), images)


def build_functor(document: FunctorFile, free: FreeCategory, category: AnCategory) -> CocatHom:
    if not isinstance(category, ExplicitCategory):
        raise InputError("Functors are read into a category given by tables")
    if Ring.parse(document.ring) != free.ring:
        raise InputError(f"Functor file over {document.ring}, quiver over {free.ring.tag}")
    tables: Dict[int, Dict[tuple, Vector]] = {}
    for entry in document.components:
        if entry.object is not None or not entry.inputs or any(isinstance(ref, str) for ref in entry.inputs):
            raise InputError("Functor components take free basis elements as inputs")
        word = tuple(read_basis(free, ref) for ref in entry.inputs)
        tables.setdefault(len(word), {})[word] = _vector(free.ring, entry.value, category.quiver.generator)
    components = {n: GradedMap(0, images, name=f"f{n}") for n, images in tables.items()}
    return CocatHom(free.ring, free, category, dict(document.object_map), components, name="f")


# Documents from computed data

def _terms(vec: Mapping, ring: Ring) -> List[Term]:
    return [Term(name=str(key), coeff=ring.render(vec[key])) for key in sorted(vec, key=sort_key)]


def _ref(x: FreeBasis) -> BasisRef:
    return BasisRef(tree=x.tree.key, word=[g.name for g in x.word])


def map_document(qmap: QuiverMap) -> MapFile:
    entries = [
        ComponentEntry(inputs=[e.name], value=_terms(qmap.images.get(e, {}), qmap.quiver.ring))
        for e in qmap.quiver.generators
    ]
    return MapFile(object_map=dict(qmap.object_map), generators=entries)


def functor_document(f: CocatHom) -> FunctorFile:
    """All nonzero values of f_k on words of the free category within its leaf budget"""
    free = f.source
    if not isinstance(free, FreeCategory):
        raise InputError("Only functors out of a free category can be written out")
    entries = []
    for k in range(1, free.leaves + 1):
        component = f.component(k)
        if component is None:
            continue
        for word in free.words(k):
            value = component(word)
            if value:
                entries.append(ComponentEntry(inputs=[_ref(x) for x in word], value=_terms(value, f.ring)))
    return FunctorFile(ring=f.ring.tag, leaves=free.leaves, object_map=dict(f.object_map), components=entries)


def transformation_document(r: Coderivation) -> TransformationFile:
    free = r.source.source
    if not isinstance(free, FreeCategory):
        raise InputError("Only transformations between functors out of a free category can be written out")
    entries = []
    for word, start in free.domain_words(free.leaves):
        value = r.value(word, start)
        if not value:
            continue
        if word:
            entries.append(ComponentEntry(inputs=[_ref(x) for x in word], value=_terms(value, r.ring)))
        else:
            entries.append(ComponentEntry(object=start, value=_terms(value, r.ring)))
    return TransformationFile(ring=r.ring.tag, leaves=free.leaves, degree=r.degree, components=entries)


def read_basis(free: FreeCategory, ref: BasisRef) -> FreeBasis:
    return free.basis(parse_tree(ref.tree), ref.word)

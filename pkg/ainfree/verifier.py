import logging
from typing import Dict, List, Optional, Tuple

from .ainfty import ExplicitCategory, _report, check_an_category, check_an_functor
from .config import Settings, get_settings
from .data_loader import (
    build_category,
    build_map,
    build_quiver,
    functor_document,
    map_document,
    transformation_document,
)
from .errors import InputError, PreconditionError
from .free import FreeCategory
from .lift import (
    LiftProblem,
    QuiverMap,
    extend_strict,
    hom_complex,
    lift_chain_map,
    low_category,
    restrict,
    verify_chain_lift,
    verify_lift_restricts,
    verify_restriction_equivalence,
)
from .models import (
    CheckReport,
    Counterexample,
    ExtendRequest,
    FunctorFile,
    LiftFile,
    MapFile,
    SuiteReport,
    TreeEntry,
    TreesReport,
    VerifyRequest,
)
from .quiver import DGQuiver
from .tensor import CocatHom
from .trees import (
    canonical_order,
    check_sign_cancellation,
    contract,
    edge_sign_exponent,
    enumerate_trees,
    forest_decomposition,
    internal_vertices,
    schroeder_count,
)

logger = logging.getLogger(__name__)


def _path_label(path) -> str:
    return "/" + "/".join(str(i) for i in path)


class Verifier:
    """Runs the verification suites; shared by the CLI and the HTTP router"""

    def __init__(self, settings: Optional[Settings] = None):
        self.settings = settings or get_settings()

    def _budget(self, leaves: Optional[int], arity: Optional[int]) -> Tuple[int, int]:
        leaves = leaves if leaves is not None else self.settings.leaves
        if leaves < 1:
            raise InputError(f"The leaf budget must be positive, got {leaves}")
        arity = arity if arity is not None else self.settings.arity_for(leaves)
        if arity < 1:
            raise InputError(f"The arity budget must be positive, got {arity}")
        return leaves, arity

    def trees(self, n: int, contractions: bool = False) -> TreesReport:
        if n < 1:
            raise InputError(f"A tree has at least one leaf, asked for {n}")
        entries = []
        for t in enumerate_trees(n):
            order = canonical_order(t)
            entry = TreeEntry(
                tree=t.key,
                vertices=t.size,
                heights={_path_label(path): h for path, h in order.heights.items()},
                layers=[list(layer) for layer in forest_decomposition(t)],
            )
            if contractions:
                entry.contractions = [
                    {"edge": _path_label(edge), "result": contract(t, edge).key, "beta": edge_sign_exponent(t, edge)}
                    for edge in internal_vertices(t)
                    if edge
                ]
            entries.append(entry)
        return TreesReport(leaves=n, count=len(entries), trees=entries)

    def sign_check(self, max_leaves: Optional[int] = None) -> CheckReport:
        top = max_leaves if max_leaves is not None else self.settings.sign_leaves
        failures = check_sign_cancellation(top)
        instances = sum(len(enumerate_trees(n)) for n in range(1, top + 1))
        counterexample = None
        if failures:
            t, a, b = failures[0]
            counterexample = Counterexample(
                arity=t.leaves, word=t.key, note=f"edges {_path_label(a)} and {_path_label(b)} do not cancel"
            )
        return CheckReport(
            name=f"double contractions up to {top} leaves",
            passed=not failures,
            instances=instances,
            counterexample=counterexample,
        )

    def count_check(self, max_leaves: int = 7) -> CheckReport:
        failure = None
        for n in range(1, max_leaves + 1):
            found, expected = len(enumerate_trees(n)), schroeder_count(n)
            if found != expected:
                failure = Counterexample(arity=n, word=str(n), lhs={"trees": str(found)}, rhs={"recurrence": str(expected)})
                break
        return _report("tree counts", max_leaves, [failure])

    def verify_free(self, quiver: DGQuiver, leaves: Optional[int] = None, arity: Optional[int] = None) -> SuiteReport:
        leaves, arity = self._budget(leaves, arity)
        free = FreeCategory(quiver, leaves, arity)
        checks = [self.sign_check(leaves), check_an_category(free)]
        basis = sum(len(free.hom_basis(x, y)) for x in free.objects for y in free.objects)
        return SuiteReport(
            title="free A∞-category",
            ring=quiver.ring.tag,
            leaves=leaves,
            checks=checks,
            details={"generators": len(quiver.generators), "basis": basis, "arity": arity},
        )

    def verify_category(self, category: ExplicitCategory, max_k: Optional[int] = None) -> SuiteReport:
        top = max_k if max_k is not None else (category.level or self.settings.leaves)
        checks = [check_an_category(category, top)]
        return SuiteReport(title=f"A_{top}-category", ring=category.ring.tag, checks=checks,
                           details={"objects": len(category.objects)})

    def _functors(self, quiver: DGQuiver, f_map: QuiverMap, g_map: QuiverMap, leaves: int) -> Tuple[CocatHom, CocatHom]:
        free = FreeCategory(quiver, leaves)
        return extend_strict(f_map, leaves, free), extend_strict(g_map, leaves, free)

    def verify_equivalence(
        self, quiver: DGQuiver, category: ExplicitCategory, f_map: QuiverMap, g_map: QuiverMap, leaves: Optional[int] = None
    ) -> SuiteReport:
        leaves, _ = self._budget(leaves, None)
        if category.units is None:
            raise PreconditionError(f"{category.name} carries no unit elements")
        f, g = self._functors(quiver, f_map, g_map, leaves)
        result = verify_restriction_equivalence(f, g, category.units)
        details: Dict[str, int] = {}
        if result.low is not None:
            details["A1 basis"] = len(result.low.hom_basis("phi", "psi"))
        if result.full is not None:
            details["A∞ basis"] = len(result.full.hom_basis("phi", "psi"))
            details["nonzero homotopies"] = sum(
                1 for h in result.homotopy.values()
                if any(h.value(word, start) for word, start in f.source.domain_words(leaves))
            )
        return SuiteReport(title="restriction equivalence", ring=quiver.ring.tag, leaves=leaves,
                           checks=result.reports, details=details)

    def extend(self, quiver: DGQuiver, qmap: QuiverMap, leaves: Optional[int] = None) -> Tuple[FunctorFile, CheckReport]:
        leaves, _ = self._budget(leaves, None)
        f = extend_strict(qmap, leaves, FreeCategory(quiver, leaves))
        return functor_document(f), check_an_functor(f, leaves)

    def restrict(self, f: CocatHom) -> Tuple[MapFile, CheckReport]:
        """The quiver map f̄ of a functor read from a file, with the functor identities of f"""
        return map_document(restrict(f)), check_an_functor(f, f.source.leaves)

    def lift(
        self, quiver: DGQuiver, f_map: QuiverMap, g_map: QuiverMap, leaves: Optional[int] = None
    ) -> Tuple[LiftFile, List[CheckReport]]:
        """Lift every basis element of sA₁(𝒬,𝒜)(f̄, ḡ) to a transformation f → g"""
        leaves, _ = self._budget(leaves, None)
        f, g = self._functors(quiver, f_map, g_map, leaves)
        low = low_category(f, g)
        complex_ = hom_complex(low)
        seed = {slot: {slot: low.ring.one} for slot in complex_.basis}
        lifted = lift_chain_map(LiftProblem(f.source, f, g, complex_, seed, low=low))
        document = LiftFile(
            ring=quiver.ring.tag,
            leaves=leaves,
            transformations={str(slot): transformation_document(lifted.coderivation(slot)) for slot in complex_.basis},
        )
        return document, [verify_chain_lift(lifted), verify_lift_restricts(lifted)]

    def report(self, quiver: Optional[DGQuiver] = None, leaves: Optional[int] = None) -> SuiteReport:
        checks = [self.count_check(), self.sign_check()]
        details: Dict[str, List[int]] = {"tree counts": [len(enumerate_trees(n)) for n in range(1, 8)]}
        if quiver is not None:
            checks.extend(self.verify_free(quiver, leaves).checks[1:])
        return SuiteReport(title="summary", checks=checks, leaves=leaves, details=details)

    # Request-level entry points used by the router

    def run_verify(self, request: VerifyRequest) -> SuiteReport:
        if request.mode == "free":
            return self.verify_free(build_quiver(request.category), request.leaves, request.arity)
        if request.mode == "an-category":
            return self.verify_category(build_category(request.category), request.arity or request.leaves)
        if request.target is None or request.map is None or request.map_g is None:
            raise InputError("Equivalence mode needs target, map and map_g")
        quiver = build_quiver(request.category)
        category = build_category(request.target)
        return self.verify_equivalence(
            quiver, category, build_map(request.map, quiver, category), build_map(request.map_g, quiver, category),
            request.leaves,
        )

    def run_extend(self, request: ExtendRequest) -> FunctorFile:
        quiver = build_quiver(request.quiver)
        category = build_category(request.category)
        document, report = self.extend(quiver, build_map(request.map, quiver, category), request.leaves)
        if not report.passed:
            logger.warning("Extension of the quiver map fails the functor identities")
        return document

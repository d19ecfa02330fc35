import json
from pathlib import Path

import pytest
from hypothesis import strategies as st

from ainfree.data_loader import DataLoader
from ainfree.quiver import DGQuiver, Generator
from ainfree.scalars import Ring

DATA = Path(__file__).resolve().parent.parent / "data"


def data_file(name: str) -> str:
    return str(DATA / name)


@pytest.fixture
def unital():
    """Strictly unital toy: i (unit), a, b with b₁a = b"""
    return DataLoader(data_file("unital.json")).load_category()


@pytest.fixture
def quiver():
    """One object, x in degree 0 and y in degree 1, no differential"""
    return DataLoader(data_file("quiver.json")).load_quiver()


@pytest.fixture
def phi(quiver, unital):
    return DataLoader(data_file("phi.json")).load_map(quiver, unital)


@pytest.fixture
def dg_quiver():
    return DataLoader(data_file("dg_quiver.json")).load_quiver()


@pytest.fixture
def dg_map(dg_quiver, unital):
    return DataLoader(data_file("dg_map.json")).load_map(dg_quiver, unital)


@st.composite
def dg_quivers(draw, max_objects: int = 2, max_generators: int = 4):
    """Random DG quivers with d² = 0: d sends some generators to cycles"""
    ring = Ring("Z")
    objects = [f"X{i}" for i in range(draw(st.integers(1, max_objects)))]
    count = draw(st.integers(1, max_generators))
    generators = []
    for k in range(count):
        src = draw(st.sampled_from(objects))
        dst = draw(st.sampled_from(objects))
        generators.append(Generator(f"e{k}", src, dst, draw(st.integers(-2, 2))))
    differential = {}
    targets = set()
    for e in generators:
        if e in targets:
            continue
        candidates = [
            g for g in generators
            if (g.src, g.dst) == (e.src, e.dst) and g.degree == e.degree + 1 and g not in differential
        ]
        if candidates and draw(st.booleans()):
            target = draw(st.sampled_from(candidates))
            differential[e] = {target: ring(draw(st.sampled_from([1, -1, 2])))}
            targets.add(target)
    return DGQuiver(ring, objects, generators, differential)


@pytest.fixture
def mutated_with_units(tmp_path) -> str:
    """The mutated toy category (b₂(i, b) = +b) with i declared as its unit"""
    document = json.loads(Path(data_file("unital_mutated.json")).read_text(encoding="utf-8"))
    document["units"] = [{"object": "X", "value": [{"name": "i", "coeff": 1}]}]
    path = tmp_path / "mutated_units.json"
    path.write_text(json.dumps(document), encoding="utf-8")
    return str(path)

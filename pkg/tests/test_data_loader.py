import json
from pathlib import Path

import pytest

from conftest import data_file
from ainfree.ainfty import check_an_functor
from ainfree.data_loader import DataLoader, functor_document, map_document, write_document
from ainfree.errors import InputError
from ainfree.free import FreeCategory
from ainfree.lift import extend_strict, restrict
from ainfree.models import FunctorFile, MapFile


@pytest.fixture
def golden_quiver():
    return DataLoader(data_file("golden_quiver.json")).load_quiver()


@pytest.fixture
def golden_map(golden_quiver, unital):
    return DataLoader(data_file("golden_map.json")).load_map(golden_quiver, unital)


def test_extension_matches_golden_file(golden_quiver, golden_map):
    f = extend_strict(golden_map, 3, FreeCategory(golden_quiver, 3))
    expected = DataLoader(data_file("golden_functor.json")).read(FunctorFile)
    assert functor_document(f) == expected


def test_golden_functor_loads_as_a_functor(golden_quiver, golden_map, unital):
    f = DataLoader(data_file("golden_functor.json")).load_functor(golden_quiver, unital)
    assert f.source.leaves == 3
    assert set(f.components) == {1}
    assert check_an_functor(f, 3).passed
    assert restrict(f).images == golden_map.images


def test_functor_file_round_trip(tmp_path, dg_quiver, dg_map, unital):
    f = extend_strict(dg_map, 3, FreeCategory(dg_quiver, 3))
    path = tmp_path / "f.json"
    write_document(functor_document(f), str(path))
    loaded = DataLoader(str(path)).load_functor(dg_quiver, unital)
    for x in f.source.hom_basis("P", "R"):
        assert dict(loaded.component(1)((x,))) == dict(f.component(1)((x,))), str(x)
    back = restrict(loaded)
    assert back.images == dg_map.images
    assert back.object_map == dg_map.object_map


def test_map_document_lists_every_generator(dg_quiver, dg_map):
    document = map_document(dg_map)
    assert [entry.inputs for entry in document.generators] == [["u"], ["v"], ["w"]]
    reread = MapFile.model_validate_json(write_document(document))
    assert reread == document


def test_functor_file_needs_basis_inputs(tmp_path, golden_quiver, unital):
    document = json.loads(Path(data_file("golden_functor.json")).read_text(encoding="utf-8"))
    document["components"][0]["inputs"] = ["x"]
    path = tmp_path / "f.json"
    path.write_text(json.dumps(document), encoding="utf-8")
    with pytest.raises(InputError):
        DataLoader(str(path)).load_functor(golden_quiver, unital)


def test_functor_file_ring_must_match(tmp_path, golden_quiver, unital):
    document = json.loads(Path(data_file("golden_functor.json")).read_text(encoding="utf-8"))
    document["ring"] = "Q"
    path = tmp_path / "f.json"
    path.write_text(json.dumps(document), encoding="utf-8")
    with pytest.raises(InputError):
        DataLoader(str(path)).load_functor(golden_quiver, unital)

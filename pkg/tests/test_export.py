"""Tests for reading and rendering documents."""

import json

import pytest

from sepforge.exceptions import InvalidProfileError, ParseError, StructureError, UsageError
from sepforge.models import Refinement, Separation, SeparationSet, TreeDecomposition
from sepforge.services.export_service import (
    load_document,
    profile_from_data,
    render,
    separation_set_from_data,
    td_from_data,
)
from sepforge.services.separation_service import corners

SHARED_TD = TreeDecomposition(({0, 1, 2, 3}, {2, 3, 4, 5}), ((0, 1),))


def test_td_from_data():
    data = {
        "nodes": [{"id": 1, "part": [2, 3, 4, 5]}, {"id": 0, "part": [0, 1, 2, 3]}],
        "edges": [{"u": 0, "v": 1, "adhesion": [2, 3]}],
    }

    assert td_from_data(data) == SHARED_TD


def test_td_from_data_rejects_gaps_in_ids():
    data = {"nodes": [{"id": 0, "part": [0]}, {"id": 2, "part": [1]}], "edges": []}

    with pytest.raises(StructureError):
        td_from_data(data)


def test_td_from_data_rejects_wrong_adhesion():
    """Test that a stated adhesion set must match the part intersection."""
    data = {
        "nodes": [{"id": 0, "part": [0, 1, 2, 3]}, {"id": 1, "part": [2, 3, 4, 5]}],
        "edges": [{"u": 0, "v": 1, "adhesion": [2]}],
    }

    with pytest.raises(ParseError):
        td_from_data(data)


def test_td_from_data_schema_error():
    with pytest.raises(ParseError):
        td_from_data({"nodes": [{"id": 0}], "edges": []})


def test_separation_set_from_data(two_k4):
    found = separation_set_from_data(two_k4, [{"A": [0, 1, 2, 3], "B": [2, 3, 4, 5]}])

    assert found == SeparationSet([Separation({0, 1, 2, 3}, {2, 3, 4, 5})])


def test_profile_from_data_rejects_high_order(two_k4):
    data = {"bound": 2, "oriented": [{"A": [0, 1, 2, 3], "B": [2, 3, 4, 5]}]}

    with pytest.raises(InvalidProfileError):
        profile_from_data(two_k4, data)


def test_load_document_profiles(tmp_path, two_k4, two_k4_blocks):
    """Test that rendered block profiles load back as profiles."""
    path = tmp_path / "profiles.json"
    path.write_text(render(two_k4_blocks, "json"), encoding="utf-8")

    kind, profiles = load_document(two_k4, path)

    assert kind == "profiles"
    assert [p.block for p in profiles] == [p.block for p in two_k4_blocks]


def test_load_document_bad_json(tmp_path, two_k4):
    path = tmp_path / "td.json"
    path.write_text('{"nodes": [', encoding="utf-8")

    with pytest.raises(ParseError):
        load_document(two_k4, path)


def test_render_td_text():
    assert render(SHARED_TD, "text") == "node 0: {0,1,2,3}\nnode 1: {2,3,4,5}\nedge 0-1: adhesion {2,3}\n"


def test_render_td_json():
    doc = json.loads(render(SHARED_TD, "json"))

    assert doc["nodes"][1] == {"id": 1, "part": [2, 3, 4, 5]}
    assert doc["edges"] == [{"u": 0, "v": 1, "adhesion": [2, 3]}]


def test_render_without_dot(two_k4_blocks):
    with pytest.raises(UsageError):
        render(two_k4_blocks, "dot")


def test_render_unknown_format():
    with pytest.raises(UsageError):
        render(SHARED_TD, "yaml")


def test_render_corners():
    """Test the JSON form of the corners of the two C4 diagonals."""
    doc = json.loads(render(corners(Separation({0, 1, 2}, {0, 2, 3}), Separation({1, 2, 3}, {0, 1, 3})), "json"))

    assert set(doc["separations"]) == {"AC", "BC", "BD", "AD"}
    assert doc["separations"]["AC"] == {"A": [1, 2], "B": [0, 1, 2, 3]}
    assert doc["centre"] == []


def test_render_refinement():
    refinement = Refinement(coarse=SHARED_TD, fine=SHARED_TD, contraction_map=((0,), (1,)))

    doc = json.loads(render(refinement, "json"))

    assert doc["witness"]["subtrees"] == [
        {"coarse_node": 0, "fine_nodes": [0]},
        {"coarse_node": 1, "fine_nodes": [1]},
    ]
    assert render(refinement, "text").endswith("coarse 0: fine [0]\ncoarse 1: fine [1]\n")

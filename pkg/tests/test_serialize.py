import math

import numpy as np
import pytest

from graphuniform.errors import SchemaError
from graphuniform.graphs import hexagon_tiling_genus
from graphuniform.hyperboloid import HPoint, Isometry
from graphuniform.maps import energy, gauge_transform
from graphuniform.serialize import (
    dumps,
    graph_from_json,
    graph_to_json,
    make_manifest,
    map_from_json,
    map_to_json,
    read_json,
    surface_from_json,
    surface_to_json,
    write_artifact,
)
from graphuniform.surfaces import validate_surface


# ---------------------------------------------------------------- emitter


def test_dumps_floats_roundtrip_ieee_exactly():
    for x in (0.1, 1.0 / 3.0, math.pi, 1e-300, 6.02e23, -0.0):
        assert float(dumps(x)) == x


def test_dumps_rejects_non_finite():
    for bad in (float("nan"), float("inf"), float("-inf")):
        with pytest.raises(ValueError):
            dumps(bad)


def test_dumps_rejects_unknown_types():
    with pytest.raises(TypeError):
        dumps({"x": object()})


def test_dumps_deterministic_and_orders_keys_by_insertion():
    payload = {"b": [1, 2.5, True], "a": {"nested": None}}
    text = dumps(payload)
    assert text == dumps(payload)
    assert text.index('"b"') < text.index('"a"')
    assert "true" in text and "null" in text


def test_dumps_handles_numpy_scalars_and_arrays():
    text = dumps({"m": np.eye(2), "n": np.int64(3), "x": np.float64(0.5)})
    assert '"n": 3' in text
    assert '"x": 0.5' in text


def test_write_and_read_roundtrip(tmp_path):
    path = str(tmp_path / "artifact.json")
    payload = {"values": [1.5, 2.5], "name": "run"}
    write_artifact(path, payload)
    assert read_json(path) == payload


def test_read_json_reports_line_and_column(tmp_path):
    path = tmp_path / "broken.json"
    path.write_text('{"a": 1,\n  "b": }\n')
    with pytest.raises(SchemaError) as exc:
        read_json(str(path))
    assert "line 2" in str(exc.value)


# ---------------------------------------------------------------- manifest


def test_manifest_timestamp_frozen_by_source_date_epoch(monkeypatch):
    monkeypatch.setenv("SOURCE_DATE_EPOCH", "0")
    man = make_manifest("solve", ["in.json"], {"seed": 1}, {"tol": 1e-9})
    assert man["timestamp"] == "1970-01-01T00:00:00Z"
    monkeypatch.setenv("SOURCE_DATE_EPOCH", "86400")
    assert make_manifest("solve", [], {}, {})["timestamp"] == "1970-01-02T00:00:00Z"


def test_manifest_carries_inputs_and_settings():
    man = make_manifest("optimize", ["a", "b"], {"seed": 7}, {"tol": 1e-8})
    assert man["command"] == "optimize"
    assert man["inputs"] == ["a", "b"]
    assert man["seeds"] == {"seed": 7}
    assert man["tolerances"] == {"tol": 1e-8}
    assert man["version"]


# ---------------------------------------------------------------- graph


def test_graph_roundtrip_preserves_structure():
    g = hexagon_tiling_genus(2)
    back = graph_from_json(graph_to_json(g))
    assert back.vertex_count == g.vertex_count
    assert back.unoriented_edges() == g.unoriented_edges()


def test_graph_schema_errors_carry_paths():
    with pytest.raises(SchemaError) as exc:
        graph_from_json({"edges": []})
    assert exc.value.path == "graph"
    assert "vertices" in str(exc.value)

    with pytest.raises(SchemaError) as exc:
        graph_from_json({"vertices": True, "edges": []})
    assert exc.value.path == "graph.vertices"

    bad_weight = {"vertices": 2, "edges": [
        {"from": 0, "to": 1, "weight": -1.0, "class": "a"}]}
    with pytest.raises(SchemaError) as exc:
        graph_from_json(bad_weight)
    assert exc.value.path == "graph.edges[0].weight"

    out_of_range = {"vertices": 2, "edges": [
        {"from": 0, "to": 1, "weight": 1.0},
        {"from": 0, "to": 5, "weight": 1.0}]}
    with pytest.raises(SchemaError) as exc:
        graph_from_json(out_of_range)
    assert exc.value.path == "graph.edges[1]"


# ---------------------------------------------------------------- surface


def test_surface_roundtrip_is_bit_exact(genus2_bundle):
    surface, _graph, _ref = genus2_bundle
    back = surface_from_json(surface_to_json(surface))
    assert back.genus == surface.genus
    for a, b in zip(back.generators, surface.generators):
        # .17g preserves every f64 bit, and reconstruction must not touch
        # matrices whose form defect is already at storage level
        assert np.array_equal(a.matrix, b.matrix)
    assert back.side_pairs == surface.side_pairs
    assert back.relator_words == surface.relator_words
    # points renormalize on load, shifting far-out corners by a few ulp
    for p, q in zip(back.polygon, surface.polygon):
        assert np.max(np.abs(p.coords - q.coords)) < 1e-13
    assert validate_surface(back).ok


def test_surface_schema_errors_carry_paths():
    with pytest.raises(SchemaError) as exc:
        surface_from_json({"generators": []})
    assert exc.value.path == "surface"

    bad = {"genus": 2, "generators": [[[1, 0], [0, 1]]]}
    with pytest.raises(SchemaError) as exc:
        surface_from_json(bad)
    assert exc.value.path == "surface.generators[0]"


# ---------------------------------------------------------------- map


def test_map_roundtrip_embedded(genus2_bundle):
    _surface, _graph, m = genus2_bundle
    back = map_from_json(map_to_json(m, embed=True))
    assert np.max(np.abs(back.lift_array() - m.lift_array())) < 1e-13
    assert back.deck_words == m.deck_words
    assert abs(energy(back) - energy(m)) < 1e-12 * (1.0 + energy(m))


def test_map_roundtrip_with_gauge(genus2_bundle):
    _surface, _graph, m = genus2_bundle
    g = Isometry.x_translation(0.7) @ Isometry.rotation(HPoint.origin(), 0.3)
    moved = gauge_transform(m, g)
    doc = map_to_json(moved, embed=True)
    assert "gauge" in doc
    back = map_from_json(doc)
    assert np.array_equal(back.gauge.matrix, moved.gauge.matrix)
    assert abs(energy(back) - energy(moved)) < 1e-12 * (1.0 + energy(moved))


def test_map_without_embedding_needs_explicit_surface(genus2_bundle):
    _surface, _graph, m = genus2_bundle
    doc = map_to_json(m, embed=False)
    assert "surface" not in doc and "graph" not in doc
    with pytest.raises(SchemaError) as exc:
        map_from_json(doc)
    assert exc.value.path == "map.surface"
    back = map_from_json(doc, surface=m.surface, graph=m.graph)
    assert np.max(np.abs(back.lift_array() - m.lift_array())) < 1e-13


def test_map_schema_error_on_bad_lift(genus2_bundle):
    _surface, _graph, m = genus2_bundle
    doc = map_to_json(m, embed=True)
    doc["vertex_lifts"][0] = [1.0, 0.0]
    with pytest.raises(SchemaError) as exc:
        map_from_json(doc)
    assert exc.value.path == "map.vertex_lifts[0]"

import json

import numpy as np
import pytest

from comma.core import match, to_locations
from comma.instances import (GeneratorConfig, export_result, generate_instance, generate_with_truth,
                             load_instance, read_json, result_document, save_instance,
                             validate_result_document, write_json)
from comma.path import ValidationError
from comma.verification import validate_sequence

from conftest import FIXTURES


def test_same_seed_same_instance():
    cfg = GeneratorConfig(n=500, k=40, r=1.0, seed=7)
    a = write_json(save_instance(generate_instance(cfg)))
    b = write_json(save_instance(generate_instance(cfg)))
    assert a == b
    c = write_json(save_instance(generate_instance(GeneratorConfig(n=500, k=40, r=1.0, seed=8))))
    assert a != c


def test_round_trip(tmp_path):
    inst = generate_instance(GeneratorConfig(n=50, k=10, r=0.5, seed=1))
    write_json(save_instance(inst), tmp_path / "i.json")
    assert load_instance(read_json(tmp_path / "i.json")) == inst


def test_radius_override():
    doc = read_json(FIXTURES / "crossing.json")
    assert load_instance(doc, radius=3.0).radius == 3.0
    del doc["radius"]
    with pytest.raises(ValidationError):
        load_instance(doc)


@pytest.mark.parametrize("mutate", [
    lambda d: d["measurements"].reverse(),
    lambda d: d.pop("nodes"),
    lambda d: d["measurements"][0].pop("t"),
    lambda d: d.update(radius=-1),
    lambda d: d.update(edge_times=[0]),
    lambda d: d["nodes"].append("x"),
])
def test_invalid_documents(mutate):
    doc = read_json(FIXTURES / "crossing.json")
    mutate(doc)
    with pytest.raises(ValidationError):
        load_instance(doc)


def test_crossing_fixture_matches():
    inst = load_instance(read_json(FIXTURES / "crossing.json"))
    res = match(inst)
    assert res.feasible and [l.tau for l in res.locations] == [5.0, 45.0]


def test_zero_perturbation_always_feasible():
    for seed in range(10):
        inst = generate_instance(GeneratorConfig(n=200, k=30, r=1e-6, seed=seed, rho=0.0))
        assert match(inst).feasible


def test_ground_truth_is_a_witness():
    for seed in range(20):
        inst, truth = generate_with_truth(GeneratorConfig(n=300, k=50, r=0.7, seed=seed))
        assert validate_sequence(inst, to_locations(inst.path, truth)).ok
        assert match(inst).feasible


def test_generator_rejects_bad_config():
    with pytest.raises(ValueError):
        generate_instance(GeneratorConfig(n=0, k=5, r=1))
    with pytest.raises(ValueError):
        generate_instance(GeneratorConfig(n=5, k=5, r=0))


def test_result_document_schema(crossing):
    doc = result_document(match(crossing))
    validate_result_document(doc)
    assert doc["status"] == "feasible" and doc["failed_index"] is None
    assert [(l["x"], l["y"]) for l in doc["locations"]] == [(10.0, 0.0), (90.0, 0.0)]
    with pytest.raises(ValidationError):
        validate_result_document({"status": "maybe"})


def test_write_json_rejects_nan():
    with pytest.raises(ValueError):
        write_json({"x": float("nan")})


def _roles(doc):
    out = {}
    for f in doc["features"]:
        out[f["properties"]["role"]] = out.get(f["properties"]["role"], 0) + 1
    return out


def test_export_feasible(crossing):
    doc = export_result(crossing, match(crossing))
    assert doc["type"] == "FeatureCollection"
    assert _roles(doc) == {"path": 1, "measurement": 2, "disk": 2, "interval": 2, "location": 2}
    pts = [f["geometry"]["coordinates"] for f in doc["features"] if f["properties"]["role"] == "location"]
    assert pts == [[10.0, 0.0], [90.0, 0.0]]
    json.dumps(doc, allow_nan=False)


def test_export_infeasible(crossing):
    from comma.core import make_instance
    inst = make_instance(crossing.path, crossing.positions, [0, 30], 10)
    res = match(inst)
    roles = _roles(export_result(inst, res))
    assert "location" not in roles
    # the failed set is empty after the sweep, so only I_1 is drawn
    assert res.failed_index == 1 and roles["interval"] == 1 and roles["disk"] == 2


def test_export_candidates(crossing):
    from comma.baseline import run_baseline
    layers = run_baseline(crossing, 1.0).layers
    roles = _roles(export_result(crossing, None, layers))
    assert roles["candidate"] == sum(len(layer) for layer in layers)


def test_disk_polygon_closed(crossing):
    doc = export_result(crossing)
    ring = next(f for f in doc["features"] if f["properties"]["role"] == "disk")["geometry"]["coordinates"][0]
    assert ring[0] == ring[-1] and len(ring) == 65
    assert np.allclose(np.hypot(*np.array(ring).T), 10.0)

"""Deterministic text serialization: fmt17, CSV, canonical JSON, manifests."""

import hashlib
import json
import math

import numpy as np
import pytest

from pogorelov import serialize


def test_fmt17_round_trip(rng):
    vals = np.concatenate([
        rng.standard_normal(600),
        10.0 ** rng.uniform(-300, 300, 398) * rng.choice([-1.0, 1.0], 398),
        np.array([0.0, 5e-324]),
    ])
    for x in vals:
        s = serialize.fmt17(float(x))
        assert float(s) == float(x)
        assert "e" in s or "." in s or s.lstrip("-").isdigit()


def test_fmt17_specials():
    assert serialize.fmt17(float("nan")) == "nan"
    assert serialize.fmt17(float("inf")) == "inf"
    assert serialize.fmt17(float("-inf")) == "-inf"
    assert serialize.fmt17(-0.0) == "-0"
    assert serialize.fmt17(np.float64(2.5)) == "2.5"
    assert serialize.fmt17(1.0) == "1"


def test_write_csv_bytes(tmp_path):
    path = tmp_path / "t.csv"
    serialize.write_csv(path, ["a", "b"], [(1, 0.5), (np.float64(0.25), "txt")])
    assert path.read_bytes() == b"a,b\n1,0.5\n0.25,txt\n"


def test_canonical_json_deterministic():
    obj = {"b": 1, "a": 0.25, "nested": {"y": [1.5, 2], "x": "s"}}
    assert serialize.canonical_json(obj) == serialize.canonical_json(obj)
    # floats go through fmt17, so round-tripping preserves the exact value
    text = serialize.canonical_json({"v": 0.1})
    assert json.loads(text)["v"] == 0.1


def test_canonical_json_numpy_and_tuples():
    text = serialize.canonical_json({"arr": np.arange(3), "i": np.int64(7),
                                     "f": np.float64(1.5), "t": (1, 2)})
    data = json.loads(text)
    assert data == {"arr": [0, 1, 2], "i": 7, "f": 1.5, "t": [1, 2]}


def test_canonical_json_nonfinite_policy():
    data = json.loads(serialize.canonical_json({"x": float("nan"), "y": math.inf}))
    assert data == {"x": "nan", "y": "inf"}


def test_canonical_json_rejects_unknown_types():
    with pytest.raises(TypeError):
        serialize.canonical_json({"x": {1, 2}})
    with pytest.raises(TypeError):
        serialize.canonical_json({"x": object()})


def test_write_json_ends_with_newline(tmp_path):
    path = tmp_path / "o.json"
    serialize.write_json(path, {"k": 1})
    text = path.read_text()
    assert text.endswith("\n")
    assert json.loads(text) == {"k": 1}


def test_sha256_file_matches_hashlib(tmp_path):
    path = tmp_path / "blob.bin"
    payload = bytes(range(256)) * 17
    path.write_bytes(payload)
    assert serialize.sha256_file(path) == hashlib.sha256(payload).hexdigest()


def test_manifest_structure(tmp_path):
    out = tmp_path / "data.csv"
    serialize.write_csv(out, ["x"], [(1,), (2,)])
    mpath = tmp_path / "manifest.json"
    serialize.write_manifest(mpath, "profile", {"a": 1.0}, [out])
    data = json.loads(mpath.read_text())
    assert data["tool"] == "pogorelov"
    assert data["version"] == "0.1.0"
    assert data["subcommand"] == "profile"
    assert data["parameters"] == {"a": 1}
    entry = data["outputs"][0]
    assert entry["path"] == "data.csv"
    assert entry["bytes"] == out.stat().st_size
    assert entry["sha256"] == hashlib.sha256(out.read_bytes()).hexdigest()


def test_manifest_requires_existing_outputs(tmp_path):
    with pytest.raises(FileNotFoundError):
        serialize.write_manifest(tmp_path / "m.json", "profile", {},
                                 [tmp_path / "ghost.csv"])

from __future__ import annotations

import json

import pytest
from hypothesis import given

from conftest import integrators, step_paths
from skorokhod import CadlagStep, ConfigurationError, IntegratorPath
from skorokhod.catalog import (
    INTEGRATOR_CATALOGS,
    PATH_SEQUENCES,
    integrator_catalog,
    path_sequence,
    sequence_from_files,
)
from skorokhod.errors import ParseError
from skorokhod.io import (
    dumps_json,
    integrator_from_dict,
    integrator_to_dict,
    load_integrator,
    load_path,
    path_from_csv,
    path_from_dict,
    path_to_csv,
    path_to_dict,
    save_path,
)
from skorokhod.witnesses import random_step_path


class TestPathFormats:
    @given(step_paths())
    def test_json_roundtrip(self, x):
        assert path_from_dict(json.loads(json.dumps(path_to_dict(x)))) == x

    @given(step_paths())
    def test_csv_roundtrip(self, x):
        assert path_from_csv(path_to_csv(x)) == x

    def test_bit_exact_float(self, tmp_path):
        x = random_step_path(123, 40, 1e3)
        for name in ("p.json", "p.csv"):
            save_path(x, tmp_path / name)
            y = load_path(tmp_path / name)
            assert y.breakpoints == x.breakpoints and y.values == x.values

    @given(integrators())
    def test_integrator_roundtrip(self, a):
        assert integrator_from_dict(json.loads(json.dumps(integrator_to_dict(a)))) == a

    def test_integrator_horizon_defaults_to_last_node(self, tmp_path):
        (tmp_path / "a.json").write_text('{"nodes": [0, 2], "values": [0, 1]}')
        assert load_integrator(tmp_path / "a.json") == IntegratorPath(2.0, [0, 2], [0, 1])

    @pytest.mark.parametrize(
        "obj",
        [[], {"breakpoints": [0], "values": [1]}, {"horizon": 1, "breakpoints": [0]},
         {"horizon": "x", "breakpoints": [0], "values": [1]},
         {"horizon": 1, "breakpoints": [0, 2], "values": [1, 2]},
         {"horizon": 1, "breakpoints": [0], "values": ["a"]}],
    )
    def test_bad_json(self, obj):
        with pytest.raises(ParseError):
            path_from_dict(obj)

    @pytest.mark.parametrize(
        "text",
        ["t,value\n0,1\n", "# horizon=1\n", "# horizon=1\n0,1,2\n", "# horizon=1\n0,abc\n",
         "# horizon=1\n0.5,1\n"],
    )
    def test_bad_csv(self, text):
        with pytest.raises(ParseError):
            path_from_csv(text)

    def test_csv_without_header(self):
        assert path_from_csv("# horizon=2\n0,1\n1,3\n") == CadlagStep(2.0, [0, 1], [1, 3])

    def test_malformed_json_file(self, tmp_path):
        (tmp_path / "bad.json").write_text("{not json")
        with pytest.raises(ParseError):
            load_path(tmp_path / "bad.json")

    def test_missing_file(self, tmp_path):
        with pytest.raises(OSError):
            load_path(tmp_path / "missing.json")

    def test_dumps_deterministic(self):
        assert dumps_json({"b": 1, "a": [0.1]}) == '{\n  "a": [\n    0.1\n  ],\n  "b": 1\n}\n'
        with pytest.raises(ValueError):
            dumps_json({"x": float("nan")})


class TestCatalog:
    @pytest.mark.parametrize("name", sorted(PATH_SEQUENCES))
    def test_sequences_share_horizon(self, name):
        seq = path_sequence(name, 2.0)
        for n in (1, 2, 3, 17):
            assert seq(n).horizon == 2.0

    def test_unknown(self):
        with pytest.raises(ConfigurationError):
            path_sequence("figure3")
        with pytest.raises(ConfigurationError):
            integrator_catalog("nope", path_sequence("figure1_spikes"))
        with pytest.raises(ConfigurationError):
            integrator_catalog("", path_sequence("figure1_spikes"))

    def test_catalog_ids(self):
        seq = path_sequence("sawtooth")
        assert {"lemma_witness", "refuter", "slope", "ramps", "shrinking_spike"} <= set(INTEGRATOR_CATALOGS)
        entries = integrator_catalog("slope,refuter", seq)
        assert [e.name for e in entries] == ["slope", "refuter"]
        assert len(integrator_catalog(["ramps"], seq, level=2)) == 1 + 2

    def test_sequence_from_files(self):
        terms = [CadlagStep.constant(1 / n) for n in range(1, 4)]
        seq = sequence_from_files("f", terms, CadlagStep.constant(0.0))
        assert seq(3) == terms[2]
        with pytest.raises(ConfigurationError):
            seq(4)
        with pytest.raises(ConfigurationError):
            sequence_from_files("f", [], CadlagStep.constant(0.0))

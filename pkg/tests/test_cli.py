"""CLI and object-store tests (run in-process against a temp workspace)."""

from __future__ import annotations

import json

import pytest

from helpers import Z2, Z4, z4_extension_butterfly

from butterflies import jsonio
from butterflies.butterfly import identity_butterfly
from butterflies.cli import Workspace, main, parse_group_spec
from butterflies.extension import conjugation_xmod, discrete_xmod


@pytest.fixture()
def ws(tmp_path):
    return tmp_path / "store"


def run(ws, *argv):
    return main(["--workspace", str(ws), *map(str, argv)])


def write_json(tmp_path, name, data):
    path = tmp_path / name
    path.write_text(json.dumps(data))
    return path


class TestStore:
    def test_round_trip_bit_identical(self, ws):
        store = Workspace(ws)
        B = z4_extension_butterfly()
        ref = store.put(B)
        again = store.put(B)
        assert ref == again  # content addressing
        data = store.get(ref)
        assert jsonio.canonical_bytes(data) == jsonio.canonical_bytes(jsonio.to_jsonable(B))

    def test_prefix_lookup(self, ws):
        store = Workspace(ws)
        ref = store.put(Z4)
        assert store.get(ref[:10]) == store.get(ref)

    def test_ls(self, ws):
        store = Workspace(ws)
        store.put(Z4)
        store.put(z4_extension_butterfly())
        kinds = {k for _, k in store.ls()}
        assert kinds == {"group", "butterfly"}


class TestValidate:
    def test_valid_butterfly_exit_0(self, ws, tmp_path, capsys):
        path = write_json(tmp_path, "b.json", jsonio.to_jsonable(z4_extension_butterfly()))
        assert run(ws, "validate", path) == 0

    def test_invalid_butterfly_names_condition(self, ws, tmp_path, capsys):
        data = jsonio.to_jsonable(z4_extension_butterfly())
        data["rho"] = [0, 0, 0, 0]
        data["kappa"] = [0]
        # make kappa;rho nonzero by pointing kappa at a non-identity: D(Z2) top
        # is trivial, so break condition (ii) instead: sigma not surjective
        data["sigma"] = [0, 0, 0, 0]
        path = write_json(tmp_path, "bad.json", data)
        assert run(ws, "--json", "validate", path) == 1
        out = json.loads(capsys.readouterr().out)
        assert any("ii-extension" in f["condition"] for f in out["findings"])

    def test_malformed_json_exit_2(self, ws, tmp_path):
        path = tmp_path / "broken.json"
        path.write_text("{not json")
        assert run(ws, "validate", path) == 2

    def test_unknown_kind_exit_2(self, ws, tmp_path):
        path = write_json(tmp_path, "odd.json", {"hello": 1})
        assert run(ws, "validate", path) == 2

    def test_validate_group_and_xmod(self, ws, tmp_path):
        path = write_json(tmp_path, "g.json", jsonio.to_jsonable(Z4))
        assert run(ws, "validate", path) == 0
        path2 = write_json(tmp_path, "x.json", jsonio.to_jsonable(conjugation_xmod(Z2)))
        assert run(ws, "validate", path2) == 0


class TestCommands:
    def test_identity_and_compose_witness(self, ws, tmp_path, capsys):
        xmod_path = write_json(tmp_path, "x.json", jsonio.to_jsonable(discrete_xmod(Z2)))
        assert run(ws, "identity", xmod_path) == 0
        ref = capsys.readouterr().out.strip()
        assert run(ws, "--json", "compose", ref, ref, "--witness", "--check") == 0
        out = json.loads(capsys.readouterr().out)
        assert out["check"]["ok"]
        assert "witness_first" in out

    def test_flip_non_flippable_exit_1(self, ws, tmp_path):
        path = write_json(tmp_path, "b.json", jsonio.to_jsonable(z4_extension_butterfly()))
        assert run(ws, "flip", path) == 1

    def test_flip_flippable(self, ws, tmp_path, capsys):
        path = write_json(tmp_path, "b.json", jsonio.to_jsonable(identity_butterfly(conjugation_xmod(Z2))))
        assert run(ws, "flip", path) == 0

    def test_split_and_span(self, ws, tmp_path, capsys):
        from butterflies.xmod import identity_morphism

        P = identity_morphism(conjugation_xmod(Z2))
        path = write_json(tmp_path, "m.json", jsonio.to_jsonable(P))
        assert run(ws, "--json", "split", path) == 0
        out = json.loads(capsys.readouterr().out)
        assert "section" in out
        bpath = write_json(tmp_path, "b.json", jsonio.to_jsonable(z4_extension_butterfly()))
        assert run(ws, "--json", "span", bpath) == 0
        out = json.loads(capsys.readouterr().out)
        assert set(out) == {"middle", "left", "right"}

    def test_weakmap_extract_matches_library(self, ws, tmp_path, capsys):
        from butterflies.weakmap import extract_monoidal, set_section

        B = z4_extension_butterfly()
        path = write_json(tmp_path, "b.json", jsonio.to_jsonable(B))
        assert run(ws, "--json", "weakmap", "extract", path, "--section", "0,1") == 0
        out = json.loads(capsys.readouterr().out)
        M = extract_monoidal(B, set_section(B, (0, 1)))
        assert out["monoidal"]["F2"] == [list(r) for r in M.F2]
        # assemble back
        mpath = write_json(tmp_path, "m.json", out["monoidal"])
        assert run(ws, "weakmap", "assemble", mpath) == 0


class TestClassify:
    def test_z2_z2_oracle_agrees(self, ws, capsys):
        assert run(ws, "--json", "classify", "Z2", "Z2", "--oracle") == 0
        out = json.loads(capsys.readouterr().out)
        assert len(out["classes"]) == 2
        assert out["agree"] is True
        assert sorted(c["E"] for c in out["classes"]) == ["Z2xZ2", "Z4"]

    def test_trivial_group(self, ws, capsys):
        assert run(ws, "classify", "1", "Z4") == 0
        assert "1 extension class" in capsys.readouterr().out

    def test_csv_summary(self, ws, capsys):
        assert run(ws, "classify", "Z2", "Z2", "--csv") == 0
        assert capsys.readouterr().out.strip() == "Z2,Z2,2,1"

    def test_bound_exceeded_exit_1(self, ws):
        assert run(ws, "classify", "Z4", "Z4", "--bound", "8") == 1

    def test_group_spec_parsing(self):
        assert parse_group_spec("Z2xZ2").order == 4
        assert parse_group_spec("S3").order == 6
        assert parse_group_spec("nonsense") is None


class TestSuite:
    def test_both_suites_green(self, ws):
        assert run(ws, "suite", "--suite", "all", "--seed", "0", "--bound", "4") == 0

    def test_unknown_suite_exit_2(self, ws):
        assert run(ws, "suite", "--suite", "nosuch") == 2

    def test_fault_injection_fails(self, ws):
        assert run(ws, "suite", "--suite", "bicategory", "--bound", "4", "--fault", "compose") == 1

"""Command-line surface: exit codes, JSON shape, byte determinism."""

import io
import json
from contextlib import redirect_stdout

import pytest

from mltoric.cli import main

from conftest import fixture_path


def run(argv):
    buf = io.StringIO()
    with redirect_stdout(buf):
        rc = main([str(a) for a in argv])
    return rc, buf.getvalue()


def run_json(argv):
    rc, out = run(list(argv) + ["--format", "json"])
    return rc, json.loads(out), out


class TestExitCodes:
    def test_success(self):
        rc, _ = run(["analyze", fixture_path("example1")])
        assert rc == 0

    def test_units(self, tmp_path):
        bad = tmp_path / "units.json"
        bad.write_text('{"name": "units", "rank": 1, "generators": [[1], [-1]]}')
        rc, _ = run(["analyze", bad])
        assert rc == 3

    def test_duplicate_generators(self, tmp_path):
        bad = tmp_path / "dup.json"
        bad.write_text('{"rank": 2, "generators": [[1, 0], [1, 0]]}')
        rc, _ = run(["analyze", bad])
        assert rc == 2

    def test_malformed_json(self, tmp_path):
        bad = tmp_path / "broken.json"
        bad.write_text('{"rank": 2, "generators": [[1, 0]')
        rc, _ = run(["analyze", bad])
        assert rc == 2

    def test_empty_generators(self, tmp_path):
        bad = tmp_path / "empty.json"
        bad.write_text('{"rank": 2, "generators": []}')
        rc, _ = run(["analyze", bad])
        assert rc == 2

    def test_missing_file(self, tmp_path):
        rc, _ = run(["analyze", tmp_path / "nope.json"])
        assert rc == 2

    def test_bad_flag_value(self):
        rc, _ = run(["holes", fixture_path("example2"), "--bound", "0"])
        assert rc == 2

    def test_exact_only_at_rank3(self):
        rc, out = run(["analyze", fixture_path("example3"), "--exact-only"])
        assert rc == 4
        assert "exact-only: unavailable at rank 3" in out

    def test_exact_only_at_rank2(self):
        rc, _ = run(["analyze", fixture_path("example2"), "--exact-only"])
        assert rc == 0

    def test_check_clean(self):
        rc, doc, _ = run_json(["check", fixture_path("example2")])
        assert rc == 0
        assert doc["failures"] == 0
        assert len(doc["results"]) == 10

    def test_bad_root_rejected(self):
        rc, _ = run(["derive", fixture_path("example2"), "--ray", "1",
                     "--root=0,1", "--apply", "2,0"])
        assert rc == 2


class TestAnalyzeJson:
    def test_shape(self):
        rc, doc, _ = run_json(["analyze", fixture_path("example2")])
        assert rc == 0
        assert sorted(doc) == [
            "affine_rays", "almost_saturated_facets", "bounds",
            "certification", "command", "cone", "facets", "flags", "grading",
            "holes", "input", "ml_face", "ml_star_face", "normalization",
            "notes", "split", "status", "tool",
        ]
        assert doc["tool"]["name"] == "mltoric"
        assert doc["status"] == "complete"

    def test_example2_payload(self):
        _, doc, _ = run_json(["analyze", fixture_path("example2")])
        assert doc["almost_saturated_facets"] == [1]
        assert doc["ml_face"] == {"dim": 1, "ray_indices": [0], "rays": [[0, 1]]}
        assert doc["ml_star_face"] == doc["ml_face"]
        assert doc["split"] == {
            "core_generators": [[0, 2], [0, 3], [0, 0]],
            "core_normalized_generators": [[2], [3]],
            "core_rank": 1,
            "factor_rays": [[1, 0]],
            "k": 1,
        }
        assert doc["flags"] == {
            "is_affine_space": False,
            "is_rigid_core": True,
            "ml_equals_ml_star": True,
            "variety_is_rigid": False,
        }
        assert doc["certification"]["is_exact"] is True

    def test_marker_serialization(self):
        _, doc, _ = run_json(["analyze", fixture_path("example5")])
        assert doc["ml_star_face"] == "no-slice-exists"
        assert doc["ml_face"]["ray_indices"] == [0]

    def test_reembedded_normalization_block(self, tmp_path):
        f = tmp_path / "even.json"
        f.write_text('{"rank": 2, "generators": [[2, 0], [0, 2]]}')
        _, doc, _ = run_json(["analyze", f])
        block = doc["normalization"]
        assert block["reembedded"] is True
        assert block["generators"] == [[0, 1], [1, 0]]

    def test_byte_determinism(self, monkeypatch):
        _, _, first = run_json(["analyze", fixture_path("example3")])
        monkeypatch.setenv("ML_TORIC_THREADS", "4")
        _, _, second = run_json(["analyze", fixture_path("example3")])
        assert first == second

    def test_emitted_json_is_canonical(self):
        _, doc, out = run_json(["analyze", fixture_path("example1")])
        assert out == json.dumps(doc, indent=2, sort_keys=True) + "\n"


class TestHoles:
    def test_text_listing(self):
        rc, out = run(["holes", fixture_path("example5"), "--bound", "4"])
        assert rc == 0
        assert out.splitlines() == [
            "holes of degree <= 4 (exact): 5",
            "  [0, 1]",
            "  [0, 2]",
            "  [1, 1]",
            "  [2, 1]",
            "  [3, 1]",
            "family: base [0, 1] + k*[1, 0] (exact)",
        ]

    def test_json_listing(self):
        rc, doc, _ = run_json(["holes", fixture_path("example5"), "--bound", "4"])
        assert rc == 0
        assert doc["holes"] == [[0, 1], [0, 2], [1, 1], [2, 1], [3, 1]]
        assert doc["count"] == 5
        assert doc["certificate"] == "exact"
        assert doc["families"] == [
            {"base": [0, 1], "certificate": "exact", "direction": [1, 0]},
        ]


class TestRoots:
    def test_json_verdicts(self):
        rc, doc, _ = run_json(["roots", fixture_path("example2"), "--ray", "1"])
        assert rc == 0
        (ray,) = doc["rays"]
        assert ray["ray_index"] == 1
        assert ray["dual_ray"] == [1, 0]
        assert ray["roots"][0] == {
            "certificate": "exact", "descends": "yes",
            "shift": [-1, 0], "witness": None,
        }
        assert ray["roots"][1] == {
            "certificate": "exact", "descends": "no",
            "shift": [-1, 1], "witness": [1, 0],
        }
        assert [r["descends"] for r in ray["roots"]] == [
            "yes", "no", "yes", "yes", "yes", "yes", "yes", "yes", "yes"]

    def test_text_table(self):
        rc, out = run(["roots", fixture_path("example2"), "--ray", "1"])
        assert rc == 0
        assert "[-1, 1]  no        [1, 0]   exact" in out

    def test_ray_out_of_range(self):
        rc, _ = run(["roots", fixture_path("example2"), "--ray", "5"])
        assert rc == 2


class TestDerive:
    def test_apply(self):
        rc, out = run(["derive", fixture_path("example2"), "--ray", "1",
                       "--root=-1,0", "--apply", "2,0"])
        assert rc == 0
        assert "2 * x^(1, 0)" in out
        assert "image lives in: monoid algebra" in out

    def test_apply_json(self):
        rc, doc, _ = run_json(["derive", fixture_path("example2"), "--ray", "1",
                               "--root=-1,0", "--apply", "2,0"])
        assert rc == 0
        assert doc["action"] == "apply"
        assert doc["image_algebra"] == "monoid"
        assert doc["result"] == [{"coefficient": "2", "exponent": [1, 0]}]

    def test_exponential(self):
        rc, out = run(["derive", fixture_path("example2"), "--ray", "1",
                       "--root=-1,0", "--exp", "1,2,0"])
        assert rc == 0
        assert "1 * x^(0, 0)  +  2 * x^(1, 0)  +  1 * x^(2, 0)" in out


class TestParity:
    def test_flags_match_between_formats(self):
        _, doc, _ = run_json(["analyze", fixture_path("example2")])
        _, text = run(["analyze", fixture_path("example2")])
        for flag, value in doc["flags"].items():
            assert f"{flag}: {value}" in text

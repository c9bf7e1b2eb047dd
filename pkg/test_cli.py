"""
Tests for the command-line front end: JSON output and exit codes
"""
import io
import json
import os

import pytest

from cli import EXIT_FAILED, EXIT_INPUT, EXIT_OK, run

DATA_DIR = os.path.join(os.path.dirname(os.path.abspath(__file__)), "data")


def invoke(*argv):
    stream = io.StringIO()
    code = run(list(argv), stream=stream)
    return code, stream.getvalue()


def invoke_json(*argv):
    code, text = invoke(*argv)
    return code, json.loads(text)


class TestClassifyParabolics:
    def test_single_type(self):
        code, report = invoke_json("classify-parabolics", "--type", "E", "--rank", "6")
        assert code == EXIT_OK
        assert report["schema"] == 1
        assert report["compact_orbit_roots"] == [1, 6]

    def test_label_form_and_table(self):
        code, report = invoke_json("classify-parabolics", "--max-rank", "4")
        assert code == EXIT_OK
        labels = [row["type"] for row in report["rows"]]
        assert "F4" in labels and "D4" in labels

    def test_needs_a_type(self):
        code, report = invoke_json("classify-parabolics")
        assert code == EXIT_INPUT
        assert report["pass"] is False

    def test_bad_type(self):
        code, _ = invoke_json("classify-parabolics", "--type", "X", "--rank", "3")
        assert code == EXIT_INPUT

    def test_pretty_output(self):
        code, text = invoke("--pretty", "classify-parabolics", "--type", "D5")
        assert code == EXIT_OK
        assert "compact_orbit_roots" in text
        assert "[1, 4, 5]" in text


class TestLeafDim:
    def test_from_file(self):
        code, report = invoke_json("leaf-dim", "--file", os.path.join(DATA_DIR, "calogero_n4.json"))
        assert code == EXIT_OK
        assert report["dimension"] == 8
        assert report["determinant"]["linearly_equivalent"] is True

    def test_example_and_emit(self, tmp_path):
        emitted = tmp_path / "quadric.json"
        code, report = invoke_json("leaf-dim", "--example", "quadric", "--n", "3", "--emit", str(emitted))
        assert code == EXIT_OK
        assert report["dimension"] == 8
        assert json.loads(emitted.read_text())["schema"] == 1

    def test_rank_two_quadric(self):
        code, report = invoke_json("leaf-dim", "--example", "quadric", "--n", "2")
        assert code == EXIT_OK
        assert report["group"] == "SO(4)"
        assert report["dimension"] == 4

    def test_d2_type_rejected(self):
        code, _ = invoke_json("rootsys", "info", "--type", "D2")
        assert code == EXIT_INPUT

    def test_hecke_dim(self):
        code, report = invoke_json("hecke-dim", "--example", "gl_empty", "--n", "3")
        assert code == EXIT_OK
        assert report["dimension"] == 1

    def test_missing_file(self, tmp_path):
        code, _ = invoke_json("leaf-dim", "--file", str(tmp_path / "absent.json"))
        assert code == EXIT_INPUT


class TestOtherCommands:
    def test_genus(self):
        code, report = invoke_json("genus", "--example", "isotropic", "--n", "3")
        assert code == EXIT_OK
        assert report["fiber_dimension"] == 3
        assert report["leaf_dimension"] == 6

    def test_toric_hilbert(self):
        code, report = invoke_json("toric", "hilbert", "--k", "2")
        assert code == EXIT_OK
        assert report["relation_text"] == "x^4 = w*z"

    def test_toric_rays(self):
        code, report = invoke_json(
            "toric", "rays", "--type", "A1", "--coweight", "2", "--lattice", "simply_connected"
        )
        assert code == EXIT_OK
        assert report["rays"] == [[1, -1], [1, 1]]

    def test_rootsys(self):
        code, report = invoke_json("rootsys", "info", "--type", "G2")
        assert code == EXIT_OK
        assert report["root_count"] == 12

    def test_out_file(self, tmp_path):
        out = tmp_path / "report.json"
        code, report = invoke_json("--out", str(out), "toric", "hilbert", "--k", "1")
        assert code == EXIT_OK
        assert json.loads(out.read_text()) == report


class TestDivisorEquiv:
    def test_explicit_divisors(self):
        code, report = invoke_json("divisor-equiv", "--lhs", "0.2,0.3:2", "--rhs", "0.1,0.3;0.3,0.3")
        assert code == EXIT_OK
        assert report["linearly_equivalent"] is True

    def test_calogero_example(self):
        code, report = invoke_json("divisor-equiv", "--example", "calogero", "--n", "4")
        assert code == EXIT_OK
        assert report["pass"] is True

    def test_shifted_calogero_fails(self):
        code, report = invoke_json("divisor-equiv", "--example", "calogero", "--n", "4", "--shift", "1/7,0")
        assert code == EXIT_FAILED
        assert report["linearly_equivalent"] is False

    @pytest.mark.parametrize("shift", ["x,0", "1/7", "1,2,3", "1/0,0"])
    def test_malformed_shift_is_input_error(self, shift):
        code, report = invoke_json("divisor-equiv", "--example", "calogero", "--n", "4", "--shift", shift)
        assert code == EXIT_INPUT
        assert "shift" in report["error"]

    def test_needs_both_sides(self):
        code, _ = invoke_json("divisor-equiv", "--lhs", "0.2,0.3")
        assert code == EXIT_INPUT


@pytest.mark.parametrize("argv", [[], ["bogus"], ["genus", "--example", "cubic", "--n", "3"]])
def test_bad_arguments(argv):
    code, report = invoke_json(*argv)
    assert code == EXIT_INPUT
    assert "error" in report

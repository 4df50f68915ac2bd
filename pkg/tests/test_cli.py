import io
import json

import pytest

from src.cli import EXIT_CHECK_FAILED, EXIT_DOMAIN, EXIT_INVALID, EXIT_OK, main


def run(capsys, argv, stdin=None, monkeypatch=None):
    if stdin is not None:
        monkeypatch.setattr("sys.stdin", io.StringIO(stdin))
    code = main(argv)
    out = capsys.readouterr().out
    return code, out


def run_json(capsys, argv, **kwargs):
    code, out = run(capsys, argv, **kwargs)
    return code, json.loads(out)


@pytest.fixture
def triangle_file(tmp_path, triangle):
    path = tmp_path / "triangle.json"
    path.write_text(triangle.to_json())
    return str(path)


@pytest.fixture
def line_file(tmp_path, line):
    path = tmp_path / "line.json"
    path.write_text(line.to_json())
    return str(path)


class TestGen:
    def test_cycle(self, capsys):
        code, doc = run_json(capsys, ["gen", "cycle", "3"])
        assert code == EXIT_OK
        assert doc == {"n": 3, "edges": [[0, 1], [0, 2], [1, 2]]}

    @pytest.mark.parametrize("argv, n", [
        (["gen", "complete", "5"], 5),
        (["gen", "petersen"], 10),
        (["gen", "path", "4"], 4),
        (["gen", "random", "7", "--seed", "3"], 7),
    ])
    def test_graphs(self, capsys, argv, n):
        code, doc = run_json(capsys, argv)
        assert code == EXIT_OK
        assert doc["n"] == n

    def test_voltage(self, capsys):
        code, doc = run_json(capsys, ["gen", "honeycomb"])
        assert code == EXIT_OK
        assert doc["dim"] == 2
        assert len(doc["edges"]) == 3

    def test_unknown(self, capsys):
        code, doc = run_json(capsys, ["gen", "star", "4"])
        assert code == EXIT_INVALID
        assert doc["error"]["reason"] == "generator"

    def test_missing_size(self, capsys):
        code, _ = run(capsys, ["gen", "cycle"])
        assert code == EXIT_INVALID


class TestFiniteCommands:
    def test_ihara_triangle(self, capsys, triangle_file):
        code, doc = run_json(capsys, ["ihara", "--graph", triangle_file, "--t", "0.5,0"])
        assert code == EXIT_OK
        assert doc["value"][0] == pytest.approx(64 / 49, abs=1e-12)
        assert doc["value"][1] == pytest.approx(0.0, abs=1e-12)

    def test_ihara_from_stdin(self, capsys, monkeypatch, triangle):
        code, doc = run_json(capsys, ["ihara", "--t", "0.5"], stdin=triangle.to_json(),
                             monkeypatch=monkeypatch)
        assert code == EXIT_OK
        assert doc["value"][0] == pytest.approx(64 / 49)

    def test_ihara_series(self, capsys, triangle_file):
        code, doc = run_json(capsys, ["ihara", "--graph", triangle_file, "--series", "6"])
        assert code == EXIT_OK
        assert doc["cycle_counts"] == [0, 0, 6, 0, 0, 6]
        assert [re for re, _ in doc["series"]] == pytest.approx([0, 0, 2, 0, 0, 1])

    def test_ihara_pole(self, capsys, tmp_path, k4):
        path = tmp_path / "k4.json"
        path.write_text(k4.to_json())
        code, doc = run_json(capsys, ["ihara", "--graph", str(path), "--t", "1,0"])
        assert code == EXIT_DOMAIN
        assert doc["error"]["reason"] == "pole"
        assert doc["error"]["details"]["factor"] == "(1-t^2)^(r-1)"

    def test_qw_zeta_trivial(self, capsys, triangle_file):
        code, doc = run_json(capsys, ["qw-zeta", "--graph", triangle_file, "--a", "1,0",
                                      "--b=-1,0", "--u", "0,0", "--method", "reduced"])
        assert code == EXIT_OK
        assert doc["value"] == [1.0, 0.0]
        assert doc["method"] == "reduced"

    def test_qw_zeta_triangle(self, capsys, triangle_file):
        code, doc = run_json(capsys, ["qw-zeta", "--graph", triangle_file, "--u", "0.5,0"])
        assert doc["value"][0] == pytest.approx(64 / 49, abs=1e-12)

    @pytest.mark.parametrize("method", ["direct", "reduced", "konno-sato"])
    def test_charpoly(self, capsys, triangle_file, method):
        code, doc = run_json(capsys, ["charpoly", "--graph", triangle_file, "--method", method])
        assert code == EXIT_OK
        assert doc["degree"] == 6
        expected = [1, 0, 0, -2, 0, 0, 1]
        assert [re for re, _ in doc["coefficients"]] == pytest.approx(expected, abs=1e-10)

    def test_spectrum_json(self, capsys, triangle_file):
        code, doc = run_json(capsys, ["spectrum", "--graph", triangle_file, "--method", "mapped"])
        assert code == EXIT_OK
        assert len(doc["eigenvalues"]) == 6
        assert doc["multiplicity_of_plus_b"] == 0

    def test_spectrum_csv(self, capsys, triangle_file):
        code, out = run(capsys, ["spectrum", "--graph", triangle_file, "--format", "csv"])
        assert code == EXIT_OK
        lines = out.strip().splitlines()
        assert lines[0] == "re,im"
        assert len(lines) == 7

    def test_identical_output(self, capsys, triangle_file):
        argv = ["spectrum", "--graph", triangle_file, "--a", "0,1", "--b", "1,0"]
        assert run(capsys, argv) == run(capsys, argv)


class TestPeriodicCommands:
    def test_periodic_ihara_line(self, capsys, line_file):
        code, doc = run_json(capsys, ["periodic-ihara", "--voltage", line_file, "--t", "0.2,0",
                                      "--grid", "256"])
        assert code == EXIT_OK
        assert doc["value"][0] == pytest.approx(1.0, abs=1e-12)
        assert doc["value"][1] == pytest.approx(0.0, abs=1e-12)
        assert doc["euler_characteristic"] == 0

    def test_periodic_qw_line(self, capsys, line_file):
        code, doc = run_json(capsys, ["periodic-qw", "--voltage", line_file, "--u", "0.2",
                                      "--grid", "64", "--method", "direct", "--threads", "2"])
        assert code == EXIT_OK
        assert doc["value"][0] == pytest.approx(1.0, abs=1e-12)

    def test_branch_violation(self, capsys, line_file):
        code, doc = run_json(capsys, ["periodic-ihara", "--voltage", line_file, "--t", "0.7",
                                      "--grid", "8"])
        assert code == EXIT_DOMAIN
        assert doc["error"]["reason"] == "branch"

    def test_quotient(self, capsys, line_file):
        code, doc = run_json(capsys, ["quotient", "--voltage", line_file, "--L", "4"])
        assert code == EXIT_OK
        assert doc["n"] == 4
        assert len(doc["edges"]) == 4

    def test_quotient_not_simple(self, capsys, line_file):
        code, doc = run_json(capsys, ["quotient", "--voltage", line_file, "--L", "2"])
        assert code == EXIT_INVALID
        assert doc["error"]["reason"] == "non-simple-cover"


class TestErrors:
    def test_loop_graph(self, capsys, tmp_path):
        path = tmp_path / "loop.json"
        path.write_text('{"n": 1, "edges": [[0, 0]]}')
        code, doc = run_json(capsys, ["ihara", "--graph", str(path), "--t", "0.1"])
        assert code == EXIT_INVALID
        assert doc["error"]["reason"] == "loop"

    def test_bad_complex(self, capsys, triangle_file):
        code, _ = run(capsys, ["ihara", "--graph", triangle_file, "--t", "half"])
        assert code == EXIT_INVALID

    def test_missing_file(self, capsys, tmp_path):
        code, doc = run_json(capsys, ["ihara", "--graph", str(tmp_path / "nope.json"), "--t", "0"])
        assert code == EXIT_INVALID
        assert doc["error"]["reason"] == "io"

    def test_missing_parameter(self, capsys, triangle_file):
        code, doc = run_json(capsys, ["qw-zeta", "--graph", triangle_file])
        assert code == EXIT_INVALID
        assert doc["error"]["details"] == {"flag": "--u"}

    def test_unknown_command(self, capsys):
        code, _ = run(capsys, ["zeta"])
        assert code == EXIT_INVALID

    def test_bad_threads(self, capsys, line_file):
        code, _ = run(capsys, ["periodic-ihara", "--voltage", line_file, "--t", "0.1",
                               "--threads", "0"])
        assert code == EXIT_INVALID

    @pytest.mark.parametrize("command", ["ihara", "qw-zeta", "charpoly"])
    def test_csv_only_for_spectrum(self, capsys, triangle_file, command):
        code, doc = run_json(capsys, [command, "--graph", triangle_file, "--t", "0.5",
                                      "--u", "0.5", "--format", "csv"])
        assert code == EXIT_INVALID
        assert doc["error"]["reason"] == "format"
        assert doc["error"]["details"] == {"command": command}

    def test_csv_rejected_for_periodic(self, capsys, line_file):
        code, doc = run_json(capsys, ["periodic-ihara", "--voltage", line_file, "--t", "0.2",
                                      "--format", "csv"])
        assert code == EXIT_INVALID
        assert doc["error"]["reason"] == "format"

    @pytest.mark.parametrize("text", [
        '{"n": 3, "edges": 5}',
        '{"n": 3, "edges": [[0, "x"], [1, 2]]}',
        '{"n": 3, "edges": "012"}',
    ])
    def test_malformed_graph(self, capsys, tmp_path, text):
        path = tmp_path / "bad.json"
        path.write_text(text)
        code, doc = run_json(capsys, ["ihara", "--graph", str(path), "--t", "0.1"])
        assert code == EXIT_INVALID
        assert doc["error"]["reason"] == "schema"

    @pytest.mark.parametrize("text", [
        '{"dim": 1, "n": 1, "edges": [{"u": "x", "v": 0, "z": [1]}]}',
        '{"dim": 1, "n": 1, "edges": [{"u": 0, "v": 0, "z": 1}]}',
        '{"dim": 1, "n": 1, "edges": 5}',
    ])
    def test_malformed_voltage(self, capsys, tmp_path, text):
        path = tmp_path / "bad.json"
        path.write_text(text)
        code, doc = run_json(capsys, ["periodic-ihara", "--voltage", str(path), "--t", "0.1"])
        assert code == EXIT_INVALID
        assert doc["error"]["reason"] == "schema"


class TestCrossCheckCommand:
    def test_graph_passes(self, capsys, tmp_path, k4):
        path = tmp_path / "k4.json"
        path.write_text(k4.to_json())
        code, doc = run_json(capsys, ["cross-check", "--graph", str(path)])
        assert code == EXIT_OK
        assert doc["passed"]

    def test_corrupted_prefactor(self, capsys, tmp_path, k4):
        path = tmp_path / "k4.json"
        path.write_text(k4.to_json())
        code, doc = run_json(capsys, ["cross-check", "--graph", str(path), "--corrupt-prefactor"])
        assert code == EXIT_CHECK_FAILED
        failed = [c["name"] for c in doc["identities"] if not c["passed"]]
        assert failed == ["reduced-determinant-identity"]

    def test_voltage_from_stdin(self, capsys, monkeypatch, line):
        code, doc = run_json(capsys, ["cross-check", "--L", "3,4,5", "--grid", "32"],
                             stdin=line.to_json(), monkeypatch=monkeypatch)
        assert code == EXIT_OK
        sampling = next(c for c in doc["identities"] if c["name"] == "sampling-identity")
        assert sampling["max_residual"] <= 1e-10

import json
import os
import subprocess
import sys

import pytest

from spancalc.fock import annihilation_span, build_E
from spancalc.groupoid import FiniteGroupoid, cyclic_table
from spancalc.spans import span_to_json


def run_cli(*args, env=None):
    full_env = dict(os.environ)
    if env:
        full_env.update(env)
    return subprocess.run(
        [sys.executable, "-m", "spancalc.cli", *args],
        capture_output=True, text=True, env=full_env)


@pytest.fixture(scope="module")
def terminal_file(tmp_path_factory):
    path = tmp_path_factory.mktemp("cli") / "terminal.json"
    path.write_text(json.dumps(FiniteGroupoid.terminal().to_json()))
    return str(path)


def test_card_terminal(terminal_file):
    result = run_cli("card", terminal_file)
    assert result.returncode == 0
    assert result.stdout.strip() == "1/1"


def test_card_z2(tmp_path):
    path = tmp_path / "z2.json"
    g = FiniteGroupoid.from_group_table(cyclic_table(2))
    path.write_text(json.dumps(g.to_json()))
    result = run_cli("card", str(path))
    assert result.stdout.strip() == "1/2"


def test_check_valid_and_invalid(terminal_file, tmp_path):
    assert run_cli("check", terminal_file).returncode == 0
    bad = tmp_path / "bad.json"
    data = FiniteGroupoid.terminal().to_json()
    data["identity"] = [5]
    bad.write_text(json.dumps(data))
    result = run_cli("check", str(bad))
    assert result.returncode == 1


def test_malformed_json_exits_2(tmp_path):
    path = tmp_path / "broken.json"
    path.write_text('{"objects": 1,,}')
    result = run_cli("card", str(path))
    assert result.returncode == 2
    assert "line 1" in result.stderr


def test_missing_file_exits_2():
    result = run_cli("card", "/nonexistent/g.json")
    assert result.returncode == 2


def test_degroupoidify_span_file(tmp_path):
    E = build_E(3)
    span = annihilation_span(E)
    path = tmp_path / "span.json"
    path.write_text(json.dumps(span_to_json(span)))
    result = run_cli("degroupoidify", "--span", str(path))
    assert result.returncode == 0
    payload = json.loads(result.stdout)
    assert payload["entries"][0][1] == "1/1"
    assert payload["entries"][1][2] == "2/1"
    csv = run_cli("degroupoidify", "--span", str(path), "--csv")
    assert csv.stdout.splitlines()[0].split(",")[1] == "1/1"


def test_compose_round_trip(tmp_path):
    E = build_E(3)
    span = annihilation_span(E)
    path = tmp_path / "span.json"
    path.write_text(json.dumps(span_to_json(span)))
    out = tmp_path / "composed.json"
    result = run_cli("compose", "--first", str(path), "--second", str(path),
                     "-o", str(out))
    assert result.returncode == 0
    matrix = run_cli("degroupoidify", "--span", str(out))
    payload = json.loads(matrix.stdout)
    # the square of the derivative: entry n(n-1) at (n-2, n)
    assert payload["entries"][0][2] == "2/1"
    assert payload["entries"][1][3] == "6/1"


def test_fock_ccr_exit_codes():
    result = run_cli("fock", "--truncate", "6", "--check-ccr")
    assert result.returncode == 0
    assert "PASS" in result.stdout


def test_fock_series_json():
    result = run_cli("fock", "--truncate", "4", "--series", "two-colored",
                     "--json")
    payload = json.loads(result.stdout)
    assert payload["series"] == ["1/1", "2/1", "2/1", "4/3", "2/3"]


def test_hecke_verify_and_constants(tmp_path):
    result = run_cli("hecke", "--q", "2", "--verify")
    assert result.returncode == 0
    assert result.stdout.count("PASS") == 3
    out = tmp_path / "constants.json"
    result = run_cli("hecke", "--q", "2", "--constants", str(out))
    assert result.returncode == 0
    payload = json.loads(out.read_text())
    assert payload["labels"] == ["e", "P", "L", "PL", "LP", "PLP"]
    assert payload["tensor"]["P"]["P"] == {"e": "2/1", "P": "1/1"}


def test_hall_cli_table(tmp_path):
    out = tmp_path / "table.json"
    result = run_cli("hall", "--quiver", "a2", "--q", "2",
                     "--dmax", "1,1", "--table", str(out))
    assert result.returncode == 0
    payload = json.loads(out.read_text())
    key = "d1,0#0*d0,1#0"
    assert payload["products"][key] == {"d1,1#0": "1/1", "d1,1#1": "1/1"}


def test_output_is_deterministic(tmp_path):
    runs = [run_cli("hecke", "--q", "2", "--verify", "--json").stdout
            for _ in range(2)]
    assert runs[0] == runs[1]
    E = build_E(3)
    path = tmp_path / "span.json"
    path.write_text(json.dumps(span_to_json(annihilation_span(E))))
    outs = [run_cli("degroupoidify", "--span", str(path)).stdout
            for _ in range(2)]
    assert outs[0] == outs[1]


def test_size_cap_env_override(tmp_path):
    E = build_E(3)
    path = tmp_path / "span.json"
    path.write_text(json.dumps(span_to_json(annihilation_span(E))))
    result = run_cli("compose", "--first", str(path), "--second", str(path),
                     env={"SPANCALC_SIZE_CAP": "2"})
    assert result.returncode == 2
    assert "SPANCALC_SIZE_CAP" in result.stderr

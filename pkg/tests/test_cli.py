import io
import json
import subprocess
import sys

import pytest

from infoshare.cli import run
from infoshare.model import components, instance_from_dict, network_from_dict


def call(capsys, monkeypatch, argv, stdin=""):
    monkeypatch.setattr(sys, "stdin", io.StringIO(stdin))
    code = run(argv)
    out = capsys.readouterr()
    return code, out.out, out.err


@pytest.fixture
def cli(capsys, monkeypatch):
    return lambda argv, stdin="": call(capsys, monkeypatch, argv, stdin)


def test_generate_solve_verify_pipeline(cli):
    code, inst, _ = cli(["generate", "bn", "--n", "9"])
    assert code == 0 and json.loads(inst)["n"] == 18
    code, net, _ = cli(["solve", "--alg", "peel"], inst)
    assert code == 0
    doc = json.loads(net)
    assert doc["algorithm"] == "peel" and "instance" in doc
    top = next(c for c in components(network_from_dict(doc)) if 3 in c)
    assert top == (3, 4, 5, 6, 7, 8, 12, 13, 14, 15, 16, 17)
    code, out, _ = cli(["verify", "--k", "9"], net)
    assert code == 0 and out.splitlines()[0] == "STABLE"


@pytest.mark.parametrize("alg", ["peel", "dyn2", "pot3", "pot4", "repair3"])
def test_every_solver_output_verifies(cli, alg):
    _, inst, _ = cli(["generate", "k3-pendants"])
    code, net, _ = cli(["solve", "--alg", alg], inst)
    assert code == 0
    k = {"dyn2": 2, "pot4": 4}.get(alg, 3)
    assert cli(["verify", "--k", str(k)], net)[0] == 0


def test_verify_reports_witness(cli, tmp_path):
    _, inst, _ = cli(["generate", "k3-pendants"])
    inst_file = tmp_path / "i.json"
    inst_file.write_text(inst)
    net = json.dumps({"n": 6, "blocks": [[0, 3], [1, 4], [2, 5]]})
    code, out, _ = cli(["verify", "--k", "3", "--instance", str(inst_file)], net)
    assert code == 1
    head, body = out.split("\n", 1)
    assert head == "UNSTABLE"
    assert json.loads(body)["participants"] == [0, 1, 2]


def test_verify_without_instance_is_usage_error(cli):
    code, _, err = cli(["verify", "--k", "2"], json.dumps({"n": 2, "edges": []}))
    assert code == 2 and "instance" in err


def test_enumerate_and_nonexistence(cli):
    _, inst, _ = cli(["generate", "c-nonexist", "--c", "5"])
    code, out, _ = cli(["enumerate", "--k", "2"], inst)
    assert code == 4 and json.loads(out) == []
    _, inst, _ = cli(["generate", "pendant-k4"])
    code, out, _ = cli(["enumerate", "--k", "2"], inst)
    assert code == 0 and json.loads(out) == [[[0, 1, 2, 3], [4], [5], [6], [7]], [[0, 4], [1, 5], [2, 6], [3, 7]]]


def test_welfare_command(cli):
    _, inst, _ = cli(["generate", "grid", "--r", "3", "--c", "4"])
    code, out, _ = cli(["welfare", "--k", "3"], inst)
    doc = json.loads(out)
    assert code == 0 and doc["pos"] == 1 and doc["poa"] == "3/2"
    code, out, _ = cli(["welfare", "--k", "3", "--metric", "components"], inst)
    assert json.loads(out)["poa"] == "4/3"
    _, inst, _ = cli(["generate", "strong-weak"])
    code, out, _ = cli(["welfare", "--k", "2"], inst)
    assert code == 4 and json.loads(out)["status"] == "nonexistent"


def test_bound_exceeded_exit_code(cli):
    enemies = json.dumps([[a, b] for a in range(16) for b in range(a + 1, 16)])
    _, inst, _ = cli(["generate", "friends-enemies", "--n", "16", "--enemies", enemies])
    code, _, err = cli(["enumerate", "--k", "2"], inst)
    assert code == 3 and "bound" in err
    code, out, _ = cli(["enumerate", "--k", "2", "--oracle-bound", "16"], inst)
    assert code == 0 and json.loads(out) == [[[v] for v in range(16)]]


def test_usage_errors(cli):
    assert cli(["generate", "nonsense"])[0] == 2
    assert cli(["generate", "grid", "--r", "3"])[0] == 2
    assert cli(["generate", "grid", "--r", "3", "--c", "3", "--z", "1"])[0] == 2
    assert cli(["solve"], "{oops")[0] == 2
    assert cli(["verify", "--k", "2", "--bogus", "1"], "{}")[0] == 2
    assert cli(["reduce", "--to", "3ctpg", "/no/such/file.json"])[0] == 2
    assert cli([])[0] == 2


def test_outputs_are_byte_identical(cli):
    first = cli(["generate", "random", "--n", "7", "--p", "0.4", "--seed", "3"])[1]
    again = cli(["generate", "random", "--n", "7", "--p", "0.4", "--seed", "3"])[1]
    assert first == again
    assert cli(["solve", "--alg", "dyn2"], first)[1] == cli(["solve", "--alg", "dyn2"], first)[1]


def test_generate_with_network_siblings(cli, tmp_path):
    out = tmp_path / "cyc.json"
    assert cli(["generate", "cycle", "-o", str(out), "--with-network"])[0] == 0
    assert (tmp_path / "cyc.network.json").exists() and (tmp_path / "cyc.schedule.json").exists()
    code, text, _ = cli(
        ["trace", str(tmp_path / "cyc.network.json"), "--schedule", str(tmp_path / "cyc.schedule.json")]
    )
    lines = [json.loads(x) for x in text.splitlines()]
    assert code == 0 and len(lines) == 8
    assert lines[-1] == {"cycle": True, "cycle_start": 0, "moves": 6}
    # trailing options after family parameters are honoured too
    out2 = tmp_path / "grid.json"
    assert cli(["generate", "grid", "--r", "2", "--c", "3", "-o", str(out2), "--with-network"])[0] == 0
    assert (tmp_path / "grid.network.json").exists()
    assert cli(["generate", "bn", "--n", "3", "--with-network"])[0] == 2


def test_trace_algorithms(cli):
    _, inst, _ = cli(["generate", "friends-enemies", "--n", "5"])
    code, text, _ = cli(["trace", "--alg", "dyn2"], inst)
    lines = [json.loads(x) for x in text.splitlines()]
    assert code == 0 and len(lines) == 5
    code, text, _ = cli(["trace", "--max-steps", "50"], inst)
    assert json.loads(text.splitlines()[-1])["cycle"] is False


def test_reduce_outputs(cli):
    k4 = json.dumps({"n": 4, "edges": [[a, b] for a in range(4) for b in range(a + 1, 4)]})
    code, out, _ = cli(["reduce", "--from", "3col", "--to", "matching"], k4)
    doc = json.loads(out)
    assert code == 0 and set(doc) == {"3col", "3ctpg", "scbg", "matching"}
    assert instance_from_dict(doc["matching"]).n == 24
    code, out, _ = cli(["reduce", "--to", "3ctpg"], k4)
    assert set(json.loads(out)) == {"3col", "3ctpg"}


def test_experiment_subset(cli):
    code, out, _ = cli(["experiment", "paper-suite", "--only", "4,7", "--format", "json"])
    doc = json.loads(out)
    assert code == 0 and [c["criterion"] for c in doc["criteria"]] == [4, 7]
    assert doc["all_passed"] and "seconds" not in doc["criteria"][0]
    code, out, _ = cli(["experiment", "paper-suite", "--only", "4"])
    assert code == 0 and "| 4 | potential tables | pass |" in out and "1/1 criteria pass" in out
    assert cli(["experiment", "paper-suite", "--only", "99"])[0] == 2


def test_module_entry_point():
    proc = subprocess.run(
        [sys.executable, "-m", "infoshare", "generate", "strong-weak"], capture_output=True, text=True, check=False
    )
    assert proc.returncode == 0 and json.loads(proc.stdout)["n"] == 4

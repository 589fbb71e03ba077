import json

import pytest

from automaforge.harness.cli import EXIT_FAILED, EXIT_OK, EXIT_USAGE, main


@pytest.fixture
def build(tmp_path, capsys):
    def _build(name, *params):
        out = tmp_path / f"{name}.json"
        assert main(["build", name, *params, "--out", str(out)]) == EXIT_OK
        capsys.readouterr()
        return out

    return _build


def test_build_list(capsys):
    assert main(["build", "--list"]) == EXIT_OK
    lines = capsys.readouterr().out.splitlines()
    assert len(lines) == 16
    assert any(line.startswith("upal_t ") and "t=2, N=2" in line for line in lines)


def test_build_reports_counts(tmp_path, capsys):
    out = tmp_path / "upal3.json"
    assert main(["build", "upal", "N=3", "--out", str(out)]) == EXIT_OK
    text = capsys.readouterr().out
    assert f"wrote {out}: qbca_realtime, 15 (+1 completion sink) states" in text
    assert json.loads(out.read_text())["kind"] == "qbca_realtime"


@pytest.mark.parametrize(
    "argv, message",
    [
        (["build"], "needs a builder name"),
        (["build", "nope"], "unknown builder"),
        (["build", "upal", "N"], "key=value"),
        (["build", "upal", "N=1"], "must be >= 2"),
        (["run", "--machine", "absent.json"], "file not found"),
    ],
)
def test_usage_errors(capsys, argv, message):
    assert main(argv) == EXIT_USAGE
    assert message in capsys.readouterr().err


def test_missing_command():
    with pytest.raises(SystemExit) as exc:
        main([])
    assert exc.value.code == 2


def test_run_gfa(build, capsys):
    path = build("Lijk_gfa")
    assert main(["run", "--machine", str(path), "--input", "abbccc"]) == EXIT_OK
    assert capsys.readouterr().out.strip() == "4"


def test_run_realtime_both_conventions(build, capsys):
    path = build("upal", "N=2")
    assert main(["run", "-m", str(path), "-i", "aab", "--counter-acceptance", "both"]) == EXIT_OK
    lines = capsys.readouterr().out.splitlines()
    assert lines[0].startswith("require_zero: accept=0 ")
    assert lines[1].startswith("ignore: accept=0.5 ")


def test_run_oneway_and_multihead(build, capsys):
    assert main(["run", "-m", str(build("upal1", "N=2")), "-i", "aba"]) == EXIT_OK
    assert capsys.readouterr().out.startswith("accept=1 ")
    assert main(["run", "-m", str(build("twin_pkfa")), "-i", "acbcbcb"]) == EXIT_OK
    assert capsys.readouterr().out.strip() == "accept=1/2 reject=1/2 pending=0"


def test_run_rejects_foreign_symbols(build, capsys):
    path = build("upal")
    assert main(["run", "-m", str(path), "-i", "abc"]) == EXIT_USAGE
    assert capsys.readouterr().err.startswith("Error:")


def test_sweep_csv_is_deterministic(build, tmp_path, capsys):
    path = build("upal", "N=2")
    first, second = tmp_path / "a.csv", tmp_path / "b.csv"
    for out in (first, second):
        assert main(["sweep", "-m", str(path), "--max-len", "4", "-q", "--out", str(out)]) == EXIT_OK
    assert "31 rows" in capsys.readouterr().out
    assert first.read_bytes() == second.read_bytes()
    lines = first.read_text().splitlines()
    assert lines[0] == "input,accept,reject,pending,member"
    assert len(lines) == 32
    member = {line.split(",")[0]: line.split(",")[-1] for line in lines[1:]}
    assert member[""] == "1"
    assert member["aabb"] == "1"
    assert member["ba"] == "0"


def test_sweep_to_stdout_with_alphabet(build, capsys):
    path = build("Lijk0_gfa")
    assert main(["sweep", "-m", str(path), "--max-len", "2", "--alphabet", "bc", "-q"]) == EXIT_OK
    lines = capsys.readouterr().out.splitlines()
    assert len(lines) == 8
    assert "bc,0,,,0" in lines


@pytest.mark.parametrize(
    "extra, message",
    [
        (["--max-len", "40"], "--force"),
        (["--max-len", "2", "--counter-acceptance", "both"], "single counter-acceptance"),
        (["--max-len", "2", "--alphabet", "ax"], "not in the machine alphabet"),
    ],
)
def test_sweep_usage_errors(build, capsys, extra, message):
    path = build("upal")
    assert main(["sweep", "-m", str(path), "-q", *extra]) == EXIT_USAGE
    assert message in capsys.readouterr().err


def test_settings_file_limits_sweeps(build, tmp_path, capsys):
    settings = tmp_path / "settings.json"
    settings.write_text(json.dumps({"max_len_limit": 2}))
    path = build("upal")
    argv = ["--settings", str(settings), "sweep", "-m", str(path), "--max-len", "3", "-q"]
    assert main(argv) == EXIT_USAGE
    assert main(argv + ["--force"]) == EXIT_OK


def _write_claim(tmp_path, name, **fields):
    path = tmp_path / f"{name}.json"
    path.write_text(json.dumps({"version": 1, "kind": "claim", **fields}))
    return str(path)


def test_verify(tmp_path, capsys):
    good = _write_claim(
        tmp_path,
        "good",
        machine={"builder": "upal", "params": {"N": 2}},
        language="upal",
        bound_type="one_sided_negative",
        bound="1/2",
        max_len=4,
        counter_acceptance="both",
    )
    assert main(["verify", good, "-q"]) == EXIT_OK
    assert capsys.readouterr().out.startswith("PASS")

    bad = _write_claim(
        tmp_path,
        "bad",
        machine={"builder": "Lijk0_gfa"},
        language="ijk",
        bound_type="nondet_mode",
        max_len=3,
    )
    assert main(["verify", good, bad, "-q"]) == EXIT_FAILED
    out = capsys.readouterr().out
    assert "FAIL" in out
    assert "'bcc'" in out


def test_verify_malformed_claim(tmp_path, capsys):
    path = _write_claim(tmp_path, "broken", machine={"builder": "upal"}, language="upal")
    assert main(["verify", path]) == EXIT_USAGE
    assert "missing field" in capsys.readouterr().err


def test_check_wf(build, capsys):
    path = build("upal", "N=2")
    assert main(["check-wf", "-m", str(path), "--max-len", "2"]) == EXIT_OK
    assert "PASS check-wf" in capsys.readouterr().out


def test_check_wf_reports_broken_machine(build, capsys):
    path = build("upal1", "N=2")
    data = json.loads(path.read_text())
    data["transitions"][0]["branches"][0]["amplitude"] = {"re": "2"}
    path.write_text(json.dumps(data))
    assert main(["check-wf", "-m", str(path), "--max-len", "1"]) == EXIT_FAILED
    out = capsys.readouterr().out
    assert out.startswith("FAIL check-wf")
    assert "local:" in out


def test_check_wf_needs_quantum_machine(build, capsys):
    assert main(["check-wf", "-m", str(build("Lijk_gfa"))]) == EXIT_USAGE
    assert "quantum machine" in capsys.readouterr().err


def test_compile_bca(build, tmp_path, capsys):
    path = build("bal_dbca")
    assert main(["compile-bca", "-m", str(path)]) == EXIT_OK
    out = capsys.readouterr().out
    assert "counter 1 -> prime 2" in out
    assert "gfa, 16 states" in out
    target = tmp_path / "bal_dbca_g2.json"
    assert json.loads(target.read_text())["kind"] == "gfa"

    assert main(["run", "-m", str(target), "-i", "ab"]) == EXIT_OK
    assert capsys.readouterr().out.strip() == "0"


def test_compile_bca_needs_dbca(build, capsys):
    assert main(["compile-bca", "-m", str(build("lsay_nbca"))]) == EXIT_USAGE


def test_run_rejects_degenerate_qft(build, capsys):
    path = build("upal", "N=2")
    data = json.loads(path.read_text())
    data["transitions"][0]["branches"][0]["amplitude"] = {"re": "1", "qft": [[0, 1, 1]]}
    path.write_text(json.dumps(data))
    assert main(["run", "-m", str(path), "-i", "ab"]) == EXIT_USAGE
    assert "QFT size must be >= 2" in capsys.readouterr().err


def test_compile_bca_help_explains_state_count(capsys):
    with pytest.raises(SystemExit):
        main(["compile-bca", "--help"])
    out = " ".join(capsys.readouterr().out.split())
    assert "residue" in out
    assert "16 states, not 9" in out

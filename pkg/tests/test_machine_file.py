import json

import pytest

from automaforge.automata.gfa import gfa_value
from automaforge.harness.machine_file import (
    MachineFileError,
    dumps,
    load_machine,
    loads,
    machine_kind,
    save_machine,
)
from automaforge.harness.sweep import evaluate
from automaforge.quantum.runtime import run_quantum

BUILDER_NAMES = [
    "Lijk0_gfa",
    "Lijk_gfa",
    "bal_dbca",
    "bal_witness_gfa",
    "bca3fa",
    "coinflip_pbca",
    "lsay_nbca",
    "neq_gfa",
    "qft_probe",
    "twin_dkfa",
    "twin_p2fa",
    "twin_pkfa",
    "upal",
    "upal1",
    "upal_star",
    "upal_t",
]


@pytest.mark.parametrize("name", BUILDER_NAMES)
def test_serialization_is_stable(builders, name):
    machine = builders[name]().build()
    text = dumps(machine)
    again = loads(text)
    assert machine_kind(again) == builders[name].kind
    assert dumps(again) == text


def test_saved_file_reloads_byte_identical(builders, tmp_path):
    machine = builders["upal_star"](N=3).build()
    path = save_machine(machine, tmp_path / "nested" / "star.json")
    assert path.read_text(encoding="utf-8") == dumps(load_machine(path))


def test_loaded_machines_behave_the_same(builders):
    upal1 = builders["upal1"](N=3).build()
    copy = loads(dumps(upal1))
    for w in ["", "aba", "aab", "abab"]:
        assert run_quantum(copy, w).accept == pytest.approx(run_quantum(upal1, w).accept, abs=1e-12)

    lijk = builders["Lijk_gfa"]().build()
    assert gfa_value(loads(dumps(lijk)), "abbccc") == 4

    twin = builders["twin_p2fa"](t=2).build()
    assert evaluate(loads(dumps(twin)), "acbcbcb").accept == evaluate(twin, "acbcbcb").accept


def test_amplitudes_stay_symbolic(builders):
    data = json.loads(dumps(builders["upal"](N=2).build()))
    amplitudes = [b["amplitude"] for t in data["transitions"] for b in t["branches"]]
    assert any("qft" in a for a in amplitudes)
    assert all(isinstance(a["re"], str) for a in amplitudes)
    assert data["version"] == 1
    assert data["kind"] == "qbca_realtime"
    assert data["language"] == "upal"


@pytest.mark.parametrize(
    "text, message",
    [
        ("[1, 2]", "JSON object"),
        ('{"version": 2, "kind": "gfa"}', "unsupported version"),
        ('{"version": 1, "kind": "tm"}', "unknown kind"),
        ('{"version": 1, "kind": "gfa", "n": 1}', "missing field"),
        ("{not json", "invalid JSON"),
    ],
)
def test_malformed_files(text, message):
    with pytest.raises(MachineFileError, match=message):
        loads(text, "m.json")


def test_bad_rational_and_phase(builders):
    data = json.loads(dumps(builders["upal"](N=2).build()))
    data["transitions"][0]["branches"][0]["amplitude"] = {"re": "1/0"}
    with pytest.raises(MachineFileError):
        loads(json.dumps(data))
    data["transitions"][0]["branches"][0]["amplitude"] = {"re": "1", "qft": [[2, 1]]}
    with pytest.raises(MachineFileError, match="qft entries"):
        loads(json.dumps(data))



@pytest.mark.parametrize("triple", [[0, 1, 1], [1, 1, 1], [2, 3, 1], [3, 1, -1]])
def test_qft_triples_out_of_range(builders, triple):
    data = json.loads(dumps(builders["upal"](N=2).build()))
    data["transitions"][0]["branches"][0]["amplitude"] = {"re": "1", "qft": [triple]}
    with pytest.raises(MachineFileError, match="QFT"):
        loads(json.dumps(data))

def test_bad_verdict(builders):
    data = json.loads(dumps(builders["twin_dkfa"]().build()))
    data["verdicts"][0]["verdict"] = "maybe"
    with pytest.raises(MachineFileError, match="verdict"):
        loads(json.dumps(data))


def test_missing_file(tmp_path):
    with pytest.raises(MachineFileError, match="file not found"):
        load_machine(tmp_path / "absent.json")

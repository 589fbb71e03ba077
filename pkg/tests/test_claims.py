import dataclasses
import json
from fractions import Fraction
from pathlib import Path

import pytest

from automaforge.automata.languages import LanguageId
from automaforge.harness.claims import (
    BoundType,
    Claim,
    ClaimError,
    check_row,
    claim_to_dict,
    load_claim,
    parse_claim,
    verify_claim,
)
from automaforge.harness.machine_file import save_machine
from automaforge.harness.sweep import SweepRow
from automaforge.quantum.constructions import build_upal1_qfa
from automaforge.quantum.runtime import CounterAcceptance

CLAIMS_DIR = Path(__file__).resolve().parent.parent / "claims"
BUNDLED = sorted(CLAIMS_DIR.glob("*.json"))


def make_claim(bound_type=BoundType.ONE_SIDED_NEGATIVE, bound=Fraction(1, 2), **overrides):
    fields = dict(
        machine={"builder": "upal", "params": {"N": 2}},
        language=LanguageId.parse("upal"),
        bound_type=bound_type,
        bound=bound,
        alphabet=("a", "b"),
        max_len=3,
    )
    fields.update(overrides)
    return Claim(**fields)


def row(accept, member, halted=True, pending=None):
    return SweepRow("w", accept, None, pending, member, halted)


def test_one_sided_rows():
    claim = make_claim()
    assert check_row(claim, row(Fraction(1), True)) is None
    assert "< 1" in check_row(claim, row(Fraction(99, 100), True))
    assert check_row(claim, row(Fraction(1, 2), False)) is None
    assert "> 1/2" in check_row(claim, row(Fraction(3, 5), False))
    assert check_row(claim, row(0.5 + 1e-12, False)) is None
    assert check_row(claim, row(1 - 1e-12, True)) is None


def test_two_sided_rows():
    claim = make_claim(BoundType.TWO_SIDED, Fraction(1, 3))
    assert check_row(claim, row(Fraction(2, 3), True)) is None
    assert check_row(claim, row(Fraction(1, 2), True)) is not None
    assert check_row(claim, row(Fraction(1, 3), False)) is None
    assert check_row(claim, row(Fraction(1, 2), False)) is not None


def test_mode_rows():
    nondet = make_claim(BoundType.NONDET_MODE, None)
    assert check_row(nondet, row(Fraction(4), True)) is None
    assert check_row(nondet, row(Fraction(0), True)) is not None
    assert check_row(nondet, row(Fraction(1, 7), False)) is not None

    zero = make_claim(BoundType.EXACT_ZERO_COMPLEMENT, None)
    assert check_row(zero, row(Fraction(0), True)) is None
    assert check_row(zero, row(Fraction(-1, 2), False)) is None
    assert check_row(zero, row(Fraction(0), False)) is not None


def test_stalled_row_is_a_violation():
    reason = check_row(make_claim(), row(0.0, False, halted=False, pending=0.25))
    assert reason.startswith("did not halt")


@pytest.mark.parametrize(
    "data, message",
    [
        ([], "JSON object"),
        ({"kind": "machine"}, "expected kind"),
        ({"language": "upal"}, "machine must be"),
        ({"machine": {"builder": "upal"}, "language": "upal", "bound_type": "two_sided", "max_len": 3}, "bound"),
        (
            {"machine": {"builder": "upal"}, "language": "upal", "bound_type": "one_sided_negative", "bound": "3/2", "max_len": 3},
            "bound",
        ),
        ({"machine": {"builder": "upal"}, "language": "nope", "bound_type": "nondet_mode", "max_len": 3}, "nope"),
        ({"machine": {"builder": "upal"}, "language": "upal", "bound_type": "sometimes", "max_len": 3}, "sometimes"),
        ({"machine": {"builder": "upal"}, "language": "upal", "bound_type": "nondet_mode"}, "missing field"),
    ],
)
def test_malformed_claims(data, message):
    with pytest.raises(ClaimError, match=message):
        parse_claim(data, "c.json")


def test_dict_round_trip():
    claim = parse_claim(
        {
            "machine": {"builder": "upal", "params": {"N": 3}},
            "language": "upal",
            "bound_type": "one_sided_negative",
            "bound": "1/3",
            "max_len": 5,
            "counter_acceptance": "both",
        }
    )
    assert claim.counter_acceptance == (CounterAcceptance.REQUIRE_ZERO, CounterAcceptance.IGNORE)
    assert claim.alphabet == ("a", "b")
    assert parse_claim(claim_to_dict(claim)) == claim


def test_machine_file_relative_to_claim(tmp_path):
    save_machine(build_upal1_qfa(2), tmp_path / "machines" / "upal1.json")
    path = tmp_path / "claim.json"
    path.write_text(
        json.dumps(
            {
                "version": 1,
                "kind": "claim",
                "machine": {"file": "machines/upal1.json"},
                "language": "upal_t(1)",
                "bound_type": "one_sided_negative",
                "bound": "1/2",
                "max_len": 4,
                "counter_acceptance": "both",
            }
        )
    )
    report = verify_claim(load_claim(path))
    assert report.passed, report.violations
    assert report.checked == 31
    assert report.worst_member == pytest.approx(1.0)


def test_conventions_multiply_runs():
    report = verify_claim(make_claim(counter_acceptance=tuple(CounterAcceptance)))
    assert report.passed
    assert report.checked == 30
    assert report.summary().startswith("PASS upal one_sided_negative upal: 30 runs")


def test_failing_claim_names_inputs():
    claim = make_claim(
        BoundType.NONDET_MODE,
        None,
        machine={"builder": "Lijk0_gfa"},
        language=LanguageId.parse("ijk"),
        alphabet=("a", "b", "c"),
    )
    report = verify_claim(claim)
    assert not report.passed
    assert "bcc" in {v.input for v in report.violations}
    assert report.worst_member is None
    assert "violation(s)" in report.summary()


@pytest.mark.parametrize("path", BUNDLED, ids=[p.stem for p in BUNDLED])
def test_bundled_claims_short(path):
    claim = load_claim(path)
    report = verify_claim(dataclasses.replace(claim, max_len=min(claim.max_len, 5)))
    assert report.passed, [str(v) for v in report.violations[:5]]


@pytest.mark.slow
@pytest.mark.parametrize("path", BUNDLED, ids=[p.stem for p in BUNDLED])
def test_bundled_claims_full(path):
    report = verify_claim(load_claim(path), jobs=2)
    assert report.passed, [str(v) for v in report.violations[:5]]

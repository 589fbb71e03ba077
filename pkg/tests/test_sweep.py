import pickle
from fractions import Fraction

import pytest

from automaforge.automata.bca import balanced_dbca, build_lsay_nbca
from automaforge.automata.gfa import build_Lijk_gfa
from automaforge.automata.multihead import build_twin_p2fa, coinflip_pbca
from automaforge.core.alphabet import InputSymbolError
from automaforge.harness.sweep import (
    RunOptions,
    SweepError,
    SweepRow,
    describe_row,
    evaluate,
    rows_to_csv,
    sweep,
)
from automaforge.quantum.constructions import build_upal1_qfa, build_upal_qbca
from automaforge.quantum.runtime import CounterAcceptance


def test_evaluate_every_kind():
    assert evaluate(build_Lijk_gfa(), "abbccc") == SweepRow("abbccc", Fraction(4), None, None)
    assert evaluate(balanced_dbca(), "ab").accept == 1
    assert evaluate(build_lsay_nbca(), "ab").accept == 0
    assert evaluate(coinflip_pbca(), "aa").accept == Fraction(1, 4)
    assert evaluate(build_twin_p2fa(2), "acbcbcb").accept == Fraction(1, 2)
    row = evaluate(build_upal_qbca(2), "aab", RunOptions(counter_acceptance=CounterAcceptance.IGNORE))
    assert row.accept == pytest.approx(0.5)


def test_step_cap_leaves_pending_mass():
    row = evaluate(build_upal1_qfa(2), "aaba", RunOptions(step_cap=3))
    assert not row.halted
    assert row.pending > 0


def test_rows_are_length_lexicographic():
    rows = sweep(build_Lijk_gfa(), "abc", 2, "ijk", chunk_size=4)
    assert [r.input for r in rows][:5] == ["", "a", "b", "c", "aa"]
    assert len(rows) == 13
    assert not any(r.member for r in rows)


def test_worker_count_does_not_change_output():
    machine = build_upal_qbca(2)
    serial = rows_to_csv(sweep(machine, "ab", 4, "upal"))
    parallel = rows_to_csv(sweep(machine, "ab", 4, "upal", jobs=2, chunk_size=5))
    assert serial == parallel


def test_failures_carry_the_input():
    with pytest.raises(SweepError) as exc:
        sweep(build_Lijk_gfa(), "abc", 1, "upal")
    assert exc.value.input == "c"
    assert isinstance(exc.value.error, InputSymbolError)
    assert "Traceback" in exc.value.traceback

    copy = pickle.loads(pickle.dumps(exc.value))
    assert copy.input == "c"
    assert copy.error.symbol == "c"


def test_negative_length():
    with pytest.raises(ValueError):
        sweep(build_Lijk_gfa(), "abc", -1)


def test_row_text():
    row = SweepRow("ab", Fraction(1, 2), Fraction(1, 2), Fraction(0), True)
    assert describe_row(row) == "accept=1/2 reject=1/2 pending=0"
    assert rows_to_csv([row]) == "input,accept,reject,pending,member\nab,1/2,1/2,0,1\n"
    assert describe_row(SweepRow("", 0.25, None, None)) == "accept=0.25"

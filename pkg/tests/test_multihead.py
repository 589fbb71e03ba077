from fractions import Fraction

import pytest

from automaforge.automata.bca import balanced_dbca
from automaforge.automata.gfa import ConstructionError
from automaforge.automata.languages import is_twin
from automaforge.automata.multihead import (
    ACCEPT,
    REJECT,
    OneWayKFA,
    Outcome,
    PBranch,
    RtP1BCA,
    Rule,
    build_twin_dkfa,
    build_twin_p2fa,
    build_twin_pkfa,
    coinflip_pbca,
    deterministic,
    normalize_pbca,
    pbca_from_dbca,
    run_pkfa,
    run_rtp1bca,
    schedule_pair_comparisons,
    simulate_bca_as_3fa,
)
from automaforge.core.alphabet import words

HALF = Fraction(1, 2)


def wide_pbca():
    """Updates of size 2: +2 on a, -1 on b with probability 1/2 each way."""
    return RtP1BCA(
        states=("q",),
        initial="q",
        accepting=frozenset({"q"}),
        alphabet=("a", "b"),
        transitions={
            ("q", "¢"): (PBranch(Fraction(1), "q", 0),),
            ("q", "a"): (PBranch(Fraction(1), "q", 2),),
            ("q", "b"): (PBranch(HALF, "q", -1), PBranch(HALF, "q", -2)),
            ("q", "$"): (PBranch(Fraction(1), "q", 0),),
        },
    )


def test_rtp1bca_runs():
    assert run_rtp1bca(coinflip_pbca(), "aaa") == Fraction(1, 8)
    assert run_rtp1bca(coinflip_pbca(), "") == 1
    m = pbca_from_dbca(balanced_dbca())
    assert run_rtp1bca(m, "abba") == 1
    assert run_rtp1bca(m, "aab") == 0
    assert run_rtp1bca(wide_pbca(), "ab") == HALF
    assert run_rtp1bca(wide_pbca(), "abb") == Fraction(1, 4)


def test_normalize_pbca_preserves_probabilities():
    m = wide_pbca()
    unit = normalize_pbca(m)
    assert unit.m == 1
    for symbols in words("ab", 6):
        assert run_rtp1bca(unit, symbols) == run_rtp1bca(m, symbols)


@pytest.mark.parametrize(
    "source",
    [pbca_from_dbca(balanced_dbca()), coinflip_pbca(), wide_pbca()],
    ids=["mbal", "coinflip", "wide"],
)
def test_three_head_simulation_is_exact(source):
    machine = simulate_bca_as_3fa(normalize_pbca(source))
    assert machine.heads == 3
    for symbols in words(source.alphabet, 6):
        run = run_pkfa(machine, symbols)
        assert run.accept == run_rtp1bca(source, symbols), symbols
        assert run.residue == 0


@pytest.mark.slow
@pytest.mark.parametrize("source", [pbca_from_dbca(balanced_dbca()), coinflip_pbca()], ids=["mbal", "coinflip"])
def test_three_head_simulation_is_exact_full(source):
    machine = simulate_bca_as_3fa(normalize_pbca(source))
    for symbols in words(source.alphabet, 8):
        assert run_pkfa(machine, symbols).accept == run_rtp1bca(source, symbols)


def test_simulation_needs_unit_updates():
    with pytest.raises(ConstructionError):
        simulate_bca_as_3fa(wide_pbca())


def test_pkfa_validation():
    with pytest.raises(ConstructionError):
        OneWayKFA(
            heads=1,
            states=("s", ACCEPT, REJECT),
            initial="s",
            verdicts={ACCEPT: True, REJECT: False},
            alphabet=("a",),
            rules={"s": (Rule(("*",), (Outcome(HALF, ACCEPT, (1,)),)),)},
        )
    with pytest.raises(ConstructionError):
        OneWayKFA(
            heads=1,
            states=("s", ACCEPT, REJECT),
            initial="s",
            verdicts={ACCEPT: True, REJECT: False},
            alphabet=("a",),
            rules={"s": (deterministic(("*",), ACCEPT, (2,)),)},
        )


def test_missing_rule_rejects():
    machine = OneWayKFA(
        heads=1,
        states=("s", ACCEPT, REJECT),
        initial="s",
        verdicts={ACCEPT: True, REJECT: False},
        alphabet=("a", "b"),
        rules={"s": (deterministic(("¢",), "s", (1,)), deterministic(("a",), "s", (1,)), deterministic(("$",), ACCEPT, (0,)))},
    )
    assert run_pkfa(machine, "aa").accept == 1
    run = run_pkfa(machine, "ab")
    assert run.accept == 0
    assert run.reject == 1


def test_schedules():
    assert schedule_pair_comparisons([1, 2], 2, 2) is None
    assert schedule_pair_comparisons([1], 2, 2) is not None
    assert schedule_pair_comparisons([2], 2, 2) is not None
    plan = schedule_pair_comparisons([1, 2, 3], 3, 3)
    assert plan is not None
    assert sorted(i for i, _, _ in plan) == [1, 2, 3]
    with pytest.raises(ValueError):
        schedule_pair_comparisons([4], 3, 3)


def test_twin_dkfa_examples():
    machine = build_twin_dkfa(2)
    assert machine.is_deterministic
    assert machine.language == "twin(1)"
    assert run_pkfa(machine, "c").accept == 1
    assert run_pkfa(machine, "abcab").accept == 1
    assert run_pkfa(machine, "abcba").accept == 0


@pytest.mark.parametrize("k, max_len", [(2, 7), (3, 6)])
def test_twin_dkfa_matches_oracle(k, max_len):
    machine = build_twin_dkfa(k)
    t = k * (k - 1) // 2
    for symbols in words("abc", max_len):
        w = "".join(symbols)
        assert run_pkfa(machine, w).accept == (1 if is_twin(w, t) else 0), w


def test_twin_pkfa_examples():
    machine = build_twin_pkfa(2)
    assert machine.language == "twin(2)"
    assert run_pkfa(machine, "acbcbca").accept == 1
    assert run_pkfa(machine, "acbcbcb").accept == HALF
    assert run_pkfa(machine, "acb").accept == 0


def test_twin_p2fa_examples():
    single = build_twin_p2fa(1)
    assert single.is_deterministic
    assert run_pkfa(single, "abcab").accept == 1
    machine = build_twin_p2fa(2)
    assert machine.heads == 2
    assert run_pkfa(machine, "acbcbca").accept == 1
    assert run_pkfa(machine, "acbcbcb").accept == HALF


@pytest.mark.parametrize("build", [lambda: build_twin_pkfa(2), lambda: build_twin_p2fa(2)], ids=["pkfa", "p2fa"])
def test_twin_two_pairs_bound(build):
    machine = build()
    for symbols in words("abc", 7):
        w = "".join(symbols)
        accept = run_pkfa(machine, w).accept
        if is_twin(w, 2):
            assert accept == 1, w
        else:
            assert accept <= HALF, w


def test_twin_p2fa_three_pairs():
    machine = build_twin_p2fa(3)
    assert run_pkfa(machine, "acbcccbca").accept == 1
    assert run_pkfa(machine, "acbcccbcb").accept == Fraction(2, 3)

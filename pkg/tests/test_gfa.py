from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from automaforge.automata.gfa import (
    ConstructionError,
    build_diff_gfa,
    build_form_gfa,
    build_Lijk_gfa,
    build_neq_gfa,
    constant_gfa,
    gfa_tensor,
    gfa_value,
    nqal_decide,
)
from automaforge.automata.languages import is_ijk, is_neq
from automaforge.core.alphabet import InputSymbolError, words

ABC = ("a", "b", "c")
abc_words = st.text(alphabet="abc", max_size=8)


def test_lijk_examples():
    g = build_Lijk_gfa()
    assert gfa_value(g, "abbccc") == 4
    assert gfa_value(g, "abc") == 0
    assert gfa_value(g, "acb") == 0
    assert gfa_value(g, "") == 0


@pytest.mark.parametrize("i", range(1, 6))
@pytest.mark.parametrize("j", range(1, 6))
@pytest.mark.parametrize("k", range(1, 6))
def test_lijk_value_on_blocks(i, j, k):
    w = "a" * i + "b" * j + "c" * k
    assert gfa_value(build_Lijk_gfa(), w) == (i - j) ** 2 * (i - k) ** 2 * (j - k) ** 2


def test_lijk_positive_exactly_on_members():
    g = build_Lijk_gfa()
    for symbols in words(ABC, 6):
        w = "".join(symbols)
        assert nqal_decide(g, w) == is_ijk(w), w


def test_lijk_with_empty_blocks():
    g = build_Lijk_gfa(allow_empty=True)
    assert gfa_value(g, "bcc") == 4
    assert gfa_value(g, "cb") == 0
    assert g.language == "ijk0"
    for symbols in words(ABC, 5):
        w = "".join(symbols)
        assert nqal_decide(g, w) == is_ijk(w, allow_empty=True), w


def test_diff_counts():
    g = build_diff_gfa("a", "b", ABC)
    assert gfa_value(g, "aacab") == 2
    assert gfa_value(g, "bbb") == -3
    assert gfa_value(g, "") == 0


def test_form_gfa():
    g = build_form_gfa(("a", "b"), ABC)
    assert gfa_value(g, "aabb") == 1
    assert gfa_value(g, "ab") == 1
    assert gfa_value(g, "a") == 0
    assert gfa_value(g, "ba") == 0
    assert gfa_value(g, "abc") == 0
    with pytest.raises(ConstructionError):
        build_form_gfa(("a", "a"), ABC)


@given(abc_words, abc_words)
def test_tensor_multiplies_values(u, v):
    g1 = build_diff_gfa("a", "b", ABC)
    g2 = build_diff_gfa("b", "c", ABC)
    w = u + v
    assert gfa_value(gfa_tensor(g1, g2), w) == gfa_value(g1, w) * gfa_value(g2, w)


def test_tensor_alphabet_mismatch():
    with pytest.raises(ConstructionError):
        gfa_tensor(constant_gfa("ab"), constant_gfa("abc"))


def test_constant_gfa():
    g = constant_gfa(ABC, Fraction(3, 4))
    assert gfa_value(g, "cab") == Fraction(3, 4)


def test_neq_gfa():
    g = build_neq_gfa(2)
    assert gfa_value(g, "a1a1b2") == 4 * 1
    assert gfa_value(g, "a1b1a2") == 0
    for symbols in words(g.alphabet, 4):
        assert nqal_decide(g, symbols) == is_neq(symbols, 2)


def test_rejects_foreign_symbol():
    with pytest.raises(InputSymbolError):
        gfa_value(build_Lijk_gfa(), "abd")

"""
Generalized finite automata over the rationals.

A GFA assigns the value ``f · A_{w_n} ··· A_{w_1} · v0`` to a word. States are
indexed ``0 .. n-1``; tensor products flatten composite indices row-major.
"""

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, Mapping, Optional, Sequence, Tuple

from ..core.alphabet import Word, tokenize
from ..core.numerics import SparseMap, SparseVector, apply, tensor


class ConstructionError(ValueError):
    """Raised when an automaton cannot be built from the given parts."""


@dataclass(frozen=True)
class GFA:
    """G = (Q, Σ, {A_σ}, v0, f) with exact rational entries."""

    n: int
    alphabet: Tuple[str, ...]
    matrices: Mapping[str, SparseMap]
    initial: SparseVector
    final: SparseVector
    language: Optional[str] = field(default=None, compare=False)

    def __post_init__(self):
        if self.n < 1:
            raise ConstructionError(f"state count must be >= 1, got {self.n}")
        if not self.alphabet:
            raise ConstructionError("alphabet must be nonempty")
        missing = [s for s in self.alphabet if s not in self.matrices]
        if missing:
            raise ConstructionError(f"missing transition matrices for {missing}")
        for name, vec in (("initial", self.initial), ("final", self.final)):
            bad = [k for k in vec if not (isinstance(k, int) and 0 <= k < self.n)]
            if bad:
                raise ConstructionError(f"{name} vector has out-of-range indices {bad}")
        for symbol, matrix in self.matrices.items():
            for (t, s), _ in matrix.entries():
                if not (0 <= t < self.n and 0 <= s < self.n):
                    raise ConstructionError(
                        f"matrix for {symbol!r} has entry ({t}, {s}) outside {self.n} states"
                    )

    def with_language(self, language: Optional[str]) -> "GFA":
        return GFA(self.n, self.alphabet, self.matrices, self.initial, self.final, language)


def gfa_value(g: GFA, w: Word) -> Fraction:
    """Exact acceptance value of ``w``; the empty word yields f · v0."""
    v = g.initial
    for symbol in tokenize(w, g.alphabet):
        v = apply(g.matrices[symbol], v)
        if not v:
            return Fraction(0)
    return Fraction(g.final.dot(v))


def nqal_decide(g: GFA, w: Word) -> bool:
    return gfa_value(g, w) > 0


def _flatten(pair: Tuple[int, int], n2: int) -> int:
    return pair[0] * n2 + pair[1]


def gfa_tensor(g1: GFA, g2: GFA) -> GFA:
    """GFA whose value is the product of the two values."""
    if set(g1.alphabet) != set(g2.alphabet):
        raise ConstructionError(
            f"alphabet mismatch: {{{', '.join(g1.alphabet)}}} vs {{{', '.join(g2.alphabet)}}}"
        )
    n2 = g2.n
    matrices = {}
    for symbol in g1.alphabet:
        product = tensor(g1.matrices[symbol], g2.matrices[symbol])
        matrices[symbol] = SparseMap(
            ((_flatten(t, n2), _flatten(s, n2)), v) for (t, s), v in product.entries()
        )
    return GFA(
        n=g1.n * n2,
        alphabet=g1.alphabet,
        matrices=matrices,
        initial=SparseVector((_flatten(k, n2), v) for k, v in tensor(g1.initial, g2.initial).items()),
        final=SparseVector((_flatten(k, n2), v) for k, v in tensor(g1.final, g2.final).items()),
    )


def tensor_all(parts: Sequence[GFA]) -> GFA:
    result = parts[0]
    for part in parts[1:]:
        result = gfa_tensor(result, part)
    return result


def constant_gfa(alphabet: Sequence[str], value: Fraction = Fraction(1)) -> GFA:
    """1-state GFA with constant value."""
    one = Fraction(1)
    return GFA(
        n=1,
        alphabet=tuple(alphabet),
        matrices={s: SparseMap({(0, 0): one}) for s in alphabet},
        initial=SparseVector({0: one}),
        final=SparseVector({0: Fraction(value)}),
    )


# ── Named constructions ──────────────────────────────────────────────────

def build_diff_gfa(plus: str, minus: str, alphabet: Sequence[str]) -> GFA:
    """
    2-state GFA with value |w|_plus - |w|_minus.

    State 0 accumulates the difference, state 1 holds the constant 1;
    symbols other than ``plus``/``minus`` act as the identity.
    """
    alphabet = tuple(alphabet)
    if plus == minus:
        raise ConstructionError(f"plus and minus must differ, both are {plus!r}")
    for s in (plus, minus):
        if s not in alphabet:
            raise ConstructionError(f"symbol {s!r} is not in alphabet {alphabet}")
    one = Fraction(1)
    identity = {(0, 0): one, (1, 1): one}
    matrices = {}
    for s in alphabet:
        entries = dict(identity)
        if s == plus:
            entries[(0, 1)] = one
        elif s == minus:
            entries[(0, 1)] = -one
        matrices[s] = SparseMap(entries)
    return GFA(
        n=2,
        alphabet=alphabet,
        matrices=matrices,
        initial=SparseVector({1: one}),
        final=SparseVector({0: one}),
    )


def build_form_gfa(blocks: Sequence[str], alphabet: Sequence[str], allow_empty: bool = False) -> GFA:
    """
    Value 1 on words of the form blocks[0]+ ... blocks[m-1]+ and 0 otherwise.

    With ``allow_empty`` each block may be empty (blocks[0]* ... blocks[m-1]*).
    Uses m+1 states; state i means "currently inside block i" (0 = nothing read).
    """
    alphabet = tuple(alphabet)
    blocks = tuple(blocks)
    if not blocks:
        raise ConstructionError("blocks must be nonempty")
    if len(set(blocks)) != len(blocks):
        raise ConstructionError(f"blocks must be pairwise distinct, got {blocks}")
    for s in blocks:
        if s not in alphabet:
            raise ConstructionError(f"block symbol {s!r} is not in alphabet {alphabet}")

    one = Fraction(1)
    m = len(blocks)
    matrices = {}
    for s in alphabet:
        entries = {}
        if s in blocks:
            i = blocks.index(s) + 1
            if allow_empty:
                for prev in range(i + 1):
                    entries[(i, prev)] = one
            else:
                entries[(i, i - 1)] = one
                entries[(i, i)] = one
        matrices[s] = SparseMap(entries)

    final = SparseVector({k: one for k in range(m + 1)}) if allow_empty else SparseVector({m: one})
    return GFA(
        n=m + 1,
        alphabet=alphabet,
        matrices=matrices,
        initial=SparseVector({0: one}),
        final=final,
    )


def _squared_diff(plus: str, minus: str, alphabet: Sequence[str]) -> GFA:
    g = build_diff_gfa(plus, minus, alphabet)
    return gfa_tensor(g, g)


def build_Lijk_gfa(allow_empty: bool = False) -> GFA:
    """
    f(w) = (|w|_a-|w|_b)^2 (|w|_a-|w|_c)^2 (|w|_b-|w|_c)^2 on a+b+c+, else 0.

    ``allow_empty`` swaps the form factor for a*b*c*.
    """
    alphabet = ("a", "b", "c")
    parts = [
        build_form_gfa(alphabet, alphabet, allow_empty=allow_empty),
        _squared_diff("a", "b", alphabet),
        _squared_diff("a", "c", alphabet),
        _squared_diff("b", "c", alphabet),
    ]
    return tensor_all(parts).with_language("ijk0" if allow_empty else "ijk")


def neq_alphabet(t: int) -> Tuple[str, ...]:
    return tuple(f"a{i}" for i in range(1, t + 1)) + tuple(f"b{i}" for i in range(1, t + 1))


def build_neq_gfa(t: int) -> GFA:
    """f(w) = prod_i (|w|_{a_i} - |w|_{b_i})^2."""
    if t < 1:
        raise ConstructionError(f"t must be >= 1, got {t}")
    alphabet = neq_alphabet(t)
    parts = [_squared_diff(f"a{i}", f"b{i}", alphabet) for i in range(1, t + 1)]
    return tensor_all(parts).with_language(f"neq({t})")

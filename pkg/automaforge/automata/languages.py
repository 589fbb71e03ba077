"""
Reference membership oracles, checked directly from each definition.

The oracles never consult an automaton: they decompose, count or search
over splits of the input word.
"""

import re
from dataclasses import dataclass
from functools import lru_cache
from typing import Callable, Dict, Optional, Sequence, Tuple

from ..core.alphabet import Word, tokenize


class LanguageError(ValueError):
    """Unknown language tag or a bad parameter."""


def indexed_alphabet(t: int) -> Tuple[str, ...]:
    return tuple(f"a{i}" for i in range(1, t + 1)) + tuple(f"b{i}" for i in range(1, t + 1))


def balanced_alphabet(t: int) -> Tuple[str, ...]:
    return tuple(chr(ord("a") + i) for i in range(2 * t))


# tag -> (needs parameter, alphabet factory)
_FAMILIES: Dict[str, Tuple[bool, Callable[[Optional[int]], Tuple[str, ...]]]] = {
    "upal": (False, lambda t: ("a", "b")),
    "upal_star": (False, lambda t: ("a", "b")),
    "ijk": (False, lambda t: ("a", "b", "c")),
    "ijk0": (False, lambda t: ("a", "b", "c")),
    "say": (False, lambda t: ("a", "b")),
    "gt": (False, lambda t: ("a", "b")),
    "eq": (True, indexed_alphabet),
    "neq": (True, indexed_alphabet),
    "gt_t": (True, indexed_alphabet),
    "upal_t": (True, lambda t: ("a", "b")),
    "upal_t_strict": (True, lambda t: ("a", "b")),
    "twin": (True, lambda t: ("a", "b", "c")),
    "balanced": (True, balanced_alphabet),
}

_ID_PATTERN = re.compile(r"^\s*([a-z_0-9]+)\s*(?:\(\s*(-?\d+)\s*\))?\s*$")


@dataclass(frozen=True)
class LanguageId:
    tag: str
    t: Optional[int] = None

    def __post_init__(self):
        if self.tag not in _FAMILIES:
            raise LanguageError(f"unknown language {self.tag!r}; known: {', '.join(sorted(_FAMILIES))}")
        needs_param, _ = _FAMILIES[self.tag]
        if needs_param and self.t is None:
            raise LanguageError(f"language {self.tag!r} requires a parameter, e.g. {self.tag}(2)")
        if not needs_param and self.t is not None:
            raise LanguageError(f"language {self.tag!r} takes no parameter")
        if needs_param and self.t < 1:
            raise LanguageError(f"parameter of {self.tag!r} must be >= 1, got {self.t}")

    @classmethod
    def parse(cls, text: str) -> "LanguageId":
        match = _ID_PATTERN.match(str(text))
        if not match:
            raise LanguageError(f"cannot parse language id {text!r}")
        tag, param = match.groups()
        return cls(tag, None if param is None else int(param))

    @property
    def alphabet(self) -> Tuple[str, ...]:
        return _FAMILIES[self.tag][1](self.t)

    def __str__(self) -> str:
        return self.tag if self.t is None else f"{self.tag}({self.t})"


def known_languages() -> Tuple[str, ...]:
    return tuple(sorted(_FAMILIES))


# ── Definitions ──────────────────────────────────────────────────────────

def is_upal(w: str) -> bool:
    n = len(w) // 2
    return len(w) % 2 == 0 and w == "a" * n + "b" * n


def is_upal_star(w: str) -> bool:
    """Split search: w is a concatenation of nonempty a^n b^n blocks."""
    @lru_cache(maxsize=None)
    def from_index(i: int) -> bool:
        if i == len(w):
            return True
        return any(is_upal(w[i:j]) and from_index(j) for j in range(i + 2, len(w) + 1, 2))

    return from_index(0)


def _blocks(w: str, letters: str) -> Optional[Tuple[int, ...]]:
    """Exponents (i1, ..., im) if w = l1^i1 ... lm^im, else None."""
    pattern = "".join(f"({re.escape(c)}*)" for c in letters)
    match = re.fullmatch(pattern, w)
    return None if match is None else tuple(len(g) for g in match.groups())


def is_ijk(w: str, allow_empty: bool = False) -> bool:
    """
    a^i b^j c^k with i, j, k pairwise distinct; blocks nonempty unless allow_empty.

    The oracle tag ``ijk`` uses the nonempty reading; ``ijk0`` is the
    allow_empty one, built by the ``Lijk0_gfa`` builder.
    """
    exps = _blocks(w, "abc")
    if exps is None:
        return False
    i, j, k = exps
    if not allow_empty and min(exps) == 0:
        return False
    return i != j and i != k and j != k


def is_say(w: str) -> bool:
    n = len(w)
    return any(w[i] == "b" and w[n - 1 - i] == "b" for i in range(n))


def _counts(symbols: Sequence[str]) -> Dict[str, int]:
    out: Dict[str, int] = {}
    for s in symbols:
        out[s] = out.get(s, 0) + 1
    return out


def _pairs(symbols: Sequence[str], t: int):
    counts = _counts(symbols)
    return [(counts.get(f"a{i}", 0), counts.get(f"b{i}", 0)) for i in range(1, t + 1)]


def is_eq(symbols: Sequence[str], t: int) -> bool:
    return all(a == b for a, b in _pairs(symbols, t))


def is_neq(symbols: Sequence[str], t: int) -> bool:
    return all(a != b for a, b in _pairs(symbols, t))


def is_gt_t(symbols: Sequence[str], t: int) -> bool:
    return all(a > b for a, b in _pairs(symbols, t))


def is_gt(w: str) -> bool:
    return w.count("a") > w.count("b") > 0


def is_balanced(w: str, t: int) -> bool:
    letters = balanced_alphabet(t)
    return all(w.count(letters[2 * i]) == w.count(letters[2 * i + 1]) for i in range(t))


def _mirrored(blocks: Sequence[str]) -> bool:
    return all(blocks[i] == blocks[-1 - i] for i in range(len(blocks) // 2))


def is_upal_t(w: str, t: int, strict: bool = False) -> bool:
    """a^{n1} b a^{n2} b ... b a^{n2t}; n_i = n_{2t+1-i} (and n_i > 0 when strict)."""
    blocks = w.split("b")
    if len(blocks) != 2 * t:
        return False
    if strict and any(len(b) == 0 for b in blocks):
        return False
    return _mirrored([len(b) for b in blocks])


def is_twin(w: str, t: int) -> bool:
    """w1 c ... c wt c wt c ... c w1 over {a, b}."""
    blocks = w.split("c")
    return len(blocks) == 2 * t and _mirrored(blocks)


def oracle(language: LanguageId, w: Word) -> bool:
    """Exact membership of ``w`` in ``language``."""
    if isinstance(language, str):
        language = LanguageId.parse(language)
    symbols = tokenize(w, language.alphabet)
    text = "".join(symbols)
    tag, t = language.tag, language.t
    if tag == "upal":
        return is_upal(text)
    if tag == "upal_star":
        return is_upal_star(text)
    if tag == "ijk":
        return is_ijk(text)
    if tag == "ijk0":
        return is_ijk(text, allow_empty=True)
    if tag == "say":
        return is_say(text)
    if tag == "gt":
        return is_gt(text)
    if tag == "eq":
        return is_eq(symbols, t)
    if tag == "neq":
        return is_neq(symbols, t)
    if tag == "gt_t":
        return is_gt_t(symbols, t)
    if tag == "upal_t":
        return is_upal_t(text, t)
    if tag == "upal_t_strict":
        return is_upal_t(text, t, strict=True)
    if tag == "twin":
        return is_twin(text, t)
    if tag == "balanced":
        return is_balanced(text, t)
    raise LanguageError(f"no oracle for {language}")

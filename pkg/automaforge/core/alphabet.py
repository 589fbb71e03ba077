"""
Tape symbols and input words.

A word is either a plain ``str`` (tokenized greedily against the declared
alphabet, so ``"a1a2b2"`` reads as ``a1 a2 b2``) or an explicit sequence of
symbols.
"""

from itertools import product
from typing import Iterator, Sequence, Tuple, Union

LEFT_END = "¢"
RIGHT_END = "$"
BLANK = "_"
END_MARKERS = (LEFT_END, RIGHT_END)

Word = Union[str, Sequence[str]]


class InputSymbolError(ValueError):
    """Raised when an input contains a symbol outside the alphabet."""

    def __init__(self, position: int, symbol: str, alphabet: Sequence[str]):
        self.position = position
        self.symbol = symbol
        self.alphabet = tuple(alphabet)
        super().__init__(
            f"symbol {symbol!r} at position {position} is not in alphabet "
            f"{{{', '.join(self.alphabet)}}}"
        )

    def __reduce__(self):
        return type(self), (self.position, self.symbol, self.alphabet)


def tokenize(word: Word, alphabet: Sequence[str]) -> Tuple[str, ...]:
    """Split ``word`` into alphabet symbols, longest match first."""
    if not isinstance(word, str):
        symbols = tuple(word)
        allowed = set(alphabet)
        for i, s in enumerate(symbols):
            if s not in allowed:
                raise InputSymbolError(i, s, alphabet)
        return symbols

    by_length = sorted(set(alphabet), key=lambda s: (-len(s), s))
    out = []
    pos = 0
    while pos < len(word):
        for sym in by_length:
            if word.startswith(sym, pos):
                out.append(sym)
                pos += len(sym)
                break
        else:
            raise InputSymbolError(len(out), word[pos], alphabet)
    return tuple(out)


def tape(symbols: Sequence[str]) -> Tuple[str, ...]:
    """Return the end-marked tape ¢w$."""
    return (LEFT_END, *symbols, RIGHT_END)


def render(symbols: Sequence[str]) -> str:
    return "".join(symbols)


def words(alphabet: Sequence[str], max_len: int) -> Iterator[Tuple[str, ...]]:
    """Yield every word of length <= max_len in length-lexicographic order."""
    ordered = tuple(alphabet)
    for length in range(max_len + 1):
        yield from product(ordered, repeat=length)


def count_words(alphabet: Sequence[str], max_len: int) -> int:
    n = len(alphabet)
    return sum(n ** length for length in range(max_len + 1))

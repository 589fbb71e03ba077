"""
Scalars, sparse vectors and sparse linear maps over configuration keys.

Two scalar regimes are used and never mixed inside one structure:

- ``Rational`` (``fractions.Fraction``) for GFAs and classical probabilities,
  where membership hinges on an exact zero.
- ``Amplitude`` (``complex``) for quantum simulation. Entries whose magnitude
  falls below ``DROP_THRESHOLD`` are dropped after every operation.
"""

import cmath
import math
from collections import defaultdict
from collections.abc import Mapping
from dataclasses import dataclass
from fractions import Fraction
from typing import Any, Dict, Hashable, Iterable, Iterator, List, Sequence, Tuple, Union

import numpy as np
from scipy import sparse

Rational = Fraction
Amplitude = complex
Scalar = Union[Fraction, int, complex]

DROP_THRESHOLD = 1e-15


def is_zero(value: Scalar) -> bool:
    if isinstance(value, complex) or isinstance(value, float):
        return abs(value) < DROP_THRESHOLD
    return value == 0


def sort_key(key: Any) -> Any:
    """Total order over heterogeneous configuration keys."""
    if isinstance(key, tuple):
        return (1, tuple(sort_key(k) for k in key))
    if isinstance(key, (int, Fraction)):
        return (0, key, "")
    return (2, 0, str(key))


def parse_rational(text: Union[str, int, Fraction]) -> Fraction:
    """Parse ``"p/q"`` (or an integer) into a Fraction."""
    try:
        return Fraction(text)
    except (TypeError, ValueError, ZeroDivisionError) as e:
        raise ValueError(f"invalid rational {text!r}: {e}") from None


def format_rational(value: Fraction) -> str:
    value = Fraction(value)
    if value.denominator == 1:
        return str(value.numerator)
    return f"{value.numerator}/{value.denominator}"


class SparseVector(Mapping):
    """Immutable mapping key -> scalar with no stored zeros."""

    __slots__ = ("_entries",)

    def __init__(self, entries: Union[Mapping, Iterable[Tuple[Hashable, Scalar]], None] = None):
        items = entries.items() if isinstance(entries, Mapping) else (entries or ())
        self._entries: Dict[Hashable, Scalar] = {k: v for k, v in items if not is_zero(v)}

    @classmethod
    def unit(cls, key: Hashable, value: Scalar = Fraction(1)) -> "SparseVector":
        return cls({key: value})

    def __getitem__(self, key):
        return self._entries[key]

    def __iter__(self) -> Iterator:
        return iter(self._entries)

    def __len__(self) -> int:
        return len(self._entries)

    def __repr__(self) -> str:
        body = ", ".join(f"{k!r}: {v!r}" for k, v in self.sorted_items())
        return f"SparseVector({{{body}}})"

    def __eq__(self, other) -> bool:
        if isinstance(other, SparseVector):
            return self._entries == other._entries
        return NotImplemented

    def sorted_items(self) -> List[Tuple[Hashable, Scalar]]:
        return sorted(self._entries.items(), key=lambda kv: sort_key(kv[0]))

    def scale(self, factor: Scalar) -> "SparseVector":
        return SparseVector((k, v * factor) for k, v in self._entries.items())

    def __add__(self, other: "SparseVector") -> "SparseVector":
        acc = dict(self._entries)
        for k, v in other.items():
            acc[k] = acc.get(k, 0) + v
        return SparseVector(acc)

    def __sub__(self, other: "SparseVector") -> "SparseVector":
        return self + other.scale(-1)

    def dot(self, other: "SparseVector") -> Scalar:
        """Inner product, conjugate-linear in ``self``."""
        small, large = (self, other) if len(self) <= len(other) else (other, self)
        total: Scalar = 0
        for k in small:
            if k in large:
                a = self._entries[k]
                total += (a.conjugate() if isinstance(a, complex) else a) * other[k]
        return total

    def norm2(self) -> float:
        return sum(abs(v) ** 2 for v in self._entries.values())

    def total(self) -> Scalar:
        return sum(self._entries.values(), 0)


class SparseMap:
    """Immutable linear map stored column-wise: source -> {target: scalar}."""

    __slots__ = ("_columns",)

    def __init__(self, entries: Union[Mapping, Iterable, None] = None):
        items = entries.items() if isinstance(entries, Mapping) else (entries or ())
        columns: Dict[Hashable, Dict[Hashable, Scalar]] = {}
        for (target, source), value in items:
            col = columns.setdefault(source, {})
            col[target] = col.get(target, 0) + value
        self._columns = {
            s: {t: v for t, v in col.items() if not is_zero(v)} for s, col in columns.items()
        }
        self._columns = {s: col for s, col in self._columns.items() if col}

    @classmethod
    def from_columns(cls, columns: Mapping) -> "SparseMap":
        return cls(((t, s), v) for s, col in columns.items() for t, v in col.items())

    @classmethod
    def identity(cls, keys: Iterable[Hashable], one: Scalar = Fraction(1)) -> "SparseMap":
        return cls(((k, k), one) for k in keys)

    def column(self, source: Hashable) -> Mapping:
        return self._columns.get(source, {})

    def sources(self) -> List[Hashable]:
        return list(self._columns)

    def entries(self) -> Iterator[Tuple[Tuple[Hashable, Hashable], Scalar]]:
        for s, col in self._columns.items():
            for t, v in col.items():
                yield (t, s), v

    def sorted_entries(self) -> List[Tuple[Tuple[Hashable, Hashable], Scalar]]:
        return sorted(self.entries(), key=lambda kv: (sort_key(kv[0][0]), sort_key(kv[0][1])))

    def __getitem__(self, key: Tuple[Hashable, Hashable]) -> Scalar:
        target, source = key
        return self._columns.get(source, {}).get(target, 0)

    def __eq__(self, other) -> bool:
        if isinstance(other, SparseMap):
            return self._columns == other._columns
        return NotImplemented

    def __repr__(self) -> str:
        return f"SparseMap({len(self._columns)} columns)"


def apply(linear_map: SparseMap, v: SparseVector) -> SparseVector:
    """result[j] = sum_i map[j, i] * v[i]"""
    acc: Dict[Hashable, Scalar] = defaultdict(int)
    for source, value in v.items():
        for target, a in linear_map.column(source).items():
            acc[target] += a * value
    return SparseVector(acc)


def tensor(x, y):
    """Kronecker product of two vectors or two maps, keyed by (k1, k2)."""
    if isinstance(x, SparseVector) and isinstance(y, SparseVector):
        return SparseVector(((k1, k2), a * b) for k1, a in x.items() for k2, b in y.items())
    if isinstance(x, SparseMap) and isinstance(y, SparseMap):
        return SparseMap(
            (((t1, t2), (s1, s2)), a * b)
            for (t1, s1), a in x.entries()
            for (t2, s2), b in y.entries()
        )
    raise TypeError(f"cannot tensor {type(x).__name__} with {type(y).__name__}")


# ── N-way QFT ────────────────────────────────────────────────────────────

def qft_phase(n: int, j: int, l: int) -> complex:
    """e^{2πi·j·l/n}/√n, with integer turns evaluated as exactly 1."""
    turns = (j * l) % n
    if turns == 0:
        return complex(1 / math.sqrt(n))
    return cmath.exp(2j * math.pi * turns / n) / math.sqrt(n)


def qft_coefficients(n: int) -> np.ndarray:
    """
    N x N QFT matrix. Entry [l-1, j-1] is the amplitude from domain element
    d_j to target r_l; r_N is the distinguished target.
    """
    if n < 2:
        raise ValueError(f"N must be >= 2, got {n}")
    out = np.empty((n, n), dtype=complex)
    for j in range(1, n + 1):
        for l in range(1, n + 1):
            out[l - 1, j - 1] = qft_phase(n, j, l)
    return out


# ── Column orthonormality ────────────────────────────────────────────────

@dataclass(frozen=True)
class ColumnViolation:
    source: Any
    other: Any
    inner_product: complex
    deviation: float

    def __str__(self) -> str:
        if self.source == self.other:
            return f"column {self.source!r} has squared norm {self.inner_product.real:.12g}"
        return (
            f"columns {self.source!r} and {self.other!r} have inner product "
            f"{self.inner_product:.6g}"
        )


@dataclass(frozen=True)
class OrthonormalityReport:
    violations: Tuple[ColumnViolation, ...] = ()

    @property
    def ok(self) -> bool:
        return not self.violations

    def sources(self) -> List[Any]:
        seen = []
        for v in self.violations:
            for s in (v.source, v.other):
                if s not in seen:
                    seen.append(s)
        return seen


def check_columns_orthonormal(
    maps: Sequence[SparseMap], sources: Iterable[Hashable], tol: float = 1e-9
) -> OrthonormalityReport:
    """
    Stack the maps vertically and check that the columns belonging to
    ``sources`` are orthonormal, i.e. sum_w E_w^H E_w = I on that space.

    Returns a report listing every source pair whose Gram entry deviates
    from the Kronecker delta by more than ``tol``.
    """
    if isinstance(sources, (set, frozenset)):
        ordered = sorted(sources, key=sort_key)
    else:
        ordered = list(sources)
    index = {s: i for i, s in enumerate(ordered)}
    n = len(ordered)
    if n == 0:
        return OrthonormalityReport()

    rows: List[int] = []
    cols: List[int] = []
    vals: List[complex] = []
    row_index: Dict[Tuple[int, Hashable], int] = {}
    for m, linear_map in enumerate(maps):
        for s in ordered:
            for t, a in linear_map.column(s).items():
                r = row_index.setdefault((m, t), len(row_index))
                rows.append(r)
                cols.append(index[s])
                vals.append(complex(a))

    stacked = sparse.csr_matrix(
        (vals, (rows, cols)), shape=(max(len(row_index), 1), n), dtype=complex
    )
    gram = (stacked.conj().T @ stacked).tocoo()
    entries: Dict[Tuple[int, int], complex] = {}
    for i, j, v in zip(gram.row, gram.col, gram.data):
        entries[(int(i), int(j))] = entries.get((int(i), int(j)), 0) + complex(v)

    found: List[Tuple[Tuple[int, int], ColumnViolation]] = []
    for i in range(n):
        value = entries.get((i, i), 0j)
        if abs(value - 1) > tol:
            found.append(((i, i), ColumnViolation(ordered[i], ordered[i], value, abs(value - 1))))
    for (i, j), value in entries.items():
        if i < j and abs(value) > tol:
            found.append(((i, j), ColumnViolation(ordered[i], ordered[j], value, abs(value))))
    found.sort(key=lambda item: item[0])
    return OrthonormalityReport(tuple(v for _, v in found))

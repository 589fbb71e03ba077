"""
Single runs and exhaustive sweeps over every machine kind.

Rows come back in length-lexicographic order whatever the worker count,
so the CSV bytes depend only on the machine and the sweep range.
"""

import csv
import io
import multiprocessing
import traceback
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from fractions import Fraction
from functools import partial
from typing import Iterable, List, Optional, Sequence, Tuple, Union

from tqdm import tqdm

from ..automata.bca import RtDkBCA, RtN1BCA, run_dbca, run_nbca
from ..automata.gfa import GFA, gfa_value
from ..automata.languages import LanguageId, oracle
from ..automata.multihead import OneWayKFA, RtP1BCA, run_pkfa, run_rtp1bca
from ..core.alphabet import Word, count_words, render, tokenize, words
from ..core.numerics import format_rational
from ..quantum.runtime import CounterAcceptance, run_oneway, run_realtime
from ..quantum.spec import QMachineSpec, QMode
from ..quantum.state import DEFAULT_COMPONENT_LIMIT
from .machine_file import Machine

Value = Union[Fraction, float, None]

CSV_COLUMNS = ("input", "accept", "reject", "pending", "member")


class SweepError(Exception):
    """Exception raised when evaluating one sweep input fails."""

    def __init__(self, input_word: str, error: Exception, traceback_str: str):
        self.input = input_word
        self.error = error
        self.traceback = traceback_str
        super().__init__(f"input {input_word!r} error: {error}")

    def __reduce__(self):
        return type(self), (self.input, self.error, self.traceback)


@dataclass(frozen=True)
class RunOptions:
    counter_acceptance: CounterAcceptance = CounterAcceptance.REQUIRE_ZERO
    step_cap: Optional[int] = None
    tol: float = 1e-9
    component_limit: int = DEFAULT_COMPONENT_LIMIT


@dataclass(frozen=True)
class SweepRow:
    """One evaluated input. GFA rows carry the value in ``accept``."""

    input: str
    accept: Value
    reject: Value
    pending: Value
    member: Optional[bool] = None
    halted: bool = True

    def cells(self) -> Tuple[str, ...]:
        return (
            self.input,
            format_value(self.accept),
            format_value(self.reject),
            format_value(self.pending),
            "" if self.member is None else str(int(self.member)),
        )


def format_value(value: Value) -> str:
    if value is None:
        return ""
    if isinstance(value, float):
        return f"{value:.12g}"
    return format_rational(value)


def evaluate(machine: Machine, w: Word, options: RunOptions = RunOptions()) -> SweepRow:
    """Run ``machine`` on ``w`` with the semantics of its kind."""
    text = render(tokenize(w, machine.alphabet))
    one = Fraction(1)
    if isinstance(machine, GFA):
        return SweepRow(text, gfa_value(machine, w), None, None)
    if isinstance(machine, QMachineSpec):
        if machine.mode is QMode.ONE_WAY:
            r = run_oneway(machine, w, options.step_cap, options.tol, options.component_limit)
        else:
            r = run_realtime(machine, w, options.counter_acceptance, options.component_limit)
        return SweepRow(text, r.accept, r.reject, r.pending, halted=r.halted)
    if isinstance(machine, RtDkBCA):
        accept = one if run_dbca(machine, w).accepted else Fraction(0)
        return SweepRow(text, accept, one - accept, Fraction(0))
    if isinstance(machine, RtN1BCA):
        accept = one if run_nbca(machine, w) else Fraction(0)
        return SweepRow(text, accept, one - accept, Fraction(0))
    if isinstance(machine, RtP1BCA):
        accept = run_rtp1bca(machine, w)
        return SweepRow(text, accept, one - accept, Fraction(0))
    if isinstance(machine, OneWayKFA):
        r = run_pkfa(machine, w, options.step_cap)
        return SweepRow(text, r.accept, r.reject, r.residue, halted=r.residue == 0)
    raise TypeError(f"not a machine: {type(machine).__name__}")


def _evaluate_chunk(
    machine: Machine,
    options: RunOptions,
    language: Optional[LanguageId],
    chunk: Sequence[Tuple[str, ...]],
) -> List[SweepRow]:
    rows = []
    for symbols in chunk:
        try:
            row = evaluate(machine, symbols, options)
            if language is not None:
                row = SweepRow(row.input, row.accept, row.reject, row.pending, oracle(language, symbols), row.halted)
        except Exception as e:
            raise SweepError(render(symbols), e, traceback.format_exc()) from e
        rows.append(row)
    return rows


def _chunks(items: Iterable, size: int) -> Iterable[List]:
    chunk: List = []
    for item in items:
        chunk.append(item)
        if len(chunk) == size:
            yield chunk
            chunk = []
    if chunk:
        yield chunk


def sweep(
    machine: Machine,
    alphabet: Sequence[str],
    max_len: int,
    language: Optional[Union[LanguageId, str]] = None,
    options: RunOptions = RunOptions(),
    jobs: int = 1,
    progress: bool = False,
    chunk_size: int = 64,
) -> List[SweepRow]:
    """Evaluate every word over ``alphabet`` up to ``max_len``."""
    if max_len < 0:
        raise ValueError(f"max_len must be >= 0, got {max_len}")
    if isinstance(language, str):
        language = LanguageId.parse(language)
    total = count_words(alphabet, max_len)
    chunks = _chunks(words(alphabet, max_len), chunk_size)
    work = partial(_evaluate_chunk, machine, options, language)
    rows: List[SweepRow] = []
    with tqdm(total=total, desc="sweep", unit="word", disable=not progress) as bar:
        if jobs <= 1:
            for chunk in chunks:
                rows.extend(work(chunk))
                bar.update(len(chunk))
        else:
            with ProcessPoolExecutor(
                max_workers=jobs, mp_context=multiprocessing.get_context("spawn")
            ) as pool:
                # map() yields in submission order
                for part in pool.map(work, chunks):
                    rows.extend(part)
                    bar.update(len(part))
    return rows


def rows_to_csv(rows: Iterable[SweepRow]) -> str:
    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator="\n")
    writer.writerow(CSV_COLUMNS)
    for row in rows:
        writer.writerow(row.cells())
    return buffer.getvalue()


def describe_row(row: SweepRow) -> str:
    parts = [f"accept={format_value(row.accept)}"]
    if row.reject is not None:
        parts.append(f"reject={format_value(row.reject)}")
    if row.pending is not None:
        parts.append(f"pending={format_value(row.pending)}")
    return " ".join(parts)


"""
Quantum machine engine: operator materialization, well-formedness checks,
and the realtime / one-way run semantics.

Configurations are ``(state, head position)`` for one-way machines
(positions 1..|w̃|) and ``(state, counter vector)`` for realtime ones.
"""

from dataclasses import dataclass
from enum import Enum
from itertools import product
from typing import Dict, Iterator, List, Optional, Sequence, Tuple

from ..core.alphabet import Word, tape, tokenize
from ..core.numerics import OrthonormalityReport, SparseMap, check_columns_orthonormal
from .spec import Config, MachineSpecError, Move, QMachineSpec, QMode
from .state import DEFAULT_COMPONENT_LIMIT, QuantumState

HALT_THRESHOLD = 1e-12
DEFAULT_TOLERANCE = 1e-9


class CounterAcceptance(str, Enum):
    REQUIRE_ZERO = "require_zero"
    IGNORE = "ignore"


@dataclass(frozen=True)
class RunResult:
    accept: float
    reject: float
    pending: float
    steps: int
    halted: bool = True


def _require_mode(spec: QMachineSpec, mode: QMode) -> None:
    if spec.mode is not mode:
        raise MachineSpecError(f"expected a {mode.value} machine, got {spec.mode.value}")


def counter_bound(spec: QMachineSpec, length: int) -> int:
    return spec.bound * (length + 2)


# ── Columns of E ─────────────────────────────────────────────────────────

def oneway_column(spec: QMachineSpec, tape_symbols: Sequence[str], config: Config):
    q, x = config
    for branch in spec.transitions.get((q, tape_symbols[x - 1]), ()):
        nx = x + 1 if spec.moves[branch.target] is Move.RIGHT else x
        if nx > len(tape_symbols):
            raise MachineSpecError(
                f"head leaves the tape: ({q!r}, {x}) -> {branch.target!r} on {tape_symbols[x - 1]!r}"
            )
        yield branch.register, (branch.target, nx), branch.amplitude


def realtime_column(spec: QMachineSpec, symbol: str, config: Config, bound: int):
    q, counters = config
    for branch in spec.transitions.get((q, symbol), ()):
        moved = tuple(c + u for c, u in zip(counters, branch.update))
        if any(abs(c) > bound for c in moved):
            raise MachineSpecError(
                f"counter leaves bound {bound}: ({q!r}, {counters}) -> {branch.target!r} on {symbol!r}"
            )
        yield branch.register, (branch.target, moved), branch.amplitude


# ── Materialization ──────────────────────────────────────────────────────

@dataclass(frozen=True)
class OperatorFamily:
    """{E_ω} over ``sources``; ``symbol`` is the tape symbol (realtime) or None."""

    symbol: Optional[str]
    operators: Dict[str, SparseMap]
    sources: Tuple[Config, ...]


@dataclass(frozen=True)
class Materialization:
    tape: Tuple[str, ...]
    families: Dict[Optional[str], OperatorFamily]

    def schedule(self) -> List[OperatorFamily]:
        """Families in application order."""
        if None in self.families:
            return [self.families[None]]
        return [self.families[s] for s in self.tape]


def _family(symbol, sources, column) -> OperatorFamily:
    entries: Dict[str, Dict] = {}
    for src in sources:
        for omega, target, amplitude in column(src):
            col = entries.setdefault(omega, {})
            col[(target, src)] = col.get((target, src), 0) + amplitude
    operators = {omega: SparseMap(e) for omega, e in sorted(entries.items())}
    return OperatorFamily(symbol, operators, tuple(sources))


def materialize(spec: QMachineSpec, w: Word) -> Materialization:
    """
    E_ω operators over the full configuration space for ``w``.

    One-way machines get a single time-invariant family. Realtime machines get
    one family per distinct tape symbol; sources range over counters within
    m·(|w|+2) and targets may extend one step past it.
    """
    symbols = tape(tokenize(w, spec.alphabet))
    if spec.mode is QMode.ONE_WAY:
        sources = [(q, x) for x in range(1, len(symbols) + 1) for q in spec.states]
        family = _family(None, sources, lambda c: oneway_column(spec, symbols, c))
        return Materialization(symbols, {None: family})

    bound = counter_bound(spec, len(symbols) - 2)
    span = range(-bound, bound + 1)
    sources = [(q, c) for c in product(span, repeat=spec.counters) for q in spec.states]
    families = {}
    for symbol in dict.fromkeys(symbols):
        families[symbol] = _family(
            symbol, sources, lambda c, s=symbol: realtime_column(spec, s, c, bound + spec.bound)
        )
    return Materialization(symbols, families)


# ── Well-formedness ──────────────────────────────────────────────────────

@dataclass(frozen=True)
class Violation:
    source: object
    other: object
    symbol: str
    deviation: float

    def __str__(self) -> str:
        if self.source == self.other:
            return f"source {self.source!r} on {self.symbol!r}: column norm off by {self.deviation:.3g}"
        return (
            f"sources {self.source!r} and {self.other!r} on {self.symbol!r}: "
            f"columns overlap by {self.deviation:.3g}"
        )


@dataclass(frozen=True)
class WellFormednessReport:
    local: Tuple[Violation, ...] = ()
    global_: Tuple[Violation, ...] = ()

    @property
    def ok(self) -> bool:
        return not self.local and not self.global_

    def lines(self) -> List[str]:
        return [f"local: {v}" for v in self.local] + [f"global: {v}" for v in self.global_]


def _action(spec: QMachineSpec, branch) -> object:
    if spec.mode is QMode.ONE_WAY:
        return spec.moves[branch.target].value
    return branch.update


def check_local(spec: QMachineSpec, tol: float = DEFAULT_TOLERANCE) -> Tuple[Violation, ...]:
    """Per-symbol orthonormality of columns indexed by source state."""
    found: List[Violation] = []
    for symbol in spec.tape_alphabet:
        entries = {}
        for q in spec.states:
            for branch in spec.transitions.get((q, symbol), ()):
                key = ((branch.target, _action(spec, branch), branch.register), q)
                entries[key] = entries.get(key, 0) + branch.amplitude
        report = check_columns_orthonormal([SparseMap(entries)], spec.states, tol)
        found.extend(Violation(v.source, v.other, symbol, v.deviation) for v in report.violations)
    return tuple(found)


def check_well_formed(spec: QMachineSpec, w: Word, tol: float = DEFAULT_TOLERANCE) -> WellFormednessReport:
    """Local check plus Σ_ω E_ω†E_ω = I over the full configuration space for ``w``."""
    local = check_local(spec, tol)
    mat = materialize(spec, w)
    found: List[Violation] = []
    for symbol, family in mat.families.items():
        report: OrthonormalityReport = check_columns_orthonormal(
            list(family.operators.values()), family.sources, tol
        )
        for v in report.violations:
            read = symbol if symbol is not None else mat.tape[v.source[1] - 1]
            found.append(Violation(v.source, v.other, read, v.deviation))
    return WellFormednessReport(local, tuple(found))


# ── Realtime runs ────────────────────────────────────────────────────────

def evolve_realtime(
    spec: QMachineSpec, w: Word, component_limit: int = DEFAULT_COMPONENT_LIMIT
) -> Iterator[Tuple[str, QuantumState]]:
    """Yield (symbol, state after reading it) for each symbol of ¢w$."""
    _require_mode(spec, QMode.REALTIME)
    symbols = tokenize(w, spec.alphabet)
    bound = counter_bound(spec, len(symbols))
    state = QuantumState.pure((spec.initial, (0,) * spec.counters))
    for symbol in tape(symbols):
        parts = state.apply(lambda c, s=symbol: realtime_column(spec, s, c, bound))
        state = QuantumState.merge(parts.values(), component_limit)
        yield symbol, state


def accept_probability(
    spec: QMachineSpec, state: QuantumState, counter_acceptance: CounterAcceptance
) -> float:
    zero = (0,) * spec.counters
    if CounterAcceptance(counter_acceptance) is CounterAcceptance.IGNORE:
        return state.probability(lambda c: c[0] in spec.accepting)
    return state.probability(lambda c: c[0] in spec.accepting and c[1] == zero)


def run_realtime_conventions(
    spec: QMachineSpec,
    w: Word,
    conventions: Sequence[CounterAcceptance] = tuple(CounterAcceptance),
    component_limit: int = DEFAULT_COMPONENT_LIMIT,
) -> Dict[CounterAcceptance, RunResult]:
    """One evolution, measured under each counter-acceptance convention."""
    steps = 0
    state = None
    for _, state in evolve_realtime(spec, w, component_limit):
        steps += 1
    out = {}
    for convention in conventions:
        accept = accept_probability(spec, state, convention)
        out[CounterAcceptance(convention)] = RunResult(accept, 1.0 - accept, 0.0, steps)
    return out


def run_realtime(
    spec: QMachineSpec,
    w: Word,
    counter_acceptance: CounterAcceptance = CounterAcceptance.REQUIRE_ZERO,
    component_limit: int = DEFAULT_COMPONENT_LIMIT,
) -> RunResult:
    convention = CounterAcceptance(counter_acceptance)
    return run_realtime_conventions(spec, w, (convention,), component_limit)[convention]


# ── One-way runs ─────────────────────────────────────────────────────────

def default_step_cap(spec: QMachineSpec, length: int) -> int:
    return (len(spec.states) + 2) * (length + 2)


@dataclass(frozen=True)
class OneWayStep:
    step: int
    accept: float
    reject: float
    state: QuantumState


def evolve_oneway(
    spec: QMachineSpec,
    w: Word,
    step_cap: Optional[int] = None,
    component_limit: int = DEFAULT_COMPONENT_LIMIT,
) -> Iterator[OneWayStep]:
    """
    Yield cumulative accept/reject mass and the surviving state after every
    step, until the pending mass drops below the halt threshold or the cap.
    """
    _require_mode(spec, QMode.ONE_WAY)
    symbols = tape(tokenize(w, spec.alphabet))
    cap = step_cap if step_cap is not None else default_step_cap(spec, len(symbols) - 2)
    if cap < 1:
        raise ValueError(f"step_cap must be >= 1, got {cap}")
    state = QuantumState.pure((spec.initial, 1))
    accept = reject = 0.0
    for step in range(1, cap + 1):
        parts = state.apply(lambda c: oneway_column(spec, symbols, c))
        neutral = []
        for omega, part in parts.items():
            if omega in spec.accepting_register:
                accept += part.trace()
            elif omega in spec.rejecting_register:
                reject += part.trace()
            else:
                neutral.append(part)
        state = QuantumState.merge(neutral, component_limit)
        yield OneWayStep(step, accept, reject, state)
        if state.trace() < HALT_THRESHOLD:
            return


def run_oneway(
    spec: QMachineSpec,
    w: Word,
    step_cap: Optional[int] = None,
    tol: float = DEFAULT_TOLERANCE,
    component_limit: int = DEFAULT_COMPONENT_LIMIT,
) -> RunResult:
    last = None
    for last in evolve_oneway(spec, w, step_cap, component_limit):
        pass
    pending = last.state.trace()
    return RunResult(last.accept, last.reject, pending, last.step, halted=pending < tol)


def run_quantum(spec: QMachineSpec, w: Word, **options) -> RunResult:
    """Dispatch on the machine mode."""
    if spec.mode is QMode.ONE_WAY:
        return run_oneway(
            spec,
            w,
            step_cap=options.get("step_cap"),
            tol=options.get("tol", DEFAULT_TOLERANCE),
            component_limit=options.get("component_limit", DEFAULT_COMPONENT_LIMIT),
        )
    return run_realtime(
        spec,
        w,
        counter_acceptance=options.get("counter_acceptance", CounterAcceptance.REQUIRE_ZERO),
        component_limit=options.get("component_limit", DEFAULT_COMPONENT_LIMIT),
    )

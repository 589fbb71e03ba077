"""
Declarative description of a quantum machine.

Two modes share one transition table shape, (q, σ̃) -> list of branches:

- ``qfa_oneway``: every state carries a move tag (stay / right) that applies
  when the state is entered; the register alphabet is partitioned into
  accepting, rejecting and neutral symbols that drive halting.
- ``qbca_realtime``: the head moves right every step, branches carry a
  counter update vector, and acceptance is decided after $.

Amplitudes are kept symbolically (exact rational part times a product of
QFT phases) so machine files reproduce the construction exactly.
"""

from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction
from functools import cached_property
from typing import Dict, FrozenSet, List, Mapping, NamedTuple, Optional, Sequence, Tuple

from ..core.alphabet import LEFT_END, RIGHT_END
from ..core.numerics import qft_phase

Config = Tuple  # (state, position) or (state, counter vector)


class MachineSpecError(ValueError):
    """Malformed quantum machine, or a run that leaves its configuration space."""


class QMode(str, Enum):
    ONE_WAY = "qfa_oneway"
    REALTIME = "qbca_realtime"


class Move(str, Enum):
    STAY = "stay"
    RIGHT = "right"


SINK = "sink"


@dataclass(frozen=True)
class Coefficient:
    """(re + i·im) · prod of e^{2πi·j·l/N}/√N factors."""

    re: Fraction = Fraction(1)
    im: Fraction = Fraction(0)
    phases: Tuple[Tuple[int, int, int], ...] = ()

    @classmethod
    def rational(cls, value) -> "Coefficient":
        return cls(re=Fraction(value))

    @classmethod
    def phase(cls, n: int, j: int, l: int) -> "Coefficient":
        if n < 2:
            raise MachineSpecError(f"QFT size must be >= 2, got {n}")
        if not (0 <= j <= n and 0 <= l <= n):
            raise MachineSpecError(f"QFT indices must lie in 0..{n}, got j={j}, l={l}")
        return cls(phases=((n, j, l),))

    @classmethod
    def root(cls, n: int) -> "Coefficient":
        """1/√n, the equal-amplitude split."""
        return cls.phase(n, 0, 0)

    def __mul__(self, other: "Coefficient") -> "Coefficient":
        return Coefficient(
            re=self.re * other.re - self.im * other.im,
            im=self.re * other.im + self.im * other.re,
            phases=self.phases + other.phases,
        )

    @cached_property
    def value(self) -> complex:
        out = complex(float(self.re), float(self.im))
        for n, j, l in self.phases:
            out *= qft_phase(n, j, l)
        return out


ONE = Coefficient()


@dataclass(frozen=True)
class Branch:
    """One summand α(p, d or c, ω) of a transition."""

    coefficient: Coefficient
    target: str
    register: str
    update: Optional[Tuple[int, ...]] = None

    @property
    def amplitude(self) -> complex:
        return self.coefficient.value


class Target(NamedTuple):
    """Target template for QFT blocks: a state entered while writing ``register``."""

    state: str
    register: str
    update: Optional[Tuple[int, ...]] = None


Transitions = Mapping[Tuple[str, str], Tuple[Branch, ...]]


@dataclass(frozen=True)
class QMachineSpec:
    mode: QMode
    states: Tuple[str, ...]
    initial: str
    alphabet: Tuple[str, ...]
    register: Tuple[str, ...]
    register_initial: str
    transitions: Transitions
    # one-way
    moves: Mapping[str, Move] = field(default_factory=dict)
    accepting_register: FrozenSet[str] = frozenset()
    rejecting_register: FrozenSet[str] = frozenset()
    # realtime
    accepting: FrozenSet[str] = frozenset()
    counters: int = 0
    bound: int = 1
    sink: Optional[str] = None
    language: Optional[str] = field(default=None, compare=False)

    def __post_init__(self):
        known = set(self.states)
        if len(known) != len(self.states):
            raise MachineSpecError("duplicate state names")
        if self.initial not in known:
            raise MachineSpecError(f"initial state {self.initial!r} is not a state")
        if self.register_initial not in self.register:
            raise MachineSpecError(f"initial register symbol {self.register_initial!r} is not declared")
        if self.sink is not None and self.sink not in known:
            raise MachineSpecError(f"sink {self.sink!r} is not a state")
        symbols = set(self.tape_alphabet)
        omegas = set(self.register)

        if self.mode is QMode.ONE_WAY:
            missing = [q for q in self.states if q not in self.moves]
            if missing:
                raise MachineSpecError(f"states without move tag: {missing}")
            if self.accepting_register & self.rejecting_register:
                raise MachineSpecError("a register symbol cannot be both accepting and rejecting")
            if not (self.accepting_register | self.rejecting_register) <= omegas:
                raise MachineSpecError("register partition names undeclared symbols")
        else:
            if self.counters < 1:
                raise MachineSpecError(f"realtime machines need >= 1 counter, got {self.counters}")
            if self.bound < 1:
                raise MachineSpecError(f"update bound must be >= 1, got {self.bound}")
            if not self.accepting <= known:
                raise MachineSpecError(f"unknown accepting states {sorted(self.accepting - known)}")

        for (q, symbol), branches in self.transitions.items():
            where = f"transition ({q!r}, {symbol!r})"
            if q not in known:
                raise MachineSpecError(f"{where}: unknown source state")
            if symbol not in symbols:
                raise MachineSpecError(f"{where}: unknown tape symbol")
            for b in branches:
                if b.target not in known:
                    raise MachineSpecError(f"{where}: unknown target {b.target!r}")
                if b.register not in omegas:
                    raise MachineSpecError(f"{where}: undeclared register symbol {b.register!r}")
                if self.mode is QMode.REALTIME:
                    if b.update is None or len(b.update) != self.counters:
                        raise MachineSpecError(f"{where}: update must have {self.counters} entries")
                    if any(abs(c) > self.bound for c in b.update):
                        raise MachineSpecError(f"{where}: update {b.update} exceeds bound {self.bound}")
                elif b.update is not None:
                    raise MachineSpecError(f"{where}: one-way branches carry no counter update")

    @property
    def tape_alphabet(self) -> Tuple[str, ...]:
        return (LEFT_END, *self.alphabet, RIGHT_END)

    @property
    def neutral_register(self) -> FrozenSet[str]:
        return frozenset(self.register) - self.accepting_register - self.rejecting_register

    @property
    def core_states(self) -> Tuple[str, ...]:
        """States of the construction itself, without the completion sink."""
        return tuple(q for q in self.states if q != self.sink)

    @property
    def branch_count(self) -> int:
        return sum(len(b) for b in self.transitions.values())

    def missing_entries(self) -> List[Tuple[str, str]]:
        return [
            (q, s) for q in self.states for s in self.tape_alphabet if (q, s) not in self.transitions
        ]


def register_symbols(*groups: Sequence[str]) -> Tuple[str, ...]:
    out: List[str] = []
    for group in groups:
        for s in group:
            if s not in out:
                out.append(s)
    return tuple(out)


def complete_transitions(spec: QMachineSpec) -> QMachineSpec:
    """
    Fill every absent (q, σ̃) with a single amplitude-1 branch into the sink.

    Each source state gets its own fresh register symbol, rejecting in
    one-way mode; the sink is absorbing and non-accepting, and its own
    missing entries are completed the same way.
    """
    if not spec.missing_entries():
        return spec
    sink = spec.sink or SINK
    states = spec.states if sink in spec.states else spec.states + (sink,)
    moves = dict(spec.moves)
    if spec.mode is QMode.ONE_WAY:
        moves.setdefault(sink, Move.STAY)
    transitions: Dict[Tuple[str, str], Tuple[Branch, ...]] = dict(spec.transitions)
    fresh: List[str] = []
    tape_alphabet = spec.tape_alphabet
    for q in states:
        for symbol in tape_alphabet:
            if (q, symbol) in transitions:
                continue
            if spec.mode is QMode.ONE_WAY:
                omega = f"ωr[{q}]"
                branch = Branch(ONE, sink, omega)
            else:
                omega = f"ω[{q}]"
                branch = Branch(ONE, sink, omega, (0,) * spec.counters)
            if omega not in fresh:
                fresh.append(omega)
            transitions[(q, symbol)] = (branch,)

    rejecting = spec.rejecting_register
    if spec.mode is QMode.ONE_WAY:
        rejecting = rejecting | frozenset(fresh)
    return QMachineSpec(
        mode=spec.mode,
        states=states,
        initial=spec.initial,
        alphabet=spec.alphabet,
        register=register_symbols(spec.register, fresh),
        register_initial=spec.register_initial,
        transitions=transitions,
        moves=moves,
        accepting_register=spec.accepting_register,
        rejecting_register=rejecting,
        accepting=spec.accepting,
        counters=spec.counters,
        bound=spec.bound,
        sink=sink,
        language=spec.language,
    )

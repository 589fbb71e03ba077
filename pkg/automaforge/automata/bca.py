"""
Realtime blind-counter automata: deterministic k-counter and nondeterministic
one-counter runtimes, the two normal forms, and the compiler into GFAs.

Machines read the end-marked tape ¢w$ one symbol per step. A run accepts iff
it ends in an accepting state with every counter at zero. Transitions on ¢
and $ are part of every machine description.
"""

from collections import deque
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, FrozenSet, List, Mapping, NamedTuple, Optional, Tuple

from ..core.alphabet import LEFT_END, RIGHT_END, Word, tape, tokenize
from ..core.numerics import SparseMap, SparseVector
from .gfa import GFA, ConstructionError, gfa_tensor

Update = Tuple[int, ...]


def tape_symbols(alphabet: Tuple[str, ...]) -> Tuple[str, ...]:
    return (LEFT_END, *alphabet, RIGHT_END)


def format_update(update: Update) -> str:
    return ",".join(f"{c:+d}" for c in update)


@dataclass(frozen=True)
class RtDkBCA:
    """Realtime deterministic automaton with k blind counters."""

    states: Tuple[str, ...]
    initial: str
    accepting: FrozenSet[str]
    k: int
    alphabet: Tuple[str, ...]
    transitions: Mapping[Tuple[str, str], Tuple[str, Update]]
    language: Optional[str] = field(default=None, compare=False)

    def __post_init__(self):
        if self.k < 1:
            raise ConstructionError(f"counter count must be >= 1, got {self.k}")
        known = set(self.states)
        if self.initial not in known:
            raise ConstructionError(f"initial state {self.initial!r} is not a state")
        if not self.accepting <= known:
            raise ConstructionError(f"unknown accepting states {sorted(self.accepting - known)}")
        for q in self.states:
            for symbol in tape_symbols(self.alphabet):
                entry = self.transitions.get((q, symbol))
                if entry is None:
                    raise ConstructionError(f"missing transition for ({q!r}, {symbol!r})")
                target, update = entry
                if target not in known:
                    raise ConstructionError(f"transition ({q!r}, {symbol!r}) targets unknown {target!r}")
                if len(update) != self.k:
                    raise ConstructionError(
                        f"transition ({q!r}, {symbol!r}) has {len(update)} counter updates, expected {self.k}"
                    )

    @property
    def m(self) -> int:
        return max([1] + [abs(c) for _, u in self.transitions.values() for c in u])


@dataclass(frozen=True)
class RtN1BCA:
    """Realtime nondeterministic one-counter automaton; empty sets are dead paths."""

    states: Tuple[str, ...]
    initial: str
    accepting: FrozenSet[str]
    alphabet: Tuple[str, ...]
    transitions: Mapping[Tuple[str, str], Tuple[Tuple[str, int], ...]]
    language: Optional[str] = field(default=None, compare=False)

    def __post_init__(self):
        known = set(self.states)
        if self.initial not in known:
            raise ConstructionError(f"initial state {self.initial!r} is not a state")
        for (q, symbol), choices in self.transitions.items():
            if q not in known or symbol not in tape_symbols(self.alphabet):
                raise ConstructionError(f"transition key ({q!r}, {symbol!r}) is not valid")
            for target, _ in choices:
                if target not in known:
                    raise ConstructionError(f"transition ({q!r}, {symbol!r}) targets unknown {target!r}")

    @property
    def m(self) -> int:
        return max([1] + [abs(c) for choices in self.transitions.values() for _, c in choices])


class DBCARun(NamedTuple):
    state: str
    counters: Update
    accepted: bool


def run_dbca(machine: RtDkBCA, w: Word) -> DBCARun:
    state = machine.initial
    counters = [0] * machine.k
    for symbol in tape(tokenize(w, machine.alphabet)):
        state, update = machine.transitions[(state, symbol)]
        for i, c in enumerate(update):
            counters[i] += c
    accepted = state in machine.accepting and not any(counters)
    return DBCARun(state, tuple(counters), accepted)


def run_nbca(machine: RtN1BCA, w: Word) -> bool:
    """Reachability over (state, counter) configurations."""
    symbols = tokenize(w, machine.alphabet)
    bound = machine.m * (len(symbols) + 2)
    configs = {(machine.initial, 0)}
    for symbol in tape(symbols):
        step = set()
        for q, c in configs:
            for target, update in machine.transitions.get((q, symbol), ()):
                if abs(c + update) <= bound:
                    step.add((target, c + update))
        configs = step
        if not configs:
            return False
    return any(q in machine.accepting and c == 0 for q, c in configs)


def build_lsay_nbca() -> RtN1BCA:
    """
    L_say: some b at index i and some b at index j with i = |w|-1-j.

    Phase states: ``before`` counts every symbol before the first chosen b,
    ``between`` idles, ``after`` decrements on every symbol after the second
    chosen b. The same b may be chosen twice.
    """
    before, between, after = "before", "between", "after"
    transitions = {
        (before, LEFT_END): ((before, 0),),
        (before, "a"): ((before, 1),),
        (before, "b"): ((before, 1), (between, 0), (after, 0)),
        (between, "a"): ((between, 0),),
        (between, "b"): ((between, 0), (after, 0)),
        (after, "a"): ((after, -1),),
        (after, "b"): ((after, -1),),
        (before, RIGHT_END): ((before, 0),),
        (between, RIGHT_END): ((between, 0),),
        (after, RIGHT_END): ((after, 0),),
    }
    return RtN1BCA(
        states=(before, between, after),
        initial=before,
        accepting=frozenset({after}),
        alphabet=("a", "b"),
        transitions=transitions,
        language="say",
    )


def balanced_dbca(k: int = 1) -> RtDkBCA:
    """
    One-state machine over 2k letters; letter 2i increments counter i and
    letter 2i+1 decrements it. k=1 is M_bal over {a, b}.
    """
    if not 1 <= k <= 13:
        raise ConstructionError(f"k must be in [1, 13], got {k}")
    letters = tuple(chr(ord("a") + i) for i in range(2 * k))
    zero = (0,) * k
    transitions: Dict[Tuple[str, str], Tuple[str, Update]] = {
        ("q1", LEFT_END): ("q1", zero),
        ("q1", RIGHT_END): ("q1", zero),
    }
    for i in range(k):
        for sign, letter in ((1, letters[2 * i]), (-1, letters[2 * i + 1])):
            update = [0] * k
            update[i] = sign
            transitions[("q1", letter)] = ("q1", tuple(update))
    return RtDkBCA(
        states=("q1",),
        initial="q1",
        accepting=frozenset({"q1"}),
        k=k,
        alphabet=letters,
        transitions=transitions,
        language=f"balanced({k})",
    )


# ── Normal forms ─────────────────────────────────────────────────────────

def residue_step(residue: Update, update: Update, m: int) -> Tuple[Update, Update]:
    """
    Counter value C is kept as m*C' + r with 0 <= r < m. Adding ``update``
    (each |c| <= m) returns the new residue and the unit update of C'.
    """
    new_residue = []
    carry = []
    for r, c in zip(residue, update):
        total = r + c
        new_residue.append(total % m)
        carry.append(total // m)
    return tuple(new_residue), tuple(carry)


def residue_state(q: str, residue: Update) -> str:
    return f"{q}%{','.join(str(r) for r in residue)}"


def has_unit_updates(machine: RtDkBCA) -> bool:
    return machine.m == 1


def normalize_updates(machine: RtDkBCA) -> RtDkBCA:
    """
    Equivalent machine with updates in {-1, 0, 1}.

    The residue of each counter modulo m moves into the finite state, so the
    result stays realtime and accepts exactly the same words.
    """
    if has_unit_updates(machine):
        return machine
    m = machine.m
    start = (machine.initial, (0,) * machine.k)
    seen = {start: residue_state(*start)}
    queue = deque([start])
    transitions = {}
    while queue:
        q, residue = queue.popleft()
        name = seen[(q, residue)]
        for symbol in tape_symbols(machine.alphabet):
            target, update = machine.transitions[(q, symbol)]
            new_residue, carry = residue_step(residue, update, m)
            key = (target, new_residue)
            if key not in seen:
                seen[key] = residue_state(*key)
                queue.append(key)
            transitions[(name, symbol)] = (seen[key], carry)
    zero = (0,) * machine.k
    return RtDkBCA(
        states=tuple(seen.values()),
        initial=seen[start],
        accepting=frozenset(
            name for (q, r), name in seen.items() if q in machine.accepting and r == zero
        ),
        k=machine.k,
        alphabet=machine.alphabet,
        transitions=transitions,
        language=machine.language,
    )


def entering_updates(machine: RtDkBCA) -> Dict[str, set]:
    entering: Dict[str, set] = {}
    for target, update in machine.transitions.values():
        entering.setdefault(target, set()).add(update)
    return entering


def is_state_determined(machine: RtDkBCA) -> bool:
    return all(len(updates) == 1 for updates in entering_updates(machine).values())


def state_determine_updates(machine: RtDkBCA) -> RtDkBCA:
    """
    Product with the last update vector: state (q, c) is entered only by
    transitions carrying c. Only states reachable from (q1, 0) are kept.
    """
    def name(q: str, update: Update) -> str:
        return f"{q}|{format_update(update)}"

    start = (machine.initial, (0,) * machine.k)
    seen = {start: name(*start)}
    queue = deque([start])
    transitions = {}
    while queue:
        q, last = queue.popleft()
        for symbol in tape_symbols(machine.alphabet):
            target, update = machine.transitions[(q, symbol)]
            key = (target, update)
            if key not in seen:
                seen[key] = name(*key)
                queue.append(key)
            transitions[(seen[(q, last)], symbol)] = (seen[key], update)
    return RtDkBCA(
        states=tuple(seen.values()),
        initial=seen[start],
        accepting=frozenset(n for (q, _), n in seen.items() if q in machine.accepting),
        k=machine.k,
        alphabet=machine.alphabet,
        transitions=transitions,
        language=machine.language,
    )


# ── Compiler ─────────────────────────────────────────────────────────────

def counter_primes(k: int) -> List[int]:
    """The first k primes, by trial division."""
    primes: List[int] = []
    candidate = 2
    while len(primes) < k:
        if all(candidate % p for p in primes if p * p <= candidate):
            primes.append(candidate)
        candidate += 1
    return primes


def compile_to_gfa(machine: RtDkBCA) -> GFA:
    """
    GFA with value prod_l p_l^{C[l]} - 1 when the run ends accepting with
    counters C, and -1 when it ends in a non-accepting state.

    Zero-one transition matrices are scaled row-wise by prod_l p_l^{c[l]} for
    the update c entering each state, then bordered with a constant state
    that carries the -1.
    """
    if not has_unit_updates(machine):
        raise ConstructionError("updates must lie in {-1, 0, 1}; apply normalize_updates first")
    if not is_state_determined(machine):
        raise ConstructionError(
            "transitions entering a state carry different updates; apply state_determine_updates first"
        )

    order = [machine.initial] + [q for q in machine.states if q != machine.initial]
    index = {q: i for i, q in enumerate(order)}
    border = len(order)
    primes = counter_primes(machine.k)
    scale = {q: Fraction(1) for q in order}
    for target, updates in entering_updates(machine).items():
        (update,) = updates
        value = Fraction(1)
        for p, c in zip(primes, update):
            value *= Fraction(p) ** c
        scale[target] = value

    def bordered(symbol: str) -> SparseMap:
        entries = {(border, border): Fraction(1)}
        for q in order:
            target, _ = machine.transitions[(q, symbol)]
            entries[(index[target], index[q])] = scale[target]
        return SparseMap(entries)

    start_target, _ = machine.transitions[(machine.initial, LEFT_END)]
    initial = SparseVector({index[start_target]: scale[start_target], border: Fraction(-1)})

    final_entries = {border: Fraction(1)}
    for q in order:
        target, _ = machine.transitions[(q, RIGHT_END)]
        if target in machine.accepting:
            final_entries[index[q]] = scale[target]

    return GFA(
        n=border + 1,
        alphabet=machine.alphabet,
        matrices={s: bordered(s) for s in machine.alphabet},
        initial=initial,
        final=SparseVector(final_entries),
    )


def complement_witness_gfa(machine: RtDkBCA) -> GFA:
    """G ⊗ G: zero exactly on accepted words, positive elsewhere."""
    g = compile_to_gfa(machine)
    return gfa_tensor(g, g).with_language(machine.language)


def compile_pipeline(machine: RtDkBCA) -> Tuple[GFA, List[int]]:
    """Normalize, state-determine, compile and square; returns (G², primes)."""
    ready = state_determine_updates(normalize_updates(machine))
    return complement_witness_gfa(ready), counter_primes(ready.k)

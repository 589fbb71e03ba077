"""
One-way multihead automata with exact rational probabilities, the realtime
probabilistic one-counter machine, the three-head simulation of such a
machine, and the machines for the twin languages.

Heads read the tape ¢w$_ (one blank square after $) and never move left.
"""

from collections import defaultdict, deque
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Dict, FrozenSet, Iterable, List, Mapping, NamedTuple, Optional, Sequence, Tuple

from ..core.alphabet import BLANK, LEFT_END, RIGHT_END, Word, tape, tokenize
from .bca import RtDkBCA, residue_state, residue_step, tape_symbols
from .gfa import ConstructionError

WILDCARD = "*"
ACCEPT = "accept"
REJECT = "reject"

Moves = Tuple[int, ...]


# ── One-way k-head machines ──────────────────────────────────────────────

class Outcome(NamedTuple):
    probability: Fraction
    target: str
    moves: Moves


@dataclass(frozen=True)
class Rule:
    """Symbol pattern (``*`` matches anything) and the distribution it fires."""

    pattern: Tuple[str, ...]
    outcomes: Tuple[Outcome, ...]

    def matches(self, symbols: Sequence[str]) -> bool:
        return all(p == WILDCARD or p == s for p, s in zip(self.pattern, symbols))


def deterministic(pattern: Sequence[str], target: str, moves: Sequence[int]) -> Rule:
    return Rule(tuple(pattern), (Outcome(Fraction(1), target, tuple(moves)),))


@dataclass(frozen=True)
class OneWayKFA:
    heads: int
    states: Tuple[str, ...]
    initial: str
    verdicts: Mapping[str, bool]
    alphabet: Tuple[str, ...]
    rules: Mapping[str, Tuple[Rule, ...]]
    language: Optional[str] = field(default=None, compare=False)

    def __post_init__(self):
        if self.heads < 1:
            raise ConstructionError(f"heads must be >= 1, got {self.heads}")
        known = set(self.states)
        if self.initial not in known:
            raise ConstructionError(f"initial state {self.initial!r} is not a state")
        if not set(self.verdicts) <= known:
            raise ConstructionError(f"verdicts name unknown states {sorted(set(self.verdicts) - known)}")
        readable = set(self.alphabet) | {LEFT_END, RIGHT_END, BLANK, WILDCARD}
        for q, rules in self.rules.items():
            if q not in known:
                raise ConstructionError(f"rules for unknown state {q!r}")
            if q in self.verdicts:
                raise ConstructionError(f"halting state {q!r} cannot have rules")
            for rule in rules:
                if len(rule.pattern) != self.heads:
                    raise ConstructionError(f"state {q!r}: pattern {rule.pattern} needs {self.heads} symbols")
                if not set(rule.pattern) <= readable:
                    raise ConstructionError(f"state {q!r}: pattern {rule.pattern} has unknown symbols")
                total = sum((o.probability for o in rule.outcomes), Fraction(0))
                if total != 1:
                    raise ConstructionError(f"state {q!r}: outcome probabilities of {rule.pattern} sum to {total}")
                for o in rule.outcomes:
                    if o.probability <= 0:
                        raise ConstructionError(f"state {q!r}: non-positive probability {o.probability}")
                    if o.target not in known:
                        raise ConstructionError(f"state {q!r}: unknown target {o.target!r}")
                    if len(o.moves) != self.heads or not set(o.moves) <= {0, 1}:
                        raise ConstructionError(f"state {q!r}: moves {o.moves} must be {self.heads} values in {{0, 1}}")

    @property
    def is_deterministic(self) -> bool:
        return all(len(r.outcomes) == 1 for rules in self.rules.values() for r in rules)

    def rule_for(self, q: str, symbols: Sequence[str]) -> Optional[Rule]:
        for rule in self.rules.get(q, ()):
            if rule.matches(symbols):
                return rule
        return None


class PKFARun(NamedTuple):
    accept: Fraction
    reject: Fraction
    residue: Fraction
    steps: int


def default_kfa_step_cap(machine: OneWayKFA, length: int) -> int:
    return (len(machine.states) + 1) * (machine.heads * (length + 3) + 1)


def run_pkfa(machine: OneWayKFA, w: Word, step_cap: Optional[int] = None) -> PKFARun:
    """
    Exact evolution of the distribution over (state, head positions).

    A live configuration with no matching rule rejects. Mass still live
    after ``step_cap`` steps is returned as the residue.
    """
    symbols = tokenize(w, machine.alphabet)
    cells = tape(symbols) + (BLANK,)
    cap = step_cap if step_cap is not None else default_kfa_step_cap(machine, len(symbols))
    if cap < 1:
        raise ValueError(f"step_cap must be >= 1, got {cap}")

    live: Dict[Tuple[str, Moves], Fraction] = {(machine.initial, (0,) * machine.heads): Fraction(1)}
    accept = reject = Fraction(0)
    steps = 0

    def settle():
        nonlocal accept, reject
        for config in [c for c in live if c[0] in machine.verdicts]:
            p = live.pop(config)
            if machine.verdicts[config[0]]:
                accept += p
            else:
                reject += p

    while steps < cap:
        settle()
        if not live:
            break
        nxt: Dict[Tuple[str, Moves], Fraction] = defaultdict(Fraction)
        for (q, positions), p in live.items():
            read = tuple(cells[x] for x in positions)
            rule = machine.rule_for(q, read)
            if rule is None:
                reject += p
                continue
            for o in rule.outcomes:
                moved = tuple(x + d for x, d in zip(positions, o.moves))
                if max(moved) >= len(cells):
                    raise ConstructionError(f"state {q!r} moves a head past the blank after $ on {read}")
                nxt[(o.target, moved)] += p * o.probability
        live = dict(nxt)
        steps += 1
    settle()
    return PKFARun(accept, reject, sum(live.values(), Fraction(0)), steps)


# ── Probabilistic realtime one-counter machines ──────────────────────────

class PBranch(NamedTuple):
    probability: Fraction
    target: str
    update: int


@dataclass(frozen=True)
class RtP1BCA:
    states: Tuple[str, ...]
    initial: str
    accepting: FrozenSet[str]
    alphabet: Tuple[str, ...]
    transitions: Mapping[Tuple[str, str], Tuple[PBranch, ...]]
    language: Optional[str] = field(default=None, compare=False)

    def __post_init__(self):
        known = set(self.states)
        if self.initial not in known:
            raise ConstructionError(f"initial state {self.initial!r} is not a state")
        if not self.accepting <= known:
            raise ConstructionError(f"unknown accepting states {sorted(self.accepting - known)}")
        for q in self.states:
            for symbol in tape_symbols(self.alphabet):
                branches = self.transitions.get((q, symbol))
                if not branches:
                    raise ConstructionError(f"missing transition for ({q!r}, {symbol!r})")
                total = sum((b.probability for b in branches), Fraction(0))
                if total != 1:
                    raise ConstructionError(f"transition ({q!r}, {symbol!r}) probabilities sum to {total}")
                for b in branches:
                    if b.target not in known:
                        raise ConstructionError(f"transition ({q!r}, {symbol!r}) targets unknown {b.target!r}")

    @property
    def m(self) -> int:
        return max([1] + [abs(b.update) for branches in self.transitions.values() for b in branches])


def run_rtp1bca(machine: RtP1BCA, w: Word) -> Fraction:
    """Probability of ending in an accepting state with the counter at zero."""
    dist: Dict[Tuple[str, int], Fraction] = {(machine.initial, 0): Fraction(1)}
    for symbol in tape(tokenize(w, machine.alphabet)):
        nxt: Dict[Tuple[str, int], Fraction] = defaultdict(Fraction)
        for (q, c), p in dist.items():
            for b in machine.transitions[(q, symbol)]:
                nxt[(b.target, c + b.update)] += p * b.probability
        dist = dict(nxt)
    return sum((p for (q, c), p in dist.items() if q in machine.accepting and c == 0), Fraction(0))


def normalize_pbca(machine: RtP1BCA) -> RtP1BCA:
    """Unit-update equivalent; the counter residue modulo m moves into the state."""
    m = machine.m
    if m == 1:
        return machine
    start = (machine.initial, (0,))
    seen = {start: residue_state(*start)}
    queue = deque([start])
    transitions = {}
    while queue:
        q, residue = queue.popleft()
        for symbol in tape_symbols(machine.alphabet):
            merged: Dict[Tuple[str, int], Fraction] = defaultdict(Fraction)
            for b in machine.transitions[(q, symbol)]:
                new_residue, (carry,) = residue_step(residue, (b.update,), m)
                key = (b.target, new_residue)
                if key not in seen:
                    seen[key] = residue_state(*key)
                    queue.append(key)
                merged[(seen[key], carry)] += b.probability
            transitions[(seen[(q, residue)], symbol)] = tuple(
                PBranch(p, target, carry) for (target, carry), p in merged.items()
            )
    return RtP1BCA(
        states=tuple(seen.values()),
        initial=seen[start],
        accepting=frozenset(n for (q, r), n in seen.items() if q in machine.accepting and r == (0,)),
        alphabet=machine.alphabet,
        transitions=transitions,
        language=machine.language,
    )


def pbca_from_dbca(machine: RtDkBCA) -> RtP1BCA:
    """A deterministic one-counter machine as a probabilistic one."""
    if machine.k != 1:
        raise ConstructionError(f"only one-counter machines embed, got k={machine.k}")
    return RtP1BCA(
        states=machine.states,
        initial=machine.initial,
        accepting=machine.accepting,
        alphabet=machine.alphabet,
        transitions={
            key: (PBranch(Fraction(1), target, update[0]),)
            for key, (target, update) in machine.transitions.items()
        },
        language=machine.language,
    )


def coinflip_pbca() -> RtP1BCA:
    """On each a, increment with probability 1/2; accepts iff no increment happened."""
    half = Fraction(1, 2)
    return RtP1BCA(
        states=("q",),
        initial="q",
        accepting=frozenset({"q"}),
        alphabet=("a",),
        transitions={
            ("q", LEFT_END): (PBranch(Fraction(1), "q", 0),),
            ("q", "a"): (PBranch(half, "q", 1), PBranch(half, "q", 0)),
            ("q", RIGHT_END): (PBranch(Fraction(1), "q", 0),),
        },
    )


def simulate_bca_as_3fa(machine: RtP1BCA) -> OneWayKFA:
    """
    Three-head machine with the same acceptance probability.

    Head 0 reads the input, head 1 moves on every increment and head 2 on
    every decrement, so the counter is the distance between heads 1 and 2.
    After $ heads 1 and 2 race to $ at equal speed; the counter was zero
    iff they arrive together.
    """
    if machine.m != 1:
        raise ConstructionError("updates must lie in {-1, 0, 1}; apply normalize_pbca first")
    race = "race"
    names = set(machine.states)
    for reserved in (race, ACCEPT, REJECT):
        if reserved in names:
            raise ConstructionError(f"state name {reserved!r} is reserved by the simulation")

    rules: Dict[str, Tuple[Rule, ...]] = {}
    for q in machine.states:
        q_rules = []
        for symbol in tape_symbols(machine.alphabet):
            merged: Dict[Tuple[str, Moves], Fraction] = defaultdict(Fraction)
            for b in machine.transitions[(q, symbol)]:
                read_move = 0 if symbol == RIGHT_END else 1
                moves = (read_move, int(b.update == 1), int(b.update == -1))
                if symbol == RIGHT_END:
                    target = race if b.target in machine.accepting else REJECT
                else:
                    target = b.target
                merged[(target, moves)] += b.probability
            outcomes = tuple(Outcome(p, t, mv) for (t, mv), p in merged.items())
            q_rules.append(Rule((symbol, WILDCARD, WILDCARD), outcomes))
        rules[q] = tuple(q_rules)

    rules[race] = (
        deterministic((WILDCARD, RIGHT_END, RIGHT_END), ACCEPT, (0, 0, 0)),
        deterministic((WILDCARD, RIGHT_END, WILDCARD), REJECT, (0, 0, 0)),
        deterministic((WILDCARD, WILDCARD, RIGHT_END), REJECT, (0, 0, 0)),
        deterministic((WILDCARD, BLANK, WILDCARD), REJECT, (0, 0, 0)),
        deterministic((WILDCARD, WILDCARD, BLANK), REJECT, (0, 0, 0)),
        deterministic((WILDCARD, WILDCARD, WILDCARD), race, (0, 1, 1)),
    )
    return OneWayKFA(
        heads=3,
        states=machine.states + (race, ACCEPT, REJECT),
        initial=machine.initial,
        verdicts={ACCEPT: True, REJECT: False},
        alphabet=machine.alphabet,
        rules=rules,
        language=machine.language,
    )


# ── Twin languages ───────────────────────────────────────────────────────
#
# Input w_1 c ... c w_T c u_T c ... c u_1 has 2T blocks; pair i compares
# block i-1 (w_i) with block 2T-i (u_i). A head "at block b" rests on the
# first square of block b.

Comparison = Tuple[int, int, int]  # (pair, head X on w_i, head Y on u_i)


def schedule_pair_comparisons(
    pairs: Iterable[int], heads: int, total_pairs: int
) -> Optional[List[Comparison]]:
    """
    An order of comparisons covering ``pairs`` with one-way heads, or None.

    Comparing pair i needs a head at or before block i-1 and another at or
    before block 2T-i; afterwards they rest at blocks i and 2T-i+1.
    """
    wanted = frozenset(pairs)
    if not wanted <= set(range(1, total_pairs + 1)):
        raise ValueError(f"pairs must lie in 1..{total_pairs}, got {sorted(wanted)}")
    if heads < 2 and wanted:
        return None
    last = 2 * total_pairs

    def options(remaining: FrozenSet[int], positions: Tuple[int, ...]):
        for i in sorted(remaining):
            for x in range(heads):
                for y in range(heads):
                    if x != y and positions[x] <= i - 1 and positions[y] <= last - i:
                        moved = list(positions)
                        moved[x], moved[y] = i, last - i + 1
                        yield (i, x, y), remaining - {i}, tuple(moved)

    @lru_cache(maxsize=None)
    def feasible(remaining: FrozenSet[int], positions: Tuple[int, ...]) -> bool:
        if not remaining:
            return True
        return any(feasible(rest, tuple(sorted(moved))) for _, rest, moved in options(remaining, positions))

    plan: List[Comparison] = []
    remaining, positions = wanted, (0,) * heads
    while remaining:
        for step, rest, moved in options(remaining, positions):
            if feasible(rest, tuple(sorted(moved))):
                plan.append(step)
                remaining, positions = rest, moved
                break
        else:
            return None
    return plan


class _Program:
    """Emits deterministic rules for a chain of head operations."""

    def __init__(self, heads: int):
        self.heads = heads
        self.rules: Dict[str, List[Rule]] = {}

    def pattern(self, reads: Mapping[int, str]) -> Tuple[str, ...]:
        return tuple(reads.get(h, WILDCARD) for h in range(self.heads))

    def moves(self, *moving: int) -> Moves:
        return tuple(int(h in moving) for h in range(self.heads))

    def emit(self, state: str, reads: Mapping[int, str], target: str, *moving: int) -> None:
        self.rules.setdefault(state, []).append(
            deterministic(self.pattern(reads), target, self.moves(*moving))
        )

    def seek(self, entry: str, exit_: str, head: int, blocks: int) -> None:
        """Advance ``head`` past ``blocks`` c's; $ first rejects."""
        names = [entry] + [f"{entry}+{n}" for n in range(1, blocks)]
        for n, here in enumerate(names):
            after = exit_ if n + 1 == blocks else names[n + 1]
            for letter in ("a", "b"):
                self.emit(here, {head: letter}, here, head)
            self.emit(here, {head: "c"}, after, head)

    def compare(self, entry: str, exit_: str, x: int, y: int, end_y: str) -> None:
        """Lockstep equality of the blocks under x and y; y's block must end with ``end_y``."""
        for letter in ("a", "b"):
            self.emit(entry, {x: letter, y: letter}, entry, x, y)
        if end_y == "c":
            self.emit(entry, {x: "c", y: "c"}, exit_, x, y)
        else:
            self.emit(entry, {x: "c", y: end_y}, exit_, x)

    def scan(self, entry: str, exit_: str, head: int) -> None:
        """Read to $ without meeting another c."""
        for letter in ("a", "b"):
            self.emit(entry, {head: letter}, entry, head)
        self.emit(entry, {head: RIGHT_END}, exit_)

    def branch(self, prefix: str, plan: Sequence[Comparison], total_pairs: int) -> str:
        """Rules for one deterministic branch; returns its entry state."""
        last = 2 * total_pairs
        positions = [0] * self.heads
        ops: List[Tuple] = []
        for i, x, y in plan:
            for head, block in ((x, i - 1), (y, last - i)):
                if block > positions[head]:
                    ops.append(("seek", head, block - positions[head]))
                    positions[head] = block
            ops.append(("compare", x, y, RIGHT_END if i == 1 else "c"))
            positions[x], positions[y] = i, last - i + 1
        if 1 not in {i for i, _, _ in plan}:
            head = max(range(self.heads), key=lambda h: positions[h])
            if last - 1 > positions[head]:
                ops.append(("seek", head, last - 1 - positions[head]))
            ops.append(("scan", head))

        names = [f"{prefix}.{n}" for n in range(len(ops))] + [ACCEPT]
        for n, op in enumerate(ops):
            kind, *args = op
            getattr(self, kind)(names[n], names[n + 1], *args)
        return names[0]

    def machine(
        self, starts: Sequence[Tuple[Fraction, str]], alphabet: Tuple[str, ...], language: str
    ) -> OneWayKFA:
        start = "start"
        all_heads = tuple(range(self.heads))
        rules = {q: tuple(r) for q, r in self.rules.items()}
        rules[start] = (
            Rule(
                (WILDCARD,) * self.heads,
                tuple(Outcome(p, entry, self.moves(*all_heads)) for p, entry in starts),
            ),
        )
        states = [start] + [q for q in self.rules if q != start] + [ACCEPT, REJECT]
        for _, entry in starts:
            if entry not in states:
                states.append(entry)
        return OneWayKFA(
            heads=self.heads,
            states=tuple(dict.fromkeys(states)),
            initial=start,
            verdicts={ACCEPT: True, REJECT: False},
            alphabet=alphabet,
            rules=rules,
            language=language,
        )


TWIN_ALPHABET = ("a", "b", "c")


def _plan_or_raise(pairs: Sequence[int], heads: int, total_pairs: int) -> List[Comparison]:
    plan = schedule_pair_comparisons(pairs, heads, total_pairs)
    if plan is None:
        raise ValueError(
            f"no one-way schedule with {heads} heads compares pairs {list(pairs)} of L_twin({total_pairs})"
        )
    return plan


def twin_pairs(k: int) -> int:
    return k * (k - 1) // 2


def build_twin_dkfa(k: int) -> OneWayKFA:
    """Deterministic k-head machine for L_twin(C(k, 2))."""
    if k < 2:
        raise ValueError(f"k must be >= 2, got {k}")
    total = twin_pairs(k)
    program = _Program(k)
    entry = program.branch("cmp", _plan_or_raise(range(1, total + 1), k, total), total)
    return program.machine([(Fraction(1), entry)], TWIN_ALPHABET, f"twin({total})")


def build_twin_pkfa(k: int) -> OneWayKFA:
    """
    k-head machine for L_twin(2t), t = C(k, 2): with probability 1/2 each,
    check the outer t pairs or the inner t pairs. Non-members are accepted
    with probability at most 1/2.
    """
    if k < 2:
        raise ValueError(f"k must be >= 2, got {k}")
    t = twin_pairs(k)
    total = 2 * t
    program = _Program(k)
    outer = program.branch("outer", _plan_or_raise(range(1, t + 1), k, total), total)
    inner = program.branch("inner", _plan_or_raise(range(t + 1, total + 1), k, total), total)
    half = Fraction(1, 2)
    return program.machine([(half, outer), (half, inner)], TWIN_ALPHABET, f"twin({total})")


def build_twin_p2fa(t: int) -> OneWayKFA:
    """Two-head machine for L_twin(t): pick a pair uniformly and compare it."""
    if t < 1:
        raise ValueError(f"t must be >= 1, got {t}")
    program = _Program(2)
    share = Fraction(1, t)
    starts = [
        (share, program.branch(f"pair{i}", _plan_or_raise([i], 2, t), t)) for i in range(1, t + 1)
    ]
    return program.machine(starts, TWIN_ALPHABET, f"twin({t})")

"""
Builders for the quantum machines: the realtime one-counter machines for
L_upal and L*_upal, the one-way machines for L_upal(t), and a small QFT
interference probe.

Every builder returns a completed QMachineSpec (see complete_transitions);
state counts of the printed constructions are ``spec.core_states``.
"""

from typing import Dict, List, Sequence, Tuple

from ..core.alphabet import LEFT_END, RIGHT_END
from .spec import (
    ONE,
    Branch,
    Coefficient,
    MachineSpecError,
    Move,
    QMachineSpec,
    QMode,
    Target,
    complete_transitions,
)

Transitions = Dict[Tuple[str, str], Tuple[Branch, ...]]

W1, W2, W3, WR = "ω1", "ω2", "ω3", "ωr"
WN, WA = "ωn", "ωa"


def _check_n(n: int) -> None:
    if not isinstance(n, int) or n < 2:
        raise MachineSpecError(f"N must be >= 2, got {n}")


def _one(target: str, register: str, update=None) -> Tuple[Branch, ...]:
    return (Branch(ONE, target, register, update),)


def split(n: int, targets: Sequence[Target]) -> Tuple[Branch, ...]:
    """Equal-amplitude split into ``targets``."""
    return tuple(Branch(Coefficient.root(n), t.state, t.register, t.update) for t in targets)


def qft_block(sources: Sequence[str], targets: Sequence[Target], n: int) -> Dict[str, Tuple[Branch, ...]]:
    """
    N-way QFT fragment: source d_j -> sum_l e^{2πi·jl/N}/√N (r_l).

    ``targets[-1]`` is the distinguished target r_N, which collects all the
    amplitude when the N sources are entered with equal amplitude at once.
    """
    _check_n(n)
    if len(sources) != n or len(targets) != n:
        raise MachineSpecError(
            f"QFT of size {n} needs {n} sources and {n} targets, got {len(sources)} and {len(targets)}"
        )
    return {
        source: tuple(
            Branch(Coefficient.phase(n, j, l), t.state, t.register, t.update)
            for l, t in enumerate(targets, start=1)
        )
        for j, source in enumerate(sources, start=1)
    }


def _on(symbol: str, block: Dict[str, Tuple[Branch, ...]]) -> Transitions:
    return {(source, symbol): branches for source, branches in block.items()}


# ── Realtime one-counter machines ────────────────────────────────────────

def _upal_common(n: int) -> Tuple[List[str], Transitions]:
    """Main path and path_j rows shared by both realtime machines."""
    js = range(1, n + 1)
    zero = (0,)
    delta: Transitions = {
        ("q0", LEFT_END): _one("q0", W1, zero),
        ("q0", "a"): split(n, [Target(f"q{j}", W1, (j,)) for j in js]),
        ("q0", "b"): _one("r0", W1, zero),
        ("q0", RIGHT_END): _one("a0", W1, zero),
    }
    for symbol in ("a", "b", RIGHT_END):
        delta[("r0", symbol)] = _one("r0", WR, zero)
    for j in js:
        delta[(f"q{j}", "a")] = _one(f"q{j}", W2, (j,))
        delta[(f"q{j}", "b")] = _one(f"q'{j}", W1, (-j,))
        delta[(f"q'{j}", "b")] = _one(f"q'{j}", W2, (-j,))
        delta[(f"q{j}", RIGHT_END)] = _one(f"q{j}", W1, zero)
    delta.update(
        _on(RIGHT_END, qft_block(
            [f"q'{j}" for j in js], [Target(f"p{l}", W1, zero) for l in js], n
        ))
    )
    states = ["q0", "a0", "r0"]
    for prefix in ("q", "q'", "p"):
        states.extend(f"{prefix}{j}" for j in js)
    return states, delta


def _rejecting_paths(delta: Transitions, names: Sequence[str]) -> None:
    for name in names:
        for symbol in ("a", "b", RIGHT_END):
            delta[(name, symbol)] = _one(name, WR, (0,))


def build_upal_qbca(n: int) -> QMachineSpec:
    """
    Realtime one-counter machine for {aⁿbⁿ}: path j adds j per a and
    subtracts j per b; a QFT on $ recombines the paths into p_N.

    Members are accepted exactly; non-members with probability at most 1/N.
    """
    _check_n(n)
    states, delta = _upal_common(n)
    for j in range(1, n + 1):
        delta[(f"q'{j}", "a")] = _one(f"r{j}", W1, (j,))
    rejecting = [f"r{j}" for j in range(1, n + 1)]
    _rejecting_paths(delta, rejecting)
    spec = QMachineSpec(
        mode=QMode.REALTIME,
        states=tuple(states + rejecting),
        initial="q0",
        alphabet=("a", "b"),
        register=(W1, W2, WR),
        register_initial=W1,
        transitions=delta,
        accepting=frozenset({"a0", f"p{n}"}),
        counters=1,
        bound=n,
        language="upal",
    )
    return complete_transitions(spec)


def build_upal_star_qbca(n: int) -> QMachineSpec:
    """
    Realtime one-counter machine for (aⁿbⁿ)*.

    An a after b's applies a QFT: the non-distinguished targets r_1..r_{N-1}
    reject, the distinguished one re-splits into the N paths for the next
    block, each incrementing by its own j.
    """
    _check_n(n)
    states, delta = _upal_common(n)
    js = range(1, n + 1)
    for j in js:
        rejects = tuple(
            Branch(Coefficient.phase(n, j, l), f"r{l}", W3, (0,)) for l in range(1, n)
        )
        resplit = tuple(
            Branch(Coefficient.phase(n, j, n) * Coefficient.root(n), f"q{k}", W3, (k,)) for k in js
        )
        delta[(f"q'{j}", "a")] = rejects + resplit
    rejecting = [f"r{j}" for j in range(1, n)]
    _rejecting_paths(delta, rejecting)
    spec = QMachineSpec(
        mode=QMode.REALTIME,
        states=tuple(states + rejecting),
        initial="q0",
        alphabet=("a", "b"),
        register=(W1, W2, W3, WR),
        register_initial=W1,
        transitions=delta,
        accepting=frozenset({"a0", f"p{n}"}),
        counters=1,
        bound=n,
        language="upal_star",
    )
    return complete_transitions(spec)


def build_qft_probe(n: int, staggered: bool = False) -> QMachineSpec:
    """
    Split into N paths on ¢, idle over a's, QFT on $.

    With ``staggered`` each path j also adds j to the counter, so the paths
    sit in distinct configurations and cannot interfere.
    """
    _check_n(n)
    js = range(1, n + 1)
    zero = (0,)
    delta: Transitions = {
        ("q0", LEFT_END): split(n, [Target(f"d{j}", W1, (j if staggered else 0,)) for j in js]),
    }
    for j in js:
        delta[(f"d{j}", "a")] = _one(f"d{j}", W1, zero)
    delta.update(
        _on(RIGHT_END, qft_block([f"d{j}" for j in js], [Target(f"p{l}", W1, zero) for l in js], n))
    )
    spec = QMachineSpec(
        mode=QMode.REALTIME,
        states=("q0", *(f"d{j}" for j in js), *(f"p{l}" for l in js)),
        initial="q0",
        alphabet=("a",),
        register=(W1,),
        register_initial=W1,
        transitions=delta,
        accepting=frozenset({f"p{n}"}),
        counters=1,
        bound=n if staggered else 1,
        language=None,
    )
    return complete_transitions(spec)


# ── One-way machines ─────────────────────────────────────────────────────

def _wait_chain(delta: Transitions, moves: Dict[str, Move], names: Sequence[str]) -> None:
    """
    names[0] is the right-moving state, the rest stay: each a costs
    len(names) steps, the last step moving the head.
    """
    moves[names[0]] = Move.RIGHT
    for name in names[1:]:
        moves[name] = Move.STAY
    for here, there in zip(names, names[1:] + names[:1]):
        delta[(here, "a")] = _one(there, WN)


def build_upal1_qfa(n: int) -> QMachineSpec:
    """
    One-way machine for {aⁿbaⁿ}.

    Path j spends j+1 steps on every a before the b and N-j+2 after it, so
    all paths reach $ together exactly when both blocks have equal length.
    The QFT on $ writes the accepting symbol only on the distinguished target.
    """
    _check_n(n)
    js = range(1, n + 1)
    delta: Transitions = {}
    moves: Dict[str, Move] = {"q0": Move.STAY}
    for l in js:
        moves[f"q{l}"] = Move.STAY

    delta[("q0", LEFT_END)] = split(n, [Target(f"q{j},1", WN) for j in js])
    for j in js:
        before = [f"q{j},{k}" for k in range(1, j + 2)]
        after = [f"p{j},{k}" for k in range(1, n - j + 3)]
        _wait_chain(delta, moves, before)
        _wait_chain(delta, moves, after)
        delta[(f"q{j},1", "b")] = _one(f"p{j},1", WN)
        delta[(f"p{j},1", "b")] = _one(f"p{j},1", WR)
        delta[(f"q{j},1", RIGHT_END)] = _one(f"q{j},2", WR)

    finals = [Target(f"q{l}", WA if l == n else WR) for l in js]
    delta.update(_on(RIGHT_END, qft_block([f"p{j},1" for j in js], finals, n)))

    spec = QMachineSpec(
        mode=QMode.ONE_WAY,
        states=tuple(moves),
        initial="q0",
        alphabet=("a", "b"),
        register=(WN, WA, WR),
        register_initial=WN,
        transitions=delta,
        moves=moves,
        accepting_register=frozenset({WA}),
        rejecting_register=frozenset({WR}),
        language="upal_t(1)",
    )
    return complete_transitions(spec)


def _path(prefix: str, index: Tuple[int, ...], k: int) -> str:
    return f"{prefix}[{','.join(map(str, index))}]#{k}"


def _indices(n: int, length: int) -> List[Tuple[int, ...]]:
    out: List[Tuple[int, ...]] = [()]
    for _ in range(length):
        out = [index + (j,) for index in out for j in range(1, n + 1)]
    return out


def build_upal_t_qfa(t: int, n: int) -> QMachineSpec:
    """
    One-way machine for a^{n1} b a^{n2} b ... b a^{n2t} with n_i = n_{2t+1-i}.

    Paths carry an index tuple J, one entry per b read so far in the first
    half (at most t). Before the middle b the path for J waits j+1 steps per
    a, with j the last entry of J; after it, N-j+2 steps. Each b of the
    second half applies a QFT over the last entry: the distinguished target
    drops that entry and continues, the others reject. The final QFT on $
    accepts on the distinguished target.
    """
    if not isinstance(t, int) or t < 1:
        raise MachineSpecError(f"t must be >= 1, got {t}")
    _check_n(n)
    js = range(1, n + 1)
    delta: Transitions = {}
    moves: Dict[str, Move] = {"q0": Move.STAY}

    delta[("q0", LEFT_END)] = split(n, [Target(_path("q", (j,), 1), WN) for j in js])

    for length in range(1, t + 1):
        for index in _indices(n, length):
            j = index[-1]
            before = [_path("q", index, k) for k in range(1, j + 2)]
            after = [_path("p", index, k) for k in range(1, n - j + 3)]
            _wait_chain(delta, moves, before)
            _wait_chain(delta, moves, after)
            head, tail = before[0], after[0]

            if length < t:
                delta[(head, "b")] = split(n, [Target(_path("q", index + (i,), 1), WN) for i in js])
            else:
                delta[(head, "b")] = _one(tail, WN)
            delta[(head, RIGHT_END)] = _one(before[1], WR)

            if length == 1:
                delta[(tail, "b")] = _one(tail, WR)
            else:
                delta[(tail, RIGHT_END)] = _one(after[1], WR)

        for outer in _indices(n, length - 1) if length > 1 else ():
            for l in range(1, n):
                moves[_path("r", outer, l)] = Move.STAY
            targets = [Target(_path("r", outer, l), WR) for l in range(1, n)]
            targets.append(Target(_path("p", outer, 1), WN))
            sources = [_path("p", outer + (j,), 1) for j in js]
            delta.update(_on("b", qft_block(sources, targets, n)))

    for l in js:
        moves[f"f{l}"] = Move.STAY
    finals = [Target(f"f{l}", WA if l == n else WR) for l in js]
    delta.update(_on(RIGHT_END, qft_block([_path("p", (j,), 1) for j in js], finals, n)))

    spec = QMachineSpec(
        mode=QMode.ONE_WAY,
        states=tuple(moves),
        initial="q0",
        alphabet=("a", "b"),
        register=(WN, WA, WR),
        register_initial=WN,
        transitions=delta,
        moves=moves,
        accepting_register=frozenset({WA}),
        rejecting_register=frozenset({WR}),
        language=f"upal_t({t})",
    )
    return complete_transitions(spec)

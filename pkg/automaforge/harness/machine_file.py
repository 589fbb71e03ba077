"""
Machine files: one JSON document per machine, tagged with ``version`` and
``kind``.

Rationals are written as ``"p/q"`` strings. Quantum amplitudes keep their
symbolic form ``{"re": "p/q", "im": "p/q", "qft": [[N, j, l], ...]}`` and are
expanded only when a machine runs, so a file reproduces its construction
exactly. Serializing a loaded file gives back the same bytes.
"""

import json
from fractions import Fraction
from pathlib import Path
from typing import Any, Callable, Dict, List, Mapping, Optional, Union

from ..automata.bca import RtDkBCA, RtN1BCA
from ..automata.gfa import GFA
from ..automata.multihead import OneWayKFA, Outcome, PBranch, RtP1BCA, Rule
from ..core.numerics import SparseMap, SparseVector, format_rational, parse_rational
from ..quantum.spec import Branch, Coefficient, MachineSpecError, Move, QMachineSpec, QMode

FORMAT_VERSION = 1

Machine = Union[GFA, QMachineSpec, RtDkBCA, RtN1BCA, RtP1BCA, OneWayKFA]

KINDS = ("gfa", "qfa_oneway", "qbca_realtime", "nbca", "dbca", "pbca", "pkfa")


class MachineFileError(ValueError):
    """Raised when a machine file cannot be parsed."""

    def __init__(self, message: str, path: Optional[str] = None):
        self.path = path
        super().__init__(f"{path}: {message}" if path else message)


def machine_kind(machine: Machine) -> str:
    if isinstance(machine, GFA):
        return "gfa"
    if isinstance(machine, QMachineSpec):
        return machine.mode.value
    if isinstance(machine, RtDkBCA):
        return "dbca"
    if isinstance(machine, RtN1BCA):
        return "nbca"
    if isinstance(machine, RtP1BCA):
        return "pbca"
    if isinstance(machine, OneWayKFA):
        return "pkfa"
    raise TypeError(f"not a machine: {type(machine).__name__}")


def _ordered(states, subset) -> List[str]:
    return [q for q in states if q in subset]


# ── Encoders ─────────────────────────────────────────────────────────────

def _coefficient(c: Coefficient) -> Dict[str, Any]:
    out: Dict[str, Any] = {"re": format_rational(c.re)}
    if c.im:
        out["im"] = format_rational(c.im)
    if c.phases:
        out["qft"] = [list(p) for p in c.phases]
    return out


def _dump_gfa(g: GFA) -> Dict[str, Any]:
    return {
        "n": g.n,
        "alphabet": list(g.alphabet),
        "initial": [[k, format_rational(v)] for k, v in g.initial.sorted_items()],
        "final": [[k, format_rational(v)] for k, v in g.final.sorted_items()],
        "matrices": {
            s: [[t, src, format_rational(v)] for (t, src), v in g.matrices[s].sorted_entries()]
            for s in g.alphabet
        },
    }


def _dump_quantum(spec: QMachineSpec) -> Dict[str, Any]:
    out: Dict[str, Any] = {"alphabet": list(spec.alphabet)}
    if spec.mode is QMode.ONE_WAY:
        out["states"] = [{"name": q, "move": spec.moves[q].value} for q in spec.states]
    else:
        out["states"] = list(spec.states)
        out["accepting"] = _ordered(spec.states, spec.accepting)
        out["counters"] = spec.counters
        out["bound"] = spec.bound
    out["initial"] = spec.initial
    out["sink"] = spec.sink
    out["register"] = list(spec.register)
    out["register_initial"] = spec.register_initial
    if spec.mode is QMode.ONE_WAY:
        out["accepting_register"] = _ordered(spec.register, spec.accepting_register)
        out["rejecting_register"] = _ordered(spec.register, spec.rejecting_register)

    transitions = []
    for (q, symbol), branches in spec.transitions.items():
        encoded = []
        for b in branches:
            entry = {"amplitude": _coefficient(b.coefficient), "target": b.target, "register": b.register}
            if b.update is not None:
                entry["update"] = list(b.update)
            encoded.append(entry)
        transitions.append({"source": q, "symbol": symbol, "branches": encoded})
    out["transitions"] = transitions
    return out


def _dump_dbca(m: RtDkBCA) -> Dict[str, Any]:
    return {
        "alphabet": list(m.alphabet),
        "states": list(m.states),
        "initial": m.initial,
        "accepting": _ordered(m.states, m.accepting),
        "k": m.k,
        "transitions": [
            {"source": q, "symbol": s, "target": target, "update": list(update)}
            for (q, s), (target, update) in m.transitions.items()
        ],
    }


def _dump_nbca(m: RtN1BCA) -> Dict[str, Any]:
    return {
        "alphabet": list(m.alphabet),
        "states": list(m.states),
        "initial": m.initial,
        "accepting": _ordered(m.states, m.accepting),
        "transitions": [
            {"source": q, "symbol": s, "choices": [{"target": t, "update": u} for t, u in choices]}
            for (q, s), choices in m.transitions.items()
        ],
    }


def _dump_pbca(m: RtP1BCA) -> Dict[str, Any]:
    return {
        "alphabet": list(m.alphabet),
        "states": list(m.states),
        "initial": m.initial,
        "accepting": _ordered(m.states, m.accepting),
        "transitions": [
            {
                "source": q,
                "symbol": s,
                "branches": [
                    {"probability": format_rational(b.probability), "target": b.target, "update": b.update}
                    for b in branches
                ],
            }
            for (q, s), branches in m.transitions.items()
        ],
    }


def _dump_pkfa(m: OneWayKFA) -> Dict[str, Any]:
    return {
        "alphabet": list(m.alphabet),
        "heads": m.heads,
        "states": list(m.states),
        "initial": m.initial,
        "verdicts": [
            {"state": q, "verdict": "accept" if m.verdicts[q] else "reject"}
            for q in m.states
            if q in m.verdicts
        ],
        "rules": [
            {
                "state": q,
                "pattern": list(rule.pattern),
                "outcomes": [
                    {"probability": format_rational(o.probability), "target": o.target, "moves": list(o.moves)}
                    for o in rule.outcomes
                ],
            }
            for q, rules in m.rules.items()
            for rule in rules
        ],
    }


_DUMPERS: Dict[str, Callable[[Any], Dict[str, Any]]] = {
    "gfa": _dump_gfa,
    "qfa_oneway": _dump_quantum,
    "qbca_realtime": _dump_quantum,
    "dbca": _dump_dbca,
    "nbca": _dump_nbca,
    "pbca": _dump_pbca,
    "pkfa": _dump_pkfa,
}


def to_payload(machine: Machine) -> Dict[str, Any]:
    kind = machine_kind(machine)
    payload = {"version": FORMAT_VERSION, "kind": kind, "language": machine.language}
    payload.update(_DUMPERS[kind](machine))
    return payload


def dumps(machine: Machine) -> str:
    return json.dumps(to_payload(machine), indent=2, ensure_ascii=False) + "\n"


# ── Decoders ─────────────────────────────────────────────────────────────

def _rational(value: Any, where: str) -> Fraction:
    try:
        return parse_rational(value)
    except ValueError as e:
        raise MachineFileError(f"{where}: {e}") from None


def _load_coefficient(data: Mapping[str, Any], where: str) -> Coefficient:
    if not isinstance(data, Mapping):
        raise MachineFileError(f"{where}: amplitude must be an object, got {data!r}")
    coefficient = Coefficient(
        re=_rational(data.get("re", "0"), where),
        im=_rational(data.get("im", "0"), where),
    )
    for triple in data.get("qft", []):
        if not (isinstance(triple, list) and len(triple) == 3 and all(isinstance(x, int) for x in triple)):
            raise MachineFileError(f"{where}: qft entries must be [N, j, l] integer triples, got {triple!r}")
        try:
            coefficient = coefficient * Coefficient.phase(*triple)
        except MachineSpecError as e:
            raise MachineFileError(f"{where}: {e}") from None
    return coefficient


def _load_gfa(data: Mapping[str, Any]) -> GFA:
    def vector(name: str) -> SparseVector:
        return SparseVector({int(k): _rational(v, name) for k, v in data[name]})

    return GFA(
        n=int(data["n"]),
        alphabet=tuple(data["alphabet"]),
        matrices={
            s: SparseMap({(int(t), int(src)): _rational(v, f"matrix {s}") for t, src, v in entries})
            for s, entries in data["matrices"].items()
        },
        initial=vector("initial"),
        final=vector("final"),
        language=data.get("language"),
    )


def _load_quantum(data: Mapping[str, Any]) -> QMachineSpec:
    mode = QMode(data["kind"])
    if mode is QMode.ONE_WAY:
        states = tuple(s["name"] for s in data["states"])
        moves = {s["name"]: Move(s["move"]) for s in data["states"]}
    else:
        states = tuple(data["states"])
        moves = {}
    transitions = {}
    for entry in data["transitions"]:
        key = (entry["source"], entry["symbol"])
        where = f"transition {key}"
        transitions[key] = tuple(
            Branch(
                _load_coefficient(b["amplitude"], where),
                b["target"],
                b["register"],
                tuple(b["update"]) if "update" in b else None,
            )
            for b in entry["branches"]
        )
    return QMachineSpec(
        mode=mode,
        states=states,
        initial=data["initial"],
        alphabet=tuple(data["alphabet"]),
        register=tuple(data["register"]),
        register_initial=data["register_initial"],
        transitions=transitions,
        moves=moves,
        accepting_register=frozenset(data.get("accepting_register", ())),
        rejecting_register=frozenset(data.get("rejecting_register", ())),
        accepting=frozenset(data.get("accepting", ())),
        counters=int(data.get("counters", 0)),
        bound=int(data.get("bound", 1)),
        sink=data.get("sink"),
        language=data.get("language"),
    )


def _load_dbca(data: Mapping[str, Any]) -> RtDkBCA:
    return RtDkBCA(
        states=tuple(data["states"]),
        initial=data["initial"],
        accepting=frozenset(data["accepting"]),
        k=int(data["k"]),
        alphabet=tuple(data["alphabet"]),
        transitions={
            (e["source"], e["symbol"]): (e["target"], tuple(int(c) for c in e["update"]))
            for e in data["transitions"]
        },
        language=data.get("language"),
    )


def _load_nbca(data: Mapping[str, Any]) -> RtN1BCA:
    return RtN1BCA(
        states=tuple(data["states"]),
        initial=data["initial"],
        accepting=frozenset(data["accepting"]),
        alphabet=tuple(data["alphabet"]),
        transitions={
            (e["source"], e["symbol"]): tuple((c["target"], int(c["update"])) for c in e["choices"])
            for e in data["transitions"]
        },
        language=data.get("language"),
    )


def _load_pbca(data: Mapping[str, Any]) -> RtP1BCA:
    return RtP1BCA(
        states=tuple(data["states"]),
        initial=data["initial"],
        accepting=frozenset(data["accepting"]),
        alphabet=tuple(data["alphabet"]),
        transitions={
            (e["source"], e["symbol"]): tuple(
                PBranch(_rational(b["probability"], "probability"), b["target"], int(b["update"]))
                for b in e["branches"]
            )
            for e in data["transitions"]
        },
        language=data.get("language"),
    )


def _load_pkfa(data: Mapping[str, Any]) -> OneWayKFA:
    rules: Dict[str, List[Rule]] = {}
    for entry in data["rules"]:
        outcomes = tuple(
            Outcome(_rational(o["probability"], "probability"), o["target"], tuple(int(d) for d in o["moves"]))
            for o in entry["outcomes"]
        )
        rules.setdefault(entry["state"], []).append(Rule(tuple(entry["pattern"]), outcomes))
    verdicts = {}
    for v in data["verdicts"]:
        if v["verdict"] not in ("accept", "reject"):
            raise MachineFileError(f"verdict of {v['state']!r} must be accept or reject, got {v['verdict']!r}")
        verdicts[v["state"]] = v["verdict"] == "accept"
    return OneWayKFA(
        heads=int(data["heads"]),
        states=tuple(data["states"]),
        initial=data["initial"],
        verdicts=verdicts,
        alphabet=tuple(data["alphabet"]),
        rules={q: tuple(r) for q, r in rules.items()},
        language=data.get("language"),
    )


_LOADERS: Dict[str, Callable[[Mapping[str, Any]], Machine]] = {
    "gfa": _load_gfa,
    "qfa_oneway": _load_quantum,
    "qbca_realtime": _load_quantum,
    "dbca": _load_dbca,
    "nbca": _load_nbca,
    "pbca": _load_pbca,
    "pkfa": _load_pkfa,
}


def from_payload(data: Any, path: Optional[str] = None) -> Machine:
    if not isinstance(data, dict):
        raise MachineFileError("machine file must hold a JSON object", path)
    version = data.get("version")
    if version != FORMAT_VERSION:
        raise MachineFileError(f"unsupported version {version!r}, expected {FORMAT_VERSION}", path)
    kind = data.get("kind")
    loader = _LOADERS.get(kind)
    if loader is None:
        raise MachineFileError(f"unknown kind {kind!r}; expected one of {', '.join(KINDS)}", path)
    try:
        return loader(data)
    except MachineFileError:
        raise
    except KeyError as e:
        raise MachineFileError(f"missing field {e.args[0]!r}", path) from None
    except (TypeError, ValueError) as e:
        raise MachineFileError(str(e), path) from None


def loads(text: str, path: Optional[str] = None) -> Machine:
    try:
        data = json.loads(text)
    except json.JSONDecodeError as e:
        raise MachineFileError(f"invalid JSON: {e}", path) from None
    return from_payload(data, path)


def save_machine(machine: Machine, path: Union[str, Path]) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", encoding="utf-8") as f:
        f.write(dumps(machine))
    return path


def load_machine(path: Union[str, Path]) -> Machine:
    path = Path(path)
    if not path.exists():
        raise MachineFileError("file not found", str(path))
    with open(path, encoding="utf-8") as f:
        return loads(f.read(), str(path))

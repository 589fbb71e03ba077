"""
Claim files: a machine, a language and an error bound, checked by an
exhaustive sweep.

    {
      "version": 1,
      "kind": "claim",
      "name": "upal N=3",
      "machine": {"builder": "upal", "params": {"N": 3}},
      "language": "upal",
      "bound_type": "one_sided_negative",
      "bound": "1/3",
      "max_len": 10,
      "counter_acceptance": ["require_zero", "ignore"]
    }

``machine`` may instead be ``{"file": "path"}``, resolved relative to the
claim file. ``alphabet`` defaults to the language's alphabet.
"""

import json
from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction
from pathlib import Path
from typing import Any, Dict, List, Mapping, Optional, Tuple, Union

from ..automata.languages import LanguageError, LanguageId
from ..core.numerics import format_rational, parse_rational
from ..core.registry import get_builder
from ..quantum.runtime import CounterAcceptance
from ..quantum.spec import QMachineSpec, QMode
from .machine_file import Machine, load_machine
from .sweep import RunOptions, SweepRow, format_value, sweep


class ClaimError(ValueError):
    """Raised when a claim file is malformed."""

    def __init__(self, message: str, path: Optional[str] = None):
        self.path = path
        super().__init__(f"{path}: {message}" if path else message)


class BoundType(str, Enum):
    ONE_SIDED_NEGATIVE = "one_sided_negative"
    TWO_SIDED = "two_sided"
    NONDET_MODE = "nondet_mode"
    EXACT_ZERO_COMPLEMENT = "exact_zero_complement"

    @property
    def needs_bound(self) -> bool:
        return self in (BoundType.ONE_SIDED_NEGATIVE, BoundType.TWO_SIDED)


@dataclass(frozen=True)
class Claim:
    machine: Mapping[str, Any]
    language: LanguageId
    bound_type: BoundType
    bound: Optional[Fraction]
    alphabet: Tuple[str, ...]
    max_len: int
    tolerance: float = 1e-9
    counter_acceptance: Tuple[CounterAcceptance, ...] = (CounterAcceptance.REQUIRE_ZERO,)
    step_cap: Optional[int] = None
    name: str = ""
    base_dir: Optional[Path] = field(default=None, compare=False)

    def __post_init__(self):
        if self.max_len < 0:
            raise ClaimError(f"max_len must be >= 0, got {self.max_len}")
        if self.bound_type.needs_bound:
            if self.bound is None or not 0 < self.bound < 1:
                raise ClaimError(f"{self.bound_type.value} needs a bound in (0, 1), got {self.bound}")
        if not self.tolerance >= 0:
            raise ClaimError(f"tolerance must be >= 0, got {self.tolerance}")
        if not self.counter_acceptance:
            raise ClaimError("counter_acceptance must name at least one convention")

    @property
    def title(self) -> str:
        if self.name:
            return self.name
        ref = self.machine.get("builder") or self.machine.get("file")
        return f"{ref} {self.bound_type.value} {self.language}"

    def build_machine(self) -> Machine:
        if "builder" in self.machine:
            cls = get_builder(self.machine["builder"])
            if cls is None:
                raise ClaimError(f"unknown builder {self.machine['builder']!r}")
            return cls.from_params(self.machine.get("params", {})).build()
        path = Path(self.machine["file"])
        if not path.is_absolute() and self.base_dir is not None:
            path = self.base_dir / path
        return load_machine(path)


def parse_claim(data: Any, path: Optional[str] = None, base_dir: Optional[Path] = None) -> Claim:
    if not isinstance(data, dict):
        raise ClaimError("claim file must hold a JSON object", path)
    if data.get("kind", "claim") != "claim":
        raise ClaimError(f"expected kind 'claim', got {data.get('kind')!r}", path)
    machine = data.get("machine")
    if not isinstance(machine, dict) or not ({"builder", "file"} & set(machine)):
        raise ClaimError("machine must be {'builder': ..., 'params': ...} or {'file': ...}", path)
    try:
        language = LanguageId.parse(data["language"])
        bound_type = BoundType(data["bound_type"])
        bound = data.get("bound")
        conventions = data.get("counter_acceptance", ["require_zero"])
        if isinstance(conventions, str):
            conventions = ["require_zero", "ignore"] if conventions == "both" else [conventions]
        return Claim(
            machine=machine,
            language=language,
            bound_type=bound_type,
            bound=None if bound is None else parse_rational(bound),
            alphabet=tuple(data.get("alphabet") or language.alphabet),
            max_len=int(data["max_len"]),
            tolerance=float(data.get("tolerance", 1e-9)),
            counter_acceptance=tuple(CounterAcceptance(c) for c in conventions),
            step_cap=data.get("step_cap"),
            name=str(data.get("name", "")),
            base_dir=base_dir,
        )
    except ClaimError:
        raise
    except KeyError as e:
        raise ClaimError(f"missing field {e.args[0]!r}", path) from None
    except (LanguageError, TypeError, ValueError) as e:
        raise ClaimError(str(e), path) from None


def load_claim(path: Union[str, Path]) -> Claim:
    path = Path(path)
    if not path.exists():
        raise ClaimError("file not found", str(path))
    try:
        with open(path, encoding="utf-8") as f:
            data = json.load(f)
    except json.JSONDecodeError as e:
        raise ClaimError(f"invalid JSON: {e}", str(path)) from None
    return parse_claim(data, str(path), path.parent)


def claim_to_dict(claim: Claim) -> Dict[str, Any]:
    out: Dict[str, Any] = {"version": 1, "kind": "claim"}
    if claim.name:
        out["name"] = claim.name
    out["machine"] = dict(claim.machine)
    out["language"] = str(claim.language)
    out["bound_type"] = claim.bound_type.value
    if claim.bound is not None:
        out["bound"] = format_rational(claim.bound)
    out["alphabet"] = list(claim.alphabet)
    out["max_len"] = claim.max_len
    out["tolerance"] = claim.tolerance
    out["counter_acceptance"] = [c.value for c in claim.counter_acceptance]
    if claim.step_cap is not None:
        out["step_cap"] = claim.step_cap
    return out


# ── Verification ─────────────────────────────────────────────────────────

@dataclass(frozen=True)
class ClaimViolation:
    input: str
    reason: str
    convention: Optional[CounterAcceptance] = None

    def __str__(self) -> str:
        shown = repr(self.input)
        if self.convention is not None:
            return f"{shown} [{self.convention.value}]: {self.reason}"
        return f"{shown}: {self.reason}"


@dataclass(frozen=True)
class ClaimReport:
    claim: Claim
    checked: int
    violations: Tuple[ClaimViolation, ...]
    worst_member: Optional[Union[Fraction, float]] = None
    worst_nonmember: Optional[Union[Fraction, float]] = None

    @property
    def passed(self) -> bool:
        return not self.violations

    def summary(self) -> str:
        verdict = "PASS" if self.passed else "FAIL"
        parts = [f"{verdict} {self.claim.title}: {self.checked} runs"]
        if self.worst_member is not None:
            parts.append(f"min member accept {format_value(self.worst_member)}")
        if self.worst_nonmember is not None:
            parts.append(f"max non-member accept {format_value(self.worst_nonmember)}")
        if self.violations:
            parts.append(f"{len(self.violations)} violation(s)")
        return ", ".join(parts)


def check_row(claim: Claim, row: SweepRow) -> Optional[str]:
    """Reason the row breaks the claim, or None."""
    value = row.accept
    exact = isinstance(value, Fraction)
    tol = 0 if exact else claim.tolerance
    member = row.member

    if not row.halted and row.pending is not None and row.pending > tol:
        return f"did not halt (pending {format_value(row.pending)})"

    kind = claim.bound_type
    if kind is BoundType.ONE_SIDED_NEGATIVE:
        if member and value < 1 - tol:
            return f"member accepted with {format_value(value)} < 1"
        if not member and value > claim.bound + tol:
            return f"non-member accepted with {format_value(value)} > {format_rational(claim.bound)}"
    elif kind is BoundType.TWO_SIDED:
        if member and value < 1 - claim.bound - tol:
            return f"member accepted with {format_value(value)} < 1 - {format_rational(claim.bound)}"
        if not member and value > claim.bound + tol:
            return f"non-member accepted with {format_value(value)} > {format_rational(claim.bound)}"
    elif kind is BoundType.NONDET_MODE:
        positive = value > tol
        if positive != member:
            return f"value {format_value(value)} but membership is {bool(member)}"
    elif kind is BoundType.EXACT_ZERO_COMPLEMENT:
        zero = abs(value) <= tol
        if zero != member:
            return f"value {format_value(value)} but membership is {bool(member)}"
    return None


def verify_claim(
    claim: Claim,
    jobs: int = 1,
    progress: bool = False,
    component_limit: Optional[int] = None,
    machine: Optional[Machine] = None,
) -> ClaimReport:
    machine = machine if machine is not None else claim.build_machine()
    realtime = isinstance(machine, QMachineSpec) and machine.mode is QMode.REALTIME
    conventions = claim.counter_acceptance if realtime else (None,)

    violations: List[ClaimViolation] = []
    checked = 0
    worst_member = worst_nonmember = None
    for convention in conventions:
        options = RunOptions(
            counter_acceptance=convention or CounterAcceptance.REQUIRE_ZERO,
            step_cap=claim.step_cap,
            tol=claim.tolerance,
            **({"component_limit": component_limit} if component_limit else {}),
        )
        rows = sweep(machine, claim.alphabet, claim.max_len, claim.language, options, jobs, progress)
        for row in rows:
            checked += 1
            reason = check_row(claim, row)
            if reason is not None:
                violations.append(ClaimViolation(row.input, reason, convention))
            if row.member:
                worst_member = row.accept if worst_member is None else min(worst_member, row.accept)
            else:
                worst_nonmember = row.accept if worst_nonmember is None else max(worst_nonmember, row.accept)
    if not claim.bound_type.needs_bound:
        worst_member = worst_nonmember = None
    return ClaimReport(claim, checked, tuple(violations), worst_member, worst_nonmember)

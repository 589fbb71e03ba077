"""
automaforge command line.

    automaforge build --list
    automaforge build upal N=3 --out upal3.json
    automaforge run --machine upal3.json --input aabb --counter-acceptance both
    automaforge sweep --machine upal3.json --max-len 8 --out upal3.csv
    automaforge verify claims/upal_n3.json
    automaforge check-wf --machine upal3.json --max-len 6
    automaforge compile-bca --machine bal.json --out bal_g2.json

Exit codes: 0 success, 1 a claim or check failed, 2 usage or parse error.
"""

import argparse
import sys
from pathlib import Path
from typing import Dict, List, Optional, Sequence, Tuple

from ..automata.bca import RtDkBCA, compile_pipeline
from ..automata.gfa import GFA, ConstructionError, gfa_value
from ..automata.languages import LanguageError, LanguageId
from ..automata.multihead import OneWayKFA
from ..core.alphabet import InputSymbolError, render, tokenize, words
from ..core.numerics import format_rational
from ..core.registry import get_builder, list_builders
from ..quantum.runtime import CounterAcceptance, check_local, check_well_formed, run_realtime_conventions
from ..quantum.spec import MachineSpecError, QMachineSpec, QMode
from ..settings import load_settings
from .claims import ClaimError, load_claim, verify_claim
from .machine_file import Machine, MachineFileError, load_machine, machine_kind, save_machine
from .sweep import RunOptions, SweepError, describe_row, evaluate, rows_to_csv, sweep

EXIT_OK = 0
EXIT_FAILED = 1
EXIT_USAGE = 2

CONVENTION_FLAGS = {
    "require-zero": (CounterAcceptance.REQUIRE_ZERO,),
    "ignore": (CounterAcceptance.IGNORE,),
    "both": (CounterAcceptance.REQUIRE_ZERO, CounterAcceptance.IGNORE),
}

USAGE_ERRORS = (
    MachineFileError,
    ClaimError,
    InputSymbolError,
    MachineSpecError,
    ConstructionError,
    LanguageError,
    ValueError,
)


class UsageError(Exception):
    """Raised by a command for bad arguments; reported on stderr with exit 2."""


# ── Helpers ──────────────────────────────────────────────────────────────

def _parse_params(items: Sequence[str]) -> Dict[str, str]:
    params = {}
    for item in items:
        key, sep, value = item.partition("=")
        if not sep or not key:
            raise UsageError(f"parameter {item!r} must look like key=value")
        params[key.strip()] = value.strip()
    return params


def _parse_alphabet(text: Optional[str], machine: Machine) -> Tuple[str, ...]:
    if not text:
        return tuple(machine.alphabet)
    symbols = text.split(",") if "," in text else list(text)
    symbols = [s.strip() for s in symbols if s.strip()]
    if not symbols:
        raise UsageError("alphabet must name at least one symbol")
    unknown = [s for s in symbols if s not in machine.alphabet]
    if unknown:
        raise UsageError(f"alphabet symbols {unknown} are not in the machine alphabet {list(machine.alphabet)}")
    return tuple(symbols)


def _conventions(flag: Optional[str], settings: Dict) -> Tuple[CounterAcceptance, ...]:
    if flag is None:
        return (CounterAcceptance(settings["counter_acceptance"]),)
    return CONVENTION_FLAGS[flag]


def _language(text: Optional[str], machine: Machine) -> Optional[LanguageId]:
    text = text or machine.language
    return LanguageId.parse(text) if text else None


def _transition_count(machine: Machine) -> int:
    if isinstance(machine, GFA):
        return sum(1 for matrix in machine.matrices.values() for _ in matrix.entries())
    if isinstance(machine, QMachineSpec):
        return machine.branch_count
    if isinstance(machine, OneWayKFA):
        return sum(len(rules) for rules in machine.rules.values())
    return len(machine.transitions)


def _state_count(machine: Machine) -> str:
    if isinstance(machine, GFA):
        return str(machine.n)
    if isinstance(machine, QMachineSpec) and machine.sink is not None:
        return f"{len(machine.core_states)} (+1 completion sink)"
    return str(len(machine.states))


# ── Commands ─────────────────────────────────────────────────────────────

def cmd_build(args, settings) -> int:
    if args.list:
        for cls in list_builders():
            info = cls.describe()
            params = ", ".join(
                f"{name}={spec['default']}" for name, spec in info["params"].items()
            )
            print(f"{info['name']:<16} {info['kind']:<14} {params:<22} {info['description']}")
        return EXIT_OK
    if not args.name:
        raise UsageError("build needs a builder name (or --list)")
    cls = get_builder(args.name)
    if cls is None:
        known = ", ".join(c.builder_name for c in list_builders())
        raise UsageError(f"unknown builder {args.name!r}; known: {known}")
    machine = cls.from_params(_parse_params(args.params)).build()
    out = Path(args.out or f"{args.name}.json")
    save_machine(machine, out)
    print(
        f"wrote {out}: {machine_kind(machine)}, {_state_count(machine)} states, "
        f"{_transition_count(machine)} transitions"
    )
    return EXIT_OK


def cmd_run(args, settings) -> int:
    machine = load_machine(args.machine)
    w = tokenize(args.input, machine.alphabet)
    if isinstance(machine, GFA):
        print(format_rational(gfa_value(machine, w)))
        return EXIT_OK
    if isinstance(machine, QMachineSpec) and machine.mode is QMode.REALTIME:
        conventions = _conventions(args.counter_acceptance, settings)
        results = run_realtime_conventions(machine, w, conventions, settings["component_limit"])
        for convention, result in results.items():
            prefix = f"{convention.value}: " if len(results) > 1 else ""
            print(f"{prefix}accept={result.accept:.12g} reject={result.reject:.12g} pending={result.pending:.12g}")
        return EXIT_OK
    options = RunOptions(
        step_cap=args.step_cap,
        tol=settings["tolerance"],
        component_limit=settings["component_limit"],
    )
    row = evaluate(machine, w, options)
    print(describe_row(row))
    if not row.halted:
        print(f"Warning: {render(w)!r} did not halt within the step cap; pending mass remains")
    return EXIT_OK


def cmd_sweep(args, settings) -> int:
    machine = load_machine(args.machine)
    if args.max_len > settings["max_len_limit"] and not args.force:
        raise UsageError(
            f"max-len {args.max_len} exceeds the limit {settings['max_len_limit']}; pass --force to run anyway"
        )
    conventions = _conventions(args.counter_acceptance, settings)
    if len(conventions) > 1:
        raise UsageError("sweep takes a single counter-acceptance convention")
    alphabet = _parse_alphabet(args.alphabet, machine)
    options = RunOptions(
        counter_acceptance=conventions[0],
        step_cap=args.step_cap,
        tol=settings["tolerance"],
        component_limit=settings["component_limit"],
    )
    rows = sweep(
        machine,
        alphabet,
        args.max_len,
        _language(args.language, machine),
        options,
        jobs=args.jobs or settings["jobs"],
        progress=not args.quiet,
    )
    text = rows_to_csv(rows)
    if args.out:
        Path(args.out).write_text(text, encoding="utf-8")
        print(f"wrote {args.out}: {len(rows)} rows")
    else:
        sys.stdout.write(text)
    stalled = [row.input for row in rows if not row.halted]
    if stalled:
        print(f"Warning: {len(stalled)} input(s) did not halt within the step cap, first {stalled[0]!r}")
    return EXIT_OK


def cmd_verify(args, settings) -> int:
    status = EXIT_OK
    for path in args.claims:
        claim = load_claim(path)
        report = verify_claim(
            claim,
            jobs=args.jobs or settings["jobs"],
            progress=not args.quiet,
            component_limit=settings["component_limit"],
        )
        print(report.summary())
        for violation in report.violations:
            print(f"  {violation}")
        if not report.passed:
            status = EXIT_FAILED
    return status


def cmd_check_wf(args, settings) -> int:
    machine = load_machine(args.machine)
    if not isinstance(machine, QMachineSpec):
        raise UsageError(f"check-wf needs a quantum machine, got {machine_kind(machine)}")
    max_len = settings["check_wf_max_len"] if args.max_len is None else args.max_len
    tol = settings["tolerance"] if args.tol is None else args.tol

    lines: List[str] = [f"local: {v}" for v in check_local(machine, tol)]
    checked = 0
    for w in words(machine.alphabet, max_len):
        checked += 1
        report = check_well_formed(machine, w, tol)
        lines.extend(f"global {render(w)!r}: {v}" for v in report.global_)
    if lines:
        print(f"FAIL check-wf {args.machine}: {checked} inputs, {len(lines)} violation(s)")
        for line in lines:
            print(f"  {line}")
        return EXIT_FAILED
    print(f"PASS check-wf {args.machine}: {checked} inputs up to length {max_len}")
    return EXIT_OK


def cmd_compile_bca(args, settings) -> int:
    machine = load_machine(args.machine)
    if not isinstance(machine, RtDkBCA):
        raise UsageError(f"compile-bca needs a deterministic blind counter automaton, got {machine_kind(machine)}")
    g2, primes = compile_pipeline(machine)
    for i, p in enumerate(primes, start=1):
        print(f"counter {i} -> prime {p}")
    out = Path(args.out or Path(args.machine).with_name(Path(args.machine).stem + "_g2.json"))
    save_machine(g2, out)
    print(f"wrote {out}: gfa, {g2.n} states")
    return EXIT_OK


COMMANDS = {
    "build": cmd_build,
    "run": cmd_run,
    "sweep": cmd_sweep,
    "verify": cmd_verify,
    "check-wf": cmd_check_wf,
    "compile-bca": cmd_compile_bca,
}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="automaforge",
        description="Build, run and verify quantum, probabilistic and counter automata.",
    )
    parser.add_argument("--settings", help="Settings file (default: per-user settings.json)")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("build", help="Build a machine file from a registered builder")
    p.add_argument("name", nargs="?", help="Builder name")
    p.add_argument("params", nargs="*", help="Builder parameters as key=value")
    p.add_argument("--list", action="store_true", help="List builders and their parameters")
    p.add_argument("--out", "-o", help="Output path (default: <name>.json)")

    conventions = dict(choices=sorted(CONVENTION_FLAGS), help="Counter acceptance for realtime quantum machines")

    p = sub.add_parser("run", help="Run a machine on one input")
    p.add_argument("--machine", "-m", required=True)
    p.add_argument("--input", "-i", default="", help="Input word (default: empty)")
    p.add_argument("--counter-acceptance", **conventions)
    p.add_argument("--step-cap", type=int, help="Step cap for one-way machines")

    p = sub.add_parser("sweep", help="Run a machine on every word up to a length and write CSV")
    p.add_argument("--machine", "-m", required=True)
    p.add_argument("--alphabet", help="Symbols to sweep, e.g. 'ab' or 'a1,a2' (default: machine alphabet)")
    p.add_argument("--max-len", type=int, required=True)
    p.add_argument("--out", "-o", help="CSV path (default: stdout)")
    p.add_argument("--language", help="Language id for the member column (default: the machine's)")
    p.add_argument("--counter-acceptance", **conventions)
    p.add_argument("--step-cap", type=int)
    p.add_argument("--jobs", "-j", type=int, help="Worker processes")
    p.add_argument("--force", action="store_true", help="Allow max-len above the configured limit")
    p.add_argument("--quiet", "-q", action="store_true", help="No progress bar")

    p = sub.add_parser("verify", help="Verify claim files")
    p.add_argument("claims", nargs="+")
    p.add_argument("--jobs", "-j", type=int)
    p.add_argument("--quiet", "-q", action="store_true")

    p = sub.add_parser("check-wf", help="Check well-formedness of a quantum machine")
    p.add_argument("--machine", "-m", required=True)
    p.add_argument("--max-len", type=int)
    p.add_argument("--tol", type=float)

    p = sub.add_parser(
        "compile-bca",
        help="Compile a deterministic blind counter automaton to a GFA",
        description=(
            "Normalize, state-determine, compile and square a deterministic blind counter "
            "automaton. Normalization keeps the counter residue modulo the largest update in "
            "the state and state determination splits states by their incoming update, so the "
            "GFA has more states than the source machine: bal_dbca determines to 3 states, "
            "compiles to a 4-state GFA with the border state, and its square has 16 states, not 9."
        ),
    )
    p.add_argument("--machine", "-m", required=True)
    p.add_argument("--out", "-o")
    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    settings = load_settings(Path(args.settings) if args.settings else None)
    try:
        return COMMANDS[args.command](args, settings)
    except UsageError as e:
        print(f"Error: {e}", file=sys.stderr)
        return EXIT_USAGE
    except SweepError as e:
        print(f"Error: {e}", file=sys.stderr)
        print(e.traceback, file=sys.stderr)
        return EXIT_USAGE
    except USAGE_ERRORS as e:
        print(f"Error: {e}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())

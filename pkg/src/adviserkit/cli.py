"""Command-line surface.

Exit codes: 0 success, 1 domain error (bad arena, no good adviser, script
mismatch, ...), 2 usage error (argparse's own convention). All commands are
deterministic given the same inputs and seeds.
"""

from __future__ import annotations

import argparse
import os
import sys
from pathlib import Path

from .arena import (
    ADVERSARY,
    PROTAGONIST,
    Arena,
    InvalidAdviserError,
    InvalidArenaError,
    alternation_transform,
    validate,
)
from .fixtures import FIXTURE_NAMES, fixture
from .formats import (
    DocumentError,
    export_dot,
    parse_adviser,
    parse_arena,
    parse_script,
    parse_strategy,
    serialize_adviser,
    serialize_arena,
    serialize_bundle,
    serialize_script,
)
from .guided import (
    HALTED_NO,
    ScriptExhaustedError,
    SessionError,
    adversary_step,
    auto_adversary,
    compliant_random,
    protagonist_step,
    start,
    worst_case,
)
from .manufacturing import TemplateError, generate_manufacturing, parse_template
from .meanpayoff import (
    InvalidStrategyError,
    NotGoodAdviserError,
    SolverError,
    limitation,
    worst_case_average,
)
from .safety import NoGoodAdviserError, compute_losing, nominal_adviser
from .search import DEFAULT_CANDIDATE_CAP, enumerate_candidates, synthesize
from .service import DEFAULT_PORT, PORT_ENV_VAR, serve

_DOMAIN_ERRORS = (
    InvalidArenaError,
    InvalidAdviserError,
    InvalidStrategyError,
    NoGoodAdviserError,
    NotGoodAdviserError,
    DocumentError,
    TemplateError,
    SessionError,
    SolverError,
    ValueError,
    KeyError,
    OSError,
)


def _read(path: str) -> str:
    return Path(path).read_text(encoding="utf-8")


def _load_arena(path: str, tolerate: frozenset[str] = frozenset()) -> Arena:
    arena = parse_arena(_read(path))
    problems = [f for f in validate(arena)
                if f.kind == "error" and f.code not in tolerate]
    if problems:
        lines = "\n".join(f"  {f.code}: {f.message}" for f in problems)
        raise InvalidArenaError(f"{path} is not a valid arena:\n{lines}")
    return arena


def _emit(text: str, out: str | None) -> None:
    if out is None:
        sys.stdout.write(text)
    else:
        Path(out).write_text(text, encoding="utf-8")


def _frac(value) -> str:
    return f"{value.numerator}/{value.denominator}"


# ---------------------------------------------------------------------------
# commands


def _cmd_validate(args) -> int:
    arena = parse_arena(_read(args.file))
    findings = validate(arena, strict=args.strict)
    for finding in findings:
        print(f"{finding.kind} {finding.code}: {finding.message}")
    if any(f.kind == "error" for f in findings):
        return 1
    if not findings:
        print("ok")
    return 0


def _cmd_transform(args) -> int:
    arena = _load_arena(args.file, tolerate=frozenset({"no-alternation"}))
    _emit(serialize_arena(alternation_transform(arena)), args.out)
    return 0


def _cmd_nominal(args) -> int:
    arena = _load_arena(args.file)
    adviser, ladder = nominal_adviser(arena)
    if args.ladder:
        for depth, level in enumerate(ladder.levels):
            print(f"# level {depth}: {' '.join(sorted(level)) or '(empty)'}")
    sys.stdout.write(serialize_adviser(adviser))
    return 0


def _cmd_enumerate(args) -> int:
    arena = _load_arena(args.file)
    bundle = enumerate_candidates(arena, cap=args.cap)
    _emit(serialize_bundle(bundle), args.out)
    return 0


def _cmd_solve(args) -> int:
    arena = _load_arena(args.file)
    bundle = synthesize(arena, cap=args.cap)
    _emit(serialize_bundle(bundle), args.out)
    best = bundle.best
    print(f"# best candidate {bundle.best_index}, lambda {_frac(best.limitation)}",
          file=sys.stderr)
    return 0


def _cmd_lambda(args) -> int:
    arena = _load_arena(args.file)
    adviser = parse_adviser(_read(args.adviser))
    print(f"lambda {_frac(limitation(arena, adviser))}")
    return 0


def _cmd_gamma(args) -> int:
    arena = _load_arena(args.file)
    adviser = parse_adviser(_read(args.adviser))
    strategy = parse_strategy(_read(args.strategy))
    print(f"gamma {_frac(worst_case_average(arena, adviser, strategy))}")
    return 0


def _describe(event) -> str:
    extra = ""
    if event.new_adviser_index is not None:
        extra = f" adviser->{event.new_adviser_index}"
    return (f"{event.actor} {event.input} {event.from_state} -> {event.to_state} "
            f"{event.outcome}{extra}")


def _cmd_simulate(args) -> int:
    arena = _load_arena(args.file)
    bundle = synthesize(arena, cap=args.cap)
    session = start(bundle)

    policy_spec: str = args.policy
    script: list[str] | None = None
    policy = None
    if policy_spec == "worst":
        policy = worst_case()
    elif policy_spec.startswith("random:"):
        policy = compliant_random(int(policy_spec.split(":", 1)[1]))
    elif policy_spec.startswith("script:"):
        script = parse_script(_read(policy_spec.split(":", 1)[1]))
    else:
        raise SessionError(
            f"unknown policy {policy_spec!r}; use worst, random:SEED or script:FILE")

    cursor = 0
    for step in range(args.steps):
        if session.halted != HALTED_NO:
            break
        if script is not None and cursor >= len(script):
            print("# script exhausted")
            break
        at_protagonist = session.arena.owner(session.current_state) == PROTAGONIST
        if at_protagonist:
            event = protagonist_step(session)
            if script is not None:
                expected = script[cursor]
                cursor += 1
                if event.input != expected:
                    raise SessionError(
                        f"script expects {expected!r} at {event.from_state!r} "
                        f"but the strategy plays {event.input!r}")
        elif script is not None:
            event = adversary_step(session, script[cursor])
            cursor += 1
        else:
            try:
                event = auto_adversary(session, policy)
            except ScriptExhaustedError:
                break
        print(f"step {step + 1} {_describe(event)}")

    average = session.average()
    if average is None:
        print(f"# state {session.current_state} halted {session.halted} rounds 0")
    else:
        print(f"# state {session.current_state} halted {session.halted} "
              f"rounds {session.rounds} sum {session.running_sum} "
              f"average {average[0]}/{average[1]}")
    return 0


def _cmd_fixture(args) -> int:
    try:
        arena = fixture(args.name)
    except KeyError as exc:
        print(f"error: {exc.args[0]}", file=sys.stderr)
        return 1
    _emit(serialize_arena(arena), args.out)
    return 0


def _cmd_gen_manufacturing(args) -> int:
    template = parse_template(_read(args.template))
    _emit(serialize_arena(generate_manufacturing(template)), args.out)
    return 0


def _cmd_export_dot(args) -> int:
    arena = _load_arena(args.file)
    adviser = parse_adviser(_read(args.adviser)) if args.adviser else None
    strategy = parse_strategy(_read(args.strategy)) if args.strategy else None
    losing = compute_losing(arena).final if args.losing else None
    _emit(export_dot(arena, adviser=adviser, losing=losing,
                     strategy=strategy, current=args.current), args.out)
    return 0


def _cmd_serve(args) -> int:
    port = args.port
    if port is None:
        port = int(os.environ.get(PORT_ENV_VAR, DEFAULT_PORT))
    serve(args.host, port)
    return 0


def _cmd_record_script(args) -> int:
    # Convenience inverse of simulate: turn a history-free move list into a
    # script document (used by tests and the UI export path).
    moves = [m for m in args.moves]
    _emit(serialize_script(moves), args.out)
    return 0


# ---------------------------------------------------------------------------
# parser


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="adviserkit",
        description="Least-limiting adviser synthesis for turn-based safety games.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def arena_cmd(name: str, help_text: str):
        p = sub.add_parser(name, help=help_text)
        p.add_argument("file", help="arena document")
        return p

    p = arena_cmd("validate", "check an arena document")
    p.add_argument("--strict", action="store_true",
                   help="also warn about shared transition targets")
    p.set_defaults(func=_cmd_validate)

    p = arena_cmd("transform", "insert alternation states where turns repeat")
    p.add_argument("--out")
    p.set_defaults(func=_cmd_transform)

    p = arena_cmd("nominal", "print the nominal adviser")
    p.add_argument("--ladder", action="store_true", help="print the losing levels too")
    p.set_defaults(func=_cmd_nominal)

    p = arena_cmd("enumerate", "enumerate candidate advisers without solving")
    p.add_argument("--cap", type=int, default=DEFAULT_CANDIDATE_CAP)
    p.add_argument("--out")
    p.set_defaults(func=_cmd_enumerate)

    p = arena_cmd("solve", "synthesize the least limiting adviser")
    p.add_argument("--cap", type=int, default=DEFAULT_CANDIDATE_CAP)
    p.add_argument("--out", help="write the bundle document here instead of stdout")
    p.set_defaults(func=_cmd_solve)

    p = arena_cmd("lambda", "level of limitation of an adviser")
    p.add_argument("--adviser", required=True)
    p.set_defaults(func=_cmd_lambda)

    p = arena_cmd("gamma", "worst-case advice average of a fixed strategy")
    p.add_argument("--adviser", required=True)
    p.add_argument("--strategy", required=True)
    p.set_defaults(func=_cmd_gamma)

    p = arena_cmd("simulate", "run a guided session against a policy")
    p.add_argument("--policy", required=True,
                   help="worst | random:SEED | script:FILE")
    p.add_argument("--steps", type=int, required=True)
    p.add_argument("--cap", type=int, default=DEFAULT_CANDIDATE_CAP)
    p.set_defaults(func=_cmd_simulate)

    p = sub.add_parser("fixture", help="emit a bundled example arena")
    p.add_argument("name", help=f"one of: {', '.join(FIXTURE_NAMES)}")
    p.add_argument("--out")
    p.set_defaults(func=_cmd_fixture)

    p = sub.add_parser("gen-manufacturing", help="expand a workbench rule template")
    p.add_argument("template", help="manufacturing template document")
    p.add_argument("--out")
    p.set_defaults(func=_cmd_gen_manufacturing)

    p = arena_cmd("export-dot", "Graphviz view with optional overlays")
    p.add_argument("--adviser")
    p.add_argument("--strategy")
    p.add_argument("--losing", action="store_true")
    p.add_argument("--current")
    p.add_argument("--out")
    p.set_defaults(func=_cmd_export_dot)

    p = sub.add_parser("script", help="write a script document from move labels")
    p.add_argument("moves", nargs="+")
    p.add_argument("--out")
    p.set_defaults(func=_cmd_record_script)

    p = sub.add_parser("serve", help="start the local advice service")
    p.add_argument("--port", type=int, default=None,
                   help=f"default: ${PORT_ENV_VAR} or {DEFAULT_PORT}")
    p.add_argument("--host", default="127.0.0.1")
    p.set_defaults(func=_cmd_serve)

    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except _DOMAIN_ERRORS as exc:
        if isinstance(exc, KeyError) and exc.args:
            message = exc.args[0]
        else:
            message = str(exc)
        print(f"error: {message}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())

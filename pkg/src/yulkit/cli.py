"""Command-line interface.

One executable, eight subcommands: parse, check, run, transform, validate,
validate-rename, import-json, suite.  Exit codes are frozen for CI use:
0 success / acceptance, 1 semantic rejection (unsafe program, failed
validation, error outcome, failing suite), 2 malformed input (parse or
conversion errors, bad flags).

`validate` emits a certificate: a JSON verdict binding the input files (by
content hash) to the claimed transformation, with the witnessing detail on
acceptance and the reason on rejection.  A certificate is a checker verdict,
not a proof object.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import os
import random
import sys
from typing import List, Optional, Sequence, Tuple, Union

from . import __version__
from ._stack import call_with_deep_stack
from .ast import Block, declared_names, to_source
from .dynamics import (
    DEFAULT_FUEL,
    DIALECTS,
    EvalError,
    LimitError,
    SOutcome,
    SafetyError,
    exec_top,
)
from .renaming import (
    DisambiguationCertificate,
    RenameError,
    Renaming,
    add_var_to_renaming,
    check_disambiguation,
    soutcome_result_renamevar,
)
from .solc_json import ConvertError, convert
from .statics import StaticError, check_safe_top
from .syntax import ParseError, parse_program
from .testgen import DEFAULT_FUELS, SUITE_NAMES, run_suite
from .transforms import dead_code_eliminate, for_loop_init_rewrite, okeq

_TRANSFORMS = {
    "dead-code": dead_code_eliminate,
    "loop-init-rewrite": for_loop_init_rewrite,
}

EXIT_OK = 0
EXIT_REJECTED = 1
EXIT_INPUT = 2


class _InputError(Exception):
    """Wraps parse/convert problems for uniform exit-code handling."""


def _read_input(spec: str) -> Tuple[str, bytes]:
    """Returns (display name, raw bytes).  `-` reads standard input; an
    existing path is read as a file; anything else is taken as literal
    source text (handy for one-liners)."""
    if spec == "-":
        return "<stdin>", sys.stdin.buffer.read()
    if os.path.exists(spec):
        with open(spec, "rb") as fh:
            return spec, fh.read()
    return "<arg>", spec.encode("utf-8")


def _looks_like_json(name: str, data: bytes) -> bool:
    if name.endswith(".json"):
        return True
    if name.endswith(".yul"):
        return False
    head = data.lstrip()[:2]
    return head.startswith(b'{"') or head.startswith(b"[")


def _load_block(spec: str) -> Tuple[str, Block]:
    """Load a program from Yul text or solc AST JSON, auto-detected."""
    name, data = _read_input(spec)
    display = spec if name == spec else name
    if _looks_like_json(display if display != "<stdin>" else "", data):
        try:
            tree = json.loads(data.decode("utf-8"))
        except (ValueError, UnicodeDecodeError) as exc:
            raise _InputError(f"{display}: not valid JSON: {exc}") from None
        try:
            return display, convert(tree)
        except ConvertError as exc:
            raise _InputError(f"{display}: {exc}") from None
    try:
        return display, parse_program(data.decode("utf-8"))
    except UnicodeDecodeError as exc:
        raise _InputError(f"{display}: not UTF-8: {exc}") from None
    except ParseError as exc:
        raise _InputError(f"{display}: {exc}") from None


def _parse_value(text: str) -> int:
    value = int(text, 16) if text.lower().startswith("0x") else int(text, 10)
    if not 0 <= value < (1 << 256):
        raise ValueError(f"value out of range: {text}")
    return value


def _sha256(data: bytes) -> str:
    return hashlib.sha256(data).hexdigest()


# --- subcommands ---------------------------------------------------------------


def _cmd_parse(args: argparse.Namespace) -> int:
    _, block = _load_block(args.input)
    print(to_source(block))
    return EXIT_OK


def _cmd_check(args: argparse.Namespace) -> int:
    _, block = _load_block(args.input)
    dialect = DIALECTS[args.dialect]
    try:
        check_safe_top(block, dialect.funtable())
    except StaticError as exc:
        print(f"unsafe: {exc}")
        return EXIT_REJECTED
    print("safe")
    return EXIT_OK


def _cmd_run(args: argparse.Namespace) -> int:
    _, block = _load_block(args.input)
    dialect = DIALECTS[args.dialect]
    initial = {}
    for binding in args.var or []:
        name, sep, value = binding.partition("=")
        if not sep or not name:
            raise _InputError(f"--var needs name=value, got {binding!r}")
        try:
            initial[name] = _parse_value(value)
        except ValueError as exc:
            raise _InputError(str(exc)) from None
    try:
        out = exec_top(block, initial_locals=initial, dialect=dialect, limit=args.fuel)
    except LimitError:
        print("error=limit")
        return EXIT_REJECTED
    except SafetyError as exc:
        print(f"error=safety:{exc.kind.value}")
        return EXIT_REJECTED
    for name in sorted(out.cstate.local):
        print(f"{name}={out.cstate.local[name]}")
    print(f"mode={out.mode.value}")
    return EXIT_OK


def _cmd_transform(args: argparse.Namespace) -> int:
    _, block = _load_block(args.input)
    print(to_source(_TRANSFORMS[args.transform_pass](block)))
    return EXIT_OK


def _cmd_import_json(args: argparse.Namespace) -> int:
    name, data = _read_input(args.input)
    try:
        tree = json.loads(data.decode("utf-8"))
    except (ValueError, UnicodeDecodeError) as exc:
        raise _InputError(f"{name}: not valid JSON: {exc}") from None
    try:
        block = convert(tree)
    except ConvertError as exc:
        raise _InputError(f"{name}: {exc}") from None
    print(to_source(block))
    return EXIT_OK


# --- validation and certificates --------------------------------------------------


def _renaming_pairs(ren: Renaming) -> List[List[str]]:
    return [[old, new] for old, new in ren.pairs]


def _fresh_names(taken: frozenset, count: int, rng: random.Random) -> List[str]:
    names = []
    while len(names) < count:
        candidate = f"z{rng.randrange(1000)}"
        if candidate not in taken and candidate not in names:
            names.append(candidate)
    return names


def _differential_dead_or_loop(
    old: Block, new: Block, transform: str, runs: int
) -> Tuple[bool, dict]:
    """Paired executions from random initial states at random fuels; for the
    loop-init rewrite a split fuel limit is retried at doubled fuel (the
    rewrite moves block-entry costs)."""
    rng = random.Random(f"differential:{transform}")
    vars_old, funs_old = declared_names(old)
    vars_new, funs_new = declared_names(new)
    avoid = vars_old | funs_old | vars_new | funs_new
    retry = transform == "loop-init-rewrite"
    for _ in range(runs):
        state = {name: rng.randrange(1 << 8) for name in _fresh_names(avoid, rng.randint(0, 3), rng)}
        fuel = rng.randrange(16, 1 << 14)
        while True:
            out_old = _outcome(old, state, fuel)
            out_new = _outcome(new, state, fuel)
            if okeq(out_old, out_new):
                break
            if (
                retry
                and isinstance(out_old, LimitError) != isinstance(out_new, LimitError)
                and fuel < DEFAULT_FUEL
            ):
                fuel *= 2
                continue
            return False, {
                "runs": runs,
                "failed_fuel": fuel,
                "state": state,
            }
    return True, {"runs": runs, "relation": "okeq"}


def _outcome(block: Block, state: dict, fuel: int) -> Union[SOutcome, EvalError]:
    try:
        return exec_top(block, initial_locals=dict(state), limit=fuel)
    except EvalError as exc:
        return exc


def _differential_disambiguate(
    old: Block, new: Block, cert: DisambiguationCertificate, runs: int
) -> Tuple[bool, dict]:
    rng = random.Random("differential:disambiguate")
    vars_old, funs_old = declared_names(old)
    vars_new, funs_new = declared_names(new)
    avoid = vars_old | funs_old | vars_new | funs_new
    avoid = avoid | frozenset(cert.variable_renaming.old_names())
    avoid = avoid | frozenset(cert.variable_renaming.new_names())
    for _ in range(runs):
        extra = _fresh_names(avoid, rng.randint(0, 3), rng)
        state = {name: rng.randrange(1 << 8) for name in extra}
        ren = cert.variable_renaming
        for name in extra:
            ren = add_var_to_renaming(ren, name, name)
        fuel = rng.randrange(16, 1 << 14)
        out_old = _outcome(old, state, fuel)
        out_new = _outcome(new, state, fuel)
        if not soutcome_result_renamevar(out_old, out_new, ren):
            return False, {"runs": runs, "failed_fuel": fuel, "state": state}
    return True, {"runs": runs, "relation": "soutcome_result_renamevar"}


def _certificate(
    transform: str,
    inputs: Sequence[Tuple[str, bytes]],
    result: str,
    detail: Optional[dict],
    suites_run: Optional[dict],
) -> dict:
    cert = {
        "tool": "yulkit",
        "tool_version": __version__,
        "schema": 1,
        "statement": "checker verdict over the named inputs; not a proof object",
        "transform": transform,
        "inputs": [
            {"path": path, "sha256": _sha256(data)} for path, data in inputs
        ],
        "result": result,
    }
    if detail is not None:
        cert["detail"] = detail
    if suites_run is not None:
        cert["suites_run"] = suites_run
    return cert


def _validate_pair(old_spec: str, new_spec: str, transform: str, differential: int) -> int:
    old_name, old_data = _read_input(old_spec)
    new_name, new_data = _read_input(new_spec)
    _, old_block = _load_block(old_spec)
    _, new_block = _load_block(new_spec)
    inputs = [(old_name, old_data), (new_name, new_data)]

    detail: Optional[dict] = None
    suites: Optional[dict] = None
    accepted = False

    if transform == "disambiguate":
        try:
            cert = check_disambiguation(old_block, new_block)
            accepted = True
            detail = {
                "variable_renaming": _renaming_pairs(cert.variable_renaming),
                "function_renaming": _renaming_pairs(cert.function_renaming),
            }
            if differential:
                ok, summary = _differential_disambiguate(
                    old_block, new_block, cert, differential
                )
                suites = {"differential": summary}
                if not ok:
                    # supplementary evidence can only demote, never promote
                    accepted = False
                    detail = {"error": "differential run found unrelated outcomes"}
        except RenameError as exc:
            detail = {"error": f"{exc.kind.value}: {exc.context}"}
    else:
        expected = _TRANSFORMS[transform](old_block)
        if expected == new_block:
            accepted = True
            detail = None
            if differential:
                ok, summary = _differential_dead_or_loop(
                    old_block, new_block, transform, differential
                )
                suites = {"differential": summary}
                if not ok:
                    accepted = False
                    detail = {"error": "differential run found diverging outcomes"}
        else:
            detail = {"error": "transformed old code does not match new code"}

    cert_json = _certificate(
        transform, inputs, "accepted" if accepted else "rejected", detail, suites
    )
    print(json.dumps(cert_json, indent=2, sort_keys=True))
    return EXIT_OK if accepted else EXIT_REJECTED


def _cmd_validate(args: argparse.Namespace) -> int:
    return _validate_pair(args.old, args.new, args.transform, args.differential)


def _cmd_validate_rename(args: argparse.Namespace) -> int:
    return _validate_pair(args.old, args.new, "disambiguate", args.differential)


def _cmd_suite(args: argparse.Namespace) -> int:
    fuels = tuple(args.fuel) if args.fuel else DEFAULT_FUELS
    if args.replay is not None:
        report = run_suite(args.name, 1, seed=args.replay, fuels=fuels)
        if report.passed:
            print(f"replay of seed {args.replay}: pass")
            return EXIT_OK
        print(report.summary())
        return EXIT_REJECTED
    report = run_suite(args.name, args.n, seed=args.seed, fuels=fuels)
    print(report.summary())
    return EXIT_OK if report.passed else EXIT_REJECTED


# --- parser ------------------------------------------------------------------------


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="yulkit",
        description="Parse, check, run, transform, and validate Yul code.",
    )
    parser.add_argument("--version", action="version", version=f"yulkit {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    def add_input(p: argparse.ArgumentParser) -> None:
        p.add_argument(
            "input",
            help="a .yul or solc-AST .json file, '-' for stdin, or literal Yul text",
        )

    p = sub.add_parser("parse", help="parse and print the canonical form")
    add_input(p)
    p.set_defaults(fn=_cmd_parse)

    p = sub.add_parser("check", help="static safety check")
    add_input(p)
    p.add_argument("--dialect", choices=sorted(DIALECTS), default="evm-pure")
    p.set_defaults(fn=_cmd_check)

    p = sub.add_parser("run", help="execute a program")
    add_input(p)
    p.add_argument("--fuel", type=int, default=DEFAULT_FUEL)
    p.add_argument(
        "--var",
        action="append",
        metavar="NAME=VALUE",
        help="initial local (decimal or 0x hex); repeatable",
    )
    p.add_argument("--dialect", choices=sorted(DIALECTS), default="evm-pure")
    p.set_defaults(fn=_cmd_run)

    p = sub.add_parser("transform", help="apply a transformation, print the result")
    add_input(p)
    p.add_argument(
        "--pass",
        dest="transform_pass",
        choices=sorted(_TRANSFORMS),
        required=True,
    )
    p.set_defaults(fn=_cmd_transform)

    p = sub.add_parser(
        "validate", help="check that new code is a claimed transformation of old code"
    )
    p.add_argument("old")
    p.add_argument("new")
    p.add_argument(
        "--transform",
        choices=sorted(_TRANSFORMS) + ["disambiguate"],
        required=True,
    )
    p.add_argument(
        "--differential",
        type=int,
        default=0,
        metavar="N",
        help="additionally run N paired executions (supplementary evidence only)",
    )
    p.set_defaults(fn=_cmd_validate)

    p = sub.add_parser("validate-rename", help="validate a disambiguation pair")
    p.add_argument("old")
    p.add_argument("new")
    p.add_argument("--differential", type=int, default=0, metavar="N")
    p.set_defaults(fn=_cmd_validate_rename)

    p = sub.add_parser("import-json", help="convert solc AST JSON to Yul text")
    add_input(p)
    p.set_defaults(fn=_cmd_import_json)

    p = sub.add_parser("suite", help="run a property suite")
    p.add_argument("name", choices=SUITE_NAMES)
    p.add_argument("--n", type=int, default=100)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--fuel", type=int, action="append", help="repeatable fuel list")
    p.add_argument("--replay", type=int, metavar="SEED", help="rerun one case by seed")
    p.set_defaults(fn=_cmd_suite)

    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    args = _build_parser().parse_args(argv)
    try:
        return call_with_deep_stack(args.fn, args)
    except _InputError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except BrokenPipeError:
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())

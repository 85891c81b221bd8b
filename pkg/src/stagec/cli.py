"""Command-line driver: check, elaborate, lint, run and corpus verification."""

from __future__ import annotations

import argparse
import json
import re
import sys
from dataclasses import dataclass
from pathlib import Path

from .core.lint import lint_program
from .errors import (EvalError, InternalError, LintError, ParseError, StagecError,
                     TypeCheckError)
from .eval.program import run_program
from .syntax.parser import parse_core_program, parse_program
from .syntax.pretty import pretty_core, pretty_core_program
from .typecheck.elaborate import check_program

EXIT_OK, EXIT_TYPE, EXIT_PARSE, EXIT_RUNTIME, EXIT_INTERNAL = 0, 1, 2, 3, 4

_HEADER = re.compile(r"-- EXPECT: (accept|reject (\S+)|runs-to (.+))")


def exit_status(err: StagecError) -> int:
    if isinstance(err, ParseError):
        return EXIT_PARSE
    if isinstance(err, (TypeCheckError, LintError)):
        return EXIT_TYPE
    if isinstance(err, EvalError):
        return EXIT_RUNTIME
    return EXIT_INTERNAL


def elaborate_source(text: str):
    """Parse, typecheck and elaborate; the result must lint or it is our bug."""
    core = check_program(parse_program(text))
    try:
        lint_program(core)
    except LintError as err:
        raise InternalError("ElaborationLintFailure",
                            f"elaborated program fails lint: [{err.code}] {err.message}",
                            err.span) from err
    return core


def load_program(path: Path):
    """Core program for ``path``: source files elaborate, others parse as core."""
    text = path.read_text()
    if path.suffix == ".sth":
        return elaborate_source(text)
    core = parse_core_program(text)
    lint_program(core)
    return core


# verdicts ------------------------------------------------------------------

@dataclass(frozen=True)
class Verdict:
    kind: str           # accept | reject | runs-to | internal
    detail: str = ""

    def __str__(self):
        return f"{self.kind} {self.detail}".rstrip()


def parse_verdict(text: str) -> Verdict:
    first = text.split("\n", 1)[0].rstrip()
    m = _HEADER.fullmatch(first)
    if m is None:
        raise ParseError("line 1 must be a '-- EXPECT: ...' verdict header")
    if m.group(2):
        return Verdict("reject", m.group(2))
    if m.group(3):
        return Verdict("runs-to", m.group(3).strip())
    return Verdict("accept")


def actual_verdict(text: str, expected: Verdict, max_steps=None) -> Verdict:
    try:
        core = elaborate_source(text)
    except InternalError as err:
        return Verdict("internal", err.code)
    except StagecError as err:
        return Verdict("reject", err.code)
    if expected.kind != "runs-to":
        return Verdict("accept")
    try:
        return Verdict("runs-to", pretty_core(run_program(core, max_steps).value))
    except StagecError as err:
        return Verdict("internal" if isinstance(err, InternalError) else "error", err.code)


# subcommands ----------------------------------------------------------------

def _report(err: StagecError, args) -> int:
    if args.json:
        print(json.dumps(err.to_json()))
    else:
        print(f"{args.file}:{err.render()}", file=sys.stderr)
    return exit_status(err)


def cmd_check(args) -> int:
    elaborate_source(Path(args.file).read_text())
    return EXIT_OK


def cmd_elaborate(args) -> int:
    out = pretty_core_program(elaborate_source(Path(args.file).read_text())) + "\n"
    if args.out:
        Path(args.out).write_text(out)
    else:
        sys.stdout.write(out)
    return EXIT_OK


def cmd_lint(args) -> int:
    lint_program(parse_core_program(Path(args.file).read_text()))
    return EXIT_OK


def cmd_run(args) -> int:
    core = load_program(Path(args.file))

    def on_step(k, rule, state):
        if args.json:
            print(json.dumps({"step": k, "rule": rule, "program": pretty_core_program(state)}))
        else:
            print(f"[{k}] {rule}")
            print(pretty_core_program(state))

    result = run_program(core, args.max_steps, on_step if args.trace else None)
    if args.json:
        print(json.dumps({"value": pretty_core(result.value), "steps": result.steps}))
    else:
        print(pretty_core(result.value))
    return EXIT_OK


def cmd_corpus(args) -> int:
    files = sorted(Path(args.dir).glob("*.sth"))
    rows = []
    for f in files:
        text = f.read_text()
        try:
            expected = parse_verdict(text)
        except ParseError as err:
            rows.append((f.name, "?", f"bad header: {err.message}", False))
            continue
        actual = actual_verdict(text, expected, args.max_steps)
        rows.append((f.name, str(expected), str(actual), actual == expected))
    matched = sum(ok for *_, ok in rows)
    if args.json:
        for name, exp, act, ok in rows:
            print(json.dumps({"file": name, "expected": exp, "actual": act, "pass": ok}))
        print(json.dumps({"matched": matched, "total": len(rows)}))
    else:
        width = max([len(r[0]) for r in rows] + [4])
        ew = max([len(r[1]) for r in rows] + [8])
        print(f"{'FILE':<{width}}  {'EXPECTED':<{ew}}  RESULT  ACTUAL")
        for name, exp, act, ok in rows:
            print(f"{name:<{width}}  {exp:<{ew}}  {'pass' if ok else 'FAIL':<6}  {act}")
        print(f"{matched}/{len(rows)} verdicts matched")
    return EXIT_OK if matched == len(rows) else EXIT_TYPE


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--json", action="store_true", help="machine-readable output")
    parser = argparse.ArgumentParser(prog="stagec", description="Staged type class compiler")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("check", parents=[common], help="typecheck a source file")
    p.add_argument("file")
    p.set_defaults(func=cmd_check)

    p = sub.add_parser("elaborate", parents=[common], help="print the elaborated core")
    p.add_argument("file")
    p.add_argument("--out", help="write to this path instead of stdout")
    p.set_defaults(func=cmd_elaborate)

    p = sub.add_parser("lint", parents=[common], help="lint a pretty-printed core file")
    p.add_argument("file")
    p.set_defaults(func=cmd_lint)

    p = sub.add_parser("run", parents=[common], help="evaluate a program")
    p.add_argument("file")
    p.add_argument("--max-steps", type=int, default=None, metavar="N")
    p.add_argument("--trace", action="store_true", help="print every step")
    p.set_defaults(func=cmd_run)

    p = sub.add_parser("corpus", parents=[common], help="verify every .sth file in DIR")
    p.add_argument("dir")
    p.add_argument("--max-steps", type=int, default=None, metavar="N")
    p.set_defaults(func=cmd_corpus)
    return parser


def main(argv=None) -> int:
    try:
        args = build_parser().parse_args(argv)
    except SystemExit as exc:
        return EXIT_PARSE if exc.code else EXIT_OK
    args.file = getattr(args, "file", None) or getattr(args, "dir", None)
    try:
        return args.func(args)
    except StagecError as err:
        return _report(err, args)
    except OSError as err:
        _report(StagecError("IOError", str(err)), args)
        return EXIT_PARSE
    except RecursionError:
        return _report(InternalError("RecursionLimit", "recursion limit exceeded"), args)


if __name__ == "__main__":
    sys.exit(main())

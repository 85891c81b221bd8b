"""Program-level schedule: definitions and spdefs evaluate top to bottom."""

from __future__ import annotations

import os
from dataclasses import dataclass

from ..errors import EvalError
from ..syntax import core as C
from .step import Stuck, is_value, step
from .subst import NameSupply, apply_splice_env, program_names, subst_global, subst_splice, uniquify

DEFAULT_MAX_STEPS = 1_000_000


def default_budget() -> int:
    raw = os.environ.get("STAGEC_MAX_STEPS")
    return int(raw) if raw else DEFAULT_MAX_STEPS


@dataclass(frozen=True)
class RunResult:
    value: C.CoreExpr
    steps: int
    rules: tuple


def _decl_level(d) -> int:
    return d.level if isinstance(d, C.SpDef) else 0


def _with_body(d, body):
    if isinstance(d, C.CoreDef):
        return C.CoreDef(d.name, d.type, body)
    return C.SpDef(d.env, d.level, d.name, d.type, body)


class Machine:
    """Steps a whole program state; each call to ``advance`` is one step."""

    def __init__(self, program: C.CoreProgram):
        self.program = uniquify(program)
        self.supply = NameSupply(program_names(self.program))

    @property
    def done(self) -> bool:
        return not self.program.decls and is_value(self.program.main.body)

    def advance(self) -> str:
        decls, main = list(self.program.decls), self.program.main
        if not decls:
            out = step(main.body, self.supply)
            if out is None:
                raise EvalError("Internal", "main is already a value")
            body, rule = out
            self.program = C.CoreProgram((), C.CoreMain(body, main.type))
            return rule
        d, rest = decls[0], decls[1:]
        if not is_value(d.body):
            body, rule = step(d.body, self.supply)
            self.program = C.CoreProgram(tuple([_with_body(d, body)] + rest), main)
            return rule
        if isinstance(d, C.CoreDef):
            self.program = self._substitute(
                rest, main, lambda e, lvl: subst_global(e, d.name, d.body, lvl, self.supply))
            return "DP_DefBeta"
        if not isinstance(d.body, C.QuoteC):
            raise Stuck(f"spdef {d.name} evaluated to a non-quote value", d.body)
        code = apply_splice_env(d.body.body, d.body.env, self.supply)
        self.program = self._substitute(
            rest, main, lambda e, lvl: subst_splice(e, d.name, code, self.supply))
        return "DP_SPDefBeta"

    @staticmethod
    def _substitute(rest, main, f):
        decls = tuple(_with_body(d, f(d.body, _decl_level(d))) for d in rest)
        return C.CoreProgram(decls, C.CoreMain(f(main.body, 0), main.type))


def run_program(program: C.CoreProgram, max_steps=None, on_step=None) -> RunResult:
    """Evaluate to a final value; ``on_step(k, rule, state)`` observes each step."""
    budget = default_budget() if max_steps is None else max_steps
    machine = Machine(program)
    rules = []
    while not machine.done:
        if len(rules) >= budget:
            raise EvalError("BudgetExceeded", f"step budget of {budget} exhausted")
        rule = machine.advance()
        rules.append(rule)
        if on_step is not None:
            on_step(len(rules), rule, machine.program)
    return RunResult(machine.program.main.body, len(rules), tuple(rules))

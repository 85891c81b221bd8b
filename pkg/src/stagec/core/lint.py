"""Independent typechecker for elaborated core programs.

Every annotation the elaborator produced is re-checked: lambda and definition
types, splice-environment entries, captured environments and levels.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from ..builtins import BUILTIN_CORE_TYPES
from ..errors import LintError
from ..syntax import core as C
from ..syntax.pretty import pretty_core, pretty_env, pretty_type
from ..syntax.types import (BOOL, INT, STRING, TArrow, TCode, TCon, TForall, TMeta,
                            TVar, alpha_equal, subst_type)


@dataclass
class CoreTheory:
    globals: dict = field(default_factory=lambda: dict(BUILTIN_CORE_TYPES))
    splices: dict = field(default_factory=dict)   # sp -> (Δ, τ)
    later: set = field(default_factory=set)       # names defined further down


def _check_type(env, t):
    scope = {b.name for b in env if isinstance(b, C.TyVarBind)}

    def go(t, bound):
        if isinstance(t, TVar):
            if t.name not in bound:
                raise LintError("UnboundTypeVariable", f"type variable {t.name} is not in scope")
        elif isinstance(t, TCon):
            for a in t.args:
                go(a, bound)
        elif isinstance(t, TArrow):
            go(t.dom, bound)
            go(t.cod, bound)
        elif isinstance(t, TCode):
            go(t.arg, bound)
        elif isinstance(t, TForall):
            go(t.body, bound | {t.var})
        elif isinstance(t, TMeta):
            raise LintError("UnresolvedMeta", "unresolved metavariable in core type")

    go(t, scope)


def _same_binding(a, b) -> bool:
    if isinstance(a, C.TyVarBind) and isinstance(b, C.TyVarBind):
        return a.name == b.name
    if isinstance(a, C.ValBind) and isinstance(b, C.ValBind):
        return a.name == b.name and a.level == b.level and alpha_equal(a.type, b.type)
    return False


def env_contained(delta, gamma) -> bool:
    """Δ ⊆ Γ: Δ is an ordered sub-sequence of Γ with equal payloads."""
    i = 0
    for b in gamma:
        if i < len(delta) and _same_binding(delta[i], b):
            i += 1
    return i == len(delta)


def _expect(actual, expected, what):
    if not alpha_equal(actual, expected):
        raise LintError("LintTypeMismatch",
                        f"{what}: expected {pretty_type(expected)}, found {pretty_type(actual)}")


def lint_expr(theory: CoreTheory, env, level: int, e):
    """Type of ``e`` at ``level`` under ``env`` or LintError."""
    if isinstance(e, C.Var):
        for b in reversed(env):
            if isinstance(b, C.ValBind) and b.name == e.name:
                if b.level != level:
                    raise LintError(
                        "LintStageError",
                        f"variable {e.name} is bound at level {b.level} but used at level {level}",
                        boundLevel=b.level, useLevel=level)
                return b.type
        raise LintError("UnboundVariable", f"variable {e.name} is not in scope")
    if isinstance(e, C.Global):
        if e.name in theory.globals:
            return theory.globals[e.name]
        if e.name in theory.later:
            raise LintError("ForwardGlobalReference",
                            f"{e.name} is used before its definition")
        raise LintError("UnboundGlobal", f"unknown global {e.name}")
    if isinstance(e, C.SpliceVar):
        for b in reversed(env):
            if isinstance(b, C.SpliceBind) and b.name == e.name:
                if b.level != level:
                    raise LintError(
                        "LintStageError",
                        f"splice point {e.name} is bound at level {b.level} but used at "
                        f"level {level}", boundLevel=b.level, useLevel=level)
                if not env_contained(b.env, env):
                    raise LintError("LintEnvMismatch",
                                    f"captured environment {pretty_env(b.env)} of {e.name} "
                                    f"is not part of the current environment")
                return b.type
        if e.name in theory.splices:
            delta, ty = theory.splices[e.name]
            if not env_contained(delta, env):
                raise LintError("LintEnvMismatch",
                                f"captured environment {pretty_env(delta)} of {e.name} "
                                f"is not part of the current environment")
            return ty
        if e.name in theory.later:
            raise LintError("ForwardGlobalReference",
                            f"{e.name} is used before its definition")
        raise LintError("UnboundSpliceVar", f"splice point {e.name} is not bound")
    if isinstance(e, C.Lam):
        _check_type(env, e.type)
        body = lint_expr(theory, env + (C.ValBind(e.var, e.type, level),), level, e.body)
        return TArrow(e.type, body)
    if isinstance(e, C.App):
        fun = lint_expr(theory, env, level, e.fun)
        arg = lint_expr(theory, env, level, e.arg)
        if not isinstance(fun, TArrow):
            raise LintError("LintTypeMismatch",
                            f"applying {pretty_core(e.fun)} of non-function type {pretty_type(fun)}")
        _expect(arg, fun.dom, "argument")
        return fun.cod
    if isinstance(e, C.TyLam):
        return TForall(e.var, lint_expr(theory, env + (C.TyVarBind(e.var),), level, e.body))
    if isinstance(e, C.TyApp):
        _check_type(env, e.type)
        fun = lint_expr(theory, env, level, e.fun)
        if not isinstance(fun, TForall):
            raise LintError("LintTypeMismatch",
                            f"type application of {pretty_core(e.fun)} : {pretty_type(fun)}")
        return subst_type(fun.body, {fun.var: e.type})
    if isinstance(e, C.QuoteC):
        inner = env
        for s in e.env:
            lint_splice_entry(theory, env, level, s)
            inner = inner + (C.SpliceBind(s.name, s.env, s.type, level + 1),)
        return TCode(lint_expr(theory, inner, level + 1, e.body))
    if isinstance(e, C.IntLit):
        return INT
    if isinstance(e, C.BoolLit):
        return BOOL
    if isinstance(e, C.StrLit):
        return STRING
    if isinstance(e, C.Ifz):
        _expect(lint_expr(theory, env, level, e.scrutinee), INT, "ifz scrutinee")
        zero = lint_expr(theory, env, level, e.zero)
        _expect(lint_expr(theory, env, level, e.succ), zero, "ifz branches")
        return zero
    raise LintError("Internal", f"not a core expression: {e!r}")


def _check_env(env, outer=()):
    """Each binding's type is well-formed under ``outer`` plus earlier bindings."""
    seen = tuple(outer)
    for b in env:
        if isinstance(b, C.ValBind):
            _check_type(seen, b.type)
        seen = seen + (b,)


def lint_splice_entry(theory, env, level, s: C.SpliceEntry):
    _check_env(s.env, env)
    scope = env + s.env
    _check_type(scope, s.type)
    _expect(lint_expr(theory, scope, level, s.rhs), TCode(s.type), f"splice point {s.name}")


def lint_program(p: C.CoreProgram, theory: CoreTheory = None) -> CoreTheory:
    """Check a whole program top to bottom; returns the final theory."""
    theory = theory or CoreTheory()
    theory.later = {d.name for d in p.decls}
    for d in p.decls:
        theory.later.discard(d.name)
        if d.name in theory.globals or d.name in theory.splices:
            raise LintError("DuplicateName", f"{d.name} is defined twice")
        if isinstance(d, C.CoreDef):
            _check_type((), d.type)
            _expect(lint_expr(theory, (), 0, d.body), d.type, f"definition {d.name}")
            theory.globals[d.name] = d.type
        else:
            _check_env(d.env)
            _check_type(d.env, d.type)
            _expect(lint_expr(theory, d.env, d.level, d.body), TCode(d.type),
                    f"spdef {d.name}")
            theory.splices[d.name] = (d.env, d.type)
    _check_type((), p.main.type)
    _expect(lint_expr(theory, (), 0, p.main.body), p.main.type, "main")
    return theory

"""Pretty printers whose output the parsers read back unchanged."""

from __future__ import annotations

from . import core as C
from . import source as S
from .lexer import escape_string
from .types import CodeC, Scheme, TArrow, TCode, TCon, TForall, TMeta, TVar


# types --------------------------------------------------------------------

def pretty_type(t) -> str:
    if isinstance(t, TForall):
        names = []
        while isinstance(t, TForall):
            names.append(t.var)
            t = t.body
        return f"forall {' '.join(names)} . {pretty_type(t)}"
    if isinstance(t, TArrow):
        return f"{_btype(t.dom)} -> {pretty_type(t.cod)}"
    return _btype(t)


def _btype(t) -> str:
    if isinstance(t, TCode):
        return f"Code {_atype(t.arg)}"
    if isinstance(t, TCon) and t.args:
        return " ".join([t.name] + [_atype(a) for a in t.args])
    return _atype(t)


def _atype(t) -> str:
    if isinstance(t, TVar):
        return t.name
    if isinstance(t, TMeta):
        return f"?{t.id}"
    if isinstance(t, TCon) and not t.args:
        return t.name
    return f"({pretty_type(t)})"


def pretty_constraint(c) -> str:
    if isinstance(c, CodeC):
        return f"CodeC ({pretty_constraint(c.inner)})"
    return f"{c.cls} {_atype(c.arg)}"


def pretty_scheme(s: Scheme) -> str:
    parts = []
    if s.binders:
        parts.append(f"forall {' '.join(s.binders)} . ")
    for c in s.context:
        parts.append(f"{pretty_constraint(c)} => ")
    parts.append(pretty_type(s.body))
    return "".join(parts)


# source -------------------------------------------------------------------

def pretty_expr(e, prec: int = 0) -> str:
    """prec 0: any expression, 1: function position, 2: argument position."""
    if isinstance(e, S.Ident):
        return e.name
    if isinstance(e, S.IntLit):
        return str(e.value)
    if isinstance(e, S.BoolLit):
        return "true" if e.value else "false"
    if isinstance(e, S.StrLit):
        return escape_string(e.value)
    if isinstance(e, S.Quote):
        return f"[| {pretty_expr(e.body)} |]"
    if isinstance(e, S.Splice):
        return f"$( {pretty_expr(e.body)} )"
    if isinstance(e, S.App):
        out = f"{pretty_expr(e.fun, 1)} {pretty_expr(e.arg, 2)}"
        return f"({out})" if prec >= 2 else out
    if isinstance(e, S.Lam):
        out = f"\\{e.var} : {_btype(e.ann)} -> {pretty_expr(e.body)}"
    elif isinstance(e, S.Ifz):
        out = (f"ifz {pretty_expr(e.scrutinee)} then {pretty_expr(e.zero)} "
               f"else {pretty_expr(e.succ)}")
    else:
        raise TypeError(f"not a source expression: {e!r}")
    return f"({out})" if prec >= 1 else out


def pretty_decl(d) -> str:
    if isinstance(d, S.Def):
        return f"def {d.name} :: {pretty_scheme(d.sig)} = {pretty_expr(d.body)}"
    if isinstance(d, S.ClassD):
        return (f"class {d.cls} {d.tyvar} where "
                f"{d.method} :: {pretty_scheme(d.method_sig)}")
    if isinstance(d, S.InstD):
        ctx = ""
        if len(d.context) == 1:
            ctx = f"{pretty_constraint(d.context[0])} => "
        elif d.context:
            ctx = "(" + ", ".join(pretty_constraint(c) for c in d.context) + ") => "
        return (f"instance {ctx}{d.cls} {_atype(d.head)} where "
                f"{d.method} = {pretty_expr(d.body)}")
    raise TypeError(f"not a declaration: {d!r}")


def pretty_program(p: S.SourceProgram) -> str:
    lines = [pretty_decl(d) + " ;" for d in p.decls]
    sig = f" :: {pretty_scheme(p.main.sig)}" if p.main.sig is not None else ""
    lines.append(f"main{sig} = {pretty_expr(p.main.body)}")
    return "\n".join(lines) + "\n"


# core ---------------------------------------------------------------------

def pretty_env(env) -> str:
    parts = []
    for b in env:
        if isinstance(b, C.TyVarBind):
            parts.append(b.name)
        elif isinstance(b, C.ValBind):
            parts.append(f"{b.name} : {pretty_type(b.type)} @ {b.level}")
        else:
            raise TypeError(f"splice binding cannot be printed in an environment: {b!r}")
    return "(" + ", ".join(parts) + ")"


def pretty_entry(s: C.SpliceEntry) -> str:
    return (f"{pretty_env(s.env)} |- {s.name} : {pretty_type(s.type)} = "
            f"{pretty_core(s.rhs)}")


def pretty_core(e, prec: int = 0) -> str:
    if isinstance(e, (C.Var, C.Global, C.SpliceVar)):
        return e.name
    if isinstance(e, C.IntLit):
        return str(e.value)
    if isinstance(e, C.BoolLit):
        return "true" if e.value else "false"
    if isinstance(e, C.StrLit):
        return escape_string(e.value)
    if isinstance(e, C.QuoteC):
        entries = " ; ".join(pretty_entry(s) for s in e.env)
        sp = f"{{ {entries} }}" if entries else "{}"
        return f"[| {pretty_core(e.body)} |]{sp}"
    if isinstance(e, C.App):
        out = f"{pretty_core(e.fun, 1)} {pretty_core(e.arg, 2)}"
        return f"({out})" if prec >= 2 else out
    if isinstance(e, C.TyApp):
        out = f"{pretty_core(e.fun, 1)} <{pretty_type(e.type)}>"
        return f"({out})" if prec >= 2 else out
    if isinstance(e, C.Lam):
        out = f"\\{e.var} : {_btype(e.type)} -> {pretty_core(e.body)}"
    elif isinstance(e, C.TyLam):
        out = f"/\\{e.var} . {pretty_core(e.body)}"
    elif isinstance(e, C.Ifz):
        out = (f"ifz {pretty_core(e.scrutinee)} then {pretty_core(e.zero)} "
               f"else {pretty_core(e.succ)}")
    else:
        raise TypeError(f"not a core expression: {e!r}")
    return f"({out})" if prec >= 1 else out


def pretty_core_decl(d) -> str:
    if isinstance(d, C.CoreDef):
        return f"def {d.name} : {pretty_type(d.type)} = {pretty_core(d.body)}"
    if isinstance(d, C.SpDef):
        return (f"spdef<{d.level}> {pretty_env(d.env)} |- {d.name} : "
                f"{pretty_type(d.type)} = {pretty_core(d.body)}")
    raise TypeError(f"not a core declaration: {d!r}")


def pretty_core_program(p: C.CoreProgram) -> str:
    lines = [pretty_core_decl(d) + " ;" for d in p.decls]
    lines.append(f"main : {pretty_type(p.main.type)} = {pretty_core(p.main.body)}")
    return "\n".join(lines) + "\n"

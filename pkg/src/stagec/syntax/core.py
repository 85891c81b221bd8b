"""Abstract syntax of the explicitly typed core language.

The core has no splice expression: splice points are SpliceVar occurrences
bound either by the splice environment of an enclosing QuoteC or by a
top-level SpDef.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Union

from .types import Type


# environments -------------------------------------------------------------

@dataclass(frozen=True)
class ValBind:
    name: str
    type: Type
    level: int


@dataclass(frozen=True)
class TyVarBind:
    name: str


@dataclass(frozen=True)
class SpliceBind:
    name: str
    env: tuple
    type: Type
    level: int


EnvEntry = Union[ValBind, TyVarBind, SpliceBind]


# expressions --------------------------------------------------------------

@dataclass(frozen=True)
class Var:
    name: str


@dataclass(frozen=True)
class Global:
    name: str


@dataclass(frozen=True)
class SpliceVar:
    name: str


@dataclass(frozen=True)
class Lam:
    var: str
    type: Type
    body: "CoreExpr"


@dataclass(frozen=True)
class App:
    fun: "CoreExpr"
    arg: "CoreExpr"


@dataclass(frozen=True)
class TyLam:
    var: str
    body: "CoreExpr"


@dataclass(frozen=True)
class TyApp:
    fun: "CoreExpr"
    type: Type


@dataclass(frozen=True)
class SpliceEntry:
    env: tuple
    name: str
    type: Type
    rhs: "CoreExpr"


@dataclass(frozen=True)
class QuoteC:
    body: "CoreExpr"
    env: tuple = ()


@dataclass(frozen=True)
class IntLit:
    value: int


@dataclass(frozen=True)
class BoolLit:
    value: bool


@dataclass(frozen=True)
class StrLit:
    value: str


@dataclass(frozen=True)
class Ifz:
    scrutinee: "CoreExpr"
    zero: "CoreExpr"
    succ: "CoreExpr"


CoreExpr = Union[Var, Global, SpliceVar, Lam, App, TyLam, TyApp, QuoteC,
                 IntLit, BoolLit, StrLit, Ifz]


# programs -----------------------------------------------------------------

@dataclass(frozen=True)
class CoreDef:
    name: str
    type: Type
    body: CoreExpr


@dataclass(frozen=True)
class SpDef:
    env: tuple
    level: int
    name: str
    type: Type
    body: CoreExpr


@dataclass(frozen=True)
class CoreMain:
    body: CoreExpr
    type: Type


@dataclass(frozen=True)
class CoreProgram:
    decls: tuple
    main: CoreMain


def apps(fun: CoreExpr, *args: CoreExpr) -> CoreExpr:
    for a in args:
        fun = App(fun, a)
    return fun


def tyapps(fun: CoreExpr, *tys: Type) -> CoreExpr:
    for t in tys:
        fun = TyApp(fun, t)
    return fun


def spine(e: CoreExpr):
    """Split nested applications into (head, [('ty'|'val', arg), ...])."""
    args = []
    while isinstance(e, (App, TyApp)):
        if isinstance(e, App):
            args.append(("val", e.arg))
        else:
            args.append(("ty", e.type))
        e = e.fun
    args.reverse()
    return e, args

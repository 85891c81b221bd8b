"""Abstract syntax of the staged source language."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional, Union

from .types import Constraint, Scheme, Type


@dataclass(frozen=True)
class Span:
    line: int
    col: int


def _span():
    return field(default=None, compare=False, repr=False)


@dataclass(frozen=True)
class Ident:
    name: str
    span: Optional[Span] = _span()


@dataclass(frozen=True)
class Lam:
    var: str
    ann: Type
    body: "Expr"
    span: Optional[Span] = _span()


@dataclass(frozen=True)
class App:
    fun: "Expr"
    arg: "Expr"
    span: Optional[Span] = _span()


@dataclass(frozen=True)
class Quote:
    body: "Expr"
    span: Optional[Span] = _span()


@dataclass(frozen=True)
class Splice:
    body: "Expr"
    span: Optional[Span] = _span()


@dataclass(frozen=True)
class IntLit:
    value: int
    span: Optional[Span] = _span()


@dataclass(frozen=True)
class BoolLit:
    value: bool
    span: Optional[Span] = _span()


@dataclass(frozen=True)
class StrLit:
    value: str
    span: Optional[Span] = _span()


@dataclass(frozen=True)
class Ifz:
    scrutinee: "Expr"
    zero: "Expr"
    succ: "Expr"
    span: Optional[Span] = _span()


Expr = Union[Ident, Lam, App, Quote, Splice, IntLit, BoolLit, StrLit, Ifz]


@dataclass(frozen=True)
class Def:
    name: str
    sig: Scheme
    body: Expr
    span: Optional[Span] = _span()


@dataclass(frozen=True)
class ClassD:
    cls: str
    tyvar: str
    method: str
    method_sig: Scheme
    span: Optional[Span] = _span()


@dataclass(frozen=True)
class InstD:
    context: tuple
    cls: str
    head: Type
    method: str
    body: Expr
    span: Optional[Span] = _span()


Decl = Union[Def, ClassD, InstD]


@dataclass(frozen=True)
class Main:
    body: Expr
    sig: Optional[Scheme] = None
    span: Optional[Span] = _span()


@dataclass(frozen=True)
class SourceProgram:
    decls: tuple
    main: Main


def apps(fun: Expr, *args: Expr) -> Expr:
    for a in args:
        fun = App(fun, a)
    return fun


__all__ = [
    "Span", "Ident", "Lam", "App", "Quote", "Splice", "IntLit", "BoolLit",
    "StrLit", "Ifz", "Expr", "Def", "ClassD", "InstD", "Decl", "Main",
    "SourceProgram", "apps", "Constraint",
]

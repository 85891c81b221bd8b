"""Types and constraints shared by the source and core languages.

Source monotypes use TVar/TCon/TArrow/TCode (plus TMeta while inference is
running). Core types additionally allow TForall anywhere.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Union

BASE_TYPES = ("Int", "Bool", "String")
TYPE_CONSTRUCTORS = {"Int": 0, "Bool": 0, "String": 0, "List": 1, "Pair": 2}


@dataclass(frozen=True)
class TVar:
    name: str


@dataclass(frozen=True)
class TCon:
    name: str
    args: tuple = ()


@dataclass(frozen=True)
class TArrow:
    dom: "Type"
    cod: "Type"


@dataclass(frozen=True)
class TCode:
    arg: "Type"


@dataclass(frozen=True)
class TForall:
    var: str
    body: "Type"


@dataclass(frozen=True)
class TMeta:
    """Unification variable; never escapes a finished declaration."""

    id: int


Type = Union[TVar, TCon, TArrow, TCode, TForall, TMeta]

INT = TCon("Int")
BOOL = TCon("Bool")
STRING = TCon("String")


def arrows(*tys: Type) -> Type:
    """Right-nested arrow: arrows(a, b, c) == a -> b -> c."""
    result = tys[-1]
    for t in reversed(tys[:-1]):
        result = TArrow(t, result)
    return result


@dataclass(frozen=True)
class ClassC:
    cls: str
    arg: Type


@dataclass(frozen=True)
class CodeC:
    inner: "Constraint"


Constraint = Union[ClassC, CodeC]


def constraint_depth(c: Constraint) -> int:
    depth = 0
    while isinstance(c, CodeC):
        depth += 1
        c = c.inner
    return depth


def constraint_base(c: Constraint) -> ClassC:
    while isinstance(c, CodeC):
        c = c.inner
    return c


def wrap_codec(c: Constraint, n: int) -> Constraint:
    for _ in range(n):
        c = CodeC(c)
    return c


@dataclass(frozen=True)
class Scheme:
    """Prenex polytype: forall binders . context => body."""

    binders: tuple = ()
    context: tuple = ()
    body: Type = None

    @staticmethod
    def mono(t: Type) -> "Scheme":
        return Scheme((), (), t)


def free_type_vars(t: Type) -> list:
    """Free rigid type variables of ``t`` in first-occurrence order."""
    out: list = []

    def go(t, bound):
        if isinstance(t, TVar):
            if t.name not in bound and t.name not in out:
                out.append(t.name)
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

    go(t, frozenset())
    return out


def constraint_type_vars(c: Constraint) -> list:
    return free_type_vars(constraint_base(c).arg)


def metas_of(t: Type) -> set:
    if isinstance(t, TMeta):
        return {t.id}
    if isinstance(t, TCon):
        out = set()
        for a in t.args:
            out |= metas_of(a)
        return out
    if isinstance(t, TArrow):
        return metas_of(t.dom) | metas_of(t.cod)
    if isinstance(t, TCode):
        return metas_of(t.arg)
    if isinstance(t, TForall):
        return metas_of(t.body)
    return set()


def fresh_type_name(base: str, avoid) -> str:
    i = 1
    while f"{base}{i}" in avoid:
        i += 1
    return f"{base}{i}"


def subst_type(t: Type, mapping: dict) -> Type:
    """Capture-avoiding substitution of type variables (name -> Type)."""
    if not mapping:
        return t
    if isinstance(t, TVar):
        return mapping.get(t.name, t)
    if isinstance(t, TCon):
        if not t.args:
            return t
        return TCon(t.name, tuple(subst_type(a, mapping) for a in t.args))
    if isinstance(t, TArrow):
        return TArrow(subst_type(t.dom, mapping), subst_type(t.cod, mapping))
    if isinstance(t, TCode):
        return TCode(subst_type(t.arg, mapping))
    if isinstance(t, TForall):
        inner = {k: v for k, v in mapping.items() if k != t.var}
        if not inner:
            return t
        captured = set()
        for v in inner.values():
            captured.update(free_type_vars(v))
        if t.var in captured:
            avoid = captured | set(free_type_vars(t.body)) | set(inner)
            new = fresh_type_name(t.var, avoid)
            body = subst_type(t.body, {t.var: TVar(new)})
            return TForall(new, subst_type(body, inner))
        return TForall(t.var, subst_type(t.body, inner))
    return t


def subst_constraint(c: Constraint, mapping: dict) -> Constraint:
    if isinstance(c, CodeC):
        return CodeC(subst_constraint(c.inner, mapping))
    return ClassC(c.cls, subst_type(c.arg, mapping))


def alpha_equal(t1: Type, t2: Type) -> bool:
    """Structural equality up to renaming of forall-bound variables."""

    def go(a, b, env1, env2, depth=0):
        if isinstance(a, TVar) and isinstance(b, TVar):
            i, j = env1.get(a.name), env2.get(b.name)
            if i is None and j is None:
                return a.name == b.name
            return i == j
        if type(a) is not type(b):
            return False
        if isinstance(a, TCon):
            return a.name == b.name and len(a.args) == len(b.args) and all(
                go(x, y, env1, env2, depth) for x, y in zip(a.args, b.args)
            )
        if isinstance(a, TArrow):
            return go(a.dom, b.dom, env1, env2, depth) and go(a.cod, b.cod, env1, env2, depth)
        if isinstance(a, TCode):
            return go(a.arg, b.arg, env1, env2, depth)
        if isinstance(a, TForall):
            return go(a.body, b.body, {**env1, a.var: depth}, {**env2, b.var: depth}, depth + 1)
        return a == b

    return go(t1, t2, {}, {})

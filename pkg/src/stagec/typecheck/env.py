"""Typing environments, the program theory, and TSP bookkeeping."""

from __future__ import annotations

from dataclasses import dataclass, field

from ..builtins import BUILTIN_CORE_TYPES, BUILTIN_SCHEMES
from ..syntax import core as C
from ..syntax.types import Constraint, Scheme, Type


# local environment Γ --------------------------------------------------------

@dataclass(frozen=True)
class LocalVal:
    name: str
    type: Type
    level: int


@dataclass(frozen=True)
class LocalTyVar:
    name: str


@dataclass(frozen=True)
class EvBind:
    name: str
    constraint: Constraint
    level: int

    def __post_init__(self):
        # qualifiers are only ever introduced by signatures at level 0
        assert self.level == 0, f"evidence binder {self.name} at level {self.level}"


def lookup_local(env, name):
    for entry in reversed(env):
        if isinstance(entry, LocalVal) and entry.name == name:
            return entry
    return None


def env_tyvars(env) -> set:
    return {e.name for e in env if isinstance(e, LocalTyVar)}


# program theory P -----------------------------------------------------------

@dataclass(frozen=True)
class ClassInfo:
    cls: str
    tyvar: str
    method: str
    method_type: Type


@dataclass(frozen=True)
class Axiom:
    ev: str
    binders: tuple
    context: tuple
    head: Constraint


@dataclass
class Theory:
    classes: dict = field(default_factory=dict)
    globals: dict = field(default_factory=lambda: dict(BUILTIN_SCHEMES))
    core_types: dict = field(default_factory=lambda: dict(BUILTIN_CORE_TYPES))
    axioms: list = field(default_factory=list)

    def method_class(self, name):
        for info in self.classes.values():
            if info.method == name:
                return info
        return None

    def taken(self, name) -> bool:
        return name in self.globals or name in self.core_types or name in self.classes


# TSP: level -> ordered splice environment -----------------------------------

def tsp_merge(*tsps) -> dict:
    out: dict = {}
    for tsp in tsps:
        for level, entries in tsp.items():
            out.setdefault(level, []).extend(entries)
    return out


def tsp_below(tsp, n) -> dict:
    return {k: v for k, v in tsp.items() if k < n}


def tsp_at(tsp, n) -> tuple:
    return tuple(tsp.get(n, ()))


class Fresh:
    """Per-pipeline fresh-name supply (sp0, sp1, ... / ev0, ev1, ...)."""

    def __init__(self):
        self.counters: dict = {}

    def __call__(self, prefix: str, avoid=()) -> str:
        while True:
            i = self.counters.get(prefix, 0)
            self.counters[prefix] = i + 1
            name = f"{prefix}{i}"
            if name not in avoid:
                return name


def elab_env(theory, env) -> tuple:
    """Translate Γ into a core environment Δ (types of evidence via formation)."""
    from .formation import form_constraint
    out = []
    for e in env:
        if isinstance(e, LocalVal):
            out.append(C.ValBind(e.name, e.type, e.level))
        elif isinstance(e, LocalTyVar):
            out.append(C.TyVarBind(e.name))
        else:
            out.append(C.ValBind(e.name, form_constraint(theory, e.constraint), e.level))
    return tuple(out)


__all__ = ["LocalVal", "LocalTyVar", "EvBind", "Theory", "ClassInfo", "Axiom",
           "Scheme", "Fresh", "elab_env", "tsp_merge", "tsp_below", "tsp_at",
           "lookup_local", "env_tyvars"]

"""Type and constraint formation: scope checking plus translation to core types."""

from __future__ import annotations

from ..errors import TypeCheckError
from ..syntax.types import (ClassC, CodeC, Scheme, TArrow, TCode, TCon, TForall,
                            TMeta, TVar, subst_type)


def check_type(tyvars, t, span=None) -> None:
    if isinstance(t, TVar):
        if t.name not in tyvars:
            raise TypeCheckError("UnboundTypeVariable",
                                 f"type variable {t.name} is not in scope", span)
    elif isinstance(t, TCon):
        for a in t.args:
            check_type(tyvars, a, span)
    elif isinstance(t, TArrow):
        check_type(tyvars, t.dom, span)
        check_type(tyvars, t.cod, span)
    elif isinstance(t, TCode):
        check_type(tyvars, t.arg, span)
    elif isinstance(t, TForall):
        check_type(set(tyvars) | {t.var}, t.body, span)
    elif not isinstance(t, TMeta):
        raise TypeError(f"not a type: {t!r}")


def check_constraint(theory, tyvars, c, span=None) -> None:
    while isinstance(c, CodeC):
        c = c.inner
    if c.cls not in theory.classes:
        raise TypeCheckError("UnknownClass", f"unknown class {c.cls}", span)
    check_type(tyvars, c.arg, span)


def form_constraint(theory, c, tyvars=None, span=None):
    """ClassC elaborates to its method type; each CodeC wraps a Code."""
    if tyvars is not None:
        check_constraint(theory, tyvars, c, span)
    if isinstance(c, CodeC):
        return TCode(form_constraint(theory, c.inner))
    assert isinstance(c, ClassC)
    info = theory.classes.get(c.cls)
    if info is None:
        raise TypeCheckError("UnknownClass", f"unknown class {c.cls}", span)
    return subst_type(info.method_type, {info.tyvar: c.arg})


def check_scheme(theory, s: Scheme, tyvars=(), span=None) -> None:
    if len(set(s.binders)) != len(s.binders):
        raise TypeCheckError("DuplicateName", "repeated type variable binder", span)
    scope = set(tyvars) | set(s.binders)
    for c in s.context:
        check_constraint(theory, scope, c, span)
    check_type(scope, s.body, span)


def form_type(theory, s, tyvars=(), span=None):
    """Scope-check and elaborate a scheme (or bare type) to a core type."""
    if not isinstance(s, Scheme):
        s = Scheme.mono(s)
    check_scheme(theory, s, tyvars, span)
    t = s.body
    for c in reversed(s.context):
        t = TArrow(form_constraint(theory, c), t)
    for v in reversed(s.binders):
        t = TForall(v, t)
    return t

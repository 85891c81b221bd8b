"""First-order unification over source monotypes with metavariables."""

from __future__ import annotations

from ..errors import TypeCheckError
from ..syntax.types import TArrow, TCode, TCon, TForall, TMeta, TVar, metas_of


class UnificationError(TypeCheckError):
    pass


class MetaSubst:
    """Idempotent-on-read substitution for metavariables plus a fresh supply."""

    def __init__(self):
        self.solution: dict = {}
        self.counter = 0

    def fresh(self) -> TMeta:
        self.counter += 1
        return TMeta(self.counter)

    def zonk(self, t):
        if isinstance(t, TMeta):
            if t.id in self.solution:
                z = self.zonk(self.solution[t.id])
                self.solution[t.id] = z
                return z
            return t
        if isinstance(t, TCon):
            return TCon(t.name, tuple(self.zonk(a) for a in t.args)) if t.args else t
        if isinstance(t, TArrow):
            return TArrow(self.zonk(t.dom), self.zonk(t.cod))
        if isinstance(t, TCode):
            return TCode(self.zonk(t.arg))
        if isinstance(t, TForall):
            return TForall(t.var, self.zonk(t.body))
        return t

    def unify(self, t1, t2, span=None, pretty=None):
        a, b = self.zonk(t1), self.zonk(t2)
        if isinstance(a, TMeta) or isinstance(b, TMeta):
            if a == b:
                return
            meta, other = (a, b) if isinstance(a, TMeta) else (b, a)
            if meta.id in metas_of(other):
                raise UnificationError(
                    "OccursCheck", f"cannot construct infinite type ?{meta.id} ~ {_show(other)}",
                    span)
            self.solution[meta.id] = other
            return
        if isinstance(a, TVar) and isinstance(b, TVar) and a.name == b.name:
            return
        if isinstance(a, TCon) and isinstance(b, TCon) and a.name == b.name \
                and len(a.args) == len(b.args):
            for x, y in zip(a.args, b.args):
                self.unify(x, y, span)
            return
        if isinstance(a, TArrow) and isinstance(b, TArrow):
            self.unify(a.dom, b.dom, span)
            self.unify(a.cod, b.cod, span)
            return
        if isinstance(a, TCode) and isinstance(b, TCode):
            self.unify(a.arg, b.arg, span)
            return
        raise UnificationError(
            "ConstructorClash", f"cannot match {_show(a)} with {_show(b)}", span)


def _show(t) -> str:
    from ..syntax.pretty import pretty_type
    return pretty_type(t)

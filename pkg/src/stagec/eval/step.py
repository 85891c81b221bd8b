"""Small-step call-by-value reduction of core expressions."""

from __future__ import annotations

from ..builtins import BUILTIN_SCHEMES, CONSTRUCTORS, DELTA_ARITY
from ..errors import EvalError
from ..syntax import core as C
from ..syntax.pretty import pretty_core
from .subst import NameSupply, freshen, subst_ty, subst_val


class Stuck(EvalError):
    def __init__(self, message, redex=None):
        super().__init__("Stuck", message)
        self.redex = redex


def _builtin_spine(e):
    head, args = C.spine(e)
    if isinstance(head, C.Global) and head.name in DELTA_ARITY:
        return head.name, args
    return None, args


def is_value(e) -> bool:
    if isinstance(e, (C.IntLit, C.BoolLit, C.StrLit, C.Lam, C.TyLam)):
        return True
    if isinstance(e, C.QuoteC):
        return all(is_value(s.rhs) for s in e.env)
    if isinstance(e, (C.App, C.TyApp, C.Global)):
        name, args = _builtin_spine(e)
        if name is None:
            return False
        vals = [a for kind, a in args if kind == "val"]
        if not all(is_value(a) for a in vals):
            return False
        n_ty = len(BUILTIN_SCHEMES[name].binders)
        n_tys = len(args) - len(vals)
        if name in CONSTRUCTORS:
            return len(vals) <= DELTA_ARITY[name] and n_tys <= n_ty
        return len(vals) < DELTA_ARITY[name] or n_tys < n_ty
    return False


def _lit(e, kind, name):
    if not isinstance(e, kind):
        raise Stuck(f"{name} applied to {pretty_core(e)}", e)
    return e.value


def delta(name, tys, vals, supply):
    if name in ("add", "sub", "mul"):
        a, b = (_lit(v, C.IntLit, name) for v in vals)
        return C.IntLit({"add": a + b, "sub": a - b, "mul": a * b}[name])
    if name == "eqInt":
        return C.BoolLit(_lit(vals[0], C.IntLit, name) == _lit(vals[1], C.IntLit, name))
    if name == "and":
        return C.BoolLit(_lit(vals[0], C.BoolLit, name) and _lit(vals[1], C.BoolLit, name))
    if name == "showInt":
        return C.StrLit(str(_lit(vals[0], C.IntLit, name)))
    if name == "concat":
        return C.StrLit(_lit(vals[0], C.StrLit, name) + _lit(vals[1], C.StrLit, name))
    if name == "fix":
        # fix f  ~>  f (\x. fix f x), the call-by-value unfolding
        (f,) = vals
        x = supply.fresh("x")
        again = C.App(C.tyapps(C.Global("fix"), *tys), freshen(f, supply))
        return C.App(f, C.Lam(x, tys[0], C.App(again, C.Var(x))))
    if name == "matchList":
        xs, on_nil, on_cons = vals
        head, args = _builtin_spine(xs)
        if head == "nil":
            return on_nil
        if head == "cons":
            h, t = [a for kind, a in args if kind == "val"]
            return C.App(C.App(on_cons, h), t)
        raise Stuck(f"matchList on {pretty_core(xs)}", xs)
    if name in ("fstP", "sndP"):
        head, args = _builtin_spine(vals[0])
        if head != "pair":
            raise Stuck(f"{name} on {pretty_core(vals[0])}", vals[0])
        fst, snd = [a for kind, a in args if kind == "val"]
        return fst if name == "fstP" else snd
    raise Stuck(f"no reduction for builtin {name}")


def step(e, supply: NameSupply):
    """One leftmost-outermost CBV step: (e', rule) or None if ``e`` is a value."""
    if is_value(e):
        return None
    if isinstance(e, C.App):
        if not is_value(e.fun):
            fun, rule = _step_or_stuck(e.fun, supply)
            return C.App(fun, e.arg), rule
        if not is_value(e.arg):
            arg, rule = _step_or_stuck(e.arg, supply)
            return C.App(e.fun, arg), rule
        if isinstance(e.fun, C.Lam):
            return subst_val(e.fun.body, e.fun.var, e.arg, supply), "DE_Beta"
        return _delta_step(e, supply)
    if isinstance(e, C.TyApp):
        if not is_value(e.fun):
            fun, rule = _step_or_stuck(e.fun, supply)
            return C.TyApp(fun, e.type), rule
        if isinstance(e.fun, C.TyLam):
            return subst_ty(e.fun.body, e.fun.var, e.type), "DE_TBeta"
        return _delta_step(e, supply)
    if isinstance(e, C.Ifz):
        if not is_value(e.scrutinee):
            s, rule = _step_or_stuck(e.scrutinee, supply)
            return C.Ifz(s, e.zero, e.succ), rule
        n = _lit(e.scrutinee, C.IntLit, "ifz")
        return (e.zero if n == 0 else e.succ), "DE_Ifz"
    if isinstance(e, C.QuoteC):
        # DSP: step the leftmost unevaluated splice entry, never the body
        entries = list(e.env)
        for i, s in enumerate(entries):
            if not is_value(s.rhs):
                rhs, rule = _step_or_stuck(s.rhs, supply)
                entries[i] = C.SpliceEntry(s.env, s.name, s.type, rhs)
                return C.QuoteC(e.body, tuple(entries)), rule
    raise Stuck(f"no rule applies to {pretty_core(e)}", e)


def _step_or_stuck(e, supply):
    out = step(e, supply)
    if out is None:
        raise Stuck(f"expected a reducible term, found value {pretty_core(e)}", e)
    return out


def _delta_step(e, supply):
    name, args = _builtin_spine(e)
    if name is None:
        raise Stuck(f"cannot apply {pretty_core(C.spine(e)[0])}", e)
    tys = [a for kind, a in args if kind == "ty"]
    vals = [a for kind, a in args if kind == "val"]
    if len(vals) != DELTA_ARITY[name]:
        raise Stuck(f"{name} applied to {len(vals)} arguments", e)
    return delta(name, tys, vals, supply), "DE_Fix" if name == "fix" else "DE_Delta"

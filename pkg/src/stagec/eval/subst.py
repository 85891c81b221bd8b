"""Substitution on core terms, including the splice environments of quotes.

The evaluator maintains one invariant: along any scope chain (an spdef's
captured environment followed by the binders enclosing a position) no name is
bound twice.  ``uniquify`` establishes it when a program is loaded, and every
copy of a value that is substituted somewhere gets fresh binder names.  With
that invariant a splice-environment entry can be identified by its name, so
substituting for x simply drops x's entry from every environment it reaches.
"""

from __future__ import annotations

from ..errors import EvalError
from ..syntax import core as C
from ..syntax.types import TVar, free_type_vars, subst_type


class NameSupply:
    def __init__(self, used=()):
        self.used = set(used)
        self.counter = 0

    def fresh(self, base: str) -> str:
        stem = base.split("_")[0] or "x"
        while True:
            self.counter += 1
            name = f"{stem}_{self.counter}"
            if name not in self.used:
                self.used.add(name)
                return name


def all_names(e, out=None) -> set:
    """Every variable, binder and splice-environment name occurring in ``e``."""
    out = set() if out is None else out
    if isinstance(e, (C.Var, C.Global, C.SpliceVar)):
        out.add(e.name)
    elif isinstance(e, C.Lam):
        out.add(e.var)
        out.update(free_type_vars(e.type))
        all_names(e.body, out)
    elif isinstance(e, C.TyLam):
        out.add(e.var)
        all_names(e.body, out)
    elif isinstance(e, C.TyApp):
        out.update(free_type_vars(e.type))
        all_names(e.fun, out)
    elif isinstance(e, C.App):
        all_names(e.fun, out)
        all_names(e.arg, out)
    elif isinstance(e, C.Ifz):
        for sub in (e.scrutinee, e.zero, e.succ):
            all_names(sub, out)
    elif isinstance(e, C.QuoteC):
        all_names(e.body, out)
        for s in e.env:
            out.add(s.name)
            _env_names(s.env, out)
            all_names(s.rhs, out)
    return out


def _env_names(env, out):
    for b in env:
        out.add(b.name)
        if isinstance(b, C.ValBind):
            out.update(free_type_vars(b.type))


def program_names(p: C.CoreProgram) -> set:
    out: set = set()
    for d in p.decls:
        out.add(d.name)
        if isinstance(d, C.SpDef):
            _env_names(d.env, out)
        all_names(d.body, out)
    all_names(p.main.body, out)
    return out


# binder renaming --------------------------------------------------------------

def _rename_type(t, ts):
    mapping = {a: TVar(stack[-1]) for a, stack in ts.items() if stack and stack[-1] != a}
    return subst_type(t, mapping) if mapping else t


def _push(stacks, name, new):
    return {**stacks, name: stacks.get(name, ()) + (new,)}


def _rename_env(env, vs, ts):
    """Map the k-th entry named x to the k-th binder named x in scope."""
    seen: dict = {}
    dvs: dict = {}
    dts: dict = {}
    out = []
    for b in env:
        if isinstance(b, C.TyVarBind):
            stack, k = ts.get(b.name, ()), seen.get(("t", b.name), 0)
            seen[("t", b.name)] = k + 1
            new = stack[k] if k < len(stack) else b.name
            dts[b.name] = dts.get(b.name, ()) + (new,)
            out.append(C.TyVarBind(new))
        elif isinstance(b, C.ValBind):
            stack, k = vs.get(b.name, ()), seen.get(("v", b.name), 0)
            seen[("v", b.name)] = k + 1
            new = stack[k] if k < len(stack) else b.name
            dvs[b.name] = dvs.get(b.name, ()) + (new,)
            out.append(C.ValBind(new, _rename_type(b.type, dts), b.level))
        else:
            out.append(b)
    return tuple(out), dvs, dts


def _rename(e, vs, ts, policy):
    """Rename binders per ``policy``; returns (term, splice occurrence scopes)."""
    if isinstance(e, C.Var):
        stack = vs.get(e.name)
        return (C.Var(stack[-1]) if stack else e), {}
    if isinstance(e, C.SpliceVar):
        return e, {e.name: (vs, ts)}
    if isinstance(e, C.Lam):
        new = policy(e.var, vs)
        body, occ = _rename(e.body, _push(vs, e.var, new), ts, policy)
        return C.Lam(new, _rename_type(e.type, ts), body), occ
    if isinstance(e, C.TyLam):
        new = policy(e.var, ts)
        body, occ = _rename(e.body, vs, _push(ts, e.var, new), policy)
        return C.TyLam(new, body), occ
    if isinstance(e, C.TyApp):
        fun, occ = _rename(e.fun, vs, ts, policy)
        return C.TyApp(fun, _rename_type(e.type, ts)), occ
    if isinstance(e, C.App):
        fun, o1 = _rename(e.fun, vs, ts, policy)
        arg, o2 = _rename(e.arg, vs, ts, policy)
        return C.App(fun, arg), {**o2, **o1}
    if isinstance(e, C.Ifz):
        parts, occ = [], {}
        for sub in (e.scrutinee, e.zero, e.succ):
            new, o = _rename(sub, vs, ts, policy)
            parts.append(new)
            occ = {**o, **occ}
        return C.Ifz(*parts), occ
    if isinstance(e, C.QuoteC):
        body, occ_body = _rename(e.body, vs, ts, policy)
        names = {s.name for s in e.env}
        occ = {k: v for k, v in occ_body.items() if k not in names}
        entries = []
        for s in e.env:
            svs, sts = occ_body.get(s.name, (vs, ts))
            env, dvs, dts = _rename_env(s.env, svs, sts)
            rvs, rts = {**vs, **dvs}, {**ts, **dts}
            rhs, occ_rhs = _rename(s.rhs, rvs, rts, policy)
            for k, v in occ_rhs.items():
                occ.setdefault(k, v)
            entries.append(C.SpliceEntry(env, s.name, _rename_type(s.type, rts), rhs))
        return C.QuoteC(body, tuple(entries)), occ
    return e, {}


def freshen(e, supply: NameSupply):
    """Copy of ``e`` with every binder renamed to a fresh name."""
    if isinstance(e, (C.IntLit, C.BoolLit, C.StrLit, C.Var, C.Global, C.SpliceVar)):
        return e
    return _rename(e, {}, {}, lambda name, stacks: supply.fresh(name))[0]


def _shadow_policy(used):
    def policy(name, stacks):
        k = len(stacks.get(name, ()))
        if k == 0:
            return name
        cand = f"{name}_{k}"
        while cand in used:
            cand += "_"
        return cand
    return policy


def uniquify(p: C.CoreProgram) -> C.CoreProgram:
    """Rename binders that shadow another binder in scope (deterministically)."""
    policy = _shadow_policy(program_names(p))
    decls = []
    for d in p.decls:
        if isinstance(d, C.SpDef):
            vs, ts, env = {}, {}, []
            for b in d.env:
                if isinstance(b, C.TyVarBind):
                    new = policy(b.name, ts)
                    env.append(C.TyVarBind(new))
                    ts = _push(ts, b.name, new)
                else:
                    new = policy(b.name, vs)
                    env.append(C.ValBind(new, _rename_type(b.type, ts), b.level))
                    vs = _push(vs, b.name, new)
            body = _rename(d.body, vs, ts, policy)[0]
            decls.append(C.SpDef(tuple(env), d.level, d.name, _rename_type(d.type, ts), body))
        else:
            decls.append(C.CoreDef(d.name, d.type, _rename(d.body, {}, {}, policy)[0]))
    main = C.CoreMain(_rename(p.main.body, {}, {}, policy)[0], p.main.type)
    return C.CoreProgram(tuple(decls), main)


# substitutions --------------------------------------------------------------

def _map(e, f):
    """Rebuild ``e`` applying ``f`` to immediate subterms (structural helper)."""
    if isinstance(e, C.Lam):
        return C.Lam(e.var, e.type, f(e.body))
    if isinstance(e, C.TyLam):
        return C.TyLam(e.var, f(e.body))
    if isinstance(e, C.App):
        return C.App(f(e.fun), f(e.arg))
    if isinstance(e, C.TyApp):
        return C.TyApp(f(e.fun), e.type)
    if isinstance(e, C.Ifz):
        return C.Ifz(f(e.scrutinee), f(e.zero), f(e.succ))
    return e


def subst_val(e, x: str, v, supply: NameSupply):
    """e[v/x]; x's entries leave every splice environment."""
    if isinstance(e, C.Var):
        return freshen(v, supply) if e.name == x else e
    if isinstance(e, C.Lam) and e.var == x:
        return e
    if isinstance(e, C.QuoteC):
        return C.QuoteC(subst_val(e.body, x, v, supply), tuple(
            C.SpliceEntry(
                tuple(b for b in s.env if not (isinstance(b, C.ValBind) and b.name == x)),
                s.name, s.type, subst_val(s.rhs, x, v, supply))
            for s in e.env))
    return _map(e, lambda sub: subst_val(sub, x, v, supply))


def subst_ty(e, a: str, t):
    """e[t/a] on every type annotation; a's entries leave splice environments."""
    m = {a: t}
    if isinstance(e, C.TyLam):
        return e if e.var == a else C.TyLam(e.var, subst_ty(e.body, a, t))
    if isinstance(e, C.Lam):
        return C.Lam(e.var, subst_type(e.type, m), subst_ty(e.body, a, t))
    if isinstance(e, C.TyApp):
        return C.TyApp(subst_ty(e.fun, a, t), subst_type(e.type, m))
    if isinstance(e, C.QuoteC):
        entries = []
        for s in e.env:
            env = tuple(
                C.ValBind(b.name, subst_type(b.type, m), b.level) if isinstance(b, C.ValBind)
                else b
                for b in s.env if not (isinstance(b, C.TyVarBind) and b.name == a))
            entries.append(C.SpliceEntry(env, s.name, subst_type(s.type, m),
                                         subst_ty(s.rhs, a, t)))
        return C.QuoteC(subst_ty(e.body, a, t), tuple(entries))
    return _map(e, lambda sub: subst_ty(sub, a, t))


def shift_levels(e, d: int):
    """Move a closed value d levels: every captured binder level shifts by d."""
    if d == 0:
        return e
    if isinstance(e, C.QuoteC):
        return C.QuoteC(shift_levels(e.body, d), tuple(
            C.SpliceEntry(
                tuple(C.ValBind(b.name, b.type, b.level + d) if isinstance(b, C.ValBind)
                      else b for b in s.env),
                s.name, s.type, shift_levels(s.rhs, d))
            for s in e.env))
    return _map(e, lambda sub: shift_levels(sub, d))


def subst_global(e, k: str, v, level: int, supply: NameSupply):
    """pgm[v/k] for one expression sitting at ``level``."""
    if isinstance(e, C.Global):
        return shift_levels(freshen(v, supply), level) if e.name == k else e
    if isinstance(e, C.QuoteC):
        return C.QuoteC(subst_global(e.body, k, v, level + 1, supply), tuple(
            C.SpliceEntry(s.env, s.name, s.type, subst_global(s.rhs, k, v, level, supply))
            for s in e.env))
    return _map(e, lambda sub: subst_global(sub, k, v, level, supply))


def subst_splice(e, sp: str, code, supply: NameSupply):
    """Replace the splice variable ``sp`` by ``code`` (free variables captured on purpose)."""
    if isinstance(e, C.SpliceVar):
        return freshen(code, supply) if e.name == sp else e
    if isinstance(e, C.QuoteC):
        return C.QuoteC(subst_splice(e.body, sp, code, supply), tuple(
            C.SpliceEntry(s.env, s.name, s.type, subst_splice(s.rhs, sp, code, supply))
            for s in e.env))
    return _map(e, lambda sub: subst_splice(sub, sp, code, supply))


def apply_splice_env(body, sp_env, supply: NameSupply):
    """e[SP]: splice each evaluated entry's code into ``body``, recursively."""
    for s in sp_env:
        if not isinstance(s.rhs, C.QuoteC):
            raise EvalError("Stuck", f"splice point {s.name} is bound to a non-quote value")
        code = apply_splice_env(s.rhs.body, s.rhs.env, supply)
        body = subst_splice(body, s.name, code, supply)
    return body

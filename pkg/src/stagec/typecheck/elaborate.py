"""Level-indexed typechecking with elaboration into the core language.

Each declaration is processed in two passes over the same source tree.  The
first infers types with metavariables (instantiating globals eagerly) and
enforces the stage discipline for locals.  Once unification has finished the
second pass builds the core term, discharging every qualifier of an
instantiated global through entailment at the level where it occurs and
threading the TSP (level -> pending splice entries).
"""

from __future__ import annotations

from ..errors import StageError, TypeCheckError
from ..syntax import core as C
from ..syntax import source as S
from ..syntax.pretty import pretty_type
from ..syntax.types import (BOOL, INT, STRING, ClassC, Scheme, TArrow, TCode,
                            TCon, TForall, TVar, free_type_vars, metas_of,
                            subst_constraint, subst_type)
from .entail import entail
from .env import (Axiom, ClassInfo, EvBind, Fresh, LocalTyVar, LocalVal, Theory,
                  elab_env, env_tyvars, lookup_local, tsp_at, tsp_below, tsp_merge)
from .formation import check_scheme, check_type, form_constraint, form_type
from .unify import MetaSubst, UnificationError


def _assert_below(tsp, level):
    assert all(k < level for k in tsp), f"TSP keys {sorted(tsp)} not below {level}"
    return tsp


class ExprElaborator:
    """Checks and elaborates the expressions of one declaration."""

    def __init__(self, theory: Theory, fresh: Fresh):
        self.theory = theory
        self.fresh = fresh
        self.subst = MetaSubst()
        self.info: dict = {}   # id(source node) -> instantiation or splice type

    # pass 1: inference -----------------------------------------------------

    def infer(self, env, level: int, e):
        if isinstance(e, S.Ident):
            local = lookup_local(env, e.name)
            if local is not None:
                if local.level != level:
                    raise StageError(e.name, local.level, level, e.span)
                return local.type
            scheme = self.theory.globals.get(e.name)
            if scheme is None:
                raise TypeCheckError("UnboundVariable", f"variable {e.name} is not in scope",
                                     e.span)
            metas = [self.subst.fresh() for _ in scheme.binders]
            self.info[id(e)] = (e, metas)
            return subst_type(scheme.body, dict(zip(scheme.binders, metas)))
        if isinstance(e, S.Lam):
            check_type(env_tyvars(env), e.ann, e.span)
            body = self.infer(env + (LocalVal(e.var, e.ann, level),), level, e.body)
            return TArrow(e.ann, body)
        if isinstance(e, S.App):
            fun = self.infer(env, level, e.fun)
            arg = self.infer(env, level, e.arg)
            res = self.subst.fresh()
            self.subst.unify(fun, TArrow(arg, res), e.span)
            return res
        if isinstance(e, S.Quote):
            return TCode(self.infer(env, level + 1, e.body))
        if isinstance(e, S.Splice):
            body = self.infer(env, level - 1, e.body)
            res = self.subst.fresh()
            self.subst.unify(body, TCode(res), e.span)
            self.info[id(e)] = (e, [res])
            return res
        if isinstance(e, S.IntLit):
            return INT
        if isinstance(e, S.BoolLit):
            return BOOL
        if isinstance(e, S.StrLit):
            return STRING
        if isinstance(e, S.Ifz):
            self.subst.unify(self.infer(env, level, e.scrutinee), INT, e.span)
            zero = self.infer(env, level, e.zero)
            self.subst.unify(zero, self.infer(env, level, e.succ), e.span)
            return zero
        raise TypeError(f"not a source expression: {e!r}")

    def finalize(self):
        """Zonk recorded types; any metavariable left over is ambiguous."""
        for key, (node, types) in list(self.info.items()):
            zonked = [self.subst.zonk(t) for t in types]
            for t in zonked:
                if metas_of(t):
                    what = node.name if isinstance(node, S.Ident) else "splice"
                    raise TypeCheckError(
                        "AmbiguousType",
                        f"cannot determine the type {pretty_type(t)} at {what}", node.span)
            self.info[key] = (node, zonked)

    # pass 2: elaboration ---------------------------------------------------

    def elab(self, env, level: int, e):
        core, tsp = self._elab(env, level, e)
        return core, _assert_below(tsp, level)

    def _elab(self, env, level, e):
        if isinstance(e, S.Ident):
            if lookup_local(env, e.name) is not None:
                return C.Var(e.name), {}
            scheme = self.theory.globals[e.name]
            _, types = self.info[id(e)]
            mapping = dict(zip(scheme.binders, types))
            core = C.tyapps(C.Global(e.name), *types)
            tsp: dict = {}
            for c in scheme.context:
                ev, ev_tsp = entail(self.theory, env, level, subst_constraint(c, mapping),
                                    self.fresh, e.span)
                core = C.App(core, ev)
                tsp = tsp_merge(tsp, ev_tsp)
            return core, tsp
        if isinstance(e, S.Lam):
            body, tsp = self.elab(env + (LocalVal(e.var, e.ann, level),), level, e.body)
            return C.Lam(e.var, e.ann, body), tsp
        if isinstance(e, S.App):
            fun, tsp1 = self.elab(env, level, e.fun)
            arg, tsp2 = self.elab(env, level, e.arg)
            return C.App(fun, arg), tsp_merge(tsp1, tsp2)
        if isinstance(e, S.Quote):
            body, tsp = self._elab(env, level + 1, e.body)
            _assert_below(tsp, level + 1)
            return C.QuoteC(body, tsp_at(tsp, level)), tsp_below(tsp, level)
        if isinstance(e, S.Splice):
            body, tsp = self.elab(env, level - 1, e.body)
            _, (ty,) = self.info[id(e)]
            sp = self.fresh("sp")
            entry = C.SpliceEntry(elab_env(self.theory, env), sp, ty, body)
            return C.SpliceVar(sp), tsp_merge({level - 1: [entry]}, tsp)
        if isinstance(e, S.IntLit):
            return C.IntLit(e.value), {}
        if isinstance(e, S.BoolLit):
            return C.BoolLit(e.value), {}
        if isinstance(e, S.StrLit):
            return C.StrLit(e.value), {}
        if isinstance(e, S.Ifz):
            s, t1 = self.elab(env, level, e.scrutinee)
            z, t2 = self.elab(env, level, e.zero)
            n, t3 = self.elab(env, level, e.succ)
            return C.Ifz(s, z, n), tsp_merge(t1, t2, t3)
        raise TypeError(f"not a source expression: {e!r}")

    def check(self, env, e, expected, mismatch_code=None):
        """Check ``e`` at level 0 against ``expected``; return (core, TSP)."""
        actual = self.infer(env, 0, e)
        try:
            self.subst.unify(actual, expected, e.span)
        except UnificationError as err:
            if mismatch_code is None:
                raise
            raise TypeCheckError(mismatch_code, err.message, err.span) from None
        self.finalize()
        return self.elab(env, 0, e)


# core helpers ---------------------------------------------------------------

def core_free_vars(e) -> set:
    if isinstance(e, C.Var):
        return {e.name}
    if isinstance(e, C.Lam):
        return core_free_vars(e.body) - {e.var}
    if isinstance(e, C.App):
        return core_free_vars(e.fun) | core_free_vars(e.arg)
    if isinstance(e, (C.TyLam, C.TyApp)):
        return core_free_vars(e.body if isinstance(e, C.TyLam) else e.fun)
    if isinstance(e, C.QuoteC):
        out = core_free_vars(e.body)
        for s in e.env:
            out |= core_free_vars(s.rhs)
        return out
    if isinstance(e, C.Ifz):
        return core_free_vars(e.scrutinee) | core_free_vars(e.zero) | core_free_vars(e.succ)
    return set()


def _prune_delta(env, name):
    return tuple(b for b in env if not (isinstance(b, C.ValBind) and b.name == name))


def prune_binding(e, name):
    """Drop ``name`` from every splice environment inside ``e``."""
    if isinstance(e, C.Lam):
        return C.Lam(e.var, e.type, prune_binding(e.body, name))
    if isinstance(e, C.App):
        return C.App(prune_binding(e.fun, name), prune_binding(e.arg, name))
    if isinstance(e, C.TyLam):
        return C.TyLam(e.var, prune_binding(e.body, name))
    if isinstance(e, C.TyApp):
        return C.TyApp(prune_binding(e.fun, name), e.type)
    if isinstance(e, C.QuoteC):
        return C.QuoteC(prune_binding(e.body, name), tuple(
            C.SpliceEntry(_prune_delta(s.env, name), s.name, s.type, prune_binding(s.rhs, name))
            for s in e.env))
    if isinstance(e, C.Ifz):
        return C.Ifz(prune_binding(e.scrutinee, name), prune_binding(e.zero, name),
                     prune_binding(e.succ, name))
    return e


def collapse(level: int, tsp: dict, rest: list) -> list:
    """Turn TSP entries into spdefs; more negative levels come first."""
    if not tsp:
        return list(rest)
    assert all(k <= level for k in tsp), f"TSP keys {sorted(tsp)} above {level}"
    spdefs = [C.SpDef(s.env, level, s.name, s.type, s.rhs) for s in tsp_at(tsp, level)]
    return collapse(level - 1, tsp_below(tsp, level), spdefs + list(rest))


def _source_names(program) -> set:
    names = set()

    def walk(e):
        if isinstance(e, S.Ident):
            names.add(e.name)
        elif isinstance(e, S.Lam):
            names.add(e.var)
            walk(e.body)
        elif isinstance(e, S.App):
            walk(e.fun)
            walk(e.arg)
        elif isinstance(e, (S.Quote, S.Splice)):
            walk(e.body)
        elif isinstance(e, S.Ifz):
            walk(e.scrutinee)
            walk(e.zero)
            walk(e.succ)

    for d in program.decls:
        names.add(getattr(d, "name", None) or getattr(d, "method", None))
        if hasattr(d, "body"):
            walk(d.body)
    walk(program.main.body)
    return names


def _head_name(t) -> str:
    if isinstance(t, TCon):
        return t.name + "".join(_head_name(a) for a in t.args)
    if isinstance(t, TCode):
        return "Code" + _head_name(t.arg)
    if isinstance(t, TArrow):
        return "Fun" + _head_name(t.dom) + _head_name(t.cod)
    return ""


def _heads_overlap(h1, b1, h2, b2) -> bool:
    subst = MetaSubst()

    def freshen(t, binders):
        return subst_type(t, {b: subst.fresh() for b in binders})

    try:
        subst.unify(freshen(h1, b1), freshen(h2, b2))
    except UnificationError:
        return False
    return True


# declarations ---------------------------------------------------------------

class ProgramChecker:
    def __init__(self, program: S.SourceProgram):
        self.program = program
        self.theory = Theory()
        avoid = _source_names(program)
        self.fresh_supply = Fresh()
        self.fresh = lambda prefix, avoid=avoid: self.fresh_supply(prefix, avoid)

    def fresh_ev(self):
        return self.fresh("ev")

    def declare(self, name, span):
        if self.theory.taken(name):
            raise TypeCheckError("DuplicateName", f"{name} is already defined", span)

    def run(self) -> C.CoreProgram:
        decls = []
        for d in self.program.decls:
            if isinstance(d, S.Def):
                decls += self.check_def(d)
            elif isinstance(d, S.ClassD):
                decls += self.check_class(d)
            else:
                decls += self.check_instance(d)
        main_decls, main = self.check_main(self.program.main)
        return C.CoreProgram(tuple(decls + main_decls), main)

    def _qualified(self, sig: Scheme, body, span):
        """Check ``body`` against a signature; return (core type, wrapped core, TSP)."""
        check_scheme(self.theory, sig, (), span)
        env = tuple(LocalTyVar(a) for a in sig.binders)
        evs = []
        for c in sig.context:
            ev = self.fresh_ev()
            evs.append((ev, form_constraint(self.theory, c)))
            env += (EvBind(ev, c, 0),)
        core, tsp = ExprElaborator(self.theory, self.fresh).check(env, body, sig.body)
        for ev, ty in reversed(evs):
            core = C.Lam(ev, ty, core)
        for a in reversed(sig.binders):
            core = C.TyLam(a, core)
        return form_type(self.theory, sig), core, tsp

    def check_def(self, d: S.Def):
        self.declare(d.name, d.span)
        ty, core, tsp = self._qualified(d.sig, d.body, d.span)
        self.theory.globals[d.name] = d.sig
        self.theory.core_types[d.name] = ty
        return collapse(-1, tsp, [C.CoreDef(d.name, ty, core)])

    def check_class(self, d: S.ClassD):
        if d.cls in self.theory.classes:
            raise TypeCheckError("DuplicateName", f"class {d.cls} is already defined", d.span)
        self.declare(d.method, d.span)
        sig = d.method_sig
        if sig.binders or sig.context:
            raise TypeCheckError(
                "UnsupportedMethodType",
                f"method {d.method} must have a monomorphic, unqualified type", d.span)
        check_type({d.tyvar}, sig.body, d.span)
        self.theory.classes[d.cls] = ClassInfo(d.cls, d.tyvar, d.method, sig.body)
        self.theory.globals[d.method] = Scheme((d.tyvar,), (ClassC(d.cls, TVar(d.tyvar)),),
                                               sig.body)
        # the dictionary is the method itself, so the selector is the identity
        ty = TForall(d.tyvar, TArrow(sig.body, sig.body))
        self.theory.core_types[d.method] = ty
        body = C.TyLam(d.tyvar, C.Lam("ev", sig.body, C.Var("ev")))
        return [C.CoreDef(d.method, ty, body)]

    def check_instance(self, d: S.InstD):
        info = self.theory.classes.get(d.cls)
        if info is None:
            raise TypeCheckError("UnknownClass", f"unknown class {d.cls}", d.span)
        if d.method != info.method:
            raise TypeCheckError(
                "UnknownMethod", f"class {d.cls} has no method {d.method}", d.span)
        binders = tuple(free_type_vars(d.head))
        for ax in self.theory.axioms:
            if ax.head.cls == d.cls and _heads_overlap(ax.head.arg, ax.binders, d.head, binders):
                raise TypeCheckError(
                    "OverlappingInstance",
                    f"instance {d.cls} {pretty_type(d.head)} overlaps with {ax.ev}", d.span)
        ev = "ev" + d.cls + _head_name(d.head)
        if self.theory.taken(ev):
            i = 1
            while self.theory.taken(f"{ev}{i}"):
                i += 1
            ev = f"{ev}{i}"
        method_ty = subst_type(info.method_type, {info.tyvar: d.head})
        head = ClassC(d.cls, d.head)
        check_scheme(self.theory, Scheme(binders, d.context, method_ty), (), d.span)

        env = tuple(LocalTyVar(b) for b in binders)
        ctx = []
        for c in d.context:
            name = self.fresh_ev()
            ctx.append((name, form_constraint(self.theory, c)))
            env += (EvBind(name, c, 0),)
        env += (EvBind(ev, head, 0),)
        core, tsp = ExprElaborator(self.theory, self.fresh).check(
            env, d.body, method_ty, mismatch_code="MethodSignatureMismatch")

        uses_self = ev in core_free_vars(core) or any(
            ev in core_free_vars(s.rhs) for entries in tsp.values() for s in entries)
        if uses_self:
            if not isinstance(method_ty, TArrow):
                raise TypeCheckError(
                    "RecursiveInstanceNotFunction",
                    f"instance {d.cls} {pretty_type(d.head)} refers to itself but its "
                    f"method type {pretty_type(method_ty)} is not a function", d.span)
            core = C.App(C.tyapps(C.Global("fix"), method_ty.dom, method_ty.cod),
                         C.Lam(ev, method_ty, core))
        else:
            core = prune_binding(core, ev)
            tsp = {k: [C.SpliceEntry(_prune_delta(s.env, ev), s.name, s.type,
                                     prune_binding(s.rhs, ev)) for s in v]
                   for k, v in tsp.items()}
        for name, ty in reversed(ctx):
            core = C.Lam(name, ty, core)
        for b in reversed(binders):
            core = C.TyLam(b, core)
        ty = method_ty
        for _, cty in reversed(ctx):
            ty = TArrow(cty, ty)
        for b in reversed(binders):
            ty = TForall(b, ty)
        self.theory.axioms.append(Axiom(ev, binders, tuple(d.context), head))
        self.theory.core_types[ev] = ty
        return collapse(-1, tsp, [C.CoreDef(ev, ty, core)])

    def check_main(self, m: S.Main):
        if m.sig is not None:
            ty, core, tsp = self._qualified(m.sig, m.body, m.span)
        else:
            ex = ExprElaborator(self.theory, self.fresh)
            ty = ex.subst.zonk(ex.infer((), 0, m.body))
            ex.finalize()
            ty = ex.subst.zonk(ty)
            if metas_of(ty):
                raise TypeCheckError(
                    "AmbiguousType",
                    f"the type {pretty_type(ty)} of main is ambiguous; add a signature",
                    m.span)
            core, tsp = ex.elab((), 0, m.body)
        decls = collapse(-1, tsp, [])
        return decls, C.CoreMain(core, ty)


def check_program(program: S.SourceProgram) -> C.CoreProgram:
    """Typecheck and elaborate a whole source program."""
    return ProgramChecker(program).run()


def check_expr(theory, env, level, e, fresh=None, expected=None):
    """Infer (or check against ``expected``) and elaborate: (type, core, TSP)."""
    ex = ExprElaborator(theory, fresh or Fresh())
    ty = ex.infer(tuple(env), level, e)
    if expected is not None:
        ex.subst.unify(ty, expected, getattr(e, "span", None))
    ex.finalize()
    ty = ex.subst.zonk(ty)
    core, tsp = ex.elab(tuple(env), level, e)
    return ty, core, tsp

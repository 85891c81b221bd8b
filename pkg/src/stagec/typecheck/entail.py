"""Level-indexed constraint entailment with evidence elaboration.

A wanted (C, n) is normalised to (base C, n + depth C).  A local given
(D, m) matches when its normal form is the same; the difference in CodeC
depth is made up either by quoting the evidence (fewer wrappers wanted) or by
splicing it through fresh splice points (more wrappers given).  Global
axioms are matched one-way in declaration order and may be used at any level.
"""

from __future__ import annotations

from ..errors import TypeCheckError
from ..syntax import core as C
from ..syntax.pretty import pretty_constraint
from ..syntax.types import (ClassC, TArrow, TCode, TCon, TVar, constraint_base,
                            constraint_depth, subst_constraint, wrap_codec)
from .env import EvBind, elab_env, tsp_at, tsp_below, tsp_merge
from .formation import form_constraint

MAX_SEARCH_DEPTH = 32


class EntailError(TypeCheckError):
    pass


def match_type(pattern, target, binders, mapping) -> bool:
    """One-way matching: extend ``mapping`` so pattern[mapping] == target."""
    if isinstance(pattern, TVar) and pattern.name in binders:
        bound = mapping.get(pattern.name)
        if bound is None:
            mapping[pattern.name] = target
            return True
        return bound == target
    if type(pattern) is not type(target):
        return False
    if isinstance(pattern, TVar):
        return pattern.name == target.name
    if isinstance(pattern, TCon):
        return pattern.name == target.name and len(pattern.args) == len(target.args) \
            and all(match_type(p, t, binders, mapping) for p, t in zip(pattern.args, target.args))
    if isinstance(pattern, TArrow):
        return match_type(pattern.dom, target.dom, binders, mapping) and \
            match_type(pattern.cod, target.cod, binders, mapping)
    if isinstance(pattern, TCode):
        return match_type(pattern.arg, target.arg, binders, mapping)
    return pattern == target


def match_axiom(axiom, base: ClassC):
    if axiom.head.cls != base.cls:
        return None
    mapping: dict = {}
    if match_type(axiom.head.arg, base.arg, set(axiom.binders), mapping):
        return mapping
    return None


def quote_down(evidence, tsp, from_level: int, to_level: int):
    """Wrap evidence typed at ``from_level`` in quotes until it sits at ``to_level``.

    Each quote at level m captures the splice points registered at m.
    """
    for m in range(from_level - 1, to_level - 1, -1):
        evidence = C.QuoteC(evidence, tsp_at(tsp, m))
        tsp = tsp_below(tsp, m)
    return evidence, tsp


class Entailer:
    def __init__(self, theory, env, fresh, span=None):
        self.theory = theory
        self.env = tuple(env)
        self.fresh = fresh
        self.span = span

    def solve(self, wanted, level: int, depth: int = 0):
        if depth > MAX_SEARCH_DEPTH:
            raise EntailError(
                "InstanceSearchDepthExceeded",
                f"instance search for {pretty_constraint(wanted)} exceeded depth "
                f"{MAX_SEARCH_DEPTH}", self.span)
        base = constraint_base(wanted)
        norm = level + constraint_depth(wanted)
        for entry in reversed(self.env):
            if isinstance(entry, EvBind) and constraint_base(entry.constraint) == base \
                    and entry.level + constraint_depth(entry.constraint) == norm:
                return self.from_local(entry, wanted, level)
        for axiom in self.theory.axioms:
            mapping = match_axiom(axiom, base)
            if mapping is None:
                continue
            evidence = C.tyapps(C.Global(axiom.ev), *[mapping[b] for b in axiom.binders])
            tsp: dict = {}
            for ctx in axiom.context:
                sub, sub_tsp = self.solve(subst_constraint(ctx, mapping), norm, depth + 1)
                evidence = C.App(evidence, sub)
                tsp = tsp_merge(tsp, sub_tsp)
            return quote_down(evidence, tsp, norm, level)
        raise self.no_evidence(wanted, level)

    def from_local(self, given: EvBind, wanted, level):
        given_depth = constraint_depth(given.constraint)
        wanted_depth = constraint_depth(wanted)
        if wanted_depth >= given_depth:
            # fewer wrappers given than wanted: quote the evidence
            return quote_down(C.Var(given.name), {}, given.level, level)
        delta = elab_env(self.theory, self.env)
        base = constraint_base(wanted)
        term = C.Var(given.name)
        tsp: dict = {}
        for i in range(1, given_depth - wanted_depth + 1):
            sp = self.fresh("sp")
            ty = form_constraint(self.theory, wrap_codec(base, given_depth - i))
            tsp = tsp_merge(tsp, {given.level + i - 1: [C.SpliceEntry(delta, sp, ty, term)]})
            term = C.SpliceVar(sp)
        return term, tsp

    def no_evidence(self, wanted, level):
        msg = f"no evidence for {pretty_constraint(wanted)} at level {level}"
        base = constraint_base(wanted)
        for entry in reversed(self.env):
            if isinstance(entry, EvBind) and constraint_base(entry.constraint) == base:
                have = entry.level + constraint_depth(entry.constraint) - constraint_depth(wanted)
                hint = "; consider CodeC" if have < level else ""
                msg += f" (have it at level {have}{hint})"
                break
        return EntailError("NoEvidence", msg, self.span)


def entail(theory, env, level, wanted, fresh, span=None):
    """Return (evidence, TSP) for ``wanted`` at ``level`` or raise EntailError."""
    return Entailer(theory, env, fresh, span).solve(wanted, level)

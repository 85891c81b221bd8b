"""Built-in globals: source signatures shared by the typechecker, lint and evaluator."""

from __future__ import annotations

from .syntax.types import BOOL, INT, STRING, Scheme, TCon, TForall, TVar, arrows

_a, _b = TVar("a"), TVar("b")


def _list(t):
    return TCon("List", (t,))


def _pair(s, t):
    return TCon("Pair", (s, t))


BUILTIN_SCHEMES = {
    "add": Scheme.mono(arrows(INT, INT, INT)),
    "sub": Scheme.mono(arrows(INT, INT, INT)),
    "mul": Scheme.mono(arrows(INT, INT, INT)),
    "eqInt": Scheme.mono(arrows(INT, INT, BOOL)),
    "and": Scheme.mono(arrows(BOOL, BOOL, BOOL)),
    "showInt": Scheme.mono(arrows(INT, STRING)),
    "concat": Scheme.mono(arrows(STRING, STRING, STRING)),
    "fix": Scheme(("a", "b"), (),
                  arrows(arrows(arrows(_a, _b), _a, _b), _a, _b)),
    "nil": Scheme(("a",), (), _list(_a)),
    "cons": Scheme(("a",), (), arrows(_a, _list(_a), _list(_a))),
    "matchList": Scheme(("a", "b"), (),
                        arrows(_list(_a), _b, arrows(_a, _list(_a), _b), _b)),
    "pair": Scheme(("a", "b"), (), arrows(_a, _b, _pair(_a, _b))),
    "fstP": Scheme(("a", "b"), (), arrows(_pair(_a, _b), _a)),
    "sndP": Scheme(("a", "b"), (), arrows(_pair(_a, _b), _b)),
}


def _core_type(s: Scheme):
    t = s.body
    for v in reversed(s.binders):
        t = TForall(v, t)
    return t


BUILTIN_CORE_TYPES = {k: _core_type(s) for k, s in BUILTIN_SCHEMES.items()}


# value arguments needed before a builtin call reduces (type arguments are
# always supplied first); constructors are values once saturated
DELTA_ARITY = {
    "add": 2, "sub": 2, "mul": 2, "eqInt": 2, "and": 2, "showInt": 1,
    "concat": 2, "fix": 1, "matchList": 3, "fstP": 1, "sndP": 1,
    "nil": 0, "cons": 2, "pair": 2,
}
CONSTRUCTORS = {"nil", "cons", "pair"}

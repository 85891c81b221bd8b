"""Core lint: the independent checker for elaborated programs."""

import pytest
from hypothesis import given, settings, strategies as st

from stagec.core.lint import CoreTheory, env_contained, lint_expr, lint_program
from stagec.errors import LintError
from stagec.syntax import core as C
from stagec.syntax.parser import parse_core_expr, parse_core_program
from stagec.syntax.pretty import pretty_type
from stagec.syntax.types import BOOL, INT, STRING, TArrow, TCode, TVar

from conftest import GOLDEN, elaborate

A_STR = TArrow(TVar("a"), STRING)


def lint_code(text):
    with pytest.raises(LintError) as info:
        lint_program(parse_core_program(text))
    return info.value.code


def test_closed_quote_of_literal():
    assert lint_expr(CoreTheory(), (), 0, C.QuoteC(C.IntLit(1), ())) == TCode(INT)


def test_elaborated_codec_definition():
    core = elaborate("class Show a where show :: a -> String ;\n"
                     "def c1' :: forall a . CodeC (Show a) => Code (a -> String) = [| show |] ;\n"
                     "main = 0")
    theory = CoreTheory()
    lint_program(C.CoreProgram(core.decls[:1], core.main), theory)
    c1 = core.decls[1]
    ty = lint_expr(theory, (), 0, c1.body)
    assert pretty_type(ty) == "forall a . Code (a -> String) -> Code (a -> String)"


def test_worked_example_lints():
    theory = lint_program(parse_core_program((GOLDEN / "worked_example.core").read_text()))
    assert theory.splices["sp1"] == ((C.TyVarBind("a"), C.ValBind("ev1", A_STR, 0)), A_STR)


def test_captured_environment_must_be_present():
    delta = (C.ValBind("x", INT, 0),)
    theory = CoreTheory(splices={"sp": (delta, INT)})
    with pytest.raises(LintError) as info:
        lint_expr(theory, (), 0, C.SpliceVar("sp"))
    assert info.value.code == "LintEnvMismatch"
    assert lint_expr(theory, delta, 0, C.SpliceVar("sp")) == INT


def test_top_splice_variable_at_any_level():
    theory = CoreTheory(splices={"sp": ((), INT)})
    for level in (-1, 0, 3):
        assert lint_expr(theory, (), level, C.SpliceVar("sp")) == INT


def test_forward_global_reference():
    text = ("spdef<-1> () |- sp0 : Int = [| later |]{} ;\n"
            "def later : Int = 1 ;\nmain : Int = sp0")
    assert lint_code(text) == "ForwardGlobalReference"
    ok = "def later : Int = 1 ;\nspdef<-1> () |- sp0 : Int = [| later |]{} ;\nmain : Int = sp0"
    lint_program(parse_core_program(ok))


def test_literal_main():
    lint_program(parse_core_program("main : Int = 7"))


@pytest.mark.parametrize("text,code", [
    (r"main : Int -> Code Int = \x : Int -> [| x |]{}", "LintStageError"),
    ("main : Int = true", "LintTypeMismatch"),
    ("main : Int = add 1 true", "LintTypeMismatch"),
    ("main : Int = nope", "UnboundGlobal"),
    (r"main : Int -> Int = \x : b -> 1", "UnboundTypeVariable"),
    ("def k : Int = 1 ;\ndef k : Int = 2 ;\nmain : Int = k", "DuplicateName"),
    ("spdef<-1> (x : Int @ 0) |- sp0 : Int = [| 1 |]{} ;\nmain : Int = sp0",
     "LintEnvMismatch"),
    ("main : Code Int = [| sp0 |]{ () |- sp0 : Int = 5 }", "LintTypeMismatch"),
])
def test_lint_errors(text, code):
    assert lint_code(text) == code


def test_unbound_splice_variable():
    with pytest.raises(LintError) as info:
        lint_expr(CoreTheory(), (), 0, C.SpliceVar("sp9"))
    assert info.value.code == "UnboundSpliceVar"


def test_splice_point_level_is_checked():
    # a splice point bound at level 1 used inside a nested quote at level 2
    e = parse_core_expr("[| [| sp0 |]{} |]{ () |- sp0 : Int = [| 1 |]{} }")
    with pytest.raises(LintError) as info:
        lint_expr(CoreTheory(), (), 0, e)
    assert info.value.code == "LintStageError"


def test_containment_is_ordered():
    x, y = C.ValBind("x", INT, 0), C.ValBind("y", BOOL, 0)
    assert env_contained((x, y), (x, C.TyVarBind("a"), y))
    assert not env_contained((y, x), (x, y))
    assert not env_contained((C.ValBind("x", INT, 1),), (x,))
    assert env_contained((), (x,))


def test_accepted_corpus_lints(accepted_core):
    lint_program(accepted_core)


# totality on random terms ----------------------------------------------------------

names = st.sampled_from(["x", "y", "sp0", "add", "fix"])
types = st.sampled_from([INT, BOOL, TCode(INT), TArrow(INT, INT), TVar("a")])
terms = st.recursive(
    st.one_of(st.builds(C.Var, names), st.builds(C.Global, names),
              st.builds(C.SpliceVar, names), st.builds(C.IntLit, st.integers(0, 3))),
    lambda sub: st.one_of(
        st.builds(C.App, sub, sub),
        st.builds(C.Lam, names, types, sub),
        st.builds(C.TyLam, st.just("a"), sub),
        st.builds(C.TyApp, sub, types),
        st.builds(lambda b, rhs, t: C.QuoteC(b, (C.SpliceEntry((), "sp0", t, rhs),)),
                  sub, sub, types),
        st.builds(C.Ifz, sub, sub, sub)),
    max_leaves=8)


@settings(max_examples=300, deadline=None)
@given(terms, st.integers(-2, 2))
def test_lint_is_total(e, level):
    try:
        lint_expr(CoreTheory(), (), level, e)
    except LintError:
        pass

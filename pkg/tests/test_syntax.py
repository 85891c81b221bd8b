"""Parser and pretty-printer: examples, round trips, error positions."""

import pytest
from hypothesis import given, settings, strategies as st

from stagec.errors import ParseError
from stagec.syntax import core as C
from stagec.syntax import source as S
from stagec.syntax.lexer import KEYWORDS
from stagec.syntax.parser import (parse_core_expr, parse_core_program, parse_expr,
                                  parse_program, parse_scheme, parse_type)
from stagec.syntax.pretty import (pretty_core, pretty_core_program, pretty_decl,
                                  pretty_expr, pretty_program, pretty_scheme, pretty_type)
from stagec.syntax.types import (INT, STRING, ClassC, CodeC, TArrow, TCode, TCon, TVar)

from conftest import CORPUS_FILES, GOLDEN


def test_identity_program():
    p = parse_program(r"def id :: forall a . a -> a = \x : a -> x ; main = id")
    assert len(p.decls) == 1
    d = p.decls[0]
    assert isinstance(d, S.Def) and d.name == "id"
    assert d.sig.binders == ("a",)
    assert d.body == S.Lam("x", TVar("a"), S.Ident("x"))
    assert p.main.body == S.Ident("id")


def test_power_splice_shape():
    e = parse_expr("$( power 5 [| n |] )")
    assert e == S.Splice(S.apps(S.Ident("power"), S.IntLit(5), S.Quote(S.Ident("n"))))


def test_truncated_main_reports_end_of_input():
    with pytest.raises(ParseError) as info:
        parse_program("main =")
    err = info.value
    assert (err.span.line, err.span.col) == (1, 7)
    assert "expression" in err.expected
    assert "end of input" in err.message


def test_parse_error_position_on_later_line():
    with pytest.raises(ParseError) as info:
        parse_program("def x :: Int = 1 ;\nmain = )")
    assert info.value.span.line == 2


def test_types_and_constraints():
    assert parse_type("Code (a -> String)") == TCode(TArrow(TVar("a"), STRING))
    assert parse_type("List Int -> Int") == TArrow(TCon("List", (INT,)), INT)
    s = parse_scheme("forall a . CodeC (Show a) => Code (a -> String)")
    assert s.context == (CodeC(ClassC("Show", TVar("a"))),)
    assert pretty_scheme(s) == "forall a . CodeC (Show a) => Code (a -> String)"


def test_trailing_lambda_argument():
    e = parse_expr(r"matchList xs 0 \h : Int -> \t : List Int -> h")
    assert isinstance(e, S.App) and isinstance(e.arg, S.Lam)


def test_instance_context_list():
    p = parse_program("class Eq a where eq :: a -> a -> Bool ;\n"
                      "instance (Eq a, Eq b) => Eq (Pair a b) where eq = eq ;\nmain = 1")
    inst = p.decls[1]
    assert [c.cls for c in inst.context] == ["Eq", "Eq"]
    assert inst.head == TCon("Pair", (TVar("a"), TVar("b")))


def test_corpus_round_trip(corpus_file):
    p = parse_program(corpus_file.read_text())
    assert parse_program(pretty_program(p)) == p


def test_pretty_is_injective_on_corpus():
    seen = {}
    for f in CORPUS_FILES:
        p = parse_program(f.read_text())
        for d in p.decls:
            seen.setdefault(d, set()).add(pretty_decl(d))
    printed = [next(iter(v)) for v in seen.values()]
    assert len(set(printed)) == len(printed)


def test_empty_quote_environment_prints_braces():
    assert pretty_core(C.QuoteC(C.IntLit(1), ())) == "[| 1 |]{}"


def test_worked_example_prints_spdef_before_main():
    text = (GOLDEN / "worked_example.core").read_text()
    lines = text.splitlines()
    assert lines[2].startswith("spdef<-1>") and lines[3].startswith("main ")
    assert pretty_core_program(parse_core_program(text)) + "\n" == text


def test_core_golden_files_reparse():
    for f in sorted((GOLDEN / "corpus").glob("*.core")):
        text = f.read_text()
        assert pretty_core_program(parse_core_program(text)) + "\n" == text


def test_core_expression_scoping():
    e = parse_core_expr(r"\x : Int -> [| add x 1 |]{}")
    assert e.body.body == C.apps(C.Global("add"), C.Var("x"), C.IntLit(1))
    q = parse_core_expr("[| sp0 |]{ () |- sp0 : Int = [| 2 |]{} }")
    assert q.body == C.SpliceVar("sp0")


# random round trips -----------------------------------------------------------

idents = st.from_regex(r"[a-z][a-z0-9]{0,3}", fullmatch=True).filter(
    lambda s: s not in KEYWORDS)

types = st.recursive(
    st.sampled_from([INT, STRING, TCon("Bool"), TVar("a"), TVar("b")]),
    lambda sub: st.one_of(
        st.builds(TArrow, sub, sub),
        st.builds(TCode, sub),
        st.builds(lambda t: TCon("List", (t,)), sub),
        st.builds(lambda t, u: TCon("Pair", (t, u)), sub, sub)),
    max_leaves=6)

exprs = st.recursive(
    st.one_of(
        st.builds(S.Ident, idents),
        st.builds(S.IntLit, st.integers(-50, 50)),
        st.builds(S.BoolLit, st.booleans()),
        st.builds(S.StrLit, st.text(alphabet='ab "\\\n', max_size=4))),
    lambda sub: st.one_of(
        st.builds(S.App, sub, sub),
        st.builds(S.Lam, idents, types, sub),
        st.builds(S.Quote, sub),
        st.builds(S.Splice, sub),
        st.builds(S.Ifz, sub, sub, sub)),
    max_leaves=10)


@settings(max_examples=300, deadline=None)
@given(types)
def test_type_round_trip(t):
    assert parse_type(pretty_type(t)) == t


@settings(max_examples=300, deadline=None)
@given(exprs)
def test_expr_round_trip(e):
    assert parse_expr(pretty_expr(e)) == e

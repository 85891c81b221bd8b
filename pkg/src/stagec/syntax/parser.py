"""Recursive-descent parsers for source programs (.sth) and pretty core."""

from __future__ import annotations

from ..errors import ParseError
from . import core as C
from . import source as S
from .lexer import Token, tokenize
from .types import (TYPE_CONSTRUCTORS, ClassC, CodeC, Scheme, TArrow, TCode,
                    TCon, TForall, TVar)

RESERVED_CONS = set(TYPE_CONSTRUCTORS) | {"Code", "CodeC"}
_EXPR_STOP = {")", "|]", ";", "}", "then", "else", ">", ","}


class _Parser:
    def __init__(self, text: str):
        self.toks = tokenize(text)
        self.pos = 0

    # token helpers ---------------------------------------------------------

    @property
    def tok(self) -> Token:
        return self.toks[self.pos]

    def at(self, text, kind=None) -> bool:
        t = self.tok
        if kind is not None and t.kind != kind:
            return False
        return t.text == text and t.kind in ("sym", "kw")

    def advance(self) -> Token:
        t = self.tok
        if t.kind != "eof":
            self.pos += 1
        return t

    def fail(self, expected):
        t = self.tok
        found = "end of input" if t.kind == "eof" else repr(t.text)
        exp = sorted(set(expected))
        raise ParseError(f"expected {' or '.join(exp)}, found {found}",
                         t.span, exp)

    def expect(self, text) -> Token:
        if self.tok.text == text and self.tok.kind in ("sym", "kw"):
            return self.advance()
        self.fail([repr(text)])

    def expect_kind(self, kind, what=None) -> Token:
        if self.tok.kind == kind:
            return self.advance()
        self.fail([what or kind])

    def ident(self) -> str:
        return self.expect_kind("ident", "identifier").text

    def con(self) -> str:
        return self.expect_kind("con", "constructor").text

    def attempt(self, fn):
        """Run ``fn``; on ParseError rewind and return None."""
        saved = self.pos
        try:
            return fn()
        except ParseError:
            self.pos = saved
            return None

    # types -----------------------------------------------------------------

    def type_(self, allow_forall=False):
        if allow_forall and self.at("forall"):
            self.advance()
            names = [self.ident()]
            while self.tok.kind == "ident":
                names.append(self.ident())
            self.expect(".")
            body = self.type_(allow_forall)
            for n in reversed(names):
                body = TForall(n, body)
            return body
        left = self.btype(allow_forall)
        if self.at("->"):
            self.advance()
            return TArrow(left, self.type_(allow_forall))
        return left

    def btype(self, allow_forall=False):
        t = self.tok
        if t.kind == "con":
            arity = TYPE_CONSTRUCTORS.get(t.text)
            if t.text == "Code":
                self.advance()
                return TCode(self.atype(allow_forall))
            if arity is None:
                self.fail(["type"])
            self.advance()
            args = tuple(self.atype(allow_forall) for _ in range(arity))
            return TCon(t.text, args)
        return self.atype(allow_forall)

    def atype(self, allow_forall=False):
        t = self.tok
        if t.kind == "ident":
            self.advance()
            return TVar(t.text)
        if t.kind == "con" and TYPE_CONSTRUCTORS.get(t.text) == 0:
            self.advance()
            return TCon(t.text)
        if self.at("("):
            self.advance()
            ty = self.type_(allow_forall)
            self.expect(")")
            return ty
        self.fail(["type"])

    # constraints and schemes ----------------------------------------------

    def constraint(self):
        t = self.tok
        if t.kind == "con" and t.text == "CodeC":
            self.advance()
            if self.at("("):
                self.advance()
                inner = self.constraint()
                self.expect(")")
                return CodeC(inner)
            return CodeC(self.constraint())
        if self.at("("):
            self.advance()
            c = self.constraint()
            self.expect(")")
            return c
        if t.kind == "con" and t.text not in RESERVED_CONS:
            self.advance()
            return ClassC(t.text, self.atype())
        self.fail(["constraint"])

    def scheme(self) -> Scheme:
        binders = []
        if self.at("forall"):
            self.advance()
            binders.append(self.ident())
            while self.tok.kind == "ident":
                binders.append(self.ident())
            self.expect(".")
        context = []
        while True:
            def qualifier():
                c = self.constraint()
                self.expect("=>")
                return c
            c = self.attempt(qualifier)
            if c is None:
                break
            context.append(c)
        return Scheme(tuple(binders), tuple(context), self.type_())


class SourceParser(_Parser):
    def program(self) -> S.SourceProgram:
        decls = []
        while not self.at("main"):
            if self.at("def"):
                decls.append(self.def_())
            elif self.at("class"):
                decls.append(self.class_())
            elif self.at("instance"):
                decls.append(self.instance())
            else:
                self.fail(["'def'", "'class'", "'instance'", "'main'"])
            self.expect(";")
        span = self.advance().span
        sig = None
        if self.at("::"):
            self.advance()
            sig = self.scheme()
        self.expect("=")
        body = self.expr()
        if self.at(";"):
            self.advance()
        if self.tok.kind != "eof":
            self.fail(["end of input"])
        return S.SourceProgram(tuple(decls), S.Main(body, sig, span))

    def def_(self):
        span = self.expect("def").span
        name = self.ident()
        self.expect("::")
        sig = self.scheme()
        self.expect("=")
        return S.Def(name, sig, self.expr(), span)

    def class_(self):
        span = self.expect("class").span
        cls = self.con()
        if cls in RESERVED_CONS:
            raise ParseError(f"{cls} cannot be used as a class name", span)
        tyvar = self.ident()
        self.expect("where")
        method = self.ident()
        self.expect("::")
        return S.ClassD(cls, tyvar, method, self.scheme(), span)

    def instance(self):
        span = self.expect("instance").span

        def context():
            if self.at("("):
                self.advance()
                cs = []
                if not self.at(")"):
                    cs.append(self.constraint())
                    while self.at(","):
                        self.advance()
                        cs.append(self.constraint())
                self.expect(")")
            else:
                cs = [self.constraint()]
            self.expect("=>")
            return tuple(cs)

        ctx = self.attempt(context) or ()
        cls = self.con()
        head = self.atype()
        self.expect("where")
        method = self.ident()
        self.expect("=")
        return S.InstD(ctx, cls, head, method, self.expr(), span)

    # expressions -----------------------------------------------------------

    def expr(self):
        t = self.tok
        if self.at("\\"):
            self.advance()
            var = self.ident()
            self.expect(":")
            ann = self.btype()
            self.expect("->")
            return S.Lam(var, ann, self.expr(), t.span)
        if self.at("ifz"):
            self.advance()
            scrut = self.expr()
            self.expect("then")
            zero = self.expr()
            self.expect("else")
            return S.Ifz(scrut, zero, self.expr(), t.span)
        return self.app_expr()

    def app_expr(self):
        fun = self.aexpr()
        while True:
            t = self.tok
            if t.kind == "eof" or (t.kind in ("sym", "kw") and t.text in _EXPR_STOP):
                return fun
            if self.at("\\") or self.at("ifz"):
                return S.App(fun, self.expr(), fun.span)
            fun = S.App(fun, self.aexpr(), fun.span)

    def aexpr(self):
        t = self.tok
        if t.kind == "ident":
            self.advance()
            return S.Ident(t.text, t.span)
        if t.kind == "int":
            self.advance()
            return S.IntLit(int(t.text), t.span)
        if t.kind == "string":
            self.advance()
            return S.StrLit(t.text, t.span)
        if self.at("true") or self.at("false"):
            self.advance()
            return S.BoolLit(t.text == "true", t.span)
        if self.at("[|"):
            self.advance()
            body = self.expr()
            self.expect("|]")
            return S.Quote(body, t.span)
        if self.at("$("):
            self.advance()
            body = self.expr()
            self.expect(")")
            return S.Splice(body, t.span)
        if self.at("("):
            self.advance()
            e = self.expr()
            self.expect(")")
            return e
        self.fail(["expression"])


class CoreParser(_Parser):
    """Parser for pretty-printed core; resolves identifiers by scope."""

    def program(self) -> C.CoreProgram:
        decls = []
        self.top_splices = set()
        while not self.at("main"):
            if self.at("def"):
                self.advance()
                name = self.name()
                self.expect(":")
                ty = self.type_(True)
                self.expect("=")
                decls.append(C.CoreDef(name, ty, self.expr([])))
            elif self.at("spdef"):
                self.advance()
                self.expect("<")
                level = int(self.expect_kind("int", "level").text)
                self.expect(">")
                env = self.env()
                self.expect("|-")
                name = self.ident()
                self.expect(":")
                ty = self.type_(True)
                self.expect("=")
                body = self.expr(self.env_scope(env))
                decls.append(C.SpDef(env, level, name, ty, body))
                self.top_splices.add(name)
            else:
                self.fail(["'def'", "'spdef'", "'main'"])
            self.expect(";")
        self.advance()
        self.expect(":")
        ty = self.type_(True)
        self.expect("=")
        body = self.expr([])
        if self.at(";"):
            self.advance()
        if self.tok.kind != "eof":
            self.fail(["end of input"])
        return C.CoreProgram(tuple(decls), C.CoreMain(body, ty))

    def name(self) -> str:
        if self.tok.kind == "ident":
            return self.advance().text
        self.fail(["identifier"])

    def env(self) -> tuple:
        self.expect("(")
        entries = []
        if not self.at(")"):
            entries.append(self.env_entry())
            while self.at(","):
                self.advance()
                entries.append(self.env_entry())
        self.expect(")")
        return tuple(entries)

    def env_entry(self):
        name = self.ident()
        if not self.at(":"):
            return C.TyVarBind(name)
        self.advance()
        ty = self.type_(True)
        self.expect("@")
        level = int(self.expect_kind("int", "level").text)
        return C.ValBind(name, ty, level)

    @staticmethod
    def env_scope(env) -> list:
        return [(e.name, "var") for e in env if isinstance(e, C.ValBind)]

    def resolve(self, name, scope):
        for n, kind in reversed(scope):
            if n == name:
                return C.Var(name) if kind == "var" else C.SpliceVar(name)
        if name in self.top_splices:
            return C.SpliceVar(name)
        return C.Global(name)

    def expr(self, scope):
        if self.at("\\"):
            self.advance()
            var = self.ident()
            self.expect(":")
            ty = self.btype(True)
            self.expect("->")
            return C.Lam(var, ty, self.expr(scope + [(var, "var")]))
        if self.at("/\\"):
            self.advance()
            var = self.ident()
            self.expect(".")
            return C.TyLam(var, self.expr(scope))
        if self.at("ifz"):
            self.advance()
            scrut = self.expr(scope)
            self.expect("then")
            zero = self.expr(scope)
            self.expect("else")
            return C.Ifz(scrut, zero, self.expr(scope))
        fun = self.atom(scope)
        while True:
            t = self.tok
            if self.at("<"):
                self.advance()
                ty = self.type_(True)
                self.expect(">")
                fun = C.TyApp(fun, ty)
            elif t.kind == "eof" or (t.kind in ("sym", "kw") and t.text in _EXPR_STOP):
                return fun
            elif self.at("\\") or self.at("/\\") or self.at("ifz"):
                return C.App(fun, self.expr(scope))
            else:
                fun = C.App(fun, self.atom(scope))

    def atom(self, scope):
        t = self.tok
        if t.kind == "ident":
            self.advance()
            return self.resolve(t.text, scope)
        if t.kind == "int":
            self.advance()
            return C.IntLit(int(t.text))
        if t.kind == "string":
            self.advance()
            return C.StrLit(t.text)
        if self.at("true") or self.at("false"):
            self.advance()
            return C.BoolLit(t.text == "true")
        if self.at("[|"):
            self.advance()
            # splice entries follow the body but scope over it: parse them
            # first by scanning ahead is awkward, so collect body tokens lazily
            body_start = self.pos
            self.skip_balanced_quote()
            self.expect("{")
            entries = []
            if not self.at("}"):
                entries.append(self.splice_entry(scope))
                while self.at(";"):
                    self.advance()
                    entries.append(self.splice_entry(scope))
            self.expect("}")
            end = self.pos
            self.pos = body_start
            inner = scope + [(e.name, "sp") for e in entries]
            body = self.expr(inner)
            self.expect("|]")
            self.pos = end
            return C.QuoteC(body, tuple(entries))
        if self.at("("):
            self.advance()
            e = self.expr(scope)
            self.expect(")")
            return e
        self.fail(["expression"])

    def skip_balanced_quote(self):
        depth = 1
        while depth:
            t = self.advance()
            if t.kind == "eof":
                self.fail(["'|]'"])
            if t.kind == "sym" and t.text == "[|":
                depth += 1
            elif t.kind == "sym" and t.text == "|]":
                depth -= 1

    def splice_entry(self, scope):
        env = self.env()
        self.expect("|-")
        name = self.ident()
        self.expect(":")
        ty = self.type_(True)
        self.expect("=")
        rhs = self.expr(scope + self.env_scope(env))
        return C.SpliceEntry(env, name, ty, rhs)


def parse_program(text: str) -> S.SourceProgram:
    return SourceParser(text).program()


def parse_expr(text: str) -> S.Expr:
    p = SourceParser(text)
    e = p.expr()
    if p.tok.kind != "eof":
        p.fail(["end of input"])
    return e


def parse_type(text: str):
    p = SourceParser(text)
    t = p.type_(allow_forall=True)
    if p.tok.kind != "eof":
        p.fail(["end of input"])
    return t


def parse_scheme(text: str) -> Scheme:
    p = SourceParser(text)
    s = p.scheme()
    if p.tok.kind != "eof":
        p.fail(["end of input"])
    return s


def parse_constraint(text: str):
    p = SourceParser(text)
    c = p.constraint()
    if p.tok.kind != "eof":
        p.fail(["end of input"])
    return c


def parse_core_program(text: str) -> C.CoreProgram:
    return CoreParser(text).program()


def parse_core_expr(text: str, scope=(), splices=()) -> C.CoreExpr:
    """Parse one core expression; ``scope`` names free value variables and
    ``splices`` free splice points."""
    p = CoreParser(text)
    p.top_splices = set(splices)
    e = p.expr([(name, "var") for name in scope])
    if p.tok.kind != "eof":
        p.fail(["end of input"])
    return e

"""Tokenizer shared by the source and core parsers."""

from __future__ import annotations

import re
from dataclasses import dataclass

from ..errors import ParseError
from .source import Span

KEYWORDS = {
    "def", "class", "instance", "where", "main", "forall", "ifz", "then",
    "else", "true", "false", "spdef",
}

# longest symbols first
SYMBOLS = ["[|", "|]", "$(", "|-", "/\\", "->", "=>", "::", "(", ")", "{", "}",
           "\\", ":", "=", ";", ".", ",", "<", ">", "@"]

_TOKEN_RE = re.compile(
    r"""
    (?P<ws>[ \t\r\n]+)
  | (?P<comment>--[^\n]*)
  | (?P<int>-?[0-9]+)
  | (?P<string>"(?:[^"\\\n]|\\.)*")
  | (?P<con>[A-Z][A-Za-z0-9_']*)
  | (?P<ident>[a-z_][A-Za-z0-9_']*)
  | (?P<sym>""" + "|".join(re.escape(s) for s in SYMBOLS) + r""")
    """,
    re.VERBOSE,
)


@dataclass(frozen=True)
class Token:
    kind: str  # ident | con | int | string | kw | sym | eof
    text: str
    span: Span


def _unescape(body: str) -> str:
    out = []
    i = 0
    while i < len(body):
        ch = body[i]
        if ch == "\\" and i + 1 < len(body):
            nxt = body[i + 1]
            out.append({"n": "\n", "t": "\t", '"': '"', "\\": "\\"}.get(nxt, nxt))
            i += 2
        else:
            out.append(ch)
            i += 1
    return "".join(out)


def escape_string(value: str) -> str:
    return '"' + value.replace("\\", "\\\\").replace('"', '\\"').replace(
        "\n", "\\n").replace("\t", "\\t") + '"'


def tokenize(text: str) -> list:
    tokens = []
    pos = 0
    line, line_start = 1, 0
    while pos < len(text):
        m = _TOKEN_RE.match(text, pos)
        span = Span(line, pos - line_start + 1)
        if m is None:
            raise ParseError(f"unexpected character {text[pos]!r}", span)
        kind = m.lastgroup
        lexeme = m.group()
        if kind not in ("ws", "comment"):
            if kind == "ident" and lexeme in KEYWORDS:
                tokens.append(Token("kw", lexeme, span))
            elif kind == "string":
                tokens.append(Token("string", _unescape(lexeme[1:-1]), span))
            else:
                tokens.append(Token(kind, lexeme, span))
        newlines = lexeme.count("\n")
        if newlines:
            line += newlines
            line_start = pos + lexeme.rfind("\n") + 1
        pos += len(lexeme)
    tokens.append(Token("eof", "", Span(line, pos - line_start + 1)))
    return tokens

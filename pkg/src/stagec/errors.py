"""Diagnostics raised by every phase of the pipeline."""

from __future__ import annotations


class StagecError(Exception):
    phase = "internal"

    def __init__(self, code, message, span=None, **extra):
        super().__init__(message)
        self.code = code
        self.message = message
        self.span = span
        self.extra = extra

    def to_json(self) -> dict:
        out = {"phase": self.phase, "code": self.code, "message": self.message}
        if self.span is not None:
            out["span"] = {"line": self.span.line, "col": self.span.col}
        else:
            out["span"] = None
        for key in ("boundLevel", "useLevel"):
            if key in self.extra:
                out[key] = self.extra[key]
        return out

    def render(self) -> str:
        where = f"{self.span.line}:{self.span.col}: " if self.span else ""
        return f"{where}{self.phase} error [{self.code}]: {self.message}"


class ParseError(StagecError):
    phase = "parse"

    def __init__(self, message, span=None, expected=()):
        super().__init__("ParseError", message, span)
        self.expected = tuple(sorted(set(expected)))


class TypeCheckError(StagecError):
    phase = "typecheck"


class StageError(TypeCheckError):
    def __init__(self, name, bound_level, use_level, span=None):
        msg = (f"variable {name} is bound at level {bound_level} "
               f"but used at level {use_level}")
        super().__init__("StageError", msg, span,
                         boundLevel=bound_level, useLevel=use_level)
        self.name = name
        self.bound_level = bound_level
        self.use_level = use_level


class LintError(StagecError):
    phase = "lint"


class EvalError(StagecError):
    phase = "eval"


class InternalError(StagecError):
    """An invariant of stagec itself was violated; always a bug."""
    phase = "internal"

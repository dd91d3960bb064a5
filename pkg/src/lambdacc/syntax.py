"""Concrete syntax: parsers, printers and the JSON trace format.

Core computations are written ``!V`` for returns and juxtaposition for
application; ``!`` binds tighter than application and an abstraction body
extends as far right as possible.  An application argument is either a
return or parenthesized, so a tree that would put a computation in function
position cannot be written.  Open terms parse fine; binding is not checked.

The let-calculus uses ``[V]``, ``let x = M in N`` and value-value
application; the star calculus uses ``unit V`` and a left-associative
``M * V``; call-by-value terms use ordinary lambda syntax.
"""

from __future__ import annotations

import json
import re
from dataclasses import dataclass

from .rewrite import Rule, Trace
from .terms import Abs, App, Com, Ret, Term, Val, Var
from .translations import (
    CbvAbs, CbvApp, CbvTerm, CbvVar,
    MlAbs, MlApp, MlCom, MlLet, MlRet, MlTerm, MlVar,
    StarAbs, StarBind, StarCom, StarTerm, StarUnit, StarVar,
)


@dataclass(frozen=True)
class SourceSpan:
    begin: int
    end: int


class ParseError(ValueError):
    def __init__(self, message: str, span: SourceSpan, expected: frozenset[str] = frozenset()):
        self.message = message
        self.span = span
        self.expected = expected
        where = f" at {span.begin}..{span.end}"
        hint = f" (expected one of: {', '.join(sorted(expected))})" if expected else ""
        super().__init__(message + where + hint)


@dataclass(frozen=True)
class Token:
    kind: str   # "ident" | "punct" | "eof"
    text: str
    begin: int
    end: int

    @property
    def span(self) -> SourceSpan:
        return SourceSpan(self.begin, self.end)


_IDENT = re.compile(r"[A-Za-z_][A-Za-z0-9_']*")
_PUNCT = set("!()\\.[]=*") | {"λ"}


def _tokenize(text: str) -> list[Token]:
    toks = []
    i, n = 0, len(text)
    while i < n:
        c = text[i]
        if c.isspace():
            i += 1
            continue
        m = _IDENT.match(text, i)
        if m:
            toks.append(Token("ident", m.group(), i, m.end()))
            i = m.end()
            continue
        if c in _PUNCT:
            toks.append(Token("punct", c, i, i + 1))
            i += 1
            continue
        raise ParseError(f"stray character {c!r}", SourceSpan(i, i + 1))
    toks.append(Token("eof", "", n, n))
    return toks


class _Cursor:
    def __init__(self, text: str):
        self.text = text
        self.toks = _tokenize(text)
        self.pos = 0

    def peek(self) -> Token:
        return self.toks[self.pos]

    def advance(self) -> Token:
        tok = self.toks[self.pos]
        if tok.kind != "eof":
            self.pos += 1
        return tok

    def error(self, message: str, expected=()) -> ParseError:
        return ParseError(message, self.peek().span, frozenset(expected))

    def expect_punct(self, text: str) -> Token:
        tok = self.peek()
        if tok.kind == "punct" and tok.text == text:
            return self.advance()
        raise self.error(f"expected {text!r}", {text})

    def expect_ident(self, *reserved: str) -> str:
        tok = self.peek()
        if tok.kind == "ident" and tok.text not in reserved:
            self.advance()
            return tok.text
        raise self.error("expected an identifier", {"identifier"})

    def at_punct(self, *texts: str) -> bool:
        tok = self.peek()
        return tok.kind == "punct" and tok.text in texts

    def at_ident(self, text: str | None = None) -> bool:
        tok = self.peek()
        return tok.kind == "ident" and (text is None or tok.text == text)

    def expect_eof(self) -> None:
        if self.peek().kind != "eof":
            raise self.error("unexpected trailing input", {"end of input"})


def _is_lambda(c: _Cursor) -> bool:
    return c.at_punct("\\", "λ")


# ---------------------------------------------------------------------------
# Core calculus


def parse_com(text: str) -> Com:
    c = _Cursor(text)
    t = _parse_com(c)
    c.expect_eof()
    return t


def _parse_com(c: _Cursor) -> Com:
    if c.at_punct("!"):
        c.advance()
        return Ret(_parse_value_atom(c))
    if c.at_ident():
        fun = Var(c.expect_ident())
        return App(fun, _parse_arg_com(c))
    if c.at_punct("("):
        save = c.pos
        try:
            c.advance()
            inner = _parse_com(c)
            c.expect_punct(")")
        except ParseError:
            c.pos = save
            fun = _parse_value_atom(c)
            return App(fun, _parse_arg_com(c))
        if c.at_punct("!", "(") or c.at_ident():
            raise c.error("a computation cannot sit in function position")
        return inner
    if _is_lambda(c):
        raise c.error("a bare value is not a computation")
    raise c.error("expected a computation", {"!", "(", "identifier"})


def _parse_arg_com(c: _Cursor) -> Com:
    if c.at_punct("!"):
        c.advance()
        return Ret(_parse_value_atom(c))
    if c.at_punct("("):
        c.advance()
        arg = _parse_com(c)
        c.expect_punct(")")
        return arg
    if c.at_ident() or _is_lambda(c):
        raise c.error("an application argument must be a return or parenthesized")
    raise c.error("expected an application argument", {"!", "("})


def _parse_value(c: _Cursor) -> Val:
    if _is_lambda(c):
        c.advance()
        param = c.expect_ident()
        c.expect_punct(".")
        return Abs(param, _parse_com(c))
    return _parse_value_atom(c)


def _parse_value_atom(c: _Cursor) -> Val:
    if c.at_ident():
        return Var(c.expect_ident())
    if c.at_punct("("):
        c.advance()
        v = _parse_value(c)
        c.expect_punct(")")
        return v
    raise c.error("expected a value", {"identifier", "("})


def _print_val_atom(v: Val) -> str:
    match v:
        case Var(name):
            return name
        case Abs(_, _):
            return f"({_print_lam(v)})"
    raise TypeError(f"not a value: {v!r}")


def _print_lam(v: Abs) -> str:
    return f"\\{v.param}.{print_com(v.body)}"


def print_com(t: Com) -> str:
    match t:
        case Ret(v):
            return f"!{_print_val_atom(v)}"
        case App(f, Ret(v)):
            return f"{_print_val_atom(f)}!{_print_val_atom(v)}"
        case App(f, m):
            return f"{_print_val_atom(f)}({print_com(m)})"
    raise TypeError(f"not a computation: {t!r}")


def print_val(v: Val) -> str:
    match v:
        case Var(name):
            return name
        case Abs(_, _):
            return _print_lam(v)
    raise TypeError(f"not a value: {v!r}")


def print_term(t: Term) -> str:
    return print_val(t) if isinstance(t, (Var, Abs)) else print_com(t)


# ---------------------------------------------------------------------------
# Let-calculus


def parse_ml(text: str) -> MlCom:
    c = _Cursor(text)
    t = _parse_ml_com(c)
    c.expect_eof()
    return t


def _parse_ml_com(c: _Cursor) -> MlCom:
    if c.at_punct("["):
        c.advance()
        v = _parse_ml_value(c)
        c.expect_punct("]")
        return MlRet(v)
    if c.at_ident("let"):
        c.advance()
        var = c.expect_ident("let", "in")
        c.expect_punct("=")
        bound = _parse_ml_com(c)
        if not c.at_ident("in"):
            raise c.error("expected 'in'", {"in"})
        c.advance()
        return MlLet(var, bound, _parse_ml_com(c))
    if c.at_ident() or c.at_punct("("):
        if c.at_punct("("):
            save = c.pos
            try:
                c.advance()
                inner = _parse_ml_com(c)
                c.expect_punct(")")
            except ParseError:
                c.pos = save
            else:
                if c.at_ident() or c.at_punct("(", "["):
                    raise c.error("a computation cannot be an application operand")
                return inner
        fun = _parse_ml_value_atom(c)
        if c.at_punct("["):
            raise c.error("an application operand must be a value")
        arg = _parse_ml_value_atom(c)
        if c.at_ident() and not c.at_ident("in") or c.at_punct("(", "["):
            raise c.error("application is binary value-value")
        return MlApp(fun, arg)
    raise c.error("expected a computation", {"[", "let", "identifier", "("})


def _parse_ml_value(c: _Cursor) -> MlVar | MlAbs:
    if _is_lambda(c):
        c.advance()
        param = c.expect_ident("let", "in")
        c.expect_punct(".")
        return MlAbs(param, _parse_ml_com(c))
    return _parse_ml_value_atom(c)


def _parse_ml_value_atom(c: _Cursor) -> MlVar | MlAbs:
    if c.at_ident() and not c.at_ident("let") and not c.at_ident("in"):
        return MlVar(c.expect_ident("let", "in"))
    if c.at_punct("("):
        c.advance()
        v = _parse_ml_value(c)
        c.expect_punct(")")
        return v
    raise c.error("expected a value", {"identifier", "("})


def _print_ml_val(v, atom: bool) -> str:
    match v:
        case MlVar(name):
            return name
        case MlAbs(param, body):
            s = f"\\{param}.{print_ml(body)}"
            return f"({s})" if atom else s
    raise TypeError(f"not an ml value: {v!r}")


def print_ml(t: MlTerm) -> str:
    match t:
        case MlVar(_) | MlAbs(_, _):
            return _print_ml_val(t, atom=False)
        case MlRet(v):
            return f"[{_print_ml_val(v, atom=False)}]"
        case MlLet(x, bound, body):
            b = print_ml(bound)
            if isinstance(bound, MlLet):
                b = f"({b})"
            return f"let {x} = {b} in {print_ml(body)}"
        case MlApp(f, a):
            return f"{_print_ml_val(f, atom=True)} {_print_ml_val(a, atom=True)}"
    raise TypeError(f"not an ml term: {t!r}")


# ---------------------------------------------------------------------------
# Star calculus


def parse_star(text: str) -> StarCom:
    c = _Cursor(text)
    t = _parse_star_com(c)
    c.expect_eof()
    return t


def _parse_star_com(c: _Cursor) -> StarCom:
    t = _parse_star_atom(c)
    while c.at_punct("*"):
        c.advance()
        t = StarBind(t, _parse_star_value(c))
    return t


def _parse_star_atom(c: _Cursor) -> StarCom:
    if c.at_ident("unit"):
        c.advance()
        return StarUnit(_parse_star_value(c))
    if c.at_punct("("):
        c.advance()
        t = _parse_star_com(c)
        c.expect_punct(")")
        return t
    raise c.error("expected a computation", {"unit", "("})


def _parse_star_value(c: _Cursor):
    if _is_lambda(c):
        c.advance()
        param = c.expect_ident("unit")
        c.expect_punct(".")
        return StarAbs(param, _parse_star_com(c))
    if c.at_ident() and not c.at_ident("unit"):
        return StarVar(c.expect_ident("unit"))
    if c.at_punct("("):
        c.advance()
        v = _parse_star_value(c)
        c.expect_punct(")")
        return v
    raise c.error("expected a value", {"identifier", "\\", "("})


def _print_star_val(v, atom: bool) -> str:
    match v:
        case StarVar(name):
            return name
        case StarAbs(param, body):
            s = f"\\{param}.{print_star(body)}"
            return f"({s})" if atom else s
    raise TypeError(f"not a star value: {v!r}")


def print_star(t: StarTerm) -> str:
    match t:
        case StarVar(_) | StarAbs(_, _):
            return _print_star_val(t, atom=False)
        case StarUnit(v):
            return f"unit {_print_star_val(v, atom=True)}"
        case StarBind(com, val):
            return f"{print_star(com)} * {_print_star_val(val, atom=True)}"
    raise TypeError(f"not a star term: {t!r}")


# ---------------------------------------------------------------------------
# Call-by-value lambda terms


def parse_cbv(text: str) -> CbvTerm:
    c = _Cursor(text)
    t = _parse_cbv_term(c)
    c.expect_eof()
    return t


def _parse_cbv_term(c: _Cursor) -> CbvTerm:
    if _is_lambda(c):
        return _parse_cbv_lambda(c)
    t = _parse_cbv_atom(c)
    while True:
        if _is_lambda(c):
            return CbvApp(t, _parse_cbv_lambda(c))
        if c.at_ident() or c.at_punct("("):
            t = CbvApp(t, _parse_cbv_atom(c))
            continue
        return t


def _parse_cbv_lambda(c: _Cursor) -> CbvAbs:
    c.advance()
    param = c.expect_ident()
    c.expect_punct(".")
    return CbvAbs(param, _parse_cbv_term(c))


def _parse_cbv_atom(c: _Cursor) -> CbvTerm:
    if c.at_ident():
        return CbvVar(c.expect_ident())
    if c.at_punct("("):
        c.advance()
        t = _parse_cbv_term(c)
        c.expect_punct(")")
        return t
    raise c.error("expected a term", {"identifier", "(", "\\"})


def print_cbv(t: CbvTerm) -> str:
    match t:
        case CbvVar(name):
            return name
        case CbvAbs(param, body):
            return f"\\{param}.{print_cbv(body)}"
        case CbvApp(f, a):
            fs = print_cbv(f)
            if isinstance(f, CbvAbs):
                fs = f"({fs})"
            as_ = print_cbv(a)
            if not isinstance(a, CbvVar):
                as_ = f"({as_})"
            return f"{fs} {as_}"
    raise TypeError(f"not a cbv term: {t!r}")


# ---------------------------------------------------------------------------
# Trace export


TRACE_SCHEMA = 1


def trace_to_dict(tr: Trace) -> dict:
    counts = tr.counts
    return {
        "schema": TRACE_SCHEMA,
        "initial": print_com(tr.initial),
        "steps": [
            {
                "rule": s.occurrence.rule.value,
                "path": [tok.value for tok in s.occurrence.path],
                "closure": s.occurrence.closure.value,
                "result": print_com(s.result),
            }
            for s in tr.steps
        ],
        "counts": {
            "beta_c": counts[Rule.BETA_C],
            "sigma": counts[Rule.SIGMA],
            "id": counts[Rule.ID],
            "iota": counts[Rule.IOTA],
        },
        "status": tr.status,
    }


def export_trace(tr: Trace) -> str:
    return json.dumps(trace_to_dict(tr), separators=(",", ":"))

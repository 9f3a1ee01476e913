"""Recursive-descent parser and canonical printer for the formula grammar.

Grammar (whitespace-insensitive, ``#`` starts a line comment)::

    state    := cmp | "(" probexpr {"," probexpr} ")" "in" IDENT
    cmp      := probexpr OP probexpr            OP := "<"|">"|"<="|">="|"="
    probexpr := "P" "{" IDENT {"," IDENT} "}" "(" (path | state) ")"
              | NUMBER | "abs" "(" probexpr ")"
              | "min" "(" probexpr "," probexpr ")" | "max" "(" ... ")"
              | probexpr ("+"|"-"|"*"|"/") probexpr | "(" probexpr ")"
    path     := IDENT "@" IDENT | "true" | "!" path | path "&" path
              | path "|" path | path "U" intv path | "F" intv path
              | "G" intv path | "(" path ")" | "(" state ")" "@" IDENT
    intv     := "[" NUMBER "," (NUMBER | "inf") "]"

Operator precedence: ``!``/``F``/``G`` bind tightest, then ``&``, then ``|``,
then ``U`` (right-associative), then comparisons. Derived operators are
desugared while parsing: ``F[I] f`` becomes ``true U[I] f``, ``G[I] f``
becomes ``!(true U[I] !f)``, and ``a | b`` becomes ``!(!a & !b)``.
"""

import math
import re

from .syntax import (
    And,
    Arith,
    Atom,
    Compare,
    Const,
    Embed,
    Formula,
    InRegion,
    Not,
    Prob,
    TrueF,
    Until,
    eventually,
    free_vars,
    globally,
    f_or,
    is_state_shaped,
)

KEYWORDS = {"P", "U", "F", "G", "in", "inf", "abs", "min", "max", "true"}

_TOKEN_RE = re.compile(
    r"""
    (?P<ws>\s+|\#[^\n]*)
  | (?P<number>\d+(?:\.\d+)?(?:[eE][+-]?\d+)?)
  | (?P<ident>[A-Za-z_]\w*)
  | (?P<op><=|>=|[{}()\[\],@!&|<>=+\-*/])
    """,
    re.VERBOSE,
)


class FormulaSyntaxError(ValueError):
    def __init__(self, message, line, col):
        super().__init__(f"{message} (line {line}, column {col})")
        self.line = line
        self.col = col


class _Token:
    __slots__ = ("kind", "text", "line", "col")

    def __init__(self, kind, text, line, col):
        self.kind = kind
        self.text = text
        self.line = line
        self.col = col

    def __repr__(self):
        return f"{self.text!r}@{self.line}:{self.col}"


def _tokenize(text):
    tokens = []
    line, col = 1, 1
    pos = 0
    while pos < len(text):
        m = _TOKEN_RE.match(text, pos)
        if m is None:
            raise FormulaSyntaxError(f"unexpected character {text[pos]!r}", line, col)
        lexeme = m.group(0)
        if m.lastgroup != "ws":
            tokens.append(_Token(m.lastgroup, lexeme, line, col))
        newlines = lexeme.count("\n")
        if newlines:
            line += newlines
            col = len(lexeme) - lexeme.rfind("\n")
        else:
            col += len(lexeme)
        pos = m.end()
    tokens.append(_Token("eof", "<end of input>", line, col))
    return tokens


class _Backtrack(Exception):
    """Internal: a speculative parse failed; position information is kept on
    the parser's farthest-failure record."""


class _Parser:
    def __init__(self, tokens):
        self.tokens = tokens
        self.pos = 0
        self.far_pos = 0
        self.far_msg = "syntax error"

    # -- token helpers ------------------------------------------------------
    def peek(self):
        return self.tokens[self.pos]

    def _fail(self, message):
        if self.pos >= self.far_pos:
            self.far_pos = self.pos
            self.far_msg = message
        raise _Backtrack()

    def expect(self, text, message=None):
        tok = self.peek()
        if tok.text != text:
            self._fail(message or f"expected {text!r}, found {tok.text!r}")
        self.pos += 1
        return tok

    def accept(self, text):
        if self.peek().text == text:
            self.pos += 1
            return True
        return False

    def ident(self, what):
        tok = self.peek()
        if tok.kind != "ident" or tok.text in KEYWORDS:
            self._fail(f"expected {what}, found {tok.text!r}")
        self.pos += 1
        return tok.text

    def number(self):
        tok = self.peek()
        if tok.kind != "number":
            self._fail(f"expected a number, found {tok.text!r}")
        self.pos += 1
        return float(tok.text)

    def error_out(self):
        tok = self.tokens[self.far_pos]
        raise FormulaSyntaxError(f"{self.far_msg}, found {tok.text!r}", tok.line, tok.col)

    # -- formulas -----------------------------------------------------------
    def parse_formula(self):
        save = self.pos
        try:
            f = self.parse_state()
            return f
        except _Backtrack:
            self.pos = save
        try:
            return self.parse_path()
        except _Backtrack:
            self.error_out()

    def parse_state(self):
        save = self.pos
        try:
            left = self.parse_probexpr()
            tok = self.peek()
            if tok.text not in ("<", ">", "<=", ">=", "="):
                self._fail("expected a comparison operator")
            self.pos += 1
            right = self.parse_probexpr()
            return Compare(left, tok.text, right)
        except _Backtrack:
            self.pos = save
        # tuple membership
        self.expect("(")
        exprs = [self.parse_probexpr()]
        while self.accept(","):
            exprs.append(self.parse_probexpr())
        self.expect(")")
        if len(exprs) < 1:
            self._fail("empty probability tuple")
        tok = self.peek()
        if tok.kind != "ident" or tok.text != "in":
            self._fail("expected 'in' after probability tuple")
        self.pos += 1
        name = self.ident("a region name")
        return InRegion(tuple(exprs), name)

    # -- probability expressions -------------------------------------------
    def parse_probexpr(self):
        return self._sum()

    def _sum(self):
        left = self._term()
        while True:
            if self.accept("+"):
                left = Arith("+", (left, self._term()))
            elif self.accept("-"):
                left = Arith("-", (left, self._term()))
            else:
                return left

    def _term(self):
        left = self._factor()
        while True:
            if self.accept("*"):
                left = Arith("*", (left, self._factor()))
            elif self.accept("/"):
                left = Arith("/", (left, self._factor()))
            else:
                return left

    def _factor(self):
        tok = self.peek()
        if tok.kind == "number":
            self.pos += 1
            return Const(float(tok.text))
        if tok.text == "abs":
            self.pos += 1
            self.expect("(")
            inner = self._sum()
            self.expect(")")
            return Arith("abs", (inner,))
        if tok.text in ("min", "max"):
            self.pos += 1
            self.expect("(")
            a = self._sum()
            self.expect(",")
            b = self._sum()
            self.expect(")")
            return Arith(tok.text, (a, b))
        if tok.text == "P":
            return self._prob()
        if tok.text == "(":
            self.pos += 1
            inner = self._sum()
            self.expect(")")
            return inner
        self._fail("expected a probability expression")

    def _prob(self):
        ptok = self.expect("P")
        self.expect("{")
        pathvars = [self.ident("a path variable")]
        while self.accept(","):
            pathvars.append(self.ident("a path variable"))
        self.expect("}")
        self.expect("(")
        save = self.pos
        body = None
        try:
            body = self.parse_state()
        except _Backtrack:
            self.pos = save
        if body is None:
            body = self.parse_path()
        self.expect(")")
        vars_set = frozenset(pathvars)
        missing = vars_set - free_vars(body)
        if missing:
            raise FormulaSyntaxError(
                f"trivial quantification: {sorted(missing)} not free in the body",
                ptok.line, ptok.col,
            )
        return Prob(vars_set, body)

    # -- path formulas ------------------------------------------------------
    def parse_path(self):
        return self._until()

    def _until(self):
        left = self._or()
        tok = self.peek()
        if tok.kind == "ident" and tok.text == "U":
            self.pos += 1
            lo, hi = self._interval()
            right = self._until()  # right-associative
            try:
                return Until(left, right, lo, hi)
            except ValueError as exc:
                raise FormulaSyntaxError(str(exc), tok.line, tok.col) from None
        return left

    def _or(self):
        left = self._and()
        while self.accept("|"):
            left = f_or(left, self._and())
        return left

    def _and(self):
        left = self._unary()
        while self.accept("&"):
            left = And(left, self._unary())
        return left

    def _unary(self):
        tok = self.peek()
        if tok.text == "!":
            self.pos += 1
            return Not(self._unary())
        if tok.kind == "ident" and tok.text in ("F", "G"):
            self.pos += 1
            lo, hi = self._interval()
            child = self._unary()
            try:
                return eventually(child, lo, hi) if tok.text == "F" else globally(child, lo, hi)
            except ValueError as exc:
                raise FormulaSyntaxError(str(exc), tok.line, tok.col) from None
        return self._path_primary()

    def _path_primary(self):
        tok = self.peek()
        if tok.kind == "ident" and tok.text == "true":
            self.pos += 1
            return TrueF()
        if tok.kind == "ident" and tok.text not in KEYWORDS:
            name = self.ident("a label")
            self.expect("@", "expected '@' binding the atom to a path variable")
            var = self.ident("a path variable")
            return Atom(name, var)
        if tok.text == "(":
            # embedded state formula "(state)@var", else a parenthesized path
            save = self.pos
            try:
                self.pos += 1
                inner = self.parse_state()
                self.expect(")")
                self.expect("@")
                atok = self.peek()
                var = self.ident("a path variable")
                if free_vars(inner):
                    raise FormulaSyntaxError(
                        f"embedded formula must be closed, has free {sorted(free_vars(inner))}",
                        atok.line, atok.col,
                    )
                return Embed(inner, var)
            except _Backtrack:
                self.pos = save
            self.expect("(")
            inner = self.parse_path()
            self.expect(")")
            return inner
        self._fail("expected a path formula")

    def _interval(self):
        self.expect("[")
        lo = self.number()
        self.expect(",")
        tok = self.peek()
        if tok.kind == "ident" and tok.text == "inf":
            self.pos += 1
            hi = math.inf
        else:
            hi = self.number()
        self.expect("]")
        return lo, hi


def parse_formula(text: str) -> Formula:
    """Parse a path or state formula from text."""
    parser = _Parser(_tokenize(text))
    try:
        f = parser.parse_formula()
    except _Backtrack:
        parser.error_out()
    tok = parser.peek()
    if tok.kind != "eof":
        raise FormulaSyntaxError(f"trailing input starting at {tok.text!r}", tok.line, tok.col)
    return f


def parse_state_formula(text: str) -> Formula:
    """Parse and require a closed comparison/region formula (as used in
    formula files and as verification input)."""
    f = parse_formula(text)
    if not is_state_shaped(f):
        raise FormulaSyntaxError("expected a comparison or region-membership formula at top level", 1, 1)
    fv = free_vars(f)
    if fv:
        raise FormulaSyntaxError(f"unbound path variables {sorted(fv)}", 1, 1)
    return f


def load_formula_file(path) -> Formula:
    """Read a UTF-8 formula file: '#' comments, one state formula."""
    with open(path, "r", encoding="utf-8") as fh:
        return parse_state_formula(fh.read())


# ---------------------------------------------------------------------------
# printing

_PREC_STATE, _PREC_UNTIL, _PREC_OR, _PREC_AND, _PREC_UNARY, _PREC_ATOM = range(6)


def _fmt_num(x: float) -> str:
    if x == math.inf:
        return "inf"
    if x == int(x) and abs(x) < 1e15:
        return str(int(x))
    return repr(x)


def _path_prec(f) -> int:
    if isinstance(f, (TrueF, Atom, Embed)):
        return _PREC_ATOM
    if isinstance(f, Not):
        # or-sugar prints at the | level, G-sugar at the unary level
        if _or_parts(f) is not None:
            return _PREC_OR
        return _PREC_UNARY
    if isinstance(f, And):
        return _PREC_AND
    if isinstance(f, Until):
        if isinstance(f.left, TrueF):
            return _PREC_UNARY  # prints as F[...]
        return _PREC_UNTIL
    if isinstance(f, (Compare, InRegion)):
        return _PREC_STATE
    raise TypeError(f"not a formula: {f!r}")


def _or_parts(f):
    if isinstance(f, Not) and isinstance(f.child, And) and \
            isinstance(f.child.left, Not) and isinstance(f.child.right, Not):
        return f.child.left.child, f.child.right.child
    return None


def _g_parts(f):
    if isinstance(f, Not) and isinstance(f.child, Until) and \
            isinstance(f.child.left, TrueF) and isinstance(f.child.right, Not):
        return f.child.right.child, f.child.lo, f.child.hi
    return None


def _print_path(f, parent_prec) -> str:
    prec = _path_prec(f)
    text = _print_path_core(f)
    if prec < parent_prec:
        return f"({text})"
    return text


def _print_path_core(f) -> str:
    if isinstance(f, TrueF):
        return "true"
    if isinstance(f, Atom):
        return f"{f.name}@{f.pathvar}"
    if isinstance(f, Embed):
        return f"({_print_state(f.child)})@{f.pathvar}"
    if isinstance(f, Not):
        parts = _or_parts(f)
        if parts is not None:
            a, b = parts
            return f"{_print_path(a, _PREC_OR + 1)} | {_print_path(b, _PREC_OR)}"
        gparts = _g_parts(f)
        if gparts is not None:
            child, lo, hi = gparts
            return f"G[{_fmt_num(lo)},{_fmt_num(hi)}] {_print_path(child, _PREC_UNARY)}"
        return f"!{_print_path(f.child, _PREC_UNARY)}"
    if isinstance(f, And):
        return f"{_print_path(f.left, _PREC_AND)} & {_print_path(f.right, _PREC_AND + 1)}"
    if isinstance(f, Until):
        if isinstance(f.left, TrueF):
            return f"F[{_fmt_num(f.lo)},{_fmt_num(f.hi)}] {_print_path(f.right, _PREC_UNARY)}"
        left = _print_path(f.left, _PREC_UNTIL + 1)
        right = _print_path(f.right, _PREC_UNTIL)
        return f"{left} U[{_fmt_num(f.lo)},{_fmt_num(f.hi)}] {right}"
    if isinstance(f, (Compare, InRegion)):
        return _print_state(f)
    raise TypeError(f"not a formula: {f!r}")


def _print_state(f) -> str:
    if isinstance(f, Compare):
        return f"{_print_expr(f.left, 0)} {f.op} {_print_expr(f.right, 0)}"
    if isinstance(f, InRegion):
        inner = ", ".join(_print_expr(e, 0) for e in f.exprs)
        return f"({inner}) in {f.region}"
    raise TypeError(f"expected a comparison or region formula: {f!r}")


def _expr_prec(e) -> int:
    if isinstance(e, Arith) and e.op in ("+", "-"):
        return 1
    if isinstance(e, Arith) and e.op in ("*", "/"):
        return 2
    return 3


def _print_expr(e, parent_prec) -> str:
    prec = _expr_prec(e)
    if isinstance(e, Const):
        text = _fmt_num(e.value)
    elif isinstance(e, Prob):
        vars_text = ",".join(sorted(e.pathvars))
        if is_state_shaped(e.body):
            body = _print_state(e.body)
        else:
            body = _print_path(e.body, 0)
        text = f"P{{{vars_text}}}({body})"
    elif isinstance(e, Arith):
        if e.op == "abs":
            text = f"abs({_print_expr(e.args[0], 0)})"
        elif e.op in ("min", "max"):
            text = f"{e.op}({_print_expr(e.args[0], 0)}, {_print_expr(e.args[1], 0)})"
        else:
            left = _print_expr(e.args[0], prec)
            right = _print_expr(e.args[1], prec + 1)
            text = f"{left} {e.op} {right}"
    else:
        raise TypeError(f"not a probability expression: {e!r}")
    if prec < parent_prec:
        return f"({text})"
    return text


def print_formula(f) -> str:
    """Canonical text form; ``parse_formula(print_formula(f))`` equals ``f``."""
    if is_state_shaped(f):
        return _print_state(f)
    return _print_path(f, 0)

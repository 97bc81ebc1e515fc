"""Text formats: ``.pa`` formulas and ``.circ`` circuits.

Formula grammar (ASCII connectives, ``#`` starts a line comment)::

    formula := quant | or
    quant   := ("exists" | "forall") var+ "." formula
    or      := and ("\\/" and)*
    and     := unary ("/\\" unary)*
    unary   := "!" unary | "(" formula ")" | quant | atom
    atom    := term rel term (rel term)*
    rel     := "<" | "<=" | "=" | ">" | ">="
    term    := ["-"] mono (("+" | "-") mono)*
    mono    := int ["*" var] | var

Comparisons other than ``<`` and ``>=`` are expanded while parsing, so the
printer never has to emit them.
"""

from __future__ import annotations

import re
from dataclasses import dataclass

from .circuits import TYPE_CODES, TYPE_NAMES, Circuit, gate_violation
from .errors import CircuitFormatError, ParseError
from .formula import (
    GE,
    KEYWORDS,
    And,
    Atom,
    Exists,
    Expr,
    Forall,
    Formula,
    LinearTerm,
    Not,
    Or,
    conj,
    eq,
    ge,
    gt,
    le,
    lt,
)


@dataclass(frozen=True)
class SourceSpan:
    """1-based line/column of a token plus its byte offsets in the UTF-8 source."""

    line: int
    column: int
    start: int
    end: int


@dataclass(frozen=True)
class Token:
    kind: str
    text: str
    span: SourceSpan


_TOKEN_RE = re.compile(
    r"""
    (?P<ws>[ \t\r\n]+|\#[^\n]*)
  | (?P<int>[0-9]+)
  | (?P<name>[A-Za-z][A-Za-z0-9_]*)
  | (?P<op>/\\|\\/|<=|>=|<|>|=|!|\(|\)|\.|\+|-|\*)
    """,
    re.VERBOSE,
)

_RELS = {"<": lt, "<=": le, "=": eq, ">": gt, ">=": ge}


def tokenize(text: str) -> list[Token]:
    tokens = []
    pos = 0
    line, line_start = 1, 0
    byte_pos = 0
    while pos < len(text):
        m = _TOKEN_RE.match(text, pos)
        if not m:
            span = SourceSpan(line, pos - line_start + 1, byte_pos, byte_pos + len(text[pos].encode()))
            raise ParseError(f"unexpected character {text[pos]!r}", span)
        chunk = m.group()
        nbytes = len(chunk.encode())
        span = SourceSpan(line, pos - line_start + 1, byte_pos, byte_pos + nbytes)
        kind = m.lastgroup
        if kind != "ws":
            if kind == "name" and chunk in KEYWORDS:
                kind = chunk
            elif kind == "op":
                kind = chunk
            tokens.append(Token(kind, chunk, span))
        else:
            nl = chunk.count("\n")
            if nl:
                line += nl
                line_start = pos + chunk.rindex("\n") + 1
        pos = m.end()
        byte_pos += nbytes
    tokens.append(Token("eof", "", SourceSpan(line, pos - line_start + 1, byte_pos, byte_pos)))
    return tokens


class _Parser:
    def __init__(self, text: str):
        self.toks = tokenize(text)
        self.i = 0

    @property
    def tok(self) -> Token:
        return self.toks[self.i]

    def take(self) -> Token:
        t = self.toks[self.i]
        self.i += 1
        return t

    def expect(self, *kinds: str) -> Token:
        if self.tok.kind not in kinds:
            self.fail(kinds)
        return self.take()

    def fail(self, expected) -> None:
        t = self.tok
        found = "end of input" if t.kind == "eof" else repr(t.text)
        raise ParseError(f"unexpected {found}", t.span, expected)

    def formula(self) -> Formula:
        if self.tok.kind in KEYWORDS:
            return self.quant()
        return self.disjunction()

    def quant(self) -> Formula:
        kw = self.take()
        block = []
        while self.tok.kind == "name":
            block.append(self.take().text)
        if not block:
            self.fail(["variable"])
        if len(set(block)) != len(block):
            raise ParseError("variable repeated in quantifier block", kw.span)
        self.expect(".")
        body = self.formula()
        if set(block) & body.bound_vars:
            raise ParseError("variable bound twice on one path", kw.span)
        return (Exists if kw.kind == "exists" else Forall)(tuple(block), body)

    def disjunction(self) -> Formula:
        args = [self.conjunction()]
        while self.tok.kind == "\\/":
            self.take()
            args.append(self.conjunction())
        return args[0] if len(args) == 1 else Or(tuple(args))

    def conjunction(self) -> Formula:
        args = [self.unary()]
        while self.tok.kind == "/\\":
            self.take()
            args.append(self.unary())
        return args[0] if len(args) == 1 else And(tuple(args))

    def unary(self) -> Formula:
        kind = self.tok.kind
        if kind == "!":
            self.take()
            return Not(self.unary())
        if kind == "(":
            self.take()
            inner = self.formula()
            self.expect(")")
            return inner
        if kind in KEYWORDS:
            return self.quant()
        if kind in ("int", "name", "-"):
            return self.atom()
        self.fail(["!", "(", "exists", "forall", "integer", "variable", "-"])

    def atom(self) -> Formula:
        lhs = self.term()
        if self.tok.kind not in _RELS:
            self.fail(_RELS)
        parts = []
        while self.tok.kind in _RELS:
            rel = self.take().kind
            rhs = self.term()
            parts.append(_RELS[rel](lhs, rhs))
            lhs = rhs
        return parts[0] if len(parts) == 1 else And(tuple(parts))

    def term(self) -> Expr:
        sign = 1
        if self.tok.kind == "-":
            self.take()
            sign = -1
        out = self.mono() * sign
        while self.tok.kind in ("+", "-"):
            sign = 1 if self.take().kind == "+" else -1
            if self.tok.kind == "-":
                # Allow a signed literal after the operator, as in ``x + -3*y``.
                self.take()
                sign = -sign
            out = out + self.mono() * sign
        return out

    def mono(self) -> Expr:
        t = self.tok
        if t.kind == "int":
            self.take()
            k = int(t.text)
            if self.tok.kind == "*":
                self.take()
                name = self.expect("name").text
                return Expr({name: k})
            return Expr({}, k)
        if t.kind == "name":
            self.take()
            return Expr({t.text: 1})
        self.fail(["integer", "variable"])


def parse_formula(text: str) -> Formula:
    p = _Parser(text)
    phi = p.formula()
    p.expect("eof")
    return phi


# ---------------------------------------------------------------------------
# Printing


def print_term(term: LinearTerm) -> str:
    if not term.coeffs:
        return "0"
    out = []
    for idx, (v, c) in enumerate(term.coeffs):
        if idx == 0:
            out.append(v if c == 1 else f"{c}*{v}")
        else:
            mag = abs(c)
            body = v if mag == 1 else f"{mag}*{v}"
            out.append(f" + {body}" if c > 0 else f" - {body}")
    return "".join(out)


def print_formula(phi: Formula) -> str:
    """Canonical, fully parenthesized rendering that parses back to ``phi``."""
    parts: list[str] = []
    _emit(phi, parts)
    return "".join(parts)


def _emit(phi: Formula, out: list[str]) -> None:
    if isinstance(phi, Atom):
        rel = ">=" if phi.rel == GE else "<"
        out.append(f"{print_term(phi.term)} {rel} {phi.bound}")
    elif isinstance(phi, Not):
        out.append("!(")
        _emit(phi.arg, out)
        out.append(")")
    elif isinstance(phi, (And, Or)):
        sep = " /\\ " if isinstance(phi, And) else " \\/ "
        for idx, arg in enumerate(phi.args):
            if idx:
                out.append(sep)
            if isinstance(arg, (Atom, Not)):
                _emit(arg, out)
            else:
                out.append("(")
                _emit(arg, out)
                out.append(")")
    else:
        kw = "exists" if isinstance(phi, Exists) else "forall"
        out.append(f"{kw} {' '.join(phi.block)}. ")
        _emit(phi.body, out)


# ---------------------------------------------------------------------------
# Circuits


def parse_circuit(text: str) -> Circuit:
    """Read the ``circuit r n`` / ``gate i TYPE j k`` line format."""
    header = None
    gates: dict[int, tuple[int, int, int]] = {}
    where: dict[int, int] = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        fields = line.split()
        if header is None:
            if fields[0] != "circuit" or len(fields) != 3:
                raise CircuitFormatError("expected header 'circuit <r> <n>'", lineno)
            try:
                r, n = int(fields[1]), int(fields[2])
            except ValueError:
                raise CircuitFormatError("header sizes must be integers", lineno) from None
            if r < 1 or not 0 <= n <= r:
                raise CircuitFormatError("header needs r >= 1 and 0 <= n <= r", lineno)
            header = (r, n)
            continue
        if fields[0] != "gate" or len(fields) != 5:
            raise CircuitFormatError("expected 'gate <index> <TYPE> <j> <k>'", lineno)
        if fields[2] not in TYPE_CODES:
            raise CircuitFormatError(f"unknown gate type {fields[2]!r} (one of {', '.join(TYPE_NAMES)})", lineno)
        try:
            i, j, k = int(fields[1]), int(fields[3]), int(fields[4])
        except ValueError:
            raise CircuitFormatError("gate index and operands must be integers", lineno) from None
        if not 0 <= i < header[0]:
            raise CircuitFormatError(f"gate index {i} outside 0..{header[0] - 1}", lineno)
        if i in gates:
            raise CircuitFormatError(f"gate {i} defined twice (first on line {where[i]})", lineno)
        gate = (TYPE_CODES[fields[2]], j, k)
        msg = gate_violation(i, gate, header[1])
        if msg:
            raise CircuitFormatError(msg, lineno)
        gates[i] = gate
        where[i] = lineno
    if header is None:
        raise CircuitFormatError("missing header 'circuit <r> <n>'")
    missing = [i for i in range(header[0]) if i not in gates]
    if missing:
        raise CircuitFormatError(f"gates {missing[:5]} are not defined")
    return Circuit(header[0], header[1], tuple(gates[i] for i in range(header[0])))


def print_circuit(c: Circuit) -> str:
    lines = [f"circuit {c.r} {c.n}"]
    for i, (t, j, k) in enumerate(c.gates):
        lines.append(f"gate {i} {TYPE_NAMES[t]} {j} {k}")
    return "\n".join(lines) + "\n"

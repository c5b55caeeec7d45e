"""Text notation for quantum states: parse "i*(1/sqrt(2))|01> + ..." and back.

Grammar (whitespace-insensitive between tokens):

    expression := ['+'|'-'] term (('+'|'-') term)*
    term       := coeff? '*'? ket
    coeff      := arithmetic over decimal numbers, 'i', 'sqrt(...)', '*', '/',
                  unary +/-, and parentheses (constant-folded to one complex)
    ket        := '|' digits '>'

An omitted coefficient means 1; a leading '-' negates the following term.
Ket labels are binary strings when every label uses only 0/1 and all share
one length (which must equal the hint, if given); anything else is a decimal
index, which needs the explicit qubit-count hint since the written digits do
not reveal leading zeros.

This is the stable text format used by CLI flags and fixture files (one
expression per line, '#' comments).
"""

from __future__ import annotations

import cmath
import re
from dataclasses import dataclass

import numpy as np

from .errors import (
    ContextRequiredError,
    DimensionMismatchError,
    InvalidInputError,
    NormalizationError,
    ParseError,
    ZeroStateError,
)
from .states import QuantumState

# Written coefficients carry ~10 significant digits, so a freshly formatted
# state misses exact unit norm by ~1e-10. Parsing accepts that and rescales
# to machine precision; deviations beyond this gate are real errors.
PARSE_NORM_ATOL = 1e-6

_NUM_RE = re.compile(r"(?:\d+(?:\.\d*)?|\.\d+)(?:[eE][+-]?\d+)?")


@dataclass(frozen=True)
class ParsedTerm:
    """One summand: folded coefficient, raw ket label, source span."""

    coefficient: complex
    label: str
    span: tuple[int, int]


@dataclass(frozen=True)
class StateExpression:
    """Syntactic form of a state expression, before label resolution."""

    terms: tuple[ParsedTerm, ...]


class _Parser:
    def __init__(self, text: str):
        self.text = text
        self.pos = 0

    def fail(self, message: str, position: int | None = None):
        raise ParseError(message, self.pos if position is None else position)

    def _ws(self) -> None:
        while self.pos < len(self.text) and self.text[self.pos].isspace():
            self.pos += 1

    def peek(self) -> str:
        self._ws()
        return self.text[self.pos] if self.pos < len(self.text) else ""

    def expression(self) -> StateExpression:
        if self.peek() == "":
            self.fail("empty expression", 0)
        terms = [self.term(self._leading_sign())]
        while True:
            c = self.peek()
            if c == "":
                break
            if c not in "+-":
                self.fail(f"expected '+' or '-' between terms, got {c!r}")
            self.pos += 1
            terms.append(self.term(-1 if c == "-" else 1))
        return StateExpression(tuple(terms))

    def _leading_sign(self) -> int:
        c = self.peek()
        if c in "+-":
            self.pos += 1
            return -1 if c == "-" else 1
        return 1

    def term(self, sign: int) -> ParsedTerm:
        start_c = self.peek()
        start = self.pos
        if start_c == "":
            self.fail("expected a term")
        if start_c == "|":
            coeff = 1 + 0j
        else:
            coeff = self.muldiv()
            if self.peek() == "*":  # optional separator between coeff and ket
                self.pos += 1
        label = self.ket()
        return ParsedTerm(sign * coeff, label, (start, self.pos))

    # Coefficient arithmetic, folded at parse time.

    def muldiv(self) -> complex:
        val = self.unary()
        while True:
            c = self.peek()
            if c == "*":
                mark = self.pos
                self.pos += 1
                if self.peek() == "|":  # '*' belongs to the term, not the coeff
                    self.pos = mark
                    return val
                val *= self.unary()
            elif c == "/":
                self.pos += 1
                mark = self.pos
                denom = self.unary()
                if denom == 0:
                    self.fail("division by zero in coefficient", mark)
                val /= denom
            elif c in "(is":  # juxtaposition: "1i", "i(1/2)", "2sqrt(2)"
                val *= self.unary()
            else:
                return val

    def addsub(self) -> complex:
        val = self.muldiv()
        while True:
            c = self.peek()
            if c not in "+-":
                return val
            self.pos += 1
            rhs = self.muldiv()
            val = val + rhs if c == "+" else val - rhs

    def unary(self) -> complex:
        c = self.peek()
        if c in "+-":
            self.pos += 1
            val = self.unary()
            return -val if c == "-" else val
        return self.atom()

    def atom(self) -> complex:
        c = self.peek()
        start = self.pos
        if c == "":
            self.fail("expected a number, 'i', 'sqrt', or '('")
        if c.isdigit() or c == ".":
            return complex(self.number())
        if self.text.startswith("sqrt", self.pos):
            self.pos += 4
            if self.peek() != "(":
                self.fail("expected '(' after sqrt")
            self.pos += 1
            val = self.addsub()
            if self.peek() != ")":
                self.fail("unclosed parenthesis in sqrt", start)
            self.pos += 1
            return cmath.sqrt(val)
        if c == "i":
            self.pos += 1
            return 1j
        if c == "(":
            self.pos += 1
            val = self.addsub()
            if self.peek() != ")":
                self.fail("unclosed parenthesis", start)
            self.pos += 1
            return val
        self.fail(f"expected a number, 'i', 'sqrt', or '(', got {c!r}")

    def number(self) -> float:
        self._ws()
        m = _NUM_RE.match(self.text, self.pos)
        if m is None:
            self.fail("expected a number")
        self.pos = m.end()
        return float(m.group())

    def ket(self) -> str:
        if self.peek() != "|":
            self.fail("expected a ket '|...>'")
        bar = self.pos
        self.pos += 1
        self._ws()
        start = self.pos
        while self.pos < len(self.text) and self.text[self.pos].isdigit():
            self.pos += 1
        label = self.text[start : self.pos]
        if not label:
            self.fail("empty ket label")
        if self.peek() != ">":
            self.fail("unclosed ket: expected '>'", bar)
        self.pos += 1
        return label


def parse_expression(text: str) -> StateExpression:
    """Parse to the syntactic term list without resolving ket labels."""
    parser = _Parser(text)
    return parser.expression()


def _resolve_labels(
    expr: StateExpression, qubit_count_hint: int | None
) -> tuple[int, list[int]]:
    """Decide binary vs decimal reading; return (qubit count, basis indexes)."""
    labels = [t.label for t in expr.terms]
    all_binary = all(set(lbl) <= {"0", "1"} for lbl in labels)
    lengths = {len(lbl) for lbl in labels}
    if qubit_count_hint is None:
        if not all_binary:
            bad = next(t for t in expr.terms if set(t.label) - {"0", "1"})
            raise ContextRequiredError(
                f"decimal ket label |{bad.label}> requires a qubit-count hint",
                bad.span[0],
            )
        if len(lengths) != 1:
            raise DimensionMismatchError(
                f"mixed binary ket label lengths: {sorted(lengths)}"
            )
        n = lengths.pop()
        return n, [int(lbl, 2) for lbl in labels]
    n = qubit_count_hint
    if n < 1:
        raise InvalidInputError(f"qubit count hint must be >= 1, got {n}")
    if all_binary and lengths == {n}:
        return n, [int(lbl, 2) for lbl in labels]
    indexes = []
    for t in expr.terms:
        index = int(t.label)
        if index >= 1 << n:
            raise ParseError(
                f"ket label |{t.label}> out of range for {n} qubits", t.span[0]
            )
        indexes.append(index)
    return n, indexes


def parse_state(text: str, qubit_count_hint: int | None = None) -> QuantumState:
    """Parse a state expression into a normalized-checked QuantumState.

    Duplicate kets are summed. The written norm must be 1 within
    PARSE_NORM_ATOL; it is then rescaled to machine precision.
    """
    expr = parse_expression(text)
    n, indexes = _resolve_labels(expr, qubit_count_hint)
    amps = np.zeros(1 << n, dtype=np.complex128)
    for term, index in zip(expr.terms, indexes):
        amps[index] += term.coefficient
    if not np.any(amps):
        raise ZeroStateError("expression sums to the zero vector")
    norm = float(np.linalg.norm(amps))
    if abs(norm - 1.0) > PARSE_NORM_ATOL:
        raise NormalizationError(
            f"state norm is {norm!r}, not 1 (tolerance {PARSE_NORM_ATOL})"
        )
    return QuantumState(amps / norm)


def _fmt(value: float, precision: int) -> str:
    s = f"{value:.{precision}g}"
    return "0" if s == "-0" else s


def _format_coeff(c: complex, precision: int) -> str:
    if c.imag == 0.0 and c.real > 0:
        s = _fmt(c.real, precision)
        return "" if s == "1" else f"({s})"
    r = abs(c)
    u = c / r
    # Two extra digits on the unit phase keep the product within the
    # round-trip tolerance; magnitude carries the requested precision.
    re_s = _fmt(u.real, precision + 2)
    im_s = _fmt(abs(u.imag), precision + 2)
    sign = "-" if u.imag < 0 else "+"
    return f"({re_s}{sign}{im_s}i)*({_fmt(r, precision)})"


def format_state(
    state: QuantumState, label_mode: str = "binary", precision: int = 10
) -> str:
    """Render a state as a parseable expression.

    Emits only nonzero-amplitude terms, sorted by basis index. Decimal-mode
    output needs the state's qubit count as the hint when parsed back.
    """
    if label_mode not in ("binary", "decimal"):
        raise InvalidInputError(f"label_mode must be 'binary' or 'decimal', got {label_mode!r}")
    if precision < 1:
        raise InvalidInputError(f"precision must be >= 1, got {precision}")
    n = state.n
    parts = []
    for k in np.flatnonzero(state.amps):
        label = format(k, f"0{n}b") if label_mode == "binary" else str(k)
        coeff = _format_coeff(complex(state.amps[k]), precision)
        parts.append(f"{coeff}|{label}>")
    return " + ".join(parts)

"""
Equation DSL for polynomial systems.

    # Van der Pol oscillator
    param omega = 1
    param r = 0.6
    x1' = x2
    x2' = -omega^2*x1 + r*(1 - x1^2)*x2

Statements are one per line (newlines inside parentheses are ignored), '#'
starts a comment. Numbers are read exactly, parameters are substituted at
parse time and every right-hand side is expanded with sympy into monomials
over x1..xn, where n is the largest variable index that appears.
"""
import logging
import re
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, List, Mapping, Optional, Sequence, Tuple, Union

import sympy as sp

from polylift.errors import ConstantTermError, DSLSyntaxError, UnknownIdentifier
from polylift.models.ode import Monomial, PolyODE, compile_system

logger = logging.getLogger(__name__)

_TOKEN_SPEC = [
    ("NUMBER", r"(?:\d+\.\d*|\.\d+|\d+)(?:[eE][+-]?\d+)?"),
    ("NAME", r"[A-Za-z_][A-Za-z0-9_]*"),
    ("PRIME", r"'"),
    ("EQ", r"="),
    ("PLUS", r"\+"),
    ("MINUS", r"-"),
    ("STAR", r"\*"),
    ("CARET", r"\^"),
    ("LPAREN", r"\("),
    ("RPAREN", r"\)"),
    ("NEWLINE", r"\n"),
    ("SKIP", r"[ \t\r]+"),
    ("COMMENT", r"#[^\n]*"),
    ("MISMATCH", r"."),
]
_MASTER = re.compile("|".join(f"(?P<{name}>{pattern})" for name, pattern in _TOKEN_SPEC))
_VARIABLE = re.compile(r"x([1-9][0-9]*)$")


@dataclass(frozen=True)
class Token:
    kind: str
    text: str
    line: int
    column: int


def tokenize(text: str) -> List[Token]:
    """Split DSL text into tokens, dropping blanks, comments and newlines inside parentheses"""
    tokens: List[Token] = []
    line, line_start, depth = 1, 0, 0
    for match in _MASTER.finditer(text):
        kind, value = match.lastgroup, match.group()
        column = match.start() - line_start + 1
        if kind == "NEWLINE":
            if depth == 0:
                tokens.append(Token("NEWLINE", value, line, column))
            line += 1
            line_start = match.end()
            continue
        if kind in ("SKIP", "COMMENT"):
            continue
        if kind == "MISMATCH":
            raise DSLSyntaxError(f"unexpected character {value!r}", line, column)
        if kind == "LPAREN":
            depth += 1
        elif kind == "RPAREN":
            depth = max(depth - 1, 0)
        tokens.append(Token(kind, value, line, column))
    tokens.append(Token("EOF", "", line, len(text) - line_start + 1))
    return tokens


def _exact(text: str) -> sp.Rational:
    value = Fraction(text)
    return sp.Rational(value.numerator, value.denominator)


@dataclass
class ParsedSystem:
    """Result of parse_dsl: monomial lists plus the parameter values used"""

    n: int
    rhs: List[List[Monomial]]
    params: Dict[str, float] = field(default_factory=dict)

    def compile(self) -> PolyODE:
        return compile_system(self.rhs, self.n)


class _Parser:
    """Recursive-descent parser producing sympy expressions"""

    def __init__(self, tokens: List[Token], overrides: Mapping[str, float]):
        self.tokens = tokens
        self.pos = 0
        self.overrides = {name: _exact(repr(float(value))) for name, value in overrides.items()}
        self.params: Dict[str, sp.Rational] = {}
        self.equations: Dict[int, Tuple[sp.Expr, Token]] = {}
        self.max_index = 0

    # token helpers

    @property
    def current(self) -> Token:
        return self.tokens[self.pos]

    def advance(self) -> Token:
        token = self.tokens[self.pos]
        self.pos += 1
        return token

    def expect(self, kind: str, what: str) -> Token:
        token = self.current
        if token.kind != kind:
            found = token.text or "end of input"
            raise DSLSyntaxError(f"expected {what}, found {found!r}", token.line, token.column)
        return self.advance()

    # grammar

    def parse_file(self) -> None:
        while self.current.kind != "EOF":
            if self.current.kind == "NEWLINE":
                self.advance()
                continue
            if self.current.kind == "NAME" and self.current.text == "param":
                self.parse_param()
            else:
                self.parse_equation()
            if self.current.kind not in ("NEWLINE", "EOF"):
                token = self.current
                raise DSLSyntaxError(f"unexpected {token.text!r} after statement", token.line, token.column)

    def parse_param(self) -> None:
        self.advance()
        name = self.expect("NAME", "parameter name")
        if _VARIABLE.match(name.text) or name.text == "param":
            raise DSLSyntaxError(f"{name.text!r} cannot be used as a parameter name", name.line, name.column)
        self.expect("EQ", "'='")
        sign = 1
        if self.current.kind in ("PLUS", "MINUS"):
            sign = -1 if self.advance().kind == "MINUS" else 1
        number = self.expect("NUMBER", "numeric parameter value")
        value = sign * _exact(number.text)
        self.params[name.text] = self.overrides.get(name.text, value)

    def parse_equation(self) -> None:
        head = self.expect("NAME", "equation 'x<i>' = ...")
        match = _VARIABLE.match(head.text)
        if not match:
            raise DSLSyntaxError(f"equation must start with a state variable, found {head.text!r}", head.line, head.column)
        index = int(match.group(1))
        self.max_index = max(self.max_index, index)
        self.expect("PRIME", "\"'\" after the state variable")
        self.expect("EQ", "'='")
        if index in self.equations:
            raise DSLSyntaxError(f"duplicate equation for x{index}", head.line, head.column)
        self.equations[index] = (self.parse_expr(), head)

    def parse_expr(self) -> sp.Expr:
        value = self.parse_term()
        while self.current.kind in ("PLUS", "MINUS"):
            op = self.advance()
            rhs = self.parse_term()
            value = value + rhs if op.kind == "PLUS" else value - rhs
        return value

    def parse_term(self) -> sp.Expr:
        value = self.parse_unary()
        while self.current.kind == "STAR":
            self.advance()
            value = value * self.parse_unary()
        return value

    def parse_unary(self) -> sp.Expr:
        if self.current.kind == "MINUS":
            self.advance()
            return -self.parse_unary()
        if self.current.kind == "PLUS":
            self.advance()
            return self.parse_unary()
        return self.parse_power()

    def parse_power(self) -> sp.Expr:
        base = self.parse_atom()
        if self.current.kind == "CARET":
            self.advance()
            exponent = self.expect("NUMBER", "positive integer exponent")
            if not exponent.text.isdigit() or int(exponent.text) < 1:
                raise DSLSyntaxError(
                    f"exponent must be a positive integer, got {exponent.text!r}", exponent.line, exponent.column
                )
            return base ** int(exponent.text)
        return base

    def parse_atom(self) -> sp.Expr:
        token = self.current
        if token.kind == "NUMBER":
            self.advance()
            return _exact(token.text)
        if token.kind == "NAME":
            self.advance()
            match = _VARIABLE.match(token.text)
            if match:
                index = int(match.group(1))
                self.max_index = max(self.max_index, index)
                return sp.Symbol(f"x{index}")
            if token.text in self.params:
                return self.params[token.text]
            raise UnknownIdentifier(f"unknown identifier {token.text!r}", token.line, token.column)
        if token.kind == "LPAREN":
            self.advance()
            value = self.parse_expr()
            self.expect("RPAREN", "')'")
            return value
        found = token.text or "end of input"
        raise DSLSyntaxError(f"expected a number, name or '(', found {found!r}", token.line, token.column)


def parse_dsl(text: str, overrides: Optional[Mapping[str, float]] = None) -> ParsedSystem:
    """
    Parse DSL text into expanded, constant-folded monomial lists.

    Args:
        text: DSL source
        overrides: Parameter values replacing the declared ones

    Returns:
        ParsedSystem with one monomial list per state variable
    """
    parser = _Parser(tokenize(text), overrides or {})
    parser.parse_file()

    undeclared = sorted(set(parser.overrides) - set(parser.params))
    if undeclared:
        first = parser.tokens[0]
        raise UnknownIdentifier(
            f"override(s) for undeclared parameter(s): {', '.join(undeclared)}", first.line, first.column
        )

    n = parser.max_index
    if n == 0:
        last = parser.tokens[-1]
        raise DSLSyntaxError("no equations found", last.line, last.column)
    missing = [i for i in range(1, n + 1) if i not in parser.equations]
    if missing:
        logger.warning(f"⚠️  No equation for {', '.join(f'x{i}' for i in missing)}; taking x' = 0")

    symbols = [sp.Symbol(f"x{i}") for i in range(1, n + 1)]
    rhs: List[List[Monomial]] = []
    for index in range(1, n + 1):
        if index not in parser.equations:
            rhs.append([])
            continue
        expr, head = parser.equations[index]
        poly = sp.Poly(sp.expand(expr), *symbols)
        terms = []
        for exponents, coeff in poly.terms():
            if coeff == 0:
                continue
            if sum(exponents) == 0:
                raise ConstantTermError(
                    f"x{index}' has constant term {coeff}; the origin must be an equilibrium",
                    head.line,
                    head.column,
                )
            terms.append(Monomial(float(coeff), exponents))
        rhs.append(terms)

    params = {name: float(value) for name, value in parser.params.items()}
    logger.info(f"✅ Parsed {n} equation(s) with {len(params)} parameter(s)")
    return ParsedSystem(n=n, rhs=rhs, params=params)


def _format_term(mono: Monomial) -> Tuple[str, str]:
    factors = []
    for index, power in enumerate(mono.exponents, start=1):
        if power == 1:
            factors.append(f"x{index}")
        elif power > 1:
            factors.append(f"x{index}^{power}")
    magnitude = abs(mono.coeff)
    body = "*".join(factors) if magnitude == 1.0 else "*".join([repr(magnitude)] + factors)
    return ("-" if mono.coeff < 0 else "+"), body


def to_dsl(
    system: Union[PolyODE, Sequence[Sequence[Monomial]]],
    params: Optional[Mapping[str, float]] = None,
) -> str:
    """Serialize a system (or monomial lists) to DSL text that parse_dsl reads back"""
    rhs = system.monomials() if isinstance(system, PolyODE) else system
    lines = [f"param {name} = {float(value)!r}" for name, value in (params or {}).items()]
    for index, terms in enumerate(rhs, start=1):
        if not terms:
            lines.append(f"x{index}' = 0")
            continue
        pieces = []
        for position, mono in enumerate(terms):
            sign, body = _format_term(mono)
            if position == 0:
                pieces.append(body if sign == "+" else f"-{body}")
            else:
                pieces.append(f"{sign} {body}")
        lines.append(f"x{index}' = " + " ".join(pieces))
    return "\n".join(lines) + "\n"

"""Exact scalars: polynomials over the rationals in named parameters.

Scalars are ``sympy`` sparse polynomial ring elements over ``QQ`` with
graded-lex term order, so equality is canonical-form equality and every
identity downstream is checked exactly.
"""

import re
from fractions import Fraction
from tokenize import TokenError
from typing import Dict, Iterable, Mapping, Sequence, Tuple, Union

from sympy import S, Symbol
from sympy.core.sympify import SympifyError
from sympy.parsing.sympy_parser import parse_expr, standard_transformations
from sympy.polys.domains import QQ
from sympy.polys.orderings import grlex
from sympy.polys.rings import PolyElement, PolyRing

import config

logger = config.logger

Scalar = PolyElement
Substitution = Dict[str, Fraction]
RationalLike = Union[int, Fraction, str]

NAME_RE = re.compile(r"^[a-zA-Z][a-zA-Z0-9_]*$")
_TOKEN_RE = re.compile(r"\s*(?:(\d+)|([a-zA-Z][a-zA-Z0-9_]*)|([-+*/()]))")


class ScalarParseError(ValueError):
    """Raised for expressions outside the scalar grammar."""


class SubstitutionError(ValueError):
    """Raised when a substitution binds an undeclared name or a bad value."""


def to_rational(value: RationalLike) -> Fraction:
    if isinstance(value, Fraction):
        return value
    if isinstance(value, int):
        return Fraction(value)
    try:
        return Fraction(str(value).strip())
    except (ValueError, ZeroDivisionError) as e:
        raise SubstitutionError(f"Not a rational value: '{value}'") from e


class ScalarRing:
    """Polynomial ring QQ[params] with canonical printing and parsing."""

    def __init__(self, params: Sequence[str] = ()):
        params = tuple(params)
        for name in params:
            if not NAME_RE.match(name):
                raise ScalarParseError(f"Invalid parameter name: '{name}'")
        if len(set(params)) != len(params):
            raise ScalarParseError(f"Duplicate parameter names in {list(params)}")
        self.params: Tuple[str, ...] = params
        self._index = {name: i for i, name in enumerate(params)}
        self._poly_ring = PolyRing(tuple(Symbol(name) for name in params), QQ, grlex)
        self.zero: Scalar = self._poly_ring.zero
        self.one: Scalar = self._poly_ring.one

    def __eq__(self, other: object) -> bool:
        return isinstance(other, ScalarRing) and other.params == self.params

    def __hash__(self) -> int:
        return hash(self.params)

    def __repr__(self) -> str:
        return f"ScalarRing({list(self.params)})"

    def const(self, value: RationalLike) -> Scalar:
        q = to_rational(value)
        return self._poly_ring.ground_new(QQ(q.numerator, q.denominator))

    def gen(self, name: str) -> Scalar:
        if name not in self._index:
            raise ScalarParseError(f"Undeclared parameter '{name}'")
        return self._poly_ring.gens[self._index[name]]

    def is_zero(self, value: Scalar) -> bool:
        return not value

    def parse(self, text: str) -> Scalar:
        """Parse an expression of integers, fractions, names, + - * and parentheses."""
        source = str(text)
        if not source.strip():
            raise ScalarParseError("Empty expression")

        pos = 0
        while pos < len(source):
            match = _TOKEN_RE.match(source, pos)
            if not match or match.end() == pos:
                if source[pos:].strip() == "":
                    break
                raise ScalarParseError(f"Unexpected character at position {pos} in '{source}'")
            name = match.group(2)
            if name is not None and name not in self._index:
                raise ScalarParseError(f"Undeclared name '{name}' in '{source}'")
            pos = match.end()
        if "**" in source or "//" in source:
            raise ScalarParseError(f"Unsupported operator in '{source}'")

        local_dict = {name: Symbol(name) for name in self.params}
        try:
            expr = parse_expr(source, local_dict=local_dict, transformations=standard_transformations)
        except (SyntaxError, TokenError, TypeError, SympifyError) as e:
            raise ScalarParseError(f"Syntax error in '{source}': {e}") from e

        if expr.has(S.ComplexInfinity) or expr.has(S.NaN):
            raise ScalarParseError(f"Division by zero in '{source}'")
        try:
            return self._poly_ring.from_expr(expr)
        except ValueError as e:
            raise ScalarParseError(f"Division by a non-constant in '{source}'") from e

    def format(self, value: Scalar) -> str:
        """Canonical text: graded-lex terms, powers as repeated products."""
        if not value:
            return "0"
        pieces = []
        for monom, coeff in value.terms():
            num, den = int(QQ.numer(coeff)), int(QQ.denom(coeff))
            negative = num < 0
            num = abs(num)
            factors = [name for name, exp in zip(self.params, monom) for _ in range(exp)]
            number = f"{num}/{den}" if den != 1 else str(num)
            if not factors:
                body = number
            elif (num, den) == (1, 1):
                body = "*".join(factors)
            else:
                body = number + "*" + "*".join(factors)
            pieces.append((negative, body))

        first_negative, first_body = pieces[0]
        text = ("-" if first_negative else "") + first_body
        for negative, body in pieces[1:]:
            text += f" {'-' if negative else '+'} {body}"
        return text

    def parse_bindings(self, bindings: Mapping[str, RationalLike]) -> Substitution:
        parsed: Substitution = {}
        for name, value in bindings.items():
            if name not in self._index:
                raise SubstitutionError(f"'{name}' is not a declared parameter (declared: {list(self.params)})")
            parsed[name] = to_rational(value)
        return parsed

    def substitute(self, value: Scalar, bindings: Mapping[str, RationalLike]) -> Scalar:
        """Evaluate the bound parameters; unbound ones survive."""
        parsed = self.parse_bindings(bindings)
        if not parsed or not value:
            return value
        pairs = [
            (self._poly_ring.gens[self._index[name]], QQ(q.numerator, q.denominator))
            for name, q in parsed.items()
        ]
        return value.subs(pairs)

    def to_fraction(self, value: Scalar) -> Fraction:
        if not value:
            return Fraction(0)
        if not value.is_ground:
            raise SubstitutionError(f"Scalar '{self.format(value)}' still depends on parameters")
        coeff = value.LC
        return Fraction(int(QQ.numer(coeff)), int(QQ.denom(coeff)))

    def from_sympy(self, expr) -> Scalar:
        return self._poly_ring.from_expr(expr)

    def free_params(self, values: Iterable[Scalar]) -> Tuple[str, ...]:
        used = set()
        for value in values:
            for monom in value.monoms():
                used.update(name for name, exp in zip(self.params, monom) if exp)
        return tuple(name for name in self.params if name in used)


def parse_scalar(text: str, params: Sequence[str]) -> Scalar:
    return ScalarRing(params).parse(text)


def parse_substitution(text: str) -> Dict[str, str]:
    """Parse ``k=v,k=v`` bindings from the command line."""
    bindings: Dict[str, str] = {}
    for chunk in text.split(","):
        chunk = chunk.strip()
        if not chunk:
            continue
        if "=" not in chunk:
            raise SubstitutionError(f"Expected name=value, got '{chunk}'")
        name, value = (part.strip() for part in chunk.split("=", 1))
        if not NAME_RE.match(name):
            raise SubstitutionError(f"Invalid parameter name '{name}'")
        if name in bindings:
            raise SubstitutionError(f"Parameter '{name}' bound twice")
        to_rational(value)
        bindings[name] = value
    return bindings

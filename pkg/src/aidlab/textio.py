"""Text forms of rationals, Laurent polynomials, basis vectors and elements.

Element grammar (whitespace is ignored)::

    element := ['-'] term (('+' | '-') term)*  |  '0'
    term    := [rat] gen ['t^' int]
    gen     := 'h' idx | 'x' idx | 'K'

``h`` takes an even exponent (default 0), ``x`` an odd exponent (mandatory)
and ``K`` none.  Laurent polynomials are signed sums of ``c t^e`` monomials.
"""

from __future__ import annotations

from fractions import Fraction

from .algebra import AlgSpec, BasisVec, Elem, Kind, Variant
from .kernel import LPoly

__all__ = [
    "ParseError",
    "ParityError",
    "VariantError",
    "format_rat",
    "format_lpoly",
    "format_basis",
    "format_element",
    "parse_element",
    "parse_basis",
    "parse_lpoly",
    "parse_rat",
]


class ParseError(ValueError):
    def __init__(self, message: str, text: str = "", position: int | None = None):
        self.message = message
        self.text = text
        self.position = position
        where = f" at position {position}" if position is not None else ""
        super().__init__(f"{message}{where}")

    def pointer(self) -> str:
        """The input with a caret under the failing position."""
        if self.position is None:
            return self.text
        return f"{self.text}\n{' ' * self.position}^"


class ParityError(ParseError):
    """Exponent parity does not match the generator (h even, x odd)."""


class VariantError(ParseError):
    """The element uses a generator the target variant does not have."""


def format_rat(q: Fraction) -> str:
    return str(q)


def parse_rat(text: str) -> Fraction:
    try:
        return Fraction(text.strip())
    except (ValueError, ZeroDivisionError) as exc:
        raise ParseError(f"not a rational: {text!r}", text) from exc


def _scaled(coeff: Fraction, body: str) -> tuple[str, str]:
    sign = "-" if coeff < 0 else "+"
    a = abs(coeff)
    return sign, body if a == 1 else f"{a} {body}"


def _join(parts: list[tuple[str, str]]) -> str:
    if not parts:
        return "0"
    out = []
    for k, (sign, body) in enumerate(parts):
        if k == 0:
            out.append(("-" if sign == "-" else "") + body)
        else:
            out.append(f" {sign} {body}")
    return "".join(out)


def format_lpoly(p: LPoly) -> str:
    parts = []
    for e, c in p.items():
        if e == 0:
            parts.append(("-" if c < 0 else "+", str(abs(c))))
        else:
            parts.append(_scaled(c, f"t^{e}"))
    return _join(parts)


def format_basis(b: BasisVec) -> str:
    if b.kind == Kind.K:
        return "K"
    if b.kind == Kind.H:
        return f"h{b.index}" if b.degree == 0 else f"h{b.index} t^{b.degree}"
    return f"x{b.index} t^{b.degree}"


def format_element(X: Elem) -> str:
    return _join([_scaled(c, format_basis(b)) for b, c in X.items()])


class _Scanner:
    def __init__(self, text: str):
        self.text = text
        self.pos = 0

    def skip(self) -> None:
        while self.pos < len(self.text) and self.text[self.pos].isspace():
            self.pos += 1

    def peek(self) -> str:
        self.skip()
        return self.text[self.pos] if self.pos < len(self.text) else ""

    def at_end(self) -> bool:
        return self.peek() == ""

    def take(self, s: str) -> bool:
        self.skip()
        if self.text.startswith(s, self.pos):
            self.pos += len(s)
            return True
        return False

    def error(self, message: str, cls=ParseError, pos: int | None = None):
        return cls(message, self.text, self.pos if pos is None else pos)

    def digits(self) -> str:
        self.skip()
        start = self.pos
        while self.pos < len(self.text) and self.text[self.pos].isdigit():
            self.pos += 1
            # whitespace inside a number is not allowed
        return self.text[start:self.pos]

    def integer(self) -> int:
        self.skip()
        start = self.pos
        neg = self.take("-")
        if not neg:
            self.take("+")
        d = self.digits()
        if not d:
            raise self.error("expected an integer", pos=start)
        return -int(d) if neg else int(d)

    def rational(self) -> Fraction | None:
        self.skip()
        if not self.peek().isdigit():
            return None
        start = self.pos
        num = int(self.digits())
        if self.take("/"):
            d = self.digits()
            if not d:
                raise self.error("expected a denominator")
            if int(d) == 0:
                raise self.error("zero denominator", pos=start)
            return Fraction(num, int(d))
        return Fraction(num)

    def exponent(self) -> int | None:
        self.skip()
        if self.peek() != "t":
            return None
        self.pos += 1
        if not self.take("^"):
            raise self.error("expected '^' after 't'")
        return self.integer()


def _term(sc: _Scanner, spec: AlgSpec | None) -> tuple[BasisVec, Fraction]:
    coeff = sc.rational()
    sc.skip()
    start = sc.pos
    g = sc.peek()
    if g == "K":
        sc.pos += 1
        if sc.exponent() is not None:
            raise sc.error("K takes no exponent", pos=start)
        if spec is not None and spec.variant != Variant.AFFINE:
            raise sc.error(f"K does not exist in the {spec.variant.value} variant", VariantError, start)
        b = BasisVec(Kind.K)
    elif g in ("h", "x"):
        sc.pos += 1
        d = sc.digits()
        if not d:
            raise sc.error(f"expected an index after '{g}'")
        idx = int(d)
        if idx < 1:
            raise sc.error("indices start at 1", pos=start)
        e = sc.exponent()
        if g == "h":
            e = 0 if e is None else e
            if e % 2:
                raise sc.error(f"h{idx} needs an even exponent, got {e}", ParityError, start)
            b = BasisVec(Kind.H, idx, e)
        else:
            if e is None:
                raise sc.error(f"x{idx} needs an explicit odd exponent", ParityError, start)
            if e % 2 == 0:
                raise sc.error(f"x{idx} needs an odd exponent, got {e}", ParityError, start)
            b = BasisVec(Kind.X, idx, e)
        if spec is not None:
            if idx > spec.rank:
                raise sc.error(f"index {idx} exceeds rank {spec.rank}", VariantError, start)
            if spec.variant == Variant.FINITE and b.degree != (0 if g == "h" else 1):
                raise sc.error("the finite algebra only has h_i t^0 and x_i t^1", VariantError, start)
    else:
        raise sc.error("expected a generator h<i>, x<i> or K")
    return b, Fraction(1) if coeff is None else coeff


def parse_element(text: str, spec: AlgSpec | None = None) -> Elem:
    sc = _Scanner(text)
    if sc.at_end():
        raise sc.error("empty element")
    if sc.peek() == "0":
        save = sc.pos
        sc.pos += 1
        if sc.at_end():
            return Elem()
        sc.pos = save
    terms = []
    sign = -1 if sc.take("-") else 1
    while True:
        b, c = _term(sc, spec)
        terms.append((b, sign * c))
        if sc.at_end():
            break
        if sc.take("+"):
            sign = 1
        elif sc.take("-"):
            sign = -1
        else:
            raise sc.error("expected '+' or '-'")
    return Elem(terms)


def parse_basis(text: str, spec: AlgSpec | None = None) -> BasisVec:
    X = parse_element(text, spec)
    if len(X) != 1 or X.coeff(X.support()[0]) != 1:
        raise ParseError(f"expected a single basis vector, got {text!r}", text)
    return X.support()[0]


def parse_lpoly(text: str) -> LPoly:
    sc = _Scanner(text)
    if sc.at_end():
        raise sc.error("empty polynomial")
    terms = []
    sign = -1 if sc.take("-") else 1
    while True:
        start = sc.pos
        c = sc.rational()
        e = sc.exponent()
        if c is None and e is None:
            raise sc.error("expected a monomial 'c t^e'", pos=start)
        terms.append((0 if e is None else e, sign * (Fraction(1) if c is None else c)))
        if sc.at_end():
            break
        if sc.take("+"):
            sign = 1
        elif sc.take("-"):
            sign = -1
        else:
            raise sc.error("expected '+' or '-'")
    return LPoly(terms)

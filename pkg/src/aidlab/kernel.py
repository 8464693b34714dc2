"""Exact scalars and sparse Laurent polynomials in one variable ``t``.

Scalars are :class:`fractions.Fraction` (aliased as :data:`Rat`), which already
keeps numerator and denominator coprime with a positive denominator.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Iterable, Mapping, Union

Rat = Fraction
Scalar = Union[int, Fraction]

__all__ = [
    "Rat",
    "LPoly",
    "lpoly_mul",
    "lpoly_parity_split",
    "lpoly_divide_exact",
    "to_rat",
]


def to_rat(value) -> Fraction:
    """Coerce ints, Fractions and ``"p/q"`` strings to a Fraction (no floats)."""
    if isinstance(value, Fraction):
        return value
    if isinstance(value, bool):
        raise TypeError("bool is not a rational scalar")
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, str):
        return Fraction(value.strip())
    raise TypeError(f"cannot use {type(value).__name__} as an exact rational")


class LPoly:
    """Immutable sparse Laurent polynomial ``sum c_e t^e`` over the rationals."""

    __slots__ = ("_terms", "_hash")

    def __init__(self, terms: Mapping[int, Scalar] | Iterable[tuple[int, Scalar]] = ()):
        items = terms.items() if isinstance(terms, Mapping) else terms
        acc: dict[int, Fraction] = {}
        for e, c in items:
            if not isinstance(e, int) or isinstance(e, bool):
                raise TypeError("exponents must be integers")
            acc[e] = acc.get(e, Fraction(0)) + to_rat(c)
        self._terms = {e: acc[e] for e in sorted(acc) if acc[e] != 0}
        self._hash = None

    @classmethod
    def monomial(cls, exponent: int, coeff: Scalar = 1) -> "LPoly":
        return cls({exponent: coeff})

    @classmethod
    def constant(cls, c: Scalar) -> "LPoly":
        return cls({0: c})

    @property
    def terms(self) -> dict[int, Fraction]:
        return dict(self._terms)

    def items(self):
        return self._terms.items()

    def exponents(self) -> list[int]:
        return list(self._terms)

    def coeff(self, exponent: int) -> Fraction:
        return self._terms.get(exponent, Fraction(0))

    def is_zero(self) -> bool:
        return not self._terms

    def is_even(self) -> bool:
        """True when every exponent is even (membership in F[t^2, t^-2])."""
        return all(e % 2 == 0 for e in self._terms)

    def is_odd(self) -> bool:
        return all(e % 2 for e in self._terms)

    def min_exponent(self) -> int:
        return min(self._terms)

    def max_exponent(self) -> int:
        return max(self._terms)

    def shift(self, k: int) -> "LPoly":
        """Multiply by ``t^k``."""
        return LPoly({e + k: c for e, c in self._terms.items()})

    def __add__(self, other):
        if not isinstance(other, LPoly):
            other = _coerce(other)
            if other is None:
                return NotImplemented
        acc = dict(self._terms)
        for e, c in other._terms.items():
            acc[e] = acc.get(e, Fraction(0)) + c
        return LPoly(acc)

    __radd__ = __add__

    def __neg__(self) -> "LPoly":
        return LPoly({e: -c for e, c in self._terms.items()})

    def __sub__(self, other):
        if not isinstance(other, LPoly):
            other = _coerce(other)
            if other is None:
                return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, LPoly):
            return lpoly_mul(self, other)
        if isinstance(other, (int, Fraction)) and not isinstance(other, bool):
            return LPoly({e: c * other for e, c in self._terms.items()})
        return NotImplemented

    __rmul__ = __mul__

    def __eq__(self, other) -> bool:
        if isinstance(other, LPoly):
            return self._terms == other._terms
        if isinstance(other, (int, Fraction)) and not isinstance(other, bool):
            return self._terms == LPoly.constant(other)._terms
        return NotImplemented

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash(tuple(self._terms.items()))
        return self._hash

    def __bool__(self) -> bool:
        return bool(self._terms)

    def __repr__(self) -> str:
        return f"LPoly({str(self)!r})"

    def __str__(self) -> str:
        from .textio import format_lpoly

        return format_lpoly(self)


def _coerce(value) -> LPoly | None:
    if isinstance(value, (int, Fraction)) and not isinstance(value, bool):
        return LPoly.constant(value)
    return None


def lpoly_mul(a: LPoly, b: LPoly) -> LPoly:
    acc: dict[int, Fraction] = {}
    for e1, c1 in a.items():
        for e2, c2 in b.items():
            e = e1 + e2
            acc[e] = acc.get(e, Fraction(0)) + c1 * c2
    return LPoly(acc)


def lpoly_parity_split(a: LPoly) -> tuple[LPoly, LPoly]:
    """Split into (even-exponent part, odd-exponent part)."""
    even = {e: c for e, c in a.items() if e % 2 == 0}
    odd = {e: c for e, c in a.items() if e % 2}
    return LPoly(even), LPoly(odd)


def lpoly_divide_exact(a: LPoly, b: LPoly) -> LPoly | None:
    """Return ``q`` with ``b*q == a`` in F[t, 1/t], or None if ``b`` does not divide ``a``.

    Units of the Laurent ring are monomials, so both operands are shifted to
    ordinary polynomials with nonzero constant term before long division.
    """
    if b.is_zero():
        raise ZeroDivisionError("division by the zero Laurent polynomial")
    if a.is_zero():
        return LPoly()
    lo_a, lo_b = a.min_exponent(), b.min_exponent()
    num = [Fraction(0)] * (a.max_exponent() - lo_a + 1)
    for e, c in a.items():
        num[e - lo_a] = c
    den = [Fraction(0)] * (b.max_exponent() - lo_b + 1)
    for e, c in b.items():
        den[e - lo_b] = c
    if len(den) > len(num):
        return None
    quot = [Fraction(0)] * (len(num) - len(den) + 1)
    lead = den[-1]
    for k in range(len(quot) - 1, -1, -1):
        q = num[k + len(den) - 1] / lead
        quot[k] = q
        if q:
            for m, dc in enumerate(den):
                num[k + m] -= q * dc
    if any(num):
        return None
    return LPoly({k + lo_a - lo_b: q for k, q in enumerate(quot)})

"""The finite algebra L, its twisted loop algebra and its twisted affinization.

An algebra is presented by a rank ``l`` and a Gram matrix ``G`` of the root
pairings.  The basis is

* ``h_i (x) t^d`` with ``d`` even (the torus part),
* ``x_i (x) t^d`` with ``d`` odd (the derived algebra part),
* ``K`` (central, affine variant only),

with ``[h_i t^a, x_j t^b] = delta_ij x_j t^(a+b)``, ``[x, x'] = 0`` and, in the
affine variant, ``[h_i t^a, h_u t^b] = a delta_{a+b,0} B_iu K`` where
``B = G^-1`` is the torus form.  The finite algebra L uses ``h_i = h_i t^0``
and ``x_i = x_i t^1``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum, IntEnum
from fractions import Fraction
from typing import Iterable, Iterator, Mapping, NamedTuple

from .kernel import Scalar, to_rat
from .linalg import RatMatrix, inverse, leading_minors

__all__ = [
    "Variant",
    "Kind",
    "BasisVec",
    "Elem",
    "AlgSpec",
    "Parity",
    "make_spec",
    "bracket",
    "bracket_basis",
    "dual_torus",
    "parity_of",
    "domain_basis",
    "h",
    "x",
    "K",
]


class Variant(str, Enum):
    FINITE = "finite"
    LOOP = "loop"
    AFFINE = "affine"


class Kind(IntEnum):
    H = 0
    X = 1
    K = 2


class BasisVec(NamedTuple):
    """A basis vector; tuple order (kind, index, degree) is the canonical order."""

    kind: Kind
    index: int = 0
    degree: int = 0

    @property
    def is_even(self) -> bool:
        return self.kind != Kind.X

    def shifted(self, k: int) -> "BasisVec":
        if self.kind == Kind.K:
            raise ValueError("K carries no t-degree")
        return BasisVec(self.kind, self.index, self.degree + k)

    def __str__(self) -> str:
        from .textio import format_basis

        return format_basis(self)


def h(i: int, degree: int = 0) -> BasisVec:
    return BasisVec(Kind.H, i, degree)


def x(i: int, degree: int = 1) -> BasisVec:
    return BasisVec(Kind.X, i, degree)


K = BasisVec(Kind.K, 0, 0)


class Elem:
    """Immutable finite linear combination of basis vectors."""

    __slots__ = ("_terms", "_hash")

    def __init__(self, terms: Mapping[BasisVec, Scalar] | Iterable[tuple[BasisVec, Scalar]] = ()):
        items = terms.items() if isinstance(terms, Mapping) else terms
        acc: dict[BasisVec, Fraction] = {}
        for b, c in items:
            if not isinstance(b, BasisVec):
                b = BasisVec(*b)
            acc[b] = acc.get(b, Fraction(0)) + to_rat(c)
        self._terms = {b: acc[b] for b in sorted(acc) if acc[b] != 0}
        self._hash = None

    @classmethod
    def _raw(cls, terms: dict[BasisVec, Fraction]) -> "Elem":
        # terms must already be free of zeros; ordering is restored here
        e = cls.__new__(cls)
        e._terms = {b: terms[b] for b in sorted(terms)}
        e._hash = None
        return e

    @classmethod
    def basis(cls, b: BasisVec, coeff: Scalar = 1) -> "Elem":
        return cls({b: coeff})

    @property
    def terms(self) -> dict[BasisVec, Fraction]:
        return dict(self._terms)

    def items(self):
        return self._terms.items()

    def support(self) -> list[BasisVec]:
        return list(self._terms)

    def coeff(self, b: BasisVec) -> Fraction:
        return self._terms.get(b, Fraction(0))

    def is_zero(self) -> bool:
        return not self._terms

    def __len__(self) -> int:
        return len(self._terms)

    def __iter__(self) -> Iterator[BasisVec]:
        return iter(self._terms)

    def __bool__(self) -> bool:
        return bool(self._terms)

    def __add__(self, other: "Elem") -> "Elem":
        if not isinstance(other, Elem):
            return NotImplemented
        acc = dict(self._terms)
        for b, c in other._terms.items():
            v = acc.get(b, 0) + c
            if v:
                acc[b] = v
            else:
                acc.pop(b, None)
        return Elem._raw(acc)

    def __neg__(self) -> "Elem":
        return Elem._raw({b: -c for b, c in self._terms.items()})

    def __sub__(self, other: "Elem") -> "Elem":
        if not isinstance(other, Elem):
            return NotImplemented
        return self + (-other)

    def __mul__(self, scalar):
        if isinstance(scalar, bool) or not isinstance(scalar, (int, Fraction)):
            return NotImplemented
        if scalar == 0:
            return Elem()
        return Elem._raw({b: c * scalar for b, c in self._terms.items()})

    __rmul__ = __mul__

    def __eq__(self, other) -> bool:
        if isinstance(other, Elem):
            return self._terms == other._terms
        if other == 0:
            return not self._terms
        return NotImplemented

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash(tuple(self._terms.items()))
        return self._hash

    def shift(self, k: int) -> "Elem":
        """Multiply the loop coordinate by ``t^k``; K is not allowed."""
        return Elem._raw({b.shifted(k): c for b, c in self._terms.items()})

    def drop_center(self) -> "Elem":
        return Elem._raw({b: c for b, c in self._terms.items() if b.kind != Kind.K})

    def even_part(self) -> "Elem":
        return Elem._raw({b: c for b, c in self._terms.items() if b.kind != Kind.X})

    def odd_part(self) -> "Elem":
        return Elem._raw({b: c for b, c in self._terms.items() if b.kind == Kind.X})

    def __repr__(self) -> str:
        return f"Elem({str(self)!r})"

    def __str__(self) -> str:
        from .textio import format_element

        return format_element(self)


@dataclass(frozen=True)
class AlgSpec:
    rank: int
    gram: RatMatrix
    variant: Variant
    torus: RatMatrix = field(compare=False)

    @property
    def affine(self) -> bool:
        return self.variant == Variant.AFFINE

    def with_variant(self, variant: Variant | str) -> "AlgSpec":
        return AlgSpec(self.rank, self.gram, Variant(variant), self.torus)

    def torus_form(self, i: int, u: int) -> Fraction:
        """The pairing ``(h_i, h_u)``, an entry of ``G^-1``."""
        return self.torus.rows[i - 1][u - 1]

    def root_pairing(self, k: int, m: int) -> Fraction:
        """``(beta_k, beta_m) = beta_k(h_m')``."""
        return self.gram.rows[k - 1][m - 1]

    def check_basis(self, b: BasisVec) -> None:
        if b.kind == Kind.K:
            if self.variant != Variant.AFFINE:
                raise ValueError(f"K only exists in the affine variant, not {self.variant.value}")
            if b.index or b.degree:
                raise ValueError("K carries no index or degree")
            return
        if not 1 <= b.index <= self.rank:
            raise ValueError(f"index {b.index} outside 1..{self.rank}")
        if b.kind == Kind.H and b.degree % 2:
            raise ValueError(f"h-vectors need an even degree, got {b.degree}")
        if b.kind == Kind.X and b.degree % 2 == 0:
            raise ValueError(f"x-vectors need an odd degree, got {b.degree}")
        if self.variant == Variant.FINITE and b.degree != (0 if b.kind == Kind.H else 1):
            raise ValueError("the finite algebra only has h_i (degree 0) and x_i (degree 1)")

    def check_elem(self, X: Elem) -> None:
        for b in X:
            self.check_basis(b)


def make_spec(l: int, G, variant: Variant | str = Variant.AFFINE) -> AlgSpec:
    """Validate ``G`` (symmetric, positive definite) and build the algebra data."""
    if l < 1:
        raise ValueError("rank must be positive")
    G = G if isinstance(G, RatMatrix) else RatMatrix(G)
    if G.shape != (l, l):
        raise ValueError(f"Gram matrix must be {l}x{l}, got {G.nrows}x{G.ncols}")
    if not G.is_symmetric():
        raise ValueError("Gram matrix must be symmetric")
    for k, minor in enumerate(leading_minors(G), start=1):
        if minor <= 0:
            raise ValueError(
                f"Gram matrix is not positive definite: leading minor of order {k} is {minor}"
            )
    return AlgSpec(l, G, Variant(variant), inverse(G))


def bracket_basis(spec: AlgSpec, a: BasisVec, b: BasisVec) -> tuple[BasisVec, Fraction] | None:
    """Bracket of two basis vectors: a single term or None."""
    ka, kb = a.kind, b.kind
    if ka == Kind.K or kb == Kind.K:
        return None
    if ka == Kind.H:
        if kb == Kind.X:
            if a.index == b.index:
                return BasisVec(Kind.X, b.index, a.degree + b.degree), Fraction(1)
            return None
        if spec.variant == Variant.AFFINE and a.degree and a.degree + b.degree == 0:
            c = a.degree * spec.torus.rows[a.index - 1][b.index - 1]
            if c:
                return K, c
        return None
    if kb == Kind.H:
        if a.index == b.index:
            return BasisVec(Kind.X, a.index, a.degree + b.degree), Fraction(-1)
        return None
    return None


def _bracket_terms(spec: AlgSpec, X: Mapping[BasisVec, Fraction], Y: Mapping[BasisVec, Fraction]):
    acc: dict[BasisVec, Fraction] = {}
    for a, ca in X.items():
        for b, cb in Y.items():
            r = bracket_basis(spec, a, b)
            if r is not None:
                v = acc.get(r[0], 0) + ca * cb * r[1]
                if v:
                    acc[r[0]] = v
                else:
                    acc.pop(r[0], None)
    return acc


def bracket(spec: AlgSpec, X: Elem, Y: Elem, *, check: bool = True) -> Elem:
    if check:
        spec.check_elem(X)
        spec.check_elem(Y)
    return Elem._raw(_bracket_terms(spec, X._terms, Y._terms))


def dual_torus(spec: AlgSpec, i: int) -> Elem:
    """``h_i' = sum_k G_ik h_k``, the torus vector with ``(h_m, h_i') = delta_mi``."""
    if spec.variant == Variant.FINITE:
        raise ValueError("the dual torus basis is defined on the loop and affine variants")
    if not 1 <= i <= spec.rank:
        raise ValueError(f"index {i} outside 1..{spec.rank}")
    return Elem({h(k): spec.gram.rows[i - 1][k - 1] for k in range(1, spec.rank + 1)})


class Parity(str, Enum):
    EVEN = "even"
    ODD = "odd"
    MIXED = "mixed"
    ZERO = "zero"


def parity_of(X: Elem) -> Parity:
    if X.is_zero():
        return Parity.ZERO
    kinds = {b.kind == Kind.X for b in X}
    if kinds == {False}:
        return Parity.EVEN
    if kinds == {True}:
        return Parity.ODD
    return Parity.MIXED


def domain_basis(spec: AlgSpec, N: int) -> list[BasisVec]:
    """All basis vectors with ``|degree| <= N`` (plus K when affine), canonically ordered."""
    if spec.variant == Variant.FINITE:
        return [h(i) for i in range(1, spec.rank + 1)] + [x(i) for i in range(1, spec.rank + 1)]
    hs = [h(i, d) for i in range(1, spec.rank + 1) for d in range(-N, N + 1) if d % 2 == 0]
    xs = [x(i, d) for i in range(1, spec.rank + 1) for d in range(-N, N + 1) if d % 2]
    return hs + xs + ([K] if spec.affine else [])

"""Exact linear algebra over the rationals.

Elimination is fraction-free: rows are scaled to integer content and each
combination step is ``p*row - a*pivot_row`` followed by removal of the row's
gcd, so intermediate entries stay integral and small.  Only the final
back-substitution uses Fractions.  Rows are stored sparsely because the
systems built by the derivation and almost-inner machinery are very sparse.

Pivot columns are the leftmost independent columns, which makes the set of
free variables (and hence every returned particular solution and nullspace
basis) independent of row order.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import gcd, lcm
from typing import Hashable, Iterable, Mapping, Sequence

from .kernel import to_rat

__all__ = [
    "RatMatrix",
    "SparseSystem",
    "solve_exact",
    "nullspace",
    "rank",
    "inverse",
    "leading_minors",
    "mat_vec",
]


@dataclass(frozen=True)
class RatMatrix:
    rows: tuple[tuple[Fraction, ...], ...]

    def __init__(self, rows: Iterable[Iterable]):
        rows = tuple(tuple(to_rat(v) for v in r) for r in rows)
        if rows and len({len(r) for r in rows}) != 1:
            raise ValueError("matrix rows must have equal length")
        object.__setattr__(self, "rows", rows)

    @classmethod
    def identity(cls, n: int) -> "RatMatrix":
        return cls([[1 if i == j else 0 for j in range(n)] for i in range(n)])

    @property
    def nrows(self) -> int:
        return len(self.rows)

    @property
    def ncols(self) -> int:
        return len(self.rows[0]) if self.rows else 0

    @property
    def shape(self) -> tuple[int, int]:
        return self.nrows, self.ncols

    def __getitem__(self, ij):
        i, j = ij
        return self.rows[i][j]

    def transpose(self) -> "RatMatrix":
        return RatMatrix(zip(*self.rows))

    def is_symmetric(self) -> bool:
        n = self.nrows
        return n == self.ncols and all(
            self.rows[i][j] == self.rows[j][i] for i in range(n) for j in range(i)
        )

    def __matmul__(self, other):
        if isinstance(other, RatMatrix):
            if self.ncols != other.nrows:
                raise ValueError("dimension mismatch")
            cols = other.transpose().rows
            return RatMatrix([[sum(a * b for a, b in zip(r, c)) for c in cols] for r in self.rows])
        return mat_vec(self, other)

    def tolist(self) -> list[list[Fraction]]:
        return [list(r) for r in self.rows]


def _as_matrix(A) -> RatMatrix:
    return A if isinstance(A, RatMatrix) else RatMatrix(A)


def mat_vec(A, v: Sequence) -> list[Fraction]:
    A = _as_matrix(A)
    if len(v) != A.ncols:
        raise ValueError("dimension mismatch")
    return [sum((a * b for a, b in zip(row, v)), Fraction(0)) for row in A.rows]


def _integer_row(row: Mapping[int, Fraction]) -> dict[int, int]:
    den = 1
    for v in row.values():
        den = lcm(den, v.denominator)
    out = {c: int(v * den) for c, v in row.items() if v}
    return _primitive(out)


def _primitive(row: dict[int, int]) -> dict[int, int]:
    g = 0
    for v in row.values():
        g = gcd(g, v)
        if g == 1:
            return row
    if g > 1:
        return {c: v // g for c, v in row.items()}
    return row


class SparseSystem:
    """Echelon form of a sparse linear system ``A x = b`` built row by row.

    ``ncols`` unknowns are numbered ``0..ncols-1``; the right-hand side lives in
    column ``ncols``.  Rows are reduced on insertion, so the object is always in
    echelon form and can be queried for consistency at any time.
    """

    def __init__(self, ncols: int):
        self.ncols = ncols
        self._pivots: dict[int, dict[int, int]] = {}
        self.inconsistent = False

    @property
    def rank(self) -> int:
        return len(self._pivots)

    @property
    def pivot_columns(self) -> list[int]:
        return sorted(self._pivots)

    def free_columns(self) -> list[int]:
        return [c for c in range(self.ncols) if c not in self._pivots]

    def add_row(self, coeffs: Mapping[int, Fraction | int], rhs: Fraction | int = 0) -> None:
        row = {c: to_rat(v) for c, v in coeffs.items() if v}
        for c in row:
            if not 0 <= c < self.ncols:
                raise IndexError(f"column {c} out of range")
        if rhs:
            row[self.ncols] = to_rat(rhs)
        if not row:
            return
        r = _integer_row(row)
        rhs_col = self.ncols
        pivots = self._pivots
        while True:
            lead = None
            for c in r:
                if c != rhs_col and c in pivots and (lead is None or c < lead):
                    lead = c
            if lead is None:
                break
            p = pivots[lead]
            a, pl = r[lead], p[lead]
            g = gcd(a, pl)
            fa, fp = pl // g, a // g
            new = {c: v * fa for c, v in r.items()}
            for c, v in p.items():
                nv = new.get(c, 0) - fp * v
                if nv:
                    new[c] = nv
                else:
                    new.pop(c, None)
            r = _primitive(new)
            if not r:
                return
        cols = [c for c in r if c != rhs_col]
        if not cols:
            self.inconsistent = True
            return
        lead = min(cols)
        if r[lead] < 0:
            r = {c: -v for c, v in r.items()}
        pivots[lead] = r

    def _back_substitute(self, x: list[Fraction], homogeneous: bool) -> list[Fraction]:
        rhs_col = self.ncols
        for lead in sorted(self._pivots, reverse=True):
            row = self._pivots[lead]
            s = Fraction(0) if homogeneous else Fraction(row.get(rhs_col, 0))
            for c, v in row.items():
                if c != lead and c != rhs_col:
                    xc = x[c]
                    if xc:
                        s -= v * xc
            x[lead] = s / row[lead]
        return x

    def particular(self) -> list[Fraction] | None:
        """Solution with every free variable zero, or None if inconsistent."""
        if self.inconsistent:
            return None
        return self._back_substitute([Fraction(0)] * self.ncols, homogeneous=False)

    def nullspace(self) -> list[list[Fraction]]:
        basis = []
        for f in self.free_columns():
            x = [Fraction(0)] * self.ncols
            x[f] = Fraction(1)
            basis.append(self._back_substitute(x, homogeneous=True))
        return basis


def _system_from_dense(A: RatMatrix, b: Sequence | None) -> SparseSystem:
    sys_ = SparseSystem(A.ncols)
    for i, row in enumerate(A.rows):
        sys_.add_row({j: v for j, v in enumerate(row) if v}, 0 if b is None else b[i])
    return sys_


def solve_exact(A, b: Sequence) -> tuple[list[Fraction], list[list[Fraction]]] | None:
    """Solve ``A x = b`` exactly.

    Returns ``(particular, nullspace_basis)`` or None when the system is
    inconsistent.  Raises ValueError on a dimension mismatch.
    """
    A = _as_matrix(A)
    b = [to_rat(v) for v in b]
    if len(b) != A.nrows:
        raise ValueError(f"A has {A.nrows} rows but b has {len(b)} entries")
    sys_ = _system_from_dense(A, b)
    x = sys_.particular()
    if x is None:
        return None
    return x, sys_.nullspace()


def nullspace(A) -> list[list[Fraction]]:
    A = _as_matrix(A)
    return _system_from_dense(A, None).nullspace()


def rank(A) -> int:
    A = _as_matrix(A)
    return _system_from_dense(A, None).rank


def inverse(A) -> RatMatrix:
    A = _as_matrix(A)
    n = A.nrows
    if n != A.ncols:
        raise ValueError("only square matrices are invertible")
    sys_ = _system_from_dense(A, None)
    if sys_.rank < n:
        raise ZeroDivisionError("matrix is singular")
    cols = []
    for k in range(n):
        e = [1 if i == k else 0 for i in range(n)]
        x, _ = solve_exact(A, e)
        cols.append(x)
    return RatMatrix(zip(*cols))


def leading_minors(A) -> list[Fraction]:
    """Leading principal minors via Bareiss elimination without row exchanges.

    Stops after the first vanishing minor, since later ones are no longer
    available as pivots.
    """
    A = _as_matrix(A)
    n = A.nrows
    if n != A.ncols:
        raise ValueError("leading minors need a square matrix")
    M = A.tolist()
    minors = []
    prev = Fraction(1)
    for k in range(n):
        piv = M[k][k]
        minors.append(piv)
        if piv == 0:
            break
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                M[i][j] = (piv * M[i][j] - M[i][k] * M[k][j]) / prev
        prev = piv
    return minors


def solve_keyed(
    columns: Sequence[Hashable],
    rows: Iterable[tuple[Mapping[Hashable, Fraction], Fraction]],
) -> SparseSystem:
    """Build a SparseSystem whose unknowns are labelled by ``columns``."""
    index = {key: k for k, key in enumerate(columns)}
    sys_ = SparseSystem(len(columns))
    for coeffs, rhs in rows:
        sys_.add_row({index[k]: v for k, v in coeffs.items()}, rhs)
    return sys_

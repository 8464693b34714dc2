"""Derivation candidates on degree windows and their classification.

A :class:`DMap` stores the image of every basis vector with ``|degree| <= N``
(plus K in the affine variant).  Derivation laws are checked only for pairs
whose bracket stays inside that window; everything else is counted as skipped.

The loop-algebra decomposition implemented here splits a derivation into a
coefficient-semilinear part (``project_to_DS``) read off from the images of
``h_i t^0`` and ``x_i t^1``, and a remainder that vanishes on those vectors and
is a centroid element times a derivation of the Laurent ring
(``classify_DL1`` / ``make_cent_der``).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Iterable, Mapping, Sequence

from .algebra import (
    AlgSpec,
    BasisVec,
    Elem,
    Kind,
    Variant,
    _bracket_terms,
    bracket_basis,
    domain_basis,
    h,
    make_spec,
    x,
)
from .kernel import LPoly
from .linalg import RatMatrix, SparseSystem, solve_exact

__all__ = [
    "DMap",
    "DSCoords",
    "CentDerForm",
    "ShapeError",
    "DerivationCheck",
    "make_ad",
    "check_derivation",
    "split_parity_map",
    "project_to_DS",
    "classify_DS",
    "ds_map",
    "classify_DL1",
    "make_cent_der",
    "derivation_space",
    "der_L_basis",
    "centroid_basis",
    "dl1_space",
    "finite_spec",
]


class ShapeError(ValueError):
    """A map does not have the shape a classification expects.

    ``vector`` is the offending domain basis vector and ``term`` the image term
    (or a short description) that violates the shape.
    """

    def __init__(self, message: str, vector: BasisVec | None = None, term=None):
        self.vector = vector
        self.term = term
        super().__init__(message)


class DMap:
    """A linear map given on every basis vector of a degree window."""

    __slots__ = ("spec", "window", "_images", "_domain")

    def __init__(self, spec: AlgSpec, window: int, images: Mapping[BasisVec, Elem] | None = None):
        if spec.variant != Variant.FINITE and window < 1:
            raise ValueError("window must be at least 1")
        self.spec = spec
        self.window = window if spec.variant != Variant.FINITE else 1
        self._domain = tuple(domain_basis(spec, self.window))
        dom = set(self._domain)
        images = dict(images or {})
        for b in images:
            if b not in dom:
                raise ValueError(f"{b} is outside the window |degree| <= {self.window}")
        self._images = {b: images.get(b, Elem()) for b in self._domain}
        if spec.affine:
            img = self._images[BasisVec(Kind.K)]
            if any(b.kind != Kind.K for b in img):
                raise ValueError("the image of K must be a multiple of K")

    @property
    def domain(self) -> tuple[BasisVec, ...]:
        return self._domain

    @property
    def images(self) -> dict[BasisVec, Elem]:
        return dict(self._images)

    def image(self, b: BasisVec) -> Elem:
        try:
            return self._images[b]
        except KeyError:
            raise KeyError(f"{b} is outside the window of this map") from None

    def in_domain(self, b: BasisVec) -> bool:
        return b in self._images

    def __call__(self, X: Elem) -> Elem:
        acc: dict[BasisVec, Fraction] = {}
        for b, c in X.items():
            for t, v in self.image(b).items():
                s = acc.get(t, 0) + c * v
                if s:
                    acc[t] = s
                else:
                    acc.pop(t, None)
        return Elem._raw(acc)

    def _combine(self, other: "DMap", sign: int) -> "DMap":
        if other.spec != self.spec or other.window != self.window:
            raise ValueError("maps live on different algebras or windows")
        return DMap(
            self.spec,
            self.window,
            {b: self._images[b] + other._images[b] * sign for b in self._domain},
        )

    def __add__(self, other: "DMap") -> "DMap":
        return self._combine(other, 1)

    def __sub__(self, other: "DMap") -> "DMap":
        return self._combine(other, -1)

    def __neg__(self) -> "DMap":
        return self * -1

    def __mul__(self, c) -> "DMap":
        return DMap(self.spec, self.window, {b: e * c for b, e in self._images.items()})

    __rmul__ = __mul__

    def __eq__(self, other) -> bool:
        if not isinstance(other, DMap):
            return NotImplemented
        return (
            self.spec == other.spec
            and self.window == other.window
            and self._images == other._images
        )

    def is_zero(self) -> bool:
        return all(e.is_zero() for e in self._images.values())

    def map_images(self, f: Callable[[BasisVec, Elem], Elem]) -> "DMap":
        return DMap(self.spec, self.window, {b: f(b, e) for b, e in self._images.items()})

    def restrict(self, window: int) -> "DMap":
        """Same map on a smaller window."""
        if window > self.window:
            raise ValueError("can only restrict to a smaller window")
        dom = domain_basis(self.spec, window)
        return DMap(self.spec, window, {b: self._images[b] for b in dom})

    def __repr__(self) -> str:
        nz = sum(1 for e in self._images.values() if e)
        return f"DMap({self.spec.variant.value}, l={self.spec.rank}, N={self.window}, nonzero={nz})"


def zero_map(spec: AlgSpec, N: int) -> DMap:
    return DMap(spec, N)


def make_ad(spec: AlgSpec, y: Elem, N: int) -> DMap:
    """``ad y`` on the window: ``b -> [y, b]``."""
    spec.check_elem(y)
    terms = y._terms
    return DMap(
        spec,
        N,
        {b: Elem._raw(_bracket_terms(spec, terms, {b: Fraction(1)})) for b in domain_basis(spec, N)},
    )


@dataclass
class DerivationCheck:
    ok: bool
    checked: int
    skipped: int
    counterexamples: list[tuple[BasisVec, BasisVec, Elem, Elem]] = field(default_factory=list)

    @property
    def counterexample(self):
        return self.counterexamples[0] if self.counterexamples else None

    def __bool__(self) -> bool:
        return self.ok


def check_derivation(spec: AlgSpec, D: DMap, *, limit: int | None = None) -> DerivationCheck:
    """Check ``D[a,b] = [Da,b] + [a,Db]`` on every pair of window basis vectors.

    Pairs whose bracket leaves the window are skipped.  ``limit`` stops after
    that many counterexamples.
    """
    if D.spec != spec:
        raise ValueError("map belongs to a different algebra")
    dom = D.domain
    imgs = [D.image(b)._terms for b in dom]
    checked = skipped = 0
    bad = []
    for i, a in enumerate(dom):
        ea = {a: Fraction(1)}
        for j in range(i + 1, len(dom)):
            b = dom[j]
            r = bracket_basis(spec, a, b)
            if r is None:
                lhs: dict = {}
            elif D.in_domain(r[0]):
                lhs = {t: v * r[1] for t, v in D.image(r[0]).items()}
            else:
                skipped += 1
                continue
            checked += 1
            rhs = _bracket_terms(spec, imgs[i], {b: Fraction(1)})
            for t, v in _bracket_terms(spec, ea, imgs[j]).items():
                s = rhs.get(t, 0) + v
                if s:
                    rhs[t] = s
                else:
                    rhs.pop(t, None)
            if lhs != rhs:
                bad.append((a, b, Elem._raw(lhs), Elem._raw(rhs)))
                if limit is not None and len(bad) >= limit:
                    return DerivationCheck(False, checked, skipped, bad)
    return DerivationCheck(not bad, checked, skipped, bad)


def split_parity_map(D: DMap) -> tuple[DMap, DMap]:
    """(parity-preserving part, parity-reversing part)."""
    even = D.map_images(lambda b, e: e.even_part() if b.is_even else e.odd_part())
    odd = D.map_images(lambda b, e: e.odd_part() if b.is_even else e.even_part())
    return even, odd


def _require_loop(spec: AlgSpec, what: str) -> None:
    if spec.variant != Variant.LOOP:
        raise ValueError(f"{what} works on the twisted loop algebra (loop variant)")


def project_to_DS(spec: AlgSpec, D: DMap) -> tuple[DMap, DMap]:
    """Split ``D`` into ``d`` (shift-equivariant) and ``delta = D - d``.

    ``d(h t^2j) = D(h t^0) t^2j`` and ``d(x t^(2j+1)) = D(x t) t^2j``.
    """
    _require_loop(spec, "project_to_DS")
    if D.window < 1:
        raise ValueError("window must be at least 1")
    base_h = {i: D.image(h(i, 0)) for i in range(1, spec.rank + 1)}
    base_x = {i: D.image(x(i, 1)) for i in range(1, spec.rank + 1)}

    def shifted(b: BasisVec, _e: Elem) -> Elem:
        if b.kind == Kind.H:
            return base_h[b.index].shift(b.degree)
        return base_x[b.index].shift(b.degree - 1)

    d = D.map_images(shifted)
    return d, D - d


@dataclass(frozen=True)
class DSCoords:
    """Coordinates of a shift-equivariant derivation.

    ``even[(m, e)] = b`` means ``x_m t^(2j+1) -> b x_m t^(2j+1+e)`` (e even);
    ``odd[(m, e)] = a`` means ``h_m t^2j -> a x_m t^(2j+e)`` (e odd).
    """

    even: Mapping[tuple[int, int], Fraction] = field(default_factory=dict)
    odd: Mapping[tuple[int, int], Fraction] = field(default_factory=dict)

    def __post_init__(self):
        ev = {k: Fraction(v) for k, v in sorted(self.even.items()) if v}
        od = {k: Fraction(v) for k, v in sorted(self.odd.items()) if v}
        if any(e % 2 for _, e in ev):
            raise ValueError("even coordinates need even shifts")
        if any(e % 2 == 0 for _, e in od):
            raise ValueError("odd coordinates need odd shifts")
        object.__setattr__(self, "even", ev)
        object.__setattr__(self, "odd", od)

    def is_zero(self) -> bool:
        return not self.even and not self.odd


def ds_map(spec: AlgSpec, coords: DSCoords, N: int) -> DMap:
    """Rebuild the shift-equivariant derivation with the given coordinates."""
    images = {}
    for b in domain_basis(spec, N):
        if b.kind == Kind.X:
            images[b] = Elem(
                (x(m, b.degree + e), c) for (m, e), c in coords.even.items() if m == b.index
            )
        elif b.kind == Kind.H:
            images[b] = Elem(
                (x(m, b.degree + e), c) for (m, e), c in coords.odd.items() if m == b.index
            )
    return DMap(spec, N, images)


def classify_DS(spec: AlgSpec, d: DMap) -> DSCoords:
    """Read the coordinates off a shift-equivariant derivation, validating its shape."""
    _require_loop(spec, "classify_DS")
    for b in d.domain:
        base = h(b.index, 0) if b.kind == Kind.H else x(b.index, 1)
        expected = d.image(base).shift(b.degree - base.degree)
        if d.image(b) != expected:
            raise ShapeError(
                f"{b} maps to {d.image(b)}, but shift equivariance requires {expected}",
                b,
                expected - d.image(b),
            )
    even, odd = {}, {}
    for m in range(1, spec.rank + 1):
        for t, c in d.image(h(m, 0)).items():
            if t.kind == Kind.X and t.index == m:
                odd[(m, t.degree)] = c
            elif t.kind == Kind.H:
                raise ShapeError(
                    f"h{m} has an image term {c} {t} in the torus; even parts must kill H",
                    h(m, 0),
                    (t, c),
                )
            else:
                raise ShapeError(
                    f"h{m} has off-diagonal image term {c} {t}", h(m, 0), (t, c)
                )
        for t, c in d.image(x(m, 1)).items():
            if t.kind == Kind.X and t.index == m:
                even[(m, t.degree - 1)] = c
            elif t.kind == Kind.H:
                raise ShapeError(
                    f"x{m} t^1 has torus image term {c} {t}; the derivation law forces "
                    "odd parts to vanish on x-vectors",
                    x(m, 1),
                    (t, c),
                )
            else:
                raise ShapeError(
                    f"x{m} t^1 has off-diagonal image term {c} {t}", x(m, 1), (t, c)
                )
    coords = DSCoords(even, odd)
    if ds_map(spec, coords, d.window) != d:
        raise ShapeError("reconstruction from coordinates does not reproduce the map")
    return coords


@dataclass(frozen=True)
class CentDerForm:
    """``lambda_k (x) delta_f`` with ``delta_f(t^2j) = j t^(2j-2) f``."""

    k: int
    f: LPoly

    def __post_init__(self):
        if not self.f.is_even():
            raise ValueError("f must have even support")


def make_cent_der(spec: AlgSpec, form: CentDerForm, N: int) -> DMap:
    if not 1 <= form.k <= spec.rank:
        raise ValueError(f"index {form.k} outside 1..{spec.rank}")
    if not form.f.is_even():
        raise ValueError("f must have even support")
    images = {}
    for b in domain_basis(spec, N):
        if b.kind == Kind.K or b.index != form.k:
            continue
        j = b.degree // 2  # h t^2j and x t^(2j+1) both give j
        poly = form.f.shift(b.degree - 2) * j
        images[b] = Elem((BasisVec(b.kind, b.index, e), c) for e, c in poly.items())
    return DMap(spec, N, images)


def classify_DL1(spec: AlgSpec, delta: DMap) -> list[LPoly]:
    """Return ``f_1, ..., f_l`` for a derivation vanishing on ``h t^0`` and ``x t``."""
    _require_loop(spec, "classify_DL1")
    if delta.window < 2:
        raise ValueError("window must be at least 2 to read f from h_k t^2")
    for i in range(1, spec.rank + 1):
        for b in (h(i, 0), x(i, 1)):
            if delta.image(b):
                raise ShapeError(f"{b} must map to 0, got {delta.image(b)}", b, delta.image(b))
    fs = []
    for k in range(1, spec.rank + 1):
        img = delta.image(h(k, 2))
        for t, c in img.items():
            if t.kind != Kind.H or t.index != k:
                raise ShapeError(f"h{k} t^2 has image term {c} {t} outside h{k} (x) R", h(k, 2), (t, c))
        fs.append(LPoly({t.degree: c for t, c in img.items()}))
    expected = make_cent_der_sum(spec, fs, delta.window)
    for b in delta.domain:
        if delta.image(b) != expected.image(b):
            raise ShapeError(
                f"{b} maps to {delta.image(b)}; the centroid-derivation rule gives {expected.image(b)}",
                b,
                delta.image(b) - expected.image(b),
            )
    return fs


def make_cent_der_sum(spec: AlgSpec, fs: Sequence[LPoly], N: int) -> DMap:
    total = DMap(spec, N)
    for k, f in enumerate(fs, start=1):
        if f:
            total = total + make_cent_der(spec, CentDerForm(k, f), N)
    return total


# -- brute-force derivation spaces ----------------------------------------------


def derivation_space(
    spec: AlgSpec,
    N: int,
    targets: Callable[[BasisVec], Iterable[BasisVec]],
    *,
    grading: Iterable[int] | None = None,
) -> list[DMap]:
    """Basis of all maps ``b -> sum_t m_bt t`` (t in ``targets(b)``) obeying the window law.

    With ``grading``, unknowns are grouped by degree shift ``deg t - deg b``
    (K has degree 0) and each group is solved separately; the bracket is
    additive in degree, so the derivation law never couples different shifts.
    Only shifts listed in ``grading`` are searched.
    """
    dom = domain_basis(spec, N)
    all_vars = [(b, t) for b in dom for t in targets(b)]
    if grading is None:
        groups = [all_vars]
    else:
        by_shift: dict[int, list] = {}
        for b, t in all_vars:
            by_shift.setdefault(t.degree - b.degree, []).append((b, t))
        groups = [by_shift[s] for s in sorted(set(grading)) if s in by_shift]
    result = []
    for group in groups:
        result.extend(_solve_derivation_group(spec, N, dom, group))
    return result


def _solve_derivation_group(spec, N, dom, variables) -> list[DMap]:
    if not variables:
        return []
    index = {v: k for k, v in enumerate(variables)}
    by_source: dict[BasisVec, list[tuple[BasisVec, int]]] = {}
    for (b, t), k in index.items():
        by_source.setdefault(b, []).append((t, k))
    domset = set(dom)
    system = SparseSystem(len(variables))
    for i, a in enumerate(dom):
        for b in dom[i + 1:]:
            r = bracket_basis(spec, a, b)
            if r is not None and r[0] not in domset:
                continue
            rows: dict[BasisVec, dict[int, Fraction]] = {}

            def put(coord, var, val):
                row = rows.setdefault(coord, {})
                row[var] = row.get(var, 0) + val

            if r is not None:
                for t, k in by_source.get(r[0], ()):
                    put(t, k, r[1])
            for t, k in by_source.get(a, ()):
                s = bracket_basis(spec, t, b)
                if s is not None:
                    put(s[0], k, -s[1])
            for t, k in by_source.get(b, ()):
                s = bracket_basis(spec, a, t)
                if s is not None:
                    put(s[0], k, -s[1])
            for row in rows.values():
                system.add_row(row)
    maps = []
    for vec in system.nullspace():
        images: dict[BasisVec, dict] = {}
        for (b, t), k in index.items():
            if vec[k]:
                images.setdefault(b, {})[t] = vec[k]
        maps.append(DMap(spec, N, {b: Elem(v) for b, v in images.items()}))
    return maps


def finite_spec(l: int) -> AlgSpec:
    """The finite algebra L of rank ``l`` (its bracket does not depend on G)."""
    return make_spec(l, RatMatrix.identity(l), Variant.FINITE)


def der_L_basis(l: int) -> list[DMap]:
    """Basis of Der(L), computed as a nullspace over all linear maps L -> L."""
    spec = finite_spec(l)
    dom = domain_basis(spec, 1)
    return derivation_space(spec, 1, lambda b: dom)


def centroid_basis(l: int) -> list[DMap]:
    """Basis ``lambda_1..lambda_l`` of the centroid, normalized so ``lambda_i(h_j) = delta_ij h_j``."""
    spec = finite_spec(l)
    dom = domain_basis(spec, 1)
    variables = [(b, t) for b in dom for t in dom]
    index = {v: k for k, v in enumerate(variables)}
    system = SparseSystem(len(variables))
    for a in dom:
        for b in dom:
            r = bracket_basis(spec, a, b)
            # lambda[a,b] - [lambda a, b] = 0  and  lambda[a,b] - [a, lambda b] = 0
            for side in (0, 1):
                rows: dict[BasisVec, dict[int, Fraction]] = {}
                if r is not None:
                    for t in dom:
                        row = rows.setdefault(t, {})
                        k = index[(r[0], t)]
                        row[k] = row.get(k, 0) + r[1]
                for t in dom:
                    s = bracket_basis(spec, t, b) if side == 0 else bracket_basis(spec, a, t)
                    if s is not None:
                        src = a if side == 0 else b
                        row = rows.setdefault(s[0], {})
                        k = index[(src, t)]
                        row[k] = row.get(k, 0) - s[1]
                for row in rows.values():
                    system.add_row(row)
    raw = system.nullspace()
    if not raw:
        return []
    # normalize against the coordinates lambda(h_j)[h_j]
    cols = [index[(h(j), h(j))] for j in range(1, l + 1)]
    sub = [[vec[c] for vec in raw] for c in cols]
    basis = []
    for i in range(l):
        target = [1 if r == i else 0 for r in range(l)]
        sol = solve_exact(sub, target)
        if sol is None:
            raise ArithmeticError("centroid basis cannot be normalized on the torus")
        combo, _ = sol
        vec = [sum(c * v[k] for c, v in zip(combo, raw)) for k in range(len(variables))]
        images: dict[BasisVec, dict] = {}
        for (b, t), k in index.items():
            if vec[k]:
                images.setdefault(b, {})[t] = vec[k]
        basis.append(DMap(spec, 1, {b: Elem(v) for b, v in images.items()}))
    return basis


def dl1_space(spec: AlgSpec, N: int, parity: str, target_window: int | None = None) -> list[DMap]:
    """Window derivations vanishing on ``h t^0`` and ``x t^1`` of the given parity.

    Unknown images range over basis vectors with ``|degree| <= target_window``
    (default N).
    """
    _require_loop(spec, "dl1_space")
    dom = domain_basis(spec, N)
    tw = N if target_window is None else target_window
    if tw < N:
        raise ValueError("target window must contain the domain window")
    codomain = domain_basis(spec, tw)
    hs = [b for b in codomain if b.kind == Kind.H]
    xs = [b for b in codomain if b.kind == Kind.X]
    fixed = {b for b in dom if b.degree in (0, 1)}

    def targets(b: BasisVec):
        if b in fixed:
            return []
        same = b.kind == Kind.H
        if parity == "even":
            return hs if same else xs
        if parity == "odd":
            return xs if same else hs
        raise ValueError("parity must be 'even' or 'odd'")

    return derivation_space(spec, N, targets, grading=range(-N - tw, N + tw + 1))

"""Almost inner derivations of the twisted affinization.

A derivation D is almost inner when every X admits some Y (depending on X)
with ``D(X) = [X, Y]``.  Over an infinite-dimensional algebra this can only be
sampled: :func:`certify_aid` probes many X and solves for Y exactly on growing
Y-windows.  Refutations are reported only with a window-independent
certificate, namely a coordinate of ``D(X)`` that no ``[X, y]`` can ever reach.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Mapping, Sequence

from .algebra import (
    AlgSpec,
    BasisVec,
    Elem,
    Kind,
    Variant,
    _bracket_terms,
    bracket,
    bracket_basis,
    domain_basis,
    dual_torus,
    h,
    x,
)
from .derivations import DMap, check_derivation, make_ad, split_parity_map
from .kernel import LPoly, lpoly_divide_exact
from .linalg import SparseSystem

__all__ = [
    "SolveResult",
    "CertReport",
    "AidCoords",
    "IndependenceResult",
    "NotApplicable",
    "NormalizationError",
    "DEFAULT_SCHEDULE_OFFSETS",
    "make_Dij",
    "solve_ad_at",
    "structural_obstruction",
    "ansatz_Y",
    "certify_aid",
    "generate_probes",
    "find_inner",
    "normalize_aid",
    "independence_check",
    "rigidity_check",
    "y_schedule",
]

SOLVED = "solved"
INFEASIBLE = "infeasible-in-window"
NOT_APPLICABLE = "not-applicable"

CERTIFIED = "certified-on-samples"
REFUTED = "refuted"
INCONCLUSIVE = "inconclusive"

DEFAULT_SCHEDULE_OFFSETS = (0, 2, 4, 8)

COEFFS = tuple(Fraction(c) for c in (1, -1, Fraction(1, 2), Fraction(-1, 2), 2, -2))


class NotApplicable(ValueError):
    pass


class NormalizationError(ValueError):
    pass


def y_schedule(N: int, cap: int | None = None) -> tuple[int, ...]:
    """Y-windows tried in order: N, N+2, N+4, N+8, cut at ``cap`` (which is always tried last)."""
    steps = [N + k for k in DEFAULT_SCHEDULE_OFFSETS]
    if cap is None:
        return tuple(steps)
    if cap < N:
        raise ValueError(f"Y-window cap {cap} is below the window {N}")
    steps = [m for m in steps if m < cap] + [cap]
    return tuple(steps)


def _require_affine(spec: AlgSpec, what: str) -> None:
    if spec.variant != Variant.AFFINE:
        raise ValueError(f"{what} needs the affine variant")


def make_Dij(spec: AlgSpec, i: int, j: int, N: int) -> DMap:
    """The map sending ``h_i t^2j`` to K and every other basis vector to 0."""
    _require_affine(spec, "make_Dij")
    if not 1 <= i <= spec.rank:
        raise ValueError(f"index {i} outside 1..{spec.rank}")
    if abs(2 * j) > N:
        raise ValueError(f"degree {2 * j} outside the window {N}")
    return DMap(spec, N, {h(i, 2 * j): Elem({BasisVec(Kind.K): 1})})


@dataclass(frozen=True)
class SolveResult:
    status: str
    witness: Elem | None = None
    window_tried: int = 0
    freedom_dim: int = 0
    certificate: BasisVec | None = None

    @property
    def solved(self) -> bool:
        return self.status == SOLVED

    @property
    def structural(self) -> bool:
        return self.certificate is not None


def _verified(spec: AlgSpec, X: Elem, target: Elem, Y: Elem) -> Elem:
    got = bracket(spec, X, Y, check=False)
    if got != target:
        raise ArithmeticError(f"witness check failed: [X, Y] = {got}, expected {target}")
    return Y


def _partners(spec: AlgSpec, X: Elem, c: BasisVec) -> set[BasisVec]:
    """Every basis vector y (any degree) for which ``[a, y]`` can hit ``c`` for a term a of X."""
    out: set[BasisVec] = set()
    if c.kind == Kind.H:
        return out
    for a in X:
        if c.kind == Kind.X:
            if a.index != c.index:
                continue
            if a.kind == Kind.H:
                out.add(x(c.index, c.degree - a.degree))
            elif a.kind == Kind.X:
                out.add(h(c.index, c.degree - a.degree))
        elif a.kind == Kind.H and a.degree:
            for u in range(1, spec.rank + 1):
                if spec.torus_form(a.index, u):
                    out.add(h(u, -a.degree))
    return out


def structural_obstruction(spec: AlgSpec, X: Elem, target: Elem) -> BasisVec | None:
    """A coordinate of ``target`` whose row in ``[X, .]`` is identically zero, if any.

    Such a coordinate can never be matched by any Y, whatever the window.
    """
    candidates = {}
    for c, v in target.items():
        if not v:
            continue
        reachable = False
        for y in _partners(spec, X, c):
            if y not in candidates:
                candidates[y] = _bracket_terms(spec, X._terms, {y: Fraction(1)})
            if candidates[y].get(c):
                reachable = True
                break
        if not reachable:
            return c
    return None


def _y_basis(spec: AlgSpec, M: int) -> list[BasisVec]:
    return [b for b in domain_basis(spec, M) if b.kind != Kind.K]


def solve_ad_at(spec: AlgSpec, D: DMap, X: Elem, M: int) -> SolveResult:
    """Solve ``[X, Y] = D(X)`` for Y supported on ``|degree| <= M`` (no K)."""
    if any(not D.in_domain(b) for b in X):
        return SolveResult(NOT_APPLICABLE, window_tried=M)
    target = D(X)
    cert = structural_obstruction(spec, X, target)
    if cert is not None:
        return SolveResult(INFEASIBLE, window_tried=M, certificate=cert)
    return _solve_bracket_equation(spec, X, target, M)


def _solve_bracket_equation(spec: AlgSpec, X: Elem, target: Elem, M: int) -> SolveResult:
    ybasis = _y_basis(spec, M)
    cols, col_terms = [], []
    for y in ybasis:
        t = _bracket_terms(spec, X._terms, {y: Fraction(1)})
        if t:
            cols.append(y)
            col_terms.append(t)
    rows: dict[BasisVec, dict[int, Fraction]] = {}
    for k, t in enumerate(col_terms):
        for c, v in t.items():
            rows.setdefault(c, {})[k] = v
    system = SparseSystem(len(cols))
    for c, v in target.items():
        if c not in rows:
            return SolveResult(INFEASIBLE, window_tried=M)
    for c, row in rows.items():
        system.add_row(row, target.coeff(c))
        if system.inconsistent:
            return SolveResult(INFEASIBLE, window_tried=M)
    sol = system.particular()
    if sol is None:
        return SolveResult(INFEASIBLE, window_tried=M)
    Y = Elem._raw({cols[k]: v for k, v in enumerate(sol) if v})
    _verified(spec, X, target, Y)
    return SolveResult(SOLVED, Y, M, len(ybasis) - system.rank)


def ansatz_Y(spec: AlgSpec, i: int, j: int, X: Elem) -> Elem | None:
    """Closed-form witness for ``D_ij``: torus part in degree ``-2j``, x-part by division.

    Returns None when some exact Laurent division fails, i.e. the single-degree
    torus part cannot be completed.
    """
    _require_affine(spec, "ansatz_Y")
    if j == 0:
        raise NotApplicable("the ansatz divides by j, so j = 0 is not covered")
    if any(b.kind == Kind.K for b in X):
        raise ValueError("X must have no central component")
    spec.check_elem(X)
    l = spec.rank
    b_polys = {m: LPoly() for m in range(1, l + 1)}
    c_polys = {m: LPoly() for m in range(1, l + 1)}
    for t, c in X.items():
        target = b_polys if t.kind == Kind.H else c_polys
        target[t.index] = target[t.index] + LPoly.monomial(t.degree, c)
    A = [m for m in range(1, l + 1) if b_polys[m]]
    B = [m for m in range(1, l + 1) if not b_polys[m]]
    half = Fraction(1, 2 * j)
    d: dict[int, Fraction] = {}
    if B:
        # sum_{m in B} (beta_k, beta_m) d_m = (beta_k, beta_i) / 2j  for k in B
        system = SparseSystem(len(B))
        for k in B:
            system.add_row(
                {n: spec.root_pairing(k, m) for n, m in enumerate(B)},
                spec.root_pairing(k, i) * half,
            )
        sol = system.particular()
        if sol is None or system.rank < len(B):
            raise ArithmeticError("principal Gram submatrix is singular")
        d = dict(zip(B, sol))
    Y = dual_torus(spec, i).shift(-2 * j) * half
    for k, dk in d.items():
        if dk:
            Y = Y - dual_torus(spec, k).shift(-2 * j) * dk
    for k in A:
        gamma = spec.root_pairing(k, i) * half - sum(
            (spec.root_pairing(k, m) * dm for m, dm in d.items()), Fraction(0)
        )
        rhs = c_polys[k].shift(-2 * j) * gamma
        if not rhs:
            continue
        e = lpoly_divide_exact(rhs, b_polys[k])
        if e is None:
            return None
        Y = Y + Elem((x(k, deg), c) for deg, c in e.items())
    target = Elem({BasisVec(Kind.K): X.coeff(h(i, 2 * j))})
    return _verified(spec, X, target, Y)


# -- probing ------------------------------------------------------------------


def _probe_order(b: BasisVec):
    return (abs(b.degree), -b.degree, b.kind, b.index)


def _basis_probes(spec: AlgSpec, N: int) -> list[Elem]:
    return [Elem({b: 1}) for b in sorted(domain_basis(spec, N), key=_probe_order)]


def _random_probes(spec: AlgSpec, N: int, count: int, seed: int, max_terms: int = 4) -> list[Elem]:
    rng = random.Random(seed)
    dom = domain_basis(spec, N)
    out = []
    while len(out) < count:
        k = rng.randint(1, max_terms)
        X = Elem((rng.choice(dom), rng.choice(COEFFS)) for _ in range(k))
        if X:
            out.append(X)
    return out


def _adversarial_probes(spec: AlgSpec, N: int) -> list[Elem]:
    """Clustered torus support on one index plus a short x-tail.

    For these X the single-degree ansatz runs into a non-trivial Laurent
    division, so the general solver must spread the torus part of Y.
    """
    out = []
    degrees = [d for d in range(-N, N + 1) if d % 2 == 0 and d]
    for i in range(1, spec.rank + 1):
        for width in (2, 3):
            for s in range(len(degrees) - width + 1):
                cluster = degrees[s:s + width]
                if 0 in cluster:
                    continue
                base = Elem((h(i, d), 1) for d in cluster)
                for xd in (1, -1):
                    if abs(xd) <= N:
                        out.append(base + Elem({x(i, xd): 1}))
                if spec.rank > 1:
                    other = i % spec.rank + 1
                    out.append(base + Elem({x(other, 1): 1, x(i, -1): 2}))
    return out


def generate_probes(
    spec: AlgSpec,
    N: int,
    strategy: str | Sequence[str] = "basis",
    *,
    count: int = 100,
    seed: int = 0,
) -> list[Elem]:
    strategies = [strategy] if isinstance(strategy, str) else list(strategy)
    probes: list[Elem] = []
    for s in strategies:
        if s == "basis":
            probes.extend(_basis_probes(spec, N))
        elif s == "random":
            probes.extend(_random_probes(spec, N, count, seed))
        elif s == "adversarial":
            probes.extend(_adversarial_probes(spec, N))
        else:
            raise ValueError(f"unknown probe strategy {s!r}")
    return probes


@dataclass
class CertReport:
    target: str
    probes: list[tuple[Elem, SolveResult]] = field(default_factory=list)
    verdict: str = INCONCLUSIVE
    witness: Elem | None = None
    certificate: BasisVec | None = None

    @property
    def certified(self) -> bool:
        return self.verdict == CERTIFIED

    @property
    def refuted(self) -> bool:
        return self.verdict == REFUTED

    def unsolved(self) -> list[tuple[Elem, SolveResult]]:
        return [(X, r) for X, r in self.probes if not r.solved]


def certify_aid(
    spec: AlgSpec,
    D: DMap,
    strategy: str | Sequence[str] = "basis",
    *,
    count: int = 100,
    seed: int = 0,
    schedule: Sequence[int] | None = None,
    ywindow_cap: int | None = None,
    target: str = "D",
    stop_on_refutation: bool = True,
) -> CertReport:
    """Sample the almost-inner property of D.

    Each probe is solved on the Y-windows of ``schedule`` (default
    ``y_schedule(N, ywindow_cap)``) until it succeeds.  A probe with a structural obstruction
    refutes D; probes still unsolved at the last window only make the report
    inconclusive.
    """
    check = check_derivation(spec, D, limit=1)
    if not check.ok:
        a, b, lhs, rhs = check.counterexample
        raise ValueError(f"not a derivation on the window: pair ({a}, {b}) gives {lhs} != {rhs}")
    schedule = tuple(schedule) if schedule is not None else y_schedule(D.window, ywindow_cap)
    report = CertReport(target)
    for X in generate_probes(spec, D.window, strategy, count=count, seed=seed):
        result = None
        for M in schedule:
            result = solve_ad_at(spec, D, X, M)
            if result.solved or result.structural:
                break
        report.probes.append((X, result))
        if result.structural and report.witness is None:
            report.witness = X
            report.certificate = result.certificate
            if stop_on_refutation:
                break
    if report.witness is not None:
        report.verdict = REFUTED
    elif all(r.solved for _, r in report.probes):
        report.verdict = CERTIFIED
    else:
        report.verdict = INCONCLUSIVE
    return report


# -- inner derivations and normal forms ------------------------------------------


def find_inner(spec: AlgSpec, D: DMap, M: int) -> Elem | None:
    """y with ``D(b) = [y, b]`` on every window vector, supported on ``|degree| <= M`` (no K)."""
    if D.spec != spec:
        raise ValueError("map belongs to a different algebra")
    ybasis = _y_basis(spec, M)
    dom = D.domain
    rows: dict[tuple[BasisVec, BasisVec], dict[int, Fraction]] = {}
    for k, y in enumerate(ybasis):
        for b in dom:
            r = bracket_basis(spec, y, b)
            if r is not None:
                rows.setdefault((b, r[0]), {})[k] = r[1]
    for b in dom:
        for c in D.image(b):
            if (b, c) not in rows:
                return None
    system = SparseSystem(len(ybasis))
    for (b, c), row in rows.items():
        system.add_row(row, D.image(b).coeff(c))
        if system.inconsistent:
            return None
    sol = system.particular()
    if sol is None:
        return None
    y = Elem._raw({ybasis[k]: v for k, v in enumerate(sol) if v})
    if make_ad(spec, y, D.window) != D:
        raise ArithmeticError("inner witness failed re-verification")
    return y


@dataclass(frozen=True)
class AidCoords:
    """``D = sum a[(i, j)] D_ij + ad y`` with y free of K."""

    a: Mapping[tuple[int, int], Fraction]
    y: Elem

    def __post_init__(self):
        object.__setattr__(self, "a", {k: Fraction(v) for k, v in sorted(self.a.items()) if v})
        if any(b.kind == Kind.K for b in self.y):
            raise ValueError("y must have zero K-component")


def aid_map(spec: AlgSpec, coords: AidCoords, N: int) -> DMap:
    """Rebuild ``sum a_ij D_ij + ad y`` on the window."""
    D = make_ad(spec, coords.y, N)
    for (i, j), c in coords.a.items():
        D = D + make_Dij(spec, i, j, N) * c
    return D


def normalize_aid(
    spec: AlgSpec, D: DMap, schedule: Sequence[int] | None = None, ywindow_cap: int | None = None
) -> AidCoords:
    """Write a homogeneous derivation as ``sum a_ij D_ij + ad y``.

    The K-free quotient of D is made inner on the loop algebra first; the
    remainder ``D - ad y`` must then vanish on x-vectors and K and send each
    ``h_i t^2j`` to ``a_ij K``.
    """
    _require_affine(spec, "normalize_aid")
    Kv = BasisVec(Kind.K)
    if D.image(Kv):
        raise NormalizationError(f"D(K) = {D.image(Kv)}, but an almost inner derivation kills K")
    even, odd = split_parity_map(D)
    if not even.is_zero() and not odd.is_zero():
        raise NormalizationError("D is not homogeneous")
    check = check_derivation(spec, D, limit=1)
    if not check.ok:
        raise NormalizationError(f"D is not a derivation on the window: {check.counterexample[:2]}")
    loop = spec.with_variant(Variant.LOOP)
    quotient = DMap(
        loop, D.window, {b: D.image(b).drop_center() for b in D.domain if b.kind != Kind.K}
    )
    schedule = tuple(schedule) if schedule is not None else y_schedule(D.window, ywindow_cap)
    y = None
    for M in schedule:
        y = find_inner(loop, quotient, M)
        if y is not None:
            break
    if y is None:
        raise NormalizationError(
            f"quotient map is not inner up to window {schedule[-1]}: "
            "not almost inner at this window, or window too small"
        )
    rest = D - make_ad(spec, y, D.window)
    a: dict[tuple[int, int], Fraction] = {}
    for b, img in rest.images.items():
        if b.kind == Kind.H:
            if any(t.kind != Kind.K for t in img):
                raise NormalizationError(f"(D - ad y)({b}) = {img} is not central")
            if img:
                a[(b.index, b.degree // 2)] = img.coeff(Kv)
        elif img:
            raise NormalizationError(f"(D - ad y)({b}) = {img} should vanish")
    if not odd.is_zero() and a:
        raise NormalizationError("an odd almost inner derivation must be inner")
    coords = AidCoords(a, y)
    if aid_map(spec, coords, D.window) != D:
        raise ArithmeticError("normal form does not reconstruct D")
    return coords


@dataclass
class IndependenceResult:
    independent: bool
    indices: list[tuple[int, int]]
    relations: list[dict[tuple[int, int], Fraction]] = field(default_factory=list)

    def __bool__(self) -> bool:
        return self.independent


def independence_check(
    spec: AlgSpec, indices: Iterable[tuple[int, int]], N: int, M: int
) -> IndependenceResult:
    """Are the ``D_ij`` linearly independent modulo inner derivations on the window?

    Solves ``sum a_ij D_ij(b) = [y, b]`` for all window b with unknown a and y
    (y on ``|degree| <= M``); independence means every solution has a = 0.
    """
    _require_affine(spec, "independence_check")
    indices = sorted(set(indices))
    for i, j in indices:
        if not 1 <= i <= spec.rank or abs(2 * j) > N:
            raise ValueError(f"D_{i},{j} does not fit the rank or window {N}")
    if not indices:
        return IndependenceResult(True, [])
    ybasis = _y_basis(spec, M)
    na = len(indices)
    dom = domain_basis(spec, N)
    Kv = BasisVec(Kind.K)
    rows: dict[tuple[BasisVec, BasisVec], dict[int, Fraction]] = {}
    for k, (i, j) in enumerate(indices):
        rows.setdefault((h(i, 2 * j), Kv), {})[k] = Fraction(1)
    for k, y in enumerate(ybasis):
        for b in dom:
            r = bracket_basis(spec, y, b)
            if r is not None:
                row = rows.setdefault((b, r[0]), {})
                row[na + k] = row.get(na + k, 0) - r[1]
    system = SparseSystem(na + len(ybasis))
    for row in rows.values():
        system.add_row(row)
    relations = []
    for vec in system.nullspace():
        rel = {idx: vec[k] for k, idx in enumerate(indices) if vec[k]}
        if rel:
            relations.append(rel)
    return IndependenceResult(not relations, indices, relations)


def rigidity_check(spec: AlgSpec, N: int, M: int) -> list[DMap]:
    """Nonzero inner derivations ``ad y`` with ``ad y(x) = 0``, ``ad y(K) = 0`` and ``ad y(h)`` central.

    Returns the maps found (an empty list means the window system is rigid).
    """
    _require_affine(spec, "rigidity_check")
    ybasis = _y_basis(spec, M)
    dom = domain_basis(spec, N)
    rows: dict[tuple[BasisVec, BasisVec], dict[int, Fraction]] = {}
    for k, y in enumerate(ybasis):
        for b in dom:
            r = bracket_basis(spec, y, b)
            if r is None:
                continue
            if b.kind == Kind.H and r[0].kind == Kind.K:
                continue
            rows.setdefault((b, r[0]), {})[k] = r[1]
    system = SparseSystem(len(ybasis))
    for row in rows.values():
        system.add_row(row)
    found = []
    for vec in system.nullspace():
        y = Elem({ybasis[k]: v for k, v in enumerate(vec) if v})
        D = make_ad(spec, y, N)
        if not D.is_zero():
            found.append(D)
    return found

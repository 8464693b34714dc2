"""Verification checks for one algebra, and the runner that bundles them into a report.

Every check returns :class:`~aidlab.persist.CheckResult` objects whose
witnesses contain enough text (spec, elements, indices) to rerun the failing
computation from the report alone.
"""

from __future__ import annotations

import itertools
import random
import time
from dataclasses import asdict, dataclass, fields
from fractions import Fraction
from typing import Any, Callable, Iterable

from . import __version__
from .aid import (
    COEFFS,
    AidCoords,
    aid_map,
    certify_aid,
    independence_check,
    ansatz_Y,
    make_Dij,
    normalize_aid,
    rigidity_check,
    find_inner,
    y_schedule,
)
from .algebra import (
    AlgSpec,
    BasisVec,
    Elem,
    Kind,
    Variant,
    bracket,
    domain_basis,
    h,
    make_spec,
    x,
)
from .derivations import (
    CentDerForm,
    DMap,
    DSCoords,
    ShapeError,
    centroid_basis,
    check_derivation,
    classify_DL1,
    classify_DS,
    der_L_basis,
    dl1_space,
    ds_map,
    finite_spec,
    make_ad,
    make_cent_der,
    make_cent_der_sum,
    project_to_DS,
    split_parity_map,
)
from .kernel import LPoly
from .linalg import RatMatrix, mat_vec, nullspace, rank, solve_exact
from .persist import CheckResult, ReportFile, spec_to_json
from .textio import ParityError, ParseError, VariantError, format_element, parse_element

__all__ = [
    "SuiteConfig",
    "gram_preset",
    "run_suite",
    "random_elem",
    "check_bracket_laws",
    "check_der_L",
    "check_centroid",
    "check_ds_split",
    "check_dl1_shape",
    "check_loop_inner",
    "check_dij_aid",
    "check_j0",
    "check_aid_normal_form",
    "check_independence",
    "check_rigidity",
    "check_parser",
    "check_linalg",
]

PASS, FAIL, FINDING = "pass", "fail", "finding"


def gram_preset(name: str, rank: int) -> RatMatrix:
    if name == "identity":
        return RatMatrix.identity(rank)
    if name == "a1":
        # [[2]] at rank 1; higher ranks continue it as the type-A Cartan matrix
        return RatMatrix([[2 if i == j else -1 if abs(i - j) == 1 else 0 for j in range(rank)]
                          for i in range(rank)])
    raise ValueError(f"unknown Gram preset {name!r}")


@dataclass
class SuiteConfig:
    rank: int = 2
    gram: Any = "identity"
    window: int = 6
    seed: int = 42
    ywindow_cap: int | None = None
    random_probes: int = 100
    split_samples: int = 200
    inner_samples: int = 50
    normal_samples: int = 100
    parser_samples: int = 1000
    linalg_samples: int = 500

    @classmethod
    def from_dict(cls, data: dict) -> "SuiteConfig":
        known = {f.name for f in fields(cls)}
        unknown = set(data) - known
        if unknown:
            raise ValueError(f"invalid config keys: {sorted(unknown)}")
        cfg = cls(**data)
        cfg.validate()
        return cfg

    def validate(self) -> None:
        if self.rank < 1:
            raise ValueError("rank must be positive")
        if self.window < 1:
            raise ValueError("window must be at least 1")
        if self.ywindow_cap is not None and self.ywindow_cap < self.window:
            raise ValueError("ywindow_cap must be at least the window")

    def gram_matrix(self) -> RatMatrix:
        if isinstance(self.gram, str):
            return gram_preset(self.gram, self.rank)
        return self.gram if isinstance(self.gram, RatMatrix) else RatMatrix(self.gram)

    def spec(self, variant: Variant | str) -> AlgSpec:
        return make_spec(self.rank, self.gram_matrix(), variant)

    @property
    def cap(self) -> int:
        # probes with h-terms at the window edge need x-partners up to degree 3N - 1
        return self.ywindow_cap if self.ywindow_cap is not None else 3 * self.window

    def to_json(self) -> dict:
        d = asdict(self)
        if isinstance(self.gram, RatMatrix):
            d["gram"] = [[str(v) for v in r] for r in self.gram.rows]
        return d


def _result(name, ok, params, witness=None, detail="") -> CheckResult:
    return CheckResult(name, PASS if ok else FAIL, params, None if ok else witness, detail)


def random_elem(
    rng: random.Random,
    spec: AlgSpec,
    N: int,
    max_terms: int = 4,
    kinds: Iterable[Kind] = (Kind.H, Kind.X, Kind.K),
) -> Elem:
    kinds = set(kinds)
    pool = [b for b in domain_basis(spec, N) if b.kind in kinds]
    return Elem((rng.choice(pool), rng.choice(COEFFS)) for _ in range(rng.randint(1, max_terms)))


# -- 1. bracket laws ----------------------------------------------------------------


def check_bracket_laws(rank: int, gram, N: int) -> CheckResult:
    params = {"rank": rank, "gram": gram, "window": N}
    for variant in (Variant.LOOP, Variant.AFFINE):
        spec = make_spec(rank, gram, variant)
        dom = domain_basis(spec, N)
        E = {b: Elem({b: 1}) for b in dom}
        for a, b in itertools.product(dom, dom):
            if bracket(spec, E[a], E[b]) != -bracket(spec, E[b], E[a]):
                return _result("bracket_laws", False, params, {"variant": variant.value, "pair": [a, b]})
        for a, b, c in itertools.combinations(dom, 3):
            j = (
                bracket(spec, bracket(spec, E[a], E[b]), E[c])
                + bracket(spec, bracket(spec, E[b], E[c]), E[a])
                + bracket(spec, bracket(spec, E[c], E[a]), E[b])
            )
            if j:
                return _result("bracket_laws", False, params,
                               {"variant": variant.value, "triple": [a, b, c], "jacobiator": j})
    loop = make_spec(rank, gram, Variant.LOOP)
    aff = make_spec(rank, gram, Variant.AFFINE)
    for a, b in itertools.combinations(domain_basis(loop, N), 2):
        ea, eb = Elem({a: 1}), Elem({b: 1})
        if bracket(aff, ea, eb).drop_center() != bracket(loop, ea, eb):
            return _result("bracket_laws", False, params, {"quotient_pair": [a, b]})
    return _result("bracket_laws", True, params, detail="antisymmetry, Jacobi, quotient")


# -- 2./3. finite algebra oracles ------------------------------------------------------


def check_der_L(rank: int) -> list[CheckResult]:
    params = {"rank": rank}
    spec = finite_spec(rank)
    basis = der_L_basis(rank)
    problems = []
    if len(basis) != 2 * rank:
        problems.append(f"dimension {len(basis)} != {2 * rank}")
    inner_dim = rank_of_maps([make_ad(spec, Elem({b: 1}), 1) for b in domain_basis(spec, 1)])
    if inner_dim != 2 * rank:
        problems.append(f"inner derivations span {inner_dim}, center of L is not zero")
    for D in basis:
        if not check_derivation(spec, D):
            problems.append("basis element fails the derivation law")
        even, odd = split_parity_map(D)
        for b, img in even.images.items():
            if b.kind == Kind.H and img:
                problems.append(f"even part moves {b}")
            if b.kind == Kind.X and any(t != b for t in img):
                problems.append(f"even part not diagonal on {b}")
        for b, img in odd.images.items():
            if b.kind == Kind.H and any(t != x(b.index) for t in img):
                problems.append(f"odd part of {b} not along x_{b.index}")
            if b.kind == Kind.X and img:
                problems.append(f"odd part moves {b}")
    main = _result("der_L_oracle", not problems, params, {"problems": problems},
                   detail=f"dim Der(L) = {len(basis)}")
    # odd maps x_i -> b_i h_i are not derivations; record each failing direction
    failures = []
    for i in range(1, rank + 1):
        D = DMap(spec, 1, {x(i): Elem({h(i): 1})})
        chk = check_derivation(spec, D)
        if not chk.ok:
            a, b, lhs, rhs = chk.counterexample
            failures.append({"map": f"x{i} -> h{i}", "pair": [a, b], "lhs": lhs, "rhs": rhs})
    finding = CheckResult(
        "der_L_odd_h_directions",
        FINDING if len(failures) == rank else FAIL,
        params,
        failures,
        "odd maps x_i -> h_i violate the derivation law",
    )
    return [main, finding]


def rank_of_maps(maps: list[DMap]) -> int:
    if not maps:
        return 0
    keys = sorted({(b, t) for D in maps for b, e in D.images.items() for t in e})
    return rank([[D.image(b).coeff(t) for D in maps] for b, t in keys]) if keys else 0


def check_centroid(rank: int) -> CheckResult:
    params = {"rank": rank}
    basis = centroid_basis(rank)
    problems = []
    if len(basis) != rank:
        problems.append(f"dimension {len(basis)} != {rank}")
    spec = finite_spec(rank)
    for i, lam in enumerate(basis, start=1):
        for j in range(1, rank + 1):
            want_h = Elem({h(j): 1}) if i == j else Elem()
            want_x = Elem({x(j): 1}) if i == j else Elem()
            if lam.image(h(j)) != want_h or lam.image(x(j)) != want_x:
                problems.append(f"lambda_{i} is not the projector on index {i}")
    for (i, a), (j, b) in itertools.product(enumerate(basis), repeat=2):
        for v in domain_basis(spec, 1):
            comp = b(a.image(v))
            want = a.image(v) if i == j else Elem()
            if comp != want or a(b.image(v)) != b(a.image(v)):
                problems.append(f"lambda_{i + 1} lambda_{j + 1} != delta lambda on {v}")
                break
    return _result("centroid_oracle", not problems, params, {"problems": problems[:5]},
                   detail=f"dim Cent(L) = {len(basis)}")


# -- 4.-6. loop algebra ----------------------------------------------------------------


def random_ds_coords(rng: random.Random, rank: int, span: int = 4) -> DSCoords:
    even = {(rng.randint(1, rank), 2 * rng.randint(-span // 2, span // 2)): rng.choice(COEFFS)
            for _ in range(rng.randint(0, 3))}
    odd = {(rng.randint(1, rank), 2 * rng.randint(-span // 2, span // 2) + 1): rng.choice(COEFFS)
           for _ in range(rng.randint(0, 3))}
    return DSCoords(even, odd)


def random_f(rng: random.Random, span: int = 4) -> LPoly:
    return LPoly((2 * rng.randint(-span // 2, span // 2), rng.choice(COEFFS))
                 for _ in range(rng.randint(1, 3)))


def check_ds_split(spec: AlgSpec, N: int, samples: int, seed: int) -> CheckResult:
    params = {"spec": spec, "window": N, "samples": samples, "seed": seed}
    rng = random.Random(seed)
    for n in range(samples):
        coords = random_ds_coords(rng, spec.rank)
        fs = [random_f(rng) if rng.random() < 0.6 else LPoly() for _ in range(spec.rank)]
        D = ds_map(spec, coords, N) + make_cent_der_sum(spec, fs, N)
        witness = {"sample": n, "even": coords.even, "odd": coords.odd, "f": fs}
        d, delta = project_to_DS(spec, D)
        if d + delta != D:
            return _result("ds_split", False, params, witness)
        for i in range(1, spec.rank + 1):
            if delta.image(h(i)) or delta.image(x(i)):
                return _result("ds_split", False, params, witness)
        try:
            if classify_DS(spec, d) != coords or classify_DL1(spec, delta) != fs:
                return _result("ds_split", False, params, witness)
        except ShapeError as exc:
            witness["error"] = str(exc)
            return _result("ds_split", False, params, witness)
    return _result("ds_split", True, params, detail=f"{samples} derivations split and classified")


def check_dl1_shape(spec: AlgSpec, N: int, target_window: int | None = None) -> CheckResult:
    tw = N + 4 if target_window is None else target_window
    params = {"spec": spec, "window": N, "target_window": tw}
    odd = dl1_space(spec, N, "odd", tw)
    if odd:
        return _result("dl1_shape", False, params, {"odd_member": odd[0]})
    even = dl1_space(spec, N, "even", tw)
    for D in even:
        try:
            classify_DL1(spec, D)
        except ShapeError as exc:
            return _result("dl1_shape", False, params, {"member": D, "error": str(exc)})
    return _result("dl1_shape", True, params,
                   detail=f"odd space 0, {len(even)} even members of centroid-derivation shape")


def check_loop_inner(spec: AlgSpec, N: int, samples: int, seed: int, cap: int) -> CheckResult:
    params = {"spec": spec, "window": N, "samples": samples, "seed": seed, "cap": cap}
    rng = random.Random(seed)
    for n in range(samples):
        coords = random_ds_coords(rng, spec.rank)
        D = ds_map(spec, coords, N)
        y = None
        for M in y_schedule(N, cap):
            y = find_inner(spec, D, M)
            if y is not None:
                break
        # find_inner re-verifies ad y == D, so a returned y has zero residual
        if y is None:
            return _result("loop_inner", False, params,
                           {"sample": n, "even": coords.even, "odd": coords.odd})
    if N < 2:
        # the refuting probe h_k t^2 lies outside a window of 1
        return _result("loop_inner", True, params, detail=f"{samples} equivariant derivations inner")
    for n in range(samples):
        form = CentDerForm(rng.randint(1, spec.rank), random_f(rng))
        D = make_cent_der(spec, form, N)
        rep = certify_aid(spec, D, "basis")
        if not rep.refuted or rep.witness != Elem({h(form.k, 2): 1}):
            return _result("loop_inner", False, params,
                           {"k": form.k, "f": form.f, "verdict": rep.verdict, "witness": rep.witness})
    return _result("loop_inner", True, params,
                   detail=f"{samples} equivariant derivations inner, {samples} centroid derivations refuted")


# -- 7.-11. affinization ---------------------------------------------------------------


def _j_range(N: int, jmax: int = 3) -> list[int]:
    top = min(jmax, N // 2)
    return [j for j in range(-top, top + 1) if j]


def check_dij_aid(spec: AlgSpec, N: int, count: int, seed: int, cap: int) -> CheckResult:
    params = {"spec": spec, "window": N, "random_probes": count, "seed": seed, "cap": cap}
    n_probes = n_ansatz = n_blocked = 0
    for i in range(1, spec.rank + 1):
        for j in _j_range(N):
            D = make_Dij(spec, i, j, N)
            if not check_derivation(spec, D):
                return _result("dij_almost_inner", False, params, {"i": i, "j": j, "stage": "derivation"})
            rep = certify_aid(spec, D, ["basis", "random", "adversarial"], count=count,
                              seed=seed, ywindow_cap=cap, target=f"D_{i},{j}")
            n_probes += len(rep.probes)
            if not rep.certified:
                bad = rep.unsolved()[0][0] if rep.unsolved() else rep.witness
                return _result("dij_almost_inner", False, params,
                               {"i": i, "j": j, "verdict": rep.verdict, "probe": bad})
            for X, res in rep.probes:
                Xc = X.drop_center()
                Y = ansatz_Y(spec, i, j, Xc)
                if Y is None:
                    n_blocked += 1
                    continue
                n_ansatz += 1
                # the probe's own solve covers X; the K part of X never matters
                if not res.solved:
                    return _result("dij_almost_inner", False, params,
                                   {"i": i, "j": j, "probe": X, "ansatz": Y})
    return _result("dij_almost_inner", True, params,
                   detail=f"{n_probes} probes solved; ansatz closed on {n_ansatz}, blocked on {n_blocked}")


def check_j0(spec: AlgSpec, N: int) -> list[CheckResult]:
    out = []
    for i in range(1, spec.rank + 1):
        D = make_Dij(spec, i, 0, N)
        ok = bool(check_derivation(spec, D))
        rep = certify_aid(spec, D, "basis", target=f"D_{i},0")
        expected = Elem({h(i, 0): 1})
        params = {"spec": spec, "window": N, "i": i}
        witness = {"i": i, "j": 0, "X": rep.witness, "zero_row": rep.certificate,
                   "is_derivation": ok}
        if ok and rep.refuted and rep.witness == expected and rep.certificate == BasisVec(Kind.K):
            out.append(CheckResult(
                f"j0_refutation[{i}]", FINDING, params, witness,
                "D_i0 is a derivation but not almost inner: K is unreachable from [h_i t^0, .]",
            ))
        else:
            out.append(CheckResult(f"j0_refutation[{i}]", FAIL, params, witness))
    return out


def check_aid_normal_form(spec: AlgSpec, N: int, samples: int, seed: int, cap: int) -> CheckResult:
    params = {"spec": spec, "window": N, "samples": samples, "seed": seed, "cap": cap}
    rng = random.Random(seed)
    js = _j_range(N, N // 2)
    for n in range(samples):
        a = {(rng.randint(1, spec.rank), rng.choice(js)): rng.choice(COEFFS)
             for _ in range(rng.randint(0, 5))}
        y = random_elem(rng, spec, N, 4, (Kind.H, Kind.K))
        D = aid_map(spec, AidCoords(a, y.drop_center()), N)
        try:
            got = normalize_aid(spec, D, ywindow_cap=cap)
        except ValueError as exc:
            return _result("aid_normal_form", False, params,
                           {"sample": n, "a": a, "y": y, "error": str(exc)})
        if got.a != AidCoords(a, Elem()).a or got.y != y.drop_center():
            return _result("aid_normal_form", False, params,
                           {"sample": n, "a": a, "y": y, "got_a": got.a, "got_y": got.y})
    for n in range(samples // 4 or 1):
        y = random_elem(rng, spec, N, 4, (Kind.X,))
        got = normalize_aid(spec, make_ad(spec, y, N), ywindow_cap=cap)
        if got.a or got.y != y:
            return _result("aid_normal_form", False, params, {"odd_y": y, "got_a": got.a})
    return _result("aid_normal_form", True, params,
                   detail=f"{samples} even and {samples // 4 or 1} odd inputs recovered")


def check_independence(spec: AlgSpec, N: int, M: int) -> CheckResult:
    top = min(2, N // 2)
    idx = [(i, j) for i in range(1, spec.rank + 1) for j in range(-top, top + 1) if j]
    res = independence_check(spec, idx, N, M)
    return _result("independence", res.independent, {"spec": spec, "window": N, "ywindow": M},
                   {"relations": res.relations}, detail=f"{len(idx)} maps D_ij independent mod Inn")


def check_rigidity(spec: AlgSpec, N: int, windows: Iterable[int]) -> CheckResult:
    windows = list(windows)
    for M in windows:
        found = rigidity_check(spec, N, M)
        if found:
            return _result("rigidity", False, {"spec": spec, "window": N, "ywindow": M},
                           {"ad_y": found[0]})
    return _result("rigidity", True, {"spec": spec, "window": N, "ywindows": windows},
                   detail="only D = 0")


# -- 12./13. plumbing ------------------------------------------------------------------


def check_parser(spec: AlgSpec, N: int, samples: int, seed: int) -> CheckResult:
    params = {"spec": spec, "window": N, "samples": samples, "seed": seed}
    rng = random.Random(seed)
    for n in range(samples):
        X = random_elem(rng, spec, N, 6)
        text = format_element(X)
        if parse_element(text, spec) != X or format_element(parse_element(text, spec)) != text:
            return _result("parser_roundtrip", False, params, {"sample": n, "text": text})
    bad_inputs = [("x1 t^2", ParityError), ("h1 t^3", ParityError), ("x1", ParityError),
                  ("h1 t^2 +", ParseError), ("3/0 h1", ParseError), ("y1", ParseError)]
    loop = spec.with_variant(Variant.LOOP)
    for text, cls in bad_inputs:
        try:
            parse_element(text, spec)
        except cls as exc:
            if exc.position is None:
                return _result("parser_roundtrip", False, params, {"unpositioned": text})
        else:
            return _result("parser_roundtrip", False, params, {"accepted": text})
    try:
        parse_element("h1 t^2 - K", loop)
    except VariantError:
        pass
    else:
        return _result("parser_roundtrip", False, params, {"accepted_in_loop": "h1 t^2 - K"})
    return _result("parser_roundtrip", True, params, detail=f"{samples} round trips, rejections structured")


def random_system(rng: random.Random):
    m, n = rng.randint(1, 6), rng.randint(1, 7)
    r = rng.randint(0, min(m, n))
    left = [[Fraction(rng.randint(-3, 3), rng.randint(1, 3)) for _ in range(r)] for _ in range(m)]
    right = [[Fraction(rng.randint(-3, 3), rng.randint(1, 3)) for _ in range(n)] for _ in range(r)]
    A = [[sum((left[i][k] * right[k][j] for k in range(r)), Fraction(0)) for j in range(n)]
         for i in range(m)]
    if rng.random() < 0.5:
        xs = [Fraction(rng.randint(-4, 4), rng.randint(1, 4)) for _ in range(n)]
        b = mat_vec(A, xs)
    else:
        b = [Fraction(rng.randint(-4, 4), rng.randint(1, 4)) for _ in range(m)]
    return A, b


def check_linalg(samples: int, seed: int) -> CheckResult:
    params = {"samples": samples, "seed": seed}
    rng = random.Random(seed)
    for n in range(samples):
        A, b = random_system(rng)
        ncols = len(A[0])
        ns = nullspace(A)
        rk = rank(A)
        witness = {"sample": n, "A": A, "b": b}
        if rk + len(ns) != ncols:
            return _result("linalg_exact", False, params, witness)
        if ns and rank([list(r) for r in zip(*ns)]) != len(ns):
            return _result("linalg_exact", False, params, witness)
        for v in ns:
            if any(mat_vec(A, v)):
                return _result("linalg_exact", False, params, witness)
        sol = solve_exact(A, b)
        if sol is not None:
            if mat_vec(A, sol[0]) != b:
                return _result("linalg_exact", False, params, witness)
        else:
            # inconsistency is confirmed by a rank jump of the augmented matrix
            aug = [list(r) + [v] for r, v in zip(A, b)]
            if rank(aug) == rk:
                return _result("linalg_exact", False, params, witness)
    return _result("linalg_exact", True, params, detail=f"{samples} systems verified")


# -- runner ---------------------------------------------------------------------------------


def _timed(fn: Callable, *args) -> list[CheckResult]:
    t0 = time.perf_counter()
    res = fn(*args)
    res = res if isinstance(res, list) else [res]
    elapsed = time.perf_counter() - t0
    for r in res:
        r.timing = elapsed / len(res)
    return res


def run_suite(config: SuiteConfig | dict | None = None) -> ReportFile:
    """Run every check for one algebra; deterministic for a fixed seed."""
    if config is None:
        config = SuiteConfig()
    elif isinstance(config, dict):
        config = SuiteConfig.from_dict(config)
    else:
        config.validate()
    N, seed, cap = config.window, config.seed, config.cap
    gram = config.gram_matrix()
    loop, aff = config.spec(Variant.LOOP), config.spec(Variant.AFFINE)
    plan = [
        (check_bracket_laws, config.rank, gram, N),
        (check_der_L, config.rank),
        (check_centroid, config.rank),
        (check_ds_split, loop, N, config.split_samples, seed),
        (check_dl1_shape, loop, N),
        (check_loop_inner, loop, N, config.inner_samples, seed, cap),
        (check_dij_aid, aff, N, config.random_probes, seed, cap),
        (check_j0, aff, N),
        (check_aid_normal_form, aff, N, config.normal_samples, seed, cap),
        (check_independence, aff, N, max(10, N)),
        (check_rigidity, aff, N, (N, N + 4)),
        (check_parser, aff, N, config.parser_samples, seed),
        (check_linalg, config.linalg_samples, seed),
    ]
    report = ReportFile(
        {"tool": "aidlab", "version": __version__, "seed": seed, "spec": spec_to_json(aff),
         "config": config.to_json()}
    )
    for fn, *args in plan:
        report.checks.extend(_timed(fn, *args))
    return report

"""
Almost inner derivations of the affinization
============================================

D_ij sends h_i t^2j to K and kills everything else.  For j != 0 every
single X admits a Y with D(X) = [X, Y], yet no Y works for all X at once.
"""

from aidlab import make_spec, parse_element
from aidlab.aid import (
    ansatz_Y,
    certify_aid,
    find_inner,
    independence_check,
    make_Dij,
    normalize_aid,
    solve_ad_at,
)
from aidlab.derivations import make_ad

spec = make_spec(1, [[2]], "affine")
D = make_Dij(spec, 1, 1, 6)

X = parse_element("h1 t^2 + h1 t^4 + x1 t^1", spec)
res = solve_ad_at(spec, D, X, 6)
print(res.status, "Y =", res.witness)

# the closed-form ansatz covers single-degree torus parts only
print("ansatz at h1 t^2:", ansatz_Y(spec, 1, 1, parse_element("h1 t^2")))
print("ansatz at X:", ansatz_Y(spec, 1, 1, X))

# sampling: basis probes, seeded random probes and adversarial clusters
rep = certify_aid(spec, D, ["basis", "random", "adversarial"], count=50, seed=1, ywindow_cap=18)
print(f"{rep.verdict} on {len(rep.probes)} probes")

# but no single y realizes D
print("inner?", find_inner(spec, D, 12))

# j = 0 is different: K never appears in [h1, Y]
rep0 = certify_aid(spec, make_Dij(spec, 1, 0, 6), "basis")
print("D_1,0:", rep0.verdict, "at", rep0.witness, "unreachable", rep0.certificate)

# normal form of a combination
E = make_Dij(spec, 1, 2, 6) * 3 + make_ad(spec, parse_element("h1 t^2"), 6)
nf = normalize_aid(spec, E)
print("a =", nf.a, " y =", nf.y)

# the D_ij are independent modulo inner derivations
A2 = make_spec(2, [[2, -1], [-1, 2]])
idx = [(i, j) for i in (1, 2) for j in (-2, -1, 1, 2)]
print("independent:", independence_check(A2, idx, 6, 10).independent)

"""
Derivations of the loop algebra
===============================

A derivation splits into a shift-equivariant piece and a piece that kills
the degree 0 and 1 vectors.  The first is inner; the second is a centroid
derivation, which is not even almost inner.
"""

from aidlab import make_spec, parse_element
from aidlab.aid import certify_aid, find_inner
from aidlab.derivations import (
    CentDerForm,
    DSCoords,
    centroid_basis,
    check_derivation,
    classify_DL1,
    classify_DS,
    der_L_basis,
    ds_map,
    make_cent_der,
    project_to_DS,
)
from aidlab.kernel import LPoly

# the finite algebra first: Der(L) has dimension 2l, the centroid l
for l in (1, 2, 3):
    print(f"l={l}: dim Der(L) = {len(der_L_basis(l))}, dim Cent(L) = {len(centroid_basis(l))}")

spec = make_spec(2, [[1, 0], [0, 1]], "loop")
N = 6

# build a derivation from known coordinates plus a centroid derivation
coords = DSCoords(even={(1, 2): 1}, odd={(2, -1): 3})
cent = make_cent_der(spec, CentDerForm(2, LPoly({2: 1, -2: -1})), N)
D = ds_map(spec, coords, N) + cent
print("derivation:", bool(check_derivation(spec, D)))

d, delta = project_to_DS(spec, D)
print("recovered coordinates:", classify_DS(spec, d))
print("recovered f:", [str(f) for f in classify_DL1(spec, delta)])

# the equivariant part is ad y for an explicit y
y = find_inner(spec, d, 8)
print("d = ad y with y =", y)

# the centroid part fails at h_2 t^2: its image has a torus component
rep = certify_aid(spec, cent, "basis")
print("centroid derivation:", rep.verdict, "at", rep.witness)
assert rep.witness == parse_element("h2 t^2")

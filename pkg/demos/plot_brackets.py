"""
Brackets in the loop algebra and its central extension
=======================================================

"""

from fractions import Fraction

from aidlab import K, bracket, make_spec, parse_element

# rank 1 with Gram matrix [[2]]; the torus form is its inverse, 1/2
aff = make_spec(1, [[2]], "affine")
loop = aff.with_variant("loop")
print("torus form:", aff.torus.tolist())

X = parse_element("h1 t^2", aff)
print("[h1 t^2, x1 t^-1] =", bracket(aff, X, parse_element("x1 t^-1", aff)))

# the cocycle: degree 2 times B_11 = 1/2 gives exactly K
print("[h1 t^2, h1 t^-2] =", bracket(aff, X, parse_element("h1 t^-2", aff)))
# the same pair commutes once K is dropped
print("in the loop algebra:", bracket(loop, X, parse_element("h1 t^-2", loop)))

# elements print canonically and parse back
Y = parse_element("3/2 x1 t^-1 - K + h1 t^4", aff)
print("canonical:", Y)
assert parse_element(str(Y), aff) == Y

# exponent parity is part of the grammar
try:
    parse_element("x1 t^2", aff)
except ValueError as err:
    print("rejected:", err)

# a rank-2 algebra with an off-diagonal Gram entry
A2 = make_spec(2, [[2, -1], [-1, 2]])
print("(h1, h2) =", A2.torus_form(1, 2))
Z = bracket(A2, parse_element("h1 t^4"), parse_element("h2 t^-4"))
print("[h1 t^4, h2 t^-4] =", Z)
assert Z.coeff(K) == Fraction(4, 3)

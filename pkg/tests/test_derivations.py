from fractions import Fraction

import pytest

from aidlab.algebra import K, Elem, bracket, domain_basis, h, make_spec, x
from aidlab.derivations import (
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
    project_to_DS,
    split_parity_map,
    zero_map,
)
from aidlab.kernel import LPoly

T = LPoly.monomial


def E(*terms):
    return Elem(terms)


def test_ad_of_central_element_is_zero(a1_affine):
    assert make_ad(a1_affine, E((K, 1)), 4).is_zero()


def test_ad_images(a1_affine):
    D = make_ad(a1_affine, E((h(1, 2), 1)), 4)
    assert D.image(x(1, 1)) == E((x(1, 3), 1))
    assert D.image(h(1, -2)) == E((K, 1))
    assert D(E((x(1, 1), 2), (h(1, 0), 5))) == E((x(1, 3), 2))


def test_ad_is_derivation(id2_affine):
    y = E((h(1, 2), 1), (x(2, -3), Fraction(1, 2)), (K, 4))
    res = check_derivation(id2_affine, make_ad(id2_affine, y, 6))
    assert res.ok and res.checked > 0 and res.skipped > 0


def test_identity_on_one_vector_is_not_a_derivation(a1_loop):
    D = DMap(a1_loop, 2, {h(1, 0): E((h(1, 0), 1))})
    res = check_derivation(a1_loop, D)
    assert not res.ok
    assert (h(1, 0), x(1, 1), Elem(), E((x(1, 1), 1))) in res.counterexamples


def test_images_outside_window_rejected(a1_affine):
    with pytest.raises(ValueError):
        DMap(a1_affine, 2, {h(1, 4): E((K, 1))})
    with pytest.raises(ValueError):
        DMap(a1_affine, 2, {K: E((h(1), 1))})


def test_split_parity_map(a1_affine):
    even = make_ad(a1_affine, E((h(1, 2), 1)), 4)
    odd = make_ad(a1_affine, E((x(1, 1), 1)), 4)
    assert split_parity_map(even) == (even, zero_map(a1_affine, 4))
    assert split_parity_map(odd) == (zero_map(a1_affine, 4), odd)
    mixed = make_ad(a1_affine, E((h(1, 0), 1), (x(1, 1), 1)), 4)
    d0, d1 = split_parity_map(mixed)
    assert not d0.is_zero() and not d1.is_zero() and d0 + d1 == mixed


def test_project_inner_map(a1_loop):
    D = make_ad(a1_loop, E((h(1, 2), 1)), 4)
    d, delta = project_to_DS(a1_loop, D)
    assert d == D and delta.is_zero()


def test_project_cent_der(a1_loop):
    D = make_cent_der(a1_loop, CentDerForm(1, T(2)), 4)
    d, delta = project_to_DS(a1_loop, D)
    assert d.is_zero() and delta == D


def test_project_sum(a1_loop):
    A = make_ad(a1_loop, E((h(1, 2), 1)), 4)
    C = make_cent_der(a1_loop, CentDerForm(1, T(2)), 4)
    assert project_to_DS(a1_loop, A + C) == (A, C)


def test_project_requires_loop(a1_affine):
    with pytest.raises(ValueError):
        project_to_DS(a1_affine, zero_map(a1_affine, 2))


def test_classify_even_shift(a1_loop):
    d = ds_map(a1_loop, DSCoords(even={(1, 2): 1}), 5)
    assert d.image(x(1, 1)) == E((x(1, 3), 1))
    assert d.image(h(1, 2)) == 0
    coords = classify_DS(a1_loop, d)
    assert coords.even == {(1, 2): 1} and not coords.odd


def test_classify_odd_shift(a1_loop):
    d = ds_map(a1_loop, DSCoords(odd={(1, 1): 1}), 4)
    assert d.image(h(1, 2)) == E((x(1, 3), 1))
    assert d.image(x(1, 1)) == 0
    assert classify_DS(a1_loop, d).odd == {(1, 1): 1}


def test_classify_zero(a1_loop):
    assert classify_DS(a1_loop, zero_map(a1_loop, 3)).is_zero()


def test_classify_DS_diagnostic(id2_loop):
    # x1 t -> x2 t is not diagonal
    d = DMap(id2_loop, 2, {x(1, 1): E((x(2, 1), 1))})
    with pytest.raises(ShapeError) as info:
        classify_DS(id2_loop, d)
    assert info.value.vector is not None


def test_ds_coords_parity():
    with pytest.raises(ValueError):
        DSCoords(even={(1, 1): 1})
    with pytest.raises(ValueError):
        DSCoords(odd={(1, 2): 1})


def test_cent_der_images(a1_loop):
    D = make_cent_der(a1_loop, CentDerForm(1, T(2)), 4)
    # h t^2j -> j h t^2j and x t^(2j+1) -> j x t^(2j+1) for f = t^2
    assert D.image(h(1, 4)) == E((h(1, 4), 2))
    assert D.image(h(1, -2)) == E((h(1, -2), -1))
    assert D.image(x(1, 3)) == E((x(1, 3), 1))
    assert D.image(h(1, 0)) == 0
    assert check_derivation(a1_loop, D)


def test_cent_der_rejects_odd_f():
    with pytest.raises(ValueError):
        CentDerForm(1, T(1))


def test_classify_DL1(a1_loop):
    D = make_cent_der(a1_loop, CentDerForm(1, T(2)), 4)
    assert classify_DL1(a1_loop, D) == [T(2)]
    assert classify_DL1(a1_loop, zero_map(a1_loop, 4)) == [LPoly()]


def test_classify_DL1_negative_power(a1_loop):
    D = make_cent_der(a1_loop, CentDerForm(1, T(-2)), 4)
    assert D.image(h(1, 2)) == E((h(1, -2), 1))
    assert D.image(h(1, 4)) == E((h(1, 0), 2))
    assert classify_DL1(a1_loop, D) == [T(-2)]


def test_classify_DL1_wrong_scaling(a1_loop):
    # f = t^2 forces h t^-2 -> -h t^-2
    D = DMap(a1_loop, 2, {h(1, 2): E((h(1, 2), 1)), h(1, -2): E((h(1, -2), 1))})
    with pytest.raises(ShapeError) as info:
        classify_DL1(a1_loop, D)
    assert info.value.vector == h(1, -2)


def test_der_L_rank_one():
    basis = der_L_basis(1)
    assert len(basis) == 2
    imgs = {frozenset((b, e) for b, e in D.images.items() if e) for D in basis}
    assert imgs == {frozenset({(h(1), E((x(1), 1)))}), frozenset({(x(1), E((x(1), 1)))})}


@pytest.mark.parametrize("l", [1, 2, 3, 4])
def test_der_L_dimension(l):
    basis = der_L_basis(l)
    assert len(basis) == 2 * l
    assert all(check_derivation(finite_spec(l), D) for D in basis)


def test_x_to_h_is_not_a_derivation():
    spec = finite_spec(1)
    assert not check_derivation(spec, DMap(spec, 1, {x(1): E((h(1), 1))}))


def test_centroid_rank_one_is_identity():
    (lam,) = centroid_basis(1)
    assert lam.image(h(1)) == E((h(1), 1)) and lam.image(x(1)) == E((x(1), 1))


@pytest.mark.parametrize("l", [1, 2, 3, 4])
def test_centroid_projectors(l):
    basis = centroid_basis(l)
    assert len(basis) == l
    for i, lam in enumerate(basis, start=1):
        for j in range(1, l + 1):
            assert lam.image(h(j)) == (E((h(j), 1)) if i == j else Elem())
            assert lam.image(x(j)) == (E((x(j), 1)) if i == j else Elem())


def test_centroid_commutes_with_ad():
    spec = finite_spec(2)
    dom = domain_basis(spec, 1)
    for lam in centroid_basis(2):
        for a in dom:
            for b in dom:
                ea, eb = E((a, 1)), E((b, 1))
                assert lam(bracket(spec, ea, eb)) == bracket(spec, lam(ea), eb)


def test_dl1_space_shapes():
    spec = make_spec(1, [[2]], "loop")
    assert dl1_space(spec, 4, "odd", 8) == []
    even = dl1_space(spec, 4, "even", 8)
    assert even
    for D in even:
        assert check_derivation(spec, D)
        classify_DL1(spec, D)

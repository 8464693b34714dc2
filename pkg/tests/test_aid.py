from fractions import Fraction

import pytest

from aidlab.aid import (
    CERTIFIED,
    INCONCLUSIVE,
    INFEASIBLE,
    NOT_APPLICABLE,
    REFUTED,
    SOLVED,
    AidCoords,
    NormalizationError,
    NotApplicable,
    aid_map,
    ansatz_Y,
    certify_aid,
    find_inner,
    generate_probes,
    independence_check,
    make_Dij,
    normalize_aid,
    rigidity_check,
    solve_ad_at,
    y_schedule,
)
from aidlab.algebra import K, Elem, bracket, h, x
from aidlab.derivations import CentDerForm, DMap, check_derivation, make_ad, make_cent_der, zero_map
from aidlab.kernel import LPoly

F = Fraction


def E(*terms):
    return Elem(terms)


def satisfies(spec, D, X, Y):
    return bracket(spec, X, Y) == D(X)


def test_y_schedule():
    assert y_schedule(6) == (6, 8, 10, 14)
    assert y_schedule(6, 12) == (6, 8, 10, 12)
    assert y_schedule(6, 18) == (6, 8, 10, 14, 18)
    assert y_schedule(6, 6) == (6,)


def test_dij_is_a_derivation(a1_affine):
    D = make_Dij(a1_affine, 1, 1, 6)
    assert D.image(h(1, 2)) == E((K, 1))
    assert check_derivation(a1_affine, D)


def test_dij_requires_affine(a1_loop):
    with pytest.raises(ValueError):
        make_Dij(a1_loop, 1, 1, 4)


def test_solve_single_term(a1_affine):
    D = make_Dij(a1_affine, 1, 1, 4)
    X = E((h(1, 2), 1))
    res = solve_ad_at(a1_affine, D, X, 4)
    assert res.status == SOLVED and satisfies(a1_affine, D, X, res.witness)
    # the closed form 1/(2j) h_1' t^-2j with h_1' = 2 h_1 is one valid witness
    assert satisfies(a1_affine, D, X, E((h(1, -2), 1)))


def test_solve_three_terms(a1_affine):
    D = make_Dij(a1_affine, 1, 1, 6)
    X = E((h(1, 2), 1), (h(1, 4), 1), (x(1, 1), 1))
    res = solve_ad_at(a1_affine, D, X, 6)
    assert res.solved and satisfies(a1_affine, D, X, res.witness)
    oracle = E((h(1, -2), F(1, 3)), (h(1, -4), F(1, 3)), (x(1, -5), F(1, 3)))
    assert satisfies(a1_affine, D, X, oracle)
    assert res.witness == oracle


def test_solve_j0_is_structurally_infeasible(a1_affine):
    D = make_Dij(a1_affine, 1, 0, 4)
    for M in (4, 8, 16):
        res = solve_ad_at(a1_affine, D, E((h(1, 0), 1)), M)
        assert res.status == INFEASIBLE and res.certificate == K


def test_solve_outside_window(a1_affine):
    res = solve_ad_at(a1_affine, make_Dij(a1_affine, 1, 1, 2), E((h(1, 4), 1)), 4)
    assert res.status == NOT_APPLICABLE


def test_ansatz_single_term(a1_affine):
    assert ansatz_Y(a1_affine, 1, 1, E((h(1, 2), 1))) == E((h(1, -2), 1))


def test_ansatz_with_inactive_index(id2_affine):
    # only index 1 carries a torus term; the B-system for index 2 has zero right side
    X = E((h(1, 2), 1), (x(2, 1), 1))
    Y = ansatz_Y(id2_affine, 1, 1, X)
    assert Y == E((h(1, -2), F(1, 2)))
    assert satisfies(id2_affine, make_Dij(id2_affine, 1, 1, 4), X, Y)


def test_ansatz_divisibility_failure(a1_affine):
    X = E((h(1, 2), 1), (h(1, 4), 1), (x(1, 1), 1))
    assert ansatz_Y(a1_affine, 1, 1, X) is None
    assert solve_ad_at(a1_affine, make_Dij(a1_affine, 1, 1, 6), X, 6).solved


def test_ansatz_guards(a1_affine):
    with pytest.raises(NotApplicable):
        ansatz_Y(a1_affine, 1, 0, E((h(1), 1)))
    with pytest.raises(ValueError):
        ansatz_Y(a1_affine, 1, 1, E((h(1, 2), 1), (K, 1)))


def test_certify_dij(a1_affine):
    rep = certify_aid(a1_affine, make_Dij(a1_affine, 1, 1, 4), "basis")
    assert rep.verdict == CERTIFIED and rep.probes
    assert all(satisfies(a1_affine, make_Dij(a1_affine, 1, 1, 4), X, r.witness) for X, r in rep.probes)


def test_certify_cent_der_refuted(a1_loop):
    D = make_cent_der(a1_loop, CentDerForm(1, LPoly.monomial(2)), 4)
    rep = certify_aid(a1_loop, D, "basis")
    assert rep.verdict == REFUTED
    assert rep.witness == E((h(1, 2), 1))


def test_certify_j0_refuted(a1_affine):
    rep = certify_aid(a1_affine, make_Dij(a1_affine, 1, 0, 4), "basis")
    assert rep.verdict == REFUTED
    assert rep.witness == E((h(1, 0), 1)) and rep.certificate == K


def test_certify_rejects_non_derivation(a1_loop):
    D = DMap(a1_loop, 2, {h(1, 0): E((h(1, 0), 1))})
    with pytest.raises(ValueError):
        certify_aid(a1_loop, D)


def test_small_y_window_is_inconclusive_not_refuted(a1_affine):
    # D_{1,3} at h_1 t^6 + x_1 t^-5 needs Y terms of degree beyond 6
    D = make_Dij(a1_affine, 1, 3, 6)
    X = E((h(1, 6), 1), (x(1, -5), 1))
    for M in (6, 8, 10, 14):
        res = solve_ad_at(a1_affine, D, X, M)
        assert res.status == INFEASIBLE and res.certificate is None
    assert solve_ad_at(a1_affine, D, X, 18).solved
    rep = certify_aid(a1_affine, D, "basis")
    assert rep.verdict in (CERTIFIED, INCONCLUSIVE)


def test_probes_are_seeded(id2_affine):
    a = generate_probes(id2_affine, 4, "random", count=20, seed=7)
    b = generate_probes(id2_affine, 4, "random", count=20, seed=7)
    c = generate_probes(id2_affine, 4, "random", count=20, seed=8)
    assert a == b and a != c
    with pytest.raises(ValueError):
        generate_probes(id2_affine, 4, "bogus")


def test_find_inner(a1_loop, a1_affine):
    y = E((h(1, 2), 1), (x(1, 3), 1))
    assert find_inner(a1_loop, make_ad(a1_loop, y, 4), 8) == y
    assert find_inner(a1_affine, make_ad(a1_affine, y + E((K, 5)), 4), 8) == y
    assert find_inner(a1_affine, make_Dij(a1_affine, 1, 1, 4), 12) is None
    assert find_inner(a1_affine, zero_map(a1_affine, 4), 4) == Elem()


def test_normalize_examples(a1_affine, id2_affine):
    D = make_Dij(a1_affine, 1, 2, 6) * 3 + make_ad(a1_affine, E((h(1, 2), 1)), 6)
    c = normalize_aid(a1_affine, D)
    assert c.a == {(1, 2): 3} and c.y == E((h(1, 2), 1))

    c = normalize_aid(a1_affine, make_ad(a1_affine, E((x(1, 1), 1)), 6))
    assert c.a == {} and c.y == E((x(1, 1), 1))

    D = make_Dij(id2_affine, 1, 1, 4) + make_Dij(id2_affine, 2, -1, 4)
    c = normalize_aid(id2_affine, D)
    assert c.a == {(1, 1): 1, (2, -1): 1} and c.y == Elem()


def test_normalize_rejects_non_aid(a1_affine):
    # an odd map not of the form ad y
    D = DMap(a1_affine, 2, {h(1, 0): E((x(1, 1), 1))})
    with pytest.raises(NormalizationError):
        normalize_aid(a1_affine, D)


def test_aid_coords_reject_central_y():
    with pytest.raises(ValueError):
        AidCoords({}, E((K, 1)))


def test_aid_map_round_trip(id2_affine):
    coords = AidCoords({(1, -1): 2, (2, 2): F(-1, 2)}, E((h(2, 4), 1), (h(1, 0), 3)))
    assert normalize_aid(id2_affine, aid_map(id2_affine, coords, 6)) == coords


def test_independence(a1_affine, id2_affine):
    assert independence_check(a1_affine, [(1, 1)], 4, 10).independent
    idx = [(i, j) for i in (1, 2) for j in (-2, -1, 1, 2)]
    assert independence_check(id2_affine, idx, 6, 10).independent
    assert independence_check(id2_affine, [], 6, 10).independent


def test_rigidity(id2_affine):
    assert rigidity_check(id2_affine, 4, 8) == []

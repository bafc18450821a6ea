import random

import pytest

from gerst.fields import QQ, GerstError
from gerst.algebra import (dual_numbers, field_algebra, matrix_algebra,
                           polynomial_algebra)
from gerst.cochains import Cochain, random_cochain
from gerst.mc import (StarProduct, TCochain, defect_matches_residual,
                      gauge_act, gauge_recover, mc_residual, mc_transport,
                      moyal_parameter, random_gauge, star_table, t_cochain,
                      trivial_deformation)


def _poly_xp():
    return polynomial_algebra(2, 3, QQ, var_names=["x", "p"])


def test_moyal_residual_and_associativity():
    A = _poly_xp()
    lam = moyal_parameter(A, 3)
    assert mc_residual(lam).is_zero()
    assert defect_matches_residual(A, lam) is None
    sp = StarProduct(A, lam)
    xi = A.monomial_index[(1, 0)]
    pi = A.monomial_index[(0, 1)]
    left = sp.star(sp.basis(xi), sp.basis(pi))
    right = sp.star(sp.basis(pi), sp.basis(xi))
    # x * p - p * x = t
    assert left[0] == right[0]
    assert left[1][0] - right[1][0] == QQ.one


def test_defect_matches_residual_random():
    A = matrix_algebra(2, field_algebra(QQ))
    rng = random.Random(3)
    for _ in range(20):
        lam = TCochain(A, 2, 3, {1: random_cochain(A, 2, rng, 4),
                                 2: random_cochain(A, 2, rng, 4)})
        assert defect_matches_residual(A, lam) is None


def test_gauge_action_preserves_mc():
    A = dual_numbers(QQ)
    rng = random.Random(5)
    for _ in range(30):
        lam = trivial_deformation(A, random_gauge(A, rng, 3))
        assert mc_residual(lam).is_zero()
        moved = gauge_act(random_gauge(A, rng, 3), lam)
        assert mc_residual(moved).is_zero()


def test_gauge_recover_round_trip():
    A = dual_numbers(QQ)
    rng = random.Random(11)
    for _ in range(5):
        base = trivial_deformation(A, random_gauge(A, rng, 3))
        X = random_gauge(A, rng, 3)
        target = gauge_act(X, base)
        Y, obstruction = gauge_recover(A, base, target)
        assert obstruction is None
        assert gauge_act(Y, base).equals(target)


def test_coboundary_is_gauge_trivial():
    A = dual_numbers(QQ)
    g = Cochain(A, 1, {(1,): {1: QQ.of(3)}})
    lam = t_cochain(g.delta(), 1, 2)
    zero = TCochain(A, 2, 2)
    X, obstruction = gauge_recover(A, zero, lam)
    assert obstruction is None
    assert gauge_act(X, zero).equals(lam)


def test_transport_zero_and_moyal():
    R = _poly_xp()
    M = matrix_algebra(2, R)
    zero = TCochain(R, 2, 3)
    assert mc_transport(zero, M).is_zero()
    lam = mc_transport(moyal_parameter(R, 3), M)
    assert mc_residual(lam).is_zero()
    assert defect_matches_residual(M, lam) is None


def test_transport_rejects_non_normalized():
    R = dual_numbers(QQ)
    M = matrix_algebra(2, R)
    bad = TCochain(R, 2, 2, {1: Cochain(R, 2, {(0, 0): {1: QQ.one}})})
    with pytest.raises(GerstError):
        mc_transport(bad, M)


def test_transport_keeps_gauge_classes_apart():
    R = dual_numbers(QQ)
    M = matrix_algebra(2, R)
    # e*e -> e is a cocycle that is not a coboundary (HH^2(R) is 1-dim),
    # so t*(that cocycle) and 0 are gauge-inequivalent; transport must
    # keep them apart.
    c = Cochain(R, 2, {(1, 1): {0: QQ.one}})
    assert c.delta().is_zero()
    lam = t_cochain(c, 1, 2)
    zero = TCochain(R, 2, 2)
    _, obstruction = gauge_recover(R, zero, lam)
    assert obstruction is not None
    _, obstruction_m = gauge_recover(M, mc_transport(zero, M),
                                     mc_transport(lam, M))
    assert obstruction_m is not None


def test_star_table_zero_parameter_is_product():
    A = dual_numbers(QQ)
    zero = TCochain(A, 2, 2)
    table = star_table(StarProduct(A, zero))
    expect = sorted([i, j, 0, k, QQ.fmt(v)]
                    for (i, j), vec in A.table.items()
                    for k, v in vec.items())
    assert table == expect
    lam = t_cochain(Cochain(A, 2, {(1, 1): {0: QQ.one}}), 1, 2)
    table = star_table(StarProduct(A, lam))
    assert [1, 1, 1, 0, "1"] in table

import itertools
import random

from gerst.fields import QQ
from gerst.jets import JetModel, curvature_form
from gerst.compare import (Graded, JetCochain, ad_op, exp_iota,
                           graded_nabla, iota, mu_jet)
from gerst.suites import graded_pieces, random_connection, random_form


def _model():
    return JetModel(2, 2, 1, 1, QQ)


def test_jet_multiplication_cochain_is_mc():
    m = _model()
    mu = mu_jet(m)
    half = QQ.of("1/2")
    res = mu.delta() + mu.bracket(mu).scale(half)
    assert res.is_zero()


def test_gdelta_squares_to_zero():
    m = _model()
    for S in itertools.islice(graded_pieces(m, 2), 0, 200, 7):
        assert S.gdelta().gdelta().is_zero()


def test_contraction_identities_spot():
    m = _model()
    rng = random.Random(21)
    H = random_form(m, rng, 1, ymax=1, xmax=1)
    G = random_form(m, rng, 1, ymax=1, xmax=1)
    gamma = random_connection(m, rng, xmax=1)
    for S in itertools.islice(graded_pieces(m, 2), 0, 300, 11):
        dS = S.gdelta()
        lhs1 = iota(H, dS).scale(-1) + iota(H, S).gdelta()
        assert lhs1.equals(ad_op(H, S))
        lhs3 = iota(H, iota(G, S)) - iota(G, iota(H, S))
        assert lhs3.is_zero()
        lhs4 = graded_nabla(iota(H, S), gamma) \
            - iota(H, graded_nabla(S, gamma))
        from gerst.jets import nabla_tot_form
        assert lhs4.equals(iota(nabla_tot_form(H, gamma), S))


def test_exp_iota_of_zero_is_identity():
    m = _model()
    zero = curvature_form(m, random_connection(m, random.Random(1), 0))
    for S in itertools.islice(graded_pieces(m, 1), 0, 50, 3):
        assert exp_iota(zero.scale(0), S).equals(S)


def test_cochain_window_equality():
    m = _model()
    y1 = next(yi for yi in range(len(m.y_monos)) if m.y_deg(yi) == 1)
    el = m.basis_element(0, 0, yi=y1)
    D = JetCochain(m, 1, {((0, 0, y1),): el}, aw=m.yw)
    assert D.equals(D + D.scale(0))
    assert not D.equals(D.scale(2))

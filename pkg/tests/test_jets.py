import random

import pytest

from gerst.fields import QQ, GerstError
from gerst.jets import (JetElement, JetForm, JetIsomorphism, JetModel,
                        compute_F, curvature_form, formula_F_residual,
                        j_infty, nabla_tot_element, nabla_tot_form)
from gerst.suites import random_connection, random_generator


def _model(**kw):
    args = dict(d=2, n=2, x_cap=2, y_cap=2, field=QQ)
    args.update(kw)
    return JetModel(**args)


def test_jet_expansion_is_multiplicative():
    m = _model()
    x1 = m.x_index[(1, 0)]
    x2 = m.x_index[(0, 1)]
    a = j_infty(m, {(0, 1, m.x_monos[x1]): QQ.one})
    b = j_infty(m, {(1, 0, m.x_monos[x2]): QQ.of(3)})
    ab = j_infty(m, {(0, 0, (1, 1)): QQ.of(3)})
    assert a.mul(b).equals(ab)


def test_jet_expansion_flat():
    m = _model()
    e = j_infty(m, {(0, 1, (2, 0)): QQ.one, (1, 1, (1, 1)): QQ.of(-2)})
    for i in range(m.d):
        assert e.nabla_can(i).is_zero()


def test_automorphism_and_log_round_trip():
    m = _model()
    rng = random.Random(2)
    f = random_generator(m, rng, ymax=2, xmax=1)
    sig = JetIsomorphism(m, f)
    assert sig.automorphism_defect() is None
    g = sig.log_generator()
    assert g.equals(f)


def test_generator_constraints():
    m = _model()
    with pytest.raises(GerstError):
        JetIsomorphism(m, m.unit())  # y-order 0
    x1 = m.x_index[(1, 0)]
    with pytest.raises(GerstError):
        JetIsomorphism(m, JetElement(m, {(0, 0, x1, 0): QQ.one}))


def test_curvature_is_nabla_squared():
    m = _model()
    rng = random.Random(4)
    gamma = random_connection(m, rng, xmax=1)
    theta = curvature_form(m, gamma)
    assert all(len(I) == 2 for I in theta.terms)
    for (a, b, yi) in m.module_basis(m.y_cap):
        e = m.basis_element(a, b, yi=yi)
        lhs = nabla_tot_form(nabla_tot_element(e, gamma), gamma)
        rhs = JetForm(m, {I: el.commutator(e)
                          for I, el in theta.terms.items()})
        assert lhs.equals(rhs)


def test_flat_connection_has_zero_curvature():
    m = _model()
    assert curvature_form(m, JetForm(m, {})).is_zero()


def test_compute_f_residual_and_trivial():
    m = _model()
    rng = random.Random(6)
    f = random_generator(m, rng, ymax=2, xmax=1)
    gamma = random_connection(m, rng, xmax=2)
    F = compute_F(m, JetIsomorphism(m, f), gamma)
    assert formula_F_residual(m, F, gamma).is_zero()
    F0 = compute_F(m, JetIsomorphism(m, m.zero()), JetForm(m, {}))
    assert F0.is_zero()

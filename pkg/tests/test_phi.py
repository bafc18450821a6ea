import random

import pytest

from gerst.fields import QQ, GerstError
from gerst.jets import JetForm, JetIsomorphism, JetModel
from gerst.compare import JetCochain
from gerst.jets import JetElement
from gerst.phi import (ComparisonMap, DeltaComplex, cohomology_basis,
                       compare_choices, cotrace_graded, cotrace_jet,
                       hh_dims, induced_rank, scalar_spanning_pieces,
                       scalar_twin)
from gerst.suites import _canary_choices, _draw_pair


def test_trivial_map_is_cotrace_and_chain():
    m = JetModel(1, 2, 1, 1, QQ)
    phi = ComparisonMap(m, JetIsomorphism(m, m.zero()), JetForm(m, {}))
    for S in scalar_spanning_pieces(phi.scalar, 1):
        assert phi.apply(S).equals(cotrace_graded(m, S))
        assert phi.chain_defect(S).is_zero()


def test_chain_defect_zero_on_seeded_draw():
    m = JetModel(1, 2, 1, 1, QQ)
    sig, gamma = _draw_pair(m, random.Random(17))
    phi = ComparisonMap(m, sig, gamma)
    for S in scalar_spanning_pieces(phi.scalar, 1):
        assert phi.chain_defect(S).is_zero()


def test_exponent_sign_canary():
    cm, sig, gamma = _canary_choices(QQ)
    counts = {}
    for sgn in (-1, 1):
        phi = ComparisonMap(cm, sig, gamma, exp_sign=sgn)
        pieces = scalar_spanning_pieces(phi.scalar, 2, arg_win=1, out_y=1)
        counts[sgn] = sum(0 if phi.chain_defect(S).is_zero() else 1
                          for S in pieces)
    assert counts[-1] == 0
    assert counts[1] > 0


def test_windowed_cohomology_dims_and_induced_maps():
    m = JetModel(1, 2, 1, 1, QQ)
    maps = [ComparisonMap(m, JetIsomorphism(m, m.zero()), JetForm(m, {})),
            ComparisonMap(m, *_draw_pair(m, random.Random(23)))]
    src = DeltaComplex(maps[0].scalar, 1, normalized=True)
    tgt = DeltaComplex(m, 1, normalized=False)
    assert hh_dims(src, 1) == hh_dims(tgt, 1)
    for q in (0, 1):
        mats = compare_choices(maps, src, tgt, q)
        assert mats[0] == mats[1]
        dim = len(cohomology_basis(tgt, q))
        assert len(mats[0]) == dim
        assert induced_rank(mats[0], len(tgt.coords[q]), QQ) == dim


def test_cotrace_jet_requires_normalized():
    m = JetModel(1, 2, 1, 1, QQ)
    s = scalar_twin(m)
    bad = JetCochain(s, 1, {((0, 0, 0),):
                            JetElement(s, {(0, 0, 0, 0): QQ.one})}, aw=s.yw)
    with pytest.raises(GerstError):
        cotrace_jet(m, bad)

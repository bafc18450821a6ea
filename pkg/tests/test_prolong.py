from gerst.fields import QQ
from gerst.jets import JetModel
from gerst.compare import mu_jet, _nabla_dir_cochain
from gerst.prolong import de_rham_report, jet_prolong, symbol_cochain


def _model():
    return JetModel(1, 2, 2, 2, QQ)


def test_prolonged_multiplication_is_jet_multiplication():
    m = _model()

    def entry(args):
        ((a, b), m1), ((c, d), m2) = args
        if b != c:
            return {}
        mono = tuple(p + q for p, q in zip(m1, m2))
        return {((a, d), mono): QQ.one}
    assert jet_prolong(m, 2, entry).equals(mu_jet(m))


def test_prolongations_are_flat():
    m = _model()
    P = symbol_cochain(m, 0, 1, 1, 0, (1,), (1,))
    nP = _nabla_dir_cochain(P, 0, None)
    assert all(el.is_zero() for el in nP.entries.values())


def test_de_rham_slices():
    m = _model()
    report = de_rham_report(m, 1, 2)
    for (q, w), s in report.items():
        assert s.ok(), (q, w, s.dims, s.flat_dim)
        assert all(v == 0 for v in s.dims[1:])
        assert s.dims[0] == s.flat_dim

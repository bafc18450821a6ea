import random

from gerst.fields import QQ
from gerst.algebra import matrix_algebra, polynomial_algebra
from gerst.forms import Connection, PolyForm, scalar_form, wedge_sign


def _mat_poly():
    return matrix_algebra(2, polynomial_algebra(2, 4, QQ))


def _rand_vec(A, rng, n=4):
    return {rng.randrange(A.dim): A.field.of(rng.randrange(1, 7))
            for _ in range(n)}


def test_wedge_sign():
    assert wedge_sign((0,), (1,)) == (1, (0, 1))
    assert wedge_sign((1,), (0,)) == (-1, (0, 1))
    assert wedge_sign((0,), (0,)) is None


def test_de_rham_d_squares_to_zero():
    A = _mat_poly()
    rng = random.Random(9)
    for _ in range(10):
        w = PolyForm(A, 2, {(): _rand_vec(A, rng), (0,): _rand_vec(A, rng)})
        assert w.de_rham_d().de_rham_d().is_zero()


def test_wedge_graded_commutativity_on_scalars():
    R = polynomial_algebra(2, 4, QQ)
    a = scalar_form(R, 2, (0,), {1: QQ.one})
    b = scalar_form(R, 2, (1,), {2: QQ.of(2)})
    assert (a.wedge(b) + b.wedge(a)).is_zero()


def _traceless_gamma(A, rng):
    n = A.matrix_size
    dim_r = A.matrix_base.dim
    terms = {}
    for i in range(2):
        vec = {}
        for _ in range(3):
            a, b = rng.randrange(n), rng.randrange(n)
            if a == b:
                b = (a + 1) % n
            low = [k for k in range(dim_r)
                   if A.matrix_base.weight_of(k) <= 1]
            r = low[rng.randrange(len(low))]
            k = (a * n + b) * dim_r + r
            vec[k] = vec.get(k, A.field.zero) + A.field.of(rng.randrange(1, 5))
        terms[(i,)] = vec
    return PolyForm(A, 2, terms)


def test_connection_leibniz_and_curvature():
    A = _mat_poly()
    rng = random.Random(13)
    nabla = Connection(A, 2, _traceless_gamma(A, rng))
    assert nabla.leibniz_check() is None
    assert nabla.curvature_check() is None


def test_flat_connection():
    A = _mat_poly()
    nabla = Connection(A, 2, PolyForm(A, 2, {}))
    assert nabla.curvature().is_zero()
    assert nabla.curvature_check() is None

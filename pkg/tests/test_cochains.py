import random

from gerst.fields import QQ
from gerst.algebra import dual_numbers, field_algebra, matrix_algebra
from gerst.cochains import (Cochain, CochainSpace, cohomology,
                            cotrace_cochain, dense_cohomology_dims,
                            induced_cohomology_map, normalize_projection,
                            random_cochain, verify_chain_map)


def test_normalized_space_dimension():
    A = dual_numbers(QQ)
    assert CochainSpace(A, 1, normalized=True).dim == (A.dim - 1) * A.dim


def test_normalize_projection_kills_unit_values():
    A = dual_numbers(QQ)
    D = Cochain(A, 1, {(0,): {1: QQ.one}, (1,): {0: QQ.of(2)}})
    P = normalize_projection(D)
    assert P.value((0,)) == {}
    assert normalize_projection(P).equals(P)


def test_matrix_algebra_dims():
    A = matrix_algebra(2, field_algebra(QQ))
    dims = [cohomology(A, k).dim_hh for k in range(3)]
    assert dims == [1, 0, 0]
    assert [dense_cohomology_dims(A, k)[2] for k in range(3)] == dims


def test_dual_numbers_dims():
    A = dual_numbers(QQ)
    dims = [cohomology(A, k, normalized=True).dim_hh for k in range(3)]
    assert dims == [2, 1, 1]
    assert [dense_cohomology_dims(A, k, normalized=True)[2]
            for k in range(3)] == dims


def test_degree_zero_is_center_for_commutative():
    A = dual_numbers(QQ)
    assert cohomology(A, 0).dim_hh == A.dim


def test_induced_map_identity():
    A = dual_numbers(QQ)
    rep = cohomology(A, 1, normalized=True)
    mat = induced_cohomology_map(lambda D: D, rep, rep)
    assert dict(mat.entries) == {(0, 0): QQ.one}


def test_delta_squared_zero_random():
    A = matrix_algebra(2, field_algebra(QQ))
    rng = random.Random(7)
    for _ in range(20):
        D = random_cochain(A, rng.randrange(0, 4), rng, 4)
        assert D.delta().delta().is_zero()


def test_cotrace_chain_map_and_induced_iso():
    R = dual_numbers(QQ)
    M = matrix_algebra(2, R)
    for k in range(3):
        src = cohomology(R, k, normalized=True)
        tgt = cohomology(M, k)
        assert verify_chain_map(lambda D: cotrace_cochain(D, M),
                                src.space) is None
        mat = induced_cohomology_map(lambda D: cotrace_cochain(D, M),
                                     src, tgt)
        assert src.dim_hh == tgt.dim_hh == mat.rank()

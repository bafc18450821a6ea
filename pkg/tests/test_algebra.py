import json

import pytest

from gerst.fields import GF, QQ, GerstError
from gerst.algebra import (Algebra, WeightOverflowError, dual_numbers,
                           field_algebra, matrix_algebra,
                           polynomial_algebra, with_unit_basis)


def test_json_round_trip_bit_exact():
    A = matrix_algebra(2, dual_numbers(QQ))
    data = A.to_json()
    B = Algebra.from_json(data, field=QQ)
    assert json.dumps(data, sort_keys=True) \
        == json.dumps(B.to_json(), sort_keys=True)


def test_capped_round_trip_keeps_zero_pairs():
    A = polynomial_algebra(2, 3, QQ)
    B = Algebra.from_json(A.to_json(), field=QQ)
    assert B.weight_cap == 3
    assert B.overflow_pairs == A.overflow_pairs


def test_invalid_table_rejected():
    data = field_algebra(QQ).to_json()
    data["table"] = [[0, 0, 0, "2/1"]]
    with pytest.raises(GerstError):
        Algebra.from_json(data, field=QQ)


def test_weight_overflow_raises():
    A = polynomial_algebra(1, 2, QQ)
    x2 = A.dim - 1
    with pytest.raises(WeightOverflowError):
        A.mul_basis(x2, x2)


def test_unit_and_associativity():
    for A in (field_algebra(QQ), dual_numbers(GF(10007)),
              matrix_algebra(2, field_algebra(QQ))):
        for i in range(A.dim):
            assert A.mul(A.unit, {i: A.field.one}) == {i: A.field.one}


def test_with_unit_basis():
    A = matrix_algebra(2, field_algebra(QQ))
    assert A.unit_index is None
    B, to_B, from_B = with_unit_basis(A)
    assert B.unit_index == 0
    vec = {1: QQ.of(3), 2: QQ.of("-1/2")}
    assert from_B.apply(to_B.apply(vec)) == vec

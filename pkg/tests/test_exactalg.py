from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from filtdist.exactalg import (Field, Coords, Subspace, rref, subspace_intersect, subspace_member,
                               subspace_sum, is_prime, AmbientMismatchError, FieldMismatchError)

Q = Field.rational()
F7 = Field.prime(7)


def test_rref_dependent_rows():
    rows, rank = rref([[1, 2], [2, 4]], Q)
    assert rows == [[1, 2]] and rank == 1


def test_rref_permutation():
    rows, rank = rref([[0, 1], [1, 0]], Q)
    assert rows == [[1, 0], [0, 1]] and rank == 2


def test_rref_mod7():
    rows, rank = rref([[2, 4], [3, 5]], F7)
    # det = 10 - 12 = -2 != 0 mod 7
    assert rank == 2
    assert rows == [[F7(1), F7(0)], [F7(0), F7(1)]]


def _line(coords, *vs):
    return Subspace(coords, [{i: Q(x) for i, x in enumerate(v) if x} for v in vs])


def test_intersect_complementary_lines():
    C = Coords(Q)
    assert subspace_intersect(_line(C, (1, 0)), _line(C, (0, 1))).dim == 0


def test_intersect_idempotent():
    C = Coords(Q)
    U = _line(C, (1, 1, 0), (0, 1, 1))
    assert subspace_intersect(U, U) == U


def test_intersect_planes_in_3space():
    C = Coords(Q)
    U = _line(C, (1, 1, 0), (0, 1, 1))
    V = _line(C, (1, 0, -1), (0, 0, 1))
    W = subspace_intersect(U, V)
    assert W.dim == 1
    # oracle: a(1,1,0)+b(0,1,1) = c(1,0,-1)+d(0,0,1) gives a = c, a+b = 0, b = d - c
    # so b = -a and d = 0: the vector (1,0,-1)
    assert W.contains({0: Q(1), 2: Q(-1)})


def test_member_examples():
    C = Coords(Q)
    U = _line(C, (0, 1))
    assert subspace_member({}, U)
    assert not subspace_member({0: Q(1)}, U)
    assert subspace_member({0: Q(2), 1: Q(4), 2: Q(6)}, _line(C, (1, 2, 3)))


def test_coords_mismatch():
    U = _line(Coords(Q), (1, 0))
    V = _line(Coords(Q), (1, 0))
    with pytest.raises(AmbientMismatchError):
        subspace_sum(U, V)


def test_field_mismatch():
    with pytest.raises(FieldMismatchError):
        Field.prime(5)(1) + Field.prime(7)(1)


def test_prime_field_rejects_composite():
    assert not is_prime(6) and is_prime(7)
    with pytest.raises(ValueError):
        Field.prime(6)


def test_rationals_exact():
    assert Q(Fraction(1, 3)) * 3 == 1


small = st.integers(-3, 3)
vec = st.lists(small, min_size=4, max_size=4)
vecs = st.lists(vec, min_size=0, max_size=4)


@given(vecs, vecs, st.sampled_from([Q, F7, Field.prime(2)]))
def test_dimension_formula(a, b, F):
    C = Coords(F)
    mk = lambda vs: Subspace(C, [{i: F(x) for i, x in enumerate(v) if F(x)} for v in vs])
    U, V = mk(a), mk(b)
    I = subspace_intersect(U, V)
    assert U.dim + V.dim == subspace_sum(U, V).dim + I.dim
    for r in I.basis():
        assert U.contains(r) and V.contains(r)


@given(vecs)
def test_rref_idempotent_and_row_space(a):
    if not a:
        return
    rows, rank = rref(a, Q)
    again, rank2 = rref(rows, Q) if rows else ([], 0)
    assert rows == again and rank == rank2
    C = Coords(Q)
    S = Subspace(C, [{i: Q(x) for i, x in enumerate(r) if x} for r in rows])
    for r in a:
        assert S.contains({i: Q(x) for i, x in enumerate(r) if x})


@given(st.integers(0, 10), st.integers(1, 10), st.integers(0, 10))
def test_field_axioms_mod(a, b, c):
    F = Field.prime(11)
    x, y, z = F(a), F(b), F(c)
    assert (x * y) * z == x * (y * z)
    assert x * (y + z) == x * y + x * z
    assert y * y.inverse() == 1


@given(st.fractions(max_denominator=20), st.fractions(max_denominator=20).filter(bool),
       st.fractions(max_denominator=20))
def test_field_axioms_rational(a, b, c):
    x, y, z = Q(a), Q(b), Q(c)
    assert (x + y) + z == x + (y + z)
    assert x * (y + z) == x * y + x * z
    assert y * (1 / y) == 1

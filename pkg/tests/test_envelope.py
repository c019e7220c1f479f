from math import comb

import pytest
from hypothesis import given, strategies as st

from filtdist.exactalg import Field
from filtdist.filtration import product_compatible, is_superadditive
from filtdist.envelope import (LieStructure, StructureError, UEAAmbient, heisenberg, abelian,
                               pbw_normal_form, uea_filtration, uea_distortion_pair,
                               free_uea_bridge_check, parse_structure, witt)

Q = Field.rational()


def test_pbw_examples():
    U = UEAAmbient(heisenberg(Q).adapted(["a", "b"]))
    assert pbw_normal_form(U, (0, 1)) == {(0, 1): 1}
    # b*a = a*b - c
    assert pbw_normal_form(U, (1, 0)) == {(0, 1): 1, (2,): -1}
    A = UEAAmbient(abelian(Q, 3).adapted(["b1", "b2", "b3"]))
    assert pbw_normal_form(A, (2, 0, 1, 0)) == {(0, 0, 1, 2): 1}


def test_uea_filtration_examples():
    assert uea_filtration(abelian(Q, 2), ["b1", "b2"], 4).dims() == [comb(n + 2, 2) for n in range(5)]
    H = uea_filtration(heisenberg(Q), ["a", "b"], 7).dims()
    lattice = [sum(1 for i in range(n + 1) for j in range(n + 1) for k in range(n + 1) if i + j + 2 * k <= n)
               for n in range(8)]
    assert H == lattice
    assert uea_filtration(abelian(Q, 1), ["b1"], 5).dims() == [1, 2, 3, 4, 5, 6]


def test_uea_distortion_examples():
    r = uea_distortion_pair(heisenberg(Q), ["a", "b"], ["c"], 8)
    assert r.lie_dist == [0] + [1] * 7
    assert r.closure == [n // 2 for n in range(1, 9)]
    assert r.uea_dist == r.closure and r.equal
    r = uea_distortion_pair(heisenberg(Q), ["a", "b"], ["a", "b"], 6)
    # L is spanned at bracket length 2, so the Lie side saturates there
    assert r.lie_dist == [min(n, 2) for n in range(1, 7)]
    assert r.uea_dist == r.closure == list(range(1, 7)) and r.equal
    r = uea_distortion_pair(abelian(Q, 2), ["b1", "b2"], ["b2"], 6)
    assert r.lie_dist == [1] * 6
    assert r.equal


def test_free_bridge():
    ok, rows = free_uea_bridge_check(6)
    assert ok
    assert [r[1] for r in rows[:3]] == [2, 4, 8]
    assert witt(2, 2) == 1 and witt(2, 3) == 2


def test_structure_validation():
    with pytest.raises(StructureError):
        LieStructure(Q, ["a", "b"], {(0, 1): {0: 1}, (1, 0): {0: 2}})
    with pytest.raises(StructureError):
        parse_structure("basis a b\nbracket a a = 1*b\n", Q)
    L = parse_structure("basis a b c\nbracket a b = 1*c\n", Q)
    assert L.dim == 3


def test_uea_multiplicative():
    U = uea_filtration(heisenberg(Q), ["a", "b"], 4)
    assert product_compatible(U) == []


def _jacobi_ok(d, table):
    def br(u, v):
        out = {}
        for i, a in u.items():
            for j, b in v.items():
                for k, c in table.get((i, j), {}).items():
                    out[k] = out.get(k, 0) + a * b * c
        return {k: c for k, c in out.items() if c}

    def add(*vs):
        out = {}
        for v in vs:
            for k, c in v.items():
                out[k] = out.get(k, 0) + c
        return {k: c for k, c in out.items() if c}

    e = [{i: 1} for i in range(d)]
    for i in range(d):
        for j in range(d):
            for k in range(d):
                if add(br(e[i], br(e[j], e[k])), br(e[j], br(e[k], e[i])), br(e[k], br(e[i], e[j]))):
                    return False
    return True


@given(st.dictionaries(st.sampled_from([(0, 1), (0, 2), (1, 2)]),
                       st.dictionaries(st.integers(0, 2), st.integers(-1, 1), max_size=2), max_size=3))
def test_jacobi_validation(br):
    full = {}
    for (i, j), v in br.items():
        v = {k: c for k, c in v.items() if c}
        full[(i, j)] = v
        full[(j, i)] = {k: -c for k, c in v.items()}
    ok = _jacobi_ok(3, full)
    if ok:
        LieStructure(Q, ["a", "b", "c"], br)
    else:
        with pytest.raises(StructureError):
            LieStructure(Q, ["a", "b", "c"], br)


@given(st.lists(st.integers(0, 2), max_size=6))
def test_pbw_weight_monotone(word):
    U = UEAAmbient(heisenberg(Q).adapted(["a", "b"]))
    out = pbw_normal_form(U, tuple(word))
    assert all(U.weight(m) <= U.weight(tuple(word)) for m in out)


def test_uea_distortion_superadditive():
    for T in (["c"], ["a"], ["a", "c"], ["b", "c"]):
        r = uea_distortion_pair(heisenberg(Q), ["a", "b"], T, 8)
        assert is_superadditive(r.uea_dist)[0]

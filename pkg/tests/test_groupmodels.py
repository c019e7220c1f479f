from fractions import Fraction
import random

import pytest
from hypothesis import given, strategies as st

from filtdist import groupmodels as gm


def _matmul(A, B):
    return tuple(tuple(sum(A[i][k] * B[k][j] for k in range(3)) for j in range(3)) for i in range(3))


def _unit(x, y, z):
    return ((1, x, z), (0, 1, y), (0, 0, 1))


def _matrix_ball_sizes(n_max):
    gens = [_unit(1, 0, 0), _unit(0, 1, 0), _unit(0, 0, 1),
            _unit(-1, 0, 0), _unit(0, -1, 0), _unit(0, 0, -1)]
    e = _unit(0, 0, 0)
    seen = {e}
    frontier = [e]
    sizes = [1]
    for _ in range(n_max):
        nxt = []
        for g in frontier:
            for s in gens:
                h = _matmul(g, s)
                if h not in seen:
                    seen.add(h)
                    nxt.append(h)
        frontier = nxt
        sizes.append(len(seen))
    return sizes


def test_ball_examples():
    H = gm.heisenberg()
    assert gm.ball(H, 1).sizes() == [1, 7]
    assert gm.ball(H, 5).sizes() == _matrix_ball_sizes(5)
    assert gm.ball(gm.bs12(), 0).sizes() == [1]
    assert gm.ball(gm.free_group(2), 6).sizes() == [2 * 3 ** n - 1 for n in range(7)]


def test_budget_refused():
    with pytest.raises(gm.BudgetExceeded):
        gm.ball(gm.free_group(3), 10, budget=1000)


def test_heisenberg_center():
    H = gm.heisenberg()
    c4 = H.word("a^2*b^2*a^-2*b^-2")
    assert c4 == (0, 0, 4)
    t = gm.subgroup_distortion(H, gm.center(H), 10)
    v = t.values()
    assert v[8] >= 4
    assert all(a <= b for a, b in zip(v, v[1:]))
    for n in range(6, 11):
        assert Fraction(1, 16) <= Fraction(v[n], n * n) <= 1


def test_bs_exponential_witness():
    B = gm.bs12()
    ab = B.word("a*b*a^-1")
    assert ab == B.word("b^2")
    t = gm.subgroup_distortion(B, gm.b_cyclic(B), 11).values()
    for k in range(6):
        assert t[2 * k + 1] >= 2 ** k
        conj = B.mul(B.mul(B.power(B.word("a"), k), B.word("b")), B.power(B.word("a"), -k))
        assert conj == B.power(B.word("b"), 2 ** k)


def test_whole_and_trivial():
    F = gm.free_group(2)
    assert gm.subgroup_distortion(F, None, 5).values() == list(range(6))
    assert gm.subgroup_distortion(F, gm.trivial(F), 4).values() == [0] * 5


def test_action_machine():
    f = gm.action_distortion(20)
    assert f[0] == 1 and f[3] == 16 and f[4] == 17
    for n in (4, 16):
        assert f[n - 1] >= n * n
    for m in range(5, 16):
        assert f[m - 1] == f[3] + m - 4
    assert gm.superadditivity_violations(f[:16])
    assert gm.action_step(3, "b") == 16 and gm.action_step(2, "b") == 0
    assert gm.action_distortion(14, start_level=0)[13] == 256


def test_bridge():
    H = gm.heisenberg()
    t = gm.subgroup_distortion(H, gm.center(H), 4)
    out, check = gm.group_algebra_bridge(t, H, gm.center(H), check_n=3)
    assert out.values() == t.values()
    agree, direct = check
    assert agree
    F = gm.free_group(2)
    tr = gm.subgroup_distortion(F, gm.trivial(F), 3)
    out, check = gm.group_algebra_bridge(tr, F, gm.trivial(F), check_n=2)
    assert out.values() == [0] * 4
    assert check[0]


def test_custom_subgroup_matches_named():
    H = gm.heisenberg()
    a = gm.subgroup_distortion(H, gm.custom(H, "c", 8), 8).values()
    b = gm.subgroup_distortion(H, gm.center(H), 8).values()
    assert a == b
    B = gm.bs12()
    a = gm.subgroup_distortion(B, gm.custom(B, "b", 9), 9).values()
    assert a == gm.subgroup_distortion(B, gm.b_cyclic(B), 9).values()


def test_selector_errors():
    with pytest.raises(ValueError):
        gm.subgroup_selector(gm.bs12(), "center", 3)
    with pytest.raises(ValueError):
        gm.model_by_name("nope")


def _elements(model, rng, n):
    out = []
    steps = model.steps()
    for _ in range(n):
        g = model.identity
        for _ in range(rng.randrange(6)):
            g = model.mul(g, rng.choice(steps))
        out.append(g)
    return out


@pytest.mark.parametrize("model", [gm.heisenberg(), gm.bs12(), gm.free_group(2)], ids=lambda m: m.name)
def test_model_axioms(model):
    rng = random.Random(3)
    els = _elements(model, rng, 30)
    for g in els:
        assert model.mul(g, model.identity) == g == model.mul(model.identity, g)
        assert model.key(model.mul(g, model.inverse(g))) == model.key(model.identity)
    for _ in range(60):
        a, b, c = rng.sample(els, 3)
        assert model.key(model.mul(model.mul(a, b), c)) == model.key(model.mul(a, model.mul(b, c)))


@pytest.mark.parametrize("model", [gm.heisenberg(), gm.bs12(), gm.free_group(2)], ids=lambda m: m.name)
def test_radius_is_word_length(model):
    # meet in the middle: g has length <= r iff g = u*v with |u| <= ceil(r/2), |v| <= floor(r/2)
    B = gm.ball(model, 6)
    small = gm.ball(model, 3)
    rng = random.Random(5)
    keys = list(B.radius)
    for k in rng.sample(keys, min(40, len(keys))):
        g = B.elements[k]
        r = B.radius[k]
        def reach(L):
            a, b = (L + 1) // 2, L // 2
            for ku, ru in small.radius.items():
                if ru > a:
                    continue
                v = model.mul(model.inverse(small.elements[ku]), g)
                kv = model.key(v)
                if kv in small.radius and small.radius[kv] <= b:
                    return True
            return False
        assert reach(r)
        if r > 0:
            assert not reach(r - 1)


@given(st.integers(-20, 20), st.integers(-20, 20))
def test_bs_matches_affine_maps(e, m):
    B = gm.bs12()
    g = B.power(B.word("a"), e)
    g = B.mul(g, B.power(B.word("b"), m))
    t = Fraction(3, 7)
    assert Fraction(2) ** e * t + Fraction(2) ** e * m == g[1] + Fraction(2) ** g[0] * t

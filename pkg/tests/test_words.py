from itertools import product

from hypothesis import given, strategies as st

from filtdist.words import (Alphabet, shortlex_cmp, shirshov_cmp, is_regular, overlaps, Overlap,
                            nonoverlap_check, gen_nonoverlap_family, count_family, regular_words,
                            cfl_factorization, shortlex_key)

XY = Alphabet("xy")      # x < y
YX = Alphabet("yx")      # y < x: x is the largest letter


def w(al, s):
    return al.parse(s)


def words_upto(k, n):
    for L in range(n + 1):
        yield from product(range(k), repeat=L)


def test_shortlex_examples():
    assert shortlex_cmp(w(XY, "x"), w(XY, "xy")) == -1
    assert shortlex_cmp((), (0,)) == -1
    assert shortlex_cmp(w(XY, "xy"), w(XY, "yx")) == -1


def test_shirshov_examples():
    assert shirshov_cmp(w(YX, "x"), w(YX, "xy")) == 1
    assert shirshov_cmp(w(YX, "xy"), w(YX, "xy")) == 0
    assert shirshov_cmp(w(YX, "xyy"), w(YX, "xyx")) == -1


def test_regular_examples():
    assert is_regular(w(YX, "x"))
    assert is_regular(w(YX, "xy"))
    assert not is_regular(w(YX, "xx"))


def test_overlaps_examples():
    rec = overlaps(w(XY, "xyx"), w(XY, "yxy"))
    assert rec == [Overlap("intersection", w(XY, "xyxy"), w(XY, "x"), w(XY, "y"))]
    assert overlaps(w(XY, "xx"), w(XY, "yy")) == []
    rec = overlaps(w(XY, "xyxy"), w(XY, "xy"))
    inc = [r for r in rec if r.kind == "inclusion"]
    assert [(r.left, r.right) for r in inc] == [((), w(XY, "xy")), (w(XY, "xy"), ())]


def test_nonoverlap_examples():
    M = Alphabet("xyz")
    assert nonoverlap_check([w(M, "xz"), w(M, "xyz"), w(M, "xyyz")])[0]
    assert not nonoverlap_check([w(XY, "xy"), w(XY, "yx")])[0]
    assert not nonoverlap_check([w(XY, "x"), w(XY, "xx")])[0]


def test_families():
    M = Alphabet("xyz")
    assert gen_nonoverlap_family("malcev", 4) == [w(M, "xz"), w(M, "xyz"), w(M, "xyyz")]
    assert gen_nonoverlap_family("lie_wings", 8) == [w(XY, "xxxyxyyy")]
    assert gen_nonoverlap_family("assoc_wings", 8) == [w(XY, "xxxyxyyy")]
    assert count_family("malcev", 3) == 1
    assert count_family("malcev", 1) == 0


def _wings_oracle(n):
    # x^3 y u x y^3 with no x^3 or y^3 anywhere except the two ends
    x, y = 0, 1
    cnt = 0
    for u in product((x, y), repeat=n - 8):
        s = (x,) * 3 + (y,) + u + (x,) + (y,) * 3
        core = s[1:-1]
        if any(core[i] == core[i + 1] == core[i + 2] for i in range(len(core) - 2)):
            continue
        cnt += 1
    return cnt


def test_count_family_wings_oracle():
    for n in range(8, 15):
        assert count_family("assoc_wings", n) == _wings_oracle(n)
        fam = gen_nonoverlap_family("assoc_wings", n)
        assert sum(1 for m in fam if len(m) == n) == _wings_oracle(n)


def test_shortlex_semigroup_order():
    W = list(words_upto(2, 4))
    for u in W[:31]:
        for v in W[:31]:
            if shortlex_cmp(u, v) < 0:
                for x in W[:7]:
                    assert shortlex_cmp(x + u, x + v) < 0
                    assert shortlex_cmp(u + x, v + x) < 0


def test_shirshov_equal_length_is_lex():
    for L in range(1, 5):
        ws = list(product(range(2), repeat=L))
        for u in ws:
            for v in ws:
                assert shirshov_cmp(u, v) == (u > v) - (u < v)


def _cyclic_regular(u):
    # strictly greater than every other cyclic shift under letterwise comparison
    shifts = [u[i:] + u[:i] for i in range(1, len(u))]
    return all(shirshov_cmp(u, s) == 1 for s in shifts)


def test_regular_vs_cyclic_bruteforce():
    for L in range(1, 9):
        for u in product(range(2), repeat=L):
            assert is_regular(u) == _cyclic_regular(u)


def test_unique_regular_in_aperiodic_classes():
    for L in range(1, 9):
        seen = set()
        for u in product(range(2), repeat=L):
            cls = frozenset(u[i:] + u[:i] for i in range(L))
            if cls in seen:
                continue
            seen.add(cls)
            aperiodic = len(cls) == L
            assert (sum(is_regular(v) for v in cls) == 1) == aperiodic
            if not aperiodic:
                assert not any(is_regular(v) for v in cls)


def _mobius(n):
    m, k, p = 1, n, 2
    while p * p <= k:
        if k % p == 0:
            k //= p
            if k % p == 0:
                return 0
            m = -m
        p += 1
    return -m if k > 1 else m


def test_witt_count():
    for k in (2, 3):
        for n in range(1, 9 if k == 2 else 7):
            witt = sum(_mobius(d) * k ** (n // d) for d in range(1, n + 1) if n % d == 0) // n
            assert len(regular_words(k, n)) == witt


def test_cfl_factors_are_regular_and_multiply_back():
    for u in words_upto(2, 6):
        if not u:
            continue
        fs = cfl_factorization(u)
        assert sum(fs, ()) == u
        assert all(is_regular(f) for f in fs)
        assert all(shirshov_cmp(a, b) <= 0 for a, b in zip(fs, fs[1:]))


def test_families_pass_nonoverlap():
    for kind in ("malcev", "assoc_wings", "lie_wings"):
        assert nonoverlap_check(gen_nonoverlap_family(kind, 13))[0]


def _brute_overlaps(u, v):
    out = set()
    for k in range(1, min(len(u), len(v))):
        if u[-k:] == v[:k]:
            out.add(("intersection", u + v[k:]))
    for i in range(len(u) - len(v) + 1):
        if u[i:i + len(v)] == v:
            out.add(("inclusion", i))
    return out


wd = st.lists(st.integers(0, 1), min_size=1, max_size=6).map(tuple)


@given(wd, wd)
def test_overlaps_bruteforce(u, v):
    got = set()
    for r in overlaps(u, v):
        if r.kind == "intersection":
            assert r.w == u + r.right == r.left + v
            got.add(("intersection", r.w))
        else:
            assert r.left + v + r.right == u
            got.add(("inclusion", len(r.left)))
    assert got == _brute_overlaps(u, v)


@given(wd)
def test_parse_format_roundtrip(u):
    assert XY.parse(XY.format(u)) == u
    assert shortlex_key(u) == (len(u), u)

from itertools import product

import pytest
from hypothesis import given, strategies as st

from filtdist.exactalg import Field, Coords, Subspace
from filtdist.words import Alphabet, Overlap, shortlex_key
from filtdist.ncpoly import (NcPoly, Presentation, gs_complete, reduce, normal_words, ideal_member,
                             composition_intersection, composition_inclusion, compositions,
                             parse_poly, UnverifiedDegreeError, commutative_relations)

Q = Field.rational()
XY = Alphabet("xy")


def P(s):
    return parse_poly(s, XY, Q)


def W(s):
    return XY.parse(s)


def test_leading_word():
    assert P("x + y").leading_word() == W("y")
    assert P("x*y - y*x").leading_word() == W("yx")
    assert P("3*x*y*x + x^2*y^2").leading_word() == W("xxyy")


def test_reduce_examples():
    assert reduce(P("x*y"), [P("x*y - 1")]) == P("1")
    assert reduce(P("y*x"), [P("x*y - 1")]) == P("y*x")
    # yx -> xy straightens xyxy to x^2 y^2
    assert reduce(P("x*y*x*y"), [P("y*x - x*y")]) == P("x^2*y^2")


def test_composition_intersection_examples():
    f = P("x^2 - y")
    assert composition_intersection(f, f, Overlap("intersection", W("xxx"), W("x"), W("x"))) == P("x*y - y*x")
    f, g = P("x*y - 1"), P("y*x - 1")
    assert not composition_intersection(f, g, Overlap("intersection", W("xyx"), W("x"), W("x")))
    f, g = P("x*y - y"), P("y^2 - y")
    assert composition_intersection(f, g, Overlap("intersection", W("xyy"), W("x"), W("y"))) == P("x*y - y^2")


def test_composition_inclusion_examples():
    # leading word of y - x is y
    f, g = P("x*y*x - x"), P("y - x")
    assert composition_inclusion(f, g, Overlap("inclusion", W("xyx"), W("x"), W("x"))) == P("x^3 - x")
    assert not composition_inclusion(f, f, Overlap("inclusion", W("xyx"), (), ()))
    # over the alphabet y < x the leading word of x - y is x
    YX = Alphabet("yx")
    f, g = parse_poly("x^2 - 1", YX, Q), parse_poly("x - y", YX, Q)
    r = composition_inclusion(f, g, Overlap("inclusion", YX.parse("xx"), (), YX.parse("x")))
    assert r == parse_poly("y*x - 1", YX, Q)


def test_gs_examples():
    G = gs_complete(Presentation(Q, XY, [P("x*y - y*x")]), 6)
    assert G.closed and G.elements == [P("y*x - x*y")]
    G = gs_complete(Presentation(Q, XY, [P("x*y - 1"), P("y*x - 1")]), 4)
    assert G.closed and sorted(G.leading_words()) == [W("xy"), W("yx")]
    G = gs_complete(Presentation(Q, XY, []), 4)
    assert G.closed and G.elements == []


def test_normal_words_examples():
    G = gs_complete(Presentation(Q, XY, [P("x*y - y*x")]), 6)
    assert normal_words(G, 2) == [(), W("x"), W("y"), W("xx"), W("xy"), W("yy")]
    G0 = gs_complete(Presentation(Q, XY, []), 4)
    assert len(normal_words(G0, 2)) == 7
    G1 = gs_complete(Presentation(Q, XY, [P("x")]), 4)
    assert normal_words(G1, 3) == [(), W("y"), W("yy"), W("yyy")]


def test_ideal_member_examples():
    G = gs_complete(Presentation(Q, XY, [P("x*y - y*x")]), 6)
    assert ideal_member(P("x*y*x*y - y*x*y*x"), G)
    assert not ideal_member(P("x"), G)
    assert ideal_member(NcPoly.zero(Q), G)


def test_unverified_degree_refused():
    G = gs_complete(Presentation(Q, XY, [P("x^2*y - y*x^2 - y")]), 4)
    if not G.closed:
        with pytest.raises(UnverifiedDegreeError):
            normal_words(G, G.verified_degree + 1)
    with pytest.raises(UnverifiedDegreeError):
        gs_complete(Presentation(Q, XY, [P("x^5")]), 3)


def test_commutative_relations():
    rels = commutative_relations(Q, Alphabet("xyz"))
    assert len(rels) == 3
    G = gs_complete(Presentation(Q, Alphabet("xyz"), rels), 6)
    assert [len([w for w in normal_words(G, 3) if len(w) == d]) for d in range(4)] == [1, 3, 6, 10]


def _sandwich_codims(rels, n):
    """Normal-form count by brute-force spanning of u*r*v (homogeneous rels)."""
    C = Coords(Q)
    S = Subspace(C)
    for r in rels:
        for a in range(n - r.degree + 1):
            for b in range(n - r.degree - a + 1):
                for u in product(range(2), repeat=a):
                    for v in product(range(2), repeat=b):
                        S.insert(dict(r.sandwich(u, v).terms))
    total = sum(2 ** k for k in range(n + 1))
    return total - S.dim


coef = st.integers(-2, 2)


@st.composite
def homogeneous_rels(draw):
    rels = []
    for _ in range(draw(st.integers(1, 3))):
        d = draw(st.integers(2, 3))
        terms = {w: draw(coef) for w in draw(st.lists(st.tuples(*[st.integers(0, 1)] * d),
                                                      min_size=1, max_size=3))}
        p = NcPoly(Q, terms)
        if p:
            rels.append(p)
    return rels


@given(homogeneous_rels())
def test_normal_words_match_spanning_oracle(rels):
    if not rels:
        return
    n = 5
    G = gs_complete(Presentation(Q, XY, rels), n)
    assert len(normal_words(G, n)) == _sandwich_codims(rels, n)


@given(homogeneous_rels(), st.randoms(use_true_random=False))
def test_basis_independent_of_order(rels, rnd):
    if not rels:
        return
    a = gs_complete(Presentation(Q, XY, rels), 5)
    shuffled = list(rels)
    rnd.shuffle(shuffled)
    b = gs_complete(Presentation(Q, XY, shuffled), 5)
    assert sorted(a.leading_words()) == sorted(b.leading_words())


poly = st.dictionaries(st.lists(st.integers(0, 1), max_size=4).map(tuple), coef, max_size=5).map(
    lambda t: NcPoly(Q, t))


@given(poly)
def test_reduce_idempotent(p):
    G = gs_complete(Presentation(Q, XY, [P("y*x - x*y - x"), P("y^2 - 1")]), 6)
    r = reduce(p, G)
    assert reduce(r, G) == r
    assert not reduce(r - p, G)


@given(poly, poly)
def test_compositions_drop_below_ambient_word(a, b):
    if not a or not b:
        return
    for rec, c in compositions(a, b):
        if c:
            assert shortlex_key(c.leading_word()) < shortlex_key(rec.w)


@given(poly)
def test_poly_parse_format_roundtrip(p):
    assert parse_poly(p.format(XY), XY, Q) == p

"""Embedding and filtration builders with exact cross-checks.

Every builder works on a finite truncation and records its depth; the
checks only speak about the range they actually computed.

>>> from filtdist.exactalg import Field
>>> F = Field.rational()
>>> rep = malcev_embedding(polynomial_algebra(F), ["t"], ["t^%d" % i for i in range(1, 9)], depth=8)
>>> rep.checks["injective"]
True
"""

from dataclasses import dataclass, field as dc_field
from itertools import product

from .exactalg import Coords, Field, Subspace, vec_axpy
from .words import (Alphabet, shortlex_key, gen_nonoverlap_family, count_family,
                    nonoverlap_check, _family_letters)
from .ncpoly import NcPoly, Presentation, gs_complete, reduce, normal_words, UnverifiedDegreeError
from .filtration import (AssocAmbient, degree_filtration, weighted_filtration, standard_filtration,
                         restrict_filtration, distortion)


class ConstructionError(ValueError):
    pass


@dataclass
class EmbeddingReport:
    presentation: Presentation
    images: dict
    depth: int
    table: object = None
    checks: dict = dc_field(default_factory=dict)

    def report_lines(self):
        """JSON-serialisable check records, one per entry."""
        out = []
        for k in sorted(self.checks):
            v = self.checks[k]
            out.append({"check": k, "value": v if isinstance(v, (bool, int, str, list)) else repr(v)})
        return out


def polynomial_algebra(field, letter="t"):
    return AssocAmbient.free(field, Alphabet(letter))


def truncated_algebra(field, relations, max_deg, letters="t"):
    """Quotient of a free algebra, e.g. F[t]/(t^2) via relations=["t^2"]."""
    from .ncpoly import parse_poly
    al = Alphabet(letters)
    return AssocAmbient.from_relations(field, al, [parse_poly(r, al, field) for r in relations], max_deg)


# ---- kernel of ν on products of at most two family words

def _kernel_relations(field, B, images, max_len):
    """Reduced basis of ker ν on span{m, m·m' : |·| <= max_len}, as NcPolys.

    ``images`` maps family words to B-coordinates (zero dict allowed).
    """
    inner = B.coords.key
    key = lambda lb: (0, shortlex_key(lb[1])) if lb[0] == 0 else (1, inner(lb[1]))
    C = Coords(field, key, name="kernel")
    S = Subspace(C)
    words = sorted(images, key=shortlex_key)
    prods = [((), B.one())] if B.unital else []
    prods += [(m, images[m]) for m in words if len(m) <= max_len]
    for m in words:
        for m2 in words:
            if len(m) + len(m2) <= max_len:
                prods.append((m + m2, B.mul(images[m], images[m2]) if images[m] and images[m2] else {}))
    for w, val in prods:
        v = {(1, k): c for k, c in val.items()}
        v[(0, w)] = field.one
        S.insert(v)
    rels = []
    for p in S.pivots():
        if p[0] == 0:
            rels.append(NcPoly(field, {lb[1]: c for lb, c in S.rows[p].items()}))
    return rels


def _prune(rels):
    """Drop relations that rewrite to zero modulo the ones kept before them."""
    kept = []
    for r in sorted(rels, key=lambda r: shortlex_key(r.leading_word())):
        if not kept or reduce(r, kept):
            kept.append(r.monic())
    return kept


def _inject_check(field, B, A, pairs):
    """rank(b) == rank(image) == rank(joint) over the listed (b, image) pairs."""
    inner_b, inner_a = B.coords.key, A.coords.key
    key = lambda lb: (lb[0], inner_b(lb[1]) if lb[0] == 1 else inner_a(lb[1]))
    SB, SA = Subspace(B.coords), Subspace(A.coords)
    SJ = Subspace(Coords(field, key, name="joint"))
    for b, a in pairs:
        SB.insert(b)
        SA.insert(a)
        j = {(1, k): c for k, c in b.items()}
        j.update({(2, k): c for k, c in a.items()})
        SJ.insert(j)
    return SB.dim == SA.dim == SJ.dim, (SB.dim, SA.dim, SJ.dim)


# ---- Malcev xy^i z embedding

MALCEV_ALPHABET = Alphabet("xyz")


def malcev_embedding(B, S, enum, depth, n_max=None, cap=None, window=2):
    """b_0 = 1, b_i = enum[i-1] sent to x y^i z; relations are ker ν on words of
    length <= ``depth``.  Family words past the enumeration go to 0."""
    field = B.field
    if depth < 2:
        raise ConstructionError("depth must be >= 2")
    Sc = [B.coords_of(s) for s in S]
    bs = [B.one()] + [B.coords_of(b) for b in enum]
    tower = degree_filtration(B, Sc, len(enum))
    for i in range(1, len(bs)):
        if not tower.levels[i].contains(bs[i]):
            raise ConstructionError(f"b_{i} has degree above {i}")
    gens_idx = []
    for s in Sc:
        hit = [i for i in range(1, len(bs)) if bs[i] == s]
        if not hit:
            raise ConstructionError("every generator must occur in the enumeration")
        gens_idx.append(hit[0])
    x, y, z = 0, 1, 2
    word = lambda i: (x,) + (y,) * i + (z,)
    N = len(bs) - 1
    images = {word(i): bs[i] if i <= N else {} for i in range(0, depth - 1)}
    rels = _prune(_kernel_relations(field, B, images, depth))
    P = Presentation(field, MALCEV_ALPHABET, rels, unital=True)
    rep = EmbeddingReport(P, {f"b{i}": NcPoly.word(field, word(i)) for i in range(depth - 1)}, depth)
    G = gs_complete(P, depth)
    A = AssocAmbient(G)
    rep.checks["gs_closed"] = G.closed
    ok, ranks = _inject_check(field, B, A, [(bs[i], A.coords_of(NcPoly.word(field, word(i)).terms))
                                          for i in range(min(N, depth - 2) + 1)])
    rep.checks["injective"] = ok
    rep.checks["ranks"] = list(ranks)
    if not gens_idx:
        rep.checks["undistorted"] = True
        return rep
    # distortion of B = alg(x y^i z : b_i in S) inside A; keep every product
    # in the verified range: |normal form| + |generator| <= depth
    g_len = max(i + 2 for i in gens_idx)
    if cap is None:
        cap = max(1, (depth - 2 * g_len) // max(1, max(gens_idx)) + 1)
    if n_max is None:
        n_max = max(1, min(cap - window, depth - 2))
    gens = [{word(i): field.one} for i in gens_idx]
    try:
        R = restrict_filtration(standard_filtration(A, n_max), gens, cap, window)
        rep.table = distortion(R)
        vals = [(r.n, r.value, r.status) for r in rep.table.records]
        rep.checks["undistorted"] = all(v <= n for n, v, st in vals if st == "stabilized")
        rep.checks["dist"] = [v for _, v, _ in vals]
        rep.checks["status"] = [st for _, _, st in vals]
    except UnverifiedDegreeError as e:
        rep.checks["undistorted"] = f"unverified: {e}"
    return rep


# ---- Umirbaev pair

UMIRBAEV_ALPHABET = Alphabet("xyz")


def umirbaev_pair(I_gens, field=None):
    """{z f_i} ∪ {x, y, zx - xz, zy - yz} as NcPolys over x, y, z."""
    if not I_gens:
        raise ConstructionError("need at least one ideal generator")
    field = field or I_gens[0].field
    x, y, z = 0, 1, 2
    out = []
    for f in I_gens:
        if not f:
            raise ConstructionError("zero ideal generator")
        out.append(f.lmul((z,)))
    one = field.one
    out += [NcPoly(field, {(x,): one}), NcPoly(field, {(y,): one}),
            NcPoly(field, {(z, x): one, (x, z): -one}), NcPoly(field, {(z, y): one, (y, z): -one})]
    return out


@dataclass
class UmirbaevReport:
    max_deg: int
    cap: int
    zf_dim: int
    ideal_dim: int
    equal: bool
    stabilized: bool
    counterexamples: list


def umirbaev_check(I_gens, max_deg=4, cap=8, window=3):
    """Compare {f : zf ∈ B ∩ A_{d+1}} with I ∩ F_{<=d} as subspaces of A(x,y)."""
    field = I_gens[0].field
    A = AssocAmbient.free(field, UMIRBAEV_ALPHABET)
    N = max_deg + 1
    gens = [g.terms for g in umirbaev_pair(I_gens, field)]
    R = restrict_filtration(standard_filtration(A, N), gens, cap, window)
    W = R.levels[N]
    z = 2
    zpart = W.restrict(lambda w: len(w) >= 1 and w[0] == z and z not in w[1:])
    V = Subspace(A.coords, ({w[1:]: c for w, c in r.items()} for r in zpart.rows.values()))
    G = gs_complete(Presentation(field, Alphabet("xy"), list(I_gens)), max(max_deg, max(f.degree for f in I_gens)))
    Iv = Subspace(A.coords)
    for n in range(max_deg + 1):
        for w in product((0, 1), repeat=n):
            r = reduce(NcPoly.word(field, w), G)
            d = {w: field.one}
            vec_axpy(d, -field.one, r.terms)
            if any(d.values()):
                Iv.insert(d)
    bad = [r for r in V.rows.values() if not Iv.contains(r)]
    bad += [r for r in Iv.rows.values() if not V.contains(r)]
    return UmirbaevReport(max_deg, cap, V.dim, Iv.dim, not bad,
                          R.status[N] == "stabilized", bad)


def umirbaev_member_by_cap(I_gens, f, cap):
    """[zf ∈ B_M for M = 0..cap] using the degree tower of the pair."""
    field = I_gens[0].field
    A = AssocAmbient.free(field, UMIRBAEV_ALPHABET)
    zf = f.lmul((2,))
    gens = [g.terms for g in umirbaev_pair(I_gens, field)]
    beta = degree_filtration(A, gens, cap, trunc=zf.degree)
    return [lv.contains(zf.terms) for lv in beta.levels]


# ---- Mikhailova pair

def _pair_key(lb):
    side, w = lb
    return (len(w), side, w)


class DirectProductAmbient:
    """F(X) × F(X) with componentwise product; labels (side, word)."""

    kind = "product"
    unital = True
    graded = True

    def __init__(self, field, alphabet):
        self.field = field
        self.alphabet = alphabet
        self.coords = Coords(field, _pair_key, name=f"product:{id(self)}")

    def degree(self, lb):
        return len(lb[1])

    def coords_of(self, x):
        if isinstance(x, dict):
            return dict(x)
        from .ncpoly import parse_poly
        out = {}
        for side, p in enumerate(x):
            if p is None or p == 0:
                continue
            if isinstance(p, str):
                p = parse_poly(p, self.alphabet, self.field)
            for w, c in p.terms.items():
                out[(side, w)] = c
        return out

    def one(self):
        return {(0, ()): self.field.one, (1, ()): self.field.one}

    def mul(self, u, v, trunc=None):
        out = {}
        for (s, a), c in u.items():
            for (t, b), d in v.items():
                if s != t:
                    continue
                w = a + b
                if trunc is not None and len(w) > trunc:
                    continue
                vec_axpy(out, c * d, {(s, w): self.field.one})
        return out

    def labels_upto(self, n):
        k = len(self.alphabet)
        out = []
        for m in range(n + 1):
            for w in product(range(k), repeat=m):
                out += [(0, w), (1, w)]
        return out

    def format_label(self, lb):
        return f"{'LR'[lb[0]]}:{self.alphabet.format(lb[1])}"


def mikhailova_pair(R, alphabet, field):
    """{(r, 0) : r ∈ R} ∪ {(x, x) : x ∈ X} as direct-product coordinates."""
    D = DirectProductAmbient(field, alphabet)
    gens = [D.coords_of((r, None)) for r in R]
    for a in range(len(alphabet)):
        gens.append({(0, (a,)): field.one, (1, (a,)): field.one})
    return D, gens


@dataclass
class MikhailovaReport:
    n_max: int
    cap: int
    kernel_dims: list
    ideal_dims: list
    projection_ok: bool
    status: list

    @property
    def ok(self):
        return self.projection_ok and all(
            k == i for k, i, s in zip(self.kernel_dims, self.ideal_dims, self.status) if s == "stabilized")


def mikhailova_check(R, alphabet, field, n_max=4, cap=None, window=2):
    D, gens = mikhailova_pair(R, alphabet, field)
    cap = cap if cap is not None else n_max + window
    Rt = restrict_filtration(standard_filtration(D, n_max), gens, cap, window)
    k = len(alphabet)
    if R:
        G = gs_complete(Presentation(field, alphabet, list(R)), max(n_max, max(r.degree for r in R)))
    kernel_dims, ideal_dims = [], []
    for n in range(n_max + 1):
        left = Rt.levels[n].restrict(lambda lb: lb[0] == 0)
        kernel_dims.append(left.dim)
        if R:
            nw = len([w for w in normal_words(G, n)])
            ideal_dims.append(sum(k ** m for m in range(n + 1)) - nw)
        else:
            ideal_dims.append(0)
    proj_ok = True
    for n in range(n_max + 1):
        lv = Rt.beta.levels[n]
        right = Subspace(D.coords, ({lb: c for lb, c in r.items() if lb[0] == 1}
                                    for r in lv.rows.values()))
        right = Subspace(D.coords, (r for r in right.rows.values() if r))
        if right.dim != sum(k ** m for m in range(n + 1)):
            proj_ok = False
    return MikhailovaReport(n_max, cap, kernel_dims, ideal_dims, proj_ok, Rt.status)


def mikhailova_member_by_cap(R, alphabet, field, f, cap):
    D, gens = mikhailova_pair(R, alphabet, field)
    v = D.coords_of((f, None))
    beta = degree_filtration(D, gens, cap, trunc=max(len(lb[1]) for lb in v))
    return [lv.contains(v) for lv in beta.levels]


# ---- λ-weighted generating sets

@dataclass
class WeightedGenSet:
    ambient: object
    items: list          # (coords, weight)
    mode: str
    selected: list = dc_field(default_factory=list)   # (label, degree, floor)

    def tower(self, n_max, trunc=None):
        return weighted_filtration(self.ambient, self.items, n_max, self.mode, trunc)


def floor_power(d, lam):
    """⌊d^λ⌋ for rational λ = p/q, exactly."""
    from fractions import Fraction
    lam = Fraction(lam)
    p, q = lam.numerator, lam.denominator
    target = d ** p
    lo, hi = 0, max(1, d) + 1
    while lo < hi:
        mid = (lo + hi + 1) // 2
        if mid ** q <= target:
            lo = mid
        else:
            hi = mid - 1
    return lo


def mode_degree(w, mode):
    """Length of a word, or its operation count (letters cost nothing)."""
    return len(w) if mode == "length" else max(len(w) - 1, 0)


def lambda_weights(A, lam, count, mode="operation", max_deg=64):
    from fractions import Fraction
    lam = Fraction(lam)
    if not 0 < lam < 1:
        raise ConstructionError("need 0 < λ < 1")
    if mode not in ("operation", "length"):
        raise ConstructionError(f"unknown mode {mode!r}")
    base = 0 if mode == "operation" else 1
    items = [({(a,): A.field.one}, base) for a in range(len(A.alphabet))]
    seen, selected = set(), []
    shift = 0 if mode == "length" else 1
    d = 1
    while len(selected) < count and d <= max_deg:
        fl = floor_power(d, lam)
        if fl not in seen:
            cands = [w for w in A.labels_upto(d + shift) if len(w) == d + shift]
            if cands:
                w = cands[0]
                seen.add(fl)
                selected.append((w, d, fl))
                items.append(({w: A.field.one}, fl + 1))
        d += 1
    if len(selected) < count:
        raise ConstructionError("not enough elements within the computed depth")
    return WeightedGenSet(A, items, mode, selected)


def lambda_lower_bound_check(ws, lam, n_max):
    """Every element of level n has degree d with ⌊d^λ⌋ <= n."""
    T = ws.tower(n_max)
    bad = []
    for n, lv in enumerate(T.levels):
        for p in lv.rows:
            if floor_power(mode_degree(p, ws.mode), lam) > n:
                bad.append((n, p))
    return bad


# ---- β^λ family on F[x]

def factorials(n):
    out, f = [], 1
    for i in range(1, n + 1):
        f *= i
        out.append(f)
    return out


_LINE = {}


def line_algebra(field):
    """Shared F[x], so towers built separately stay comparable."""
    if field not in _LINE:
        _LINE[field] = AssocAmbient.free(field, Alphabet("x"))
    return _LINE[field]


def flambda_family(lam, d_seq=None, n_max=4, field=None):
    """{(x^{d_i} + λ x^{d_i - 1}, i)} on F[x], weighted length mode."""
    from fractions import Fraction
    field = field or Field.rational()
    d = list(d_seq) if d_seq is not None else factorials(n_max)
    if len(d) < n_max:
        raise ConstructionError("d sequence shorter than n_max")
    d = d[:n_max]
    if d[0] != 1 or any(a >= b for a, b in zip(d, d[1:])):
        raise ConstructionError("need increasing d with d_1 = 1")
    ratios = [Fraction(b, a) for a, b in zip(d, d[1:])]
    if any(r1 >= r2 for r1, r2 in zip(ratios, ratios[1:])):
        raise ConstructionError("ratios d_{n+1}/d_n must increase")
    lam = field(lam)
    if not lam:
        raise ConstructionError("λ must be nonzero")
    A = line_algebra(field)
    items = []
    for i, di in enumerate(d, 1):
        v = {(0,) * di: field.one}
        vec_axpy(v, lam, {(0,) * (di - 1): field.one})
        items.append((v, i))
    return WeightedGenSet(A, items, "length")


def beta_degree(ws, f, m_max):
    """Least m <= m_max with f in the weighted tower level m (None past it)."""
    T = ws.tower(m_max)
    v = ws.ambient.coords_of(f)
    for m, lv in enumerate(T.levels):
        if lv.contains(v):
            return m
    return None


def c_bound(d, n):
    """c_n = d_n / (d_{n-1}/(n-1)) for 1-based n >= 2."""
    from fractions import Fraction
    return Fraction(d[n - 1]) / Fraction(d[n - 2], n - 1)


# ---- tame tower into a 2-generator degree filtration

def _first_words(kind, L, k, alphabet):
    """First k family words of length exactly L in shortlex order."""
    al, idx = _family_letters(kind, alphabet)
    if kind != "assoc_wings":
        ws = [w for w in gen_nonoverlap_family(kind, L, alphabet) if len(w) == L]
        return ws[:k]
    x, y = idx
    lo, hi = sorted((x, y))
    out = []
    if L < 8:
        return out
    k_mid = L - 8

    # lex-ordered backtracking over y·w·x with no run of length 3
    def rec(w, last, run):
        if len(out) == k:
            return
        if len(w) == k_mid:
            r = run + 1 if last == x else 1
            if r < 3:
                out.append((x,) * 3 + (y,) + tuple(w) + (x,) + (y,) * 3)
            return
        for a in (lo, hi):
            r = run + 1 if a == last else 1
            if r < 3:
                w.append(a)
                rec(w, a, r)
                w.pop()
    rec([], y, 1)
    return out


def least_constant(dims, kind="assoc_wings", c_max=64):
    for C in range(1, c_max + 1):
        if all(dims[n] <= count_family(kind, C * n) for n in range(1, len(dims))):
            return C
    raise ConstructionError("capacity check fails for every C <= %d" % c_max)


def tame_to_degree_embedding(beta, depth, C=None, kind="assoc_wings", trunc=None):
    """ν sends the first dim B_n family words of length Cn onto a basis of B_n."""
    B = beta.ambient
    field = B.field
    if depth > beta.n_max:
        raise ConstructionError("depth beyond the supplied tower")
    dims = beta.dims()[:depth + 1]
    if C is None:
        C = least_constant(dims, kind)
    elif not all(dims[n] <= count_family(kind, C * n) for n in range(1, depth + 1)):
        raise ConstructionError(f"capacity check fails for C = {C}")
    al = Alphabet("xy")
    images = {}
    for n in range(1, depth + 1):
        lv = beta.levels[n]
        basis = lv.basis() if isinstance(lv, Subspace) else [{w: field.one} for w in B.labels_upto(n)]
        words = _first_words(kind, C * n, len(basis), al)
        for w, b in zip(words, basis):
            images[w] = b
    # cross-check: span ν(products of family words of total length <= Cn) == B_n;
    # words outside ``images`` map to zero and kill every product they enter
    sel = sorted(images, key=shortlex_key)
    frontier = [((), B.one())]
    allp = list(frontier)
    while frontier:
        nxt = []
        for w, v in frontier:
            for m in sel:
                if len(w) + len(m) <= C * depth:
                    p = B.mul(v, images[m])
                    nxt.append((w + m, p))
        allp += nxt
        frontier = nxt
    levels_ok = []
    for n in range(depth + 1):
        S = Subspace(B.coords, (v for w, v in allp if len(w) <= C * n and v))
        lv = beta.levels[n]
        ok = S.dim == lv.dim and all(lv.contains(r) for r in S.rows.values())
        levels_ok.append(ok)
    T = trunc if trunc is not None else 2 * C
    zero_words = [w for w in gen_nonoverlap_family(kind, T, al) if w not in images]
    imgs = dict(images)
    imgs.update({w: {} for w in zero_words})
    rels = _kernel_relations(field, B, {w: v for w, v in imgs.items() if len(w) <= T}, T)
    P = Presentation(field, al, rels, unital=True)
    rep = EmbeddingReport(P, {al.format(w): NcPoly(field, {w: field.one}) for w in sel}, depth)
    rep.checks["C"] = C
    rep.checks["dims"] = dims
    rep.checks["levels_equal"] = levels_ok
    rep.checks["nonoverlapping"] = nonoverlap_check(sel + zero_words)[0]
    G = gs_complete(P, T)
    # completion adds no new leading words: the kernel set is already closed
    rep.checks["relations_closed"] = set(G.leading_words()) <= {r.leading_word() for r in rels}
    rep.checks["gs_closed"] = G.closed
    rep.checks["trunc"] = T
    return rep

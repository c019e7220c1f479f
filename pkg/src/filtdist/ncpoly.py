"""Noncommutative polynomials, rewriting and truncated Groebner–Shirshov completion.

Monomials are words (tuples of letter indices) ordered by shortlex.

>>> from filtdist.words import Alphabet
>>> from filtdist.exactalg import Field
>>> X = Alphabet("xy")
>>> F = Field.rational()
>>> r = NcPoly.parse("x*y - y*x", X, F)
>>> G = gs_complete(Presentation(F, X, [r]), 6)
>>> [g.format(X) for g in G.elements], G.closed
(['y*x - x*y'], True)
>>> reduce(NcPoly.parse("x*y*x*y", X, F), G.elements).format(X)
'x^2*y^2'
"""

from dataclasses import dataclass, field as dc_field
import heapq
import re

from .exactalg import Field
from .words import Alphabet, shortlex_key, overlaps


class UnverifiedDegreeError(ValueError):
    """A request needs degrees beyond what a truncated basis certifies."""


class NcPoly:
    __slots__ = ("field", "terms", "_lw")

    def __init__(self, field, terms=None):
        self.field = field
        t = {}
        if terms:
            for w, c in terms.items():
                c = field(c)
                if c:
                    t[tuple(w)] = c
        self.terms = t
        self._lw = None

    @classmethod
    def _raw(cls, field, terms):
        p = cls.__new__(cls)
        p.field = field
        p.terms = terms
        p._lw = None
        return p

    @classmethod
    def word(cls, field, w, c=1):
        return cls(field, {tuple(w): c})

    @classmethod
    def one(cls, field):
        return cls(field, {(): 1})

    @classmethod
    def zero(cls, field):
        return cls(field, {})

    @classmethod
    def parse(cls, text, alphabet, field):
        return parse_poly(text, alphabet, field)

    # --- basic queries
    def __bool__(self):
        return bool(self.terms)

    def __len__(self):
        return len(self.terms)

    def __eq__(self, o):
        if not isinstance(o, NcPoly):
            return NotImplemented
        return self.field == o.field and self.terms == o.terms

    def __hash__(self):
        return hash(frozenset(self.terms.items()))

    def leading_word(self):
        if not self.terms:
            raise ValueError("zero polynomial has no leading word")
        if self._lw is None:
            self._lw = max(self.terms, key=shortlex_key)
        return self._lw

    def leading_coeff(self):
        return self.terms[self.leading_word()]

    @property
    def degree(self):
        return max((len(w) for w in self.terms), default=-1)

    def is_homogeneous(self):
        return len({len(w) for w in self.terms}) <= 1

    def monic(self):
        c = self.leading_coeff()
        if c == 1:
            return self
        inv = 1 / c
        return NcPoly._raw(self.field, {w: inv * x for w, x in self.terms.items()})

    # --- arithmetic
    def _check(self, o):
        if self.field != o.field:
            from .exactalg import FieldMismatchError
            raise FieldMismatchError(f"{self.field!r} vs {o.field!r}")

    def __add__(self, o):
        self._check(o)
        t = dict(self.terms)
        for w, c in o.terms.items():
            y = t.get(w)
            if y is None:
                t[w] = c
            else:
                y = y + c
                if y:
                    t[w] = y
                else:
                    del t[w]
        return NcPoly._raw(self.field, t)

    def __neg__(self):
        return NcPoly._raw(self.field, {w: -c for w, c in self.terms.items()})

    def __sub__(self, o):
        return self + (-o)

    def scale(self, c):
        c = self.field(c)
        if not c:
            return NcPoly.zero(self.field)
        return NcPoly._raw(self.field, {w: c * x for w, x in self.terms.items()})

    def __mul__(self, o):
        if not isinstance(o, NcPoly):
            return self.scale(o)
        self._check(o)
        t = {}
        for u, a in self.terms.items():
            for v, b in o.terms.items():
                w = u + v
                y = t.get(w)
                c = a * b if y is None else y + a * b
                if c:
                    t[w] = c
                elif y is not None:
                    del t[w]
        return NcPoly._raw(self.field, t)

    def __rmul__(self, c):
        return self.scale(c)

    def lmul(self, a):
        """Left multiplication by a word."""
        a = tuple(a)
        return NcPoly._raw(self.field, {a + w: c for w, c in self.terms.items()})

    def rmul(self, b):
        b = tuple(b)
        return NcPoly._raw(self.field, {w + b: c for w, c in self.terms.items()})

    def sandwich(self, a, b):
        a, b = tuple(a), tuple(b)
        return NcPoly._raw(self.field, {a + w + b: c for w, c in self.terms.items()})

    def format(self, alphabet):
        return format_poly(self, alphabet)

    def __repr__(self):
        return f"NcPoly({self.terms!r})"


# ---- text grammar

def parse_poly(text, alphabet, field):
    """``term (('+'|'-') term)*`` with ``term := coeff ('*' word)? | word``."""
    src = text.strip()
    if not src:
        raise ValueError("empty polynomial")
    pos = 0
    terms = {}
    first = True
    while pos < len(src):
        m = re.compile(r"\s*([+-])?\s*").match(src, pos)
        sign = m.group(1)
        pos = m.end()
        if sign is None and not first:
            raise ValueError(f"expected '+' or '-' at column {pos + 1}: {src!r}")
        first = False
        m = re.compile(r"(\d+)(?:\s*/\s*(\d+))?").match(src, pos)
        coeff = 1
        wtext = None
        if m:
            num, den = int(m.group(1)), int(m.group(2) or 1)
            if den == 0:
                raise ValueError(f"zero denominator at column {pos + 1}")
            pos = m.end()
            m2 = re.compile(r"\s*\*\s*").match(src, pos)
            if m2:
                pos = m2.end()
            else:
                wtext = "1"
            from fractions import Fraction
            coeff = Fraction(num, den)
        if wtext is None:
            m = re.compile(r"[A-Za-z_][A-Za-z_0-9]*(?:\^\d+)?(?:\s*\*\s*[A-Za-z_][A-Za-z_0-9]*(?:\^\d+)?)*").match(src, pos)
            if not m:
                raise ValueError(f"expected a word at column {pos + 1}: {src!r}")
            wtext = m.group()
            pos = m.end()
        try:
            w = alphabet.parse(wtext.replace(" ", ""))
        except ValueError as e:
            raise ValueError(f"{e} (column {pos + 1})") from None
        c = field(coeff)
        if sign == "-":
            c = -c
        y = terms.get(w)
        terms[w] = c if y is None else y + c
    return NcPoly(field, terms)


def format_poly(p, alphabet):
    if not p.terms:
        return "0"
    out = []
    for w in sorted(p.terms, key=shortlex_key, reverse=True):
        c = p.terms[w]
        neg, mag = _split_sign(c)
        word = alphabet.format(w)
        if w == ():
            body = str(mag)
        elif mag == 1:
            body = word
        else:
            body = f"{mag}*{word}"
        if not out:
            out.append(("-" if neg else "") + body)
        else:
            out.append(("- " if neg else "+ ") + body)
    return " ".join(out)


def _split_sign(c):
    from .exactalg import Mod
    if isinstance(c, Mod):
        return False, c.v
    if c < 0:
        return True, -c
    return False, c


# ---- presentations and bases

@dataclass
class Presentation:
    field: Field
    alphabet: Alphabet
    relations: list
    unital: bool = True
    order: str = "shortlex"

    def __post_init__(self):
        self.relations = [r for r in self.relations]
        if any(not r for r in self.relations):
            raise ValueError("zero relation")

    def is_homogeneous(self):
        return all(r.is_homogeneous() for r in self.relations)


@dataclass
class GsBasis:
    field: Field
    alphabet: Alphabet
    elements: list
    verified_degree: int
    closed: bool
    homogeneous: bool = False
    _rules: dict = dc_field(default=None, repr=False, compare=False)

    def leading_words(self):
        return [g.leading_word() for g in self.elements]

    def rules(self):
        if self._rules is None:
            self._rules = _rules(self.elements)
        return self._rules

    def check_degree(self, n):
        if not self.closed and n > self.verified_degree:
            raise UnverifiedDegreeError(
                f"degree {n} exceeds verified degree {self.verified_degree}")


def free_basis(field, alphabet):
    return GsBasis(field, alphabet, [], verified_degree=10 ** 9, closed=True, homogeneous=True)


def leading_word(p):
    return p.leading_word()


# ---- reduction

class _Rules:
    __slots__ = ("tails", "lengths")

    def __init__(self, tails):
        self.tails = tails  # leading word -> {word: coeff} with lw ≡ tail
        self.lengths = sorted({len(w) for w in tails}, reverse=True)

    def site(self, w):
        """(i, lw) for the shortlex-largest leading word in w, leftmost occurrence."""
        tails = self.tails
        best = None
        for L in self.lengths:
            if L > len(w):
                continue
            for i in range(len(w) - L + 1):
                s = w[i:i + L]
                if s in tails and (best is None or s > best[1]):
                    best = (i, s)
            if best is not None:
                return best
        return None

    def __bool__(self):
        return bool(self.tails)


def _rules(G):
    if isinstance(G, GsBasis):
        return G.rules()
    if isinstance(G, _Rules):
        return G
    tails = {}
    for g in G:
        if g.leading_coeff() != 1:
            raise ValueError("reduction needs monic polynomials")
        lw = g.leading_word()
        tails[lw] = {w: -c for w, c in g.terms.items() if w != lw}
    return _Rules(tails)


def _heapkey(w):
    return (-len(w), tuple(-a for a in w))


def reduce_terms(terms, rules, field):
    """Fully reduce a term dict; returns a new term dict."""
    if not rules:
        return dict(terms)
    work = dict(terms)
    heap = [_heapkey(w) for w in work]
    heapq.heapify(heap)
    out = {}
    tails = rules.tails
    while heap:
        k = heapq.heappop(heap)
        w = tuple(-a for a in k[1])
        c = work.pop(w, None)
        if c is None:
            continue
        site = rules.site(w)
        if site is None:
            out[w] = c
            continue
        i, lw = site
        a, b = w[:i], w[i + len(lw):]
        for t, d in tails[lw].items():
            v = a + t + b
            y = work.get(v)
            if y is None:
                work[v] = c * d
                heapq.heappush(heap, _heapkey(v))
            else:
                y = y + c * d
                if y:
                    work[v] = y
                else:
                    del work[v]
    return out


def reduce(p, G):
    """Normal form of p modulo the monic set (or basis) G."""
    rules = _rules(G)
    return NcPoly._raw(p.field, reduce_terms(p.terms, rules, p.field))


def is_normal_word(w, rules):
    return rules.site(w) is None


# ---- compositions

def composition_intersection(f, g, rec):
    """f·right − left·g for w = lw(f)·right = left·lw(g)."""
    u, v = f.leading_word(), g.leading_word()
    if (rec.kind != "intersection" or u + rec.right != rec.w or rec.left + v != rec.w
            or not (len(u) + len(v) > len(rec.w)) or not rec.right or not rec.left):
        raise ValueError("invalid intersection record")
    return f.monic().rmul(rec.right) - g.monic().lmul(rec.left)


def composition_inclusion(f, g, rec):
    """f − left·g·right for lw(f) = left·lw(g)·right."""
    u, v = f.leading_word(), g.leading_word()
    if rec.kind != "inclusion" or u != rec.w or rec.left + v + rec.right != u:
        raise ValueError("invalid inclusion record")
    return f.monic() - g.monic().sandwich(rec.left, rec.right)


def compositions(f, g, max_len=None):
    """All (record, composition) for the ordered pair (f, g)."""
    out = []
    for rec in overlaps(f.leading_word(), g.leading_word()):
        if max_len is not None and len(rec.w) > max_len:
            continue
        if rec.kind == "intersection":
            out.append((rec, composition_intersection(f, g, rec)))
        elif f is not g:
            out.append((rec, composition_inclusion(f, g, rec)))
    return out


# ---- completion

class _Completion:
    def __init__(self, field, max_deg):
        self.field = field
        self.max_deg = max_deg
        self.elems = {}          # leading word -> monic poly
        self.heap = []
        self.count = 0

    def rules(self):
        return _rules(list(self.elems.values()))

    def _push_pairs(self, h):
        for g in list(self.elems.values()):
            pairs = [(h, g), (g, h)] if g is not h else [(h, h)]
            for f1, f2 in pairs:
                for rec in overlaps(f1.leading_word(), f2.leading_word()):
                    if rec.kind != "intersection" or len(rec.w) > self.max_deg:
                        continue
                    self.count += 1
                    heapq.heappush(self.heap, (shortlex_key(rec.w), self.count, f1, f2, rec))

    def add(self, p):
        stack = [p]
        while stack:
            q = stack.pop()
            r = reduce(q, self.rules())
            if not r:
                continue
            h = r.monic()
            lw = h.leading_word()
            # elements whose leading word contains lw leave; re-queued for reduction
            gone = [g for w, g in self.elems.items() if _contains(w, lw)]
            for g in gone:
                del self.elems[g.leading_word()]
            self.elems[lw] = h
            # tail reduction of the remaining ones
            rules = self.rules()
            changed = []
            for w, g in list(self.elems.items()):
                if g is h:
                    continue
                if any(_contains(t, lw) for t in g.terms if t != w):
                    g2 = reduce(g - NcPoly.word(self.field, w), rules) + NcPoly.word(self.field, w)
                    self.elems[w] = g2
                    changed.append(g2)
            # tail of h against the others
            others = _rules([g for w, g in self.elems.items() if w != lw])
            tail = NcPoly._raw(self.field, {t: c for t, c in h.terms.items() if t != lw})
            h2 = reduce(tail, others) + NcPoly.word(self.field, lw)
            self.elems[lw] = h2
            self._push_pairs(h2)
            for g2 in changed:
                if self.current(g2):
                    self._push_pairs(g2)
            stack.extend(gone)

    def current(self, f):
        return self.elems.get(f.leading_word()) is f

    def run(self):
        while True:
            while self.heap:
                _, _, f, g, rec = heapq.heappop(self.heap)
                if not (self.current(f) and self.current(g)):
                    continue
                self.add(composition_intersection(f, g, rec))
            # final sweep: every composition within range must reduce to zero
            missing = []
            G = list(self.elems.values())
            rules = self.rules()
            for f in G:
                for g in G:
                    for rec, c in compositions(f, g, self.max_deg):
                        if reduce(c, rules):
                            missing.append(c)
            if not missing:
                return
            for c in missing:
                self.add(c)


def _contains(w, v):
    m = len(v)
    return any(w[i:i + m] == v for i in range(len(w) - m + 1))


def gs_complete(P, max_deg):
    """Inter-reduced monic basis; every composition with ambient length ≤ max_deg
    reduces to zero.  ``closed`` also certifies the compositions beyond it."""
    for r in P.relations:
        if r.degree > max_deg:
            raise UnverifiedDegreeError(
                f"relation of degree {r.degree} exceeds max_deg {max_deg}")
    run = _Completion(P.field, max_deg)
    for r in P.relations:
        run.add(r)
    run.run()
    elems = sorted(run.elems.values(), key=lambda g: shortlex_key(g.leading_word()))
    rules = _rules(elems)
    closed = True
    for f in elems:
        for g in elems:
            for rec, c in compositions(f, g):
                if len(rec.w) > max_deg and reduce(c, rules):
                    closed = False
                    break
            if not closed:
                break
        if not closed:
            break
    return GsBasis(P.field, P.alphabet, elems, max_deg, closed,
                   homogeneous=all(g.is_homogeneous() for g in elems))


def normal_words(G, n):
    """Words of length ≤ n avoiding all leading words, shortlex order."""
    G.check_degree(n)
    rules = G.rules()
    if () in rules.tails:
        return []
    k = len(G.alphabet)
    out = [()]
    layer = [()]
    for _ in range(n):
        nxt = []
        for w in layer:
            for a in range(k):
                v = w + (a,)
                if _suffix_ok(v, rules):
                    nxt.append(v)
        out.extend(nxt)
        layer = nxt
    return out


def _suffix_ok(v, rules):
    # v's prefix is already normal, so only suffixes can hit a leading word
    tails = rules.tails
    for L in rules.lengths:
        if L <= len(v) and v[len(v) - L:] in tails:
            return False
    return True


def ideal_member(p, G):
    """True iff p reduces to zero; complete only for closed bases."""
    if not p:
        return True
    if not G.closed and p.degree > G.verified_degree:
        raise UnverifiedDegreeError(
            f"degree {p.degree} exceeds verified degree {G.verified_degree}")
    return not reduce(p, G)


def commutative_relations(field, alphabet):
    """x_j x_i − x_i x_j for i < j."""
    k = len(alphabet)
    return [NcPoly(field, {(j, i): 1, (i, j): -1}) for i in range(k) for j in range(i + 1, k)]

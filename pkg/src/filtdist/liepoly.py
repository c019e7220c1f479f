"""Lie polynomials inside the free associative algebra.

A LiePoly is stored in the basis of basic commutators, keyed by their
carriers (regular words), together with its associative expansion.
Bracket trees are a letter index (leaf) or a pair ``(left, right)``.

The letter order is declaration order, so with ``Alphabet("yx")`` the
letter x is the largest and ``[x,y]`` is the basic commutator on "xy".

>>> from filtdist.words import Alphabet
>>> from filtdist.exactalg import Field
>>> X = Alphabet("yx")
>>> t = standard_bracketing(X.parse("xyy"))
>>> format_tree(t, X)
'[[x,y],y]'
>>> expand(t, Field.rational()).format(X)
'x*y^2 - 2*y*x*y + y^2*x'
"""

from dataclasses import dataclass, field as dc_field
from functools import lru_cache
import heapq

from .ncpoly import NcPoly, UnverifiedDegreeError, reduce as nc_reduce, compositions as nc_compositions
from .words import (is_regular, longest_regular_suffix, cfl_factorization, shortlex_key,
                    overlaps, regular_words)


class NotLieError(ValueError):
    pass


# ---- bracket trees

def is_leaf(t):
    return isinstance(t, int)


def carrier(t):
    if is_leaf(t):
        return (t,)
    return carrier(t[0]) + carrier(t[1])


def format_tree(t, alphabet):
    if is_leaf(t):
        return alphabet.letters[t]
    return f"[{format_tree(t[0], alphabet)},{format_tree(t[1], alphabet)}]"


@lru_cache(maxsize=None)
def standard_bracketing(w):
    """The basic commutator with carrier w (w regular)."""
    w = tuple(w)
    if not w or not is_regular(w):
        raise ValueError(f"{w} is not regular")
    if len(w) == 1:
        return w[0]
    v = longest_regular_suffix(w)
    u = w[:len(w) - len(v)]
    return (standard_bracketing(u), standard_bracketing(v))


def is_basic(t):
    """Check the Shirshov conditions on every internal node."""
    from .words import shirshov_cmp
    if is_leaf(t):
        return True
    c, d = t
    if not (is_basic(c) and is_basic(d)):
        return False
    if shirshov_cmp(carrier(d), carrier(c)) >= 0:
        return False
    if not is_leaf(c) and shirshov_cmp(carrier(c[1]), carrier(d)) > 0:
        return False
    return is_regular(carrier(t))


def _commutator_terms(p, q):
    t = {}
    for u, a in p.items():
        for v, b in q.items():
            for w, c in ((u + v, a * b), (v + u, -(a * b))):
                y = t.get(w)
                y = c if y is None else y + c
                if y:
                    t[w] = y
                else:
                    t.pop(w, None)
    return t


_expand_cache = {}


def expand(t, field):
    """Associative expansion of a bracket tree."""
    key = (t, field)
    hit = _expand_cache.get(key)
    if hit is not None:
        return hit
    if is_leaf(t):
        p = NcPoly(field, {(t,): 1})
    else:
        a, b = expand(t[0], field), expand(t[1], field)
        p = NcPoly._raw(field, _commutator_terms(a.terms, b.terms))
    _expand_cache[key] = p
    return p


def basic_expansion(w, field):
    return expand(standard_bracketing(tuple(w)), field)


# ---- Lie polynomials

class LiePoly:
    __slots__ = ("field", "coeffs", "_exp", "_lw")

    def __init__(self, field, coeffs=None):
        self.field = field
        self.coeffs = {}
        for w, c in (coeffs or {}).items():
            c = field(c)
            if c:
                w = tuple(w)
                if not is_regular(w):
                    raise ValueError(f"{w} is not a regular word")
                self.coeffs[w] = c
        self._exp = None
        self._lw = None

    @classmethod
    def _raw(cls, field, coeffs, exp=None):
        p = cls.__new__(cls)
        p.field = field
        p.coeffs = coeffs
        p._exp = exp
        p._lw = None
        return p

    @classmethod
    def letter(cls, field, a):
        return cls._raw(field, {(a,): field.one})

    @classmethod
    def from_tree(cls, t, field):
        return lie_canonicalize(expand(t, field))

    def expansion(self):
        if self._exp is None:
            t = {}
            for w, c in self.coeffs.items():
                for v, d in basic_expansion(w, self.field).terms.items():
                    y = t.get(v)
                    y = c * d if y is None else y + c * d
                    if y:
                        t[v] = y
                    else:
                        t.pop(v, None)
            self._exp = NcPoly._raw(self.field, t)
        return self._exp

    def __bool__(self):
        return bool(self.coeffs)

    def __eq__(self, o):
        if not isinstance(o, LiePoly):
            return NotImplemented
        return self.expansion() == o.expansion()

    def __hash__(self):
        return hash(frozenset(self.coeffs.items()))

    def leading_word(self):
        if not self.coeffs:
            raise ValueError("zero Lie polynomial has no leading word")
        if self._lw is None:
            self._lw = max(self.coeffs, key=shortlex_key)
        return self._lw

    def leading_coeff(self):
        return self.coeffs[self.leading_word()]

    @property
    def degree(self):
        return max((len(w) for w in self.coeffs), default=-1)

    def is_homogeneous(self):
        return len({len(w) for w in self.coeffs}) <= 1

    def monic(self):
        c = self.leading_coeff()
        if c == 1:
            return self
        return self.scale(1 / c)

    def scale(self, c):
        c = self.field(c)
        if not c:
            return LiePoly._raw(self.field, {})
        return LiePoly._raw(self.field, {w: c * x for w, x in self.coeffs.items()})

    def __add__(self, o):
        t = dict(self.coeffs)
        for w, c in o.coeffs.items():
            y = t.get(w)
            y = c if y is None else y + c
            if y:
                t[w] = y
            else:
                t.pop(w, None)
        return LiePoly._raw(self.field, t)

    def __neg__(self):
        return self.scale(-1)

    def __sub__(self, o):
        return self + (-o)

    def __mul__(self, c):
        return self.scale(c)

    __rmul__ = __mul__

    def bracket(self, o):
        """[self, o]."""
        return lie_canonicalize(bracket_nc(self.expansion(), o.expansion()))

    def format(self, alphabet):
        if not self.coeffs:
            return "0"
        from .ncpoly import _split_sign
        out = []
        for w in sorted(self.coeffs, key=shortlex_key, reverse=True):
            neg, mag = _split_sign(self.coeffs[w])
            body = format_tree(standard_bracketing(w), alphabet)
            if mag != 1:
                body = f"{mag}*{body}"
            out.append((("-" if neg else "") if not out else ("- " if neg else "+ ")) + body)
        return " ".join(out)

    def __repr__(self):
        return f"LiePoly({self.coeffs!r})"


def bracket_nc(p, q):
    return NcPoly._raw(p.field, _commutator_terms(p.terms, q.terms))


def lie_canonicalize(p):
    """Write an associative polynomial in the basic-commutator basis."""
    field = p.field
    work = dict(p.terms)
    out = {}
    while work:
        lw = max(work, key=shortlex_key)
        if not is_regular(lw):
            raise NotLieError(f"leading word {lw} is not regular: not a Lie element")
        c = work[lw]
        out[lw] = c
        for v, d in basic_expansion(lw, field).terms.items():
            y = work.get(v)
            y = -c * d if y is None else y - c * d
            if y:
                work[v] = y
            else:
                work.pop(v, None)
        if lw in work:
            raise NotLieError("peeling failed")
    return LiePoly._raw(field, out, NcPoly._raw(field, dict(p.terms)))


def lie_bracket(p, q):
    return p.bracket(q)


# ---- special bracketing

def _positioned(t, start=0):
    """Tree annotated with (start, end) intervals: (t, s, e, children)."""
    if is_leaf(t):
        return (t, start, start + 1, None)
    left = _positioned(t[0], start)
    right = _positioned(t[1], left[2])
    return (t, start, right[2], (left, right))


def _eval_nc(node, target, replacement, field):
    t, s, e, kids = node
    if (s, e) == target:
        return replacement
    if kids is None:
        return NcPoly(field, {(t,): 1})
    return bracket_nc(_eval_nc(kids[0], target, replacement, field),
                      _eval_nc(kids[1], target, replacement, field))


def _find_node(node, start, minlen):
    """Smallest node starting at ``start`` with length >= minlen."""
    best = None
    stack = [node]
    while stack:
        t, s, e, kids = stack.pop()
        if s == start and e - s >= minlen and (best is None or e - s < best[1] - best[0]):
            best = (s, e)
        if kids:
            for k in kids:
                if k[1] <= start < k[2]:
                    stack.append(k)
    return best


_sigma_cache = {}


def special_bracketing(a, g, b):
    """σ(a, g, b): g placed inside the standard bracketing of a·lw(g)·b."""
    a, b = tuple(a), tuple(b)
    v = g.leading_word()
    u = a + v + b
    if not is_regular(u):
        raise ValueError(f"{u} is not regular")
    if not a and not b:
        return g
    key = (a, b, g.field, frozenset(g.coeffs.items()))
    hit = _sigma_cache.get(key)
    if hit is not None:
        return hit
    field = g.field
    root = _positioned(standard_bracketing(u))
    span = _find_node(root, len(a), len(v))
    if span is None:
        raise ValueError("no bracket embraces the leading word")
    c = u[len(a) + len(v):span[1]]
    inner = g.expansion()
    for ci in cfl_factorization(c):
        inner = bracket_nc(inner, basic_expansion(ci, field))
    res = lie_canonicalize(_eval_nc(root, span, inner, field))
    _sigma_cache[key] = res
    return res


# ---- reduction and compositions

class _LieRules:
    def __init__(self, S):
        self.by_lw = {}
        for s in S:
            if s.leading_coeff() != 1:
                raise ValueError("reduction needs monic Lie polynomials")
            self.by_lw[s.leading_word()] = s
        self.lengths = sorted({len(w) for w in self.by_lw}, reverse=True)

    def site(self, w):
        best = None
        for L in self.lengths:
            if L > len(w):
                continue
            for i in range(len(w) - L + 1):
                s = w[i:i + L]
                if s in self.by_lw and (best is None or s > best[1]):
                    best = (i, s)
            if best is not None:
                return best
        return None


def _lie_rules(S):
    if isinstance(S, _LieRules):
        return S
    if isinstance(S, LieGsBasis):
        return S.rules()
    return _LieRules(list(S))


def _hk(w):
    return (-len(w), tuple(-a for a in w))


def lie_reduce(p, S):
    """Reduce coordinates of p that contain a leading word of S."""
    rules = _lie_rules(S)
    if not rules.by_lw:
        return p
    work = dict(p.coeffs)
    heap = [_hk(w) for w in work]
    heapq.heapify(heap)
    out = {}
    while heap:
        w = tuple(-a for a in heapq.heappop(heap)[1])
        c = work.pop(w, None)
        if c is None:
            continue
        site = rules.site(w)
        if site is None:
            out[w] = c
            continue
        i, lw = site
        sig = special_bracketing(w[:i], rules.by_lw[lw], w[i + len(lw):])
        for v, d in sig.coeffs.items():
            if v == w:
                continue
            y = work.get(v)
            if y is None:
                work[v] = -c * d
                heapq.heappush(heap, _hk(v))
            else:
                y = y - c * d
                if y:
                    work[v] = y
                else:
                    del work[v]
    return LiePoly._raw(p.field, out)


def lie_composition(f, g, rec):
    u, v = f.leading_word(), g.leading_word()
    f, g = f.monic(), g.monic()
    if rec.kind == "inclusion":
        if u != rec.w or rec.left + v + rec.right != u:
            raise ValueError("invalid inclusion record")
        return f - special_bracketing(rec.left, g, rec.right)
    if rec.kind == "intersection":
        if u + rec.right != rec.w or rec.left + v != rec.w or not len(u) + len(v) > len(rec.w):
            raise ValueError("invalid intersection record")
        if not is_regular(rec.w):
            raise ValueError(f"intersection word {rec.w} is not regular")
        return special_bracketing((), f, rec.right) - special_bracketing(rec.left, g, ())
    raise ValueError("unknown record kind")


def lie_compositions(f, g, max_len=None):
    out = []
    for rec in overlaps(f.leading_word(), g.leading_word()):
        if max_len is not None and len(rec.w) > max_len:
            continue
        if rec.kind == "intersection" and not is_regular(rec.w):
            continue
        if rec.kind == "inclusion" and f is g:
            continue
        out.append((rec, lie_composition(f, g, rec)))
    return out


# ---- completion

@dataclass
class LiePresentation:
    field: object
    alphabet: object
    relations: list

    def __post_init__(self):
        if any(not r for r in self.relations):
            raise ValueError("zero relation")


@dataclass
class LieGsBasis:
    field: object
    alphabet: object
    elements: list
    verified_degree: int
    closed: bool
    _rules: object = dc_field(default=None, repr=False, compare=False)

    def rules(self):
        if self._rules is None:
            self._rules = _LieRules(self.elements)
        return self._rules

    def leading_words(self):
        return [g.leading_word() for g in self.elements]

    def check_degree(self, n):
        if not self.closed and n > self.verified_degree:
            raise UnverifiedDegreeError(
                f"degree {n} exceeds verified degree {self.verified_degree}")


def _contains(w, v):
    m = len(v)
    return any(w[i:i + m] == v for i in range(len(w) - m + 1))


def lie_gs_complete(P, max_deg):
    for r in P.relations:
        if r.degree > max_deg:
            raise UnverifiedDegreeError(
                f"relation of degree {r.degree} exceeds max_deg {max_deg}")
    elems = {}
    heap = []
    counter = [0]

    def push(h):
        for g in list(elems.values()):
            for f1, f2 in ([(h, g), (g, h)] if g is not h else [(h, h)]):
                for rec in overlaps(f1.leading_word(), f2.leading_word()):
                    if rec.kind == "intersection" and len(rec.w) <= max_deg and is_regular(rec.w):
                        counter[0] += 1
                        heapq.heappush(heap, (shortlex_key(rec.w), counter[0], f1, f2, rec))

    def add(p):
        stack = [p]
        while stack:
            r = lie_reduce(stack.pop(), _LieRules(elems.values()))
            if not r:
                continue
            h = r.monic()
            lw = h.leading_word()
            gone = [g for w, g in elems.items() if _contains(w, lw)]
            for g in gone:
                del elems[g.leading_word()]
            elems[lw] = h
            rules = _LieRules(elems.values())
            changed = []
            for w, g in list(elems.items()):
                others = [k for k in g.coeffs if k != w]
                if any(_contains(k, lw) for k in others) or (g is h and any(rules.site(k) for k in others)):
                    top = LiePoly._raw(h.field, {w: g.coeffs[w]})
                    tail = lie_reduce(g - top, _LieRules([e for k, e in elems.items() if k != w]))
                    elems[w] = tail + top
                    changed.append(elems[w])
            for g in [elems[lw]] + [c for c in changed if c is not elems[lw]]:
                if elems.get(g.leading_word()) is g:
                    push(g)
            stack.extend(gone)

    for r in P.relations:
        add(r)
    while True:
        while heap:
            _, _, f, g, rec = heapq.heappop(heap)
            if elems.get(f.leading_word()) is f and elems.get(g.leading_word()) is g:
                add(lie_composition(f, g, rec))
        rules = _LieRules(elems.values())
        missing = [c for f in elems.values() for g in elems.values()
                   for _, c in lie_compositions(f, g, max_deg) if lie_reduce(c, rules)]
        if not missing:
            break
        for c in missing:
            add(c)
    out = sorted(elems.values(), key=lambda g: shortlex_key(g.leading_word()))
    rules = _LieRules(out)
    closed = all(not lie_reduce(c, rules)
                 for f in out for g in out
                 for rec, c in lie_compositions(f, g) if len(rec.w) > max_deg)
    return LieGsBasis(P.field, P.alphabet, out, max_deg, closed)


def lie_normal_commutators(G, n):
    """Regular words of length ≤ n avoiding the leading words of G."""
    G.check_degree(n)
    rules = G.rules()
    k = len(G.alphabet)
    out = []
    for L in range(1, n + 1):
        out.extend(w for w in regular_words(k, L) if rules.site(w) is None)
    return out


@dataclass
class ClosureReport:
    lie_closed: bool
    assoc_closed: bool
    lie_failures: list
    assoc_failures: list

    @property
    def agree(self):
        return self.lie_closed == self.assoc_closed


def lie_vs_assoc_closure(S, max_deg):
    """Compare Lie and associative closure of S up to ambient length max_deg."""
    S = [s.monic() for s in S if s]
    rules = _LieRules(S)
    lie_fail = [(f.leading_word(), g.leading_word(), rec.w)
                for f in S for g in S
                for rec, c in lie_compositions(f, g, max_deg) if lie_reduce(c, rules)]
    E = [s.expansion() for s in S]
    assoc_fail = [(f.leading_word(), g.leading_word(), rec.w)
                  for f in E for g in E
                  for rec, c in nc_compositions(f, g, max_deg) if nc_reduce(c, E)]
    return ClosureReport(not lie_fail, not assoc_fail, lie_fail, assoc_fail)

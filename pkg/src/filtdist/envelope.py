"""Finite-dimensional Lie algebras by structure constants and their enveloping algebras.

PBW monomials are nondecreasing index tuples.  Products are straightened by
b_j b_i -> b_i b_j + [b_j, b_i] for j > i.

Weights come from the filtration L_1 = span S, L_n = L_{n-1} + [S, L_{n-1}].
Before building PBW monomials the basis is replaced by one adapted to that
filtration (and to a subalgebra M when one is given), preferring declared
basis vectors in declaration order.  For the Heisenberg algebra with
S = {a, b} the declared basis a, b, c is already adapted.

>>> from filtdist.exactalg import Field
>>> H = heisenberg(Field.rational())
>>> U = UEAAmbient(H.adapted(["a", "b"]))
>>> sorted(U.straighten((1, 0)).items())
[((0, 1), Fraction(1, 1)), ((2,), Fraction(-1, 1))]
"""

from dataclasses import dataclass
from fractions import Fraction
import re

from .exactalg import Coords, Subspace, vec_axpy
from .filtration import FiltrationTable, DownSet, degree_filtration, superadditive_closure
from .words import regular_words


class StructureError(ValueError):
    pass


class LieStructure:
    """Basis labels and brackets [b_i, b_j] = sum_k c_ij^k b_k."""

    def __init__(self, field, labels, brackets, weights=None):
        self.field = field
        self.labels = list(labels)
        if len(set(self.labels)) != len(self.labels):
            raise StructureError("duplicate basis labels")
        d = len(self.labels)
        self.dim = d
        table = {}
        for (i, j), vec in brackets.items():
            vec = {k: field(c) for k, c in vec.items() if c}
            if i == j:
                if vec:
                    raise StructureError(f"[{self.labels[i]},{self.labels[i]}] must vanish")
                continue
            neg = {k: -c for k, c in vec.items()}
            if (j, i) in table and table[(j, i)] != neg:
                raise StructureError(
                    f"antisymmetry fails for [{self.labels[i]},{self.labels[j]}]")
            table[(i, j)] = vec
            table[(j, i)] = neg
        self.table = table
        self.weights = list(weights) if weights is not None else None
        self._check_jacobi()
        if self.weights is not None:
            for (i, j), vec in table.items():
                for k in vec:
                    if self.weights[k] > self.weights[i] + self.weights[j]:
                        raise StructureError("weights are not compatible with the bracket")

    def bracket_basis(self, i, j):
        return self.table.get((i, j), {})

    def bracket(self, u, v):
        out = {}
        for i, a in u.items():
            for j, b in v.items():
                for k, c in self.bracket_basis(i, j).items():
                    vec_axpy(out, a * b, {k: c})
        return out

    def _check_jacobi(self):
        d = self.dim
        one = self.field.one
        for i in range(d):
            for j in range(i + 1, d):
                for k in range(j + 1, d):
                    a, b, c = {i: one}, {j: one}, {k: one}
                    s = {}
                    vec_axpy(s, one, self.bracket(a, self.bracket(b, c)))
                    vec_axpy(s, one, self.bracket(b, self.bracket(c, a)))
                    vec_axpy(s, one, self.bracket(c, self.bracket(a, b)))
                    if s:
                        raise StructureError(
                            f"Jacobi identity fails on {self.labels[i]}, {self.labels[j]}, {self.labels[k]}")

    def index(self, name):
        try:
            return self.labels.index(name)
        except ValueError:
            raise StructureError(f"unknown basis element {name!r}") from None

    def vector(self, x):
        """Basis label, index, or dict of either."""
        if isinstance(x, dict):
            return {self.index(k) if isinstance(k, str) else k: self.field(c) for k, c in x.items()}
        if isinstance(x, str):
            return {self.index(x): self.field.one}
        return {x: self.field.one}

    # --- filtrations inside L

    def coords(self):
        if getattr(self, "_coords", None) is None:
            self._coords = Coords(self.field, key=_neg, name=f"lie-basis:{id(self)}")
        return self._coords

    def generated_levels(self, gens):
        """[span T, span T + [T, .], ...] until stable."""
        C = self.coords()
        G = [self.vector(g) for g in gens]
        S = Subspace(C, G)
        levels = [Subspace(C), S.copy()]
        fresh = [v for v in G]
        while fresh:
            new = []
            for g in G:
                for v in fresh:
                    p = self.bracket(g, v)
                    if p and S.insert(p):
                        new.append(p)
            fresh = new
            if new:
                levels.append(S.copy())
        return levels

    def adapted(self, S, T=None):
        """Basis adapted to the S-filtration (and to M = <T> when given)."""
        Ls = self.generated_levels(S)
        if Ls[-1].dim != self.dim:
            raise StructureError("generators do not span the algebra under brackets")
        M = self.generated_levels(T)[-1] if T is not None else None
        C = self.coords()
        span = Subspace(C)
        vecs, weights, in_m = [], [], []
        declared = [{k: self.field.one} for k in range(self.dim)]
        from .exactalg import subspace_intersect
        for n in range(1, len(Ls)):
            Ln = Ls[n]
            groups = []
            if M is not None:
                MLn = subspace_intersect(M, Ln)
                groups.append(([v for v in declared if MLn.contains(v)] + MLn.basis(), True))
            groups.append(([v for v in declared if Ln.contains(v)] + Ln.basis(), False))
            for cands, mflag in groups:
                for v in cands:
                    if span.insert(v):
                        vecs.append(v)
                        weights.append(n)
                        in_m.append(mflag)
        return AdaptedLie(self, vecs, weights, in_m, S, T)


def _neg(k):
    return -k


def _solve(vecs, field, d):
    """Return a function expressing a vector in the basis ``vecs``."""
    # row-reduce [vecs | identity]
    C = Coords(field, key=lambda lab: (lab[0], -lab[1]))
    S = Subspace(C)
    for i, v in enumerate(vecs):
        row = {(1, k): c for k, c in v.items()}
        row[(0, i)] = field.one
        S.insert(row)

    def express(u):
        r = {(1, k): c for k, c in u.items()}
        r = S.residual(r)
        if any(k[0] == 1 for k in r):
            raise StructureError("vector outside the span")
        return {k[1]: -c for k, c in r.items()}
    return express


class AdaptedLie:
    """Lie structure rewritten in an adapted basis e_0..e_{d-1}."""

    def __init__(self, L, vecs, weights, in_m, S, T):
        self.base = L
        self.field = L.field
        self.vecs = vecs
        self.weights = weights
        self.in_m = in_m
        self.S = S
        self.T = T
        d = len(vecs)
        self.dim = d
        express = _solve(vecs, L.field, d)
        self.express = express
        self.table = {}
        for i in range(d):
            for j in range(d):
                if i != j:
                    b = L.bracket(vecs[i], vecs[j])
                    if b:
                        self.table[(i, j)] = express(b)
        for (i, j), vec in self.table.items():
            for k in vec:
                if weights[k] > weights[i] + weights[j]:
                    raise StructureError("adapted basis violates weight compatibility")

    def label(self, i):
        v = self.vecs[i]
        if len(v) == 1 and next(iter(v.values())) == 1:
            return self.base.labels[next(iter(v))]
        return "(" + " + ".join(f"{c}*{self.base.labels[k]}" for k, c in sorted(v.items())) + ")"

    def to_adapted(self, x):
        return self.express(self.base.vector(x))


class UEAAmbient:
    """Universal enveloping algebra in PBW coordinates of an adapted basis."""

    kind = "uea"
    unital = True
    graded = False

    def __init__(self, AL):
        self.L = AL
        self.field = AL.field
        w = AL.weights
        self.coords = Coords(self.field, key=lambda m: (sum(w[i] for i in m), len(m), m),
                             name=f"uea:{id(self)}")
        self._memo = {}

    def weight(self, m):
        return sum(self.L.weights[i] for i in m)

    degree = weight

    def straighten(self, word):
        word = tuple(word)
        hit = self._memo.get(word)
        if hit is not None:
            return hit
        for p in range(len(word) - 1):
            if word[p] > word[p + 1]:
                break
        else:
            res = {word: self.field.one}
            self._memo[word] = res
            return res
        j, i = word[p], word[p + 1]
        pre, post = word[:p], word[p + 2:]
        res = dict(self.straighten(pre + (i, j) + post))
        for k, c in self.L.table.get((j, i), {}).items():
            vec_axpy(res, c, self.straighten(pre + (k,) + post))
        self._memo[word] = res
        return res

    def mul(self, u, v, trunc=None):
        out = {}
        for a, c in u.items():
            for b, d in v.items():
                vec_axpy(out, c * d, self.straighten(a + b))
        return out

    def one(self):
        return {(): self.field.one}

    def coords_of(self, x):
        """Lie element (label/dict in the declared basis) or PBW dict."""
        if isinstance(x, dict) and all(isinstance(k, tuple) for k in x):
            return dict(x)
        return {(k,): c for k, c in self.L.to_adapted(x).items()}

    def monomials_upto(self, n, allowed=None):
        idx = [i for i in range(self.L.dim) if allowed is None or allowed[i]]
        w = self.L.weights
        out = []

        def rec(start, prefix, tot):
            out.append(tuple(prefix))
            for k in range(start, len(idx)):
                i = idx[k]
                if tot + w[i] <= n:
                    prefix.append(i)
                    rec(k, prefix, tot + w[i])
                    prefix.pop()
        rec(0, [], 0)
        return sorted(out, key=self.coords.key)

    def labels_upto(self, n):
        return self.monomials_upto(n)

    def format_label(self, m):
        if not m:
            return "1"
        return "*".join(self.L.label(i) for i in m)


def pbw_normal_form(U, product, coeff=1):
    """Straighten a sequence of adapted-basis indices."""
    c = U.field(coeff)
    return {m: c * x for m, x in U.straighten(tuple(product)).items()}


def uea_filtration(L, S, n_max):
    """U(L)_n = span of PBW monomials of weight <= n."""
    AL = L.adapted(S)
    U = UEAAmbient(AL)
    return FiltrationTable(U, [DownSet(U, n) for n in range(n_max + 1)], label="pbw")


@dataclass
class UEAReport:
    lie_dist: list
    uea_dist: list
    closure: list
    equal: bool


def uea_distortion_pair(L, S, T, n_max):
    """dist_L^M, dist_{U(L)}^{U(M)} and the superadditive closure of the former."""
    from .exactalg import subspace_intersect
    Ls = L.generated_levels(S)
    if Ls[-1].dim != L.dim:
        raise StructureError("S does not generate L")
    Ms = L.generated_levels(T)
    M = Ms[-1]
    lie = []
    for n in range(1, n_max + 1):
        Ln = Ls[min(n, len(Ls) - 1)]
        target = subspace_intersect(M, Ln)
        m = 0
        while not target.issubset(Ms[min(m, len(Ms) - 1)]):
            m += 1
        lie.append(m)
    AL = L.adapted(S, T)
    U = UEAAmbient(AL)
    inside = U.monomials_upto(n_max, allowed=AL.in_m)
    tower = degree_filtration(U, [U.coords_of(t) for t in T], n_max * max(AL.weights))
    uea = []
    m = 0
    for n in range(1, n_max + 1):
        need = [mono for mono in inside if U.weight(mono) <= n]
        while m <= tower.n_max and not all(tower.levels[m].contains({mono: U.field.one}) for mono in need):
            m += 1
        if m > tower.n_max:
            raise ValueError("enveloping tower too short")
        uea.append(m)
    clo = superadditive_closure(lie)
    return UEAReport(lie, uea, clo, uea == clo)


def free_uea_bridge_check(max_deg, nletters=2):
    """dim of the degree-n part of the free algebra vs PBW counts over Lyndon words."""
    lyndon = [0] + [len(regular_words(nletters, k)) for k in range(1, max_deg + 1)]
    # coefficients of prod_k (1 - t^k)^(-lyndon_k)
    series = [1] + [0] * max_deg
    for k in range(1, max_deg + 1):
        for _ in range(lyndon[k]):
            for n in range(k, max_deg + 1):
                series[n] += series[n - k]
    rows = []
    for n in range(1, max_deg + 1):
        rows.append((n, nletters ** n, series[n], witt(nletters, n), lyndon[n]))
    ok = all(a == b and c == d for _, a, b, c, d in rows)
    return ok, rows


def _mobius(n):
    res, k, m = 1, 2, n
    while k * k <= m:
        if m % k == 0:
            m //= k
            if m % k == 0:
                return 0
            res = -res
        k += 1
    if m > 1:
        res = -res
    return res


def witt(k, n):
    return sum(_mobius(d) * k ** (n // d) for d in range(1, n + 1) if n % d == 0) // n


# ---- samples and text format

def heisenberg(field):
    return LieStructure(field, ["a", "b", "c"], {(0, 1): {2: 1}})


def abelian(field, d):
    return LieStructure(field, [f"b{i + 1}" for i in range(d)], {})


def parse_structure(text, field):
    """``basis a b c`` / ``bracket a b = 1*c - 2*d`` / ``weight c 2`` lines."""
    labels = None
    brackets = {}
    weights = {}
    for ln, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        head, _, rest = line.partition(" ")
        if head == "basis":
            labels = rest.split()
        elif head == "bracket":
            m = re.fullmatch(r"(\S+)\s+(\S+)\s*=\s*(.*)", rest)
            if not m or labels is None:
                raise StructureError(f"line {ln}: bad bracket line")
            i, j = labels.index(m.group(1)), labels.index(m.group(2))
            brackets[(i, j)] = _parse_vec(m.group(3), labels, ln)
        elif head == "weight":
            name, w = rest.split()
            weights[name] = int(w)
        else:
            raise StructureError(f"line {ln}: unknown directive {head!r}")
    if labels is None:
        raise StructureError("missing basis line")
    wl = [weights[l] for l in labels] if weights else None
    return LieStructure(field, labels, brackets, wl)


def _parse_vec(s, labels, ln):
    s = s.strip()
    if s == "0":
        return {}
    out = {}
    for sign, coef, name in re.findall(r"([+-]?)\s*(?:(\d+(?:/\d+)?)\s*\*)?\s*([A-Za-z_]\w*)", s):
        c = Fraction(coef) if coef else Fraction(1)
        if sign == "-":
            c = -c
        if name not in labels:
            raise StructureError(f"line {ln}: unknown basis element {name!r}")
        k = labels.index(name)
        out[k] = out.get(k, 0) + c
    return out

"""Filtration towers, restrictions to subalgebras and distortion tables.

An *ambient* supplies exact coordinates for its elements:

* ``coords``            a Coords object (field and column order on labels)
* ``coords_of(x)``      normal-form coordinates of an element
* ``mul(u, v)``         product of two coordinate vectors
* ``degree(label)``     degree of a normal label in the ambient's own filtration
* ``unital``            whether a unit is present
* ``graded``            products of labels are homogeneous of the summed degree

The standard filtration of every ambient is the coordinate down-set
``{label : degree(label) <= n}``, which the column order keeps a down-set, so
intersections with it are a row filter on reduced echelon bases.

>>> from filtdist.exactalg import Field
>>> from filtdist.words import Alphabet
>>> A = AssocAmbient.free(Field.rational(), Alphabet("t"))
>>> table = subalgebra_distortion(A, ["t^2", "t^3"], 6)
>>> [r.value for r in table.records]
[0, 0, 1, 1, 2, 2, 2]
"""

from dataclasses import dataclass, field as dc_field
from fractions import Fraction

from .exactalg import Coords, Subspace, subspace_intersect
from .ncpoly import (NcPoly, UnverifiedDegreeError, free_basis, gs_complete,
                     Presentation, reduce_terms, normal_words, parse_poly)
from .liepoly import LiePoly, lie_reduce, bracket_nc, lie_canonicalize
from .words import shortlex_key, regular_words


# ---- ambients

class AssocAmbient:
    """Quotient of a free associative algebra by a truncated GS basis."""

    kind = "assoc"

    def __init__(self, G, unital=True):
        self.G = G
        self.field = G.field
        self.alphabet = G.alphabet
        self.unital = unital
        self.graded = G.homogeneous
        self.coords = Coords(G.field, shortlex_key, name=f"assoc:{id(G)}")
        self._rules = G.rules()

    @classmethod
    def free(cls, field, alphabet, unital=True):
        return cls(free_basis(field, alphabet), unital)

    @classmethod
    def from_relations(cls, field, alphabet, relations, max_deg, unital=True):
        return cls(gs_complete(Presentation(field, alphabet, list(relations), unital), max_deg), unital)

    def degree(self, label):
        return len(label)

    def _verify(self, d):
        if not self.G.closed and d > self.G.verified_degree:
            raise UnverifiedDegreeError(
                f"degree {d} exceeds verified degree {self.G.verified_degree}")

    def coords_of(self, x):
        if isinstance(x, str):
            x = parse_poly(x, self.alphabet, self.field)
        if isinstance(x, NcPoly):
            x = x.terms
        if x:
            self._verify(max(len(w) for w in x))
        return reduce_terms(x, self._rules, self.field)

    def mul(self, u, v, trunc=None):
        t = {}
        for a, c in u.items():
            for b, d in v.items():
                w = a + b
                if trunc is not None and len(w) > trunc:
                    continue
                y = t.get(w)
                y = c * d if y is None else y + c * d
                if y:
                    t[w] = y
                else:
                    t.pop(w, None)
        if t:
            self._verify(max(len(w) for w in t))
        return reduce_terms(t, self._rules, self.field)

    def one(self):
        return {(): self.field.one}

    def letters(self):
        return [{(a,): self.field.one} for a in range(len(self.alphabet))]

    def labels_upto(self, n):
        return normal_words(self.G, n)

    def format_label(self, w):
        return self.alphabet.format(w)


class LieAmbient:
    """Free Lie algebra, or its quotient by a truncated Lie GS basis."""

    kind = "lie"
    unital = False

    def __init__(self, field, alphabet, G=None):
        self.field = field
        self.alphabet = alphabet
        self.G = G
        self.graded = G is None or all(g.is_homogeneous() for g in G.elements)
        self.coords = Coords(field, shortlex_key, name=f"lie:{id(self)}")
        self._rules = G.rules() if G is not None else None

    def degree(self, label):
        return len(label)

    def _verify(self, d):
        if self.G is not None and not self.G.closed and d > self.G.verified_degree:
            raise UnverifiedDegreeError(
                f"degree {d} exceeds verified degree {self.G.verified_degree}")

    def _normal(self, p):
        if self._rules is None or not p:
            return dict(p.coeffs)
        self._verify(p.degree)
        return dict(lie_reduce(p, self._rules).coeffs)

    def coords_of(self, x):
        if isinstance(x, NcPoly):
            x = lie_canonicalize(x)
        if isinstance(x, dict):
            x = LiePoly(self.field, x)
        return self._normal(x)

    def mul(self, u, v, trunc=None):
        def parts(x):
            out = {}
            for w, c in x.items():
                out.setdefault(len(w), {})[w] = c
            return out
        t = {}
        for du, pu in parts(u).items():
            for dv, pv in parts(v).items():
                if trunc is not None and du + dv > trunc:
                    continue
                p = LiePoly._raw(self.field, pu).expansion()
                q = LiePoly._raw(self.field, pv).expansion()
                for w, c in bracket_nc(p, q).terms.items():
                    y = t.get(w)
                    y = c if y is None else y + c
                    if y:
                        t[w] = y
                    else:
                        t.pop(w, None)
        if not t:
            return {}
        return self._normal(lie_canonicalize(NcPoly._raw(self.field, t)))

    def letters(self):
        return [{(a,): self.field.one} for a in range(len(self.alphabet))]

    def labels_upto(self, n):
        rules = self._rules
        return [w for L in range(1, n + 1) for w in regular_words(len(self.alphabet), L)
                if rules is None or rules.site(w) is None]

    def format_label(self, w):
        from .liepoly import format_tree, standard_bracketing
        return format_tree(standard_bracketing(w), self.alphabet)


# ---- levels

class DownSet:
    """Coordinate span of labels of degree <= n (the standard filtration)."""

    def __init__(self, ambient, n):
        self.ambient = ambient
        self.n = n

    def inside(self, label):
        return self.ambient.degree(label) <= self.n

    def contains(self, v):
        return all(self.inside(k) for k in v)

    def intersect(self, U):
        return U.restrict(self.inside)

    @property
    def dim(self):
        return len(self.ambient.labels_upto(self.n))


def _level_contains(level, v):
    return level.contains(v)


def _level_basis(level):
    if isinstance(level, DownSet):
        one = level.ambient.field.one
        return [{w: one} for w in level.ambient.labels_upto(level.n)]
    return level.basis()


def _level_superset(level, U):
    """U ⊆ level."""
    if isinstance(U, DownSet) or isinstance(level, DownSet):
        return all(level.contains(r) for r in _level_basis(U))
    return U.issubset(level)


def _level_intersect(level, U):
    if isinstance(level, DownSet):
        return level.intersect(U)
    return subspace_intersect(U, level)


@dataclass
class FiltrationTable:
    ambient: object
    levels: list
    mode: str = "length"
    label: str = ""
    fresh: list = dc_field(default=None, repr=False)

    @property
    def n_max(self):
        return len(self.levels) - 1

    def dims(self):
        return [lv.dim for lv in self.levels]

    def to_tsv(self):
        lines = ["n\tdim"]
        lines += [f"{n}\t{d}" for n, d in enumerate(self.dims())]
        return "\n".join(lines) + "\n"


def standard_filtration(A, n_max):
    return FiltrationTable(A, [DownSet(A, n) for n in range(n_max + 1)], label="standard")


def _gens_coords(A, gens):
    out = []
    for g in gens:
        c = A.coords_of(g)
        if not c:
            raise ValueError("zero generator")
        out.append(c)
    return out


def _trunc_ok(A, gens):
    return A.graded and all(len({A.degree(k) for k in g}) == 1 and min(A.degree(k) for k in g) > 0
                            for g in gens)


def _truncate(v, A, trunc):
    if trunc is None:
        return v
    return {k: c for k, c in v.items() if A.degree(k) <= trunc}


def degree_filtration(A, gens, n_max, trunc=None):
    """level n = span of 1 and all products of <= n generators."""
    G = _gens_coords(A, gens)
    if trunc is not None and not _trunc_ok(A, G):
        trunc = None
    S = Subspace(A.coords)
    levels, fresh = [], []
    if A.unital:
        S.insert(A.one())
        fresh.append([A.one()])
    else:
        fresh.append([])
    levels.append(S.copy())
    for n in range(1, n_max + 1):
        new = []
        if A.unital or n > 1:
            for g in G:
                for v in fresh[n - 1]:
                    p = A.mul(g, v, trunc)
                    if p and S.insert(p):
                        new.append(p)
        if n == 1 and not A.unital:
            for g in G:
                g = _truncate(g, A, trunc)
                if g and S.insert(g):
                    new.append(g)
        fresh.append(new)
        levels.append(S.copy())
    return FiltrationTable(A, levels, "length", label="degree", fresh=fresh)


def weighted_filtration(A, W, n_max, mode="length", trunc=None):
    """level n = span of products with total weight (plus operations in
    operation mode) at most n."""
    items = [(A.coords_of(x), int(w)) for x, w in W]
    if any(not c for c, _ in items):
        raise ValueError("zero generator")
    if mode == "length":
        if any(w < 1 for _, w in items):
            raise ValueError("length mode needs weights >= 1")
    elif mode != "operation":
        raise ValueError(f"unknown mode {mode!r}")
    if trunc is not None and not _trunc_ok(A, [c for c, _ in items]):
        trunc = None
    S = Subspace(A.coords)
    fresh = [[] for _ in range(n_max + 1)]
    levels = []
    for n in range(n_max + 1):
        new = fresh[n]
        if n == 0 and A.unital:
            if S.insert(A.one()):
                new.append(A.one())
        for g, w in items:
            if w == n:
                g2 = _truncate(g, A, trunc)
                if g2 and S.insert(g2):
                    new.append(g2)
        if mode == "length":
            for g, w in items:
                if 1 <= w <= n:
                    for v in fresh[n - w]:
                        p = A.mul(g, v, trunc)
                        if p and S.insert(p):
                            new.append(p)
        else:
            for i in range(n):
                j = n - 1 - i
                for u in fresh[i]:
                    for v in fresh[j]:
                        p = A.mul(u, v, trunc)
                        if p and S.insert(p):
                            new.append(p)
        levels.append(S.copy())
    return FiltrationTable(A, levels, mode, label="weighted", fresh=fresh)


# ---- restriction and distortion

@dataclass
class RestrictedTable:
    levels: list
    status: list
    cap: int
    window: int
    history: list  # history[M][n] = dim(B_M ∩ A_n)
    beta: FiltrationTable

    @property
    def n_max(self):
        return len(self.levels) - 1

    def dims(self):
        return [lv.dim for lv in self.levels]


def restrict_filtration(alpha, B_gens, cap, window=3):
    """Approximate α ∩ B by φ(B_M) ∩ A_n for M up to ``cap``."""
    if cap < 1:
        raise ValueError("cap must be >= 1")
    A = alpha.ambient
    N = alpha.n_max
    trunc = N if all(isinstance(lv, DownSet) for lv in alpha.levels) else None
    beta = degree_filtration(A, B_gens, cap, trunc=trunc)
    history = []
    for M in range(cap + 1):
        BM = beta.levels[M]
        history.append([_level_intersect(alpha.levels[n], BM).dim for n in range(N + 1)])
    top = beta.levels[cap]
    levels = [_level_intersect(alpha.levels[n], top) for n in range(N + 1)]
    status = []
    for n in range(N + 1):
        if cap >= window and all(history[M][n] == history[cap][n] for M in range(cap - window, cap + 1)):
            status.append("stabilized")
        else:
            status.append("lower_bound")
    return RestrictedTable(levels, status, cap, window, history, beta)


@dataclass
class DistRecord:
    n: int
    value: int
    status: str
    exhausted: bool = False


@dataclass
class DistortionTable:
    records: list
    cap: int = None
    window: int = None
    label: str = ""

    def values(self):
        return [r.value for r in self.records]

    def to_tsv(self):
        lines = ["n\tdist\tstatus"]
        for r in self.records:
            v = f">={r.value}" if r.exhausted else str(r.value)
            lines.append(f"{r.n}\t{v}\t{r.status}")
        return "\n".join(lines) + "\n"


def distortion(restricted, beta=None):
    """value(n) = min{m : restricted_n ⊆ β_m}."""
    if beta is None:
        beta = restricted.beta
    recs = []
    m = 0
    for n, lv in enumerate(restricted.levels):
        while m <= beta.n_max and not _level_superset(beta.levels[m], lv):
            m += 1
        if m > beta.n_max:
            recs.append(DistRecord(n, beta.n_max + 1, "lower_bound", True))
            m = beta.n_max
        else:
            recs.append(DistRecord(n, m, restricted.status[n]))
    return DistortionTable(recs, getattr(restricted, "cap", None), getattr(restricted, "window", None))


def subalgebra_distortion(A, B_gens, n_max, cap=None, window=3):
    """dist of α∩B against B's degree filtration, α the standard filtration of A."""
    if cap is None:
        cap = n_max + window
    R = restrict_filtration(standard_filtration(A, n_max), B_gens, cap, window)
    return distortion(R)


def tower_distortion(mu, nu):
    """dist_μ^ν(n) = min{m : μ_n ⊆ ν_m}; None past ν's range."""
    out = []
    m = 0
    for lv in mu.levels:
        while m <= nu.n_max and not _level_superset(nu.levels[m], lv):
            m += 1
        if m > nu.n_max:
            out.append(None)
            m = nu.n_max + 1
        else:
            out.append(m)
    return out


# ---- diagnostics

@dataclass
class Majoration:
    t: int
    checked: list
    failures: dict


def is_majorated(beta, beta2, t_max):
    """Smallest t <= t_max with B_n ⊆ B'_{tn} for all computed n (range-limited)."""
    if not (beta.ambient.coords == beta2.ambient.coords):
        from .exactalg import AmbientMismatchError
        raise AmbientMismatchError("towers over different coordinates")
    failures = {}
    for t in range(1, t_max + 1):
        bad = None
        checked = []
        for n in range(beta.n_max + 1):
            if t * n > beta2.n_max:
                break
            checked.append(n)
            if not _level_superset(beta2.levels[t * n], beta.levels[n]):
                bad = n
                break
        if bad is None:
            return Majoration(t, checked, failures)
        failures[t] = bad
    return Majoration(None, [], failures)


def _iroot_floor(num, den, n, d):
    """Largest k with (k/den)^n <= d for a fixed denominator."""
    lo, hi = 0, den * (d + 1)
    while lo < hi:
        mid = (lo + hi + 1) // 2
        if mid ** n <= d * den ** n:
            lo = mid
        else:
            hi = mid - 1
    return lo


@dataclass
class TamenessFit:
    lo: Fraction
    hi: Fraction
    n: int
    dim: int


def tameness_fit(beta, precision=1000):
    """Bracket max_n (dim B_n)^(1/n) between two rationals."""
    dims = beta.dims()
    if len(dims) < 3:
        raise ValueError("need n_max >= 2")
    best = None
    for n in range(1, len(dims)):
        d = dims[n]
        k = _iroot_floor(None, precision, n, d)
        exact = k ** n == d * precision ** n
        lo = Fraction(k, precision)
        hi = lo if exact else Fraction(k + 1, precision)
        if best is None or lo > best.lo or (lo == best.lo and hi < best.hi):
            best = TamenessFit(lo, hi, n, d)
    return best


def superadditive_closure(f):
    """f̄(n) = max(f(n), max_k f̄(k) + f̄(n-k)), for f indexed 1..N."""
    g = [None]
    for n in range(1, len(f) + 1):
        v = f[n - 1]
        for k in range(1, n):
            v = max(v, g[k] + g[n - k])
        g.append(v)
    return g[1:]


def is_superadditive(f):
    N = len(f)
    for a in range(1, N + 1):
        for b in range(1, N + 1 - a):
            if f[a - 1] + f[b - 1] > f[a + b - 1]:
                return False, (a, b)
    return True, None


@dataclass
class CalculusReport:
    checks: int = 0
    violations: list = dc_field(default_factory=list)

    @property
    def ok(self):
        return not self.violations


def _compose(g, h):
    out = []
    for x in h:
        out.append(None if x is None or x >= len(g) else g[x])
    return out


def _le(f, g, report, claim):
    for n, (a, b) in enumerate(zip(f, g)):
        if a is None or b is None:
            continue
        report.checks += 1
        if a > b:
            report.violations.append((claim, n, a, b))


def _restrict_table(t, B):
    A = t.ambient
    return FiltrationTable(A, [_level_intersect(lv, B) if isinstance(lv, DownSet) else subspace_intersect(lv, B)
                               for lv in t.levels], t.mode)


def _image_table(t, phi, coords):
    levels = []
    for lv in t.levels:
        rows = lv.rows.values() if isinstance(lv, Subspace) else []
        levels.append(Subspace(coords, (phi(r) for r in rows)))
    dummy = type("Img", (), {"coords": coords})()
    return FiltrationTable(dummy, levels, t.mode)


def distortion_calculus_check(mu, nu, pi, B=None, phi=None, phi_coords=None):
    """Check the composition bound, restriction and image monotonicity on the
    computed range."""
    rep = CalculusReport()
    d_mp = tower_distortion(mu, pi)
    d_np = tower_distortion(nu, pi)
    d_mn = tower_distortion(mu, nu)
    # composition: dist_μ^π <= dist_ν^π ∘ dist_μ^ν
    _le(d_mp, _compose(d_np, d_mn), rep, "composition")
    # two-step bound through an intermediate tower in both orders
    _le(d_mn, _compose(tower_distortion(pi, nu), d_mp), rep, "composition")
    if B is not None:
        for s, t in ((mu, nu), (nu, pi), (mu, pi)):
            _le(tower_distortion(_restrict_table(s, B), _restrict_table(t, B)),
                tower_distortion(s, t), rep, "restriction")
    if phi is not None:
        for s, t in ((mu, nu), (nu, pi), (mu, pi)):
            _le(tower_distortion(_image_table(s, phi, phi_coords), _image_table(t, phi, phi_coords)),
                tower_distortion(s, t), rep, "image")
    # nondecreasing
    for s, t in ((mu, nu), (nu, pi), (mu, pi)):
        d = [x for x in tower_distortion(s, t) if x is not None]
        rep.checks += 1
        if any(a > b for a, b in zip(d, d[1:])):
            rep.violations.append(("monotone", d))
    return rep


def product_compatible(table, kmax=None):
    """A_k·A_l ⊆ A_{k+l} on basis vectors, k + l <= n_max."""
    A = table.ambient
    N = table.n_max
    bad = []
    for k in range(N + 1):
        for l in range(N + 1 - k):
            for u in _level_basis(table.levels[k]):
                for v in _level_basis(table.levels[l]):
                    p = A.mul(u, v)
                    if p and not table.levels[k + l].contains(p):
                        bad.append((k, l))
                        break
    return bad

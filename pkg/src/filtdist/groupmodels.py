"""Concrete groups with exact normal forms, Cayley balls and subgroup distortion.

* ``heisenberg``: integer triples (x, y, z) for [[1,x,z],[0,1,y],[0,0,1]],
  generators a, b, c with c = [a, b] central.
* ``bs12``: maps t -> 2^e t + m, stored as (e, m) with m a dyadic Fraction;
  a: t -> 2t, b: t -> t + 1, so a b a^-1 = b^2.
* ``free-group:<r>``: reduced words over letters ±1..±r.

Balls are built by breadth-first search over canonical keys, so the radius
recorded for a key is the word length of that element.

>>> H = heisenberg()
>>> len(ball(H, 1).keys)
7
>>> subgroup_distortion(H, center(H), 4).values()
[0, 1, 2, 3, 4]
"""

from dataclasses import dataclass
from fractions import Fraction
import re

from .filtration import DistortionTable, DistRecord

BUDGET = 10 ** 7


class BudgetExceeded(RuntimeError):
    pass


class GroupModel:
    def __init__(self, name, gen_names, gens, inverses, mul, identity, key, inverse=None):
        self.name = name
        self.gen_names = list(gen_names)
        self.gens = list(gens)
        self.inverses = inverses
        self.mul = mul
        self.identity = identity
        self.key = key
        self.inverse = inverse

    def steps(self):
        """Generators used by the BFS (with inverses for groups)."""
        out = list(self.gens)
        if self.inverses:
            out += [self.inverse(g) for g in self.gens]
        return out

    def word(self, text):
        """Evaluate ``a*b^-1*c^2`` or juxtaposed single letters like ``abA``
        (capital = inverse)."""
        g = self.identity
        text = text.replace(" ", "")
        if not text or text == "1":
            return g
        for part in text.split("*"):
            m = re.fullmatch(r"([A-Za-z][A-Za-z0-9]*)(?:\^(-?\d+))?", part)
            if not m:
                raise ValueError(f"bad group word factor {part!r}")
            name, k = m.group(1), int(m.group(2) or 1)
            if name in self.gen_names:
                seq = [(self.gens[self.gen_names.index(name)], 1)]
            else:
                seq = []
                for ch in name:
                    if ch in self.gen_names:
                        seq.append((self.gens[self.gen_names.index(ch)], 1))
                    elif ch.lower() in self.gen_names and self.inverses:
                        seq.append((self.gens[self.gen_names.index(ch.lower())], -1))
                    else:
                        raise ValueError(f"unknown generator {ch!r}")
            *head, (last, e) = seq
            for h, s in head:
                g = self.mul(g, h if s > 0 else self.inverse(h))
            e = e * k
            step = last if e > 0 else self.inverse(last)
            for _ in range(abs(e)):
                g = self.mul(g, step)
        return g

    def power(self, g, k):
        out = self.identity
        step = g if k >= 0 else self.inverse(g)
        for _ in range(abs(k)):
            out = self.mul(out, step)
        return out


# ---- models

def heisenberg():
    def mul(g, h):
        return (g[0] + h[0], g[1] + h[1], g[2] + h[2] + g[0] * h[1])

    def inv(g):
        return (-g[0], -g[1], -g[2] + g[0] * g[1])

    return GroupModel("heisenberg", ["a", "b", "c"], [(1, 0, 0), (0, 1, 0), (0, 0, 1)], True,
                      mul, (0, 0, 0), lambda g: g, inv)


def bs12():
    def mul(g, h):
        e1, m1 = g
        e2, m2 = h
        scale = Fraction(2) ** e1
        return (e1 + e2, m1 + scale * m2)

    def inv(g):
        e, m = g
        return (-e, -m / Fraction(2) ** e)

    def key(g):
        e, m = g
        return (e, m.numerator, m.denominator)

    z = Fraction(0)
    return GroupModel("bs12", ["a", "b"], [(1, z), (0, Fraction(1))], True,
                      mul, (0, z), key, inv)


def free_group(rank):
    def mul(u, v):
        out = list(u)
        for x in v:
            if out and out[-1] == -x:
                out.pop()
            else:
                out.append(x)
        return tuple(out)

    def inv(u):
        return tuple(-x for x in reversed(u))

    names = [chr(ord("a") + i) for i in range(rank)] if rank <= 26 else [f"x{i + 1}" for i in range(rank)]
    return GroupModel(f"free-group:{rank}", names, [(i + 1,) for i in range(rank)], True,
                      mul, (), lambda u: u, inv)


def model_by_name(name):
    if name == "heisenberg":
        return heisenberg()
    if name == "bs12":
        return bs12()
    m = re.fullmatch(r"free-group:(\d+)", name)
    if m and int(m.group(1)) >= 1:
        return free_group(int(m.group(1)))
    raise ValueError(f"unknown group model {name!r}")


# ---- balls

@dataclass
class BallTable:
    radius: dict        # key -> first-visit radius
    elements: dict      # key -> element
    layers: list        # layers[n] = keys at distance exactly n

    @property
    def keys(self):
        return self.radius

    def sizes(self):
        out, s = [], 0
        for layer in self.layers:
            s += len(layer)
            out.append(s)
        return out


def ball(model, n_max, budget=BUDGET):
    """Exact ball of radius n_max; refuses to exceed ``budget`` keys."""
    e = model.identity
    k0 = model.key(e)
    radius = {k0: 0}
    elements = {k0: e}
    layers = [[k0]]
    steps = model.steps()
    frontier = [e]
    for n in range(1, n_max + 1):
        nxt = []
        layer = []
        for g in frontier:
            for s in steps:
                h = model.mul(g, s)
                k = model.key(h)
                if k not in radius:
                    radius[k] = n
                    elements[k] = h
                    layer.append(k)
                    nxt.append(h)
                    if len(radius) > budget:
                        raise BudgetExceeded(
                            f"ball of radius {n} exceeds {budget} elements")
        layers.append(layer)
        frontier = nxt
    return BallTable(radius, elements, layers)


# ---- subgroups

class SubgroupOracle:
    """Membership test plus intrinsic length |h|_H."""

    def __init__(self, name, length, gens):
        self.name = name
        self.length = length      # element -> int or None
        self.gens = gens          # generators of H, used by group-algebra checks


def center(model):
    if model.name != "heisenberg":
        raise ValueError("center selector needs the heisenberg model")
    return SubgroupOracle("center", lambda g: abs(g[2]) if g[0] == 0 and g[1] == 0 else None,
                          [(0, 0, 1)])


def b_cyclic(model):
    if model.name != "bs12":
        raise ValueError("b-cyclic selector needs the bs12 model")

    def length(g):
        e, m = g
        if e == 0 and m.denominator == 1:
            return abs(m.numerator)
        return None
    return SubgroupOracle("b-cyclic", length, [(0, Fraction(1))])


def whole(model):
    return None


def trivial(model):
    k0 = model.key(model.identity)
    return SubgroupOracle("trivial", lambda g: 0 if model.key(g) == k0 else None, [])


def custom(model, word, n_max):
    """Cyclic subgroup <g>; powers enumerated far enough to cover the ball."""
    g = model.word(word)
    K = _power_bound(model, g, n_max)
    table = {}
    for sign in (1, -1):
        h = model.identity
        step = g if sign > 0 else model.inverse(g)
        for k in range(K + 1):
            kk = model.key(h)
            if kk not in table or table[kk] > k:
                table[kk] = k
            h = model.mul(h, step)
    return SubgroupOracle(f"custom:{word}", lambda x: table.get(model.key(x)), [g])


def _power_bound(model, g, n):
    """K with |g^k|_G > n whenever |k| > K."""
    if model.name.startswith("free-group"):
        return n + 1
    if model.name == "heisenberg":
        if g[0] or g[1]:
            return n + 1
        # central: |c^m| >= sqrt(m)
        return (n + 1) ** 2
    if model.name == "bs12":
        if g[0]:
            return n + 1
        # translations by m: |b^M| >= log2 |M| - 1
        return 2 ** (n + 2)
    return n + 1


def subgroup_selector(model, spec, n_max):
    if spec == "center":
        return center(model)
    if spec == "b-cyclic":
        return b_cyclic(model)
    if spec == "whole":
        return None
    if spec == "trivial":
        return trivial(model)
    if spec.startswith("custom:"):
        return custom(model, spec[len("custom:"):], n_max)
    raise ValueError(f"unknown subgroup selector {spec!r}")


def subgroup_distortion(model, oracle, n_max, budget=BUDGET):
    """dist(n) = max{|h|_H : h in H, |h|_G <= n}, exact by BFS."""
    B = ball(model, n_max, budget)
    best = 0
    recs = []
    for n, layer in enumerate(B.layers):
        for k in layer:
            if oracle is None:
                best = max(best, n)
                continue
            L = oracle.length(B.elements[k])
            if L is not None and L > best:
                best = L
        recs.append(DistRecord(n, best, "stabilized"))
    return DistortionTable(recs, label=f"{model.name}/{oracle.name if oracle else 'whole'}")


# ---- action machine

def special_indices(limit, start_level=1):
    """j = 2^(2^i) for i >= start_level, up to limit."""
    out = set()
    i = start_level
    while 2 ** (2 ** i) <= limit:
        out.add(2 ** (2 ** i))
        i += 1
    return out


def action_step(v, letter, start_level=1):
    """a: v(i) -> v(i+1); b: v(j-1) -> v(j^2) for special j, else v(0)."""
    if letter == "a":
        return v + 1
    j = v + 1
    if j >= 2 and (j & (j - 1)) == 0:
        e = j.bit_length() - 1
        if (e & (e - 1)) == 0 and e >= 2 ** start_level:
            return j * j
    return 0


def action_distortion(n_max, start_level=1):
    """f(n) = largest index reachable from v(0) with at most n letters."""
    reached = {0}
    frontier = {0}
    out = []
    best = 0
    for n in range(1, n_max + 1):
        nxt = set()
        for v in frontier:
            for s in "ab":
                w = action_step(v, s, start_level)
                if w not in reached:
                    nxt.add(w)
        reached |= nxt
        frontier = nxt
        best = max([best] + list(nxt))
        out.append(best)
    return out


def superadditivity_violations(f):
    """Pairs (a, b) with f(a) + f(b) > f(a + b), f indexed from 1."""
    N = len(f)
    return [(a, b) for a in range(1, N + 1) for b in range(a, N + 1 - a)
            if f[a - 1] + f[b - 1] > f[a + b - 1]]


# ---- group algebra

class GroupAlgebraAmbient:
    """F[G] in the basis of group elements, filtered by word length."""

    kind = "group-algebra"
    unital = True
    graded = False

    def __init__(self, model, field, radius):
        from .exactalg import Coords
        self.model = model
        self.field = field
        self.R = radius
        self.B = ball(model, radius)
        self.elements = dict(self.B.elements)
        R = radius

        def col(k):
            return (self.B.radius.get(k, R + 1), k)
        self.coords = Coords(field, key=col, name=f"group-algebra:{id(self)}")

    def degree(self, k):
        return self.B.radius.get(k, self.R + 1)

    def element_coords(self, g):
        k = self.model.key(g)
        self.elements.setdefault(k, g)
        return {k: self.field.one}

    def coords_of(self, x):
        if isinstance(x, dict):
            return dict(x)
        return self.element_coords(x)

    def one(self):
        return self.element_coords(self.model.identity)

    def mul(self, u, v, trunc=None):
        from .exactalg import vec_axpy
        out = {}
        for a, c in u.items():
            for b, d in v.items():
                h = self.model.mul(self.elements[a], self.elements[b])
                vec_axpy(out, c * d, self.element_coords(h))
        return out

    def labels_upto(self, n):
        return [k for k, r in self.B.radius.items() if r <= n]


def group_algebra_bridge(dist, model=None, oracle=None, check_n=None, field=None):
    """Relabel a subgroup table for F[H] ⊂ F[G]; optionally recompute it
    from group-algebra towers up to radius ``check_n``."""
    out = DistortionTable([DistRecord(r.n, r.value, r.status) for r in dist.records],
                          label=f"F[{dist.label}]")
    if check_n is None:
        return out, None
    from .exactalg import Field
    from .filtration import standard_filtration, restrict_filtration, distortion
    field = field or Field.rational()
    A = GroupAlgebraAmbient(model, field, check_n)
    gens = []
    for h in (oracle.gens if oracle is not None else model.gens):
        gens += [A.element_coords(h), A.element_coords(model.inverse(h))]
    if not gens:
        direct = [0] * (check_n + 1)
    else:
        cap = max(r.value for r in dist.records[:check_n + 1]) + 1
        R = restrict_filtration(standard_filtration(A, check_n), gens, cap, window=1)
        direct = distortion(R).values()
    agree = direct == [r.value for r in dist.records[:check_n + 1]]
    return out, (agree, direct)

"""Acceptance suite: one function per criterion, each returning (ok, detail).

Shared by ``filtdist verify`` and tests/test_acceptance.py.
"""

from dataclasses import dataclass
from fractions import Fraction
from itertools import product
import random
import time

from .exactalg import Coords, Field, Subspace
from .words import Alphabet, shortlex_key
from .ncpoly import NcPoly, Presentation, gs_complete, normal_words, parse_poly
from .liepoly import LiePoly, LiePresentation, lie_gs_complete, lie_vs_assoc_closure
from .filtration import (AssocAmbient, LieAmbient, subalgebra_distortion, superadditive_closure,
                         is_majorated, tameness_fit, weighted_filtration,
                         distortion_calculus_check)
from . import groupmodels as gm
from .envelope import heisenberg as heis_lie, uea_distortion_pair
from .constructions import (umirbaev_check, malcev_embedding, polynomial_algebra,
                            truncated_algebra, flambda_family)

QQ = Field.rational()
GF5 = Field.prime(5)


@dataclass
class Result:
    number: int
    title: str
    ok: bool
    detail: str
    seconds: float

    def line(self, timing=True):
        out = f"[{'PASS' if self.ok else 'FAIL'}] {self.number:2d} {self.title}: {self.detail}"
        return out + (f" ({self.seconds:.1f}s)" if timing else "")


def c1_heisenberg():
    H = gm.heisenberg()
    t = time.time()
    d = gm.subgroup_distortion(H, gm.center(H), 12).values()
    dt = time.time() - t
    mono = all(a <= b for a, b in zip(d, d[1:]))
    ratio = all(Fraction(1, 16) <= Fraction(d[n], n * n) <= 1 for n in range(6, 13))
    # c^4 = [a^2, b^2] has length 8
    w = H.word("a^2*b^2*a^-2*b^-2")
    ok = mono and ratio and d[8] >= 4 and w == (0, 0, 4) and dt <= 60
    return ok, f"dist={d} monotone={mono} ratio_ok={ratio}"


def c2_bs12():
    B = gm.bs12()
    t = time.time()
    d = gm.subgroup_distortion(B, gm.b_cyclic(B), 11).values()
    dt = time.time() - t
    checks = [d[2 * k + 1] >= 2 ** k for k in range(1, 6)]
    wit = all(B.word(f"a^{k}*b*a^-{k}") == B.power((0, Fraction(1)), 2 ** k) for k in range(1, 6))
    return all(checks) and wit and dt <= 60, f"dist={d} witnesses={wit}"


def c3_action_machine():
    f = gm.action_distortion(16)
    plateau = all(f[m - 1] == f[3] + m - 4 for m in range(5, 16))
    viol = gm.superadditivity_violations(f)
    clo = superadditive_closure(f)
    ok = f[3] == 16 and f[15] == 256 and plateau and bool(viol) and clo != f
    return ok, f"f(4)={f[3]} f(16)={f[15]} plateau={plateau} violation={viol[:1]} closure_differs={clo != f}"


def c4_uea_closure():
    t = time.time()
    L = heis_lie(QQ)
    rep = uea_distortion_pair(L, ["a", "b"], ["c"], 10)
    dt = time.time() - t
    target = [n // 2 for n in range(1, 11)]
    clo = superadditive_closure(rep.lie_dist)
    ok = rep.uea_dist == target and clo == target and rep.equal and dt <= 10
    return ok, f"lie={rep.lie_dist} uea={rep.uea_dist} closure={clo}"


def c5_commutative():
    A = polynomial_algebra(QQ)
    t1 = subalgebra_distortion(A, ["t^2", "t^3"], 12)
    xy = Alphabet("xy")
    C = AssocAmbient.from_relations(QQ, xy, [parse_poly("y*x - x*y", xy, QQ)], 14)
    t2 = subalgebra_distortion(C, ["x^2", "x*y", "y^2"], 12)
    ok = True
    for t in (t1, t2):
        ok &= all(r.value <= r.n and r.status == "stabilized" for r in t.records)
    return ok, f"F[t^2,t^3]={t1.values()} F[x^2,xy,y^2]={t2.values()}"


def c6_free_lie():
    xy = Alphabet("xy")
    L = LieAmbient(QQ, xy)
    x, y = LiePoly.letter(QQ, 0), LiePoly.letter(QQ, 1)
    u = x.bracket(y)
    t = subalgebra_distortion(L, [u, u.bracket(y)], 8)
    ok = all(r.value <= r.n and r.status == "stabilized" for r in t.records)
    return ok, f"dist={t.values()} status={sorted({r.status for r in t.records})}"


def _words_upto(k, n):
    return [w for L in range(n + 1) for w in product(range(k), repeat=L)]


def random_presentation(rng, field, nletters=2, max_rels=3, max_deg=3):
    rels = []
    ws = _words_upto(nletters, max_deg)
    while not rels:
        for _ in range(rng.randint(1, max_rels)):
            d = rng.randint(1, max_deg)
            pool = [w for w in ws if len(w) <= d]
            t = {}
            for _ in range(rng.randint(1, 3)):
                t[rng.choice(pool)] = rng.randint(-2, 2)
            p = NcPoly(field, t)
            if p:
                rels.append(p)
    return rels


def ideal_codims(rels, field, n_max, Ns, nletters=2):
    """codim of span{u r v : deg <= N} ∩ W_{<=n} for n = 0..n_max, per N in Ns."""
    S = Subspace(Coords(field, key=shortlex_key))
    out = {}
    for D in range(max(Ns) + 1):
        for r in rels:
            k = D - r.degree
            if k < 0:
                continue
            for i in range(k + 1):
                for u in product(range(nletters), repeat=i):
                    for v in product(range(nletters), repeat=k - i):
                        S.insert(r.sandwich(u, v).terms)
        if D in Ns:
            out[D] = [sum(nletters ** m for m in range(n + 1)) - S.restrict(lambda w, n=n: len(w) <= n).dim
                      for n in range(n_max + 1)]
    return out


def c7_gs_oracle(count=50, seed=7, n_max=6, N=10):
    """Oracle span built to degree N >= n + 4; stable if degree N + 1 agrees."""
    rng = random.Random(seed)
    xy = Alphabet("xy")
    mismatches, unstable = [], 0
    for i in range(count):
        F = QQ if i % 2 == 0 else GF5
        rels = random_presentation(rng, F)
        G = gs_complete(Presentation(F, xy, rels), N)
        gs = [len(normal_words(G, n)) for n in range(n_max + 1)]
        o = ideal_codims(rels, F, n_max, (N, N + 1))
        if o[N] != o[N + 1]:
            unstable += 1
        if gs != o[N]:
            mismatches.append((i, [p.format(xy) for p in rels], gs, o[N]))
    ok = not mismatches and unstable == 0
    return ok, f"presentations={count} mismatches={len(mismatches)} oracle_unstable={unstable}"


def lie_corpus():
    xy = Alphabet("xy")
    x, y = LiePoly.letter(QQ, 0), LiePoly.letter(QQ, 1)
    u = x.bracket(y)
    out = [
        [u.bracket(y)],
        [x.bracket(u)],
        [u],
        [x.bracket(u), u.bracket(y)],
        [u.bracket(y) + x.bracket(u)],
        [x.bracket(u).bracket(u)],
        [x.bracket(x.bracket(u)) - u.bracket(y).bracket(y)],
    ]
    return xy, out


def c8_lie_assoc(max_deg=7):
    xy, corpus = lie_corpus()
    bad = []
    for rels in corpus:
        G = lie_gs_complete(LiePresentation(QQ, xy, rels), max_deg)
        rep = lie_vs_assoc_closure(G.elements, max_deg)
        if not (rep.lie_closed and rep.assoc_closed):
            bad.append([r.format(xy) for r in rels])
    return not bad, f"bases={len(corpus)} failing={bad}"


def c9_umirbaev():
    xy = Alphabet("xy")
    out = []
    ok = True
    for g in ("x^2", "x*y - y*x"):
        r = umirbaev_check([parse_poly(g, xy, QQ)], max_deg=4)
        ok &= r.equal and r.stabilized
        out.append(f"{g}: dim={r.zf_dim}/{r.ideal_dim} counterexamples={len(r.counterexamples)}")
    return ok, "; ".join(out)


def c10_malcev():
    r1 = malcev_embedding(polynomial_algebra(QQ), ["t"], [f"t^{i}" for i in range(1, 13)], depth=12)
    r2 = malcev_embedding(truncated_algebra(QQ, ["t^2"], 10), ["t"], ["t"], depth=10)
    ok = all(r.checks["injective"] and r.checks["undistorted"] is True
             and "stabilized" in r.checks["status"] for r in (r1, r2))
    return ok, f"F[t]: dist={r1.checks.get('dist')} ranks={r1.checks['ranks']}; F[t]/(t^2): dist={r2.checks.get('dist')} ranks={r2.checks['ranks']}"


def c11_beta_lambda(depth=4, t_max=4):
    b1, b2 = flambda_family(1, n_max=depth), flambda_family(2, n_max=depth)
    top = t_max * depth
    m12 = is_majorated(b1.tower(depth), b2.tower(top), t_max)
    m21 = is_majorated(b2.tower(depth), b1.tower(top), t_max)
    fits = [tameness_fit(b.tower(depth)) for b in (b1, b2)]
    tame = all(f.hi <= 2 for f in fits)
    ok = m12.t is None and m21.t is None and tame
    return ok, (f"majorated(1 by 2) t={m12.t} majorated(2 by 1) t={m21.t} "
                f"tameness c<= {[str(f.hi) for f in fits]}")


def random_calculus_triple(rng, A, depth):
    k = len(A.alphabet)
    ws = _words_upto(k, 3)[1:]
    towers = []
    for _ in range(3):
        W = [({(a,): A.field.one}, rng.randint(1, 2)) for a in range(k)]
        for _ in range(rng.randint(0, 2)):
            t = {}
            for _ in range(rng.randint(1, 2)):
                t[rng.choice(ws)] = A.field(rng.randint(1, 3))
            W.append((t, rng.randint(1, 3)))
        towers.append(weighted_filtration(A, W, depth))
    B = Subspace(A.coords, [{rng.choice(ws): A.field.one, rng.choice(ws): A.field(2)} for _ in range(3)])
    return towers, B


def c12_calculus(trials=100, seed=12, depth=6):
    rng = random.Random(seed)
    A1 = polynomial_algebra(QQ)
    A2 = AssocAmbient.free(QQ, Alphabet("xy"))
    phis = {id(A1): lambda v: {w * 2: c for w, c in v.items()},
            id(A2): lambda v: {tuple(1 - a for a in w): c for w, c in v.items()}}
    checks, viol = 0, []
    for i in range(trials):
        A = A1 if i % 2 == 0 else A2
        (mu, nu, pi), B = random_calculus_triple(rng, A, depth)
        rep = distortion_calculus_check(mu, nu, pi, B, phis[id(A)], A.coords)
        checks += rep.checks
        viol += rep.violations
    return not viol, f"triples={trials} checks={checks} violations={len(viol)}"


CRITERIA = [
    (1, "Heisenberg center distortion is quadratic", c1_heisenberg),
    (2, "BS(1,2) cyclic subgroup distortion is exponential", c2_bs12),
    (3, "action machine plateaus and non-superadditivity", c3_action_machine),
    (4, "enveloping algebra distortion equals superadditive closure", c4_uea_closure),
    (5, "commutative subalgebras are undistorted", c5_commutative),
    (6, "free Lie subalgebra is undistorted", c6_free_lie),
    (7, "normal words match brute-force ideal codimension", c7_gs_oracle),
    (8, "Lie and associative closure agree", c8_lie_assoc),
    (9, "zf membership matches ideal membership", c9_umirbaev),
    (10, "xy^iz embedding is injective and undistorted", c10_malcev),
    (11, "beta^lambda towers are inequivalent and tame", c11_beta_lambda),
    (12, "distortion calculus holds on random triples", c12_calculus),
]


def run_one(number):
    for n, title, fn in CRITERIA:
        if n == number:
            t = time.time()
            try:
                ok, detail = fn()
            except Exception as e:  # report, do not hide
                ok, detail = False, f"error: {type(e).__name__}: {e}"
            return Result(n, title, bool(ok), detail, time.time() - t)
    raise KeyError(number)


def run_all(only=None):
    return [run_one(n) for n, _, _ in CRITERIA if only is None or n in only]

"""Subcommand implementations; each returns (stdout text, report records)."""

from fractions import Fraction
import json

from ..exactalg import Field
from ..words import Alphabet
from ..ncpoly import Presentation, gs_complete, reduce, NcPoly
from ..liepoly import LiePresentation, lie_gs_complete, lie_reduce
from ..filtration import (AssocAmbient, LieAmbient, standard_filtration, degree_filtration,
                          weighted_filtration, subalgebra_distortion, superadditive_closure,
                          is_majorated, tameness_fit)
from .. import groupmodels as gm
from .. import constructions as cons
from ..envelope import parse_structure, uea_distortion_pair
from .fileformat import PresentationFile, parse, render, _split_top


class UsageError(ValueError):
    pass


def load(path):
    with open(path, encoding="utf-8") as fh:
        return parse(fh.read())


def _max_rel(pf):
    return max((r.degree for r in pf.relations), default=0)


def _lie_presentation(pf):
    return LiePresentation(pf.field, pf.alphabet, list(pf.relations))


def ambient(pf, max_deg):
    """Ambient of the file with its GS basis verified to ``max_deg``."""
    d = max(max_deg, _max_rel(pf))
    if pf.kind == "lie":
        G = lie_gs_complete(_lie_presentation(pf), d) if pf.relations else None
        return LieAmbient(pf.field, pf.alphabet, G)
    return AssocAmbient.from_relations(pf.field, pf.alphabet, pf.relations, d, pf.unital)


def _elements(pf, spec):
    """Named subalgebra of the file, or a literal comma list."""
    if spec in pf.subalgebras:
        return list(pf.subalgebras[spec])
    try:
        return [pf.parse_element(p.strip()) for p in _split_top(spec)]
    except ValueError as e:
        raise UsageError(f"--sub {spec!r}: {e}") from None


def _tower(pf, A, name, n_max, mode="length"):
    if name in pf.weights:
        return weighted_filtration(A, pf.weights[name], n_max, mode)
    if name == "standard":
        return standard_filtration(A, n_max)
    return degree_filtration(A, _elements(pf, name), n_max)


def _ints(text, what):
    try:
        return [int(v) for v in text.split(",") if v.strip()]
    except ValueError:
        raise UsageError(f"{what}: expected comma-separated integers") from None


# ---- commands

def cmd_gs(args):
    pf = load(args.file)
    if pf.kind == "lie":
        G = lie_gs_complete(_lie_presentation(pf), args.max_deg)
    else:
        G = gs_complete(Presentation(pf.field, pf.alphabet, pf.relations, pf.unital), args.max_deg)
    lines = [f"# verified_degree={G.verified_degree} closed={'true' if G.closed else 'false'}",
             "leading\telement"]
    for g in G.elements:
        lines.append(f"{pf.alphabet.format(g.leading_word())}\t{g.format(pf.alphabet)}")
    rec = {"command": "gs", "elements": len(G.elements), "verified_degree": G.verified_degree,
           "closed": G.closed}
    return "\n".join(lines) + "\n", [rec]


def cmd_normal_form(args):
    pf = load(args.file)
    p = pf.parse_element(args.poly)
    d = max(args.max_deg or 0, p.degree, _max_rel(pf))
    if pf.kind == "lie":
        G = lie_gs_complete(_lie_presentation(pf), d)
        r = lie_reduce(p, G.elements)
    else:
        G = gs_complete(Presentation(pf.field, pf.alphabet, pf.relations, pf.unital), d)
        r = reduce(p, G)
    return r.format(pf.alphabet) + "\n", [{"command": "normal-form", "verified_degree": d,
                                           "closed": G.closed}]


def cmd_dims(args):
    pf = load(args.file)
    A = ambient(pf, args.max_deg or args.max_n)
    if args.weights:
        if args.weights not in pf.weights:
            raise UsageError(f"no weights named {args.weights!r}")
        T = weighted_filtration(A, pf.weights[args.weights], args.max_n, args.mode)
    elif args.sub:
        T = degree_filtration(A, _elements(pf, args.sub), args.max_n)
    else:
        T = standard_filtration(A, args.max_n)
    return T.to_tsv(), [{"command": "dims", "dims": T.dims()}]


def cmd_dist(args):
    pf = load(args.file)
    if args.max_deg is None:
        graded = all(r.is_homogeneous() for r in pf.relations)
        args.max_deg = args.max_n if graded else 2 * args.max_n
    A = ambient(pf, args.max_deg)
    gens = _elements(pf, args.sub)
    t = subalgebra_distortion(A, gens, args.max_n, args.cap, args.window)
    return t.to_tsv(), [{"command": "dist", "values": t.values(),
                         "status": [r.status for r in t.records]}]


def cmd_majorate(args):
    pf = load(args.file)
    top = args.t_max * args.max_n
    A = ambient(pf, args.max_deg or top)
    left = _tower(pf, A, args.left, args.max_n, args.mode)
    right = _tower(pf, A, args.right, top, args.mode)
    m = is_majorated(left, right, args.t_max)
    lines = [f"t\t{m.t if m.t is not None else 'none'}"]
    for t in sorted(m.failures):
        lines.append(f"fails\t{t}\t{m.failures[t]}")
    return "\n".join(lines) + "\n", [{"command": "majorate", "t": m.t,
                                      "failures": {str(k): v for k, v in m.failures.items()}}]


def cmd_closure(args):
    f = _ints(args.values, "--values")
    if not f:
        raise UsageError("--values is empty")
    g = superadditive_closure(f)
    return "".join(f"{n}\t{v}\n" for n, v in enumerate(g, 1)), [{"command": "closure", "values": g}]


def cmd_group_dist(args):
    if args.model == "action-machine":
        f = gm.action_distortion(args.max_n, args.start_level)
        lines = ["n\tdist\tstatus"] + [f"{n}\t{v}\tstabilized" for n, v in enumerate(f, 1)]
        viol = gm.superadditivity_violations(f)
        return "\n".join(lines) + "\n", [{"command": "group-dist", "model": args.model, "values": f,
                                          "superadditivity_violations": [list(v) for v in viol[:10]]}]
    try:
        model = gm.model_by_name(args.model)
    except ValueError as e:
        raise UsageError(str(e)) from None
    try:
        oracle = gm.subgroup_selector(model, args.sub, args.max_n)
    except ValueError as e:
        raise UsageError(str(e)) from None
    t = gm.subgroup_distortion(model, oracle, args.max_n, args.budget)
    rec = {"command": "group-dist", "model": args.model, "sub": args.sub, "values": t.values()}
    if args.bridge or args.check_n is not None:
        t, check = gm.group_algebra_bridge(t, model, oracle, args.check_n)
        if check is not None:
            rec["bridge_agree"], rec["bridge_values"] = check
    rec["label"] = t.label
    return t.to_tsv(), [rec]


def cmd_uea(args):
    F = Field.rational()
    with open(args.structure, encoding="utf-8") as fh:
        L = parse_structure(fh.read(), F)
    S = [s for s in args.gens.split(",") if s]
    T = [s for s in args.sub.split(",") if s]
    rep = uea_distortion_pair(L, S, T, args.max_n)
    lines = ["n\tlie\tuea\tclosure"]
    for n in range(args.max_n):
        lines.append(f"{n + 1}\t{rep.lie_dist[n]}\t{rep.uea_dist[n]}\t{rep.closure[n]}")
    return "\n".join(lines) + "\n", [{"command": "uea", "lie": rep.lie_dist, "uea": rep.uea_dist,
                                      "closure": rep.closure, "equal": rep.equal}]


def _emit(field, alphabet, rels, unital=True, weights=None, subs=None):
    pf = PresentationFile(field, alphabet, "assoc", unital, list(rels))
    pf.weights = weights or {}
    pf.subalgebras = subs or {}
    return render(pf)


def cmd_construct(args):
    kind = args.what
    recs = [{"command": "construct", "what": kind}]
    if kind == "flambda":
        d = _ints(args.d, "--d") if args.d else None
        ws = cons.flambda_family(Fraction(args.lam), d, args.max_n)
        A = ws.ambient
        pairs = [(NcPoly(A.field, v), w) for v, w in ws.items]
        text = _emit(A.field, A.alphabet, [], weights={"flambda": pairs})
        T = ws.tower(args.max_n)
        fit = tameness_fit(T) if args.max_n >= 2 else None
        recs.append({"check": "dims", "value": T.dims()})
        if fit is not None:
            recs.append({"check": "tameness_hi", "value": str(fit.hi)})
        return text, recs
    if args.file is None:
        raise UsageError(f"construct {kind} needs an input file")
    pf = load(args.file)
    F = pf.field
    if kind == "malcev":
        B = ambient(pf, args.depth)
        S = _elements(pf, args.gens) if args.gens else [NcPoly(F, {(a,): F.one}) for a in range(len(pf.alphabet))]
        if args.enum:
            enum = _elements(pf, args.enum)
        else:
            words = [w for w in B.labels_upto(args.depth) if w]
            if not words:
                raise UsageError("algebra has no nonconstant elements")
            enum = [NcPoly(F, {words[i % len(words)]: F.one}) for i in range(args.depth)]
        rep = cons.malcev_embedding(B, [s.terms for s in S], [e.terms for e in enum], args.depth)
        recs += rep.report_lines()
        return _emit(F, cons.MALCEV_ALPHABET, rep.presentation.relations), recs
    if kind == "umirbaev":
        if pf.alphabet != Alphabet("xy"):
            raise UsageError("umirbaev needs letters x y")
        gens = cons.umirbaev_pair(pf.relations, F)
        rep = cons.umirbaev_check(pf.relations, args.max_n, args.cap or 8)
        recs.append({"check": "equal", "value": rep.equal})
        recs.append({"check": "stabilized", "value": rep.stabilized})
        recs.append({"check": "dims", "value": [rep.zf_dim, rep.ideal_dim]})
        return _emit(F, cons.UMIRBAEV_ALPHABET, [], subs={"B": gens}), recs
    if kind == "mikhailova":
        D, gens = cons.mikhailova_pair(pf.relations, pf.alphabet, F)
        rep = cons.mikhailova_check(pf.relations, pf.alphabet, F, args.max_n, args.cap)
        lines = ["left\tright"]
        for g in gens:
            lt = NcPoly(F, {w: c for (s, w), c in g.items() if s == 0})
            rt = NcPoly(F, {w: c for (s, w), c in g.items() if s == 1})
            lines.append(f"{lt.format(pf.alphabet)}\t{rt.format(pf.alphabet)}")
        recs += [{"check": "ok", "value": rep.ok}, {"check": "kernel_dims", "value": rep.kernel_dims},
                 {"check": "ideal_dims", "value": rep.ideal_dims},
                 {"check": "projection_ok", "value": rep.projection_ok}]
        return "\n".join(lines) + "\n", recs
    if kind == "lambda":
        A = ambient(pf, 64)
        ws = cons.lambda_weights(A, Fraction(args.lam), args.count, args.mode)
        pairs = [(NcPoly(F, v), w) for v, w in ws.items]
        recs.append({"check": "lower_bound_violations",
                     "value": len(cons.lambda_lower_bound_check(ws, Fraction(args.lam), args.max_n))})
        return _emit(F, pf.alphabet, pf.relations, pf.unital, weights={"lambda": pairs}), recs
    if kind == "tame-embed":
        A = ambient(pf, args.depth)
        T = _tower(pf, A, args.tower, args.depth, args.mode)
        rep = cons.tame_to_degree_embedding(T, args.depth)
        recs += rep.report_lines()
        return _emit(F, Alphabet("xy"), rep.presentation.relations), recs
    raise UsageError(f"unknown construction {kind!r}")


def cmd_verify(args):
    from ..acceptance import run_all
    only = set(_ints(args.only, "--only")) if args.only else None
    res = run_all(only)
    text = "".join(r.line(timing=False) + "\n" for r in res)
    recs = [{"criterion": r.number, "ok": r.ok, "detail": r.detail} for r in res]
    return text, recs, 0 if all(r.ok for r in res) else 1


def dump_records(recs, path):
    with open(path, "w", encoding="utf-8") as fh:
        for r in recs:
            fh.write(json.dumps(r, sort_keys=True, default=str) + "\n")

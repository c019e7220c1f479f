import json

import pytest
from hypothesis import given, strategies as st

from filtdist.cli import main, parse, render, same, FileSyntaxError
from filtdist.liepoly import LiePoly
from filtdist.ncpoly import NcPoly


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def write(tmp_path, name, text):
    p = tmp_path / name
    p.write_text(text, encoding="utf-8")
    return str(p)


def test_parse_minimal():
    pf = parse("letters x y\nrelation x*y - y*x\n")
    assert len(pf.relations) == 1 and isinstance(pf.relations[0], NcPoly)


def test_parse_prime_six_rejected():
    with pytest.raises(FileSyntaxError) as e:
        parse("field prime 6\nletters x\n")
    assert e.value.line == 1


def test_parse_lie_relation():
    pf = parse("letters x y\nkind lie\nrelation [x,[x,y]]\n")
    assert isinstance(pf.relations[0], LiePoly)


def test_parse_errors_have_positions():
    with pytest.raises(FileSyntaxError) as e:
        parse("letters x y x\n")
    assert (e.value.line, e.value.col) == (1, 9)
    with pytest.raises(FileSyntaxError) as e:
        parse("letters x y\n\nrelation x - x\n")
    assert e.value.line == 3
    with pytest.raises(FileSyntaxError) as e:
        parse("letters x y\nrelation x*q\n")
    assert e.value.line == 2
    with pytest.raises(FileSyntaxError):
        parse("letters x y\nkind lie\nrelation x*x\n")
    with pytest.raises(FileSyntaxError):
        parse("relation x\n")


def test_subalgebras_and_weights():
    pf = parse("letters t\nsubalgebra S: t^2, t^3\nweights W: (t, 1), (t^2, 3)\n")
    assert len(pf.subalgebras["S"]) == 2
    assert [w for _, w in pf.weights["W"]] == [1, 3]


letter_sets = st.sampled_from([["x"], ["x", "y"], ["a", "b", "c"]])


@st.composite
def files(draw):
    letters = draw(letter_sets)
    kind = draw(st.sampled_from(["assoc", "lie"])) if len(letters) > 1 else "assoc"
    field = draw(st.sampled_from(["field rational", "field prime 5", "field prime 2"]))
    lines = [f"# sample", field, "letters " + " ".join(letters), f"kind {kind}",
             f"unital {draw(st.sampled_from(['true', 'false']))}"]
    atom = st.sampled_from(letters)

    def assoc_poly():
        terms = draw(st.lists(st.tuples(st.integers(1, 4), st.lists(atom, min_size=1, max_size=3)),
                              min_size=1, max_size=3))
        return " + ".join(f"{c}*" + "*".join(w) for c, w in terms)

    def lie_poly():
        def tree(d):
            if d == 0 or draw(st.booleans()):
                return draw(atom)
            return f"[{tree(d - 1)},{tree(d - 1)}]"
        parts = [f"{draw(st.integers(1, 3))}*{tree(3)}" for _ in range(draw(st.integers(1, 2)))]
        return " - ".join(parts)

    mk = lie_poly if kind == "lie" else assoc_poly
    for _ in range(draw(st.integers(0, 3))):
        lines.append("relation " + mk())
    if draw(st.booleans()):
        lines.append("subalgebra S: " + ", ".join(mk() for _ in range(2)))
    if draw(st.booleans()):
        lines.append("weights W: " + ", ".join(f"({mk()}, {draw(st.integers(1, 4))})" for _ in range(2)))
    return "\n".join(lines) + "\n"


def _parse_or_none(text):
    try:
        return parse(text)
    except FileSyntaxError:
        return None


@given(files())
def test_roundtrip(text):
    a = _parse_or_none(text)
    if a is None:
        return
    b = parse(render(a))
    assert same(a, b)
    assert render(b) == render(a)


def test_closure_example(capsys):
    code, out, _ = run(capsys, "closure", "--values", "0,1,1,1")
    assert code == 0 and out == "1\t0\n2\t1\n3\t1\n4\t2\n"


def test_group_dist_example(capsys):
    code, out, _ = run(capsys, "group-dist", "--model", "bs12", "--sub", "b-cyclic", "--max-n", "7")
    last = out.strip().splitlines()[-1].split("\t")
    assert code == 0 and last[0] == "7" and int(last[1]) >= 8


def test_dist_example(tmp_path, capsys):
    f = write(tmp_path, "ft.txt", "field rational\nletters t\n")
    code, out, _ = run(capsys, "dist", f, "--sub", "t^2,t^3", "--max-n", "6")
    assert code == 0 and out.strip().splitlines()[-1] == "6\t2\tstabilized"


def test_exit_codes(tmp_path, capsys):
    bad = write(tmp_path, "bad.txt", "field prime 6\nletters x\n")
    assert run(capsys, "dims", bad, "--max-n", "2")[0] == 2
    assert run(capsys, "closure", "--values", "a,b")[0] == 2
    with pytest.raises(SystemExit) as e:
        main(["nosuch"])
    assert e.value.code == 2
    assert run(capsys, "group-dist", "--model", "free-group:3", "--max-n", "9", "--budget", "100")[0] == 3
    ok = write(tmp_path, "nh.txt", "letters x y\nrelation x^2*y - y*x - 1\n")
    assert run(capsys, "gs", ok, "--max-deg", "2")[0] == 3


def test_out_report(tmp_path, capsys):
    f = write(tmp_path, "ft.txt", "letters t\n")
    rep = tmp_path / "r.jsonl"
    code, _, _ = run(capsys, "--out", str(rep), "dist", f, "--sub", "t^2,t^3", "--max-n", "4")
    rec = [json.loads(line) for line in rep.read_text().splitlines()]
    assert code == 0 and rec[0]["values"] == [0, 0, 1, 1, 2]


def test_construct_emits_presentation(tmp_path, capsys):
    f = write(tmp_path, "line.txt", "letters t\n")
    rep = tmp_path / "m.jsonl"
    code, out, _ = run(capsys, "construct", "malcev", f, "--depth", "6", "--out", str(rep))
    assert code == 0
    pf = parse(out)
    assert [a for a in pf.alphabet.letters] == ["x", "y", "z"]
    checks = {r["check"]: r["value"] for r in map(json.loads, rep.read_text().splitlines()) if "check" in r}
    assert checks["injective"] is True


def test_deterministic_and_thread_independent(tmp_path, capsys):
    f = write(tmp_path, "c.txt", "letters x y\nrelation y*x - x*y - x\n")
    outs = set()
    for threads in ("1", "4", "1"):
        code, out, _ = run(capsys, "--threads", threads, "dims", f, "--max-n", "5")
        outs.add(out)
        code2, out2, _ = run(capsys, "--threads", threads, "gs", f, "--max-deg", "6")
        outs.add(out2)
    assert len(outs) == 2


def test_majorate_and_normal_form(tmp_path, capsys):
    f = write(tmp_path, "c.txt", "letters x y\nrelation y*x - x*y\nsubalgebra S: x, x + y, x*y\n")
    code, out, _ = run(capsys, "normal-form", f, "--poly", "y*x*y")
    assert code == 0 and out == "x*y^2\n"
    code, out, _ = run(capsys, "majorate", f, "--left", "standard", "--right", "S", "--t-max", "2", "--max-n", "3")
    assert code == 0 and out.startswith("t\t1")


def test_uea_command(tmp_path, capsys):
    f = write(tmp_path, "h.txt", "basis a b c\nbracket a b = 1*c\n")
    code, out, _ = run(capsys, "uea", "--structure", f, "--gens", "a,b", "--sub", "c", "--max-n", "6")
    rows = [line.split("\t") for line in out.strip().splitlines()[1:]]
    assert code == 0 and [r[2] for r in rows] == [str(n // 2) for n in range(1, 7)]

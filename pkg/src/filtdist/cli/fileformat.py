"""Line-oriented presentation files.

    # comment
    field rational | field prime <p>
    letters x y
    kind assoc | lie
    unital true | false
    relation <poly or bracket expression>
    subalgebra <name>: <poly>, <poly>
    weights <name>: (<poly>, <int>), (<poly>, <int>)

Directives before the first polynomial fix the field and letters.
"""

from dataclasses import dataclass, field as dc_field
from fractions import Fraction
import re

from ..exactalg import Field
from ..words import Alphabet
from ..ncpoly import parse_poly
from ..liepoly import LiePoly, NotLieError


class FileSyntaxError(ValueError):
    def __init__(self, line, col, msg):
        super().__init__(f"line {line}, column {col}: {msg}")
        self.line, self.col, self.msg = line, col, msg


@dataclass
class PresentationFile:
    field: Field
    alphabet: Alphabet
    kind: str = "assoc"
    unital: bool = True
    relations: list = dc_field(default_factory=list)
    subalgebras: dict = dc_field(default_factory=dict)
    weights: dict = dc_field(default_factory=dict)

    def parse_element(self, text):
        if self.kind == "lie":
            return parse_lie(text, self.alphabet, self.field)
        return parse_poly(text, self.alphabet, self.field)

    def format_element(self, p):
        return p.format(self.alphabet)


# ---- bracket expressions

_TOKEN = re.compile(r"(\d+(?:/\d+)?)|([A-Za-z_][A-Za-z_0-9]*)|(\S)")


class _LieParser:
    def __init__(self, text, alphabet, field):
        self.src = text
        self.al = alphabet
        self.F = field
        self.toks = []
        for m in _TOKEN.finditer(text):
            kind = "num" if m.group(1) else "name" if m.group(2) else "op"
            self.toks.append((kind, m.group(), m.start() + 1))
        self.i = 0

    def peek(self):
        return self.toks[self.i] if self.i < len(self.toks) else ("end", "", len(self.src) + 1)

    def take(self, val=None):
        t = self.peek()
        if val is not None and t[1] != val:
            raise ValueError(f"column {t[2]}: expected {val!r}, found {t[1] or 'end'!r}")
        self.i += 1
        return t

    def expr(self):
        sign = 1
        if self.peek()[1] in "+-" and self.peek()[0] == "op":
            sign = -1 if self.take()[1] == "-" else 1
        out = self.term().scale(sign)
        while self.peek()[0] == "op" and self.peek()[1] in ("+", "-"):
            s = self.take()[1]
            t = self.term()
            out = out + t if s == "+" else out - t
        return out

    def term(self):
        t = self.peek()
        c = 1
        if t[0] == "num":
            self.take()
            c = Fraction(t[1])
            if self.peek()[1] != "*":
                if c:
                    raise ValueError(f"column {t[2]}: a Lie element cannot be a nonzero constant")
                return LiePoly(self.F)
            self.take("*")
        return self.atom().scale(self.F(c))

    def atom(self):
        t = self.peek()
        if t[0] == "name":
            self.take()
            try:
                return LiePoly.letter(self.F, self.al.index(t[1]))
            except ValueError:
                raise ValueError(f"column {t[2]}: unknown letter {t[1]!r}") from None
        if t[1] == "[":
            self.take()
            a = self.expr()
            self.take(",")
            b = self.expr()
            self.take("]")
            return a.bracket(b)
        if t[1] == "(":
            self.take()
            a = self.expr()
            self.take(")")
            return a
        raise ValueError(f"column {t[2]}: unexpected {t[1] or 'end'!r}")


def parse_lie(text, alphabet, field):
    p = _LieParser(text, alphabet, field)
    out = p.expr()
    if p.peek()[0] != "end":
        t = p.peek()
        raise ValueError(f"column {t[2]}: unexpected {t[1]!r}")
    return out


# ---- file parser

def _split_top(text, sep=","):
    """Split on sep outside brackets and parentheses."""
    parts, depth, cur = [], 0, []
    for ch in text:
        if ch in "[(":
            depth += 1
        elif ch in "])":
            depth -= 1
        if ch == sep and depth == 0:
            parts.append("".join(cur))
            cur = []
        else:
            cur.append(ch)
    parts.append("".join(cur))
    return parts


def parse(text):
    pending = []   # directives needing the alphabet

    def col_of(raw, piece):
        i = raw.find(piece)
        return i + 1 if i >= 0 else 1

    state = {"field": Field.rational(), "kind": "assoc", "unital": True, "alphabet": None}
    for ln, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].rstrip()
        body = line.strip()
        if not body:
            continue
        head, _, rest = body.partition(" ")
        rest = rest.strip()
        rcol = col_of(raw, rest) if rest else len(raw) + 1
        if head == "field":
            parts = rest.split()
            if parts == ["rational"]:
                state["field"] = Field.rational()
            elif len(parts) == 2 and parts[0] == "prime" and parts[1].isdigit():
                try:
                    state["field"] = Field.prime(int(parts[1]))
                except ValueError as e:
                    raise FileSyntaxError(ln, rcol, str(e)) from None
            else:
                raise FileSyntaxError(ln, rcol, "expected 'rational' or 'prime <p>'")
        elif head == "letters":
            names = rest.split()
            if not names:
                raise FileSyntaxError(ln, rcol, "no letters")
            for n in names:
                if not re.fullmatch(r"[A-Za-z_][A-Za-z_0-9]*", n):
                    raise FileSyntaxError(ln, col_of(raw, n), f"bad letter name {n!r}")
            if len(set(names)) != len(names):
                dup = next(n for n in names if names.count(n) > 1)
                raise FileSyntaxError(ln, col_of(raw, dup), f"duplicate letter {dup!r}")
            state["alphabet"] = Alphabet(names)
        elif head == "kind":
            if rest not in ("assoc", "lie"):
                raise FileSyntaxError(ln, rcol, "expected 'assoc' or 'lie'")
            state["kind"] = rest
        elif head == "unital":
            if rest not in ("true", "false"):
                raise FileSyntaxError(ln, rcol, "expected 'true' or 'false'")
            state["unital"] = rest == "true"
        elif head in ("relation", "subalgebra", "weights"):
            pending.append((ln, raw, head, rest, rcol))
        else:
            raise FileSyntaxError(ln, 1 + len(raw) - len(raw.lstrip()), f"unknown directive {head!r}")
    if state["alphabet"] is None:
        if pending:
            raise FileSyntaxError(pending[0][0], 1, "missing 'letters' line")
        raise FileSyntaxError(1, 1, "missing 'letters' line")
    pf = PresentationFile(state["field"], state["alphabet"], state["kind"], state["unital"])
    for ln, raw, head, rest, rcol in pending:
        if head == "relation":
            p = _elem(pf, rest, ln, rcol)
            if not p:
                raise FileSyntaxError(ln, rcol, "relation is zero")
            pf.relations.append(p)
        else:
            name, colon, items = rest.partition(":")
            name = name.strip()
            if not colon or not re.fullmatch(r"[A-Za-z_][A-Za-z_0-9.-]*", name):
                raise FileSyntaxError(ln, rcol, f"expected '{head} <name>: ...'")
            base = rcol + len(rest) - len(items)
            if head == "subalgebra":
                if name in pf.subalgebras:
                    raise FileSyntaxError(ln, rcol, f"duplicate subalgebra {name!r}")
                elems = []
                off = 0
                for piece in _split_top(items):
                    elems.append(_elem(pf, piece, ln, base + off))
                    off += len(piece) + 1
                pf.subalgebras[name] = elems
            else:
                if name in pf.weights:
                    raise FileSyntaxError(ln, rcol, f"duplicate weights {name!r}")
                pairs = []
                for m in re.finditer(r"\(([^()]*(?:\([^()]*\)[^()]*)*)\)", items):
                    inner = m.group(1)
                    pieces = _split_top(inner)
                    c = base + m.start() + 1
                    if len(pieces) != 2 or not pieces[1].strip().lstrip("-").isdigit():
                        raise FileSyntaxError(ln, c, "expected (<poly>, <int>)")
                    pairs.append((_elem(pf, pieces[0], ln, c), int(pieces[1])))
                leftover = re.sub(r"\(([^()]*(?:\([^()]*\)[^()]*)*)\)", "", items).replace(",", "").strip()
                if leftover or not pairs:
                    raise FileSyntaxError(ln, base, "expected (<poly>, <int>)[, ...]")
                pf.weights[name] = pairs
    return pf


def _elem(pf, text, ln, col):
    try:
        return pf.parse_element(text.strip())
    except NotLieError as e:
        raise FileSyntaxError(ln, col, f"not a Lie element: {e}") from None
    except (ValueError, ZeroDivisionError) as e:
        msg = str(e)
        m = re.search(r"column (\d+)", msg)
        c = col + int(m.group(1)) - 1 if m else col
        raise FileSyntaxError(ln, c, msg) from None


def render(pf):
    """Normalized text; parse(render(parse(t))) == parse(t)."""
    F = pf.field
    lines = ["field rational" if F.p is None else f"field prime {F.p}",
             "letters " + " ".join(pf.alphabet.letters),
             f"kind {pf.kind}",
             f"unital {'true' if pf.unital else 'false'}"]
    for r in pf.relations:
        lines.append("relation " + pf.format_element(r))
    for name, elems in pf.subalgebras.items():
        lines.append(f"subalgebra {name}: " + ", ".join(pf.format_element(e) for e in elems))
    for name, pairs in pf.weights.items():
        lines.append(f"weights {name}: " + ", ".join(f"({pf.format_element(e)}, {w})" for e, w in pairs))
    return "\n".join(lines) + "\n"


def same(a, b):
    """Structural equality of two parsed files."""
    return (a.field == b.field and a.alphabet == b.alphabet and a.kind == b.kind
            and a.unital == b.unital and a.relations == b.relations
            and a.subalgebras == b.subalgebras
            and {k: [(e, w) for e, w in v] for k, v in a.weights.items()}
            == {k: [(e, w) for e, w in v] for k, v in b.weights.items()})

"""Words over an ordered alphabet.

A word is a tuple of letter indices; index order is letter order, so the
last declared letter is the largest.  The empty tuple is the unit.

Two orders are used.  Shortlex compares length first.  The Shirshov order
is lexicographic except that a proper prefix is *greater* than its
extensions; on words of equal length the two lexicographic rules agree.

Regular words (strictly larger than every proper cyclic shift) coincide
with Lyndon words for the reversed letter order, which lets the usual
Duval machinery do the work.

>>> X = Alphabet("yx")          # y < x
>>> is_regular(X.parse("xy")), is_regular(X.parse("xx"))
(True, False)
"""

from dataclasses import dataclass
from itertools import product
import re


class AlphabetMismatchError(ValueError):
    pass


class Alphabet:
    __slots__ = ("letters", "_index")

    def __init__(self, letters):
        letters = tuple(letters)
        if not letters:
            raise ValueError("alphabet needs at least one letter")
        if len(set(letters)) != len(letters):
            raise ValueError(f"duplicate letters in {letters}")
        self.letters = letters
        self._index = {a: i for i, a in enumerate(letters)}

    def __len__(self):
        return len(self.letters)

    def __eq__(self, o):
        return isinstance(o, Alphabet) and self.letters == o.letters

    def __hash__(self):
        return hash(self.letters)

    def __repr__(self):
        return f"Alphabet({list(self.letters)!r})"

    def index(self, name):
        try:
            return self._index[name]
        except KeyError:
            raise ValueError(f"unknown letter {name!r}") from None

    def parse(self, text):
        """Parse ``x^3*y*w``, ``xxy`` (single-character letters) or ``1``."""
        text = text.replace(" ", "")
        if text in ("", "1"):
            return ()
        out = []
        for part in text.split("*"):
            m = re.fullmatch(r"([A-Za-z_][A-Za-z_0-9]*)(?:\^(\d+))?", part)
            if not m:
                raise ValueError(f"bad word factor {part!r}")
            name, k = m.group(1), int(m.group(2) or 1)
            if name in self._index:
                out.extend([self._index[name]] * k)
            elif all(ch in self._index for ch in name):
                seq = [self._index[ch] for ch in name]
                out.extend(seq[:-1])
                out.extend([seq[-1]] * k)
            else:
                raise ValueError(f"unknown letter in {name!r}")
        return tuple(out)

    def format(self, w, compact=False):
        if not w:
            return "1"
        if compact and all(len(a) == 1 for a in self.letters):
            return "".join(self.letters[i] for i in w)
        parts = []
        i = 0
        while i < len(w):
            j = i
            while j < len(w) and w[j] == w[i]:
                j += 1
            name = self.letters[w[i]]
            parts.append(name if j - i == 1 else f"{name}^{j - i}")
            i = j
        return "*".join(parts)


# ---- orders

def shortlex_key(w):
    return (len(w), w)


def _sign(a, b):
    return (a > b) - (a < b)


def shortlex_cmp(u, v):
    return _sign(shortlex_key(u), shortlex_key(v))


def shirshov_cmp(u, v):
    for a, b in zip(u, v):
        if a != b:
            return -1 if a < b else 1
    # one is a prefix of the other: the shorter one is greater
    return _sign(len(v), len(u))


def _rev(w):
    return tuple(-a for a in w)


# ---- regular words

def is_regular(w):
    if not w:
        raise ValueError("regularity is undefined for the empty word")
    n = len(w)
    r = _rev(w)
    # Lyndon test (reversed order): strictly smaller than each proper suffix
    return all(r < r[i:] for i in range(1, n))


def cfl_factorization(w):
    """Split w into regular factors c1, ..., cm with c1 ⪯ ... ⪯ cm (Shirshov)."""
    r = _rev(w)
    n = len(r)
    out = []
    i = 0
    while i < n:
        j, k = i + 1, i
        while j < n and r[k] <= r[j]:
            k = i if r[k] < r[j] else k + 1
            j += 1
        while i <= k:
            out.append(w[i:i + j - k])
            i += j - k
    return out


def longest_regular_suffix(w):
    """Longest proper regular suffix of w (len(w) >= 2)."""
    for i in range(1, len(w)):
        if is_regular(w[i:]):
            return w[i:]
    raise ValueError("word of length < 2")


def regular_words(nletters, n):
    """All regular words of length exactly n, in shortlex order."""
    return [w for w in product(range(nletters), repeat=n) if is_regular(w)]


def is_subword(v, w):
    m = len(v)
    return any(w[i:i + m] == v for i in range(len(w) - m + 1))


# ---- overlaps

@dataclass(frozen=True)
class Overlap:
    """Composition site for a pair (u, v).

    intersection: w = u + right = left + v, with a nonempty proper border
    inclusion:    w = u = left + v + right
    """

    kind: str
    w: tuple
    left: tuple
    right: tuple


def overlaps(u, v):
    out = []
    lu, lv = len(u), len(v)
    for k in range(1, min(lu, lv)):
        if u[lu - k:] == v[:k]:
            w = u + v[k:]
            out.append(Overlap("intersection", w, u[:lu - k], v[k:]))
    for i in range(lu - lv + 1):
        if u[i:i + lv] == v:
            out.append(Overlap("inclusion", u, u[:i], u[i + lv:]))
    return out


def nonoverlap_check(M):
    """(True, None) or (False, description of the first violation)."""
    M = sorted(set(M), key=shortlex_key)
    for u in M:
        for v in M:
            for k in range(1, min(len(u), len(v)) + (0 if u == v else 1)):
                if u[len(u) - k:] == v[:k]:
                    return False, ("border", u, v, u[len(u) - k:])
            if u != v and is_subword(v, u):
                return False, ("subword", v, u)
    return True, None


# ---- exponential non-overlapping families

def _family_letters(kind, alphabet):
    need = ("x", "y", "z") if kind == "malcev" else ("x", "y")
    if alphabet is None:
        alphabet = Alphabet(need)
    return alphabet, [alphabet.index(a) for a in need]


def _runs_ok(s, limit=3):
    run = 1
    for i in range(1, len(s)):
        run = run + 1 if s[i] == s[i - 1] else 1
        if run >= limit:
            return False
    return True


def gen_nonoverlap_family(kind, max_len, alphabet=None):
    """Members of length <= max_len, shortlex sorted."""
    if kind not in ("malcev", "assoc_wings", "lie_wings"):
        raise ValueError(f"unknown family {kind!r}")
    alphabet, idx = _family_letters(kind, alphabet)
    out = []
    if kind == "malcev":
        x, y, z = idx
        out = [(x,) + (y,) * i + (z,) for i in range(max_len - 1)]
    elif kind == "assoc_wings":
        x, y = idx
        for k in range(max_len - 7):
            for w in product((x, y), repeat=k):
                if _runs_ok((y,) + w + (x,)):
                    out.append((x,) * 3 + (y,) + w + (x,) + (y,) * 3)
    else:
        x, y = idx
        t = 2
        while 3 * t + 2 <= max_len:
            out.append((x,) * t + (x, y) * t + (y, y))
            t += 1
    return sorted(out, key=shortlex_key)


def count_family(kind, n, others=2):
    """Number of members of length exactly n.

    ``xuy`` is the many-letter family x·u·y (u free of x, y) over ``others``
    extra letters, padded with ``others`` one-letter and ``others**2``
    two-letter words.
    """
    if n < 1:
        raise ValueError("n must be >= 1")
    if kind == "malcev":
        return 1 if n >= 2 else 0
    if kind == "lie_wings":
        return 1 if n >= 8 and (n - 2) % 3 == 0 else 0
    if kind == "xuy":
        c = others
        if n == 1:
            return c
        if n == 2:
            return 1 + c * c
        return c ** (n - 2)
    if kind == "assoc_wings":
        k = n - 8
        if k < 0:
            return 0
        # strings y·w·x of length k+2 with no run of length 3
        # state: (last letter, run length); letters 0=x, 1=y
        states = {(1, 1): 1}
        for _ in range(k + 1):
            nxt = {}
            for (a, r), c in states.items():
                for b in (0, 1):
                    r2 = r + 1 if b == a else 1
                    if r2 < 3:
                        nxt[(b, r2)] = nxt.get((b, r2), 0) + c
            states = nxt
        return sum(c for (a, r), c in states.items() if a == 0)
    raise ValueError(f"unknown family {kind!r}")

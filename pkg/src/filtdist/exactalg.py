"""Exact scalars over Q and GF(p), and row-reduced subspaces with labelled coordinates.

Vectors are sparse dicts ``label -> scalar``.  A :class:`Coords` object fixes
the field and the column order (a sort key on labels); the pivot of a row is
its largest label under that order.  Rows of a :class:`Subspace` are kept in
reduced echelon form, so a coordinate subspace that is a down-set of the
column order can be intersected by simply keeping the rows whose pivot lies
in it.

>>> F = Field.rational()
>>> rref([[1, 2], [2, 4]], F)
([[Fraction(1, 1), Fraction(2, 1)]], 1)
"""

from fractions import Fraction


class FieldMismatchError(TypeError):
    pass


class AmbientMismatchError(ValueError):
    pass


def is_prime(p):
    if p < 2:
        return False
    i = 2
    while i * i <= p:
        if p % i == 0:
            return False
        i += 1
    return True


class Mod:
    """Residue class modulo a prime."""

    __slots__ = ("v", "p")

    def __init__(self, v, p):
        self.v = v % p
        self.p = p

    def _other(self, o):
        if isinstance(o, Mod):
            if o.p != self.p:
                raise FieldMismatchError(f"GF({self.p}) vs GF({o.p})")
            return o.v
        if isinstance(o, int):
            return o
        raise FieldMismatchError(f"GF({self.p}) vs {type(o).__name__}")

    def __add__(self, o):
        return Mod(self.v + self._other(o), self.p)

    __radd__ = __add__

    def __sub__(self, o):
        return Mod(self.v - self._other(o), self.p)

    def __rsub__(self, o):
        return Mod(self._other(o) - self.v, self.p)

    def __mul__(self, o):
        return Mod(self.v * self._other(o), self.p)

    __rmul__ = __mul__

    def __neg__(self):
        return Mod(-self.v, self.p)

    def inverse(self):
        if self.v == 0:
            raise ZeroDivisionError("inverse of 0 in GF(%d)" % self.p)
        return Mod(pow(self.v, -1, self.p), self.p)

    def __truediv__(self, o):
        if not isinstance(o, Mod):
            o = Mod(self._other(o), self.p)
        return self * o.inverse()

    def __rtruediv__(self, o):
        return Mod(self._other(o), self.p) * self.inverse()

    def __pow__(self, k):
        if k < 0:
            return self.inverse() ** (-k)
        return Mod(pow(self.v, k, self.p), self.p)

    def __eq__(self, o):
        if isinstance(o, Mod):
            return self.p == o.p and self.v == o.v
        if isinstance(o, int):
            return (self.v - o) % self.p == 0
        return NotImplemented

    def __hash__(self):
        return hash((self.v, self.p))

    def __bool__(self):
        return self.v != 0

    def __repr__(self):
        return f"Mod({self.v}, {self.p})"

    def __str__(self):
        return str(self.v)


class Field:
    """Field descriptor: ``Field.rational()`` or ``Field.prime(p)``."""

    __slots__ = ("kind", "p")

    def __init__(self, kind, p=None):
        if kind == "rational":
            p = None
        elif kind == "prime":
            if p is None or not is_prime(p):
                raise ValueError(f"{p} is not prime")
        else:
            raise ValueError(f"unknown field kind {kind!r}")
        self.kind = kind
        self.p = p

    @classmethod
    def rational(cls):
        return cls("rational")

    @classmethod
    def prime(cls, p):
        return cls("prime", p)

    def __eq__(self, o):
        return isinstance(o, Field) and (self.kind, self.p) == (o.kind, o.p)

    def __hash__(self):
        return hash((self.kind, self.p))

    def __repr__(self):
        return "Field.rational()" if self.p is None else f"Field.prime({self.p})"

    def __call__(self, x):
        """Coerce an int, Fraction or scalar of this field."""
        if self.p is None:
            if isinstance(x, Mod):
                raise FieldMismatchError("GF element used over Q")
            return Fraction(x)
        if isinstance(x, Mod):
            if x.p != self.p:
                raise FieldMismatchError(f"GF({x.p}) element used over GF({self.p})")
            return x
        x = Fraction(x)
        if x.denominator % self.p == 0:
            raise ZeroDivisionError(f"denominator divisible by {self.p}")
        return Mod(x.numerator * pow(x.denominator, -1, self.p), self.p)

    @property
    def zero(self):
        return self(0)

    @property
    def one(self):
        return self(1)

    def check(self, x):
        """Raise FieldMismatchError unless x belongs to this field."""
        if self.p is None:
            if not isinstance(x, (Fraction, int)):
                raise FieldMismatchError(f"{x!r} is not rational")
        elif not (isinstance(x, Mod) and x.p == self.p):
            raise FieldMismatchError(f"{x!r} is not in GF({self.p})")
        return x

    def elements(self):
        if self.p is None:
            raise ValueError("Q is infinite")
        return [Mod(i, self.p) for i in range(self.p)]


def _identity(label):
    return label


class Coords:
    """Coordinate index: field plus a column order on labels.

    Two subspaces can be combined only when they share one Coords object
    (or equal ones: same name and field).
    """

    __slots__ = ("field", "key", "name")

    def __init__(self, field, key=_identity, name=""):
        self.field = field
        self.key = key
        self.name = name

    def __eq__(self, o):
        return self is o or (
            isinstance(o, Coords) and self.name and self.name == o.name
            and self.field == o.field and self.key is o.key
        )

    def __hash__(self):
        return hash((self.name, self.field))

    def __repr__(self):
        return f"Coords({self.name or id(self)}, {self.field!r})"


# sparse vector helpers

def vec_axpy(v, c, w):
    """v += c*w in place (dropping zeros)."""
    for k, x in w.items():
        y = v.get(k)
        if y is None:
            v[k] = c * x
        else:
            y = y + c * x
            if y:
                v[k] = y
            else:
                del v[k]
    return v


def vec_scale(v, c):
    return {k: c * x for k, x in v.items()}


class Subspace:
    """Row space of a set of sparse vectors, kept in reduced echelon form.

    ``rows`` maps pivot label to a row whose pivot coefficient is 1 and
    which has no other pivot label in its support.
    """

    __slots__ = ("coords", "rows")

    def __init__(self, coords, vectors=()):
        self.coords = coords
        self.rows = {}
        for v in vectors:
            self.insert(v)

    def copy(self):
        s = Subspace(self.coords)
        s.rows = dict(self.rows)
        return s

    @property
    def field(self):
        return self.coords.field

    @property
    def dim(self):
        return len(self.rows)

    def __len__(self):
        return len(self.rows)

    def _check(self, other):
        if not (self.coords == other.coords):
            raise AmbientMismatchError(f"{self.coords!r} vs {other.coords!r}")

    def residual(self, v):
        """v minus its projection along the rows; zero dict iff v is a member."""
        r = dict(v)
        hits = [p for p in r if p in self.rows]
        for p in hits:
            c = r.get(p)
            if c:
                vec_axpy(r, -c, self.rows[p])
        for k in [k for k, x in r.items() if not x]:
            del r[k]
        return r

    def insert(self, v):
        """Add v to the span; return True when the dimension grew."""
        f = self.coords.field
        for x in v.values():
            f.check(x)
        r = self.residual(v)
        if not r:
            return False
        key = self.coords.key
        piv = max(r, key=key)
        c = r[piv]
        if c != 1:
            inv = 1 / c
            r = {k: inv * x for k, x in r.items()}
        for p, row in self.rows.items():
            y = row.get(piv)
            if y:
                row = dict(row)
                vec_axpy(row, -y, r)
                self.rows[p] = row
        self.rows[piv] = r
        return True

    def extend(self, vectors):
        grew = False
        for v in vectors:
            grew = self.insert(v) or grew
        return grew

    def contains(self, v):
        return not self.residual(v)

    def __contains__(self, v):
        return self.contains(v)

    def pivots(self):
        return sorted(self.rows, key=self.coords.key)

    def basis(self):
        """Rows ordered by increasing pivot."""
        return [self.rows[p] for p in self.pivots()]

    def issubset(self, other):
        self._check(other)
        return all(other.contains(r) for r in self.rows.values())

    def __le__(self, other):
        return self.issubset(other)

    def __eq__(self, other):
        if not isinstance(other, Subspace):
            return NotImplemented
        return self.dim == other.dim and self.issubset(other)

    __hash__ = None

    def restrict(self, inside):
        """Intersection with the coordinate span of labels where ``inside`` holds.

        Exact when the accepted labels form a down-set of the column order;
        otherwise falls back to explicit intersection.
        """
        out = Subspace(self.coords)
        down = True
        for p, row in self.rows.items():
            if inside(p):
                if all(inside(k) for k in row):
                    out.rows[p] = row
                else:
                    down = False
                    break
        if down:
            return out
        labels = {k for row in self.rows.values() for k in row if inside(k)}
        return subspace_intersect(self, Subspace(self.coords, ({k: self.field.one} for k in labels)))

    def __repr__(self):
        return f"<Subspace dim={self.dim} {self.coords!r}>"


def subspace_member(v, U, coords=None):
    if coords is not None and not (coords == U.coords):
        raise AmbientMismatchError(f"{coords!r} vs {U.coords!r}")
    return U.contains(v)


def subspace_sum(U, V):
    U._check(V)
    s = U.copy()
    s.extend(V.rows.values())
    return s


def subspace_intersect(U, V):
    """Basis of U ∩ V by Zassenhaus elimination on stacked rows (u, u), (v, 0)."""
    U._check(V)
    if U.dim > V.dim:
        U, V = V, U
    key = U.coords.key
    double = Coords(U.field, key=lambda lab: (lab[0], key(lab[1])))
    E = Subspace(double)
    for v in V.rows.values():
        E.insert({(1, k): x for k, x in v.items()})
    for u in U.rows.values():
        w = {(1, k): x for k, x in u.items()}
        w.update({(0, k): x for k, x in u.items()})
        E.insert(w)
    out = Subspace(U.coords)
    for p, row in E.rows.items():
        if p[0] == 0:
            out.insert({k[1]: x for k, x in row.items()})
    return out


def rref(matrix, field=None):
    """Dense reduced row echelon form: returns (rows, rank)."""
    rows = [list(r) for r in matrix]
    if not rows:
        return [], 0
    width = len(rows[0])
    if any(len(r) != width for r in rows):
        raise ValueError("rows of different width")
    if field is None:
        field = _infer_field(rows)
    coords = Coords(field, key=lambda j: -j)
    S = Subspace(coords)
    for r in rows:
        S.insert({j: field(x) for j, x in enumerate(r) if x})
    out = []
    for p in sorted(S.rows):
        row = S.rows[p]
        out.append([row.get(j, field.zero) for j in range(width)])
    return out, len(out)


def _infer_field(rows):
    ps = {x.p for r in rows for x in r if isinstance(x, Mod)}
    if len(ps) > 1:
        raise FieldMismatchError(f"mixed prime fields {sorted(ps)}")
    if ps:
        if any(isinstance(x, Fraction) and x.denominator != 1 for r in rows for x in r):
            raise FieldMismatchError("rationals mixed with GF elements")
        return Field.prime(ps.pop())
    return Field.rational()

"""Exact arithmetic in a real algebraic number field Q(theta).

Elements are coordinate vectors over the power basis 1, theta, ...,
theta^(d-1) with Fraction coordinates.  The designated real root theta is
pinned by a rational isolating interval (Sturm-certified); comparisons refine
that interval until the sign of the difference is determined, so every
comparison is exact.

Refining an embedding interval never changes a comparison outcome; the
interval is shared by all values derived from one root and is narrowed in
place (monotone, so safe to share between threads under the GIL).
"""

from __future__ import annotations

from fractions import Fraction

from .errors import (AmbiguousRoot, DivisionByZero, FieldMismatch, NoRoot,
                     ReduciblePolynomial)
from .polys import (IntPolynomial, _divmod_fr, _eval, _mul, _sub, _trim,
                    count_roots, is_irreducible, refine_root_interval,
                    sturm_chain)


class RootEmbedding:
    """Rational isolating interval for one real root of an integer polynomial."""

    __slots__ = ("poly", "lo", "hi")

    def __init__(self, poly: IntPolynomial, lo, hi):
        self.poly = poly
        self.lo = Fraction(lo)
        self.hi = Fraction(hi)

    def is_point(self):
        return self.lo == self.hi

    def width(self):
        return self.hi - self.lo

    def midpoint(self):
        return (self.lo + self.hi) / 2

    def refine(self, max_width):
        if self.is_point() or self.width() <= max_width:
            return
        self.lo, self.hi = refine_root_interval(self.poly, self.lo, self.hi, max_width)

    def same_root(self, other) -> bool:
        if self is other:
            return True
        return (self.poly.coeffs == other.poly.coeffs
                and not (self.hi <= other.lo or other.hi <= self.lo))

    def __repr__(self):
        return f"RootEmbedding({self.lo}, {self.hi})"


class NumberField:
    """Q[t]/(m(t)) for a monic irreducible integer polynomial m."""

    def __init__(self, minpoly: IntPolynomial, _trusted=False):
        minpoly = IntPolynomial(tuple(minpoly.coeffs))
        if minpoly.degree < 1:
            raise ValueError("minimal polynomial must be nonconstant")
        prim = minpoly.primitive()
        if not prim.is_monic():
            raise ValueError("minimal polynomial must be monic after normalization")
        if not _trusted and not is_irreducible(prim):
            raise ReduciblePolynomial(f"{prim} factors over the rationals")
        self.minpoly = prim
        self.degree = prim.degree
        # reduction rows: t^(d+j) expressed over the power basis, j = 0..d-2
        d = self.degree
        rows = []
        cur = tuple(Fraction(-c) for c in prim.coeffs[:-1])  # t^d
        rows.append(cur)
        for _ in range(d - 2):
            shifted = (Fraction(0),) + cur
            over = shifted[d] if len(shifted) > d else Fraction(0)
            base = tuple(shifted[i] if i < len(shifted) else Fraction(0) for i in range(d))
            cur = tuple(base[i] + over * rows[0][i] for i in range(d))
            rows.append(cur)
        self._reduction = tuple(rows)
        self._chain = sturm_chain(prim) if d > 1 else None

    def __eq__(self, other):
        return isinstance(other, NumberField) and self.minpoly.coeffs == other.minpoly.coeffs

    def __hash__(self):
        return hash(self.minpoly.coeffs)

    def __repr__(self):
        return f"NumberField({self.minpoly})"

    # -- element constructors -------------------------------------------------

    def element(self, coords, embedding) -> "AlgebraicNumber":
        coords = tuple(Fraction(c) for c in coords)
        if len(coords) != self.degree:
            raise ValueError("coordinate vector has wrong length")
        return AlgebraicNumber(self, coords, embedding)

    def rational(self, q, embedding) -> "AlgebraicNumber":
        return self.element((Fraction(q),) + (Fraction(0),) * (self.degree - 1), embedding)

    def generator(self, embedding) -> "AlgebraicNumber":
        if self.degree == 1:
            return self.rational(-Fraction(self.minpoly.coeffs[0]), embedding)
        coords = (Fraction(0), Fraction(1)) + (Fraction(0),) * (self.degree - 2)
        return self.element(coords, embedding)

    def root_in(self, bracket) -> "AlgebraicNumber":
        """The generator, embedded at the unique root inside the bracket."""
        lo, hi = Fraction(bracket[0]), Fraction(bracket[1])
        if lo >= hi:
            raise ValueError("empty bracket")
        if self.degree == 1:
            r = -Fraction(self.minpoly.coeffs[0])
            if not (lo < r < hi):
                raise NoRoot(f"no root of {self.minpoly} in ({lo}, {hi})")
            return self.generator(RootEmbedding(self.minpoly, r, r))
        # avoid root endpoints: irreducible of degree >= 2 has no rational roots
        k = count_roots(self._chain, lo, hi)
        if k == 0:
            raise NoRoot(f"no root of {self.minpoly} in ({lo}, {hi})")
        if k > 1:
            raise AmbiguousRoot(f"{k} roots of {self.minpoly} in ({lo}, {hi})")
        emb = RootEmbedding(self.minpoly, lo, hi)
        emb.refine((hi - lo) / 4)
        return self.generator(emb)

    def _reduce(self, conv):
        """Reduce a raw product (length <= 2d-1) modulo the minimal polynomial."""
        d = self.degree
        out = list(conv[:d]) + [Fraction(0)] * (d - len(conv[:d]))
        for j in range(d, len(conv)):
            cj = conv[j]
            if cj:
                row = self._reduction[j - d]
                for i in range(d):
                    out[i] += cj * row[i]
        return tuple(out)


class AlgebraicNumber:
    """Element of a NumberField with a designated real embedding."""

    __slots__ = ("field", "coords", "embedding")

    def __init__(self, field, coords, embedding):
        self.field = field
        self.coords = coords
        self.embedding = embedding

    # -- coercion -------------------------------------------------------------

    def _lift(self, other):
        if isinstance(other, AlgebraicNumber):
            if other.field != self.field or not self.embedding.same_root(other.embedding):
                raise FieldMismatch("operands use different fields or embeddings")
            return other
        if isinstance(other, (int, Fraction)):
            return self.field.rational(other, self.embedding)
        return NotImplemented

    def is_rational(self):
        return all(c == 0 for c in self.coords[1:])

    def as_fraction(self) -> Fraction:
        if not self.is_rational():
            raise ValueError("value is irrational")
        return self.coords[0]

    # -- ring operations -------------------------------------------------------

    def __add__(self, other):
        o = self._lift(other)
        if o is NotImplemented:
            return NotImplemented
        return AlgebraicNumber(self.field,
                               tuple(a + b for a, b in zip(self.coords, o.coords)),
                               self.embedding)

    __radd__ = __add__

    def __sub__(self, other):
        o = self._lift(other)
        if o is NotImplemented:
            return NotImplemented
        return AlgebraicNumber(self.field,
                               tuple(a - b for a, b in zip(self.coords, o.coords)),
                               self.embedding)

    def __rsub__(self, other):
        return (-self) + other

    def __neg__(self):
        return AlgebraicNumber(self.field, tuple(-a for a in self.coords), self.embedding)

    def __mul__(self, other):
        o = self._lift(other)
        if o is NotImplemented:
            return NotImplemented
        if o.is_rational():
            q = o.coords[0]
            return AlgebraicNumber(self.field, tuple(a * q for a in self.coords),
                                   self.embedding)
        conv = _mul(self.coords, o.coords)
        return AlgebraicNumber(self.field, self.field._reduce(conv), self.embedding)

    __rmul__ = __mul__

    def inverse(self):
        if self.is_zero():
            raise DivisionByZero("inverse of zero")
        # extended Euclid in Q[t]; m irreducible so the gcd is a constant
        m = tuple(Fraction(c) for c in self.field.minpoly.coeffs)
        r0, r1 = m, _trim(self.coords)
        s0, s1 = (), (Fraction(1),)
        while r1:
            q, r = _divmod_fr(r0, r1)
            r0, r1 = r1, r
            s0, s1 = s1, _sub(s0, _mul(q, s1))
        if len(r0) != 1:
            raise DivisionByZero("element is not invertible")
        inv = tuple(x / r0[0] for x in s0)
        coords = tuple(inv[i] if i < len(inv) else Fraction(0)
                       for i in range(self.field.degree))
        return AlgebraicNumber(self.field, coords, self.embedding)

    def __truediv__(self, other):
        o = self._lift(other)
        if o is NotImplemented:
            return NotImplemented
        if o.is_rational():
            q = o.coords[0]
            if q == 0:
                raise DivisionByZero("division by zero")
            return AlgebraicNumber(self.field, tuple(a / q for a in self.coords),
                                   self.embedding)
        return self * o.inverse()

    def __rtruediv__(self, other):
        return self.inverse() * other

    def __pow__(self, k):
        if k < 0:
            return self.inverse() ** (-k)
        out = self.field.rational(1, self.embedding)
        base = self
        while k:
            if k & 1:
                out = out * base
            base = base * base
            k >>= 1
        return out

    # -- exact sign, order, rendering -------------------------------------------

    def is_zero(self):
        return all(c == 0 for c in self.coords)

    def sign(self) -> int:
        if self.is_zero():
            return 0
        if self.is_rational():
            q = self.coords[0]
            return 1 if q > 0 else -1
        emb = self.embedding
        for _ in range(20000):
            lo, hi = _interval_eval(self.coords, emb.lo, emb.hi)
            if lo > 0:
                return 1
            if hi < 0:
                return -1
            emb.refine(emb.width() / 16)
        raise RuntimeError("sign determination failed to converge")

    def compare(self, other) -> int:
        o = self._lift(other)
        d = self - o
        return d.sign()

    def __eq__(self, other):
        try:
            o = self._lift(other)
        except FieldMismatch:
            return False
        if o is NotImplemented:
            return NotImplemented
        return self.coords == o.coords

    def __lt__(self, other):
        return self.compare(other) < 0

    def __le__(self, other):
        return self.compare(other) <= 0

    def __gt__(self, other):
        return self.compare(other) > 0

    def __ge__(self, other):
        return self.compare(other) >= 0

    def __abs__(self):
        return -self if self.sign() < 0 else self

    def __bool__(self):
        return not self.is_zero()

    def __hash__(self):
        return hash((self.field, self.coords))

    def __float__(self):
        if self.is_rational():
            return float(self.coords[0])
        self.embedding.refine(Fraction(1, 10 ** 25))
        return float(_eval(self.coords, self.embedding.midpoint()))

    def decimal(self, digits: int) -> str:
        """Correctly rounded decimal string (ties round toward +infinity)."""
        if digits < 1:
            raise ValueError("digits must be positive")
        scale = 10 ** digits
        if self.is_rational():
            n = _floor_frac(self.coords[0] * scale + Fraction(1, 2))
            return _format_scaled(n, digits)
        emb = self.embedding
        while True:
            lo, hi = _interval_eval(self.coords, emb.lo, emb.hi)
            nlo = _floor_frac(lo * scale + Fraction(1, 2))
            nhi = _floor_frac(hi * scale + Fraction(1, 2))
            if nlo == nhi:
                return _format_scaled(nlo, digits)
            emb.refine(emb.width() / 16)

    def __repr__(self):
        self.embedding.refine(Fraction(1, 10 ** 12))
        return f"AlgebraicNumber(~{float(self):.6g})"


def _floor_frac(q: Fraction) -> int:
    return q.numerator // q.denominator


def _format_scaled(n: int, digits: int) -> str:
    sign = "-" if n < 0 else ""
    m = abs(n)
    scale = 10 ** digits
    return f"{sign}{m // scale}.{m % scale:0{digits}d}"


def _interval_eval(coords, lo, hi):
    """Exact interval Horner evaluation of a coordinate vector at [lo, hi]."""
    vlo = vhi = Fraction(coords[-1])
    for c in reversed(coords[:-1]):
        cands = (vlo * lo, vlo * hi, vhi * lo, vhi * hi)
        vlo, vhi = min(cands) + c, max(cands) + c
    return vlo, vhi


# ---------------------------------------------------------------------------
# module-level API

def nf_field_make(minpoly: IntPolynomial) -> NumberField:
    """Build the field Q[t]/(m); rejects reducible m."""
    return NumberField(minpoly)


def nf_root(field: NumberField, bracket) -> AlgebraicNumber:
    """The generator of the field, pinned to the unique root in the bracket."""
    return field.root_in(bracket)


def nf_arith(a: AlgebraicNumber, b, op: str) -> AlgebraicNumber:
    if op == "add":
        return a + b
    if op == "sub":
        return a - b
    if op == "mul":
        return a * b
    if op == "div":
        return a / b
    raise ValueError(f"unknown operation {op!r}")


def nf_compare(a: AlgebraicNumber, b) -> int:
    """-1, 0 or +1 for less / equal / greater in the designated real embedding."""
    return a.compare(b)


def nf_decimal(a: AlgebraicNumber, digits: int) -> str:
    return a.decimal(digits)


def cross_embedding_dot_is_zero(vec_a, vec_b) -> bool:
    """Exact test that sum_i a_i * b_i vanishes under distinct embeddings.

    Both vectors must live in fields with the same minimal polynomial m but
    are allowed different designated roots u and t.  The test verifies
    (u - t) * sum_i a_i (x) b_i = 0 in Q[u,t]/(m(u), m(t)), which forces the
    real inner product to vanish whenever the two designated roots differ.
    """
    fa = vec_a[0].field
    fb = vec_b[0].field
    if fa.minpoly.coeffs != fb.minpoly.coeffs:
        raise FieldMismatch("vectors must share a minimal polynomial")
    d = fa.degree
    x = [[Fraction(0)] * d for _ in range(d)]
    for a, b in zip(vec_a, vec_b):
        for j, aj in enumerate(a.coords):
            if aj == 0:
                continue
            for k, bk in enumerate(b.coords):
                if bk:
                    x[j][k] += aj * bk
    # multiply by u (row shift with reduction) and by t (column shift), subtract
    red = fa._reduction[0] if d > 1 else None

    def shift_rows(mat):
        out = [[Fraction(0)] * d for _ in range(d)]
        for j in range(d):
            for k in range(d):
                v = mat[j][k]
                if not v:
                    continue
                if j + 1 < d:
                    out[j + 1][k] += v
                else:
                    for i in range(d):
                        out[i][k] += v * red[i]
        return out

    def shift_cols(mat):
        out = [[Fraction(0)] * d for _ in range(d)]
        for j in range(d):
            for k in range(d):
                v = mat[j][k]
                if not v:
                    continue
                if k + 1 < d:
                    out[j][k + 1] += v
                else:
                    for i in range(d):
                        out[j][i] += v * red[i]
        return out

    if d == 1:
        # single embedding; the inner product itself must vanish
        return x[0][0] == 0
    ux = shift_rows(x)
    tx = shift_cols(x)
    return all(ux[j][k] == tx[j][k] for j in range(d) for k in range(d))

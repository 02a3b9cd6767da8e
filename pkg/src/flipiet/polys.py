"""Exact polynomial arithmetic over Z and Q, Sturm root isolation,
factorization over the rationals, and small integer-matrix helpers.

Polynomials are stored with ascending coefficients.  The integer form is the
dataclass :class:`IntPolynomial`; internal routines work on plain tuples of
``fractions.Fraction``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from itertools import count, product

from .errors import DegreeCapExceeded

FACTOR_DEGREE_CAP = 8


@dataclass(frozen=True)
class IntPolynomial:
    """Integer polynomial, coefficients ascending; leading coefficient nonzero."""

    coeffs: tuple

    def __post_init__(self):
        c = tuple(int(v) for v in self.coeffs)
        while c and c[-1] == 0:
            c = c[:-1]
        object.__setattr__(self, "coeffs", c)

    @property
    def degree(self):
        return len(self.coeffs) - 1  # -1 for the zero polynomial

    def is_zero(self):
        return not self.coeffs

    def __call__(self, x):
        v = 0
        for c in reversed(self.coeffs):
            v = v * x + c
        return v

    def derivative(self):
        return IntPolynomial(tuple(i * c for i, c in enumerate(self.coeffs))[1:])

    def monic_fractions(self):
        lead = self.coeffs[-1]
        return tuple(Fraction(c, lead) for c in self.coeffs)

    def content(self):
        g = 0
        for c in self.coeffs:
            g = math.gcd(g, abs(c))
        return g

    def primitive(self):
        """Primitive part with positive leading coefficient."""
        if self.is_zero():
            return self
        g = self.content()
        sign = 1 if self.coeffs[-1] > 0 else -1
        return IntPolynomial(tuple(c * sign // g for c in self.coeffs))

    def is_monic(self):
        return bool(self.coeffs) and self.coeffs[-1] == 1

    def __mul__(self, other):
        return IntPolynomial(_mul(self.coeffs, other.coeffs))

    def __str__(self):
        if self.is_zero():
            return "0"
        parts = []
        for i, c in enumerate(self.coeffs):
            if c == 0:
                continue
            if i == 0:
                parts.append(str(c))
            else:
                term = "t" if i == 1 else f"t^{i}"
                if c == 1:
                    parts.append(term)
                elif c == -1:
                    parts.append(f"-{term}")
                else:
                    parts.append(f"{c}*{term}")
        return " + ".join(parts).replace("+ -", "- ")


def poly_from_roots(roots):
    """Monic integer polynomial with the given integer roots."""
    c = (1,)
    for r in roots:
        c = _mul(c, (-r, 1))
    return IntPolynomial(c)


# ---------------------------------------------------------------------------
# raw tuple arithmetic (works for int or Fraction coefficients)

def _trim(c):
    c = tuple(c)
    while c and c[-1] == 0:
        c = c[:-1]
    return c


def _add(a, b):
    n = max(len(a), len(b))
    return _trim(tuple((a[i] if i < len(a) else 0) + (b[i] if i < len(b) else 0)
                       for i in range(n)))


def _sub(a, b):
    n = max(len(a), len(b))
    return _trim(tuple((a[i] if i < len(a) else 0) - (b[i] if i < len(b) else 0)
                       for i in range(n)))


def _mul(a, b):
    if not a or not b:
        return ()
    out = [0] * (len(a) + len(b) - 1)
    for i, ai in enumerate(a):
        if ai == 0:
            continue
        for j, bj in enumerate(b):
            out[i + j] += ai * bj
    return _trim(tuple(out))


def _eval(c, x):
    v = 0
    for ci in reversed(c):
        v = v * x + ci
    return v


def _deriv(c):
    return _trim(tuple(i * ci for i, ci in enumerate(c))[1:])


def _divmod_fr(a, b):
    """Euclidean division of Fraction-tuples, b nonzero."""
    a = [Fraction(x) for x in a]
    b = [Fraction(x) for x in b]
    q = [Fraction(0)] * max(len(a) - len(b) + 1, 1)
    while len(_trim(a)) >= len(b):
        a = list(_trim(a))
        k = len(a) - len(b)
        f = a[-1] / b[-1]
        q[k] = f
        for i, bi in enumerate(b):
            a[i + k] -= f * bi
        a.pop()
    return _trim(q), _trim(tuple(a))


def _gcd_fr(a, b):
    """Monic gcd over Q."""
    a, b = _trim(a), _trim(b)
    while b:
        _, r = _divmod_fr(a, b)
        a, b = b, r
    if not a:
        return ()
    lead = a[-1]
    return tuple(Fraction(x) / lead for x in a)


def squarefree_part(p: IntPolynomial) -> IntPolynomial:
    """p divided by gcd(p, p'), primitive with positive leading coefficient."""
    if p.degree <= 1:
        return p.primitive()
    g = _gcd_fr(p.coeffs, _deriv(p.coeffs))
    if len(g) <= 1:
        return p.primitive()
    q, r = _divmod_fr(p.coeffs, g)
    assert not r
    return _fractions_to_int_poly(q)


def _fractions_to_int_poly(c) -> IntPolynomial:
    den = 1
    for x in c:
        den = den * Fraction(x).denominator // math.gcd(den, Fraction(x).denominator)
    ints = tuple(int(Fraction(x) * den) for x in c)
    return IntPolynomial(ints).primitive()


# ---------------------------------------------------------------------------
# Sturm sequences and real-root isolation

def sturm_chain(p: IntPolynomial):
    """Sturm chain of the squarefree part, as Fraction tuples."""
    p0 = tuple(Fraction(c) for c in squarefree_part(p).coeffs)
    chain = [p0, _deriv(p0)]
    while chain[-1]:
        _, r = _divmod_fr(chain[-2], chain[-1])
        if not r:
            break
        chain.append(tuple(-x for x in r))
    return chain


def _variations(chain, x):
    signs = []
    for c in chain:
        v = _eval(c, x)
        if v != 0:
            signs.append(1 if v > 0 else -1)
    return sum(1 for a, b in zip(signs, signs[1:]) if a != b)


def count_roots(chain, a, b):
    """Number of real roots of the chain's polynomial in the interval (a, b]."""
    return _variations(chain, a) - _variations(chain, b)


def root_bound(p: IntPolynomial) -> Fraction:
    """Cauchy bound: all real roots lie in (-B, B)."""
    lead = abs(p.coeffs[-1])
    m = max((abs(c) for c in p.coeffs[:-1]), default=0)
    return Fraction(m, lead) + 1


def isolate_real_roots(p: IntPolynomial):
    """Disjoint open rational intervals, one per distinct real root, ascending.

    Endpoints are never roots.  Works on the squarefree part, so multiple
    roots are reported once.
    """
    sf = squarefree_part(p)
    if sf.degree <= 0:
        return []
    chain = sturm_chain(sf)
    B = root_bound(sf)
    total = count_roots(chain, -B, B)
    out = []
    stack = [(-B, B, total)]
    while stack:
        lo, hi, k = stack.pop()
        if k == 0:
            continue
        if k == 1:
            out.append((lo, hi))
            continue
        mid = (lo + hi) / 2
        # endpoints of subintervals must avoid roots
        shift = hi - lo
        while _eval(sf.coeffs, mid) == 0:
            shift /= 16
            mid += shift / 3
        kl = count_roots(chain, lo, mid)
        stack.append((lo, mid, kl))
        stack.append((mid, hi, k - kl))
    out.sort()
    return out


def refine_root_interval(p: IntPolynomial, lo, hi, max_width):
    """Bisect an isolating interval until its width is at most max_width."""
    plo = _eval(p.coeffs, lo)
    assert plo != 0 and _eval(p.coeffs, hi) != 0
    sl = plo > 0
    while hi - lo > max_width:
        mid = (lo + hi) / 2
        v = _eval(p.coeffs, mid)
        if v == 0:
            # mid is a rational root; squeeze around it with non-root endpoints
            width = hi - lo
            for dd in range(5, 1000):
                lo2, hi2 = mid - width / dd, mid + width / (dd + 1)
                if _eval(p.coeffs, lo2) != 0 and _eval(p.coeffs, hi2) != 0:
                    lo, hi = lo2, hi2
                    sl = _eval(p.coeffs, lo) > 0
                    break
            continue
        if (v > 0) == sl:
            lo = mid
        else:
            hi = mid
    return lo, hi


# ---------------------------------------------------------------------------
# factorization over the rationals

def _divisors(n):
    n = abs(n)
    small, large = [], []
    d = 1
    while d * d <= n:
        if n % d == 0:
            small.append(d)
            if d != n // d:
                large.append(n // d)
        d += 1
    return small + large[::-1]


def _rational_roots(p: IntPolynomial):
    """All rational roots, with multiplicity folded out by the caller."""
    roots = []
    a0 = p.coeffs[0]
    an = p.coeffs[-1]
    if a0 == 0:
        roots.append(Fraction(0))
        return roots
    for num in _divisors(a0):
        for den in _divisors(an):
            for s in (1, -1):
                r = Fraction(s * num, den)
                if p(r) == 0 and r not in roots:
                    roots.append(r)
    return roots


def _try_divide(p: IntPolynomial, g: IntPolynomial):
    q, r = _divmod_fr(p.coeffs, g.coeffs)
    if r:
        return None
    if any(Fraction(x).denominator != 1 for x in q):
        return None
    return IntPolynomial(tuple(int(x) for x in q))


def _l2_norm_ceil(p: IntPolynomial):
    return math.isqrt(sum(c * c for c in p.coeffs)) + 1


def _find_factor(p: IntPolynomial, k: int):
    """Search for a degree-k integer factor by divisor interpolation.

    Candidate factors are pinned by their values at k+1 small integer points;
    each value must divide the value of p there.  The Landau-Mignotte bound
    2^k * ||p||_2 caps candidate coefficients, so exhaustion certifies there
    is no degree-k factor.
    """
    pts = [0]
    for m in count(1):
        if len(pts) > k:
            break
        pts.extend([m, -m][: k + 1 - len(pts)])
    bound = (2 ** k) * _l2_norm_ceil(p)
    val_bounds = [sum(bound * abs(x) ** i for i in range(k + 1)) for x in pts]
    divisor_sets = []
    for x, vb in zip(pts, val_bounds):
        v = p(x)
        assert v != 0  # rational roots were extracted first
        ds = [d for d in _divisors(v) if d <= vb]
        divisor_sets.append([s * d for d in ds for s in (1, -1)])
    # Lagrange basis over the chosen points, with common denominator
    denom = 1
    for i, xi in enumerate(pts):
        prod_ = 1
        for j, xj in enumerate(pts):
            if i != j:
                prod_ *= xi - xj
        denom = denom * abs(prod_) // math.gcd(denom, abs(prod_))
    basis = []
    for i, xi in enumerate(pts):
        num = (1,)
        den = 1
        for j, xj in enumerate(pts):
            if i == j:
                continue
            num = _mul(num, (-xj, 1))
            den *= xi - xj
        basis.append((num, den))
    for combo in product(*divisor_sets):
        coeffs = [Fraction(0)] * (k + 1)
        for v, (num, den) in zip(combo, basis):
            f = Fraction(v, den)
            for i, ni in enumerate(num):
                coeffs[i] += f * ni
        if any(c.denominator != 1 for c in coeffs):
            continue
        if coeffs[k] == 0:
            continue
        if any(abs(c) > bound for c in coeffs):
            continue
        g = IntPolynomial(tuple(int(c) for c in coeffs)).primitive()
        if g.degree != k:
            continue
        q = _try_divide(p, g)
        if q is not None:
            return g, q
    return None


def _factor_squarefree(p: IntPolynomial):
    """Irreducible factors of a primitive squarefree polynomial.

    Linear factors are stripped before each Kronecker search, and the search
    runs degrees in ascending order, so any factor it finds is irreducible.
    """
    factors = []
    work = p.primitive()
    while work.degree > 0:
        if work.coeffs[0] == 0:
            factors.append(IntPolynomial((0, 1)))
            work = IntPolynomial(work.coeffs[1:])
            continue
        roots = _rational_roots(work)
        if roots:
            r = roots[0]
            lin = IntPolynomial((-r.numerator, r.denominator)).primitive()
            q = _try_divide(work, lin)
            assert q is not None
            factors.append(lin)
            work = q
            continue
        if work.degree == 1:
            factors.append(work)
            break
        hit = None
        for k in range(2, work.degree // 2 + 1):
            hit = _find_factor(work, k)
            if hit is not None:
                break
        if hit is None:
            factors.append(work)
            break
        g, q = hit
        factors.append(g)
        work = q
    return factors


def factor_rational(p: IntPolynomial):
    """Complete factorization into primitive irreducibles over the rationals.

    Returns a list of (IntPolynomial, multiplicity) sorted by (degree,
    coefficients).  Content and sign are dropped: the product of the factors
    equals the primitive part of p.
    """
    if p.is_zero():
        raise ValueError("cannot factor the zero polynomial")
    if p.degree > FACTOR_DEGREE_CAP:
        raise DegreeCapExceeded(f"degree {p.degree} exceeds cap {FACTOR_DEGREE_CAP}")
    work = p.primitive()
    if work.degree == 0:
        return []
    sf = squarefree_part(work)
    irreducibles = _factor_squarefree(sf)
    out = []
    for g in irreducibles:
        mult = 0
        q = _try_divide(work, g)
        while q is not None:
            mult += 1
            work = q
            q = _try_divide(work, g)
        out.append((g, mult))
    assert work.degree == 0
    out.sort(key=lambda t: (t[0].degree, t[0].coeffs))
    return out


def is_irreducible(p: IntPolynomial) -> bool:
    f = factor_rational(p)
    return len(f) == 1 and f[0][1] == 1 and f[0][0].degree == p.degree


# ---------------------------------------------------------------------------
# small exact integer-matrix helpers (row-major tuples of tuples)

def mat_identity(n):
    return tuple(tuple(1 if i == j else 0 for j in range(n)) for i in range(n))


def mat_mul(a, b):
    n, m, k = len(a), len(b[0]), len(b)
    bt = tuple(zip(*b))
    return tuple(tuple(sum(a[i][t] * bt[j][t] for t in range(k)) for j in range(m))
                 for i in range(n))


def mat_vec(a, v):
    return tuple(sum(ai * vi for ai, vi in zip(row, v)) for row in a)


def mat_transpose(a):
    return tuple(zip(*a))


def char_poly(m) -> IntPolynomial:
    """det(tI - M) with exact integer coefficients (Faddeev-LeVerrier)."""
    n = len(m)
    if any(len(row) != n for row in m):
        raise ValueError("matrix is not square")
    m = tuple(tuple(int(x) for x in row) for row in m)
    coeffs = [0] * (n + 1)
    coeffs[n] = 1
    ak = m
    for k in range(1, n + 1):
        tr = sum(ak[i][i] for i in range(n))
        assert tr % k == 0
        ck = -(tr // k)
        coeffs[n - k] = ck
        if k < n:
            shifted = tuple(tuple(ak[i][j] + (ck if i == j else 0) for j in range(n))
                            for i in range(n))
            ak = mat_mul(m, shifted)
    return IntPolynomial(tuple(coeffs))


def mat_det(m) -> int:
    n = len(m)
    cp = char_poly(m)
    d = cp.coeffs[0] if cp.degree >= 0 else 0
    return d if n % 2 == 0 else -d


def quasi_positive(m) -> bool:
    """True when some power of the nonnegative matrix is entrywise positive.

    Uses boolean reachability powering up to the primitivity bound
    (n-1)^2 + 1.
    """
    n = len(m)
    if any(x < 0 for row in m for x in row):
        return False
    b = tuple(tuple(1 if x > 0 else 0 for x in row) for row in m)
    p = b
    for _ in range((n - 1) * (n - 1) + 1):
        if all(all(x for x in row) for row in p):
            return True
        p = tuple(tuple(1 if sum(p[i][t] * b[t][j] for t in range(n)) else 0
                        for j in range(n)) for i in range(n))
    return all(all(x for x in row) for row in p)

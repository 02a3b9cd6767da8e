"""Interval exchange transformations with flips, and their affine cousins.

Scalars are generic: exact values (int, Fraction, AlgebraicNumber) give exact
evaluation and comparisons for certification paths; floats give fast
evaluation for long orbit probes.  Pieces are open intervals; the breakpoint
set itself is excluded from the domain, and hitting it is reported, not
silently perturbed.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional

from .errors import AtDiscontinuity, InvalidPermutation, NonpositiveLength
from .numfield import AlgebraicNumber


class SignedPermutation:
    """Permutation entries with signs: |entries| is a permutation of 1..n,
    the sign of entry i is the orientation of piece i (-1 = flipped)."""

    __slots__ = ("entries", "pi", "tau", "pi_inv")

    def __init__(self, entries):
        entries = tuple(int(e) for e in entries)
        n = len(entries)
        if n == 0 or any(e == 0 for e in entries):
            raise InvalidPermutation("entries must be nonzero")
        pi = tuple(abs(e) for e in entries)
        if sorted(pi) != list(range(1, n + 1)):
            raise InvalidPermutation(f"|{entries}| is not a permutation of 1..{n}")
        self.entries = entries
        self.pi = pi
        self.tau = tuple(1 if e > 0 else -1 for e in entries)
        inv = [0] * (n + 1)
        for i, j in enumerate(pi, start=1):
            inv[j] = i
        self.pi_inv = tuple(inv)

    @classmethod
    def from_pi_tau(cls, pi, tau):
        return cls(tuple(p * t for p, t in zip(pi, tau)))

    def decompose(self):
        """(pi, tau) with entries = pi * tau elementwise."""
        return self.pi, self.tau

    def has_flip(self):
        return any(t < 0 for t in self.tau)

    def is_irreducible(self):
        """No proper prefix block {1..k} is invariant under |pi|."""
        mx = 0
        for k, v in enumerate(self.pi[:-1], start=1):
            mx = max(mx, v)
            if mx == k:
                return False
        return True

    def __len__(self):
        return len(self.entries)

    def __iter__(self):
        return iter(self.entries)

    def __eq__(self, other):
        if isinstance(other, SignedPermutation):
            return self.entries == other.entries
        return self.entries == tuple(other)

    def __hash__(self):
        return hash(self.entries)

    def __repr__(self):
        return f"SignedPermutation({self.entries})"

    def __str__(self):
        return " ".join(str(e) for e in self.entries)


def perm_decompose(sp) -> tuple:
    """Split a signed permutation into (pi, tau)."""
    if not isinstance(sp, SignedPermutation):
        sp = SignedPermutation(sp)
    return sp.decompose()


@dataclass
class OrbitSegment:
    points: list
    word: list
    terminated_at_discontinuity: Optional[int] = None


def _is_positive(v):
    if isinstance(v, AlgebraicNumber):
        return v.sign() > 0
    return v > 0


def _as_exact(v):
    if isinstance(v, int):
        return Fraction(v)
    return v


class IetSpec:
    """An IET given by piece lengths, a signed permutation and a left endpoint.

    Precomputes the breakpoints x_0 < ... < x_n and the image slot layout:
    slot j has the length of piece pi_inv(j), slots tile the domain left to
    right, and piece i is mapped onto slot pi(i), orientation tau_i.
    """

    def __init__(self, lengths, signed_perm, origin=0):
        # n = 1 is allowed so first-return maps can degenerate to a single
        # piece; the public constructor iet_make still demands n >= 2
        if not isinstance(signed_perm, SignedPermutation):
            signed_perm = SignedPermutation(signed_perm)
        n = len(signed_perm)
        lengths = tuple(lengths)
        if len(lengths) != n:
            raise InvalidPermutation("lengths and permutation size differ")
        self.float_mode = any(isinstance(v, float) for v in lengths) or isinstance(origin, float)
        if self.float_mode:
            lengths = tuple(float(v) for v in lengths)
            origin = float(origin)
        else:
            lengths = tuple(_as_exact(v) for v in lengths)
            origin = _as_exact(origin)
        for v in lengths:
            if not _is_positive(v):
                raise NonpositiveLength(f"length {v!r} is not positive")
        self.n = n
        self.lengths = lengths
        self.sp = signed_perm
        self.origin = origin
        xs = [origin]
        for v in lengths:
            xs.append(xs[-1] + v)
        self.x = tuple(xs)
        ys = [origin]
        for j in range(1, n + 1):
            ys.append(ys[-1] + lengths[signed_perm.pi_inv[j] - 1])
        self.y = tuple(ys)
        self.total_length = self.x[-1] - origin

    # -- geometry ---------------------------------------------------------------

    @property
    def d_vector(self):
        return self.x

    def piece_of(self, p) -> int:
        """Index 1..n of the open piece containing p; AtDiscontinuity on D."""
        for i in range(1, self.n + 1):
            if p < self.x[i]:
                if self.x[i - 1] < p:
                    return i
                raise AtDiscontinuity(p, i - 1)
        raise AtDiscontinuity(p, self.n)

    def slot_of(self, q) -> int:
        for j in range(1, self.n + 1):
            if q < self.y[j]:
                if self.y[j - 1] < q:
                    return j
                raise AtDiscontinuity(q, j - 1)
        raise AtDiscontinuity(q, self.n)

    def image_slot(self, i):
        """(lo, hi) of the image slot of piece i."""
        j = self.sp.pi[i - 1]
        return self.y[j - 1], self.y[j]

    def eval(self, p, inverse=False):
        """Apply the exchange (or its inverse) to one point."""
        if inverse:
            j = self.slot_of(p)
            i = self.sp.pi_inv[j]
            if self.sp.tau[i - 1] > 0:
                return self.x[i - 1] + (p - self.y[j - 1])
            return self.x[i] - (p - self.y[j - 1])
        i = self.piece_of(p)
        j = self.sp.pi[i - 1]
        if self.sp.tau[i - 1] > 0:
            return self.y[j - 1] + (p - self.x[i - 1])
        return self.y[j - 1] + (self.x[i] - p)

    def orbit(self, p, steps, inverse=False) -> OrbitSegment:
        """Iterate, recording points and piece symbols; a discontinuity hit
        terminates the segment and is recorded, not raised."""
        pts = [p]
        word = []
        cur = p
        for k in range(steps):
            try:
                word.append(self.piece_of(cur))
                cur = self.eval(cur, inverse=inverse)
            except AtDiscontinuity:
                word = word[: k]
                return OrbitSegment(pts, word, terminated_at_discontinuity=k)
            pts.append(cur)
        return OrbitSegment(pts, word)

    def itinerary(self, p, steps):
        """Symbols of the pieces visited at steps 0..steps-1."""
        seg = self.orbit(p, steps)
        return tuple(seg.word)

    def as_float(self) -> "IetSpec":
        if self.float_mode:
            return self
        return IetSpec(tuple(float(v) for v in self.lengths), self.sp,
                       float(self.origin))

    def recompute_permutation(self):
        """Re-derive the signed permutation from midpoint images and piece
        orientation, independently of the stored one."""
        mids = []
        for i in range(1, self.n + 1):
            m = (self.x[i - 1] + self.x[i]) / (2.0 if self.float_mode else Fraction(2))
            mids.append((self.eval(m), self.sp.tau[i - 1]))
        order = sorted(range(self.n), key=lambda k: mids[k][0])
        rank = [0] * self.n
        for r, k in enumerate(order, start=1):
            rank[k] = r
        return SignedPermutation(tuple(rank[k] * mids[k][1] for k in range(self.n)))

    def __repr__(self):
        return f"IetSpec(n={self.n}, sp={self.sp.entries})"


class AietSpec:
    """Affine IET: same combinatorial data plus a log-slope per piece.

    Float arithmetic only.  The permuted images, scaled by exp(log_slope),
    must tile the domain; an IET is exactly the case log_slope = 0.
    """

    def __init__(self, lengths, signed_perm, log_slope, origin=0.0, tol=1e-9):
        if not isinstance(signed_perm, SignedPermutation):
            signed_perm = SignedPermutation(signed_perm)
        self.n = len(signed_perm)
        self.sp = signed_perm
        self.lengths = tuple(float(v) for v in lengths)
        self.log_slope = tuple(float(g) for g in log_slope)
        if len(self.log_slope) != self.n or len(self.lengths) != self.n:
            raise InvalidPermutation("vector sizes disagree")
        if any(v <= 0 for v in self.lengths):
            raise NonpositiveLength("lengths must be positive")
        self.origin = float(origin)
        xs = [self.origin]
        for v in self.lengths:
            xs.append(xs[-1] + v)
        self.x = tuple(xs)
        self.slopes = tuple(math.exp(g) for g in self.log_slope)
        ys = [self.origin]
        for j in range(1, self.n + 1):
            i = signed_perm.pi_inv[j]
            ys.append(ys[-1] + self.lengths[i - 1] * self.slopes[i - 1])
        total = ys[-1] - self.origin
        if abs(total - (self.x[-1] - self.origin)) > tol * max(1.0, abs(total)):
            raise NonpositiveLength("scaled images do not tile the domain")
        self.y = tuple(ys)

    @property
    def flips(self):
        return self.sp.tau

    def piece_of(self, p):
        for i in range(1, self.n + 1):
            if p < self.x[i]:
                if self.x[i - 1] < p:
                    return i
                raise AtDiscontinuity(p, i - 1)
        raise AtDiscontinuity(p, self.n)

    def eval(self, p, inverse=False):
        if inverse:
            for j in range(1, self.n + 1):
                if p < self.y[j]:
                    if not (self.y[j - 1] < p):
                        raise AtDiscontinuity(p, j - 1)
                    i = self.sp.pi_inv[j]
                    u = (p - self.y[j - 1]) / self.slopes[i - 1]
                    if self.sp.tau[i - 1] > 0:
                        return self.x[i - 1] + u
                    return self.x[i] - u
            raise AtDiscontinuity(p, self.n)
        i = self.piece_of(p)
        j = self.sp.pi[i - 1]
        if self.sp.tau[i - 1] > 0:
            return self.y[j - 1] + self.slopes[i - 1] * (p - self.x[i - 1])
        return self.y[j - 1] + self.slopes[i - 1] * (self.x[i] - p)

    def orbit(self, p, steps, inverse=False) -> OrbitSegment:
        pts = [p]
        word = []
        cur = p
        for k in range(steps):
            try:
                word.append(self.piece_of(cur))
                cur = self.eval(cur, inverse=inverse)
            except AtDiscontinuity:
                return OrbitSegment(pts, word[:k], terminated_at_discontinuity=k)
            pts.append(cur)
        return OrbitSegment(pts, word)

    @classmethod
    def from_iet(cls, iet: IetSpec):
        f = iet.as_float()
        return cls(f.lengths, f.sp, (0.0,) * f.n, f.origin)


# -- spec-level operation names ----------------------------------------------

def iet_make(lengths, signed_perm, origin=0) -> IetSpec:
    if len(tuple(signed_perm)) < 2:
        raise InvalidPermutation("need at least two pieces")
    return IetSpec(lengths, signed_perm, origin)


def iet_eval(E, x, inverse=False):
    return E.eval(x, inverse=inverse)


def iet_orbit(E, x, steps, inverse=False) -> OrbitSegment:
    return E.orbit(x, steps, inverse=inverse)


def iet_itinerary(E, x, steps):
    return E.itinerary(x, steps)

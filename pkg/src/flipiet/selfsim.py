"""First-return maps, self-similarity certificates, return itineraries and
the substitution they induce.

The induced map is computed geometrically: the target interval J is refined
into maximal subintervals on which the return time and the symbolic itinerary
are constant, by pushing images forward and splitting at the pullbacks of J's
endpoints and of the discontinuities.  With exact scalars every comparison is
exact, so the assembled return map is certified, not approximate.

Itinerary convention: I(i) lists the pieces visited at steps 0..N_i-1, where
N_i is the first-return time of piece i of the induced map.  Column i of the
associated matrix then sums to N_i, and the return times satisfy the Kac
identity  sum_i N_i * |piece_i| = |domain|  exactly.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from .errors import (BoundaryHitsDiscontinuity, EmptyCylinder, NoFixedSeed,
                     ReturnTimeCapExceeded)
from .iet import IetSpec, SignedPermutation

DEFAULT_RETURN_CAP = 10_000


@dataclass
class ItinerarySet:
    """Return words I(i) and their lengths N_i (= return times)."""

    words: tuple
    exponents: tuple

    def counts_matrix(self):
        n = len(self.words)
        m = [[0] * n for _ in range(n)]
        for i, w in enumerate(self.words):
            for sym in w:
                m[sym - 1][i] += 1
        return tuple(tuple(row) for row in m)


@dataclass
class InducedMap:
    sub_iet: IetSpec
    return_times: tuple
    itineraries: ItinerarySet
    parts: tuple  # (lo, hi) domain subintervals of J, left to right


@dataclass
class SelfSimilarity:
    """Witness that the induced map on J is an exact scaled copy."""

    J: tuple
    scale: object          # |domain| / |J|, exact scalar
    map_slope: object      # L(x) = map_slope * (x - c) + a
    ok: bool = True


@dataclass
class SelfSimilarityMismatch:
    reason: str
    detail: object = None
    ok: bool = False


class _Part:
    __slots__ = ("dom_lo", "dom_hi", "img_lo", "img_hi", "word", "steps", "orient")

    def __init__(self, dom_lo, dom_hi, img_lo, img_hi, word, steps, orient):
        self.dom_lo = dom_lo
        self.dom_hi = dom_hi
        self.img_lo = img_lo
        self.img_hi = img_hi
        self.word = word
        self.steps = steps
        self.orient = orient


def induce(E: IetSpec, J, cap: int = DEFAULT_RETURN_CAP) -> InducedMap:
    """First-return map of E on the subinterval J = (c, d).

    Raises ReturnTimeCapExceeded if some piece does not return within cap
    steps, and BoundaryHitsDiscontinuity when an endpoint orbit collision
    degenerates a piece to a point.
    """
    c, d = J
    if E.float_mode:
        c, d = float(c), float(d)
    else:
        c = Fraction(c) if isinstance(c, int) else c
        d = Fraction(d) if isinstance(d, int) else d
    if not (E.x[0] <= c and d <= E.x[-1] and c < d):
        raise ValueError("J must be a nondegenerate subinterval of the domain")

    cuts = [c] + [x for x in E.x if c < x < d] + [d]
    pending = []
    for lo, hi in zip(cuts, cuts[1:]):
        pending.append(_Part(lo, hi, lo, hi, (), 0, 1))
    done = []
    budget = cap * (E.n + 2) * 8

    while pending:
        budget -= 1
        if budget < 0:
            raise ReturnTimeCapExceeded(f"first return not reached within cap={cap}")
        part = pending.pop()
        if part.steps > 0 and c <= part.img_lo and part.img_hi <= d:
            done.append(part)
            continue
        if part.steps > cap:
            raise ReturnTimeCapExceeded(f"piece at {part.dom_lo!r} exceeded cap={cap}")

        def pullback(blo, bhi):
            # domain subinterval mapping onto (blo, bhi) under the composed map
            if part.orient > 0:
                return (part.dom_lo + (blo - part.img_lo),
                        part.dom_lo + (bhi - part.img_lo))
            return (part.dom_hi - (bhi - part.img_lo),
                    part.dom_hi - (blo - part.img_lo))

        split_at = []
        if part.steps > 0:
            split_at = [z for z in (c, d) if part.img_lo < z < part.img_hi]
        if not split_at:
            split_at = [x for x in E.x if part.img_lo < x < part.img_hi]
        if split_at:
            bounds = [part.img_lo] + sorted(split_at) + [part.img_hi]
            for blo, bhi in zip(bounds, bounds[1:]):
                if not (blo < bhi):
                    raise BoundaryHitsDiscontinuity(blo)
                nd_lo, nd_hi = pullback(blo, bhi)
                pending.append(_Part(nd_lo, nd_hi, blo, bhi, part.word, part.steps,
                                     part.orient))
            continue

        # image lies inside a single piece: apply one exchange step
        mid = (part.img_lo + part.img_hi) / (2.0 if E.float_mode else Fraction(2))
        i = E.piece_of(mid)
        slo, shi = E.image_slot(i)
        tau = E.sp.tau[i - 1]
        if tau > 0:
            nlo = slo + (part.img_lo - E.x[i - 1])
            nhi = slo + (part.img_hi - E.x[i - 1])
        else:
            nlo = slo + (E.x[i] - part.img_hi)
            nhi = slo + (E.x[i] - part.img_lo)
        pending.append(_Part(part.dom_lo, part.dom_hi, nlo, nhi,
                             part.word + (i,), part.steps + 1, part.orient * tau))

    done.sort(key=lambda p: p.dom_lo)
    # read off the sub-IET: lengths, and the signed permutation from image order
    lengths = tuple(p.dom_hi - p.dom_lo for p in done)
    order = sorted(range(len(done)), key=lambda k: done[k].img_lo)
    rank = [0] * len(done)
    for r, k in enumerate(order, start=1):
        rank[k] = r
    sp = SignedPermutation(tuple(rank[k] * done[k].orient for k in range(len(done))))
    sub = IetSpec(lengths, sp, origin=c)
    words = tuple(p.word for p in done)
    times = tuple(p.steps for p in done)
    its = ItinerarySet(words, times)
    parts = tuple((p.dom_lo, p.dom_hi) for p in done)
    return InducedMap(sub, times, its, parts)


def self_similarity_check(E: IetSpec, J):
    """Certify that the induced map on J is E scaled by |domain|/|J|.

    Returns a SelfSimilarity witness, or a SelfSimilarityMismatch naming the
    first failed comparison.  All checks are exact for exact scalars.
    """
    c, d = J
    ind = induce(E, J)
    sub = ind.sub_iet
    if sub.n != E.n:
        return SelfSimilarityMismatch("piece count differs", (sub.n, E.n))
    if sub.sp != E.sp:
        return SelfSimilarityMismatch("signed permutation differs",
                                      (sub.sp.entries, E.sp.entries))
    total = E.total_length
    width = d - c
    for i in range(E.n):
        # exact proportionality, cross-multiplied to avoid division
        if sub.lengths[i] * total != E.lengths[i] * width:
            return SelfSimilarityMismatch("length ratio differs at piece", i + 1)
    scale = total / width
    return SelfSimilarity(J=(c, d), scale=scale, map_slope=scale)


def associated_matrix(E: IetSpec, J):
    """Visit-count matrix of (E, J) and the return itineraries.

    Entry (j, i) counts occurrences of symbol j in the return word I(i);
    column i sums to the return time N_i.
    """
    ind = induce(E, J)
    its = ind.itineraries
    return its.counts_matrix(), its


# ---------------------------------------------------------------------------
# substitutions generated by return words

class Substitution:
    """Map from symbols to words over 1..n."""

    def __init__(self, images: dict):
        self.images = {int(k): tuple(int(s) for s in v) for k, v in images.items()}
        self.alphabet = tuple(sorted(self.images))
        if any(not w for w in self.images.values()):
            raise ValueError("substitution images must be nonempty")

    def __call__(self, word):
        out = []
        for s in word:
            out.extend(self.images[s])
        return tuple(out)

    def abelianization(self):
        n = len(self.alphabet)
        m = [[0] * n for _ in range(n)]
        for i in self.alphabet:
            for sym in self.images[i]:
                m[sym - 1][i - 1] += 1
        return tuple(tuple(row) for row in m)

    def __repr__(self):
        ims = ", ".join(f"{i}->{''.join(map(str, w))}" for i, w in sorted(self.images.items()))
        return f"Substitution({ims})"


def substitution_from(its: ItinerarySet) -> Substitution:
    """sigma(i) = I(i); the abelianization reproduces the visit-count matrix."""
    sub = Substitution({i + 1: w for i, w in enumerate(its.words)})
    assert sub.abelianization() == its.counts_matrix()
    return sub


def fixed_word(sigma: Substitution, side: str, length: int):
    """Prefix/suffix of the substitution fixed point, with the seed used.

    forward: smallest a with sigma(a) starting with a; backward: smallest b
    with sigma(b) ending with b; two_sided: the glued pair (suffix of the
    backward ray, prefix of the forward ray) with seeds (b, a).
    """
    if side == "forward":
        seeds = [a for a in sigma.alphabet if sigma.images[a][0] == a]
        if not seeds:
            raise NoFixedSeed("no symbol starts its own image")
        a = seeds[0]
        word = sigma.images[a]
        while len(word) < length:
            word = sigma(word)
        return word[:length], a
    if side == "backward":
        seeds = [b for b in sigma.alphabet if sigma.images[b][-1] == b]
        if not seeds:
            raise NoFixedSeed("no symbol ends its own image")
        b = seeds[0]
        word = sigma.images[b]
        while len(word) < length:
            word = sigma(word)
        return word[-length:], b
    if side == "two_sided":
        past, b = fixed_word(sigma, "backward", length)
        future, a = fixed_word(sigma, "forward", length)
        return (past, future), (b, a)
    raise ValueError(f"unknown side {side!r}")


def occurrence_addresses(sigma: Substitution, power: int = 1):
    """All (c, j, power) with sigma^power(c)[j] == c and nonempty prefix and
    suffix around the occurrence, in deterministic scan order."""
    out = []
    for c in sigma.alphabet:
        img = sigma.images[c]
        for _ in range(power - 1):
            img = sigma(img)
        for j, s in enumerate(img):
            if s == c and 0 < j < len(img) - 1:
                out.append((c, j, power))
    return out


def stationary_window(sigma: Substitution, address, back: int, fwd: int):
    """Two-sided word of the stationary point of the given occurrence address.

    For sigma^m(c) = p . c . s the point's future reads c s sigma^m(s)
    sigma^2m(s) ... and its past reads ... sigma^2m(p) sigma^m(p) p.  Returns
    (past, future) with len(past) >= back and len(future) >= fwd + 1.
    """
    c, j, power = address
    img = sigma.images[c]
    for _ in range(power - 1):
        img = sigma(img)
    if img[j] != c:
        raise ValueError("address does not mark an occurrence of its symbol")
    p, s = img[:j], img[j + 1:]
    if not p or not s:
        raise ValueError("address needs nonempty prefix and suffix")

    def blow(word):
        out = word
        for _ in range(power):
            out = sigma(out)
        return out

    future = (c,) + s
    block = s
    while len(future) < fwd + 1:
        block = blow(block)
        future = future + block
    past = p
    block = p
    while len(past) < back:
        block = blow(block)
        past = block + past
    return past[-back:] if back else (), future[: fwd + 1]


def cylinder_locate(E: IetSpec, word_prefix):
    """Open interval of points whose symbols at steps 0..m-1 equal the prefix.

    Computed by iterated inverse images; EmptyCylinder when no point realizes
    the prefix.
    """
    word = tuple(word_prefix)
    if not word:
        raise ValueError("empty prefix")
    for s in word:
        if not (1 <= s <= E.n):
            raise ValueError(f"symbol {s} outside 1..{E.n}")
    lo, hi = E.x[word[-1] - 1], E.x[word[-1]]
    for sym in word[-2::-1]:
        slo, shi = E.image_slot(sym)
        lo2 = lo if lo > slo else slo
        hi2 = hi if hi < shi else shi
        if not (lo2 < hi2):
            raise EmptyCylinder(f"prefix unrealizable at symbol {sym}")
        pl, pr = E.x[sym - 1], E.x[sym]
        if E.sp.tau[sym - 1] > 0:
            lo, hi = pl + (lo2 - slo), pl + (hi2 - slo)
        else:
            lo, hi = pr - (hi2 - slo), pr - (lo2 - slo)
    return lo, hi

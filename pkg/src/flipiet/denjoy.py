"""Blow-up construction of an affine exchange with wandering intervals.

The orbit of a distinguished point p is replaced by gaps whose lengths follow
the exponentiated Birkhoff sums of a log-slope vector w along the orbit: the
gap over the n-th orbit point has raw length exp(S_n), S_0 = 0,
S_{n+1} = S_n + w[a_n] with a_n the piece symbol.  Summability demands S_n ->
-infinity in both directions, which holds when w is a left eigenvector for a
conjugate eigenvalue theta2 in (1, theta1) and the symbol sequence of p is a
stationary point of the return-word substitution chosen so the per-level
prefix sums drift positive and the suffix sums drift negative.  The plain
two-sided fixed word of the substitution does not in general satisfy this
(for the bundled example it provably fails in one direction), so the blow-up
point is selected by a deterministic scan over occurrence addresses
sigma^m(c) = p.c.s, validated empirically by the Birkhoff profiles.

Gap bookkeeping is double precision; the log-slope vector, the location
cylinder of p and the orbit symbols are exact.
"""

from __future__ import annotations

from bisect import bisect_left
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional

import numpy as np

from .errors import DivergentGaps, SignSelectionFailed, WordMismatch
from .iet import IetSpec
from .numfield import AlgebraicNumber, cross_embedding_dot_is_zero
from .selfsim import (Substitution, cylinder_locate, occurrence_addresses,
                      stationary_window)
from .spectral import eigen_left

PROBE_LENGTH = 100_000
KAPPA_FIT_START = 100


@dataclass
class BirkhoffProfile:
    kappa: float
    decaying: bool
    final_sum: float
    tail_max: float


@dataclass
class LogSlopeVector:
    """Left eigenvector for theta2 (exact, max-abs normalized) together with
    the sign and the blow-up address selected by the Birkhoff test."""

    w: tuple                     # exact AlgebraicNumbers, max |w_i| = 1
    w_float: tuple               # unsigned float shadow
    sign_choice: int
    address: tuple               # (c, j, power): sigma^power(c)[j] == c
    forward: BirkhoffProfile
    backward: BirkhoffProfile

    @property
    def signed_float(self):
        return tuple(self.sign_choice * v for v in self.w_float)


def birkhoff_profile(word, w, N):
    """Partial sums S_k of w along the word, an envelope decay exponent, and
    a decay verdict.

    S_0 = 0 and S_{k+1} = S_k + w[word_k].  The exponent is the slope of a
    log-log fit of the running maxima of -S.  The verdict demands the whole
    tail (last 70 percent) stay below -1 and the final sum below -2: marginal
    sequences whose excursions recur near zero at geometrically spaced scales
    would otherwise pass or fail depending on the probe horizon.
    """
    if len(word) < N:
        raise ValueError("word shorter than requested horizon")
    incr = np.array([w[s - 1] for s in word[:N]], dtype=float)
    S = np.concatenate([[0.0], np.cumsum(incr)])
    run = np.maximum.accumulate(-S[1:])
    n = np.arange(1, N + 1)
    mask = (n >= KAPPA_FIT_START) & (run > 0)
    if mask.sum() >= 10:
        kappa = float(np.polyfit(np.log(n[mask]), np.log(run[mask]), 1)[0])
    else:
        kappa = float("nan")
    k0 = max(KAPPA_FIT_START, int(0.3 * N))
    tail_max = float(S[k0:].max()) if len(S) > k0 else float(S.max())
    decaying = bool(tail_max <= -1.0 and S[-1] <= -2.0)
    return S, kappa, BirkhoffProfile(kappa=kappa, decaying=decaying,
                                     final_sum=float(S[-1]), tail_max=tail_max)


def _word_sum(word, w):
    return sum(w[s - 1] for s in word)


def log_slope_select(matrix, theta2: AlgebraicNumber, alpha, sigma: Substitution,
                     probe_length: int = PROBE_LENGTH) -> LogSlopeVector:
    """Exact left theta2-eigenvector plus the blow-up address and sign.

    Scans occurrence addresses sigma^m(c) = p.c.s (m = 1 then 2, symbols and
    offsets ascending, sign +1 then -1), keeping the first candidate whose
    prefix sum is positive, suffix sum negative, and whose two-sided Birkhoff
    profiles both decay.  Raises SignSelectionFailed when the scan is
    exhausted.
    """
    w = eigen_left(matrix, theta2)
    # exact identities: w^T M = theta2 w^T holds by construction (verified in
    # the kernel solve); orthogonality to alpha across the two embeddings:
    if not cross_embedding_dot_is_zero(w, alpha):
        raise SignSelectionFailed("left eigenvector is not orthogonal to the lengths")
    wf = tuple(float(v) for v in w)
    for power in (1, 2):
        for address in occurrence_addresses(sigma, power):
            c, j, _m = address
            img = sigma.images[c]
            for _ in range(power - 1):
                img = sigma(img)
            prefix, suffix = img[:j], img[j + 1:]
            for sign in (1, -1):
                ws = tuple(sign * v for v in wf)
                if not (_word_sum(prefix, ws) > 0 and _word_sum(suffix, ws) < 0):
                    continue
                past, future = stationary_window(sigma, address, probe_length,
                                                 probe_length)
                _, _, fwd = birkhoff_profile(future, ws, probe_length)
                _, _, bwd = birkhoff_profile(past[::-1], tuple(-v for v in ws),
                                             probe_length)
                # backward sums: S_{-m} = -sum of w over the last m past symbols
                if fwd.decaying and bwd.decaying:
                    return LogSlopeVector(w=w, w_float=wf, sign_choice=sign,
                                          address=address, forward=fwd,
                                          backward=bwd)
    raise SignSelectionFailed("no occurrence address gives two-sided decay")


@dataclass
class GapSystem:
    """Truncated blow-up data for indices n in [-N, N]."""

    half_width: int
    orbit_points: np.ndarray          # float positions of E^n(p), index n+N
    symbols: np.ndarray               # piece symbol a_n, index n+N
    gap_lengths: np.ndarray           # normalized, sums to 1
    positions: np.ndarray             # left endpoints after blow-up
    total_gap: float                  # raw (unnormalized) total mass
    p: object                         # exact blow-up point (or float)
    p_float: float
    sums: np.ndarray                  # Birkhoff sums S_n, index n+N
    word: tuple
    address: tuple
    sign_choice: int
    tail_estimate: float              # estimated mass fraction beyond the window
    kappa_forward: float
    kappa_backward: float
    iet: IetSpec

    def index(self, n: int) -> int:
        return n + self.half_width

    @property
    def indices(self):
        return np.arange(-self.half_width, self.half_width + 1)


def _fit_envelope(S):
    """Fit -S's running max to c * n^kappa; returns (c, kappa)."""
    run = np.maximum.accumulate(-S[1:])
    n = np.arange(1, len(S))
    mask = (n >= KAPPA_FIT_START) & (run > 0)
    if mask.sum() < 10:
        return 0.0, float("nan")
    slope, inter = np.polyfit(np.log(n[mask]), np.log(run[mask]), 1)
    return float(np.exp(inter)), float(slope)


TAIL_PROBE = 100_000


def gap_system_build(E: IetSpec, sigma: Substitution, lsv: LogSlopeVector,
                     N: int, tail_probe: int = TAIL_PROBE) -> GapSystem:
    """Blow up the orbit of the stationary point of lsv.address.

    The point is the exact midpoint of the cylinder of the full window word
    w_{-N..N}, so its symbols match the word by construction; the float orbit
    is still checked against the word at every step, with exact arithmetic
    consulted whenever a float point comes within 1e-9 of a breakpoint.

    The truncation tail is estimated by extending the symbolic word a further
    tail_probe indices on each side (symbols only, no orbit geometry) and
    summing the exponentiated Birkhoff sums there directly; the stretched
    exponential decay makes the remainder beyond the probe negligible.
    """
    if N < 0:
        raise ValueError("window half-width must be nonnegative")
    past, future = stationary_window(sigma, lsv.address, N, N)
    word = tuple(past) + tuple(future)        # indices 0..2N <-> n = -N..N
    lo, hi = cylinder_locate(E, word)
    two = Fraction(2) if not E.float_mode else 2.0
    p_start = (lo + hi) / two                 # = E^{-N}(p)
    ws = lsv.signed_float

    exact = not E.float_mode
    xs = tuple(float(v) for v in E.x)
    n_pieces = E.n
    # per-branch affine data for the float shadow
    branch = []
    for i in range(1, n_pieces + 1):
        slo = float(E.image_slot(i)[0])
        if E.sp.tau[i - 1] > 0:
            branch.append((slo - xs[i - 1], 1.0))
        else:
            branch.append((slo + xs[i], -1.0))

    pts = np.empty(2 * N + 1)
    z_exact = p_start
    z_float = float(p_start)
    guard = 1e-9
    for k in range(2 * N + 1):
        expected = word[k]
        i = bisect_left(xs, z_float)
        if i <= 0 or i >= len(xs):
            near = 0.0
        else:
            near = min(z_float - xs[i - 1], xs[i] - z_float)
        if near < guard:
            if not exact:
                raise WordMismatch(k - N, i, expected)
            i = E.piece_of(z_exact)
        if i != expected:
            if exact and E.piece_of(z_exact) == expected:
                i = expected            # float noise only; exact point agrees
            else:
                raise WordMismatch(k - N, i, expected)
        pts[k] = z_float
        if k < 2 * N:
            a, s = branch[i - 1]
            z_float = a + s * z_float
            if exact:
                slo, _ = E.image_slot(i)
                if E.sp.tau[i - 1] > 0:
                    z_exact = slo + (z_exact - E.x[i - 1])
                else:
                    z_exact = slo + (E.x[i] - z_exact)

    incr = np.array([ws[s - 1] for s in word], dtype=float)
    S = np.concatenate([[0.0], np.cumsum(incr)])[:-1]
    S = S - S[N]
    g_raw = np.exp(S)

    if N >= 50:
        edge = max(1, N // 10)
        nearby = g_raw[N - edge: N + edge + 1].max()
        boundary = max(g_raw[: edge].max(), g_raw[-edge:].max())
        if boundary > nearby:
            raise DivergentGaps(
                f"boundary gap mass {boundary:.3g} exceeds central mass {nearby:.3g}")

    total = float(g_raw.sum())
    g = g_raw / total

    order = np.argsort(pts)
    if N > 0 and np.diff(pts[order]).min() <= 0:
        raise DivergentGaps("duplicate orbit points: the blow-up point was not "
                            "located precisely enough")
    pos = np.empty(2 * N + 1)
    pos[order] = np.concatenate([[0.0], np.cumsum(g[order])[:-1]])

    cf, kf = _fit_envelope(S[N:])
    cb, kb = _fit_envelope(S[N::-1])
    tail_frac = 0.0
    if N > 0:
        h = N + tail_probe
        epast, efut = stationary_window(sigma, lsv.address, h, h)
        eword = tuple(epast) + tuple(efut)
        eincr = np.array([ws[s - 1] for s in eword], dtype=float)
        eS = np.concatenate([[0.0], np.cumsum(eincr)])[:-1]
        eS = eS - eS[h]
        eg = np.exp(eS)
        nn = np.abs(np.arange(-h, h + 1))
        tail_raw = float(eg[nn > N].sum())
        if tail_raw > 10 * total:
            raise DivergentGaps("extension mass dwarfs the window; the sum is "
                                "not Cauchy at this horizon")
        tail_frac = tail_raw / total

    return GapSystem(half_width=N, orbit_points=pts,
                     symbols=np.array(word, dtype=np.int64),
                     gap_lengths=g, positions=pos, total_gap=total,
                     p=z_exact if exact else z_float, p_float=float(pts[N]),
                     sums=S, word=word, address=lsv.address,
                     sign_choice=lsv.sign_choice, tail_estimate=tail_frac,
                     kappa_forward=kf, kappa_backward=kb, iet=E)


@dataclass
class AietApprox:
    """Global affine exchange assembled from a gap system.

    The map sends gap n affinely onto gap n+1 with orientation tau_{a_n} and
    slope exp(w_{a_n}); piecewise it is the n_pieces-branch affine map whose
    breakpoints are the blown-up breakpoints of the underlying exchange.  The
    boundary gaps (n = +-N) are truncation artifacts and excluded from
    certification.
    """

    breakpoints: tuple               # 0 = b_0 < b_1 < ... < b_n = 1
    slopes: tuple                    # signed: tau_i * exp(w_i)
    intercepts: tuple                # fitted per piece (None if no data)
    flips: tuple
    truncation_tail: float
    gaps: GapSystem

    def piece_of(self, y: float) -> int:
        i = bisect_left(self.breakpoints, y)
        return min(max(i, 1), len(self.breakpoints) - 1)

    def eval(self, y: float) -> float:
        i = self.piece_of(y)
        return self.slopes[i - 1] * y + self.intercepts[i - 1]


def aiet_from_gaps(gs: GapSystem) -> AietApprox:
    """Assemble the global affine map from the gap recursion."""
    N = gs.half_width
    E = gs.iet
    # blown-up breakpoints: mass strictly left of each x_j
    xs = [float(v) for v in E.x]
    order = np.argsort(gs.orbit_points)
    sorted_pts = gs.orbit_points[order]
    csum = np.concatenate([[0.0], np.cumsum(gs.gap_lengths[order])])
    bks = [0.0]
    for xj in xs[1:-1]:
        k = int(np.searchsorted(sorted_pts, xj))
        bks.append(float(csum[k]))
    bks.append(1.0)

    tau = E.sp.tau
    mids = gs.positions + gs.gap_lengths / 2
    slopes = []
    intercepts = []
    for i in range(1, E.n + 1):
        sel = np.where(gs.symbols[:-1] == i)[0]
        sel = sel[(sel >= 1) & (sel <= 2 * N - 1)]       # drop boundary gaps
        if len(sel):
            ratio = gs.gap_lengths[sel + 1] / gs.gap_lengths[sel]
            beta = tau[i - 1] * float(np.median(ratio))
            c = float(np.median(mids[sel + 1] - beta * mids[sel]))
        else:
            beta, c = float(tau[i - 1]), None     # degenerate: no interior data
        slopes.append(beta)
        intercepts.append(c)
    return AietApprox(breakpoints=tuple(bks), slopes=tuple(slopes),
                      intercepts=tuple(intercepts), flips=tuple(tau),
                      truncation_tail=gs.tail_estimate, gaps=gs)


@dataclass
class WanderingCertificate:
    disjoint: bool
    max_overlap: float
    orbit_points_distinct: bool
    affine_defect: float             # max intercept spread across symbol classes
    affine_ok: bool
    semiconjugacy_defect: float
    semiconjugacy_ok: bool
    midpoint_defect: float           # per-gap route, should be ~0
    density: float                   # max distance from grid to nearest gap
    density_ok: bool
    forward_density: float
    backward_density: float
    two_sided_density: bool
    birkhoff_kappa: tuple            # (forward, backward) fitted exponents
    kappa_ok: bool
    tolerances: dict
    tail_estimate: float

    @property
    def ok(self):
        return (self.disjoint and self.orbit_points_distinct and self.affine_ok
                and self.semiconjugacy_ok and self.density_ok
                and self.two_sided_density)


def _max_distance_to_intervals(grid, lefts, rights):
    """Max over grid points of the distance to the union of [left, right]."""
    k = np.searchsorted(lefts, grid)
    dist_left = np.where(k > 0, grid - rights[np.maximum(k - 1, 0)], np.inf)
    dist_right = np.where(k < len(lefts), lefts[np.minimum(k, len(lefts) - 1)] - grid,
                          np.inf)
    d = np.minimum(np.maximum(dist_left, 0), np.maximum(dist_right, 0))
    return float(d.max())


def verify_wandering(gs: GapSystem, T: AietApprox, E: IetSpec,
                     tolerances: Optional[dict] = None,
                     kappa_target: Optional[float] = None,
                     samples: int = 100, seed: int = 2024) -> WanderingCertificate:
    """Certify the truncated blow-up; every field is computed, none defaulted.

    Tolerances default to 10x the estimated truncation tail for the affine
    and semiconjugacy defects, 0.01 for gap density and 0.02 for the one-sided
    densities; all used values are recorded in the certificate.
    """
    N = gs.half_width
    tail = gs.tail_estimate
    tol = {"affine": 10 * tail, "semi": 10 * tail, "density": 0.01,
           "two_sided": 0.02, "kappa": 0.05}
    if tolerances:
        tol.update(tolerances)

    order = np.argsort(gs.orbit_points)
    po = gs.positions[order]
    go = gs.gap_lengths[order]
    overlap = float(((po[:-1] + go[:-1]) - po[1:]).max()) if N > 0 else 0.0
    distinct = bool(np.diff(gs.orbit_points[order]).min() > 0) if N > 0 else True

    mids = gs.positions + gs.gap_lengths / 2
    affine_defect = 0.0
    for i in range(1, E.n + 1):
        sel = np.where(gs.symbols[:-1] == i)[0]
        sel = sel[(sel >= 1) & (sel <= 2 * N - 1)]
        if len(sel) < 2:
            continue
        beta = T.slopes[i - 1]
        c_vals = mids[sel + 1] - beta * mids[sel]
        affine_defect = max(affine_defect, float(c_vals.max() - c_vals.min()))

    # semiconjugacy h: collapse each gap to its orbit point
    lefts, rights = po, po + go

    def h(y):
        k = int(np.searchsorted(lefts, y, side="right")) - 1
        k = min(max(k, 0), len(lefts) - 1)
        return float(gs.orbit_points[order[k]])

    Ef = E.as_float()
    rng = np.random.default_rng(seed)
    interior = np.arange(1, 2 * N) if N >= 1 else np.empty(0, dtype=int)
    pick = rng.choice(interior, size=min(samples, len(interior)), replace=False)
    semi_defect = 0.0
    for k in pick:
        y = gs.positions[k]                    # a boundary point of the gap set
        hy = float(gs.orbit_points[k])
        try:
            lhs = Ef.eval(hy)
        except Exception:
            continue
        ty = min(max(T.eval(y), 0.0), 1.0 - 1e-15)
        semi_defect = max(semi_defect, abs(lhs - h(ty)))

    # per-gap route: T restricted to gap n is onto gap n+1 by construction
    mid_defect = 0.0
    for k in pick:
        i = int(gs.symbols[k])
        nxt = k + 1
        beta = T.slopes[i - 1]
        if beta > 0:
            img = gs.positions[nxt] + beta * (mids[k] - gs.positions[k])
        else:
            img = (gs.positions[nxt] + gs.gap_lengths[nxt]) + beta * (mids[k] - gs.positions[k])
        mid_defect = max(mid_defect, float(abs(img - mids[nxt])))

    grid = np.linspace(0.0, 1.0, 2001)
    density = _max_distance_to_intervals(grid, lefts, rights)
    nvals = gs.indices
    fsel = np.where(nvals > 0)[0]
    bsel = np.where(nvals < 0)[0]

    def subset_density(sel):
        if not len(sel):
            return float("inf")
        o = sel[np.argsort(gs.positions[sel])]
        return _max_distance_to_intervals(grid, gs.positions[o],
                                          gs.positions[o] + gs.gap_lengths[o])

    fdens = subset_density(fsel)
    bdens = subset_density(bsel)

    kf, kb = gs.kappa_forward, gs.kappa_backward
    kappa_ok = True
    if kappa_target is not None:
        kappa_ok = (abs(kf - kappa_target) <= tol["kappa"]
                    and abs(kb - kappa_target) <= tol["kappa"])

    return WanderingCertificate(
        disjoint=bool(overlap <= 1e-12), max_overlap=max(overlap, 0.0),
        orbit_points_distinct=distinct,
        affine_defect=affine_defect, affine_ok=bool(affine_defect <= tol["affine"]),
        semiconjugacy_defect=semi_defect,
        semiconjugacy_ok=bool(semi_defect <= tol["semi"]),
        midpoint_defect=mid_defect,
        density=density, density_ok=bool(density <= tol["density"]),
        forward_density=fdens, backward_density=bdens,
        two_sided_density=bool(fdens <= tol["two_sided"] and bdens <= tol["two_sided"]),
        birkhoff_kappa=(kf, kb), kappa_ok=kappa_ok,
        tolerances=tol, tail_estimate=tail)


@dataclass
class ErgodicReport:
    per_seed: tuple                  # tuple of per-piece time averages
    spread: float                    # max cross-seed range of any average
    max_deviation: Optional[float]   # vs the reference vector, if given
    retries: int
    steps: int
    gap_time_fraction: Optional[float] = None
    gap_mass: Optional[float] = None


def ergodic_probe(E: IetSpec, seeds, steps: int, reference=None,
                  gap_system: Optional[GapSystem] = None,
                  top_gaps: int = 20) -> ErgodicReport:
    """Time averages of the piece indicators along float orbits.

    seeds may be a count (seeded rng picks start points) or an iterable of
    floats.  A discontinuity hit reseeds, up to 10 retries per orbit.  When a
    gap system is supplied, also reports the fraction of a wandering orbit's
    time spent in the top_gaps largest gaps next to their total mass (for a
    wandering map this fraction decays with the horizon; both numbers are
    informational).
    """
    if steps < 10_000:
        raise ValueError("probe needs at least 1e4 steps")
    Ef = E.as_float()
    xs = Ef.x
    n = Ef.n
    branch = []
    for i in range(1, n + 1):
        slo, _ = Ef.image_slot(i)
        if Ef.sp.tau[i - 1] > 0:
            branch.append((slo - xs[i - 1], 1.0))
        else:
            branch.append((slo + xs[i], -1.0))
    if isinstance(seeds, int):
        rng = np.random.default_rng(20_24)
        lo, hi = xs[0], xs[-1]
        span = hi - lo
        seed_pts = [lo + span * (0.02 + 0.96 * rng.random()) for _ in range(seeds)]
    else:
        seed_pts = [float(s) for s in seeds]

    retries = 0
    averages = []
    for z0 in seed_pts:
        attempts = 0
        while True:
            counts = [0] * n
            z = z0
            hit = False
            for _ in range(steps):
                i = bisect_left(xs, z)
                if i <= 0 or i > n or z == xs[i]:
                    hit = True
                    break
                counts[i - 1] += 1
                a, s = branch[i - 1]
                z = a + s * z
            if not hit:
                averages.append(tuple(c / steps for c in counts))
                break
            attempts += 1
            retries += 1
            if attempts > 10:
                raise RuntimeError("orbit kept hitting discontinuities")
            z0 = xs[0] + (xs[-1] - xs[0]) * ((z0 * 7919.77 + attempts) % 1.0)

    spread = 0.0
    for j in range(n):
        col = [av[j] for av in averages]
        spread = max(spread, max(col) - min(col))
    max_dev = None
    if reference is not None:
        ref = [float(v) for v in reference]
        max_dev = max(abs(av[j] - ref[j]) for av in averages for j in range(n))

    gap_frac = gap_mass = None
    if gap_system is not None:
        gs = gap_system
        big = np.argsort(gs.gap_lengths)[-top_gaps:]
        gap_mass = float(gs.gap_lengths[big].sum())
        bigset = set(int(b) for b in big)
        horizon = min(2 * gs.half_width, steps, 2000)
        start = int(np.argmax(gs.gap_lengths))
        start = min(start, 2 * gs.half_width - horizon)
        inside = sum(1 for k in range(start, start + horizon) if k in bigset)
        gap_frac = inside / horizon if horizon else 0.0

    return ErgodicReport(per_seed=tuple(averages), spread=spread,
                         max_deviation=max_dev, retries=retries, steps=steps,
                         gap_time_fraction=gap_frac, gap_mass=gap_mass)

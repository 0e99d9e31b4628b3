"""Counting objects: witness tuples, exact window integrals, sieve-side counts.

A witness for slope vector c, exponent window (gamma, eps) and parameter
alpha is a (d+2)-tuple (p, q_1..q_d, r) with p, r prime, q_i >= 1, and

    0 < p*alpha       - r   < p**(eps-gamma)
    0 < p*c_i*alpha   - q_i < p**(eps-gamma)   for every i.

All floor / fractional-part decisions are exact: alpha and the c_i are
128-bit fixed-point values, products c_i*alpha are carried exactly at 256
fractional bits, and thresholds p**(eps-gamma) are binary64 evaluations
treated as exact dyadic rationals.

The integral of the witness-count over alpha decomposes into measures of
unions of rational intervals; the exact path below computes it in integer
arithmetic with a per-prime common denominator, and a documented float64
fast path covers ranges where the exact path would be too slow.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .arith import ArithTable
from .errors import ContractError, RangeError, ResourceCapError
from .fixedreal import FRAC_BITS, FRAC_MASK, CVector, FixedReal

#: Largest N for which witness_integral defaults to the exact integer path.
EXACT_INTEGRAL_DEFAULT_LIMIT = 20_000

#: Default cap on enumerated error-sum lattice points.
DEFAULT_SIEVE_CAP = 20_000_000

try:  # the JIT kernel is a pure speedup; the numpy path below is equivalent
    from numba import njit as _njit
except ImportError:  # pragma: no cover
    _njit = None


def _dyadic_scaled(x: float, bits: int) -> int:
    """floor(x * 2**bits) computed exactly for a binary64 input."""
    fr = Fraction(x)
    return (fr.numerator << bits) // fr.denominator


# ----------------------------------------------------------------------
# Configuration and result types
# ----------------------------------------------------------------------

@dataclass(frozen=True)
class ApproxConfig:
    """Problem instance: slope vector, exponent margin, parameter interval.

    gamma = 1/(d*(3k+2)) is derived from the slope dimension and exponent;
    the margin must satisfy 0 < epsilon < gamma, and 0 < A < B.
    """

    c: CVector
    epsilon: float
    A: float
    B: float

    def __post_init__(self):
        if not (0.0 < self.A < self.B):
            raise ContractError("interval must satisfy 0 < A < B")
        if not (0.0 < self.epsilon < self.gamma):
            raise ContractError(
                f"margin must satisfy 0 < eps < 1/(d*(3k+2)) = {self.gamma:.6g}"
            )

    @property
    def d(self) -> int:
        return self.c.d

    @property
    def gamma(self) -> float:
        return 1.0 / (self.d * (3.0 * self.c.k + 2.0))

    @property
    def exponent(self) -> float:
        """eps - gamma, the (negative) exponent of the slack threshold."""
        return self.epsilon - self.gamma


@dataclass(frozen=True)
class SolutionTuple:
    """One witness, with its exact slacks.

    slack0 = p*alpha - r is exactly a 128-bit fixed-point value; the
    slack_i = p*c_i*alpha - q_i live at 256 fractional bits and are stored
    truncated to 128 for reporting.  Revalidation recomputes them exactly.
    """

    p: int
    r: int
    q: tuple[int, ...]
    slack0: FixedReal
    slack: tuple[FixedReal, ...]


@dataclass(frozen=True)
class WindowParams:
    """Bookkeeping quantities of one dyadic prime window [P, mu*P).

    mu_window = (a+b)/(2a); eta = (mu*P)**(eps-gamma); delta = min(c)*eta/2;
    nu = eta/(mu*P) * min(1/2, 1/c_1, ..., 1/c_d).
    """

    P: int
    a: float
    b: float
    mu_window: float
    eta: float
    delta: float
    nu: float

    @classmethod
    def from_config(cls, cfg: ApproxConfig, P: int,
                    a: float | None = None, b: float | None = None) -> "WindowParams":
        a = cfg.A if a is None else a
        b = cfg.B if b is None else b
        if not (0 < a < b):
            raise ContractError("window endpoints must satisfy 0 < a < b")
        mu = (a + b) / (2.0 * a)
        eta = (mu * P) ** cfg.exponent
        delta = min(cfg.c.floats()) * eta / 2.0
        nu = eta / (mu * P) * min(0.5, *(1.0 / ci for ci in cfg.c.floats()))
        return cls(P=P, a=a, b=b, mu_window=mu, eta=eta, delta=delta, nu=nu)


@dataclass(frozen=True)
class WindowCounts:
    """Weighted and unweighted counts over one prime window."""

    weighted: float        # Lambda-weighted count over all n in the window
    prime_count: int       # same product evaluated over primes r only
    primes_in_window: int  # primes p in [P, mu*P)
    solutions: int         # primes_in_window * prime_count


@dataclass(frozen=True)
class SieveSideParams:
    """Upper-bound-side parameters at level N.

    mu_target = N**(eps-gamma), Q = N**eps, L = Q**3 / mu_target;
    (t1, t2) is the congruence pair under examination.
    """

    N: int
    mu_target: float
    Q: float
    L: float
    t1: int
    t2: int

    @classmethod
    def from_config(cls, cfg: ApproxConfig, N: int, t1: int = 1, t2: int = 1,
                    Q: float | None = None) -> "SieveSideParams":
        mu = float(N) ** cfg.exponent
        qq = float(N) ** cfg.epsilon if Q is None else Q
        if t1 < 1 or t2 < 1:
            raise ContractError("congruence moduli must be >= 1")
        if t1 * t2 > qq:
            raise ContractError("need t1*t2 <= Q")
        return cls(N=N, mu_target=mu, Q=qq, L=qq**3 / mu, t1=t1, t2=t2)


@dataclass(frozen=True)
class SieveSideCounts:
    s_exact: int
    main_term: float
    e_bound: float


# ----------------------------------------------------------------------
# Witness counting
# ----------------------------------------------------------------------

def count_witnesses(alpha: FixedReal, cfg: ApproxConfig, N: int,
                    table: ArithTable,
                    collect: bool = True) -> tuple[int, list[SolutionTuple]]:
    """Count witnesses with p <= N; optionally return the tuples.

    Linear in the number of primes: r and the q_i are forced to be the
    floors of the respective products, so no inner search is needed.
    """
    if alpha.raw <= 0:
        raise ContractError("alpha must be positive")
    if N > table.limit:
        raise RangeError("N exceeds table limit")
    if N < 2:
        return 0, []
    exponent = cfg.exponent
    s0 = alpha.raw
    slopes = [ci.raw * alpha.raw for ci in cfg.c.entries]  # 256 frac bits
    mask256 = (1 << 256) - 1
    count = 0
    tuples: list[SolutionTuple] = []
    limit = table.limit
    for p in table.primes_between(2, N):
        p = int(p)
        thr = int(math.ldexp(float(p) ** exponent, FRAC_BITS))
        prod0 = p * s0
        fr0 = prod0 & FRAC_MASK
        if not (0 < fr0 < thr):
            continue
        r = prod0 >> FRAC_BITS
        if r > limit:
            raise RangeError(
                f"candidate r={r} exceeds table limit {limit}; "
                f"build the table up to ceil(alpha*N)+1"
            )
        if r < 2 or not table.prime_flags[r]:
            continue
        thr256 = thr << FRAC_BITS
        qs = []
        ok = True
        slacks = []
        for s in slopes:
            prod = p * s
            fr = prod & mask256
            if not (0 < fr < thr256):
                ok = False
                break
            q = prod >> 256
            if q < 1:
                ok = False
                break
            qs.append(q)
            slacks.append(FixedReal(fr >> FRAC_BITS))
        if not ok:
            continue
        count += 1
        if collect:
            tuples.append(SolutionTuple(
                p=p, r=int(r), q=tuple(qs),
                slack0=FixedReal(fr0), slack=tuple(slacks),
            ))
    return count, tuples


def revalidate_tuple(tup: SolutionTuple, alpha: FixedReal,
                     cfg: ApproxConfig) -> bool:
    """Recheck a witness from scratch in exact rational arithmetic."""
    al = alpha.to_fraction()
    thr = Fraction(float(tup.p) ** cfg.exponent)
    s0 = tup.p * al - tup.r
    if not (0 < s0 < thr):
        return False
    for ci, qi in zip(cfg.c.entries, tup.q):
        if qi < 1:
            return False
        si = tup.p * ci.to_fraction() * al - qi
        if not (0 < si < thr):
            return False
    return True


# ----------------------------------------------------------------------
# Exact integral over alpha
# ----------------------------------------------------------------------

def _scaled_endpoint(x, D: int) -> int:
    """x*D as an exact integer for dyadic (float/Fraction/int) x."""
    fr = Fraction(x)
    num = fr.numerator * D
    if num % fr.denominator:
        raise ContractError("endpoint is not exactly representable")
    return num // fr.denominator


def _exact_prime_segments(a, b, cfg: ApproxConfig, N: int, table: ArithTable):
    """Yield (p, D, segments) per prime, segments = [(lo, hi)] scaled by D.

    D = p * 2**128 * prod(craw_i); every admissible-alpha interval endpoint
    for the prime p is an exact multiple of 1/D.
    """
    if N < 2:
        return
    exponent = cfg.exponent
    craws = [ci.raw for ci in cfg.c.entries]
    pc = 1
    for cr in craws:
        pc *= cr
    cofs = [pc // cr for cr in craws]
    a_f = float(Fraction(a))
    b_f = float(Fraction(b))
    r_hi_needed = int(math.ceil(b_f * N)) + 1
    if r_hi_needed > table.limit:
        raise RangeError(
            f"table limit {table.limit} too small; need >= {r_hi_needed}"
        )
    base = pc << FRAC_BITS
    for p in table.primes_between(2, N):
        p = int(p)
        D = p * base
        aD = _scaled_endpoint(a, D)
        bD = _scaled_endpoint(b, D)
        eta_int = int(math.ldexp(float(p) ** exponent, FRAC_BITS))
        eta_off = eta_int * pc
        r_lo = max(2, int(math.floor(a_f * p)) - 1)
        r_hi = int(math.ceil(b_f * p)) + 1
        segments = []
        for r in table.primes_between(r_lo, r_hi):
            r = int(r)
            lo = r * base
            hi = lo + eta_off
            if lo < aD:
                lo = aD
            if hi > bD:
                hi = bD
            if hi <= lo:
                continue
            segs = [(lo, hi)]
            for cof in cofs:
                unit = cof << (2 * FRAC_BITS)
                width = eta_int * (cof << FRAC_BITS)
                nxt = []
                for L, H in segs:
                    q_a = L // unit
                    q_b = (H - 1) // unit
                    for q in range(max(1, q_a), q_b + 1):
                        q_lo = q * unit
                        nl = L if L > q_lo else q_lo
                        nh = q_lo + width
                        if nh > H:
                            nh = H
                        if nh > nl:
                            nxt.append((nl, nh))
                segs = nxt
                if not segs:
                    break
            segments.extend(segs)
        yield p, D, segments


def _integral_exact(a, b, cfg: ApproxConfig, N: int,
                    table: ArithTable) -> Fraction:
    total = Fraction(0)
    for _, D, segments in _exact_prime_segments(a, b, cfg, N, table):
        if segments:
            total += Fraction(sum(h - l for l, h in segments), D)
    return total


def _pair_chunks(primes: np.ndarray, ps: np.ndarray, a: float, b: float,
                 pair_budget: int):
    """Yield (p_rep, r) float64 pair arrays, bounded by a per-chunk budget.

    Pairs are all (p, r) with p in ps and r prime in [a*p - 1, b*p + 1];
    chunk boundaries are chosen so memory stays flat as p grows.
    """
    pf_all = ps.astype(np.float64)
    lo_idx = np.searchsorted(primes, np.floor(a * pf_all - 1.0).astype(np.int64),
                             side="left")
    hi_idx = np.searchsorted(primes, np.ceil(b * pf_all + 1.0).astype(np.int64),
                             side="right")
    lens = hi_idx - lo_idx
    cum = np.cumsum(lens)
    start = 0
    while start < ps.size:
        base = cum[start - 1] if start else 0
        stop = int(np.searchsorted(cum, base + pair_budget, side="left")) + 1
        stop = min(max(stop, start + 1), ps.size)
        blk_lens = lens[start:stop]
        total = int(blk_lens.sum())
        if total:
            starts = np.concatenate(([0], np.cumsum(blk_lens)))[:-1]
            gather = (np.arange(total) - np.repeat(starts, blk_lens)
                      + np.repeat(lo_idx[start:stop], blk_lens))
            r = primes[gather].astype(np.float64)
            p_rep = np.repeat(pf_all[start:stop], blk_lens)
            yield p_rep, r
        start = stop


def _d1_band_sum_numpy(primes: np.ndarray, ps: np.ndarray, a: float, b: float,
                       c: float, exponent: float,
                       pair_budget: int = 4_000_000) -> float:
    chunks = []
    for p_rep, r in _pair_chunks(primes, ps, a, b, pair_budget):
        eta_rep = p_rep ** exponent
        s = np.maximum(r, a * p_rep)
        t = np.minimum(r + eta_rep, b * p_rep)
        np.maximum(t, s, out=t)  # clamp empty intervals to zero length
        cs = c * s
        ct = c * t
        fs = np.floor(cs)
        ft = np.floor(ct)
        contrib = (ft - fs) * eta_rep
        contrib += np.minimum(ct - ft, eta_rep)
        contrib -= np.minimum(cs - fs, eta_rep)
        contrib /= c
        # remove the floor(c*beta) == 0 band [0, eta/c)
        band = np.minimum(t, eta_rep / c)
        band -= s
        np.clip(band, 0.0, None, out=band)
        contrib -= band
        contrib /= p_rep
        chunks.append(float(np.sum(contrib)))
    return math.fsum(chunks)


def _d1_band_sum_scalar(primes_f, lo_idx, hi_idx, ps_f, a, b, c, exponent):
    """Scalar kernel over (p, r) pairs; JIT-compiled when numba is present."""
    total = 0.0
    for i in range(ps_f.size):
        p = ps_f[i]
        eta = p ** exponent
        ap = a * p
        bp = b * p
        band_cut = eta / c
        acc = 0.0
        for k in range(lo_idx[i], hi_idx[i]):
            r = primes_f[k]
            s = r if r > ap else ap
            t = r + eta
            if bp < t:
                t = bp
            if t <= s:
                continue
            cs = c * s
            ct = c * t
            fs = math.floor(cs)
            ft = math.floor(ct)
            v = (ft - fs) * eta
            d1 = ct - ft
            v += d1 if d1 < eta else eta
            d0 = cs - fs
            v -= d0 if d0 < eta else eta
            v /= c
            if s < band_cut:  # floor(c*beta) == 0 band
                hi_band = t if t < band_cut else band_cut
                if hi_band > s:
                    v -= hi_band - s
            acc += v
        total += acc / p
    return total


if _njit is not None:
    _d1_band_sum_jit = _njit(cache=True, fastmath=False,
                             nogil=True)(_d1_band_sum_scalar)
else:  # pragma: no cover
    _d1_band_sum_jit = None


def _integral_fast_d1(a: float, b: float, cfg: ApproxConfig, N: int,
                      table: ArithTable) -> float:
    """Vectorized float64 evaluation of the d=1 integral.

    Uses the closed form: for beta = p*alpha in [s, t), the measure of
    {frac(c*beta) < eta, floor(c*beta) >= 1} is (F(c t) - F(c s))/c minus
    the floor-zero band, where F(x) = floor(x)*eta + min(frac(x), eta).
    Per-term absolute error is ~|endpoint|*2**-52; accumulated error is
    far below 1e-6 relative at the scales this path serves.
    """
    c = cfg.c.entries[0].to_float()
    exponent = cfg.exponent
    primes = table.primes
    i = np.searchsorted(primes, 2, side="left")
    j = np.searchsorted(primes, N, side="right")
    ps = primes[i:j]
    r_hi_needed = int(math.ceil(b * N)) + 1
    if r_hi_needed > table.limit:
        raise RangeError(
            f"table limit {table.limit} too small; need >= {r_hi_needed}"
        )
    if _d1_band_sum_jit is not None:
        pf_all = ps.astype(np.float64)
        lo_idx = np.searchsorted(primes,
                                 np.floor(a * pf_all - 1.0).astype(np.int64),
                                 side="left")
        hi_idx = np.searchsorted(primes,
                                 np.ceil(b * pf_all + 1.0).astype(np.int64),
                                 side="right")
        primes_f = table.primes.astype(np.float64)
        return float(_d1_band_sum_jit(primes_f, lo_idx, hi_idx, pf_all,
                                      a, b, c, exponent))
    return _d1_band_sum_numpy(primes, ps, a, b, c, exponent)


def _integral_fast_general(a: float, b: float, cfg: ApproxConfig, N: int,
                           table: ArithTable, pair_budget: int = 1_000_000) -> float:
    """Vectorized float64 evaluation for general d via q-candidate clipping."""
    cs = np.array(cfg.c.floats())
    exponent = cfg.exponent
    primes = table.primes
    i = np.searchsorted(primes, 2, side="left")
    j = np.searchsorted(primes, N, side="right")
    ps = primes[i:j]
    r_hi_needed = int(math.ceil(b * N)) + 1
    if r_hi_needed > table.limit:
        raise RangeError(
            f"table limit {table.limit} too small; need >= {r_hi_needed}"
        )
    eta_max = 2.0 ** exponent  # largest threshold, attained at p = 2
    n_cand = [int(math.floor(ci * eta_max)) + 2 for ci in cs]
    chunks = []
    for p_rep, r in _pair_chunks(primes, ps, a, b, pair_budget):
        eta_rep = p_rep ** exponent
        lo = np.maximum(r / p_rep, a)
        hi = np.minimum((r + eta_rep) / p_rep, b)
        live = hi > lo
        if not live.any():
            continue
        lo, hi = lo[live], hi[live]
        p_live = p_rep[live]
        eta_live = eta_rep[live]
        # accumulate interval pieces across dimensions; each dimension may
        # split an interval over a few neighbouring q values
        pieces_lo = lo[None, :]
        pieces_hi = hi[None, :]
        for ci, cand in zip(cs, n_cand):
            q0 = np.floor(ci * p_live * pieces_lo)
            new_lo, new_hi = [], []
            for k in range(cand):
                q = q0 + k
                ok = q >= 1.0
                l_k = np.maximum(pieces_lo, q / (ci * p_live))
                h_k = np.minimum(pieces_hi, (q + eta_live) / (ci * p_live))
                l_k = np.where(ok, l_k, np.inf)
                new_lo.append(l_k)
                new_hi.append(h_k)
            pieces_lo = np.concatenate(new_lo, axis=0)
            pieces_hi = np.concatenate(new_hi, axis=0)
        overlap = np.clip(pieces_hi - pieces_lo, 0.0, None)
        chunks.append(float(np.sum(overlap)))
    return math.fsum(chunks)


def witness_integral(a, b, cfg: ApproxConfig, N: int, table: ArithTable,
                     method: str = "auto"):
    """Integral over alpha in [a, b] of the witness count with p <= N.

    method='exact' returns the integral as an exact Fraction (integer
    interval arithmetic); method='fast' returns a float64 evaluation with
    relative error well below 1e-6; 'auto' switches on N.
    """
    a_fr, b_fr = Fraction(a), Fraction(b)
    if not (Fraction(cfg.A) <= a_fr < b_fr <= Fraction(cfg.B)):
        raise ContractError("need A <= a < b <= B")
    if method == "auto":
        method = "exact" if N <= EXACT_INTEGRAL_DEFAULT_LIMIT else "fast"
    if method == "exact":
        return _integral_exact(a, b, cfg, N, table)
    if method == "fast":
        if cfg.d == 1:
            return _integral_fast_d1(float(a_fr), float(b_fr), cfg, N, table)
        return _integral_fast_general(float(a_fr), float(b_fr), cfg, N, table)
    raise ContractError(f"unknown method {method!r}")


def riemann_scan(a, b, cfg: ApproxConfig, N: int, table: ArithTable,
                 points: int) -> tuple[Fraction, int]:
    """Left-rule Riemann sum of the witness count on an exact dyadic grid.

    Grid: alpha_g = a + g*(b-a)/points, 0 <= g < points.  Returns the sum
    times the spacing (an exact Fraction) and the number of positive-length
    intervals scanned; |riemann - exact integral| <= spacing * intervals.
    """
    a_fr = Fraction(a)
    width = Fraction(b) - a_fr
    if width <= 0:
        raise ContractError("need a < b")
    hits = 0
    intervals = 0
    for p, D, segments in _exact_prime_segments(a, b, cfg, N, table):
        aD = _scaled_endpoint(a_fr, D)
        # g > (L - aD) * points / (width * D);  g < (H - aD) * points / (...)
        den = width.numerator * D
        scale = points * width.denominator
        for L, H in segments:
            intervals += 1
            num_lo = (L - aD) * scale
            num_hi = (H - aD) * scale
            g_min = num_lo // den + 1
            g_max = (num_hi - 1) // den
            g_min = max(g_min, 0)
            g_max = min(g_max, points - 1)
            if g_max >= g_min:
                hits += g_max - g_min + 1
    return hits * width / points, intervals


# ----------------------------------------------------------------------
# Growth normalizer
# ----------------------------------------------------------------------

def target_growth(cfg: ApproxConfig, N: int) -> float:
    """The definition-level growth normalizer for the witness integral:
    (A/B)**2 * min(c_1..c_d, d)**(d-1) / 2**(d+1)
            * N**(1-(d+1)(gamma-eps)) / (log N)**2.
    """
    if N < 2:
        raise ContractError("need N >= 2")
    d = cfg.d
    m = min(*cfg.c.floats(), float(d)) if d > 1 else min(cfg.c.floats()[0], 1.0)
    return ((cfg.A / cfg.B) ** 2 * m ** (d - 1) / 2 ** (d + 1)
            * float(N) ** (1.0 - (d + 1) * (cfg.gamma - cfg.epsilon))
            / math.log(N) ** 2)


def target_growth_alt(cfg: ApproxConfig, N: int) -> float:
    """Variant normalizer with min(c_1..c_d, 2); equal to the main one
    for d = 2, reported alongside it as a diagnostic."""
    if N < 2:
        raise ContractError("need N >= 2")
    d = cfg.d
    m = min(*cfg.c.floats(), 2.0) if d > 1 else min(cfg.c.floats()[0], 2.0)
    return ((cfg.A / cfg.B) ** 2 * m ** (d - 1) / 2 ** (d + 1)
            * float(N) ** (1.0 - (d + 1) * (cfg.gamma - cfg.epsilon))
            / math.log(N) ** 2)


# ----------------------------------------------------------------------
# Window counts
# ----------------------------------------------------------------------

def _ceil_raw(raw: int) -> int:
    return -((-raw) >> FRAC_BITS)


def window_counts(P: int, wp: WindowParams, cfg: ApproxConfig,
                  table: ArithTable, delta: float | None = None,
                  reverse: bool = False) -> WindowCounts:
    """Lambda-weighted and prime counts of lattice hits over one window.

    weighted = sum over P*a*mu <= n <= b*P of Lambda(n) * prod_i #(integers
    in [c_i n, c_i n + delta)); prime_count is the same product summed over
    primes r only; solutions = primes_in_window * prime_count.

    ``delta`` overrides the window's derived value (diagnostics only).
    ``reverse`` flips the iteration order; the weighted sum is accumulated
    with exact float summation, so both orders agree bit-for-bit.
    """
    dl = wp.delta if delta is None else delta
    if dl <= 0:
        raise ContractError("delta must be positive")
    delta_int = _dyadic_scaled(dl, FRAC_BITS)
    craws = [ci.raw for ci in cfg.c.entries]
    n_lo = int(math.ceil(P * wp.a * wp.mu_window))
    n_hi = int(math.floor(wp.b * P))
    if n_hi > table.limit:
        raise RangeError("window end exceeds table limit")
    if n_lo > n_hi:
        return WindowCounts(0.0, 0, 0, 0)

    def factor_product(n: int) -> int:
        prod = 1
        for cr in craws:
            y = cr * n
            f = _ceil_raw(y + delta_int) - _ceil_raw(y)
            if f == 0:
                return 0
            prod *= f
        return prod

    lam = table.von_mangoldt_range(n_lo, n_hi)
    support = np.nonzero(lam)[0]
    if reverse:
        support = support[::-1]
    terms = []
    for idx in support:
        n = int(idx) + n_lo
        prod = factor_product(n)
        if prod:
            terms.append(prod * float(lam[idx]))
    weighted = math.fsum(terms)

    s_count = 0
    rs = table.primes_between(max(n_lo, 2), n_hi)
    if reverse:
        rs = rs[::-1]
    for r in rs:
        s_count += factor_product(int(r))

    mu_hi = wp.mu_window * P
    r_hi = int(math.ceil(mu_hi)) - 1 if float(int(mu_hi)) == mu_hi else int(math.floor(mu_hi))
    r_count = int(table.primes_between(P, min(r_hi, table.limit)).size) if r_hi >= P else 0
    return WindowCounts(weighted=weighted, prime_count=s_count,
                        primes_in_window=r_count,
                        solutions=r_count * s_count)


# ----------------------------------------------------------------------
# Product set and sieve-side counts
# ----------------------------------------------------------------------

def product_set(alpha: FixedReal, cfg: ApproxConfig, N: int,
                mu: float | None = None) -> list[tuple[int, int]]:
    """Members n <= N passing all d+1 fractional-part tests, with n*floor(n*alpha).

    mu defaults to N**(eps-gamma); an explicit value supports degenerate
    diagnostics (mu >= 1 admits every n).
    """
    if alpha.raw <= 0:
        raise ContractError("alpha must be positive")
    mu_val = float(N) ** cfg.exponent if mu is None else mu
    out = []
    if mu_val >= 1.0:
        for n in range(1, N + 1):
            out.append((n, n * ((n * alpha.raw) >> FRAC_BITS)))
        return out
    thr = _dyadic_scaled(mu_val, FRAC_BITS)
    thr256 = thr << FRAC_BITS
    slopes = [ci.raw * alpha.raw for ci in cfg.c.entries]
    mask256 = (1 << 256) - 1
    for n in range(1, N + 1):
        prod0 = n * alpha.raw
        if (prod0 & FRAC_MASK) >= thr:
            continue
        if any((n * s & mask256) >= thr256 for s in slopes):
            continue
        out.append((n, n * (prod0 >> FRAC_BITS)))
    return out


def sieve_side_counts(alpha: FixedReal, sp: SieveSideParams, cfg: ApproxConfig,
                      table: ArithTable,
                      cap: int = DEFAULT_SIEVE_CAP) -> SieveSideCounts:
    """Exact congruence-window count, its main term, and the error majorant.

    s_exact counts 1 <= n <= N/t1 with frac(n t1 alpha / t2) < mu/t2 and
    frac(n t1 c_i alpha) < mu for all i (exact integer tests).  main_term =
    N mu**(d+1)/(t1 t2).  e_bound evaluates the min-form majorant of the
    exponential-sum error over the punctured box max|m| <= L.
    """
    t1, t2, N = sp.t1, sp.t2, sp.N
    mu = sp.mu_target
    mu_int = _dyadic_scaled(mu, FRAC_BITS)
    mod0 = t2 << FRAC_BITS
    slopes = [ci.raw * alpha.raw for ci in cfg.c.entries]
    mod_i = 1 << 256
    thr256 = mu_int << FRAC_BITS
    n_max = N // t1
    s_exact = 0
    a_raw = alpha.raw
    for n in range(1, n_max + 1):
        if (n * t1 * a_raw) % mod0 >= mu_int:
            continue
        if any((n * t1 * s) % mod_i >= thr256 for s in slopes):
            continue
        s_exact += 1
    main = N * mu ** (cfg.d + 1) / (t1 * t2)
    e_bound = _sieve_error_majorant(alpha, sp, cfg, cap)
    return SieveSideCounts(s_exact=s_exact, main_term=main, e_bound=e_bound)


def _box_grid(l_int: int, d_plus_1: int, cap: int) -> np.ndarray:
    count = (2 * l_int + 1) ** d_plus_1
    if count > cap:
        raise ResourceCapError(
            f"error-sum box of {count} points exceeds cap {cap}"
        )
    axes = [np.arange(-l_int, l_int + 1)] * d_plus_1
    mesh = np.meshgrid(*axes, indexing="ij")
    return np.stack([m.ravel() for m in mesh], axis=-1)


def _sieve_error_majorant(alpha: FixedReal, sp: SieveSideParams,
                          cfg: ApproxConfig, cap: int) -> float:
    t1, t2 = sp.t1, sp.t2
    l_int = int(math.floor(sp.L))
    if l_int < 1:
        return 0.0
    grid = _box_grid(l_int, cfg.d + 1, cap)
    nonzero = np.any(grid != 0, axis=1)
    grid = grid[nonzero].astype(np.float64)
    cs = np.array(cfg.c.floats())
    inner = grid[:, 0] / t2 + grid[:, 1:] @ cs
    val = alpha.to_float() * t1 * inner
    dist = np.abs(val - np.round(val))
    cap_val = sp.N / t1
    with np.errstate(divide="ignore"):
        terms = np.minimum(cap_val, np.where(dist > 0, 1.0 / np.where(dist > 0, dist, 1.0), np.inf))
    return float(sp.mu_target ** (cfg.d + 1) / t2 * np.sum(terms))


def sieve_side_error_raw(alpha: FixedReal, sp: SieveSideParams,
                         cfg: ApproxConfig,
                         cap: int = DEFAULT_SIEVE_CAP) -> float:
    """Error term via the raw exponential sums (exact phases), for cross-checks.

    Always bounded by the min-form majorant.
    """
    t1, t2 = sp.t1, sp.t2
    l_int = int(math.floor(sp.L))
    if l_int < 1:
        return 0.0
    n_max = sp.N // t1
    grid = _box_grid(l_int, cfg.d + 1, cap // max(n_max, 1) + 1)
    craws = [ci.raw for ci in cfg.c.entries]
    modulus = t2 << 256
    total = 0.0
    for m in grid:
        if not any(m):
            continue
        # theta * (t2 * 2**256) = a_raw * t1 * (m0*2**128 + t2*sum m_i craw_i)
        inner = (int(m[0]) << FRAC_BITS) + t2 * sum(
            int(mi) * cr for mi, cr in zip(m[1:], craws)
        )
        w = alpha.raw * t1 * inner
        acc = 0j
        for n in range(1, n_max + 1):
            ph = (n * w) % modulus
            acc += complex(math.cos(2 * math.pi * ph / modulus),
                           math.sin(2 * math.pi * ph / modulus))
        total += abs(acc)
    return float(sp.mu_target ** (cfg.d + 1) / t2 * total)


def sieve_error_sum(alpha: FixedReal, cfg: ApproxConfig, N: int,
                    table: ArithTable, Q: float | None = None,
                    cap: int = DEFAULT_SIEVE_CAP) -> float:
    """Weighted error functional over all congruence pairs t1*t2 <= Q:
    sum (t1 t2)**eps * (N mu**d / L + e_bound(t1, t2))."""
    qq = float(N) ** cfg.epsilon if Q is None else Q
    if qq < 1.0:
        return 0.0
    total = 0.0
    t1 = 1
    while t1 <= qq:
        t2 = 1
        while t1 * t2 <= qq:
            sp = SieveSideParams.from_config(cfg, N, t1, t2, Q=qq)
            e_term = _sieve_error_majorant(alpha, sp, cfg, cap)
            total += ((t1 * t2) ** cfg.epsilon
                      * (N * sp.mu_target ** cfg.d / sp.L + e_term))
            t2 += 1
        t1 += 1
    return total

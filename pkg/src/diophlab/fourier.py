"""Sawtooth approximation, exact exponential sums, and min-sum estimators.

Exactness policy: phases of exponential sums are reduced modulo 1 in the
128-bit fixed-point domain (vectorized 32-bit limb arithmetic, exact), and
only the final trigonometric step runs in binary64.  Inequality tests
downstream budget 2**-40 per polynomial evaluation for that step.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import ContractError, RangeError, ResourceCapError
from .fixedreal import FRAC_MASK, SCALE, CVector, FixedReal

TWO_PI = 2.0 * math.pi

#: Default cap on enumerated terms in box-shaped min-sums.
DEFAULT_TERM_CAP = 20_000_000

_MASK32 = np.uint64(0xFFFFFFFF)
_SHIFT32 = np.uint64(32)


def sawtooth(x: float) -> float:
    """psi(x) = x - floor(x) - 1/2; equals -1/2 at integers."""
    return x - math.floor(x) - 0.5


def sawtooth_array(x: np.ndarray) -> np.ndarray:
    return x - np.floor(x) - 0.5


def vaaler_weight(t: float) -> float:
    """W(t) = pi*t*(1-|t|)*cot(pi*t) + |t| on (-1, 1), with W(0) = 1."""
    if abs(t) >= 1.0:
        raise RangeError(f"weight argument |t|={abs(t)} must be < 1")
    if t == 0.0:
        return 1.0
    at = abs(t)
    return math.pi * t * (1.0 - at) / math.tan(math.pi * t) + at


@dataclass(frozen=True)
class VaalerPolynomial:
    """Degree-J trigonometric approximation of the sawtooth with error majorant.

    ``psi_star_coeffs[j]`` (1 <= j <= J) is the coefficient at e(jx); the
    coefficient at e(-jx) is its conjugate, so the polynomial is real.
    ``tau_coeffs[j]`` (0 <= j <= J) is the shared coefficient at e(+-jx) of
    the nonnegative majorant.
    """

    degree: int
    psi_star_coeffs: np.ndarray  # complex128, index 0 unused
    tau_coeffs: np.ndarray       # float64

    @classmethod
    def build(cls, degree: int) -> "VaalerPolynomial":
        if degree < 1:
            raise ContractError("degree must be a positive integer")
        j = np.arange(degree + 1, dtype=np.float64)
        weights = np.array(
            [0.0] + [vaaler_weight(t / (degree + 1)) for t in range(1, degree + 1)]
        )
        psi_coeffs = np.zeros(degree + 1, dtype=np.complex128)
        psi_coeffs[1:] = 1j * weights[1:] / (TWO_PI * j[1:])  # = -(2*pi*i*j)^-1 W
        tau_coeffs = (1.0 - j / (degree + 1)) / (2 * degree + 2)
        return cls(degree=degree, psi_star_coeffs=psi_coeffs, tau_coeffs=tau_coeffs)

    def psi_star(self, x) -> np.ndarray | float:
        """Real evaluation via the conjugate pairing of the coefficients.

        The pair at +-j contributes -W(j/(J+1)) sin(2 pi j x)/(pi j), i.e.
        -2 Im(coeff_j) sin(2 pi j x).
        """
        xa = np.asarray(x, dtype=np.float64)
        acc = np.zeros_like(xa)
        for j in range(1, self.degree + 1):
            acc -= 2.0 * self.psi_star_coeffs[j].imag * np.sin(TWO_PI * j * xa)
        return acc if acc.shape else float(acc)

    def tau(self, x) -> np.ndarray | float:
        xa = np.asarray(x, dtype=np.float64)
        acc = np.full_like(xa, self.tau_coeffs[0])
        for j in range(1, self.degree + 1):
            acc += 2.0 * self.tau_coeffs[j] * np.cos(TWO_PI * j * xa)
        return acc if acc.shape else float(acc)


def psi_star_and_tau(poly: VaalerPolynomial, x):
    """Evaluate both polynomials of the approximation pair at x."""
    return poly.psi_star(x), poly.tau(x)


def fejer_tau(degree: int, x: np.ndarray) -> np.ndarray:
    """Closed-form evaluation of the majorant via the nonnegative kernel.

    Agrees with ``VaalerPolynomial.tau`` up to binary64 roundoff; O(1) per
    point, used by the bound audits on large grids.
    """
    xr = x - np.round(x)  # reduce to [-1/2, 1/2]; sinc is safe there
    num = np.sinc((degree + 1) * xr)
    den = np.sinc(xr)
    return ((degree + 1) / (2 * degree + 2)) * (num / den) ** 2


# ----------------------------------------------------------------------
# Exact phase reduction (vectorized 32-bit limb arithmetic)
# ----------------------------------------------------------------------

def _mul_mod_scale(t: int, n: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """(n * t) mod 2**128 for 0 <= t < 2**128 and 0 <= n < 2**32.

    Returns (hi, lo) uint64 halves.  All intermediate products fit in
    uint64 exactly, so the reduction is exact.
    """
    n64 = n.astype(np.uint64)
    limbs = [(t >> (32 * i)) & 0xFFFFFFFF for i in range(4)]
    p0 = n64 * np.uint64(limbs[0])
    p1 = n64 * np.uint64(limbs[1])
    p2 = n64 * np.uint64(limbs[2])
    p3 = n64 * np.uint64(limbs[3])
    r0 = p0 & _MASK32
    s1 = (p0 >> _SHIFT32) + (p1 & _MASK32)
    r1 = s1 & _MASK32
    s2 = (p1 >> _SHIFT32) + (p2 & _MASK32) + (s1 >> _SHIFT32)
    r2 = s2 & _MASK32
    s3 = (p2 >> _SHIFT32) + (p3 & _MASK32) + (s2 >> _SHIFT32)
    r3 = s3 & _MASK32  # carry out of the top limb drops: reduction mod 2**128
    return (r3 << _SHIFT32) | r2, (r1 << _SHIFT32) | r0


def _add_mod_scale(a, b):
    """(a + b) mod 2**128 on (hi, lo) uint64 pairs."""
    ahi, alo = a
    bhi, blo = b
    lo = alo + blo
    carry = (lo < alo).astype(np.uint64)
    hi = ahi + bhi + carry
    return hi, lo


def frac_raw_parts(theta: FixedReal, n: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Exact frac(n * theta) as (hi, lo) uint64 halves of the 128-bit raw.

    Handles signed multipliers up to 2**63 in magnitude by splitting into
    32-bit pieces; the reduction itself stays exact.
    """
    t = theta.raw & FRAC_MASK
    n = np.asarray(n, dtype=np.int64)
    if n.size and int(np.abs(n).max()) >= (1 << 63):
        raise ResourceCapError("multipliers beyond 2**63 void exactness")
    mag = np.abs(n).astype(np.uint64)
    lo32 = mag & _MASK32
    hi32 = mag >> _SHIFT32
    res = _mul_mod_scale(t, lo32)
    if bool((hi32 != 0).any()):
        t_shift = (t << 32) & FRAC_MASK
        res = _add_mod_scale(res, _mul_mod_scale(t_shift, hi32))
    hi, lo = res
    neg = n < 0
    if bool(neg.any()):
        # 2**128 - r (mod 2**128), with r == 0 left in place
        nz = neg & ((hi != 0) | (lo != 0))
        flo = (np.uint64(0) - lo)[nz]
        borrow = (lo[nz] != 0).astype(np.uint64)
        fhi = np.uint64(0) - hi[nz] - borrow
        lo[nz] = flo
        hi[nz] = fhi
    return hi, lo


def frac_multiples(theta: FixedReal, n: np.ndarray) -> np.ndarray:
    """frac(n * theta) in [0, 1) as float64, after exact reduction."""
    hi, lo = frac_raw_parts(theta, n)
    return hi.astype(np.float64) * 2.0**-64 + lo.astype(np.float64) * 2.0**-128


def dist_multiples(theta: FixedReal, n: np.ndarray) -> np.ndarray:
    """Distance of n*theta to the nearest integer, exact reduction first."""
    f = frac_multiples(theta, n)
    return np.minimum(f, 1.0 - f)


def exp_sum(n_lo: int, n_hi: int, theta: FixedReal) -> complex:
    """Sum of e(n*theta) over n_lo <= n <= n_hi with exact phase reduction."""
    if n_lo > n_hi:
        raise ContractError("empty summation range")
    ns = np.arange(n_lo, n_hi + 1, dtype=np.int64)
    phases = frac_multiples(theta, ns)
    return complex(np.exp(2j * np.pi * phases).sum())


# ----------------------------------------------------------------------
# Min-sum estimators
# ----------------------------------------------------------------------

def _min_terms(x: float, m: np.ndarray, dists: np.ndarray) -> np.ndarray:
    """min(x/m, 1/dist) with dist == 0 falling back to the x/m branch."""
    with np.errstate(divide="ignore"):
        recip = np.where(dists > 0.0, 1.0 / np.where(dists > 0, dists, 1.0), np.inf)
    return np.minimum(x / m, recip)


def min_sum_with_bound(L: int, x: float, c: FixedReal,
                       approx: tuple[int, int]) -> tuple[float, float]:
    """Left side sum_{l<=L} min(x/l, dist(l*c)^-1) and its denominator bound.

    Requires the rational approximation a/q to satisfy gcd(a,q)=1 and
    |c - a/q| <= q**-2 (checked exactly on the fixed-point value).
    """
    a, q = approx
    if q < 1 or math.gcd(a, q) != 1:
        raise ContractError("approximation must be a reduced fraction q >= 1")
    if abs(c.raw * q * q - a * q * SCALE) > SCALE:
        raise ContractError("|c - a/q| <= q**-2 does not hold")
    if L < 1 or x <= 1.0:
        raise ContractError("need L >= 1 and x > 1")
    ls = np.arange(1, L + 1, dtype=np.int64)
    dists = dist_multiples(c, ls)
    lhs = float(np.sum(_min_terms(x, ls.astype(np.float64), dists)))
    rhs = (x / q + L + q) * math.log(2.0 * L * q * x)
    return lhs, rhs


def _half_box(h: tuple[int, ...]):
    """Canonical representatives of the nonzero integer box (one of v, -v)."""
    import itertools

    spans = [range(-hi, hi + 1) for hi in h]
    for v in itertools.product(*spans):
        for comp in v:
            if comp > 0:
                yield v
                break
            if comp < 0:
                break


def box_min_sum(h: tuple[int, ...], m_max: int, x: float, c: CVector,
                cap: int = DEFAULT_TERM_CAP) -> float:
    """Exact double sum over the punctured box |j_i| <= h_i and 1 <= m <= M
    of min(x/m, dist(m * (j.c))^-1).

    Symmetric in j -> -j, so only canonical representatives are enumerated
    and doubled.
    """
    if len(h) != c.d:
        raise ContractError("box shape must match slope dimension")
    if any(hi < 0 for hi in h):
        raise ContractError("box bounds must be nonnegative")
    n_terms = m_max
    for hi in h:
        n_terms *= 2 * hi + 1
    if n_terms > cap:
        raise ResourceCapError(f"{n_terms} terms exceed cap {cap}")
    if all(hi == 0 for hi in h):
        return 0.0
    ms = np.arange(1, m_max + 1, dtype=np.int64)
    mf = ms.astype(np.float64)
    total = 0.0
    for v in _half_box(h):
        theta = FixedReal(sum(vi * ci.raw for vi, ci in zip(v, c.entries)))
        dists = dist_multiples(theta, ms)
        total += float(np.sum(_min_terms(x, mf, dists)))
    return 2.0 * total


def dyadic_weighted_min_sum(m_max: int, x: float, degree: int, c: CVector,
                            cap: int = DEFAULT_TERM_CAP) -> tuple[float, float]:
    """Weighted min-sum over the full index box, with its closed-form bound.

    Exact side: sum over 1 <= |j_i| <= degree (all d coordinates) of
    1/|j_1...j_d| * sum_{m<=M} min(x/m, dist(m * j.c)^-1), organized by
    dyadic blocks 2**t <= |j_i| < 2**(t+1).  Bound side:
    (log 2x)**(d+1) * (M + (x*degree)**(1 - 1/(k+1))).
    """
    d = c.d
    n_terms = m_max * (2 * degree) ** d
    if n_terms > cap:
        raise ResourceCapError(f"{n_terms} terms exceed cap {cap}")
    ms = np.arange(1, m_max + 1, dtype=np.int64)
    mf = ms.astype(np.float64)

    # magnitudes grouped into dyadic blocks [2**t, 2**(t+1)), clipped at degree
    magnitudes = []
    t = 1
    while t <= degree:
        magnitudes.extend(range(t, min(2 * t - 1, degree) + 1))
        t *= 2

    import itertools

    exact = 0.0
    # iterate over sign/magnitude combinations, halved by j -> -j symmetry
    for mags in itertools.product(magnitudes, repeat=d):
        weight = 1.0
        for m in mags:
            weight /= m
        for signs in itertools.product((1, -1), repeat=d):
            v = tuple(s * m for s, m in zip(signs, mags))
            first = next(comp for comp in v if comp != 0)
            if first < 0:
                continue  # counted via the mirror image
            theta = FixedReal(sum(vi * ci.raw for vi, ci in zip(v, c.entries)))
            dists = dist_multiples(theta, ms)
            exact += 2.0 * weight * float(np.sum(_min_terms(x, mf, dists)))
    k = c.k
    bound = math.log(2.0 * x) ** (d + 1) * (
        m_max + (x * degree) ** (1.0 - 1.0 / (k + 1.0))
    )
    return exact, bound

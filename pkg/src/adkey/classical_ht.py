"""Classical binary hypothesis testing for n-fold product distributions.

The optimal error for {pi0 P0^n, pi1 P1^n} is sum_x min(pi0 P0^n(x), pi1 P1^n(x)),
which depends on x only through the log-likelihood ratio L_n = ln(P1^n/P0^n).

Two evaluation paths are used:

* exact: when the number of types is small, sum over types in log-space.
* FFT: discretize the per-letter LLR on a grid, convolve n times with FFT
  and exponentiation by squaring, and turn the rounding into a certified
  [lower, upper] bracket.

The FFT path works under an exponentially tilted law P_theta ~ P0^(1-theta) P1^theta,
so that the event near the decision threshold carries O(1) probability and
the exponentially small prefactor N_theta^n is carried exactly in log-space.
"""

from __future__ import annotations

import dataclasses
import itertools
import math
from typing import Sequence, Tuple

import numpy as np
import scipy.fft
import scipy.signal
import scipy.special

from adkey.discrimination import _prob_vector
from adkey.errors import NumericGuardError, ValidationError
from adkey.matcore import golden_min

MAX_CONV_BINS = 2 ** 24
MIN_BINS = 64
DEFAULT_BINS = 4096
MAX_TYPES = 50000
# Relative slack for floating-point round-off in summations.
EXACT_REL_SLACK = 1e-10
# Threshold range covered by precomputed tables; |ln(s/(1-s))| for s >= 2^-62.
DEFAULT_T_MAX = 45.0
EPS = np.finfo(float).eps


@dataclasses.dataclass(frozen=True)
class LLRDistribution:
    """Law of L = ln(p1/p0) on the grid origin + k * step, k = 0..B-1.

    Outcomes with L = +inf or -inf are kept as separate atoms.
    """

    grid_origin: float
    grid_step: float
    masses: np.ndarray
    mass_pos_inf: float = 0.0
    mass_neg_inf: float = 0.0

    def __post_init__(self):
        if not self.grid_step > 0:
            raise ValidationError(f'grid_step must be positive, got {self.grid_step}')
        m = np.asarray(self.masses, dtype=float)
        if np.any(m < 0):
            raise ValidationError('masses must be non-negative')
        object.__setattr__(self, 'masses', m)

    @property
    def total_mass(self) -> float:
        return float(self.masses.sum() + self.mass_pos_inf + self.mass_neg_inf)

    @property
    def grid(self) -> np.ndarray:
        return self.grid_origin + self.grid_step * np.arange(self.masses.size)


@dataclasses.dataclass(frozen=True)
class ErrorBracket:
    lower: float
    upper: float

    def __post_init__(self):
        if not (0.0 <= self.lower <= self.upper):
            raise ValidationError(f'invalid bracket [{self.lower}, {self.upper}]')

    @property
    def width(self) -> float:
        return self.upper - self.lower

    def __contains__(self, x) -> bool:
        return self.lower <= x <= self.upper


def _pair(p0, p1) -> Tuple[np.ndarray, np.ndarray]:
    a = _prob_vector(p0, 'p0')
    b = _prob_vector(p1, 'p1')
    if a.shape != b.shape:
        raise ValidationError(f'length mismatch: {a.size} vs {b.size}')
    return a, b


def _check_bins(bins: int):
    if bins < MIN_BINS or bins & (bins - 1):
        raise ValidationError(f'bins must be a power of two >= {MIN_BINS}, got {bins}')


def classical_error_exact(prior_0: float, p0, p1) -> float:
    """sum_x min(pi0 p0(x), pi1 p1(x))."""
    a, b = _pair(p0, p1)
    return float(np.minimum(prior_0 * a, (1.0 - prior_0) * b).sum())


def _grid_for(llr: np.ndarray, bins: int) -> Tuple[float, float]:
    lo, hi = float(llr.min()), float(llr.max())
    span = hi - lo
    if span <= 0:
        return lo, 1.0
    # The 64/63 margin keeps rounded indices inside [0, B-1] in both directions
    # and makes the grid nest exactly when bins doubles.
    return lo, span * (64.0 / 63.0) / bins


def build_llr(p0, p1, bins: int = DEFAULT_BINS, sample_from: str = 'P0') -> LLRDistribution:
    """Discretized law of ln(p1/p0) under P0 or P1.

    Finite values are rounded down on the grid for the P0 law and up for the
    P1 law. Outcomes with p0 = 0 < p1 go to the +inf atom and those with
    p1 = 0 < p0 to the -inf atom; outcomes null under both are dropped.
    """
    _check_bins(bins)
    a, b = _pair(p0, p1)
    if sample_from not in ('P0', 'P1'):
        raise ValidationError(f"sample_from must be 'P0' or 'P1', got {sample_from!r}")
    w = a if sample_from == 'P0' else b
    common = (a > 0) & (b > 0)
    pos_inf = float(w[(a == 0) & (b > 0)].sum())
    neg_inf = float(w[(b == 0) & (a > 0)].sum())
    masses = np.zeros(bins)
    if not common.any():
        return LLRDistribution(0.0, 1.0, masses, pos_inf, neg_inf)
    llr = np.log(b[common]) - np.log(a[common])
    origin, step = _grid_for(llr, bins)
    pos = (llr - origin) / step
    idx = np.floor(pos) if sample_from == 'P0' else np.ceil(pos)
    idx = np.clip(idx.astype(np.int64), 0, bins - 1)
    np.add.at(masses, idx, w[common])
    return LLRDistribution(origin, step, masses, pos_inf, neg_inf)


def _spectrum_power(x: np.ndarray, n: int) -> np.ndarray:
    """x**n for a complex array by repeated squaring."""
    result = None
    base = x
    while True:
        if n & 1:
            result = base.copy() if result is None else result * base
        n >>= 1
        if not n:
            break
        base = base * base
    return result


def _conv_power(masses: np.ndarray, n: int) -> np.ndarray:
    """n-fold self-convolution of a non-negative vector via FFT."""
    size = n * (masses.size - 1) + 1
    if n == 1:
        return masses.copy()
    m = scipy.fft.next_fast_len(size, real=True)
    spec = scipy.fft.rfft(masses, m)
    out = scipy.fft.irfft(_spectrum_power(spec, n), m)[:size]
    return out


def _fft_noise(size: int, n: int, l1: float) -> float:
    """Allowance for the summed absolute FFT error of an n-fold convolution.

    Each spectral entry carries relative error about n * eps * log2(size);
    Parseval turns that into an L2 error, and sqrt(size) converts L2 to L1.
    A factor 10 covers the constants.
    """
    if n == 1:
        return 0.0
    return 10.0 * math.sqrt(size) * n * EPS * max(math.log2(size), 1.0) * l1 ** n


def convolve_n(l: LLRDistribution, n: int) -> LLRDistribution:
    """Law of the sum of n iid copies.

    The grid grows to n (B - 1) + 1 bins. Infinite atoms combine first:
    the sum is infinite as soon as one summand is.
    """
    if n < 1:
        raise ValidationError(f'n must be >= 1, got {n}')
    b = l.masses.size
    if n * b > MAX_CONV_BINS:
        raise NumericGuardError(f'convolve_n: n * bins = {n * b} exceeds the limit of {MAX_CONV_BINS} (2^24)')
    if l.mass_pos_inf > 0 and l.mass_neg_inf > 0:
        raise ValidationError('convolve_n: both infinite atoms are present, the sum is undefined')
    out = np.clip(_conv_power(l.masses, n), 0.0, None)
    finite = float(l.masses.sum())
    pos = 1.0 - finite ** n if l.mass_pos_inf > 0 else 0.0
    neg = 1.0 - finite ** n if l.mass_neg_inf > 0 else 0.0
    return LLRDistribution(n * l.grid_origin, l.grid_step, out, pos, neg)


def classical_chernoff(p0, p1) -> Tuple[float, float]:
    """C = min over lambda of sum p0^lambda p1^(1-lambda), and the argmin.

    Zero entries follow the 0^0 = 0 convention. A flat objective reports 0.5.
    """
    a, b = _pair(p0, p1)
    return _chernoff_1d(a, b)


def _chernoff_1d(a: np.ndarray, b: np.ndarray) -> Tuple[float, float]:
    both = (a > 0) & (b > 0)
    if not both.any():
        return 0.0, 0.5
    la = np.log(a[both])
    lb = np.log(b[both])
    def value(lam):
        # 0^0 = 0 at the endpoints: only the common support contributes.
        if lam <= 0.0:
            return float(b[both].sum())
        if lam >= 1.0:
            return float(a[both].sum())
        return float(np.exp(scipy.special.logsumexp(lam * la + (1.0 - lam) * lb)))

    def logv(lam):
        return math.log(value(lam))

    lam, lv = golden_min(logv)
    half = logv(0.5)
    if abs(lv - half) <= 1e-12 * max(1.0, abs(lv)):
        return float(math.exp(min(lv, half))), 0.5
    return float(math.exp(lv)), float(lam)


def interpolating_distribution(p0, p1, lam: float) -> np.ndarray:
    """P*_lambda proportional to p0^lambda p1^(1-lambda) on the common support."""
    if not 0.0 <= lam <= 1.0:
        raise ValidationError(f'lambda must lie in [0, 1], got {lam}')
    a, b = _pair(p0, p1)
    both = (a > 0) & (b > 0)
    if not both.any():
        raise ValidationError('interpolating_distribution: p0 and p1 have disjoint supports')
    out = np.zeros_like(a)
    lw = lam * np.log(a[both]) + (1.0 - lam) * np.log(b[both])
    out[both] = np.exp(lw - scipy.special.logsumexp(lw))
    return out


def _log_tilt_normalizer(la, lb, lam) -> float:
    return float(scipy.special.logsumexp(lam * la + (1.0 - lam) * lb))


def sanov_lower_bound(prior_0: float, p0, p1, n: int) -> float:
    """Method-of-types lower bound 2/(n+1)^|X| pi0^lam pi1^(1-lam) C^n.

    lam solves E_{P*_lam}[ln(p1/p0)] = ln(pi0/pi1)/n by bisection (the mean is
    decreasing in lam); when no solution exists the nearer endpoint is used.
    """
    a, b = _pair(p0, p1)
    if n < 1:
        raise ValidationError(f'n must be >= 1, got {n}')
    pi0, pi1 = prior_0, 1.0 - prior_0
    c, _ = _chernoff_1d(a, b)
    if c <= 0.0 or pi0 <= 0.0 or pi1 <= 0.0:
        return 0.0
    lam = _sanov_lambda(a, b, math.log(pi0 / pi1) / n)
    log_bound = (math.log(2.0) - a.size * math.log(n + 1.0)
                 + lam * math.log(pi0) + (1.0 - lam) * math.log(pi1) + n * math.log(c))
    return float(math.exp(log_bound))


def _sanov_lambda(a: np.ndarray, b: np.ndarray, target: float) -> float:
    both = (a > 0) & (b > 0)
    la, lb = np.log(a[both]), np.log(b[both])
    llr = lb - la

    def mean(lam):
        lw = lam * la + (1.0 - lam) * lb
        w = np.exp(lw - scipy.special.logsumexp(lw))
        return float(w @ llr)

    lo, hi = 0.0, 1.0
    if mean(lo) <= target:
        return lo
    if mean(hi) >= target:
        return hi
    for _ in range(200):
        mid = 0.5 * (lo + hi)
        if mean(mid) > target:
            lo = mid
        else:
            hi = mid
        if hi - lo < 1e-14:
            break
    return 0.5 * (lo + hi)


def _compositions(n: int, k: int) -> np.ndarray:
    """All vectors of k non-negative integers summing to n (stars and bars)."""
    if k == 1:
        return np.array([[n]], dtype=np.int64)
    bars = np.array(list(itertools.combinations(range(n + k - 1), k - 1)), dtype=np.int64)
    edges = np.concatenate([np.full((bars.shape[0], 1), -1), bars,
                            np.full((bars.shape[0], 1), n + k - 1)], axis=1)
    return np.diff(edges, axis=1) - 1


class _ExactTypes:
    """Exact product error by summing over types, sorted by their LLR."""

    def __init__(self, la: np.ndarray, lb: np.ndarray, n: int):
        counts = _compositions(n, la.size)
        logmult = scipy.special.gammaln(n + 1.0) - scipy.special.gammaln(counts + 1.0).sum(axis=1)
        lp0 = logmult + counts @ la
        lp1 = logmult + counts @ lb
        llr = lp1 - lp0
        order = np.argsort(llr, kind='stable')
        self.llr = llr[order]
        # prefix over types with L < t (pi1 branch), suffix over L >= t (pi0 branch)
        self.pre1 = np.concatenate([[-np.inf], np.logaddexp.accumulate(lp1[order])])
        self.suf0 = np.concatenate([np.logaddexp.accumulate(lp0[order][::-1])[::-1], [-np.inf]])

    def value(self, la_w: np.ndarray, lb_w: np.ndarray) -> np.ndarray:
        t = la_w - lb_w
        j = np.searchsorted(self.llr, t, side='left')
        return np.exp(la_w + self.suf0[j]) + np.exp(lb_w + self.pre1[j])


class _TiltedGrid:
    """Certified bracket of the product error from one tilted, gridded LLR law."""

    def __init__(self, la, lb, n: int, bins: int, theta: float, t_max: float, drop_tol: float):
        self.n = n
        self.theta = th = theta
        lw = (1.0 - th) * la + th * lb
        log_norm = float(scipy.special.logsumexp(lw))
        mass = np.exp(lw - log_norm)
        # Dropping low-mass letters shortens the LLR range. It only removes
        # sequences, so the lower bound stays valid; the upper bound absorbs
        # their worst-case contribution below.
        keep = mass > drop_tol
        dropped = float(mass[~keep].sum())
        mass, llr = mass[keep], (lb - la)[keep]
        self.log_scale = n * log_norm
        self.dropped_term = -math.expm1(n * math.log1p(-dropped)) if dropped > 0 else 0.0

        origin, h = _grid_for(llr, bins)
        pos = np.floor((llr - origin) / h)
        idx = np.clip(pos.astype(np.int64), 0, bins - 1)
        rem = llr - (origin + idx * h)
        rem = np.clip(rem, 0.0, h)
        p = np.zeros(bins)
        a = np.zeros(bins)
        b = np.zeros(bins)
        np.add.at(p, idx, mass)
        np.add.at(a, idx, mass * np.exp(-th * rem))
        np.add.at(b, idx, mass * np.exp((1.0 - th) * rem))

        size = n * (bins - 1) + 1
        self.origin = n * origin
        self.h = h
        self.nh = n * h
        m_fft = scipy.fft.next_fast_len(size, real=True)
        noise_p = _fft_noise(m_fft, n, 1.0)
        noise_ab = _fft_noise(m_fft, n, float(a.sum())) + _fft_noise(m_fft, n, float(b.sum()))
        # Window weights relative to kappa are at most e^{nh}; outside it they are at most 1.
        self.noise = noise_ab * (1.0 + math.exp(self.nh)) + noise_p * math.exp(self.nh)

        # Only indices that a threshold in [-t_max, t_max] can touch are kept.
        jlo = max(int(math.floor((-t_max - self.nh - h - self.origin) / h)) - 1, 0)
        jhi = min(int(math.ceil((t_max + h - self.origin) / h)) + 1, size - 1)
        self.size = size
        if jlo > jhi:
            # The whole support lies on one side of every threshold of interest;
            # keep a single boundary index so the full sums remain reachable.
            jlo = jhi = 0 if self.origin > 0 else size - 1
        self.jlo, self.jhi = jlo, jhi
        cp = _conv_power(p, n)
        ca = _conv_power(a, n)
        cb = _conv_power(b, n)
        # Suffix sums of A_j e^{-theta h (j-J)} and prefix sums of
        # B_j e^{-(1-theta) h (J-j)}, both bounded by 1 so no overflow.
        ra = math.exp(-th * h)
        rb = math.exp(-(1.0 - th) * h)
        sa = scipy.signal.lfilter([1.0], [1.0, -ra], ca[jlo:][::-1])[::-1]
        sb = scipy.signal.lfilter([1.0], [1.0, -rb], cb[:jhi + 1])
        self.sa = sa[:jhi - jlo + 1]
        self.sb = sb[jlo:]
        self.p = cp[jlo:jhi + 1]
        self.a = ca[jlo:jhi + 1]
        self.b = cb[jlo:jhi + 1]

    def bracket(self, la_w: np.ndarray, lb_w: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
        """Lower and upper bounds for weights exp(la_w) on P0 and exp(lb_w) on P1."""
        th, h, nh = self.theta, self.h, self.nh
        t = la_w - lb_w
        # kappa = pi0 e^{-theta t} = pi0^(1-theta) pi1^theta
        log_kappa = (1.0 - th) * la_w + th * lb_w
        lo = np.zeros_like(t)
        hi = np.zeros_like(t)
        jlo, jhi = self.jlo, self.jhi
        ju = np.ceil((t - self.origin) / h).astype(np.int64)          # first j with Ld_j >= t
        jd = np.floor((t - nh - self.origin) / h).astype(np.int64)    # last j with Ld_j + nh <= t
        ju = np.clip(ju, jlo, jhi + 1)
        jd = np.clip(jd, jlo - 1, jhi)
        up = np.zeros_like(t)
        iu = ju <= jhi
        k = ju[iu] - jlo
        up[iu] = np.exp(-th * (self.origin + ju[iu] * h - t[iu])) * self.sa[k]
        dn = np.zeros_like(t)
        idn = jd >= jlo
        k = jd[idn] - jlo
        dn[idn] = np.exp((1.0 - th) * (self.origin + jd[idn] * h - t[idn])) * self.sb[k]
        win_lo, win_hi = self._window(t, jd, ju)
        lo = up + dn + win_lo
        hi = up + dn + win_hi
        scale = np.exp(self.log_scale + log_kappa)
        lo = scale * np.maximum(lo - self.noise, 0.0) * (1.0 - EXACT_REL_SLACK)
        hi = scale * (np.maximum(hi, 0.0) + self.noise + self.dropped_term) * (1.0 + EXACT_REL_SLACK)
        return lo, hi

    def _window(self, t, jd, ju):
        th, h, nh = self.theta, self.h, self.nh
        width = int(np.max(ju - jd - 1, initial=0))
        win_lo = np.zeros_like(t)
        win_hi = np.zeros_like(t)
        if width <= 0:
            return win_lo, win_hi
        offs = np.arange(width)
        chunk = max(1, 2 ** 22 // width)
        for s0 in range(0, t.size, chunk):
            sl = slice(s0, s0 + chunk)
            j = jd[sl, None] + 1 + offs[None, :]
            valid = j < ju[sl, None]
            jj = np.clip(j, self.jlo, self.jhi) - self.jlo
            x = self.origin + (jj + self.jlo) * h - t[sl, None]   # Ld_j - t, in (-nh, 0)
            x = np.where(valid, x, 0.0)
            p = np.where(valid, self.p[jj], 0.0)
            a = np.where(valid, self.a[jj], 0.0)
            b = np.where(valid, self.b[jj], 0.0)
            # true L in [Ld, Ld + nh): min(pi0 e^{-theta L}, pi1 e^{(1-theta) L}) relative to kappa
            low = p * np.minimum(np.exp(-th * (x + nh)), np.exp((1.0 - th) * x))
            high = np.minimum(a * np.exp(-th * x), b * np.exp((1.0 - th) * x))
            win_lo[sl] = low.sum(axis=1)
            win_hi[sl] = high.sum(axis=1)
        return win_lo, win_hi


def default_tilts(a: np.ndarray, b: np.ndarray, n: int) -> list:
    """Tilts that put the threshold near the centre of the tilted law.

    The Chernoff tilt serves s near 1/2; two more tilts aim at thresholds
    ln(s/(1-s)) = -+30 nats. Small blocklengths, where a single build is cheap,
    also get a fixed spread of tilts.
    """
    _, lam = _chernoff_1d(a, b)
    tilts = {round(1.0 - lam, 12)}
    for t in (-30.0, 30.0):
        # The tilted mean of L is increasing in theta = 1 - lambda.
        tilts.add(round(1.0 - _sanov_lambda(a, b, t / n), 12))
    if n <= 64:
        tilts.update((0.0, 0.25, 0.5, 0.75, 1.0))
    return sorted(tilts)


class ProductErrorModel:
    """Reusable bracket of the product error for a fixed pair and blocklength.

    Everything that does not depend on the priors is precomputed, so a whole
    quadrature over s costs one model build plus cheap table lookups.

    Args:
        p0, p1: the two single-letter distributions.
        n: blocklength.
        bins: grid bins per letter for the FFT path (power of two, >= 64).
        max_types: use the exact type enumeration when the type count is at most this.
        tilts: tilt parameters for the FFT path; see ``default_tilts``.
    """

    def __init__(self, p0, p1, n: int, bins: int = DEFAULT_BINS, max_types: int = MAX_TYPES,
                 tilts: Sequence[float] | None = None, t_max: float = DEFAULT_T_MAX):
        _check_bins(bins)
        if n < 1:
            raise ValidationError(f'n must be >= 1, got {n}')
        a, b = _pair(p0, p1)
        self.n = n
        self.bins = bins
        self.t_max = t_max
        both = (a > 0) & (b > 0)
        self.empty = not both.any()
        self.exact = None
        self.grids = []
        if self.empty:
            return
        la, lb = np.log(a[both]), np.log(b[both])
        # Letters with identical LLR can be merged without changing any decision.
        llr = lb - la
        uniq, inv = np.unique(llr, return_inverse=True)
        if uniq.size < llr.size:
            la = np.log(np.bincount(inv, weights=a[both]))
            lb = np.log(np.bincount(inv, weights=b[both]))
        k = la.size
        n_types = math.comb(n + k - 1, k - 1)
        if n_types <= max_types:
            self.exact = _ExactTypes(la, lb, n)
            return
        if n * bins > MAX_CONV_BINS:
            raise NumericGuardError(
                f'product_error: n * bins = {n * bins} exceeds the limit of {MAX_CONV_BINS} (2^24)')
        if tilts is None:
            tilts = default_tilts(a, b, n)
        drop_tol = 1e-16 / n
        self.grids = [_TiltedGrid(la, lb, n, bins, th, t_max, drop_tol) for th in tilts]

    def bracket(self, w0, w1) -> Tuple[np.ndarray, np.ndarray]:
        """Bracket of sum_x min(w0 P0^n(x), w1 P1^n(x)), vectorized over weights.

        Passing both weights (rather than w1 = 1 - w0) keeps full precision
        for priors very close to 0 or 1.
        """
        w0 = np.atleast_1d(np.asarray(w0, dtype=float))
        w1 = np.atleast_1d(np.asarray(w1, dtype=float))
        w0, w1 = np.broadcast_arrays(w0, w1)
        cap = np.minimum(w0, w1)
        lo = np.zeros(w0.shape)
        hi = cap.copy()
        ok = (w0 > 0) & (w1 > 0) & (not self.empty)
        if not ok.any():
            return lo, np.where(ok, hi, 0.0)
        with np.errstate(divide='ignore'):
            la_w = np.log(w0[ok])
            lb_w = np.log(w1[ok])
        if self.exact is not None:
            v = self.exact.value(la_w, lb_w)
            lo[ok] = v * (1.0 - EXACT_REL_SLACK)
            hi[ok] = np.minimum(v * (1.0 + EXACT_REL_SLACK), cap[ok])
        else:
            t = la_w - lb_w
            inside = np.abs(t) <= self.t_max
            best_lo = np.zeros(t.shape)
            best_hi = cap[ok].copy()
            if inside.any():
                for g in self.grids:
                    l, u = g.bracket(la_w[inside], lb_w[inside])
                    best_lo[inside] = np.maximum(best_lo[inside], l)
                    best_hi[inside] = np.minimum(best_hi[inside], u)
            lo[ok] = np.minimum(best_lo, cap[ok])
            hi[ok] = best_hi
        lo = np.minimum(lo, hi)
        hi[~ok] = 0.0
        return lo, hi


def product_error(prior_0: float, p0, p1, n: int, bins: int = DEFAULT_BINS, **kwargs) -> ErrorBracket:
    """Certified bracket of the optimal error for {pi0 P0^n, pi1 P1^n}."""
    if not 0.0 <= prior_0 <= 1.0:
        raise ValidationError(f'prior_0 must lie in [0, 1], got {prior_0}')
    model = ProductErrorModel(p0, p1, n, bins, **kwargs)
    lo, hi = model.bracket(prior_0, 1.0 - prior_0)
    lo, hi = float(lo[0]), float(hi[0])
    if model.exact is None and not model.empty:
        # The FFT round-off allowance grows with the grid, so a finer grid can
        # come out marginally wider. Every coarser grid also gives a certified
        # bracket; intersecting them makes refinement monotone in bins.
        b = bins // 2
        while b >= MIN_BINS:
            l2, h2 = ProductErrorModel(p0, p1, n, b, **kwargs).bracket(prior_0, 1.0 - prior_0)
            lo, hi = max(lo, float(l2[0])), min(hi, float(h2[0]))
            b //= 2
        lo = min(lo, hi)
    return ErrorBracket(lo, hi)

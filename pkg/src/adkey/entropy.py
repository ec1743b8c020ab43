"""Conditional entropy of binary cq states from error-probability curves.

For rho = 1/2 |0><0| x w0 + 1/2 |1><1| x w1 the conditional entropy equals

    H(C|E) = int_0^1 [p_err(s) + p_err(1 - s)] / (2 s ln 2) ds,

where p_err(s) is the optimal error for the ensemble {s w0, (1 - s) w1}.
Plugging lower (upper) bounds on p_err into the integral gives lower (upper)
bounds on the entropy. This module holds the quadrature engine, the exact
small-dimension oracle, the closed-form bounds and the delta_n helpers.
"""

from __future__ import annotations

import dataclasses
import math
from typing import Callable, NamedTuple, Sequence

import numpy as np

from adkey import discrimination, matcore
from adkey.errors import NumericGuardError, ValidationError

LN2 = math.log(2.0)
DEFAULT_QUAD_POINTS = 32
DEFAULT_PANELS = 48
MAX_PANELS = 1000   # 2^-1001 is still a normal double
DEFAULT_TOL = 1e-7
MAX_DEPTH = 40
MAX_EXACT_DIM = 4096
RENYI_ALPHAS = tuple(np.round(np.arange(0.05, 0.951, 0.05), 2))
# Below this delta_n is handled through its logarithm.
TINY_DELTA = 1e-280


class EntropyBracket(NamedTuple):
    lower: float
    upper: float


@dataclasses.dataclass(frozen=True)
class CqState:
    """sum_c p(c) |c><c| x w_c with a classical register C."""

    priors: np.ndarray
    states: Sequence[matcore.DensityMatrix]

    def __post_init__(self):
        p = discrimination._prob_vector(self.priors, 'priors')
        st = [matcore.as_density(w, f'state_{k}') for k, w in enumerate(self.states)]
        if len(st) != p.size:
            raise ValidationError(f'{p.size} priors but {len(st)} states')
        if len({w.dim for w in st}) != 1:
            raise ValidationError('states must share a dimension')
        object.__setattr__(self, 'priors', p)
        object.__setattr__(self, 'states', tuple(st))


@dataclasses.dataclass(frozen=True)
class ErrorCurve:
    """Error probability as a function of the prior.

    ``evaluator(s)`` takes an array of s in (0, 1/2] and returns the pair
    (p_err(s), p_err(1 - s)). Each entry is either an array of values or a
    (lower, upper) tuple of arrays. Evaluators receive s itself so that both
    priors s and 1 - s can be formed without cancellation.
    """

    evaluator: Callable
    breakpoints: tuple = ()   # known kinks in (0, 1); they become panel edges


def _kinks(a: np.ndarray, b: np.ndarray) -> tuple:
    """Priors s in (0, 1) where s a - (1 - s) b turns singular on supp(a + b).

    These are the points where the trace norm, and so the error curve, has a
    kink. On the support of a + b they are the eigenvalues of
    (a + b)^-1/2 b (a + b)^-1/2.
    """
    w, v = np.linalg.eigh(0.5 * ((a + b) + (a + b).conj().T))
    keep = w > 1e-12 * max(w[-1], 1e-300)
    m = v[:, keep] / np.sqrt(w[keep])
    g = m.conj().T @ b @ m
    ev = np.linalg.eigvalsh(0.5 * (g + g.conj().T))
    return tuple(float(x) for x in ev if 0.0 < x < 1.0)


def _fold(points) -> tuple:
    # the integrand lives on (0, 1/2] after folding s -> 1 - s
    return tuple(sorted({min(x, 1.0 - x) for x in points}))


def binary_entropy(x):
    """h2(x) = -x log2 x - (1-x) log2(1-x), with 0 log 0 = 0."""
    x = np.asarray(x, dtype=float)
    if np.any((x < 0) | (x > 1)):
        raise ValidationError('binary_entropy: argument outside [0, 1]')
    with np.errstate(divide='ignore', invalid='ignore'):
        a = np.where(x > 0, -x * np.log2(np.where(x > 0, x, 1.0)), 0.0)
        b = np.where(x < 1, -(1 - x) * np.log1p(-np.where(x < 1, x, 0.0)) / LN2, 0.0)
    out = a + b
    return float(out) if out.ndim == 0 else out


def _von_neumann(w: np.ndarray) -> float:
    w = w[w > 0]
    return float(-(w * np.log2(w)).sum())


def exact_cond_entropy(rho: CqState) -> float:
    """H(C|E) = sum_c p_c S(w_c) + H(p) - S(sum_c p_c w_c), in bits."""
    dim = rho.states[0].dim
    if dim * len(rho.states) > MAX_EXACT_DIM:
        raise NumericGuardError(
            f'exact_cond_entropy: total dimension {dim * len(rho.states)} exceeds {MAX_EXACT_DIM}')
    p = rho.priors
    avg = sum(pc * w.entries for pc, w in zip(p, rho.states))
    h_ce = _von_neumann(p)
    h_ce += sum(pc * _von_neumann(w.spectrum.eigenvalues) for pc, w in zip(p, rho.states) if pc > 0)
    h_e = _von_neumann(np.linalg.eigvalsh(avg))
    return max(h_ce - h_e, 0.0)


_GL_CACHE = {}


def _gauss_legendre(k: int):
    if k not in _GL_CACHE:
        _GL_CACHE[k] = np.polynomial.legendre.leggauss(k)
    return _GL_CACHE[k]


def _integrand(curve: ErrorCurve):
    """Integrand on (0, 1/2] after folding [1/2, 1) onto it.

    int_0^1 [P(s) + P(1-s)] / (2 s ln2) ds
        = int_0^{1/2} [P(s) + P(1-s)] (1/s + 1/(1-s)) / (2 ln2) ds.
    Returns a function giving an array of shape (k, len(s)) with k = 1 for
    point curves and k = 2 for bracketed ones.
    """

    def f(s):
        ps, pu = curve.evaluator(s)
        w = (1.0 / s + 1.0 / (1.0 - s)) / (2.0 * LN2)
        if isinstance(ps, tuple) or isinstance(pu, tuple):
            ps_lo, ps_hi = ps if isinstance(ps, tuple) else (ps, ps)
            pu_lo, pu_hi = pu if isinstance(pu, tuple) else (pu, pu)
            vals = np.stack([np.asarray(ps_lo) + pu_lo, np.asarray(ps_hi) + pu_hi]) * w
        else:
            vals = ((np.asarray(ps) + pu) * w)[None, :]
        if not np.all(np.isfinite(vals)):
            raise ValidationError('entropy_integral: error curve returned non-finite values')
        return vals

    return f


def _adaptive_integral(f, edges: np.ndarray, k: int, tol: float, max_depth: int = MAX_DEPTH):
    """Adaptive composite Gauss-Legendre on the panels given by ``edges``.

    Each interval is compared against the sum over its two halves; intervals
    that disagree by more than their share of ``tol`` are split. All nodes of
    one refinement level are evaluated in a single vectorized call.
    """
    x, w = _gauss_legendre(k)

    def gl(a, b):
        # a, b arrays of interval ends; returns (rows, len(a)) estimates.
        mid = 0.5 * (a + b)
        half = 0.5 * (b - a)
        nodes = (mid[:, None] + half[:, None] * x[None, :]).ravel()
        vals = f(nodes).reshape(-1, a.size, k)
        return (vals * w).sum(axis=2) * half

    a = edges[:-1]
    b = edges[1:]
    whole = gl(a, b)
    total = np.zeros(whole.shape[0])
    depth = 0
    while a.size:
        m = 0.5 * (a + b)
        left = gl(a, m)
        right = gl(m, b)
        halves = left + right
        err = np.max(np.abs(halves - whole), axis=0)
        allow = tol * np.maximum(2.0 * (b - a), 2.0 ** -10)
        done = (err <= allow) | (depth >= max_depth)
        total += halves[:, done].sum(axis=1)
        keep = ~done
        a, b = np.concatenate([a[keep], m[keep]]), np.concatenate([m[keep], b[keep]])
        whole = np.concatenate([left[:, keep], right[:, keep]], axis=1)
        depth += 1
    return total


def _panel_edges(panels: int, breakpoints=None) -> np.ndarray:
    panels = int(min(max(panels, 1), MAX_PANELS))
    edges = 2.0 ** -np.arange(panels, 0, -1, dtype=float)   # 2^-panels ... 1/2
    edges = np.concatenate([[2.0 ** -(panels + 1)], edges])
    if breakpoints is not None:
        bp = np.asarray([b for b in np.atleast_1d(breakpoints) if edges[0] < b < 0.5], dtype=float)
        edges = np.unique(np.concatenate([edges, bp]))
    return edges


def entropy_integral(curve: ErrorCurve, quad_points: int = DEFAULT_QUAD_POINTS,
                     panels: int = DEFAULT_PANELS, tol: float = DEFAULT_TOL, breakpoints=None,
                     tail: str = 'estimate'):
    """Quadrature of the integral representation for an error curve.

    Panels are graded geometrically toward s = 0 ([2^-k-1, 2^-k]) and refined
    adaptively. The integrand is bounded because p_err(s) <= s, so the tail
    (0, 2^-(panels+1)) contributes at most 2^-(panels+1) * 2/ln2 (1 + 2^-(panels+1)).
    How that piece is handled for point curves depends on ``tail``:
    'estimate' adds the innermost integrand value times the width, 'lower'
    drops it and 'upper' adds the worst case. Bracketed curves always drop it
    from the lower end and add the worst case to the upper end.

    Returns:
        A float for point curves, an ``EntropyBracket`` for bracketed curves.
    """
    if tail not in ('estimate', 'lower', 'upper'):
        raise ValidationError(f"tail must be 'estimate', 'lower' or 'upper', got {tail!r}")
    f = _integrand(curve)
    bps = list(curve.breakpoints)
    if breakpoints is not None:
        bps.extend(np.atleast_1d(breakpoints).tolist())
    edges = _panel_edges(panels, bps or None)
    vals = _adaptive_integral(f, edges, quad_points, tol)
    worst = edges[0] * 2.0 / LN2 * (1.0 + edges[0])
    if vals.size == 2:
        return EntropyBracket(float(max(vals[0], 0.0)), float(vals[1] + worst))
    if tail == 'upper':
        return float(vals[0] + worst)
    if tail == 'lower':
        return float(vals[0])
    # Point estimate of the tail: the integrand is close to its value at the
    # innermost node there.
    head = f(np.array([edges[0]]))[0, 0] * edges[0]
    return float(vals[0] + head)


def helstrom_curve(state_0, state_1) -> ErrorCurve:
    """Exact error curve s -> p_err({s w0, (1-s) w1})."""
    w0 = matcore.as_density(state_0).entries
    w1 = matcore.as_density(state_1).entries
    return ErrorCurve(discrimination.helstrom_pair(state_0, state_1), _fold(_kinks(w0, w1)))


def entropy_integral_general(p0: float, state_0, state_1, quad_points: int = DEFAULT_QUAD_POINTS,
                             panels: int = DEFAULT_PANELS, tol: float = DEFAULT_TOL) -> float:
    """H(C|E) for priors (p0, 1 - p0) from weighted trace norms.

    H = int_0^1 ds / (2 ln2 s) (1 - ||s p0 w0 - (1-s) p1 w1||_1 - ||s p1 w1 - (1-s) p0 w0||_1).
    Writing each norm through the unnormalized error
    q(s) = 1/2 (s p0 + (1-s) p1 - ||s p0 w0 - (1-s) p1 w1||_1) turns the
    bracket into 2 (q(s) + q(1 - s)), the same form as the uniform case with
    P = 2 q, so the same quadrature applies.
    """
    if not 0.0 <= p0 <= 1.0:
        raise ValidationError(f'p0 must lie in [0, 1], got {p0}')
    p1 = 1.0 - p0
    if p0 == 0.0 or p1 == 0.0:
        return 0.0
    w0 = matcore.as_density(state_0).entries
    w1 = matcore.as_density(state_1).entries

    def evaluate(s):
        u = 1.0 - s
        q_s = discrimination._helstrom_weighted(s * p0, u * p1, w0, w1)
        q_u = discrimination._helstrom_weighted(u * p0, s * p1, w0, w1)
        return 2.0 * q_s, 2.0 * q_u

    # kinks of ||s p0 w0 - (1-s) p1 w1|| and ||s p1 w1 - (1-s) p0 w0||
    kinks = _kinks(p0 * w0, p1 * w1) + _kinks(p1 * w1, p0 * w0)
    return entropy_integral(ErrorCurve(evaluate, _fold(kinks)), quad_points, panels, tol)


def bound_fidelity_entropy(fid: float) -> float:
    """1 - h2(1/2 + F/2)."""
    if not 0.0 <= fid <= 1.0 + 1e-12:
        raise ValidationError(f'fidelity must lie in [0, 1], got {fid}')
    fid = min(fid, 1.0)
    if fid < 1e-3:
        # 1 - h2((1+F)/2) = sum_k F^(2k) / (2k (2k-1) ln 2); the direct form
        # cancels to zero long before the bound itself underflows.
        f2 = fid * fid
        return float(f2 * (0.5 + f2 * (1.0 / 12.0 + f2 * (1.0 / 30.0 + f2 / 56.0))) / LN2)
    return float(1.0 - binary_entropy(0.5 + 0.5 * fid))


def bound_minentropy_entropy(p_err_half: float) -> float:
    """2 (1 - 2^-Hmin) = 2 p_err(1/2)."""
    if not -1e-15 <= p_err_half <= 0.5 + 1e-15:
        raise ValidationError(f'p_err_half must lie in [0, 1/2], got {p_err_half}')
    return float(2.0 * min(max(p_err_half, 0.0), 0.5))


def combined_curve(fid: float, p_err_half: float) -> ErrorCurve:
    """Pointwise maximum of the fidelity and symmetry lower bounds on p_err."""

    def evaluate(s):
        v = np.maximum(discrimination.err_lower_fidelity(s, fid),
                       discrimination.err_lower_symmetry(s, p_err_half))
        return v, v   # both bounds are symmetric under s -> 1 - s

    return ErrorCurve(evaluate)


def bound_combined(fid: float, p_err_half: float, quad_points: int = DEFAULT_QUAD_POINTS,
                   panels: int = DEFAULT_PANELS, tol: float = DEFAULT_TOL) -> float:
    """Entropy lower bound from max(fidelity bound, symmetry bound) on p_err."""
    return entropy_integral(combined_curve(fid, p_err_half), quad_points, panels, tol)


def bound_upper_renyi(alpha: float, q_alpha: float) -> float:
    """(pi / (2 ln2)) Q_alpha / sin(pi alpha), an upper bound on H(C|E)."""
    if not 0.0 < alpha < 1.0:
        raise ValidationError(f'alpha must lie in (0, 1), got {alpha}')
    return float(math.pi / (2.0 * LN2) * q_alpha / math.sin(math.pi * alpha))


def min_renyi_upper(tau, sigma) -> tuple:
    """Smallest bound_upper_renyi over alpha in {0.05, ..., 0.95} and the Chernoff argmin.

    Returns (bound, alpha).
    """
    t = matcore.as_density(tau)
    s = matcore.as_density(sigma)
    _, a_star = matcore.chernoff_q(t, s)
    alphas = list(RENYI_ALPHAS)
    if 0.0 < a_star < 1.0:
        alphas.append(a_star)
    best = (math.inf, 0.5)
    for a in alphas:
        v = bound_upper_renyi(a, matcore.petz_q(a, t, s))
        if v < best[0]:
            best = (v, a)
    return best


def ln_delta_n(eps: float, n: int) -> float:
    """ln of eps^n / ((1-eps)^n + eps^n)."""
    _check_eps(eps, n)
    if eps == 0.0:
        return -math.inf
    # -ln(1 + exp(n ln((1-eps)/eps)))
    x = n * (math.log1p(-eps) - math.log(eps))
    return -(x + math.log1p(math.exp(-x))) if x > 0 else -math.log1p(math.exp(x))


def delta_n(eps: float, n: int) -> float:
    """Probability that an accepted block of length n is wrong."""
    return math.exp(ln_delta_n(eps, n))


def _check_eps(eps, n):
    if not 0.0 <= eps <= 0.5:
        raise ValidationError(f'eps must lie in [0, 1/2], got {eps}')
    if n < 1:
        raise ValidationError(f'n must be >= 1, got {n}')


def ln_binary_entropy_from_log(ln_x: float) -> float:
    """ln h2(x) given ln x, valid for x <= 1/2 far into the underflow range."""
    if ln_x == -math.inf:
        return -math.inf
    x = math.exp(ln_x)
    if x >= TINY_DELTA:
        h = float(binary_entropy(x))
        return math.log(h) if h > 0 else -math.inf
    # h2(x) = x (-log2 x) + x / ln2 + O(x^2)
    return ln_x + math.log(-ln_x / LN2 + 1.0 / LN2)


def h2_delta(eps: float, n: int) -> float:
    return math.exp(ln_binary_entropy_from_log(ln_delta_n(eps, n)))


def h2_delta_asymptote_ratio(eps: float, n: int) -> float:
    """h2(delta_n) / (-n beta^n log2 beta) with beta = eps / (1 - eps); tends to 1."""
    if not 0.0 < eps < 0.5:
        raise ValidationError(f'eps must lie in (0, 1/2), got {eps}')
    _check_eps(eps, n)
    ln_beta = math.log(eps) - math.log1p(-eps)
    ln_den = math.log(n) + n * ln_beta + math.log(-ln_beta / LN2)
    return math.exp(ln_binary_entropy_from_log(ln_delta_n(eps, n)) - ln_den)

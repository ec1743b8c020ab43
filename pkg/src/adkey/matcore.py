"""Hermitian matrix kernel.

Eigendecompositions, fractional powers, trace norms, fidelity and the Renyi
overlap quantities (Petz and sandwiched) that every other module builds on.

Matrices are validated once when wrapped in ``DensityMatrix`` or
``HermitianObservable``. All functions also accept plain array-likes, in which
case they are validated on the fly.
"""

from __future__ import annotations

import dataclasses
import math
from typing import Tuple, Union

import mpmath
import numpy as np

from adkey.errors import NumericGuardError, ValidationError

HERMITIAN_ATOL = 1e-10
PSD_ATOL = 1e-10
TRACE_ATOL = 1e-10
# Eigenvalues below this are treated as exact zeros when taking powers.
CLIP_EIGENVALUE = 1e-12
MAX_TENSOR_DIM = 4096

GOLDEN_ITERS = 60
GOLDEN_TOL = 1e-10


@dataclasses.dataclass(frozen=True)
class SpectralDecomposition:
    """Eigenvalues in ascending order and the matching eigenvector columns."""

    eigenvalues: np.ndarray
    eigenvectors: np.ndarray

    def reconstruct(self) -> np.ndarray:
        v = self.eigenvectors
        return (v * self.eigenvalues) @ v.conj().T


def _square(entries, name: str) -> np.ndarray:
    m = np.array(entries, dtype=complex)
    if m.ndim != 2 or m.shape[0] != m.shape[1] or m.shape[0] == 0:
        raise ValidationError(f'{name}: expected a non-empty square matrix, got shape {m.shape}')
    if not np.all(np.isfinite(m)):
        raise ValidationError(f'{name}: matrix has non-finite entries')
    return m


def _hermitian_deviation(m: np.ndarray) -> float:
    return float(np.max(np.abs(m - m.conj().T)))


class HermitianObservable:
    """A Hermitian (not necessarily positive) matrix."""

    __slots__ = ('entries', 'dim')

    def __init__(self, entries, name: str = 'matrix', atol: float = HERMITIAN_ATOL):
        m = _square(entries, name)
        dev = _hermitian_deviation(m)
        if dev > atol:
            raise ValidationError(f'{name}: not Hermitian, max deviation {dev:.3e} exceeds {atol:g}')
        self.entries = 0.5 * (m + m.conj().T)
        self.dim = m.shape[0]

    def __array__(self, dtype=None, copy=None):
        return self.entries if dtype is None else self.entries.astype(dtype)

    def __repr__(self):
        return f'HermitianObservable(dim={self.dim})'


class DensityMatrix:
    """Hermitian, positive semidefinite, unit-trace matrix.

    Validation happens here once. The clipped spectrum is cached, so repeated
    powers of the same state cost a single eigendecomposition.
    """

    __slots__ = ('entries', 'dim', '_spectrum')

    def __init__(self, entries, name: str = 'state', atol: float = PSD_ATOL):
        m = _square(entries, name)
        dev = _hermitian_deviation(m)
        if dev > HERMITIAN_ATOL:
            raise ValidationError(
                f'{name}: not Hermitian, max deviation {dev:.3e} exceeds {HERMITIAN_ATOL:g}')
        m = 0.5 * (m + m.conj().T)
        tr = float(np.trace(m).real)
        if abs(tr - 1.0) > TRACE_ATOL:
            raise ValidationError(f'{name}: trace deviation {abs(tr - 1.0):.3e} (trace = {tr:.12g})')
        w, v = np.linalg.eigh(m)
        if w[0] < -atol:
            raise ValidationError(f'{name}: not positive semidefinite, smallest eigenvalue {w[0]:.3e}')
        w = np.clip(w, 0.0, None)
        self._spectrum = SpectralDecomposition(w, _normalize_phases(v))
        self.entries = m
        self.dim = m.shape[0]

    @property
    def spectrum(self) -> SpectralDecomposition:
        return self._spectrum

    def is_pure(self, atol: float = 1e-9) -> bool:
        return abs(float(self._spectrum.eigenvalues[-1]) - 1.0) < atol

    def __array__(self, dtype=None, copy=None):
        return self.entries if dtype is None else self.entries.astype(dtype)

    def __repr__(self):
        return f'DensityMatrix(dim={self.dim})'

    @classmethod
    def from_pure(cls, vec, name: str = 'state') -> 'DensityMatrix':
        v = np.asarray(vec, dtype=complex).ravel()
        nrm = np.linalg.norm(v)
        if nrm == 0:
            raise ValidationError(f'{name}: zero vector')
        v = v / nrm
        return cls(np.outer(v, v.conj()), name=name)

    @classmethod
    def from_bloch(cls, r) -> 'DensityMatrix':
        x, y, z = r
        return cls(0.5 * np.array([[1 + z, x - 1j * y], [x + 1j * y, 1 - z]]))


MatrixLike = Union[DensityMatrix, HermitianObservable, np.ndarray]


def _normalize_phases(v: np.ndarray) -> np.ndarray:
    """Rotate each column so its first non-negligible entry is real positive."""
    v = v.copy()
    for k in range(v.shape[1]):
        col = v[:, k]
        idx = int(np.argmax(np.abs(col) > 1e-12))
        a = col[idx]
        if abs(a) > 0:
            v[:, k] = col * (abs(a) / a)
    return v


def as_density(rho, name: str = 'state') -> DensityMatrix:
    if isinstance(rho, DensityMatrix):
        return rho
    return DensityMatrix(rho, name=name)


def _spectrum_of(rho) -> SpectralDecomposition:
    return as_density(rho).spectrum


def _hermitian_array(m, name: str = 'matrix') -> np.ndarray:
    if isinstance(m, (DensityMatrix, HermitianObservable)):
        return m.entries
    return HermitianObservable(m, name=name).entries


def eig_hermitian(m: MatrixLike) -> SpectralDecomposition:
    """Full spectral decomposition with ascending eigenvalues.

    Eigenvector phases are fixed so the leading non-negligible component of
    each column is real and positive, which makes downstream quantities such
    as the Nussbaum-Szkola distributions reproducible.

    Raises:
        ValidationError: if the input is not Hermitian within 1e-10.
    """
    a = _hermitian_array(m)
    w, v = np.linalg.eigh(a)
    return SpectralDecomposition(w, _normalize_phases(v))


def _power_from_spectrum(spec: SpectralDecomposition, p: float) -> np.ndarray:
    w = spec.eigenvalues
    keep = w > CLIP_EIGENVALUE
    wp = np.zeros_like(w)
    wp[keep] = w[keep] ** p
    v = spec.eigenvectors
    return (v * wp) @ v.conj().T


def mat_power(rho, p: float) -> HermitianObservable:
    """rho**p on the support of rho (so rho**0 is the support projector).

    Args:
        rho: a density matrix, or any PSD matrix.
        p: a non-negative exponent.
    """
    if not p >= 0:
        raise ValidationError(f'mat_power: exponent must be >= 0, got {p}')
    if isinstance(rho, DensityMatrix):
        spec = rho.spectrum
    else:
        spec = eig_hermitian(rho)
        if spec.eigenvalues[0] < -PSD_ATOL:
            raise ValidationError(f'mat_power: matrix not PSD, smallest eigenvalue {spec.eigenvalues[0]:.3e}')
    out = HermitianObservable.__new__(HermitianObservable)
    out.entries = _power_from_spectrum(spec, p)
    out.dim = out.entries.shape[0]
    return out


def trace_pos_neg(m: MatrixLike) -> Tuple[float, float, float]:
    """Returns (positive part trace, negative part trace, trace norm)."""
    w = np.linalg.eigvalsh(_hermitian_array(m))
    tp = float(np.sum(w[w > 0]))
    tm = float(-np.sum(w[w < 0]))
    return tp, tm, tp + tm


def trace_norm(m) -> float:
    """Trace norm of a Hermitian matrix or a stack of them (last two axes)."""
    a = np.asarray(m)
    w = np.linalg.eigvalsh(a)
    return np.sum(np.abs(w), axis=-1)


def _check_pair(tau, sigma) -> Tuple[DensityMatrix, DensityMatrix]:
    t = as_density(tau, 'tau')
    s = as_density(sigma, 'sigma')
    if t.dim != s.dim:
        raise ValidationError(f'dimension mismatch: {t.dim} vs {s.dim}')
    return t, s


def fidelity(tau, sigma) -> float:
    """Root fidelity tr sqrt(sqrt(tau) sigma sqrt(tau)), in [0, 1]."""
    t, s = _check_pair(tau, sigma)
    # Equal to the sum of singular values of sqrt(tau) sqrt(sigma).
    a = _power_from_spectrum(t.spectrum, 0.5) @ _power_from_spectrum(s.spectrum, 0.5)
    f = float(np.sum(np.linalg.svd(a, compute_uv=False)))
    return min(max(f, 0.0), 1.0)


def _petz_from_spectra(alpha: float, st: SpectralDecomposition, ss: SpectralDecomposition,
                       overlaps: np.ndarray | None = None) -> float:
    # tr tau^a sigma^(1-a) = sum_ij l_i^a m_j^(1-a) |<x_i|y_j>|^2
    if overlaps is None:
        overlaps = np.abs(st.eigenvectors.conj().T @ ss.eigenvectors) ** 2
    lt = _clipped_power_vec(st.eigenvalues, alpha)
    ls = _clipped_power_vec(ss.eigenvalues, 1.0 - alpha)
    return float(lt @ overlaps @ ls)


def _clipped_power_vec(w: np.ndarray, p: float) -> np.ndarray:
    keep = w > CLIP_EIGENVALUE
    out = np.zeros_like(w)
    out[keep] = w[keep] ** p
    return out


def petz_q(alpha: float, tau, sigma) -> float:
    """Petz overlap Q_alpha = tr(tau^alpha sigma^(1-alpha)) for alpha in [0, 1]."""
    if not 0.0 <= alpha <= 1.0:
        raise ValidationError(f'petz_q: alpha must lie in [0, 1], got {alpha}')
    t, s = _check_pair(tau, sigma)
    return _petz_from_spectra(alpha, t.spectrum, s.spectrum)


def sandwiched_q(alpha: float, tau, sigma) -> float:
    """Sandwiched overlap tr[(sigma^g tau sigma^g)^alpha], g = (1-alpha)/(2 alpha)."""
    if not 0.0 < alpha < 1.0:
        raise ValidationError(f'sandwiched_q: alpha must lie in (0, 1), got {alpha}')
    t, s = _check_pair(tau, sigma)
    g = (1.0 - alpha) / (2.0 * alpha)
    lam = s.spectrum.eigenvalues
    pos = lam[lam > CLIP_EIGENVALUE]
    span = math.log10(pos.max() / pos.min())
    if (2.0 * g + 1.0) * span <= 6.0:
        sg = _power_from_spectrum(s.spectrum, g)
        inner = sg @ t.entries @ sg
        w = np.linalg.eigvalsh(0.5 * (inner + inner.conj().T))
        return float(np.sum(w[w > 0] ** alpha))
    # The sandwich has eigenvalues spread over (2g + 1) * span decades, and
    # the outer power alpha amplifies round-off in the smallest ones. Redo
    # the computation, including the eigendecomposition of sigma, with
    # enough digits to resolve them.
    return _sandwiched_mp(alpha, s.entries, t.entries, g, span)


def _sandwiched_mp(alpha: float, sigma: np.ndarray, tau: np.ndarray, g: float, span: float) -> float:
    digits = int(30 + 2 * (2 * g + 1) * span)
    with mpmath.workdps(digits):
        d = tau.shape[0]
        sm = mpmath.matrix([[mpmath.mpc(complex(x)) for x in row] for row in sigma])
        w, v = mpmath.mp.eigh(sm)
        pw = mpmath.matrix(d, d)
        for i in range(d):
            if mpmath.re(w[i]) > CLIP_EIGENVALUE:
                pw[i, i] = mpmath.re(w[i]) ** g
        sg = v * pw * v.H
        t = mpmath.matrix([[mpmath.mpc(complex(x)) for x in row] for row in tau])
        inner = sg * t * sg
        inner = (inner + inner.H) / 2
        total = mpmath.mpf(0)
        for x in mpmath.mp.eigh(inner, eigvals_only=True):
            x = mpmath.re(x)
            if x > 0:
                total += x ** alpha
        return float(total)


def golden_min(f, lo: float = 0.0, hi: float = 1.0, iters: int = GOLDEN_ITERS,
               tol: float = GOLDEN_TOL) -> Tuple[float, float]:
    """Golden-section search for the minimum of a unimodal function on [lo, hi].

    Endpoints are also evaluated since the minimum of a convex function may
    sit on the boundary. Returns (x_min, f(x_min)).
    """
    invphi = (np.sqrt(5.0) - 1.0) / 2.0
    a, b = lo, hi
    c = b - invphi * (b - a)
    d = a + invphi * (b - a)
    fc, fd = f(c), f(d)
    for _ in range(iters):
        if b - a < tol:
            break
        if fc <= fd:
            b, d, fd = d, c, fc
            c = b - invphi * (b - a)
            fc = f(c)
        else:
            a, c, fc = c, d, fd
            d = a + invphi * (b - a)
            fd = f(d)
    x = 0.5 * (a + b)
    best = (x, f(x))
    for cand in (lo, hi, c, d):
        v = f(cand)
        if v < best[1]:
            best = (cand, v)
    return best


def _chernoff_from_spectra(st: SpectralDecomposition, ss: SpectralDecomposition) -> Tuple[float, float]:
    overlaps = np.abs(st.eigenvectors.conj().T @ ss.eigenvectors) ** 2
    return chernoff_from_overlaps(st.eigenvalues, ss.eigenvalues, overlaps)


def chernoff_from_overlaps(lt: np.ndarray, ls: np.ndarray, overlaps: np.ndarray) -> Tuple[float, float]:
    """Minimize sum_ij lt_i^a ls_j^(1-a) w_ij over a in [0, 1].

    This single routine serves both the quantum Chernoff quantity (w holds
    eigenvector overlaps) and the classical one (w diagonal).
    """
    q_half = float(_clipped_power_vec(lt, 0.5) @ overlaps @ _clipped_power_vec(ls, 0.5))
    if q_half <= 0.0:
        return 0.0, 0.5

    def logq(a):
        v = float(_clipped_power_vec(lt, a) @ overlaps @ _clipped_power_vec(ls, 1.0 - a))
        return np.log(v) if v > 0 else -np.inf

    a_star, lq = golden_min(logq)
    q_star = float(np.exp(lq))
    # Flat objective (e.g. pure or identical states): report 0.5.
    if abs(lq - np.log(q_half)) <= 1e-12 * max(1.0, abs(lq)):
        return min(q_star, q_half), 0.5
    return q_star, float(a_star)


def chernoff_q(tau, sigma) -> Tuple[float, float]:
    """Quantum Chernoff overlap Q = min over alpha of petz_q, and its argmin.

    Uses golden-section search on log Q_alpha, which is convex in alpha. When
    Q_alpha is constant the reported argmin is 0.5.
    """
    t, s = _check_pair(tau, sigma)
    return _chernoff_from_spectra(t.spectrum, s.spectrum)


def tensor_power(rho, n: int) -> DensityMatrix:
    """n-fold Kronecker power, refused when the result would exceed 4096 dims."""
    r = as_density(rho)
    if n < 1:
        raise ValidationError(f'tensor_power: n must be >= 1, got {n}')
    if r.dim ** n > MAX_TENSOR_DIM:
        raise NumericGuardError(
            f'tensor_power: dimension {r.dim}^{n} exceeds the limit of {MAX_TENSOR_DIM}')
    out = r.entries
    for _ in range(n - 1):
        out = np.kron(out, r.entries)
    return DensityMatrix(out, atol=1e-9)


def random_density_matrix(dim: int, rank: int | None = None, rng=None) -> DensityMatrix:
    """Random state from the induced (Ginibre) measure, used by tests and demos."""
    rng = np.random.default_rng(rng)
    k = dim if rank is None else rank
    g = rng.normal(size=(dim, k)) + 1j * rng.normal(size=(dim, k))
    m = g @ g.conj().T
    return DensityMatrix(m / np.trace(m).real)


def random_pure_state(dim: int, rng=None) -> DensityMatrix:
    return random_density_matrix(dim, rank=1, rng=rng)


def random_unitary(dim: int, rng=None) -> np.ndarray:
    rng = np.random.default_rng(rng)
    z = (rng.normal(size=(dim, dim)) + 1j * rng.normal(size=(dim, dim))) / np.sqrt(2)
    q, r = np.linalg.qr(z)
    d = np.diag(r)
    return q * (d / np.abs(d))

"""Binary and multiple quantum state discrimination.

Exact Helstrom error, closed-form lower and upper bounds on it, the
Nussbaum-Szkola map to a pair of classical distributions, and an upper bound
on the error of discriminating more than two states.
"""

from __future__ import annotations

import dataclasses
from typing import Sequence

import numpy as np

from adkey import matcore
from adkey.errors import ValidationError
from adkey.matcore import DensityMatrix

PROB_ATOL = 1e-10
DISTINCT_EIG_TOL = 1e-9


@dataclasses.dataclass(frozen=True)
class BinaryEnsemble:
    """Two states with prior ``prior_0`` on ``state_0``."""

    prior_0: float
    state_0: DensityMatrix
    state_1: DensityMatrix

    def __post_init__(self):
        if not 0.0 <= self.prior_0 <= 1.0:
            raise ValidationError(f'prior_0 must lie in [0, 1], got {self.prior_0}')
        object.__setattr__(self, 'state_0', matcore.as_density(self.state_0, 'state_0'))
        object.__setattr__(self, 'state_1', matcore.as_density(self.state_1, 'state_1'))
        if self.state_0.dim != self.state_1.dim:
            raise ValidationError(f'dimension mismatch: {self.state_0.dim} vs {self.state_1.dim}')


def _prob_vector(p, name: str) -> np.ndarray:
    v = np.asarray(p, dtype=float).ravel()
    if v.size == 0 or not np.all(np.isfinite(v)):
        raise ValidationError(f'{name}: expected a finite non-empty vector')
    if np.any(v < -PROB_ATOL):
        raise ValidationError(f'{name}: negative entry {v.min():.3e}')
    if abs(v.sum() - 1.0) > PROB_ATOL:
        raise ValidationError(f'{name}: sums to {v.sum():.12g}, not 1')
    return np.clip(v, 0.0, None)


@dataclasses.dataclass(frozen=True)
class ClassicalPair:
    """Two distributions over the same outcome set, plus the prior on ``p0``."""

    p0: np.ndarray
    p1: np.ndarray
    prior_0: float = 0.5

    def __post_init__(self):
        p0 = _prob_vector(self.p0, 'p0')
        p1 = _prob_vector(self.p1, 'p1')
        if p0.shape != p1.shape:
            raise ValidationError(f'length mismatch: {p0.size} vs {p1.size}')
        object.__setattr__(self, 'p0', p0)
        object.__setattr__(self, 'p1', p1)


def helstrom_error(e: BinaryEnsemble) -> float:
    """Minimum error probability 1/2 - 1/2 || pi0 w0 - pi1 w1 ||_1."""
    d = e.prior_0 * e.state_0.entries - (1.0 - e.prior_0) * e.state_1.entries
    _, _, tn = matcore.trace_pos_neg(matcore.HermitianObservable(d))
    return min(max(0.5 - 0.5 * tn, 0.0), min(e.prior_0, 1.0 - e.prior_0))


def helstrom_error_batch(s, state_0, state_1) -> np.ndarray:
    """Helstrom error of {s w0, (1-s) w1} for an array of priors s."""
    s = np.asarray(s, dtype=float)
    w0 = np.asarray(state_0)
    w1 = np.asarray(state_1)
    return _helstrom_weighted(s, 1.0 - s, w0, w1)


def _helstrom_weighted(a, b, w0, w1) -> np.ndarray:
    # Passing both weights explicitly keeps full precision for tiny s when
    # the caller computes 1 - s exactly.
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    d = a[..., None, None] * w0 - b[..., None, None] * w1
    tn = matcore.trace_norm(d)
    # 1/2 - 1/2 ||A - B|| = 1/2 (a + b - ||A - B||) rewritten to avoid cancellation
    # against the weights when both are tiny.
    err = 0.5 * ((a + b) - tn)
    return np.clip(err, 0.0, np.minimum(a, b))


def helstrom_pair(state_0, state_1):
    """Evaluator s -> (p_err(s), p_err(1 - s)) for the exact Helstrom curve."""
    w0 = np.asarray(state_0)
    w1 = np.asarray(state_1)

    def evaluate(s):
        s = np.asarray(s, dtype=float)
        u = 1.0 - s
        return _helstrom_weighted(s, u, w0, w1), _helstrom_weighted(u, s, w0, w1)

    return evaluate


def err_lower_fidelity(s, fid):
    """1/2 (1 - sqrt(1 - 4 s (1-s) F^2)), evaluated without cancellation."""
    s = np.asarray(s, dtype=float)
    a = 4.0 * s * (1.0 - s) * np.asarray(fid, dtype=float) ** 2
    a = np.clip(a, 0.0, 1.0)
    out = 0.5 * a / (1.0 + np.sqrt(1.0 - a))
    return float(out) if out.ndim == 0 else out


def err_lower_symmetry(s, p_half):
    """2 min(s, 1-s) p_half: the error at prior s is at least this."""
    s = np.asarray(s, dtype=float)
    out = 2.0 * np.minimum(s, 1.0 - s) * p_half
    return float(out) if out.ndim == 0 else out


def err_upper_audenaert(s: float, alpha: float, e: BinaryEnsemble) -> float:
    """s^alpha (1-s)^(1-alpha) Q_alpha(w0 || w1), an upper bound on the error.

    The states are taken from ``e``; the prior is ``s``.
    """
    if not 0.0 <= alpha <= 1.0:
        raise ValidationError(f'alpha must lie in [0, 1], got {alpha}')
    q = matcore.petz_q(alpha, e.state_0, e.state_1)
    return float(s ** alpha * (1.0 - s) ** (1.0 - alpha) * q)


def ns_reduce(tau, sigma, prior_0: float = 0.5) -> ClassicalPair:
    """Nussbaum-Szkola distributions of a pair of states.

    P0(i, j) = l_i |<x_i|y_j>|^2 and P1(i, j) = m_j |<x_i|y_j>|^2 where
    (l_i, x_i) and (m_j, y_j) are the eigenpairs of tau and sigma. Outcomes are
    flattened in row-major (i, j) order.
    """
    t, s = matcore._check_pair(tau, sigma)
    st, ss = t.spectrum, s.spectrum
    ov = np.abs(st.eigenvectors.conj().T @ ss.eigenvectors) ** 2
    p0 = (st.eigenvalues[:, None] * ov).ravel()
    p1 = (ss.eigenvalues[None, :] * ov).ravel()
    # Renormalize away eigensolver round-off.
    return ClassicalPair(p0 / p0.sum(), p1 / p1.sum(), prior_0)


def quantum_err_lower_from_classical(prior_0: float, tau, sigma, n: int, classical_err: float) -> float:
    """Half of the classical NS error lower-bounds the quantum error.

    ``classical_err`` must be the error for {pi0 P0^n, pi1 P1^n} built from
    ``ns_reduce(tau, sigma)``; the states are accepted for interface symmetry.
    """
    if n < 1:
        raise ValidationError(f'n must be >= 1, got {n}')
    return 0.5 * float(classical_err)


def _distinct_count(w: np.ndarray, tol: float = DISTINCT_EIG_TOL) -> int:
    w = np.sort(np.asarray(w, dtype=float))
    return 1 + int(np.sum(np.diff(w) > tol))


def multi_hyp_upper(states: Sequence, priors: Sequence[float], alphas) -> float:
    """Upper bound on the error of discriminating r >= 2 weighted states.

    min(1 - max p, 10 (r-1)^2 T^2 sum_{i<j} p_i^a p_j^(1-a) Q_a(A_i || A_j)),
    with T the largest number of distinct eigenvalues (zero included) among
    the states and a = alphas[i][j].
    """
    rho = [matcore.as_density(x, f'state_{k}') for k, x in enumerate(states)]
    r = len(rho)
    if r < 2:
        raise ValidationError('multi_hyp_upper needs at least two states')
    p = _prob_vector(priors, 'priors')
    if p.size != r:
        raise ValidationError(f'{r} states but {p.size} priors')
    a = np.asarray(alphas, dtype=float)
    if a.shape != (r, r):
        raise ValidationError(f'alphas must have shape ({r}, {r}), got {a.shape}')
    t = max(_distinct_count(x.spectrum.eigenvalues) for x in rho)
    total = 0.0
    for i in range(r):
        for j in range(i + 1, r):
            aij = a[i, j]
            if not 0.0 <= aij <= 1.0:
                raise ValidationError(f'alphas[{i}][{j}] = {aij} outside [0, 1]')
            q = matcore.petz_q(aij, rho[i], rho[j])
            total += p[i] ** aij * p[j] ** (1.0 - aij) * q
    raw = 10.0 * (r - 1) ** 2 * t ** 2 * total
    return float(min(1.0 - p.max(), raw))

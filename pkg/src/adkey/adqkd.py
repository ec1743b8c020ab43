"""Advantage distillation: Eve's conditional states, block bounds and key rates.

A block of n key rounds is accepted when Alice's and Bob's bits agree on the
whole block. Conditioned on acceptance, Eve holds

    w0 = (1 - d_n) r00^(x n) + d_n r01^(x n),    w1 = (1 - d_n) r11^(x n) + d_n r10^(x n)

with d_n = eps^n / ((1 - eps)^n + eps^n), and the entropy H(C|E) of the
uniform cq state on {w0, w1} decides whether a key can be distilled.
"""

from __future__ import annotations

import dataclasses
import enum
import math
from typing import Sequence

import mpmath
import numpy as np

from adkey import discrimination, entropy, matcore
from adkey.classical_ht import DEFAULT_BINS, ProductErrorModel
from adkey.errors import DegenerateScenarioError, ValidationError
from adkey.matcore import DensityMatrix

LABELS = ('00', '01', '10', '11')
VERDICT_TOL = 1e-9
PURE_TOL = 1e-9
# The d_n-weighted sub-ensemble is dropped from lower bounds below this weight.
# Dropping a non-negative term keeps the bound valid.
DELTA_SKIP = 1e-300
# Largest block dimension d^n materialized for the exact upper bound.
MATERIALIZE_DIM = 256


class Verdict(str, enum.Enum):
    POSITIVE = 'positive'
    NONPOSITIVE = 'nonpositive'
    INCONCLUSIVE = 'inconclusive'


@dataclasses.dataclass(frozen=True)
class Scenario:
    """Noise level and Eve's four conditional states, ordered 00, 01, 10, 11."""

    eps: float
    cond_states: Sequence[DensityMatrix]
    name: str = ''

    def __post_init__(self):
        if not 0.0 <= self.eps <= 0.5:
            raise ValidationError(f'eps must lie in [0, 1/2], got {self.eps}')
        if len(self.cond_states) != 4:
            raise ValidationError(f'expected 4 conditional states, got {len(self.cond_states)}')
        st = tuple(matcore.as_density(r, f'rho_ET|{lab}') for r, lab in zip(self.cond_states, LABELS))
        if len({r.dim for r in st}) != 1:
            raise ValidationError('conditional states must share a dimension')
        object.__setattr__(self, 'cond_states', st)

    @property
    def beta_eps(self) -> float:
        return self.eps / (1.0 - self.eps)

    @property
    def dim(self) -> int:
        return self.cond_states[0].dim

    def state(self, label: str) -> DensityMatrix:
        return self.cond_states[LABELS.index(label)]


@dataclasses.dataclass(frozen=True)
class TripartiteInput:
    """State on Q_A x Q_B x E (qubits for A and B) and the key-round POVMs."""

    state: DensityMatrix
    povm_a: Sequence[np.ndarray]
    povm_b: Sequence[np.ndarray]

    def __post_init__(self):
        st = matcore.as_density(self.state, 'rho_ABE')
        if st.dim % 4:
            raise ValidationError(f'state dimension {st.dim} is not 2 x 2 x dim(E)')
        object.__setattr__(self, 'state', st)
        object.__setattr__(self, 'povm_a', _check_povm(self.povm_a, 'povm_a'))
        object.__setattr__(self, 'povm_b', _check_povm(self.povm_b, 'povm_b'))

    @property
    def dim_e(self) -> int:
        return self.state.dim // 4


def _check_povm(ops, name: str):
    ops = [np.asarray(o, dtype=complex) for o in ops]
    if len(ops) != 2 or any(o.shape != (2, 2) for o in ops):
        raise ValidationError(f'{name}: expected two 2x2 operators')
    for k, o in enumerate(ops):
        dev = float(np.max(np.abs(o - o.conj().T)))
        if dev > 1e-10:
            raise ValidationError(f'{name}[{k}]: not Hermitian, max deviation {dev:.3e}')
        w = np.linalg.eigvalsh(0.5 * (o + o.conj().T))
        if w[0] < -1e-10:
            raise ValidationError(f'{name}[{k}]: not PSD, smallest eigenvalue {w[0]:.3e}')
    dev = float(np.max(np.abs(ops[0] + ops[1] - np.eye(2))))
    if dev > 1e-10:
        raise ValidationError(f'{name}: completeness deviation {dev:.3e}')
    return tuple(0.5 * (o + o.conj().T) for o in ops)


@dataclasses.dataclass(frozen=True)
class VerdictRecord:
    verdict: Verdict
    q: float
    alpha_star: float
    fidelity: float
    beta_eps: float
    pure: bool
    fidelity_condition: bool


@dataclasses.dataclass(frozen=True)
class BoundReport:
    n: int
    delta_n: float
    ln_delta_n: float
    h2_delta: float
    bound_fidelity: float
    bound_classical: float
    bound_combined: float
    chernoff_finite_lower: float
    upper_bound: float
    key_rate: float
    ratio_Rn: float
    verdict: Verdict

    def violations(self, tol: float = 1e-9) -> list:
        """Invariant violations, empty when the report is consistent."""
        out = []
        if self.bound_combined < max(self.bound_fidelity, self.chernoff_finite_lower) - tol:
            out.append('bound_combined below max(bound_fidelity, chernoff_finite_lower)')
        if self.bound_combined < self.bound_classical - 1e-6:
            out.append('bound_combined below bound_classical')
        if self.upper_bound < self.bound_combined - 1e-6:
            out.append('upper_bound below bound_combined')
        return out


def post_measurement_states(t: TripartiteInput) -> Scenario:
    """Eve's states conditioned on the symmetrized key bits.

    rho_ET|ab is proportional to sum_i tr_AB[(M_{a+i} x N_{b+i} x 1) rho] x |i><i|_T
    (addition mod 2), where T records the flip bit applied to both raw bits.
    The noise level is eps = p(a != b).

    Raises:
        DegenerateScenarioError: if some symmetrized outcome pair has probability 0.
    """
    de = t.dim_e
    rho = t.state.entries.reshape(2, 2, de, 2, 2, de)
    eve = {}
    for a in range(2):
        for b in range(2):
            m = t.povm_a[a]
            nb = t.povm_b[b]
            # tr_AB[(M x N x 1) rho]
            eve[a, b] = np.einsum('ji,lk,ikxjlz->xz', m, nb, rho)
    probs = {k: float(np.trace(v).real) for k, v in eve.items()}
    eps = probs[0, 1] + probs[1, 0]
    states = []
    for a, b in ((0, 0), (0, 1), (1, 0), (1, 1)):
        blocks = [eve[a ^ i, b ^ i] for i in range(2)]
        norm = probs[a, b] + probs[1 - a, 1 - b]
        if norm <= 1e-14:
            raise DegenerateScenarioError(f'outcome pair {a}{b} has probability {0.5 * norm:.3e}; '
                                          f'rho_ET|{a}{b} is undefined')
        st = np.zeros((2 * de, 2 * de), dtype=complex)
        for i in range(2):
            proj = np.zeros((2, 2))
            proj[i, i] = 1.0
            st += np.kron(blocks[i], proj)
        states.append(DensityMatrix(st / norm, name=f'rho_ET|{a}{b}', atol=1e-9))
    return Scenario(min(max(eps, 0.0), 0.5), states)


def block_fidelity_lower(sc: Scenario, n: int) -> float:
    """(1 - d_n) F(r00, r11)^n + d_n F(r01, r10)^n, a lower bound on F(w0, w1)."""
    d = entropy.delta_n(sc.eps, n)
    f0 = matcore.fidelity(sc.state('00'), sc.state('11'))
    f1 = matcore.fidelity(sc.state('01'), sc.state('10'))
    return float((1.0 - d) * f0 ** n + d * f1 ** n)


class BlockModel:
    """Certified lower bound on the block error curve for one blocklength.

    The NS distributions of both sub-ensembles and their product-error models
    are built once; evaluating the curve at many priors is then cheap.
    """

    def __init__(self, sc: Scenario, n: int, bins: int = DEFAULT_BINS, **model_kwargs):
        if n < 1:
            raise ValidationError(f'n must be >= 1, got {n}')
        self.sc = sc
        self.n = n
        self.ln_delta = entropy.ln_delta_n(sc.eps, n)
        self.delta = math.exp(self.ln_delta)
        ns0 = discrimination.ns_reduce(sc.state('00'), sc.state('11'))
        self.model0 = ProductErrorModel(ns0.p0, ns0.p1, n, bins, **model_kwargs)
        self.model1 = None
        if self.delta > DELTA_SKIP:
            ns1 = discrimination.ns_reduce(sc.state('01'), sc.state('10'))
            self.model1 = ProductErrorModel(ns1.p0, ns1.p1, n, bins, **model_kwargs)

    def lower(self, w0, w1) -> np.ndarray:
        """Lower bound on the error of {w0 w0_block, w1 w1_block}."""
        lo0, _ = self.model0.bracket(w0, w1)
        out = (1.0 - self.delta) * 0.5 * lo0
        if self.model1 is not None:
            lo1, _ = self.model1.bracket(w0, w1)
            out = out + self.delta * 0.5 * lo1
        return out

    def pair(self, s):
        s = np.asarray(s, dtype=float)
        u = 1.0 - s
        return self.lower(s, u), self.lower(u, s)


def block_error_lower(sc: Scenario, n: int, s: float, bins: int = DEFAULT_BINS) -> float:
    """Lower bound on the block error at prior s via the NS reduction."""
    if s <= 0.0 or s >= 1.0:
        return 0.0
    return float(BlockModel(sc, n, bins).lower(s, 1.0 - s)[0])


def chernoff_finite_lower(sc: Scenario, n: int) -> float:
    """[(1 - d_n) Q00;11^n + d_n Q01;10^n] pi / (2 ln2 (n+1)^(d^2)), in log-space."""
    ld = entropy.ln_delta_n(sc.eps, n)
    q0, _ = matcore.chernoff_q(sc.state('00'), sc.state('11'))
    q1, _ = matcore.chernoff_q(sc.state('01'), sc.state('10'))
    terms = []
    if q0 > 0:
        terms.append(math.log1p(-math.exp(ld)) + n * math.log(q0))
    if q1 > 0 and ld > -math.inf:
        terms.append(ld + n * math.log(q1))
    if not terms:
        return 0.0
    log_q = float(np.logaddexp.reduce(terms))
    log_v = log_q + math.log(math.pi) - math.log(2.0 * entropy.LN2) - sc.dim ** 2 * math.log(n + 1.0)
    return math.exp(log_v)


def key_rate(sc: Scenario, n: int, entropy_lower: float) -> float:
    """(H - h2(d_n)) ((1 - eps)^n + eps^n) / n."""
    accept = math.exp(n * math.log1p(-sc.eps)) + (sc.eps ** n if sc.eps > 0 else 0.0)
    return (entropy_lower - entropy.h2_delta(sc.eps, n)) * accept / n


def ratio_Rn(sc: Scenario, n: int, entropy_value: float) -> float:
    """H / h2(d_n), formed in log-space; may be inf when h2(d_n) underflows."""
    lh = entropy.ln_binary_entropy_from_log(entropy.ln_delta_n(sc.eps, n))
    if lh == -math.inf:
        raise ValidationError('ratio_Rn: delta_n = 0 (eps = 0), the ratio is undefined')
    if entropy_value <= 0.0:
        return 0.0
    x = math.log(entropy_value) - lh
    return math.exp(x) if x < 709.0 else math.inf


def asymptotic_verdict(sc: Scenario, tol: float = VERDICT_TOL) -> VerdictRecord:
    """Compare Q(r00, r11) with beta_eps = eps / (1 - eps).

    Q > beta + tol: a key can be distilled for large n (positive).
    Q < beta - tol: the ratio H/h2(d_n) has limit at most 1 (nonpositive).
    """
    r0, r1 = sc.state('00'), sc.state('11')
    q, a = matcore.chernoff_q(r0, r1)
    f = matcore.fidelity(r0, r1)
    beta = sc.beta_eps
    if q > beta + tol:
        v = Verdict.POSITIVE
    elif q < beta - tol:
        v = Verdict.NONPOSITIVE
    else:
        v = Verdict.INCONCLUSIVE
    pure = r0.is_pure(PURE_TOL) and r1.is_pure(PURE_TOL)
    return VerdictRecord(v, q, a, f, beta, pure, f * f > beta)


def bell_diagonal_fidelity(lambdas, angle_a0: float, angle_a1: float, angle_b0: float,
                           angle_b1: float) -> np.ndarray:
    """Overlaps of Eve's pure post-measurement states for a Bell-diagonal pair.

    lambdas are the weights of (Phi+, Phi-, Psi+, Psi-). Outcome a of Alice
    projects onto (cos t, sin t) with t = angle_a{a}, likewise for Bob.
    Entry [2a+b, 2a'+b'] is |<ab| rho_AB |a'b'>|^2 / (p(ab) p(a'b')), i.e.
    |<psi_E|ab | psi_E|a'b'>|^2. Entries involving a zero-probability outcome
    are NaN.

    Raises:
        DegenerateScenarioError: if p(00) or p(11) vanishes.
    """
    lam = discrimination._prob_vector(lambdas, 'lambdas')
    if lam.size != 4:
        raise ValidationError(f'expected 4 Bell weights, got {lam.size}')
    for x0, x1, who in ((angle_a0, angle_a1, 'Alice'), (angle_b0, angle_b1, 'Bob')):
        if abs(math.cos(x0 - x1)) > 1e-9:
            raise ValidationError(f'{who}: outcome directions are not orthogonal')
    rho = bell_diagonal_state(lam)
    va = [np.array([math.cos(t), math.sin(t)]) for t in (angle_a0, angle_a1)]
    vb = [np.array([math.cos(t), math.sin(t)]) for t in (angle_b0, angle_b1)]
    vecs = [np.kron(va[a], vb[b]) for a in range(2) for b in range(2)]
    g = np.array([[v @ rho @ w for w in vecs] for v in vecs])
    p = np.real(np.diag(g))
    for k in (0, 3):
        if p[k] <= 1e-14:
            raise DegenerateScenarioError(f'outcome pair {LABELS[k]} has probability zero')
    with np.errstate(divide='ignore', invalid='ignore'):
        table = np.abs(g) ** 2 / np.outer(p, p)
    bad = p <= 1e-14
    table[bad, :] = np.nan
    table[:, bad] = np.nan
    return table


def bell_basis() -> np.ndarray:
    """Columns Phi+, Phi-, Psi+, Psi- in the computational basis."""
    r = 1.0 / math.sqrt(2.0)
    return np.array([[r, r, 0, 0], [0, 0, r, r], [0, 0, r, -r], [r, -r, 0, 0]], dtype=float)


def bell_diagonal_state(lambdas) -> np.ndarray:
    b = bell_basis()
    return (b * np.asarray(lambdas, dtype=float)) @ b.T


def bell_diagonal_tripartite(lambdas, angle_a0, angle_a1, angle_b0, angle_b1) -> TripartiteInput:
    """Purification sum_i sqrt(l_i) |B_i>_AB |i>_E with real projective measurements."""
    lam = discrimination._prob_vector(lambdas, 'lambdas')
    b = bell_basis()
    psi = sum(math.sqrt(lam[i]) * np.kron(b[:, i], np.eye(4)[i]) for i in range(4))
    va = [np.array([math.cos(t), math.sin(t)]) for t in (angle_a0, angle_a1)]
    vb = [np.array([math.cos(t), math.sin(t)]) for t in (angle_b0, angle_b1)]
    return TripartiteInput(DensityMatrix.from_pure(psi, name='rho_ABE'),
                           [np.outer(v, v) for v in va], [np.outer(v, v) for v in vb])


def _entropy_mp(eigs) -> mpmath.mpf:
    tot = mpmath.mpf(0)
    for w in eigs:
        w = mpmath.re(w)
        if w > 0:
            tot -= w * mpmath.log(w, 2)
    return tot


def _gram_sub_entropy(g, weights, idx) -> mpmath.mpf:
    # Nonzero spectrum of sum_i w_i |u_i><u_i| equals that of sqrt(W) G sqrt(W).
    k = len(idx)
    m = mpmath.matrix(k, k)
    for r, i in enumerate(idx):
        for c, j in enumerate(idx):
            m[r, c] = mpmath.sqrt(weights[i] * weights[j]) * g[i][j]
    ev = mpmath.mp.eigh(m, eigvals_only=True)
    return _entropy_mp(ev)


def pure_block_entropy(sc: Scenario, n: int, digits: int | None = None) -> float:
    """Exact block entropy when all four conditional states are pure.

    The block vectors v^(x n) only enter through their Gram matrix
    G_ij = <v_i|v_j>^n, so the whole problem lives in a 4-dimensional span
    for any n. Extended precision keeps the tiny entropies at large n.
    """
    vecs = []
    for r in sc.cond_states:
        if not r.is_pure(PURE_TOL):
            raise ValidationError('pure_block_entropy: conditional states are not all pure')
        vecs.append(r.spectrum.eigenvectors[:, -1])
    ld = entropy.ln_delta_n(sc.eps, n)
    if digits is None:
        digits = 40 + int(n * 0.5 + abs(ld) / math.log(10) * 2)
    with mpmath.workdps(digits):
        overl = [[mpmath.mpc(complex(np.vdot(vecs[i], vecs[j]))) ** n for j in range(4)] for i in range(4)]
        d = mpmath.exp(ld) if ld > -math.inf else mpmath.mpf(0)
        w = [1 - d, d, d, 1 - d]
        h = 1 + 0.5 * _gram_sub_entropy(overl, w, [0, 1]) + 0.5 * _gram_sub_entropy(overl, w, [3, 2])
        h -= _gram_sub_entropy(overl, [x / 2 for x in w], [0, 1, 2, 3])
        return max(float(h), 0.0)


def block_states(sc: Scenario, n: int):
    """Materialized w0, w1 (refused above the tensor-power limit)."""
    d = entropy.delta_n(sc.eps, n)
    t = {lab: matcore.tensor_power(sc.state(lab), n).entries for lab in LABELS}
    w0 = DensityMatrix((1 - d) * t['00'] + d * t['01'], atol=1e-9)
    w1 = DensityMatrix((1 - d) * t['11'] + d * t['10'], atol=1e-9)
    return w0, w1


def exact_block_entropy(sc: Scenario, n: int) -> float:
    w0, w1 = block_states(sc, n)
    return entropy.exact_cond_entropy(entropy.CqState([0.5, 0.5], [w0, w1]))


def mixture_upper_curve(sc: Scenario, n: int) -> entropy.ErrorCurve:
    """Upper bound on the block error curve valid for any n.

    The triangle inequality on the flagged mixture gives
    p_err <= (1 - d_n) e0 + d_n (1 - e1), with e0 <= min_a s^a (1-s)^(1-a) Q_a(r00||r11)^n
    and e1 at least the fidelity bound for (r01, r10). The trivial bound
    min(s, 1 - s) also applies.
    """
    r0, r1 = sc.state('00'), sc.state('11')
    _, a_star = matcore.chernoff_q(r0, r1)
    alphas = np.array(sorted(set(entropy.RENYI_ALPHAS) | ({a_star} if 0 < a_star < 1 else set())))
    with np.errstate(divide='ignore'):
        lq = np.log([matcore.petz_q(a, r0, r1) for a in alphas])
    d = entropy.delta_n(sc.eps, n)
    f1n = matcore.fidelity(sc.state('01'), sc.state('10')) ** n

    def one(s, u):
        with np.errstate(divide='ignore'):
            e0 = np.exp(np.min(alphas[:, None] * np.log(s)[None, :] + (1 - alphas[:, None]) * np.log(u)[None, :]
                               + n * lq[:, None], axis=0))
        e1 = discrimination.err_lower_fidelity(s, f1n)
        return np.minimum(np.minimum(s, u), (1 - d) * e0 + d * (1 - e1))

    def evaluate(s):
        s = np.asarray(s, dtype=float)
        u = 1.0 - s
        return one(s, u), one(u, s)

    return entropy.ErrorCurve(evaluate)


def block_upper_bound(sc: Scenario, n: int, quad_points: int = entropy.DEFAULT_QUAD_POINTS,
                      panels: int = entropy.DEFAULT_PANELS) -> float:
    """Upper bound on the block entropy.

    Exact when the conditional states are pure (Gram reduction) or when the
    block states are small enough to materialize; otherwise the Renyi-type
    mixture bound integrated over s.
    """
    if all(r.is_pure(PURE_TOL) for r in sc.cond_states):
        return pure_block_entropy(sc, n)
    if sc.dim ** n <= MATERIALIZE_DIM:
        return exact_block_entropy(sc, n)
    # The curve carries a d_n / s term that contributes about d_n per dyadic
    # panel all the way down to s ~ d_n, so the panels must reach well below
    # d_n; the remaining sliver is added as a worst case.
    ld = entropy.ln_delta_n(sc.eps, n)
    if ld > -math.inf:
        depth = int(math.ceil(-ld / math.log(2.0))) + 64
        panels = min(max(panels, depth), entropy.MAX_PANELS)
    return float(entropy.entropy_integral(mixture_upper_curve(sc, n), quad_points, panels, tail='upper'))


def block_entropy_bounds(sc: Scenario, n: int, bins: int = DEFAULT_BINS,
                         quad_points: int = entropy.DEFAULT_QUAD_POINTS,
                         panels: int = entropy.DEFAULT_PANELS, tol: float = entropy.DEFAULT_TOL,
                         with_upper: bool = True, verdict: VerdictRecord | None = None) -> BoundReport:
    """All entropy bounds, key rate and ratio for blocklength n.

    bound_classical integrates the NS lower bound on the block error,
    bound_fidelity uses the block fidelity lower bound in closed form and
    bound_combined integrates the pointwise maximum of the two error bounds.
    bound_combined is reported as the larger of that integral and
    bound_fidelity, both valid lower bounds, so quadrature error can never
    put it below the fidelity bound.
    """
    model = BlockModel(sc, n, bins)
    fid_n = block_fidelity_lower(sc, n)
    b_fid = entropy.bound_fidelity_entropy(min(fid_n, 1.0))

    def combined(s):
        lo_s, lo_u = model.pair(s)
        f = discrimination.err_lower_fidelity(s, fid_n)
        return np.maximum(lo_s, f), np.maximum(lo_u, f)

    b_cls = entropy.entropy_integral(entropy.ErrorCurve(model.pair), quad_points, panels, tol)
    b_comb = entropy.entropy_integral(entropy.ErrorCurve(combined), quad_points, panels, tol)
    b_comb = max(b_comb, b_fid)
    upper = block_upper_bound(sc, n, quad_points, panels) if with_upper else math.nan
    if verdict is None:
        verdict = asymptotic_verdict(sc)
    ld = model.ln_delta
    lh2 = entropy.ln_binary_entropy_from_log(ld)
    return BoundReport(
        n=n,
        delta_n=model.delta,
        ln_delta_n=ld,
        h2_delta=math.exp(lh2),
        bound_fidelity=b_fid,
        bound_classical=b_cls,
        bound_combined=b_comb,
        chernoff_finite_lower=chernoff_finite_lower(sc, n),
        upper_bound=upper,
        key_rate=key_rate(sc, n, b_comb),
        ratio_Rn=ratio_Rn(sc, n, b_comb) if lh2 > -math.inf else math.inf,
        verdict=verdict.verdict,
    )


FIG2_FIDELITY = 0.684
FIG2_EPS = 0.45
FIG2_BASE_FIDELITY = 0.7


def _fig2_states(a: float, theta: float):
    # E x T with T the second qubit; both states are block diagonal in T.
    c, s = math.cos(theta), math.sin(theta)
    tau = np.diag([a, 1.0 - a, 0.0, 0.0]).astype(complex)
    u0 = np.array([c, 0.0, s, 0.0])
    u1 = np.array([0.0, c, 0.0, s])
    sigma = (1.0 - a) * np.outer(u0, u0) + a * np.outer(u1, u1)
    return tau, sigma.astype(complex)


def fig2_scenario(fidelity: float = FIG2_FIDELITY, eps: float = FIG2_EPS,
                  base_fidelity: float = FIG2_BASE_FIDELITY, tol: float = 1e-12) -> Scenario:
    """Deterministic two-qubit scenario with F(r00, r11) = fidelity.

    r00 = a|00><00| + (1-a)|01><01| and r11 has eigenvectors
    cos t|00> + sin t|10> (weight 1-a) and cos t|01> + sin t|11> (weight a),
    with a fixed by 2 sqrt(a(1-a)) = base_fidelity. The angle t is found by
    bisection so that the fidelity hits the target. The flagged pair
    r01 = r10 is maximally mixed.
    """
    if not 0.0 < fidelity < base_fidelity <= 1.0:
        raise ValidationError('need 0 < fidelity < base_fidelity <= 1')
    a = 0.5 * (1.0 - math.sqrt(1.0 - base_fidelity ** 2))
    lo, hi = 0.0, 0.5 * math.pi
    # fidelity decreases in t on [0, pi/2]
    for _ in range(200):
        mid = 0.5 * (lo + hi)
        t, s = _fig2_states(a, mid)
        if matcore.fidelity(DensityMatrix(t), DensityMatrix(s)) > fidelity:
            lo = mid
        else:
            hi = mid
        if hi - lo < tol:
            break
    tau, sigma = _fig2_states(a, 0.5 * (lo + hi))
    mixed = np.eye(4, dtype=complex) / 4
    return Scenario(eps, [DensityMatrix(tau), DensityMatrix(mixed), DensityMatrix(mixed),
                          DensityMatrix(sigma)], name=f'fig2_f{fidelity:g}')

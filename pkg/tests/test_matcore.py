import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from adkey import matcore
from adkey.errors import NumericGuardError, ValidationError
from adkey.matcore import DensityMatrix, HermitianObservable

import oracles


def states(d, rank=None):
    return st.integers(0, 2 ** 32 - 1).map(lambda seed: matcore.random_density_matrix(d, rank, seed))


# --- validation ---------------------------------------------------------------

def test_density_rejects_trace():
    with pytest.raises(ValidationError, match='trace deviation'):
        DensityMatrix(np.diag([0.5, 0.6]))


def test_density_rejects_non_hermitian():
    with pytest.raises(ValidationError, match='Hermitian'):
        DensityMatrix(np.array([[0.5, 0.1], [0.0, 0.5]]))


def test_density_rejects_negative_eigenvalue():
    with pytest.raises(ValidationError, match='positive semidefinite'):
        DensityMatrix(np.diag([1.1, -0.1]))


def test_density_clips_tiny_negative():
    r = DensityMatrix(np.diag([1.0 + 5e-11, -5e-11]))
    assert r.spectrum.eigenvalues.min() == 0.0


def test_density_rejects_non_square():
    with pytest.raises(ValidationError):
        DensityMatrix(np.ones((2, 3)) / 2)


# --- eig_hermitian ------------------------------------------------------------

def test_eig_identity():
    assert np.allclose(matcore.eig_hermitian(np.eye(2)).eigenvalues, [1, 1])


def test_eig_pauli_z():
    assert np.allclose(matcore.eig_hermitian(np.diag([1.0, -1.0])).eigenvalues, [-1, 1])


def test_eig_reconstruction(rng):
    g = rng.normal(size=(4, 4)) + 1j * rng.normal(size=(4, 4))
    m = g + g.conj().T
    spec = matcore.eig_hermitian(m)
    assert np.max(np.abs(spec.reconstruct() - m)) < 1e-9
    v = spec.eigenvectors
    assert np.max(np.abs(v.conj().T @ v - np.eye(4))) < 1e-9
    assert np.all(np.diff(spec.eigenvalues) >= 0)


def test_eig_phase_normalized(rng):
    spec = matcore.eig_hermitian(matcore.random_density_matrix(3, rng=rng).entries)
    for k in range(3):
        col = spec.eigenvectors[:, k]
        lead = col[np.argmax(np.abs(col) > 1e-12)]
        assert abs(lead.imag) < 1e-12 and lead.real > 0


def test_eig_rejects_non_hermitian():
    with pytest.raises(ValidationError, match='deviation'):
        matcore.eig_hermitian(np.array([[0.0, 1.0], [0.0, 0.0]]))


# --- mat_power ----------------------------------------------------------------

def test_mat_power_identity_exponent(rng):
    r = matcore.random_density_matrix(3, rng=rng)
    assert np.allclose(matcore.mat_power(r, 1).entries, r.entries, atol=1e-12)


def test_mat_power_projector():
    p = DensityMatrix.from_pure([1.0, 1.0j])
    assert np.allclose(matcore.mat_power(p, 0.37).entries, p.entries, atol=1e-12)


def test_mat_power_diag_sqrt():
    out = matcore.mat_power(DensityMatrix(np.diag([0.25, 0.75])), 0.5).entries
    assert np.allclose(np.diag(out).real, [0.5, math.sqrt(0.75)], atol=1e-12)


def test_mat_power_zero_exponent_is_support_projector():
    out = matcore.mat_power(DensityMatrix(np.diag([1.0, 0.0])), 0.0).entries
    assert np.allclose(out, np.diag([1.0, 0.0]))


def test_mat_power_negative_exponent():
    with pytest.raises(ValidationError):
        matcore.mat_power(DensityMatrix(np.eye(2) / 2), -0.5)


@settings(max_examples=40, deadline=None)
@given(states(3, 2), st.floats(0.1, 3.0), st.floats(0.1, 3.0))
def test_mat_power_composes(r, p, q):
    a = matcore.mat_power(matcore.mat_power(r, p), q).entries
    b = matcore.mat_power(r, p * q).entries
    assert np.max(np.abs(a - b)) < 1e-8


# --- trace_pos_neg ------------------------------------------------------------

def test_trace_pos_neg_zero():
    assert matcore.trace_pos_neg(np.zeros((2, 2))) == (0.0, 0.0, 0.0)


def test_trace_pos_neg_diag():
    assert np.allclose(matcore.trace_pos_neg(np.diag([0.5, -0.5])), (0.5, 0.5, 1.0))


def test_trace_norm_bloch_pair():
    m = 0.5 * oracles.bloch_state((0, 0, 1)) - 0.5 * oracles.bloch_state((1, 0, 0))
    assert matcore.trace_pos_neg(m)[2] == pytest.approx(math.sqrt(2) / 2, abs=1e-12)


@settings(max_examples=50, deadline=None)
@given(st.integers(0, 2 ** 32 - 1), st.sampled_from([2, 3, 4]))
def test_trace_pos_neg_consistency(seed, d):
    rng = np.random.default_rng(seed)
    g = rng.normal(size=(d, d)) + 1j * rng.normal(size=(d, d))
    m = g + g.conj().T
    tp, tm, tn = matcore.trace_pos_neg(m)
    tr = float(np.trace(m).real)
    assert tp - tm == pytest.approx(tr, abs=1e-9)
    assert tn >= abs(tr) - 1e-12
    if tm == 0.0 or tp == 0.0:
        assert tn == pytest.approx(abs(tr), abs=1e-12)


# --- fidelity -----------------------------------------------------------------

def test_fidelity_identical(rng):
    r = matcore.random_density_matrix(3, rng=rng)
    assert matcore.fidelity(r, r) == pytest.approx(1.0, abs=1e-9)


def test_fidelity_orthogonal():
    assert matcore.fidelity(np.diag([1.0, 0.0]), np.diag([0.0, 1.0])) == 0.0


def test_fidelity_pure_bloch():
    f = matcore.fidelity(oracles.bloch_state((0, 0, 1)), oracles.bloch_state((1 / math.sqrt(2), 0, 1 / math.sqrt(2))))
    assert f == pytest.approx(math.cos(math.pi / 8), abs=1e-12)


def test_fidelity_dim_mismatch():
    with pytest.raises(ValidationError, match='dimension'):
        matcore.fidelity(np.eye(2) / 2, np.eye(3) / 3)


@settings(max_examples=50, deadline=None)
@given(states(3), states(3))
def test_fidelity_matches_sqrtm_and_is_symmetric(a, b):
    f = matcore.fidelity(a, b)
    assert f == pytest.approx(oracles.fidelity_sqrtm(a.entries, b.entries), abs=1e-7)
    assert f == pytest.approx(matcore.fidelity(b, a), abs=1e-9)
    assert 0.0 <= f <= 1.0


# --- Renyi overlaps -----------------------------------------------------------

def test_petz_identical(rng):
    r = matcore.random_density_matrix(3, rng=rng)
    for a in (0.0, 0.3, 1.0):
        assert matcore.petz_q(a, r, r) == pytest.approx(1.0, abs=1e-10)


def test_petz_pure_is_fidelity_squared(rng):
    t = matcore.random_pure_state(3, rng)
    s = matcore.random_pure_state(3, rng)
    f2 = matcore.fidelity(t, s) ** 2
    for a in (0.1, 0.5, 0.9):
        assert matcore.petz_q(a, t, s) == pytest.approx(f2, abs=1e-10)


def test_petz_diag_value():
    q = matcore.petz_q(0.5, np.diag([0.3, 0.7]), np.diag([0.6, 0.4]))
    assert q == pytest.approx(math.sqrt(0.18) + math.sqrt(0.28), abs=1e-12)


def test_petz_domain():
    with pytest.raises(ValidationError):
        matcore.petz_q(1.5, np.eye(2) / 2, np.eye(2) / 2)


@settings(max_examples=40, deadline=None)
@given(states(3), states(3), st.floats(0.0, 1.0))
def test_petz_swap_symmetry(t, s, a):
    assert matcore.petz_q(a, t, s) == pytest.approx(matcore.petz_q(1.0 - a, s, t), abs=1e-10)


@settings(max_examples=25, deadline=None)
@given(states(2), states(2), states(2), states(2), st.floats(0.05, 0.95))
def test_petz_multiplicative(t1, s1, t2, s2, a):
    lhs = matcore.petz_q(a, np.kron(t1.entries, t2.entries), np.kron(s1.entries, s2.entries))
    assert lhs == pytest.approx(matcore.petz_q(a, t1, s1) * matcore.petz_q(a, t2, s2), abs=1e-9)


def test_sandwiched_identical(rng):
    r = matcore.random_density_matrix(3, rng=rng)
    assert matcore.sandwiched_q(0.3, r, r) == pytest.approx(1.0, abs=1e-10)


def test_sandwiched_half_is_fidelity(rng):
    t = matcore.random_density_matrix(3, rng=rng)
    s = matcore.random_density_matrix(3, rng=rng)
    assert matcore.sandwiched_q(0.5, t, s) == pytest.approx(matcore.fidelity(t, s), abs=1e-9)


def test_sandwiched_commuting_equals_petz():
    t, s = np.diag([0.2, 0.3, 0.5]), np.diag([0.6, 0.1, 0.3])
    assert matcore.sandwiched_q(0.3, t, s) == pytest.approx(matcore.petz_q(0.3, t, s), abs=1e-10)


def test_sandwiched_domain():
    with pytest.raises(ValidationError):
        matcore.sandwiched_q(1.0, np.eye(2) / 2, np.eye(2) / 2)


@settings(max_examples=50, deadline=None)
@given(states(3), states(3), st.floats(0.05, 0.95))
def test_sandwiched_between_petz_bounds(t, s, a):
    q = matcore.petz_q(a, t, s)
    qs = matcore.sandwiched_q(a, t, s)
    assert q - 1e-9 <= qs <= q ** a + 1e-9


# --- Chernoff -----------------------------------------------------------------

def test_chernoff_identical(rng):
    r = matcore.random_density_matrix(2, rng=rng)
    q, a = matcore.chernoff_q(r, r)
    assert q == pytest.approx(1.0, abs=1e-10) and a == 0.5


def test_chernoff_pure(rng):
    t = matcore.random_pure_state(2, rng)
    s = matcore.random_pure_state(2, rng)
    q, a = matcore.chernoff_q(t, s)
    assert q == pytest.approx(matcore.fidelity(t, s) ** 2, abs=1e-10) and a == 0.5


def test_chernoff_symmetric_diag():
    q, a = matcore.chernoff_q(np.diag([0.3, 0.7]), np.diag([0.7, 0.3]))
    assert a == pytest.approx(0.5, abs=1e-8)
    assert q == pytest.approx(2 * math.sqrt(0.21), abs=1e-12)


@settings(max_examples=50, deadline=None)
@given(states(3), states(3))
def test_chernoff_between_fidelity_powers(t, s):
    q, a = matcore.chernoff_q(t, s)
    f = matcore.fidelity(t, s)
    assert f * f - 1e-9 <= q <= f + 1e-9
    assert 0.0 <= a <= 1.0
    # a grid never beats the golden-section minimum
    grid = min(matcore.petz_q(x, t, s) for x in np.linspace(0, 1, 101))
    assert q <= grid + 1e-10


# --- tensor_power -------------------------------------------------------------

def test_tensor_power_one(rng):
    r = matcore.random_density_matrix(3, rng=rng)
    assert np.allclose(matcore.tensor_power(r, 1).entries, r.entries)


def test_tensor_power_classical():
    p = 0.3
    out = matcore.tensor_power(np.diag([p, 1 - p]), 2).entries
    assert np.allclose(np.diag(out).real, [p * p, p * (1 - p), (1 - p) * p, (1 - p) ** 2])


def test_tensor_power_trace(rng):
    out = matcore.tensor_power(matcore.random_density_matrix(2, rng=rng), 3)
    assert abs(np.trace(out.entries).real - 1.0) < 1e-10


def test_tensor_power_guard():
    with pytest.raises(NumericGuardError, match='4096'):
        matcore.tensor_power(np.eye(4) / 4, 7)


def test_golden_min_quadratic():
    x, fx = matcore.golden_min(lambda t: (t - 0.3) ** 2)
    assert x == pytest.approx(0.3, abs=1e-8) and fx < 1e-15


def test_observable_validation():
    with pytest.raises(ValidationError):
        HermitianObservable(np.array([[0, 1], [2, 0]]))

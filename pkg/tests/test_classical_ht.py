import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from adkey import classical_ht as ch
from adkey.classical_ht import ProductErrorModel
from adkey.errors import NumericGuardError, ValidationError

import oracles

P0 = np.array([0.9, 0.1])
P1 = np.array([0.2, 0.8])


def dists(k=4):
    return st.integers(0, 2 ** 32 - 1).map(
        lambda seed: tuple(np.random.default_rng(seed).dirichlet(np.ones(k), size=2)))


# --- single copy --------------------------------------------------------------

def test_exact_identical():
    assert ch.classical_error_exact(0.5, [0.3, 0.7], [0.3, 0.7]) == pytest.approx(0.5)


def test_exact_disjoint():
    assert ch.classical_error_exact(0.5, [1.0, 0.0], [0.0, 1.0]) == 0.0


def test_exact_value():
    assert ch.classical_error_exact(0.5, P0, P1) == pytest.approx(0.15, abs=1e-15)


def test_exact_length_mismatch():
    with pytest.raises(ValidationError, match='mismatch'):
        ch.classical_error_exact(0.5, [1.0], [0.5, 0.5])


# --- LLR laws -----------------------------------------------------------------

def test_llr_identical():
    l = ch.build_llr([0.3, 0.7], [0.3, 0.7], 64)
    assert l.masses.sum() == pytest.approx(1.0)
    assert l.grid[np.argmax(l.masses)] == 0.0


def test_llr_disjoint_atoms():
    l = ch.build_llr([0.5, 0.5, 0.0], [0.0, 0.0, 1.0], 64)
    assert l.mass_pos_inf == 0.0 and l.mass_neg_inf == 1.0 and l.masses.sum() == 0.0
    l1 = ch.build_llr([0.5, 0.5, 0.0], [0.0, 0.0, 1.0], 64, sample_from='P1')
    assert l1.mass_pos_inf == 1.0


def test_llr_values_directional():
    lo = ch.build_llr(P0, P1, 256, 'P0')
    hi = ch.build_llr(P0, P1, 256, 'P1')
    nz = lo.grid[lo.masses > 0]
    assert np.allclose(lo.masses[lo.masses > 0], [0.9, 0.1])
    exact = np.log([2 / 9, 8.0])
    assert np.all(nz <= exact + 1e-12) and np.all(exact - nz < lo.grid_step)
    nz1 = hi.grid[hi.masses > 0]
    assert np.all(nz1 >= exact - 1e-12) and np.all(nz1 - exact < hi.grid_step)
    assert lo.total_mass == pytest.approx(1.0, abs=1e-12)


def test_llr_bins_validation():
    with pytest.raises(ValidationError, match='power of two'):
        ch.build_llr(P0, P1, 100)
    with pytest.raises(ValidationError):
        ch.build_llr(P0, P1, 32)


def test_llr_drops_null_outcomes():
    l = ch.build_llr([0.5, 0.5, 0.0], [0.5, 0.5, 0.0], 64)
    assert l.total_mass == pytest.approx(1.0)


# --- convolution --------------------------------------------------------------

def test_convolve_point_mass():
    l = ch.build_llr([0.3, 0.7], [0.3, 0.7], 64)
    out = ch.convolve_n(l, 7)
    assert out.masses.max() == pytest.approx(1.0, abs=1e-12)
    assert out.grid[np.argmax(out.masses)] == pytest.approx(0.0)


def test_convolve_identity():
    l = ch.build_llr(P0, P1, 64)
    out = ch.convolve_n(l, 1)
    assert np.array_equal(out.masses, l.masses)


def test_convolve_matches_enumeration():
    l = ch.build_llr(P0, P1, 128)
    out = ch.convolve_n(l, 8)
    assert out.total_mass == pytest.approx(1.0, abs=1e-8)
    law = oracles.brute_llr_sums([math.log(2 / 9), math.log(8.0)], [0.9, 0.1], 8)
    # every exact sum lies within n steps above its (rounded-down) grid point
    for v, p in law.items():
        near = np.abs(out.grid - v) <= 8 * l.grid_step + 1e-9
        assert out.masses[near].sum() >= p - 1e-9
    # cumulative law: grid values are lower bounds of the true sums
    for x in np.linspace(-12, 16, 15):
        grid_cdf = out.masses[out.grid <= x].sum()
        true_cdf = sum(p for v, p in law.items() if v <= x)
        assert grid_cdf >= true_cdf - 1e-9


def test_convolve_atoms():
    l = ch.build_llr([0.5, 0.3, 0.2], [0.5, 0.5, 0.0], 64)
    out = ch.convolve_n(l, 3)
    assert out.mass_neg_inf == pytest.approx(1 - 0.8 ** 3)
    assert out.total_mass == pytest.approx(1.0, abs=1e-8)


def test_convolve_guard():
    l = ch.build_llr(P0, P1, 2 ** 16)
    with pytest.raises(NumericGuardError, match='2\\^24'):
        ch.convolve_n(l, 1000)


# --- product error ------------------------------------------------------------

def test_product_identical():
    for n in (1, 5, 40):
        b = ch.product_error(0.3, [0.2, 0.8], [0.2, 0.8], n)
        assert 0.3 in b


def test_product_n1_consistency(rng):
    for _ in range(10):
        p0, p1 = rng.dirichlet(np.ones(5), size=2)
        ex = ch.classical_error_exact(0.37, p0, p1)
        for kw in ({}, {'max_types': 0}):
            b = ch.product_error(0.37, p0, p1, 1, **kw)
            assert b.lower - 1e-12 <= ex <= b.upper + 1e-12


def test_product_n6_enumeration(rng):
    p0, p1 = rng.dirichlet(np.ones(4), size=2)
    ex = oracles.brute_product_error(0.5, p0, p1, 6)
    assert ex in ch.product_error(0.5, p0, p1, 6)
    assert ex in ch.product_error(0.5, p0, p1, 6, max_types=0)


def test_product_disjoint():
    b = ch.product_error(0.5, [1.0, 0.0], [0.0, 1.0], 4)
    assert b.lower == b.upper == 0.0


def test_product_bracket_invariants(rng):
    p0, p1 = rng.dirichlet(np.ones(4), size=2)
    for prior in (0.0, 0.01, 0.5, 0.99, 1.0):
        b = ch.product_error(prior, p0, p1, 30)
        assert 0.0 <= b.lower <= b.upper <= min(prior, 1 - prior) + 1e-12


@settings(max_examples=30, deadline=None)
@given(dists(), st.integers(1, 8), st.floats(0.01, 0.99))
def test_product_bracket_sound(pair, n, prior):
    p0, p1 = pair
    ex = oracles.brute_product_error(prior, p0, p1, n)
    for kw in ({}, {'max_types': 0, 'bins': 256}):
        b = ch.product_error(prior, p0, p1, n, **kw)
        slack = 1e-14 * ex  # oracle summation rounding
        assert b.lower - slack <= ex <= b.upper + slack


@settings(max_examples=15, deadline=None)
@given(dists(), st.integers(2, 12), st.sampled_from([0.5, 0.2, 0.01]))
def test_product_bracket_refines(pair, n, prior):
    p0, p1 = pair
    widths = [ch.product_error(prior, p0, p1, n, b, max_types=0).width for b in (64, 128, 256, 512)]
    for w1, w2 in zip(widths, widths[1:]):
        assert w2 <= w1 + 1e-12


def test_product_asymptotic_rate():
    c, _ = ch.classical_chernoff(P0, P1)
    b = ch.product_error(0.5, P0, P1, 400)
    rate = -math.log(b.upper) / 400
    assert abs(rate - (-math.log(c))) <= 0.1 * -math.log(c)


def test_product_model_vectorized(rng):
    p0, p1 = rng.dirichlet(np.ones(6), size=2)
    m = ProductErrorModel(p0, p1, 50, 1024)
    s = np.array([0.02, 0.3, 0.5, 0.8])
    lo, hi = m.bracket(s, 1 - s)
    for x, l, h in zip(s, lo, hi):
        b = ch.product_error(x, p0, p1, 50, 1024)
        assert l <= b.upper + 1e-15 and b.lower <= h + 1e-15


def test_product_large_n_fft_path():
    rng = np.random.default_rng(3)
    p0, p1 = rng.dirichlet(np.ones(16), size=2)
    rel = []
    for bins in (2048, 4096, 8192):
        b = ch.product_error(0.5, p0, p1, 300, bins)
        assert b.lower > 0.0
        rel.append(b.width / b.upper)
    # the grid bias shrinks with resolution; 8192 bins leaves under 1% relative width
    assert rel[0] > rel[1] > rel[2] and rel[2] < 1e-2
    # the exact decay sits between the Sanov lower bound and the Chernoff upper bound
    c, _ = ch.classical_chernoff(p0, p1)
    assert b.upper <= 0.5 * c ** 300 * (1 + 1e-9)
    assert ch.sanov_lower_bound(0.5, p0, p1, 300) <= b.upper


def test_product_guard():
    rng = np.random.default_rng(4)
    p0, p1 = rng.dirichlet(np.ones(16), size=2)
    with pytest.raises(NumericGuardError):
        ch.product_error(0.5, p0, p1, 5000, 8192)


# --- Chernoff / Sanov / interpolation ----------------------------------------

def test_chernoff_identical():
    assert ch.classical_chernoff([0.4, 0.6], [0.4, 0.6]) == (pytest.approx(1.0), 0.5)


def test_chernoff_disjoint():
    assert ch.classical_chernoff([1.0, 0.0], [0.0, 1.0]) == (0.0, 0.5)


def test_chernoff_swap():
    c, lam = ch.classical_chernoff([0.3, 0.7], [0.7, 0.3])
    assert lam == pytest.approx(0.5, abs=1e-8) and c == pytest.approx(2 * math.sqrt(0.21), abs=1e-12)


def test_sanov_identical():
    assert ch.sanov_lower_bound(0.5, [0.5, 0.5], [0.5, 0.5], 1) == pytest.approx(0.25)


def test_sanov_disjoint():
    assert ch.sanov_lower_bound(0.5, [1.0, 0.0], [0.0, 1.0], 3) == 0.0


@pytest.mark.parametrize('seed', range(5))
def test_sanov_below_product_error(seed):
    rng = np.random.default_rng(seed)
    p0, p1 = rng.dirichlet(np.ones(4), size=2)
    for n in range(1, 11):
        b = ch.product_error(0.5, p0, p1, n)
        assert ch.sanov_lower_bound(0.5, p0, p1, n) <= b.lower + b.width
    for n in (1, 4, 8):
        assert ch.sanov_lower_bound(0.3, p0, p1, n) <= oracles.brute_product_error(0.3, p0, p1, n)


def test_interpolating_endpoints():
    assert np.allclose(ch.interpolating_distribution(P0, P1, 1.0), P0)
    assert np.allclose(ch.interpolating_distribution(P0, P1, 0.0), P1)


def test_interpolating_half():
    v = ch.interpolating_distribution(P0, P1, 0.5)
    w = np.sqrt([0.18, 0.08])
    assert np.allclose(v, w / w.sum())
    assert np.allclose(v, [0.6, 0.4])


def test_interpolating_disjoint():
    with pytest.raises(ValidationError, match='disjoint'):
        ch.interpolating_distribution([1.0, 0.0], [0.0, 1.0], 0.5)

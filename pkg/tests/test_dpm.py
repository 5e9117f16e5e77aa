"""Slice-augmented stick-breaking mixture updates."""

import copy
import math

import numpy as np
import pytest
from scipy import stats

from pairchain.dpm import (
    DpmHyper,
    DpmState,
    extend_truncation,
    leftover_mass,
    log_atom_density,
    mixture_snapshot,
    sample_allocations,
    sample_atoms,
    sample_sticks_and_slices,
    stick_to_weights,
    validate_state,
)
from pairchain.errors import TruncationLimitError


def small_state(sticks=(0.5, 0.5), alloc=(0, 0, 1), states=(0.1, -0.2, 0.4)):
    sticks = np.asarray(sticks, dtype=float)
    alloc = np.asarray(alloc)
    w = stick_to_weights(sticks)
    return DpmState(
        sticks=sticks,
        atom_means=np.linspace(-1.0, 1.0, len(sticks)),
        atom_precisions=np.ones(len(sticks)),
        alloc=alloc,
        slices=0.5 * w[alloc],
        states=np.asarray(states, dtype=float),
    )


def test_stick_to_weights_halving():
    w = stick_to_weights([0.5, 0.5, 0.5])
    np.testing.assert_allclose(w, [0.5, 0.25, 0.125], rtol=1e-15)
    assert w.sum() + leftover_mass([0.5, 0.5, 0.5]) == pytest.approx(1.0)


def test_stick_to_weights_telescopes():
    rng = np.random.default_rng(0)
    sticks = rng.beta(1.0, 2.0, size=30)
    w = stick_to_weights(sticks)
    assert np.all(w > 0.0)
    assert w.sum() + leftover_mass(sticks) == pytest.approx(1.0, abs=1e-14)


def test_stick_domain_validation():
    with pytest.raises(ValueError):
        stick_to_weights([0.5, 0.0])
    with pytest.raises(ValueError):
        stick_to_weights([1.0])


def test_log_atom_density_matches_scipy():
    state = small_state()
    values = np.array([-0.7, 0.0, 1.3])
    got = log_atom_density(state, values)
    for j in range(state.n_components):
        sd = 1.0 / np.sqrt(state.atom_precisions[j])
        expect = stats.norm(state.atom_means[j], sd).logpdf(values)
        np.testing.assert_allclose(got[:, j], expect, rtol=1e-12)


def test_validate_state_accepts_and_rejects():
    validate_state(small_state())
    bad = small_state()
    bad.atom_precisions = np.array([1.0, -1.0])
    with pytest.raises(ValueError):
        validate_state(bad)
    bad = small_state()
    bad.alloc = np.array([0, 0, 5])
    with pytest.raises(ValueError):
        validate_state(bad)
    bad = small_state()
    bad.slices = bad.weights[bad.alloc]  # u_i == w must fail (strict)
    with pytest.raises(ValueError):
        validate_state(bad)


def test_stick_conditional_is_beta():
    # one component holding all 100 items, alpha = 1: Beta(101, 1)
    hyper = DpmHyper(alpha_dp=1.0)
    rng = np.random.default_rng(42)
    base = DpmState(
        sticks=np.array([0.5]),
        atom_means=np.zeros(1),
        atom_precisions=np.ones(1),
        alloc=np.zeros(100, dtype=int),
        slices=np.full(100, 0.1),
        states=np.zeros(100),
    )
    draws = np.empty(20_000)
    for r in range(len(draws)):
        state = copy.deepcopy(base)
        sample_sticks_and_slices(state, hyper, rng)
        draws[r] = state.sticks[0]
    assert draws.mean() == pytest.approx(101 / 102, abs=5e-4)
    assert stats.kstest(draws, stats.beta(101, 1).cdf).pvalue > 0.01


def test_unoccupied_sticks_reduce_to_prior():
    # second component empty: its stick keeps the Beta(1, alpha) prior
    hyper = DpmHyper(alpha_dp=2.0)
    rng = np.random.default_rng(7)
    base = small_state(sticks=(0.5, 0.5), alloc=(0, 0, 0))
    draws = np.empty(20_000)
    for r in range(len(draws)):
        state = copy.deepcopy(base)
        sample_sticks_and_slices(state, hyper, rng)
        draws[r] = state.sticks[1]
    assert stats.kstest(draws, stats.beta(1, 2).cdf).pvalue > 0.01


def test_slices_lie_under_allocated_weight():
    hyper = DpmHyper()
    rng = np.random.default_rng(3)
    state = small_state()
    for _ in range(50):
        sample_sticks_and_slices(state, hyper, rng)
        w = state.weights
        assert np.all(state.slices >= 0.0)
        assert np.all(state.slices < w[state.alloc])
        validate_state(state)


def test_extension_noop_when_covered():
    hyper = DpmHyper()
    rng = np.random.default_rng(1)
    state = small_state(sticks=(0.6,), alloc=(0, 0, 0))
    state.slices = np.full(3, 0.5)  # leftover 0.4 < min slice
    before = state.sticks.copy()
    extend_truncation(state, hyper, rng)
    assert state.n_components == 1
    np.testing.assert_array_equal(state.sticks, before)


def test_extension_covers_every_slice():
    hyper = DpmHyper(alpha_dp=1.0)
    rng = np.random.default_rng(2)
    state = small_state()
    state.slices = np.full(3, 1e-4)
    extend_truncation(state, hyper, rng)
    assert state.n_components > 2
    assert leftover_mass(state.sticks) < 1e-4
    assert len(state.atom_means) == state.n_components
    assert len(state.atom_precisions) == state.n_components
    assert np.all(state.sticks > 0.0) and np.all(state.sticks < 1.0)


def test_extension_cap_raises():
    hyper = DpmHyper(alpha_dp=1.0, max_components=4)
    rng = np.random.default_rng(4)
    state = small_state()
    state.slices = np.full(3, 1e-12)
    with pytest.raises(TruncationLimitError):
        extend_truncation(state, hyper, rng)


def test_allocation_conditional_frequencies():
    # identical items: allocations are iid over the active components with
    # probabilities proportional to the atom densities
    sticks = np.array([0.5, 0.5, 0.5])
    w = stick_to_weights(sticks)  # (0.5, 0.25, 0.125)
    n = 20_000
    state = DpmState(
        sticks=sticks,
        atom_means=np.array([0.0, 1.0, -1.0]),
        atom_precisions=np.array([1.0, 4.0, 1.0]),
        alloc=np.zeros(n, dtype=int),
        slices=np.full(n, 0.2),  # active set {0, 1}
        states=np.full(n, 0.3),
    )
    rng = np.random.default_rng(11)
    sample_allocations(state, rng)
    dens = np.array([stats.norm(0.0, 1.0).pdf(0.3),
                     stats.norm(1.0, 0.5).pdf(0.3)])
    q = dens / dens.sum()
    freq = np.bincount(state.alloc, minlength=3) / n
    assert freq[2] == 0.0
    se = np.sqrt(q * (1 - q) / n)
    assert abs(freq[0] - q[0]) < 4 * se[0]
    assert abs(freq[1] - q[1]) < 4 * se[1]
    assert np.all(w[state.alloc] > state.slices)


def test_allocation_requires_coverage():
    state = small_state()
    state.slices = np.full(3, 0.9)  # above every weight
    with pytest.raises(RuntimeError):
        sample_allocations(state, np.random.default_rng(0))


def test_atom_mean_conditional():
    # single member at V = 0 with unit precisions: mu ~ N(0, 1/2)
    hyper = DpmHyper(mean_loc=0.0, mean_var=1.0)
    rng = np.random.default_rng(13)
    base = DpmState(
        sticks=np.array([0.5]),
        atom_means=np.zeros(1),
        atom_precisions=np.ones(1),
        alloc=np.zeros(1, dtype=int),
        slices=np.full(1, 0.1),
        states=np.zeros(1),
    )
    draws = np.empty(20_000)
    for r in range(len(draws)):
        state = copy.deepcopy(base)
        sample_atoms(state, hyper, rng)
        draws[r] = state.atom_means[0]
    assert stats.kstest(draws, stats.norm(0.0, np.sqrt(0.5)).cdf).pvalue > 0.01


def test_atom_precision_conditional():
    # pin the mean at 2 via a near-degenerate base: residual sum is 5, so
    # lambda ~ Gamma(1.5 + 3/2, rate 0.5 + 5/2)
    hyper = DpmHyper(mean_loc=2.0, mean_var=1e-18,
                     prec_shape=1.5, prec_rate=0.5)
    rng = np.random.default_rng(17)
    base = DpmState(
        sticks=np.array([0.5]),
        atom_means=np.array([2.0]),
        atom_precisions=np.ones(1),
        alloc=np.zeros(3, dtype=int),
        slices=np.full(3, 0.1),
        states=np.array([1.0, 2.0, 4.0]),
    )
    draws = np.empty(20_000)
    for r in range(len(draws)):
        state = copy.deepcopy(base)
        sample_atoms(state, hyper, rng)
        draws[r] = state.atom_precisions[0]
    ref = stats.gamma(3.0, scale=1.0 / 3.0)
    assert stats.kstest(draws, ref.cdf).pvalue > 0.01


def test_empty_component_redraws_from_base():
    hyper = DpmHyper(mean_loc=-1.0, mean_var=4.0, prec_shape=2.0,
                     prec_rate=3.0)
    rng = np.random.default_rng(19)
    base = small_state(sticks=(0.5, 0.5), alloc=(0, 0, 0))
    means = np.empty(20_000)
    precs = np.empty(20_000)
    for r in range(len(means)):
        state = copy.deepcopy(base)
        sample_atoms(state, hyper, rng)
        means[r] = state.atom_means[1]
        precs[r] = state.atom_precisions[1]
    assert stats.kstest(means, stats.norm(-1.0, 2.0).cdf).pvalue > 0.01
    assert stats.kstest(precs, stats.gamma(2.0, scale=1 / 3).cdf).pvalue > 0.01


def test_mixture_snapshot_normalizes():
    state = small_state()
    state.atom_precisions = np.array([4.0, 0.25])
    snap = mixture_snapshot(state)
    assert snap.weights.sum() == pytest.approx(1.0, abs=1e-14)
    np.testing.assert_allclose(snap.weights, [2 / 3, 1 / 3], rtol=1e-14)
    np.testing.assert_allclose(snap.variances, [0.25, 4.0], rtol=1e-14)
    v = np.linspace(-30, 30, 4001)
    assert np.trapezoid(snap.pdf(v), v) == pytest.approx(1.0, abs=1e-6)


def test_hyper_validation():
    with pytest.raises(ValueError):
        DpmHyper(alpha_dp=0.0)
    with pytest.raises(ValueError):
        DpmHyper(mean_var=-1.0)
    with pytest.raises(ValueError):
        DpmHyper(prec_rate=0.0)
    with pytest.raises(ValueError):
        DpmHyper(max_components=0)


def alloc_prior_prob(tup, alpha):
    """Closed-form prior probability of an allocation vector.

    Integrating the stick-breaking weights gives, with ``c_j`` the count at
    level ``j`` and ``d_j`` the count strictly above it,
    ``prod_j c_j! Gamma(alpha + d_j) Gamma(1 + alpha) /
    (Gamma(alpha) Gamma(1 + alpha + c_j + d_j))``.
    """
    p = 1.0
    for j in range(max(tup) + 1):
        c = sum(1 for k in tup if k == j)
        d = sum(1 for k in tup if k > j)
        p *= (math.factorial(c) * math.gamma(alpha + d) * math.gamma(1 + alpha)
              / (math.gamma(alpha) * math.gamma(1 + alpha + c + d)))
    return p


class _ConstantAtoms(DpmHyper):
    """Base measure whose atoms are all identical.

    Makes the atom density cancel from the allocation conditional, so the
    slice cycle's stationary allocation law is the stick-breaking prior.
    """

    def draw_atoms(self, size, rng):
        if size is None:
            return 0.0, 1.0
        return np.zeros(size), np.ones(size)


def test_slice_cycle_keeps_allocation_prior():
    alpha = 1.0
    assert alloc_prior_prob((0, 0, 0), alpha) == pytest.approx(0.25)
    hyper = _ConstantAtoms(alpha_dp=alpha)
    rng = np.random.default_rng(23)
    state = DpmState(
        sticks=np.array([0.5, 0.5]),
        atom_means=np.zeros(2),
        atom_precisions=np.ones(2),
        alloc=np.array([0, 0, 0]),
        slices=np.full(3, 0.1),
        states=np.zeros(3),
    )
    n_sweeps, burn = 30_000, 500
    counts = {}
    for sweep in range(n_sweeps + burn):
        sample_sticks_and_slices(state, hyper, rng)
        extend_truncation(state, hyper, rng)
        sample_allocations(state, rng)
        if sweep >= burn:
            key = tuple(int(k) for k in state.alloc)
            counts[key] = counts.get(key, 0) + 1
        if sweep % 5000 == 0:
            validate_state(state)
    j_enum = 5
    tuples = [(a, b, c) for a in range(j_enum) for b in range(j_enum)
              for c in range(j_enum)]
    expected = {t: alloc_prior_prob(t, alpha) for t in tuples}
    enumerated = sum(expected.values())
    assert 0.9 < enumerated < 1.0
    tv = 0.0
    tail_emp = 0.0
    for key, c in counts.items():
        if key in expected:
            continue
        tail_emp += c / n_sweeps
    tv += abs(tail_emp - (1.0 - enumerated))
    for t, p in expected.items():
        tv += abs(counts.get(t, 0) / n_sweeps - p)
    assert 0.5 * tv < 0.05
    assert abs(counts.get((0, 0, 0), 0) / n_sweeps - 0.25) < 0.02


def test_cycle_reproducible():
    hyper = DpmHyper(alpha_dp=1.5)
    outs = []
    for _ in range(2):
        rng = np.random.default_rng(99)
        state = small_state()
        for _ in range(20):
            sample_sticks_and_slices(state, hyper, rng)
            extend_truncation(state, hyper, rng)
            sample_allocations(state, rng)
            sample_atoms(state, hyper, rng)
        outs.append(state)
    np.testing.assert_array_equal(outs[0].sticks, outs[1].sticks)
    np.testing.assert_array_equal(outs[0].alloc, outs[1].alloc)
    np.testing.assert_array_equal(outs[0].atom_means, outs[1].atom_means)

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from pairchain import (BradleyTerry, ExpStrengths, HomeTies,
                       kernel_lower_bound, kernel_prob, outcome_probs)


def test_bradley_terry_values():
    bt = BradleyTerry()
    assert kernel_prob(bt, 1, 2.0, 1.0) == pytest.approx(2.0 / 3.0, abs=1e-15)
    assert kernel_prob(bt, 0, 2.0, 1.0) == pytest.approx(1.0 / 3.0, abs=1e-15)
    assert kernel_prob(bt, 1, 1.0, 1.0) == 0.5


def test_home_ties_reference_point():
    # alpha=1, theta=2 at equal strengths: all three outcomes equally likely
    ht = HomeTies(alpha=1.0, theta=2.0)
    for x in ht.outcomes:
        assert kernel_prob(ht, x, 0.0, 0.0) == pytest.approx(1 / 3, abs=1e-15)


def test_home_ties_no_ties_at_theta_one():
    ht = HomeTies(alpha=1.3, theta=1.0)
    assert kernel_prob(ht, 0, 0.4, -0.2) == 0.0
    assert kernel_prob(ht, 1, 0.4, -0.2) + kernel_prob(ht, -1, 0.4, -0.2) \
        == pytest.approx(1.0, abs=1e-15)


def test_home_advantage_direction():
    ht = HomeTies(alpha=2.0, theta=1.5)
    assert kernel_prob(ht, 1, 0.0, 0.0) > kernel_prob(ht, -1, 0.0, 0.0)
    stronger = kernel_prob(ht, 1, 1.0, 0.0)
    weaker = kernel_prob(ht, 1, 0.0, 1.0)
    assert stronger > weaker


@given(st.sampled_from(["bt", "ht"]), st.data())
@settings(max_examples=200, deadline=None)
def test_outcome_probs_sum_to_one(which, data):
    if which == "bt":
        kernel = BradleyTerry()
        v = data.draw(st.floats(0.01, 100.0))
        w = data.draw(st.floats(0.01, 100.0))
    else:
        kernel = HomeTies(alpha=data.draw(st.floats(0.05, 20.0)),
                          theta=data.draw(st.floats(1.0, 20.0)))
        v = data.draw(st.floats(-8.0, 8.0))
        w = data.draw(st.floats(-8.0, 8.0))
    total = sum(float(kernel.prob(x, v, w)) for x in kernel.outcomes)
    assert abs(total - 1.0) < 1e-12
    assert all(0.0 <= float(kernel.prob(x, v, w)) <= 1.0
               for x in kernel.outcomes)


def test_translation_invariance_exact_on_dyadics():
    # shifts that are exact in binary floating point must leave the kernel
    # bitwise unchanged
    rng = np.random.default_rng(11)
    ht = HomeTies(alpha=1.4, theta=1.7)
    grid = 2.0 ** -20
    v = rng.integers(-8 * 2 ** 20, 8 * 2 ** 20, 300) * grid
    w = rng.integers(-8 * 2 ** 20, 8 * 2 ** 20, 300) * grid
    c = rng.integers(-8 * 2 ** 20, 8 * 2 ** 20, 300) * grid
    for x in ht.outcomes:
        base = ht.prob(x, v, w)
        shifted = ht.prob(x, v + c, w + c)
        assert np.array_equal(base, shifted)


def test_translation_invariance_generic_reals():
    rng = np.random.default_rng(12)
    ht = HomeTies(alpha=0.8, theta=2.5)
    v, w, c = rng.normal(size=(3, 500))
    for x in ht.outcomes:
        assert np.allclose(ht.prob(x, v, w), ht.prob(x, v + c, w + c),
                           atol=1e-12, rtol=0)


def test_exp_strengths_matches_composition():
    bt = BradleyTerry()
    wrapped = ExpStrengths(bt)
    assert wrapped.outcomes == bt.outcomes
    v, w = 0.3, -1.2
    assert kernel_prob(wrapped, 1, v, w) == pytest.approx(
        kernel_prob(bt, 1, np.exp(v), np.exp(w)), abs=1e-15)


def test_kernel_domain_errors():
    bt = BradleyTerry()
    with pytest.raises(ValueError):
        bt.prob(2, 1.0, 1.0)
    with pytest.raises(ValueError):
        bt.prob(1, -1.0, 1.0)
    with pytest.raises(ValueError):
        bt.prob(1, 0.0, 1.0)
    ht = HomeTies()
    with pytest.raises(ValueError):
        ht.prob(2, 0.0, 0.0)
    with pytest.raises(ValueError):
        HomeTies(alpha=0.0)
    with pytest.raises(ValueError):
        HomeTies(theta=0.9)


def test_lower_bound_bradley_terry_corners():
    bt = BradleyTerry()
    assert kernel_lower_bound(bt, 1.0, 2.0) == pytest.approx(1 / 3, abs=1e-15)
    assert kernel_lower_bound(bt, 0.7, 0.7) == pytest.approx(0.5, abs=1e-15)


def test_lower_bound_dominates_sampled_probs():
    rng = np.random.default_rng(21)
    kernels = [BradleyTerry(), HomeTies(1.2, 1.8), ExpStrengths(BradleyTerry())]
    domains = [(0.5, 3.0), (-2.0, 2.0), (-2.0, 2.0)]
    for kernel, (lo, hi) in zip(kernels, domains):
        nu = kernel_lower_bound(kernel, lo, hi)
        assert 0.0 < nu <= 1.0 / len(kernel.outcomes) + 1e-12
        v = rng.uniform(lo, hi, 2000)
        w = rng.uniform(lo, hi, 2000)
        for x in kernel.outcomes:
            assert np.all(np.asarray(kernel.prob(x, v, w)) >= nu - 1e-12)


def test_lower_bound_rejects_bad_box():
    with pytest.raises(ValueError):
        kernel_lower_bound(HomeTies(), 1.0, 0.0)


def test_outcome_probs_shape():
    ht = HomeTies(1.1, 1.6)
    v = np.zeros(7)
    w = np.linspace(-1, 1, 7)
    probs = outcome_probs(ht, v, w)
    assert probs.shape == (3, 7)
    assert np.allclose(probs.sum(axis=0), 1.0, atol=1e-12)

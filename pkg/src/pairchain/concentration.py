"""Concentration bounds for Lipschitz statistics of minorized Markov chains.

For a chain whose kernel is minorized by ``nu`` times a probability measure,
a function with bounded differences ``gamma`` satisfies the tail bound
``P(f - Ef > t) <= exp(-2 t^2 / D_n)`` where

    D_n = sum_l (gamma_l + 2 sum_{m>l} gamma_m Delta(P^{m-l}))^2

and ``Delta`` is the Dobrushin coefficient.  Chaining ``Delta(P^q) <=
(1-nu)^q`` and summing the geometric series gives the closed-form corollary
``P(f - Ef > t) <= exp(-nu^2 t^2 / (5 sum_l gamma_l^2))``.  An independent
chain (``nu = 1``) collapses the theorem to the classical bounded-difference
inequality.  This module computes both bounds exactly on finite state spaces
and measures empirical tails against them.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .util import as_generator, categorical


@dataclass
class LipschitzSpec:
    """A statistic with coordinatewise bounded differences.

    ``fn`` maps an ``(R, n)`` array of state sequences to ``(R,)`` values;
    changing coordinate ``l`` alone must move the value by at most
    ``gamma[l]``.
    """

    fn: callable
    gamma: np.ndarray

    def __post_init__(self):
        self.gamma = np.asarray(self.gamma, dtype=float)
        if np.any(self.gamma < 0.0):
            raise ValueError("gamma must be nonnegative")

    @property
    def n(self):
        return len(self.gamma)


@dataclass
class MinorizedChain:
    """Finite-state chain with a certified minorization constant.

    ``transition[x, y] = P(x, y)`` with ``P(x, .) >= nu * eta(.)`` for some
    probability vector ``eta``; the largest such ``nu`` is
    ``sum_y min_x P(x, y)``, and the declared ``nu`` must not exceed it.
    ``initial`` is the law of ``X_0``; statistics apply to ``X_1 .. X_n``.
    """

    transition: np.ndarray
    initial: np.ndarray
    nu: float

    def __post_init__(self):
        self.transition = np.asarray(self.transition, dtype=float)
        self.initial = np.asarray(self.initial, dtype=float)
        p = self.transition
        if p.ndim != 2 or p.shape[0] != p.shape[1]:
            raise ValueError("transition must be square")
        if np.any(p < 0.0) or np.any(np.abs(p.sum(axis=1) - 1.0) > 1e-10):
            raise ValueError("transition rows must be distributions")
        if np.any(self.initial < 0.0) or abs(self.initial.sum() - 1.0) > 1e-10:
            raise ValueError("initial must be a distribution")
        best = float(p.min(axis=0).sum())
        if not 0.0 < self.nu <= best + 1e-12:
            raise ValueError(
                f"declared nu={self.nu} not certified (max is {best:.6g})")

    @property
    def n_states(self):
        return self.transition.shape[0]

    @classmethod
    def build(cls, nu, n_states, seed):
        """Random chain with minorization exactly ``nu``:
        ``P = nu * 1 eta^T + (1 - nu) Q`` for random ``eta`` and ``Q``."""
        rng = as_generator(seed)
        eta = rng.dirichlet(np.ones(n_states))
        rows = rng.dirichlet(np.ones(n_states), size=n_states)
        p = nu * eta[None, :] + (1.0 - nu) * rows
        initial = rng.dirichlet(np.ones(n_states))
        return cls(p, initial, nu)


def dobrushin_coefficient(transition):
    """Exact Dobrushin coefficient: max over row pairs of their TV distance."""
    p = np.asarray(transition, dtype=float)
    diffs = np.abs(p[:, None, :] - p[None, :, :]).sum(axis=2)
    return 0.5 * float(diffs.max())


def dobrushin_bound(nu, q):
    """Geometric bound ``(1 - nu)^q`` on the q-step Dobrushin coefficient."""
    if not 0.0 < nu <= 1.0:
        raise ValueError("nu must lie in (0, 1]")
    if q < 0:
        raise ValueError("q must be >= 0")
    return (1.0 - nu) ** q


def dobrushin_sequence(chain, n_gaps):
    """Exact ``Delta(P^q)`` for ``q = 1 .. n_gaps``."""
    deltas = np.empty(n_gaps)
    power = np.eye(chain.n_states)
    for q in range(n_gaps):
        power = power @ chain.transition
        deltas[q] = dobrushin_coefficient(power)
    return deltas


def dn_bound(gamma, deltas):
    """The variance proxy ``D_n`` from per-gap Dobrushin coefficients.

    ``deltas[q-1]`` stands for ``Delta(P^q)`` (exact values or any upper
    bounds; a larger ``deltas`` gives a larger, still valid, ``D_n``).
    """
    gamma = np.asarray(gamma, dtype=float)
    deltas = np.asarray(deltas, dtype=float)
    n = len(gamma)
    if len(deltas) < n - 1:
        raise ValueError("need a Dobrushin value for every gap 1 .. n-1")
    total = 0.0
    for l in range(n):
        tail = gamma[l + 1:] @ deltas[:n - 1 - l] if l < n - 1 else 0.0
        total += (gamma[l] + 2.0 * tail) ** 2
    return float(total)


def theorem_bound(t, dn):
    """Tail bound ``exp(-2 t^2 / D_n)``."""
    return np.exp(-2.0 * np.asarray(t, dtype=float) ** 2 / dn)


def corollary_bound(t, nu, gamma):
    """Closed-form tail bound ``exp(-nu^2 t^2 / (5 sum gamma^2))``."""
    gamma = np.asarray(gamma, dtype=float)
    rate = nu ** 2 / (5.0 * float(gamma @ gamma))
    return np.exp(-rate * np.asarray(t, dtype=float) ** 2)


def simulate_chain(chain, n, n_replicates, rng):
    """Sample ``X_1 .. X_n`` in ``n_replicates`` independent replicates."""
    cum = np.cumsum(chain.transition, axis=1)
    states = categorical(rng, chain.initial, size=n_replicates)
    out = np.empty((n_replicates, n), dtype=int)
    for i in range(n):
        u = rng.random(n_replicates)
        states = (u[:, None] >= cum[states]).sum(axis=1)
        out[:, i] = states
    return out


def chain_marginals(chain, n):
    """Laws of ``X_1 .. X_n`` as rows of an ``(n, S)`` array."""
    rows = np.empty((n, chain.n_states))
    law = chain.initial
    for i in range(n):
        law = law @ chain.transition
        rows[i] = law
    return rows


def additive_indicator_spec(n, target):
    """The statistic ``f = (1/n) * #{i : X_i = target}``; gamma = 1/n."""
    def fn(states):
        return (np.asarray(states) == target).mean(axis=1)
    return LipschitzSpec(fn, np.full(n, 1.0 / n))


def indicator_mean(chain, n, target):
    """Exact expectation of the additive indicator statistic."""
    return float(chain_marginals(chain, n)[:, target].mean())


def check_bounded_differences(spec, n_states, rng, n_cases=1000):
    """Spot-check membership of ``fn`` in the bounded-difference class.

    Perturbs one random coordinate of random sequences and verifies the value
    moves by at most the coordinate's ``gamma``.  Raises ``ValueError`` on a
    violation.
    """
    n = spec.n
    states = rng.integers(0, n_states, size=(n_cases, n))
    coords = rng.integers(0, n, size=n_cases)
    perturbed = states.copy()
    perturbed[np.arange(n_cases), coords] = rng.integers(0, n_states, n_cases)
    moved = np.abs(spec.fn(states) - spec.fn(perturbed))
    allowed = spec.gamma[coords] + 1e-12
    if np.any(moved > allowed):
        bad = int(np.argmax(moved - allowed))
        raise ValueError(
            f"coordinate {coords[bad]} moved f by {moved[bad]:.3g} "
            f"> gamma {spec.gamma[coords[bad]]:.3g}")


def empirical_tail(chain, spec, t_grid, n_replicates, rng, mean_f=None,
                   pilot_size=100_000):
    """Empirical upper tails of ``f - Ef`` against both bounds.

    ``Ef`` is taken from ``mean_f`` when supplied (e.g. computed exactly via
    :func:`indicator_mean`), otherwise estimated from an independent pilot
    run of ``pilot_size`` replicates.

    Returns
    -------
    dict of arrays with keys ``t``, ``empirical``, ``theorem``,
    ``corollary``, plus scalars ``dn`` and ``mean_f``.
    """
    t_grid = np.asarray(t_grid, dtype=float)
    n = spec.n
    if mean_f is None:
        pilot = simulate_chain(chain, n, pilot_size, rng)
        mean_f = float(np.mean(spec.fn(pilot)))
    values = spec.fn(simulate_chain(chain, n, n_replicates, rng))
    excess = values - mean_f
    empirical = np.array([(excess > t).mean() for t in t_grid])
    deltas = dobrushin_sequence(chain, n - 1) if n > 1 else np.empty(0)
    dn = dn_bound(spec.gamma, deltas)
    return {
        "t": t_grid,
        "empirical": empirical,
        "theorem": theorem_bound(t_grid, dn),
        "corollary": corollary_bound(t_grid, chain.nu, spec.gamma),
        "dn": dn,
        "mean_f": float(mean_f),
    }

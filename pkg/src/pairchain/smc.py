"""Particle filtering and backward simulation for the comparison chain.

The chain conditioned on the mixture latents has independent per-time priors
(the slice mixtures) coupled only through the outcome kernel, which acts as a
pairwise emission.  The forward pass is an auxiliary particle filter whose
cloud at time ``k`` targets the predictive law of ``V_k`` given the first
``k-1`` outcomes; the backward pass draws whole trajectories from the
smoothing law, either with the quadratic backward kernel or with its
rejection-sampled linear variant.

Per-time priors are duck-typed: anything with ``sample(k, size, rng)`` and,
for non-bootstrap proposals, ``logpdf(k, values)`` works.
:class:`SliceMixture` is the mixture-sampler instance,
:class:`StationaryPrior` wraps a fixed mixture for standalone use.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.special import logsumexp

from .errors import DegeneracyError
from .util import categorical

_LOG_2PI = np.log(2.0 * np.pi)


class SliceMixture:
    """Equal-weight Gaussian sums, one per time index, set by the slices.

    Parameters
    ----------
    means, precisions : ndarray, shape (J,)
        The instantiated atoms.
    active : ndarray of bool, shape (T, J)
        ``active[k, j]`` marks component ``j`` visible at time ``k``
        (``w_j > u_k``).  Every row must have at least one active component.
    """

    def __init__(self, means, precisions, active):
        self.means = np.asarray(means, dtype=float)
        self.precisions = np.asarray(precisions, dtype=float)
        self.active = np.asarray(active, dtype=bool)
        self.n_active = self.active.sum(axis=1)
        if self.n_active.min() == 0:
            raise ValueError("every time index needs an active component")
        # column j of _order holds the j-th active index of each row (rows
        # are padded with inactive indices past n_active)
        self._order = np.argsort(~self.active, axis=1, kind="stable")

    @property
    def n_times(self):
        return len(self.active)

    def components(self, k):
        return self._order[k, :self.n_active[k]]

    def sample(self, k, size, rng):
        pick = rng.integers(0, self.n_active[k], size)
        comp = self._order[k, pick]
        return rng.normal(self.means[comp],
                          1.0 / np.sqrt(self.precisions[comp]))

    def logpdf(self, k, values):
        """Normalized log density of the time-``k`` mixture."""
        values = np.asarray(values, dtype=float)
        comp = self.components(k)
        lam = self.precisions[comp]
        z = lam * (values[..., None] - self.means[comp]) ** 2
        logphi = 0.5 * (np.log(lam) - _LOG_2PI) - 0.5 * z
        return logsumexp(logphi, axis=-1) - np.log(self.n_active[k])


class StationaryPrior:
    """The same mixture density at every time index."""

    def __init__(self, mixture):
        self.mixture = mixture

    def sample(self, k, size, rng):
        return self.mixture.sample(size, rng)

    def logpdf(self, k, values):
        return self.mixture.logpdf(values)


@dataclass
class ParticleCloud:
    """Forward-filter output: particles, weights, ancestors per time."""

    particles: np.ndarray
    weights: np.ndarray
    ancestors: np.ndarray

    @property
    def n_times(self):
        return self.particles.shape[0]

    @property
    def n_particles(self):
        return self.particles.shape[1]

    def mean(self):
        """Filter means, one per time index."""
        return (self.particles * self.weights).sum(axis=1)

    def var(self):
        """Filter variances, one per time index."""
        return (self.particles ** 2 * self.weights).sum(axis=1) - self.mean() ** 2


def apf_init(prior, m_particles, rng):
    """Initial cloud: draws from the time-0 prior with uniform weights."""
    if m_particles < 2:
        raise ValueError("need at least two particles")
    particles = prior.sample(0, m_particles, rng)
    weights = np.full(m_particles, 1.0 / m_particles)
    return particles, weights


def apf_step(particles, weights, x_prev, k, prior, kernel, rng,
             proposal=None, adjustment=None):
    """One auxiliary-filter step from time ``k-1`` to ``k``.

    Draws ancestor/particle pairs from the instrumental distribution
    ``pi(l, dx) proportional to w_l * rho(xi_l) * p(xi_l, dx)`` and reweights
    with the ratio ``prior_k(x) K(x_prev, xi_l, x) / (rho(xi_l) p(xi_l, x))``,
    self-normalized.  Without a proposal the step is the bootstrap case:
    ancestors follow the weights alone, new particles come from the time-``k``
    prior, and the ratio collapses to the kernel value exactly.

    Parameters
    ----------
    particles, weights : ndarray, shape (M,)
        The time ``k-1`` cloud.
    x_prev : outcome linking times ``k-1`` and ``k``.
    k : int
        Destination time index (into the prior).
    prior : per-time prior (slice mixture or compatible).
    kernel : outcome kernel.
    rng : Generator
    proposal : optional transition proposal with ``sample(k, src, rng)`` and
        ``logpdf(k, src, values)``.
    adjustment : optional callable giving first-stage multipliers
        ``rho(xi)`` on the source particles.

    Returns
    -------
    (new_particles, new_weights, ancestors)
    """
    m = len(particles)
    if adjustment is None:
        first_stage = weights
    else:
        rho = np.asarray(adjustment(particles), dtype=float)
        if np.any(rho < 0.0):
            raise ValueError("adjustment multipliers must be nonnegative")
        first_stage = weights * rho
    try:
        ancestors = categorical(rng, first_stage, size=m)
    except ValueError as err:
        raise DegeneracyError("first-stage weights sum to zero") from err
    src = particles[ancestors]

    if proposal is None:
        new_particles = prior.sample(k, m, rng)
        new_weights = np.asarray(kernel.prob(x_prev, src, new_particles),
                                 dtype=float)
        if adjustment is not None:
            new_weights = new_weights / rho[ancestors]
    else:
        new_particles = proposal.sample(k, src, rng)
        with np.errstate(divide="ignore"):
            log_k = np.log(kernel.prob(x_prev, src, new_particles))
        log_w = (prior.logpdf(k, new_particles) + log_k
                 - proposal.logpdf(k, src, new_particles))
        if adjustment is not None:
            log_w = log_w - np.log(rho[ancestors])
        log_w = log_w - log_w.max()
        new_weights = np.exp(log_w)

    total = new_weights.sum()
    if not total > 0.0 or not np.isfinite(total):
        raise DegeneracyError(f"particle weights degenerate at step {k}")
    return new_particles, new_weights / total, ancestors


def forward_filter(prior, outcomes, kernel, m_particles, rng,
                   proposal=None, adjustment=None):
    """Run the auxiliary filter through all outcomes.

    Returns a :class:`ParticleCloud` with ``len(outcomes) + 1`` time slices;
    slice ``k`` targets the predictive law of ``V_k`` given the first ``k``
    outcomes' predecessors (outcome ``i`` links times ``i`` and ``i+1``).
    """
    t = len(outcomes) + 1
    particles = np.empty((t, m_particles))
    weights = np.empty((t, m_particles))
    ancestors = np.empty((t, m_particles), dtype=int)
    particles[0], weights[0] = apf_init(prior, m_particles, rng)
    ancestors[0] = np.arange(m_particles)
    for i, x in enumerate(outcomes):
        particles[i + 1], weights[i + 1], ancestors[i + 1] = apf_step(
            particles[i], weights[i], x, i + 1, prior, kernel, rng,
            proposal=proposal, adjustment=adjustment)
    return ParticleCloud(particles, weights, ancestors)


def backward_weights(cloud, outcomes, k, next_values, kernel):
    """Normalized backward-kernel rows ``Lambda_k`` for given successors.

    Row ``p`` is proportional to ``w_k^l * K(x_k, xi_k^l, next_values[p])``
    over the time-``k`` particles ``l``; each row sums to one.
    """
    k_vals = np.asarray(kernel.prob(outcomes[k], cloud.particles[k][None, :],
                                    np.asarray(next_values)[:, None]))
    lam = cloud.weights[k][None, :] * k_vals
    total = lam.sum(axis=1, keepdims=True)
    if np.any(total <= 0.0):
        raise DegeneracyError(f"backward kernel degenerate at step {k}")
    return lam / total


def ffbsi_quadratic(cloud, outcomes, kernel, n_paths, rng):
    """Backward-simulate smoothing trajectories with the exact kernel.

    Cost is ``O(n_paths * M)`` per time step.  Returns an array of shape
    ``(n_paths, T)`` of strength trajectories.
    """
    t, _ = cloud.particles.shape
    idx = np.empty((t, n_paths), dtype=int)
    idx[-1] = categorical(rng, cloud.weights[-1], size=n_paths)
    for k in range(t - 2, -1, -1):
        next_vals = cloud.particles[k + 1, idx[k + 1]]
        lam = backward_weights(cloud, outcomes, k, next_vals, kernel)
        idx[k] = categorical(rng, lam)
    return cloud.particles[np.arange(t)[:, None], idx].T


def ffbsi_linear(cloud, outcomes, kernel, n_paths, max_tries, rng,
                 counters=None):
    """Backward-simulate trajectories by rejection, with exact fallback.

    Candidate ancestors are proposed from the filter weights and accepted
    with probability ``K(x_k, xi_k^candidate, xi_{k+1})``, which is a valid
    acceptance probability because kernel values never exceed one.  A path
    still undecided after ``max_tries`` proposals at a step falls back to the
    exact backward kernel, so the trajectory law matches
    :func:`ffbsi_quadratic` for any ``max_tries >= 1``.

    ``counters``, if given, is a dict accumulating ``proposals``,
    ``accepted`` and ``fallbacks`` for diagnostics.
    """
    if max_tries < 1:
        raise ValueError("max_tries must be >= 1")
    t, _ = cloud.particles.shape
    idx = np.empty((t, n_paths), dtype=int)
    idx[-1] = categorical(rng, cloud.weights[-1], size=n_paths)
    for k in range(t - 2, -1, -1):
        next_vals = cloud.particles[k + 1, idx[k + 1]]
        undecided = np.arange(n_paths)
        chosen = idx[k]
        for _ in range(max_tries):
            if len(undecided) == 0:
                break
            prop = categorical(rng, cloud.weights[k], size=len(undecided))
            accept_prob = kernel.prob(outcomes[k], cloud.particles[k, prop],
                                      next_vals[undecided])
            accept = rng.random(len(undecided)) < accept_prob
            chosen[undecided[accept]] = prop[accept]
            if counters is not None:
                counters["proposals"] = counters.get("proposals", 0) + len(undecided)
                counters["accepted"] = counters.get("accepted", 0) + int(accept.sum())
            undecided = undecided[~accept]
        if len(undecided) > 0:
            lam = backward_weights(cloud, outcomes, k, next_vals[undecided],
                                   kernel)
            chosen[undecided] = categorical(rng, lam)
            if counters is not None:
                counters["fallbacks"] = counters.get("fallbacks", 0) + len(undecided)
    return cloud.particles[np.arange(t)[:, None], idx].T

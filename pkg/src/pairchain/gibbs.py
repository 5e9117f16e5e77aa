"""Block Gibbs sampler for the strength distribution of a comparison chain.

Each sweep alternates four conditional moves: (i) the whole strength
trajectory is redrawn by backward simulation against the slice-mixture
priors, collapsing over the allocations; (ii) allocations; (iii) sticks and
slices; (iv) atoms.  The truncation is re-extended at the top of every sweep
so that both the trajectory and the allocation moves see every component
their slices could activate.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .dpm import (DpmHyper, DpmState, extend_truncation, log_atom_density,
                  mixture_snapshot, sample_allocations, sample_atoms,
                  sample_sticks_and_slices)
from .kernels import kernel_lower_bound
from .mixtures import MixtureDensity, standard_normal_mixture
from .smc import SliceMixture, ffbsi_linear, forward_filter
from .simulate import simulate_championship
from .util import as_generator


@dataclass
class SamplerConfig:
    """Run-length, particle, and prior settings for :func:`run_chain`."""

    n_sweeps: int
    burn_in: int
    m_particles: int = 100
    hyper: DpmHyper = field(default_factory=DpmHyper)
    init: MixtureDensity = field(default_factory=standard_normal_mixture)
    seed: int = 0
    max_tries: int | None = None

    def __post_init__(self):
        if self.n_sweeps < 1:
            raise ValueError("n_sweeps must be >= 1")
        if not 0 <= self.burn_in < self.n_sweeps:
            raise ValueError("need 0 <= burn_in < n_sweeps")
        if self.m_particles < 2:
            raise ValueError("m_particles must be >= 2")
        if self.max_tries is not None and self.max_tries < 1:
            raise ValueError("max_tries must be >= 1 when given")


@dataclass
class PosteriorSample:
    """One retained sweep: mixture snapshot and strength trajectory."""

    sweep: int
    snapshot: MixtureDensity
    states: np.ndarray


def init_state(outcomes, kernel, config, rng):
    """Initial sampler state: two prior components, strengths from
    ``config.init``, allocations and slices drawn consistently."""
    outcomes = np.asarray(outcomes)
    if len(outcomes) < 1:
        raise ValueError("need at least one outcome")
    alphabet = set(kernel.outcomes)
    if not set(np.unique(outcomes)).issubset(alphabet):
        raise ValueError("outcomes contain values outside the kernel alphabet")

    sticks = np.clip(rng.beta(1.0, config.hyper.alpha_dp, 2), 1e-12, 1 - 1e-12)
    means, precisions = config.hyper.draw_atoms(2, rng)
    states = config.init.sample(len(outcomes) + 1, rng)
    state = DpmState(sticks=sticks, atom_means=means,
                     atom_precisions=precisions,
                     alloc=np.zeros(len(outcomes) + 1, dtype=int),
                     slices=np.zeros(len(outcomes) + 1),
                     states=np.asarray(states))
    with np.errstate(divide="ignore"):
        logp = log_atom_density(state, state.states) + np.log(state.weights)
    state.alloc = np.argmax(logp + rng.gumbel(size=logp.shape), axis=1)
    state.slices = rng.uniform(0.0, state.weights[state.alloc])
    return state


def slice_prior(state):
    """The per-time slice mixtures seen by the trajectory move."""
    active = state.weights[None, :] > state.slices[:, None]
    return SliceMixture(state.atom_means, state.atom_precisions, active)


def gibbs_sweep(state, outcomes, kernel, config, rng, counters=None):
    """One full sweep over (trajectory, allocations, sticks+slices, atoms)."""
    extend_truncation(state, config.hyper, rng)
    prior = slice_prior(state)
    cloud = forward_filter(prior, outcomes, kernel, config.m_particles, rng)

    if config.max_tries is None:
        nu = kernel_lower_bound(kernel, float(cloud.particles.min()),
                                float(cloud.particles.max()))
        max_tries = math.ceil(10.0 / max(nu, 1e-12))
        max_tries = int(np.clip(max_tries, 8, 10 * config.m_particles))
    else:
        max_tries = config.max_tries
    paths = ffbsi_linear(cloud, outcomes, kernel, 1, max_tries, rng,
                         counters=counters)
    state.states = paths[0]

    sample_allocations(state, rng)
    sample_sticks_and_slices(state, config.hyper, rng)
    sample_atoms(state, config.hyper, rng)
    return state


def run_chain(outcomes, kernel, config, counters=None):
    """Run the block sampler and keep every post-burn-in sweep.

    Returns a list of :class:`PosteriorSample`, one per retained sweep, in
    sweep order.  The run is reproducible from ``config.seed``.
    """
    rng = as_generator(config.seed)
    state = init_state(outcomes, kernel, config, rng)
    samples = []
    for sweep in range(config.n_sweeps):
        gibbs_sweep(state, outcomes, kernel, config, rng, counters=counters)
        if sweep >= config.burn_in:
            samples.append(PosteriorSample(sweep, mixture_snapshot(state),
                                           state.states.copy()))
    return samples


def density_estimate(samples, nodes):
    """Average the snapshot densities of retained sweeps on a grid."""
    if len(samples) == 0:
        raise ValueError("need at least one posterior sample")
    nodes = np.asarray(nodes, dtype=float)
    total = np.zeros_like(nodes)
    for sample in samples:
        total += sample.snapshot.pdf(nodes)
    return total / len(samples)


def _shifted_l1(nodes, density, ref_values, c):
    shifted = np.interp(nodes - c, nodes, density, left=0.0, right=0.0)
    return float(np.trapezoid(np.abs(shifted - ref_values), nodes))


def l1_distance(nodes, density, reference, shift=0.0):
    """L1 distance between a tabulated density (optionally shifted) and a
    reference mixture, by trapezoid quadrature on the grid."""
    return _shifted_l1(nodes, density, reference.pdf(nodes), shift)


def align_translation(nodes, density, reference, lo=-10.0, hi=10.0):
    """Shift making a tabulated density closest to a reference mixture.

    Scans the L1 distance between the shifted estimate and the reference on
    a coarse grid of shifts in ``[lo, hi]``, then refines the best bracket by
    golden-section search.  Returns the shift ``c``; apply it as
    ``density(v - c)``.
    """
    nodes = np.asarray(nodes, dtype=float)
    density = np.asarray(density, dtype=float)
    ref_values = reference.pdf(nodes)

    shifts = np.linspace(lo, hi, 201)
    losses = [_shifted_l1(nodes, density, ref_values, c) for c in shifts]
    best = int(np.argmin(losses))
    a = shifts[max(best - 1, 0)]
    b = shifts[min(best + 1, len(shifts) - 1)]

    invphi = (math.sqrt(5.0) - 1.0) / 2.0
    c1 = b - invphi * (b - a)
    c2 = a + invphi * (b - a)
    f1 = _shifted_l1(nodes, density, ref_values, c1)
    f2 = _shifted_l1(nodes, density, ref_values, c2)
    while b - a > 1e-6:
        if f1 < f2:
            b, c2, f2 = c2, c1, f1
            c1 = b - invphi * (b - a)
            f1 = _shifted_l1(nodes, density, ref_values, c1)
        else:
            a, c1, f1 = c1, c2, f2
            c2 = a + invphi * (b - a)
            f2 = _shifted_l1(nodes, density, ref_values, c2)
    return 0.5 * (a + b)


def sample_from_density(nodes, density, size, rng):
    """Inverse-CDF draws from a tabulated density on a grid."""
    nodes = np.asarray(nodes, dtype=float)
    density = np.asarray(density, dtype=float)
    if np.any(density < 0.0):
        raise ValueError("density values must be nonnegative")
    increments = 0.5 * (density[1:] + density[:-1]) * np.diff(nodes)
    cdf = np.concatenate(([0.0], np.cumsum(increments)))
    if cdf[-1] <= 0.0:
        raise ValueError("density integrates to zero on the grid")
    cdf /= cdf[-1]
    return np.interp(rng.random(size), cdf, nodes)


def predict_championships(nodes, density, kernel, n_teams, n_replicates,
                          seed, scoring=(3, 1, 0)):
    """Simulate championships with strengths drawn from an estimated density.

    Each replicate draws ``n_teams`` strengths by inverse CDF from the
    tabulated density and plays a double round robin.  Returns the points
    table sorted within each replicate, shape ``(n_replicates, n_teams)``,
    so column ``r`` collects the points of the rank-``r`` finisher.
    """
    if n_teams < 2:
        raise ValueError("need at least two teams")
    if n_replicates < 1:
        raise ValueError("need at least one replicate")
    rng = as_generator(seed)
    table = np.empty((n_replicates, n_teams), dtype=int)
    for r in range(n_replicates):
        strengths = sample_from_density(nodes, density, n_teams, rng)
        result = simulate_championship(strengths, kernel, rng, scoring=scoring)
        table[r] = np.sort(result.points)[::-1]
    return table

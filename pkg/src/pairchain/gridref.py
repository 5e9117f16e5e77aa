"""Deterministic reference inference on a fixed strength grid.

When the strength distribution is supported on finitely many nodes, the
predictive filter, the likelihood, and the smoothing marginals of the
comparison chain are exact finite sums.  This module computes them directly
and serves as the ground truth the Monte Carlo machinery is validated
against.  All recursions run in log space.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.special import logsumexp

from .errors import DegeneracyError
from .kernels import kernel_lower_bound


@dataclass
class FilterState:
    """Predictive distribution of the next strength over the grid nodes."""

    probs: np.ndarray

    def __post_init__(self):
        self.probs = np.asarray(self.probs, dtype=float)
        if np.any(self.probs < 0.0) or abs(self.probs.sum() - 1.0) > 1e-9:
            raise ValueError("filter state must be a probability vector")


class GridModel:
    """A strength distribution on grid nodes paired with an outcome kernel.

    Parameters
    ----------
    nodes : ndarray
        Strictly increasing strength values (a single node is allowed).
    masses : ndarray
        Node probabilities; renormalized to machine precision, must sum to
        one within 1e-8 beforehand.
    kernel : outcome kernel
    """

    def __init__(self, nodes, masses, kernel):
        nodes = np.asarray(nodes, dtype=float)
        masses = np.asarray(masses, dtype=float)
        if nodes.ndim != 1 or nodes.shape != masses.shape:
            raise ValueError("nodes and masses must be matching vectors")
        if len(nodes) > 1 and np.any(np.diff(nodes) <= 0.0):
            raise ValueError("nodes must be strictly increasing")
        if np.any(masses < 0.0) or abs(masses.sum() - 1.0) > 1e-8:
            raise ValueError("masses must be a probability vector")
        self.nodes = nodes
        self.masses = masses / masses.sum()
        self.kernel = kernel
        with np.errstate(divide="ignore"):
            self._log_masses = np.log(self.masses)
            # _log_k[x][i, j] = log K(x, nodes[i], nodes[j])
            vv, ww = np.meshgrid(nodes, nodes, indexing="ij")
            self._log_k = {x: np.log(np.asarray(kernel.prob(x, vv, ww)))
                           for x in kernel.outcomes}

    @classmethod
    def from_mixture(cls, mixture, kernel, n_nodes=512, span=5.0):
        """Discretize a mixture by trapezoid quadrature on mean +- span*std."""
        m, s = mixture.mean(), mixture.std()
        nodes = np.linspace(m - span * s, m + span * s, n_nodes)
        weights = np.full(n_nodes, nodes[1] - nodes[0])
        weights[0] *= 0.5
        weights[-1] *= 0.5
        masses = mixture.pdf(nodes) * weights
        return cls(nodes, masses / masses.sum(), kernel)

    @property
    def n_nodes(self):
        return len(self.nodes)

    def lower_bound(self):
        """Kernel minorization constant over the node hull."""
        return kernel_lower_bound(self.kernel, self.nodes[0], self.nodes[-1])

    def initial_state(self):
        return FilterState(self.masses.copy())


def _log_step(grid, log_probs, x):
    """Unnormalized log filter update and its log normalizer."""
    log_k = grid._log_k[x]
    log_new = grid._log_masses + logsumexp(log_probs[:, None] + log_k, axis=0)
    log_norm = logsumexp(log_new)
    if log_norm == -np.inf:
        raise DegeneracyError("outcome sequence has zero probability on grid")
    return log_new - log_norm, log_norm


def filter_step(state, x, grid):
    """Advance the predictive filter by one observed outcome.

    The update is ``new(z) proportional to masses(z) * sum_z' probs(z') *
    K(x, z', z)``; its normalizer is the predictive probability of ``x``.
    """
    with np.errstate(divide="ignore"):
        log_probs = np.log(state.probs)
    log_new, _ = _log_step(grid, log_probs, x)
    return FilterState(np.exp(log_new))


def filter_path(grid, outcomes, init=None):
    """Run the filter through all outcomes.

    Returns
    -------
    probs : ndarray, shape (len(outcomes) + 1, G)
        Predictive distributions; row ``i`` conditions on the first ``i``
        outcomes (row 0 is the initial state).
    log_increments : ndarray, shape (len(outcomes),)
        Predictive log probabilities ``log P(x_i | x_1..x_{i-1})``.
    """
    init_probs = grid.masses if init is None else np.asarray(init, dtype=float)
    with np.errstate(divide="ignore"):
        log_probs = np.log(init_probs)
    probs = np.empty((len(outcomes) + 1, grid.n_nodes))
    probs[0] = init_probs
    incs = np.empty(len(outcomes))
    for i, x in enumerate(outcomes):
        log_probs, incs[i] = _log_step(grid, log_probs, x)
        probs[i + 1] = np.exp(log_probs)
    return probs, incs


def exact_loglik(grid, outcomes):
    """Log likelihood of an outcome sequence under the grid model."""
    _, incs = filter_path(grid, outcomes)
    return float(incs.sum())


def smoothing_marginals(grid, outcomes):
    """Posterior marginals of every strength given all outcomes.

    Returns an array of shape ``(len(outcomes) + 1, G)`` whose row ``k`` is
    the law of the ``k``-th strength given the full outcome sequence.
    """
    n = len(outcomes)
    g = grid.n_nodes
    fwd = np.empty((n + 1, g))
    fwd[0] = grid._log_masses
    for i, x in enumerate(outcomes):
        fwd[i + 1], _ = _log_step(grid, fwd[i], x)

    bwd = np.zeros((n + 1, g))
    for i in range(n - 1, -1, -1):
        log_k = grid._log_k[outcomes[i]]
        term = log_k + grid._log_masses[None, :] + bwd[i + 1][None, :]
        bwd[i] = logsumexp(term, axis=1)
        bwd[i] -= bwd[i].max()

    marg = fwd + bwd
    marg -= logsumexp(marg, axis=1, keepdims=True)
    return np.exp(marg)


def forgetting_gap(grid, outcomes, init_a, init_b):
    """Total-variation gap between two filters after the same outcomes.

    Runs the predictive filter from two initial distributions through the
    full outcome sequence and returns ``(tv_gap, bound)`` where the bound is
    ``(1 - nu)^p`` with ``nu`` the kernel lower bound over the node hull and
    ``p = len(outcomes)``.  The contract ``tv_gap <= bound`` holds for every
    input.
    """
    probs_a, _ = filter_path(grid, outcomes, init=init_a)
    probs_b, _ = filter_path(grid, outcomes, init=init_b)
    tv_gap = 0.5 * float(np.abs(probs_a[-1] - probs_b[-1]).sum())
    bound = (1.0 - grid.lower_bound()) ** len(outcomes)
    return tv_gap, bound


def truncation_gap(grid, outcomes, i, ell):
    """Effect of truncating the conditioning window on one log increment.

    Compares the ``i``-th predictive log probability computed from the short
    window ``outcomes[ell : ell+i]`` against the ``(ell+i)``-th one computed
    from the full prefix ``outcomes[: ell+i]`` (same final outcome, ``ell``
    more conditioning outcomes).  Returns ``(gap, bound)`` with
    ``bound = (1/nu) * (1 - nu)^(i-1)``.
    """
    if i < 1:
        raise ValueError("i must be >= 1")
    if ell < 0:
        raise ValueError("ell must be >= 0")
    if len(outcomes) < ell + i:
        raise ValueError("need at least ell + i outcomes")
    outcomes = np.asarray(outcomes)
    _, incs_full = filter_path(grid, outcomes[:ell + i])
    _, incs_short = filter_path(grid, outcomes[ell:ell + i])
    gap = abs(float(incs_full[-1]) - float(incs_short[-1]))
    nu = grid.lower_bound()
    bound = (1.0 / nu) * (1.0 - nu) ** (i - 1)
    return gap, bound

"""Shared test oracles and fixtures.

The brute-force computations here deliberately share no code with the
library: likelihoods and smoothing laws are obtained by materializing the
full joint tensor over all strength assignments and summing it.
"""

from __future__ import annotations

import numpy as np
from scipy.special import logsumexp

from pairchain.util import categorical


def joint_log_tensor(nodes, masses, kernel, outcomes):
    """Log joint mass of (V_1..V_{n+1}, outcomes) over the full grid^(n+1)."""
    n = len(outcomes)
    g = len(nodes)
    log_m = np.log(masses)
    log_joint = np.zeros((g,) * (n + 1))
    for i in range(n + 1):
        shape = [1] * (n + 1)
        shape[i] = g
        log_joint = log_joint + log_m.reshape(shape)
    vv, ww = np.meshgrid(nodes, nodes, indexing="ij")
    for i, x in enumerate(outcomes):
        log_k = np.log(np.asarray(kernel.prob(x, vv, ww)))
        shape = [1] * (n + 1)
        shape[i] = g
        shape[i + 1] = g
        log_joint = log_joint + log_k.reshape(shape)
    return log_joint


def brute_loglik(nodes, masses, kernel, outcomes):
    return float(logsumexp(joint_log_tensor(nodes, masses, kernel, outcomes)))


def brute_smoothing(nodes, masses, kernel, outcomes):
    """Posterior marginals of each strength by direct tensor summation."""
    log_joint = joint_log_tensor(nodes, masses, kernel, outcomes)
    n1 = log_joint.ndim
    rows = []
    for k in range(n1):
        axes = tuple(a for a in range(n1) if a != k)
        log_marg = logsumexp(log_joint, axis=axes)
        rows.append(np.exp(log_marg - logsumexp(log_marg)))
    return np.asarray(rows)


class GridPrior:
    """Identical discrete per-time prior on fixed nodes (bootstrap only)."""

    def __init__(self, nodes, masses):
        self.nodes = np.asarray(nodes, dtype=float)
        self.masses = np.asarray(masses, dtype=float)

    def sample(self, k, size, rng):
        return self.nodes[categorical(rng, self.masses, size=size)]


class ConstantKernel:
    """Binary kernel whose probabilities ignore the strengths."""

    outcomes = (0, 1)

    def __init__(self, p_one=0.5):
        self.p_one = float(p_one)

    def prob(self, x, v, w):
        shape = np.broadcast(np.asarray(v), np.asarray(w)).shape
        if x == 1:
            return np.full(shape, self.p_one) if shape else self.p_one
        if x == 0:
            return np.full(shape, 1 - self.p_one) if shape else 1 - self.p_one
        raise ValueError(f"outcome {x!r} not in {self.outcomes}")


def energy_statistic(xs, ys):
    """Two-sample energy statistic from pooled pairwise distances."""
    dxy = _pairwise(xs, ys)
    dxx = _pairwise(xs, xs)
    dyy = _pairwise(ys, ys)
    return 2.0 * dxy.mean() - dxx.mean() - dyy.mean()


def _pairwise(a, b):
    a = np.atleast_2d(a)
    b = np.atleast_2d(b)
    diff = a[:, None, :] - b[None, :, :]
    return np.sqrt((diff ** 2).sum(axis=2))


def energy_permutation_pvalue(xs, ys, rng, n_permutations=199):
    """Permutation p-value for the two-sample energy test."""
    xs = np.atleast_2d(xs)
    ys = np.atleast_2d(ys)
    pooled = np.concatenate([xs, ys])
    n = len(xs)
    dist = _pairwise(pooled, pooled)
    observed = _energy_from_matrix(dist, np.arange(len(pooled)) < n)
    count = 0
    for _ in range(n_permutations):
        mask = np.zeros(len(pooled), dtype=bool)
        mask[rng.choice(len(pooled), size=n, replace=False)] = True
        if _energy_from_matrix(dist, mask) >= observed:
            count += 1
    return (1 + count) / (n_permutations + 1)


def _energy_from_matrix(dist, mask):
    nx = int(mask.sum())
    ny = len(mask) - nx
    dxx = dist[np.ix_(mask, mask)].sum() / (nx * nx)
    dyy = dist[np.ix_(~mask, ~mask)].sum() / (ny * ny)
    dxy = dist[np.ix_(mask, ~mask)].sum() / (nx * ny)
    return 2.0 * dxy - dxx - dyy


def sup_tv_against_reference(values, nodes, reference_rows):
    """Sup over time of TV between empirical node frequencies and reference.

    ``values`` has one trajectory per row; every entry must be a grid node.
    """
    values = np.asarray(values)
    sup = 0.0
    for k in range(values.shape[1]):
        counts = np.array([(values[:, k] == node).sum() for node in nodes],
                          dtype=float)
        emp = counts / counts.sum()
        sup = max(sup, 0.5 * float(np.abs(emp - reference_rows[k]).sum()))
    return sup


def random_grid_model(rng, kernel, g_range=(2, 7), lo=-2.0, hi=2.0):
    """A random strictly-increasing grid with Dirichlet masses."""
    g = int(rng.integers(*g_range))
    nodes = np.sort(rng.uniform(lo, hi, g))
    nodes = nodes + np.arange(g) * 1e-6
    masses = rng.dirichlet(np.ones(g))
    return nodes, masses

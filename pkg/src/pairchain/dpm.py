"""Slice-augmented Dirichlet process mixture state and its Gibbs updates.

The strength distribution is modeled as a stick-breaking mixture of
Gaussians: sticks ``theta_j ~ Beta(1, alpha)`` give weights ``w_j = theta_j *
prod_{l<j}(1 - theta_l)``, atoms ``(mu_j, lambda_j)`` are drawn from a
Normal x Gamma base measure, and each item ``i`` carries an allocation
``kappa_i`` plus a slice variable ``u_i`` uniform on ``(0, w_{kappa_i})``.
Conditioning on the slices turns every update into a finite computation: item
``i`` only ever sees the components with ``w_j > u_i``.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import TruncationLimitError
from .mixtures import MixtureDensity

_LOG_2PI = np.log(2.0 * np.pi)


@dataclass
class DpmHyper:
    """Mixture hyperparameters: stick concentration and base measure.

    The base measure draws means from ``N(mean_loc, mean_var)`` and
    precisions from ``Gamma(prec_shape, rate=prec_rate)``.
    """

    alpha_dp: float = 1.0
    mean_loc: float = 0.0
    mean_var: float = 1.0
    prec_shape: float = 1.0
    prec_rate: float = 1.0
    max_components: int = 10_000

    def __post_init__(self):
        if not self.alpha_dp > 0.0:
            raise ValueError("alpha_dp must be positive")
        for name in ("mean_var", "prec_shape", "prec_rate"):
            if not getattr(self, name) > 0.0:
                raise ValueError(f"{name} must be positive")
        if self.max_components < 1:
            raise ValueError("max_components must be >= 1")

    def draw_atoms(self, size, rng):
        means = rng.normal(self.mean_loc, np.sqrt(self.mean_var), size)
        precisions = rng.gamma(self.prec_shape, 1.0 / self.prec_rate, size)
        return means, precisions


@dataclass
class DpmState:
    """Instantiated components plus per-item latent variables.

    Fields
    ------
    sticks, atom_means, atom_precisions : shape (J,)
        The instantiated stick-breaking components.
    alloc : shape (n+1,) int
        Component index of each item.
    slices : shape (n+1,)
        Slice variables, ``0 <= u_i < w_{alloc_i}``.
    states : shape (n+1,)
        The latent strengths ``V``.
    """

    sticks: np.ndarray
    atom_means: np.ndarray
    atom_precisions: np.ndarray
    alloc: np.ndarray
    slices: np.ndarray
    states: np.ndarray

    @property
    def n_components(self):
        return len(self.sticks)

    @property
    def n_items(self):
        return len(self.states)

    @property
    def weights(self):
        return stick_to_weights(self.sticks)


def stick_to_weights(sticks):
    """Stick-breaking weights ``w_j = theta_j * prod_{l<j}(1 - theta_l)``."""
    sticks = np.asarray(sticks, dtype=float)
    if np.any(sticks <= 0.0) or np.any(sticks >= 1.0):
        raise ValueError("sticks must lie in (0, 1)")
    tail = np.concatenate(([1.0], np.cumprod(1.0 - sticks)[:-1]))
    return sticks * tail


def leftover_mass(sticks):
    """Weight not covered by the instantiated sticks."""
    return float(np.prod(1.0 - np.asarray(sticks, dtype=float)))


def log_atom_density(state, values):
    """Log Gaussian density of each value under each atom, shape (n, J)."""
    values = np.asarray(values, dtype=float)
    lam = state.atom_precisions
    z = lam * (values[:, None] - state.atom_means) ** 2
    return 0.5 * (np.log(lam) - _LOG_2PI) - 0.5 * z


def validate_state(state):
    """Check the structural invariants; raises ValueError on violation."""
    w = state.weights
    if np.any(state.atom_precisions <= 0.0):
        raise ValueError("atom precisions must be positive")
    if state.alloc.min() < 0 or state.alloc.max() >= state.n_components:
        raise ValueError("allocation out of range")
    if np.any(state.slices < 0.0) or np.any(state.slices >= w[state.alloc]):
        raise ValueError("slices must satisfy 0 <= u_i < w_{alloc_i}")
    active_counts = (w[None, :] > state.slices[:, None]).sum(axis=1)
    if active_counts.min() == 0:
        raise ValueError("every item needs a nonempty active set")


def sample_allocations(state, rng):
    """Redraw each allocation from its active components.

    Given the slices, item ``i`` picks component ``j`` among
    ``{j : w_j > u_i}`` with probability proportional to the atom density at
    ``V_i``.  The truncation must already be sufficient (every active set
    nonempty); an empty set indicates internal state corruption.
    """
    w = state.weights
    active = w[None, :] > state.slices[:, None]
    if not active.any(axis=1).all():
        raise RuntimeError("empty active set: truncation not sufficient")
    logp = np.where(active, log_atom_density(state, state.states), -np.inf)
    gumbel = rng.gumbel(size=logp.shape)
    state.alloc = np.argmax(logp + gumbel, axis=1)
    return state


def sample_sticks_and_slices(state, hyper, rng):
    """Redraw every stick from its Beta conditional, then refresh slices.

    With ``m_j`` items in component ``j`` the conditional is
    ``Beta(m_j + 1, n_items - sum_{l<=j} m_l + alpha)``; components beyond the
    last occupied one reduce to the ``Beta(1, alpha)`` prior.  Slices are then
    ``u_i ~ U(0, w_{kappa_i})`` under the new weights.
    """
    counts = np.bincount(state.alloc, minlength=state.n_components)
    shape_a = counts + 1.0
    shape_b = state.n_items - np.cumsum(counts) + hyper.alpha_dp
    sticks = rng.beta(shape_a, shape_b)
    state.sticks = np.clip(sticks, 1e-300, 1.0 - 1e-16)
    w = state.weights
    state.slices = rng.uniform(0.0, w[state.alloc])
    return state


def extend_truncation(state, hyper, rng):
    """Append prior components until the sticks cover every slice.

    New sticks are ``Beta(1, alpha)`` and new atoms come from the base
    measure; appending stops once the uninstantiated mass drops below
    ``min_i u_i``, so every component a slice could activate exists.  Raises
    :class:`TruncationLimitError` past ``hyper.max_components``.
    """
    min_u = float(state.slices.min())
    leftover = leftover_mass(state.sticks)
    if leftover < min_u:
        return state
    new_sticks, new_means, new_precs = [], [], []
    while leftover >= min_u:
        if state.n_components + len(new_sticks) >= hyper.max_components:
            raise TruncationLimitError(
                f"truncation would exceed {hyper.max_components} components")
        stick = rng.beta(1.0, hyper.alpha_dp)
        stick = min(max(stick, 1e-300), 1.0 - 1e-16)
        mean, prec = hyper.draw_atoms(None, rng)
        new_sticks.append(stick)
        new_means.append(mean)
        new_precs.append(prec)
        leftover *= 1.0 - stick
    state.sticks = np.concatenate([state.sticks, new_sticks])
    state.atom_means = np.concatenate([state.atom_means, new_means])
    state.atom_precisions = np.concatenate([state.atom_precisions, new_precs])
    return state


def sample_atoms(state, hyper, rng):
    """One conjugate Gibbs pass over the atoms: means given precisions,
    then precisions given the fresh means.

    For component ``j`` with ``m_j`` members summing to ``S_j``:
    ``mu_j | lambda_j ~ N((mean_loc/mean_var + lambda_j S_j) / p, 1/p)`` with
    ``p = 1/mean_var + m_j lambda_j``, and ``lambda_j | mu_j ~
    Gamma(prec_shape + m_j/2, rate=prec_rate + sum_i (V_i - mu_j)^2 / 2)``.
    Empty components reduce to fresh draws from the base measure.
    """
    j = state.n_components
    m = np.bincount(state.alloc, minlength=j).astype(float)
    s = np.bincount(state.alloc, weights=state.states, minlength=j)
    sq = np.bincount(state.alloc, weights=state.states ** 2, minlength=j)

    prior_prec = 1.0 / hyper.mean_var
    post_prec = prior_prec + m * state.atom_precisions
    post_mean = (prior_prec * hyper.mean_loc
                 + state.atom_precisions * s) / post_prec
    state.atom_means = rng.normal(post_mean, 1.0 / np.sqrt(post_prec))

    resid = sq - 2.0 * state.atom_means * s + m * state.atom_means ** 2
    resid = np.maximum(resid, 0.0)
    shape = hyper.prec_shape + 0.5 * m
    rate = hyper.prec_rate + 0.5 * resid
    state.atom_precisions = rng.gamma(shape, 1.0 / rate)
    return state


def mixture_snapshot(state):
    """The instantiated mixture with weights normalized over components."""
    w = state.weights
    return MixtureDensity(w / w.sum(), state.atom_means.copy(),
                          1.0 / state.atom_precisions)

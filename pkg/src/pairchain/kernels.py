"""Outcome kernels for paired comparisons.

A kernel maps a pair of strengths ``(v, w)`` to a probability distribution
over a finite outcome alphabet.  Two families are provided:

* :class:`BradleyTerry` -- binary outcomes, strengths on ``(0, inf)``,
  ``P(first wins) = v / (v + w)``.
* :class:`HomeTies` -- win/tie/loss outcomes with a home-advantage factor
  ``alpha`` and a tie factor ``theta``, strengths on the real line entering
  through their exponentials.

:class:`ExpStrengths` adapts a positive-strength kernel such as
:class:`BradleyTerry` to real-valued strengths via the exponential map, which
is the form used by the mixture sampler downstream.
"""

from __future__ import annotations

import math

import numpy as np
from scipy.special import expit


class BradleyTerry:
    """Binary comparison kernel on positive strengths.

    ``prob(1, v, w) = v / (v + w)`` is the probability that the first item
    wins; ``prob(0, v, w)`` is the complement.
    """

    outcomes = (0, 1)

    def prob(self, x, v, w):
        """Probability of outcome ``x`` for strength pair ``(v, w)``.

        Parameters
        ----------
        x : int
            Outcome, 1 if the first item wins, 0 otherwise.
        v, w : float or ndarray
            Strengths, strictly positive.  Broadcast against each other.

        Returns
        -------
        float or ndarray
        """
        v = np.asarray(v, dtype=float)
        w = np.asarray(w, dtype=float)
        if np.any(v <= 0.0) or np.any(w <= 0.0):
            raise ValueError("Bradley-Terry strengths must be positive")
        if x == 1:
            return v / (v + w)
        if x == 0:
            return w / (v + w)
        raise ValueError(f"outcome {x!r} not in {self.outcomes}")

    def __repr__(self):
        return "BradleyTerry()"


class HomeTies:
    """Win/tie/loss kernel with home advantage and tie propensity.

    The first strength is the home side.  With ``d = v - w``,

    * ``prob(+1) = alpha*e^d / (alpha*e^d + theta)``  (home win)
    * ``prob(-1) = 1 / (theta*alpha*e^d + 1)``        (away win)
    * ``prob(0)  = (theta^2 - 1) * prob(+1) * prob(-1)``  (tie)

    The three probabilities sum to one; ``theta = 1`` makes ties impossible.
    Depending on the strengths only through ``d`` keeps the kernel invariant
    under a common shift of both strengths.

    Parameters
    ----------
    alpha : float
        Home-advantage factor, > 0.
    theta : float
        Tie factor, >= 1.
    """

    outcomes = (-1, 0, 1)

    def __init__(self, alpha=1.0, theta=2.0):
        if not alpha > 0.0:
            raise ValueError("alpha must be positive")
        if not theta >= 1.0:
            raise ValueError("theta must be >= 1")
        self.alpha = float(alpha)
        self.theta = float(theta)
        self._home_shift = math.log(alpha) - math.log(theta)
        self._away_shift = math.log(alpha) + math.log(theta)

    def prob(self, x, v, w):
        """Probability of outcome ``x`` for the home/away pair ``(v, w)``."""
        d = np.asarray(v, dtype=float) - np.asarray(w, dtype=float)
        if x == 1:
            return expit(d + self._home_shift)
        if x == -1:
            return expit(-d - self._away_shift)
        if x == 0:
            k_home = expit(d + self._home_shift)
            k_away = expit(-d - self._away_shift)
            return (self.theta ** 2 - 1.0) * k_home * k_away
        raise ValueError(f"outcome {x!r} not in {self.outcomes}")

    def __repr__(self):
        return f"HomeTies(alpha={self.alpha}, theta={self.theta})"


class ExpStrengths:
    """Adapter exposing a positive-strength kernel on real strengths.

    ``prob(x, a, b)`` evaluates the base kernel at ``(e^a, e^b)``, so a
    real-valued strength distribution (a Gaussian mixture, say) can drive a
    kernel whose native domain is ``(0, inf)``.
    """

    def __init__(self, base):
        self.base = base
        self.outcomes = base.outcomes

    def prob(self, x, v, w):
        v = np.asarray(v, dtype=float)
        w = np.asarray(w, dtype=float)
        return self.base.prob(x, np.exp(v), np.exp(w))

    def __repr__(self):
        return f"ExpStrengths({self.base!r})"


def kernel_prob(kernel, x, v, w):
    """Evaluate ``kernel`` at outcome ``x`` and strength pair ``(v, w)``."""
    return kernel.prob(x, v, w)


def outcome_probs(kernel, v, w):
    """Stack the probabilities of every outcome, in ``kernel.outcomes`` order.

    Returns an array of shape ``(len(kernel.outcomes),) + broadcast(v, w)``.
    """
    return np.stack([np.asarray(kernel.prob(x, v, w), dtype=float)
                     for x in kernel.outcomes])


def kernel_lower_bound(kernel, v_lo, v_hi, grid_points=201):
    """Lower bound on all outcome probabilities over a strength box.

    Minimizes ``kernel.prob(x, v, w)`` over ``x`` in the outcome alphabet and
    ``(v, w)`` on a ``grid_points x grid_points`` grid of ``[v_lo, v_hi]^2``.
    For :class:`BradleyTerry` the probabilities are monotone in each strength,
    so the corner value ``v_lo / (v_lo + v_hi)`` is exact and is folded in.
    A degenerate box ``v_lo == v_hi`` is allowed.

    Returns
    -------
    float
        The minimum probability; this is the minorization constant of the
        comparison chain restricted to strengths in the box.
    """
    v_lo = float(v_lo)
    v_hi = float(v_hi)
    if not v_lo <= v_hi:
        raise ValueError("need v_lo <= v_hi")
    nodes = np.linspace(v_lo, v_hi, 1 if v_lo == v_hi else grid_points)
    vv, ww = np.meshgrid(nodes, nodes, indexing="ij")
    bound = min(float(np.min(kernel.prob(x, vv, ww))) for x in kernel.outcomes)
    if isinstance(kernel, BradleyTerry):
        corner = v_lo / (v_lo + v_hi)
        bound = min(bound, corner)
    return bound

"""Finite Gaussian mixtures used as strength distributions."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.special import logsumexp

from .util import as_generator

_LOG_2PI = np.log(2.0 * np.pi)


@dataclass
class MixtureDensity:
    """A finite Gaussian mixture on the real line.

    Parameters
    ----------
    weights : ndarray
        Component weights, nonnegative, summing to one within 1e-12.
    means : ndarray
        Component means.
    variances : ndarray
        Component variances, strictly positive.
    """

    weights: np.ndarray
    means: np.ndarray
    variances: np.ndarray

    def __post_init__(self):
        self.weights = np.atleast_1d(np.asarray(self.weights, dtype=float))
        self.means = np.atleast_1d(np.asarray(self.means, dtype=float))
        self.variances = np.atleast_1d(np.asarray(self.variances, dtype=float))
        if not self.weights.shape == self.means.shape == self.variances.shape:
            raise ValueError("weights, means, variances must share a shape")
        if np.any(self.weights < 0.0):
            raise ValueError("weights must be nonnegative")
        if abs(self.weights.sum() - 1.0) > 1e-12:
            raise ValueError("weights must sum to one")
        if np.any(self.variances <= 0.0):
            raise ValueError("variances must be positive")

    def logpdf(self, v):
        v = np.asarray(v, dtype=float)
        z = (v[..., None] - self.means) ** 2 / self.variances
        comp = -0.5 * (z + np.log(self.variances) + _LOG_2PI)
        with np.errstate(divide="ignore"):
            logw = np.log(self.weights)
        return logsumexp(comp + logw, axis=-1)

    def pdf(self, v):
        """Mixture density evaluated at ``v`` (scalar or array)."""
        return np.exp(self.logpdf(v))

    def mean(self):
        return float(np.dot(self.weights, self.means))

    def var(self):
        second = np.dot(self.weights, self.variances + self.means ** 2)
        return float(second - self.mean() ** 2)

    def std(self):
        return float(np.sqrt(self.var()))

    def sample(self, size, seed):
        """Draw ``size`` variates; ``seed`` is an int or a Generator."""
        rng = as_generator(seed)
        comp = rng.choice(len(self.weights), size=size, p=self.weights)
        return rng.normal(self.means[comp], np.sqrt(self.variances[comp]))

    def shifted(self, c):
        """The same mixture translated by ``c``."""
        return MixtureDensity(self.weights.copy(), self.means + c,
                              self.variances.copy())


def standard_normal_mixture():
    """Single-component N(0, 1) mixture, the default sampler start."""
    return MixtureDensity(np.array([1.0]), np.array([0.0]), np.array([1.0]))

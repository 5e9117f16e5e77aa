"""Simulation of comparison chains and round-robin championships.

The chain model: strengths ``V_1, ..., V_{n+1}`` are drawn i.i.d. from a
strength distribution, and outcome ``X_i`` compares ``V_i`` against
``V_{i+1}`` through an outcome kernel.  Only the outcomes are observed.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .kernels import outcome_probs
from .util import as_generator, categorical


@dataclass
class HiddenChain:
    """One simulated chain: ``n+1`` strengths and the ``n`` outcomes."""

    strengths: np.ndarray
    outcomes: np.ndarray

    def __post_init__(self):
        self.strengths = np.asarray(self.strengths, dtype=float)
        self.outcomes = np.asarray(self.outcomes, dtype=int)
        if len(self.strengths) != len(self.outcomes) + 1:
            raise ValueError("need one more strength than outcomes")


@dataclass
class ChampionshipResult:
    """A played double round robin: schedule, match outcomes, final points."""

    strengths: np.ndarray
    schedule: np.ndarray
    outcomes: np.ndarray
    points: np.ndarray


def simulate_hidden_chain(pi, kernel, n, seed):
    """Simulate ``n`` comparisons along a chain of fresh strengths.

    Parameters
    ----------
    pi : MixtureDensity
        Strength distribution on the kernel's strength domain.
    kernel : outcome kernel
        Kernel with vectorized ``prob`` and an ``outcomes`` alphabet.
    n : int
        Number of comparisons, >= 1.
    seed : int or Generator

    Returns
    -------
    HiddenChain
    """
    if n < 1:
        raise ValueError("n must be >= 1")
    rng = as_generator(seed)
    strengths = pi.sample(n + 1, rng)
    probs = outcome_probs(kernel, strengths[:-1], strengths[1:]).T
    idx = categorical(rng, probs)
    alphabet = np.asarray(kernel.outcomes)
    return HiddenChain(strengths, alphabet[idx])


def round_robin_schedule(n_teams):
    """Ordered (home, away) pairs of a double round robin.

    Every ordered pair of distinct teams meets once, so each pair of teams
    plays twice with home advantage alternating: ``n_teams * (n_teams - 1)``
    matches in total.
    """
    if n_teams < 2:
        raise ValueError("need at least two teams")
    pairs = [(i, j) for i in range(n_teams) for j in range(n_teams) if i != j]
    return np.asarray(pairs, dtype=int)


def simulate_championship(strengths, kernel, seed, scoring=(3, 1, 0)):
    """Play a double round robin among teams with the given strengths.

    Parameters
    ----------
    strengths : ndarray
        One strength per team, on the kernel's strength domain.
    kernel : outcome kernel
        The home team is the first kernel argument.  Outcome ``1`` is a home
        win; in a three-letter alphabet ``0`` is a tie and ``-1`` an away
        win, in a binary alphabet ``0`` is an away win.
    seed : int or Generator
    scoring : tuple
        Points for (win, tie, loss).

    Returns
    -------
    ChampionshipResult
    """
    strengths = np.asarray(strengths, dtype=float)
    rng = as_generator(seed)
    schedule = round_robin_schedule(len(strengths))
    home, away = schedule[:, 0], schedule[:, 1]
    probs = outcome_probs(kernel, strengths[home], strengths[away]).T
    idx = categorical(rng, probs)
    alphabet = np.asarray(kernel.outcomes)
    outcomes = alphabet[idx]

    win_pts, tie_pts, loss_pts = scoring
    points = np.zeros(len(strengths), dtype=int)
    if len(alphabet) == 3:
        home_pts = np.where(outcomes == 1, win_pts,
                            np.where(outcomes == 0, tie_pts, loss_pts))
        away_pts = np.where(outcomes == 1, loss_pts,
                            np.where(outcomes == 0, tie_pts, win_pts))
    else:
        home_pts = np.where(outcomes == 1, win_pts, loss_pts)
        away_pts = np.where(outcomes == 1, loss_pts, win_pts)
    np.add.at(points, home, home_pts)
    np.add.at(points, away, away_pts)
    return ChampionshipResult(strengths, schedule, outcomes, points)

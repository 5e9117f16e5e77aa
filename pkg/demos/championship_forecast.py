"""Forecast a league table from an estimated strength distribution.

Once the strength law has been estimated, league questions become
simulations: draw team strengths from the estimated density, play a double
round robin under the same outcome kernel, and read off the distribution of
points per final rank (3 for a win, 1 for a tie, 0 for a loss).
"""

import numpy as np

from pairchain import (
    HomeTies,
    MixtureDensity,
    SamplerConfig,
    density_estimate,
    predict_championships,
    run_chain,
    simulate_hidden_chain,
)


def main():
    truth = MixtureDensity([0.5, 0.5], [-0.8, 0.8], [0.3, 0.3])
    kernel = HomeTies(alpha=1.4, theta=2.0)
    chain = simulate_hidden_chain(truth, kernel, n=300, seed=5)

    config = SamplerConfig(n_sweeps=500, burn_in=350, m_particles=100, seed=2)
    samples = run_chain(chain.outcomes, kernel, config)
    nodes = np.linspace(-6.0, 6.0, 481)
    density = density_estimate(samples, nodes)
    print(f"density estimated from {len(samples)} retained sweeps")

    n_teams, n_replicates = 10, 400
    table = predict_championships(nodes, density, kernel, n_teams,
                                  n_replicates, seed=9)
    matches = n_teams * (n_teams - 1)
    print(f"simulated {n_replicates} championships of {n_teams} teams "
          f"({matches} matches each)")

    print(f"\n{'rank':>4} {'median':>7} {'10%':>6} {'90%':>6}")
    for rank in range(n_teams):
        pts = table[:, rank]
        print(f"{rank + 1:>4} {np.median(pts):>7.0f} "
              f"{np.percentile(pts, 10):>6.0f} "
              f"{np.percentile(pts, 90):>6.0f}")

    champion_margin = table[:, 0] - table[:, 1]
    print(f"\nchampion wins by a median of {np.median(champion_margin):.0f} "
          f"points (> 5 points in {(champion_margin > 5).mean():.0%} "
          f"of seasons)")


if __name__ == "__main__":
    main()

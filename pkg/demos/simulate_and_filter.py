"""Simulate a comparison chain and watch the predictive filter forget.

A sequence of items with hidden strengths V_1, V_2, ... plays a chain of
pairwise comparisons: outcome i depends only on (V_i, V_{i+1}).  When the
strength law lives on a finite grid the predictive filter is exact, so we
can measure how quickly it forgets a deliberately wrong initial law and
compare the gap with the geometric bound (1 - nu)^p, where nu is the kernel
lower bound over the grid hull.
"""

import numpy as np

from pairchain import (
    BradleyTerry,
    GridModel,
    MixtureDensity,
    filter_path,
    forgetting_gap,
    simulate_hidden_chain,
    truncation_gap,
)


def main():
    # positive strengths, win probability v / (v + w); a compact strength
    # range keeps the kernel lower bound nu well away from zero
    truth = MixtureDensity([0.5, 0.5], [1.8, 2.6], [0.05, 0.05])
    kernel = BradleyTerry()
    chain = simulate_hidden_chain(truth, kernel, n=200, seed=7)
    wins = (chain.outcomes == 1).mean()
    print(f"simulated 200 outcomes: {wins:.0%} first-item wins")

    grid = GridModel.from_mixture(truth, kernel, n_nodes=256, span=3.0)
    nu = grid.lower_bound()
    print(f"kernel lower bound over the grid hull: nu = {nu:.4f}")

    probs, increments = filter_path(grid, chain.outcomes)
    print(f"exact log likelihood: {increments.sum():.2f}")
    print(f"final predictive mean: {probs[-1] @ grid.nodes:+.3f}")

    # start a second filter from a point mass on the leftmost node and watch
    # the two predictives merge at the geometric rate
    wrong = np.zeros(grid.n_nodes)
    wrong[0] = 1.0
    print("\nforgetting the initial law:")
    print(f"{'p':>4} {'tv gap':>12} {'(1-nu)^p':>12}")
    for p in (1, 2, 5, 10, 20):
        gap, bound = forgetting_gap(grid, chain.outcomes[:p], grid.masses,
                                    wrong)
        print(f"{p:>4} {gap:>12.3e} {bound:>12.3e}")

    # dropping early outcomes barely moves a late predictive probability
    print("\ntruncating the conditioning window (ell dropped outcomes):")
    print(f"{'i':>4} {'ell':>4} {'gap':>12} {'bound':>12}")
    for i, ell in ((2, 5), (5, 5), (10, 20), (20, 50)):
        gap, bound = truncation_gap(grid, chain.outcomes, i, ell)
        print(f"{i:>4} {ell:>4} {gap:>12.3e} {bound:>12.3e}")


if __name__ == "__main__":
    main()

"""Measure empirical tail probabilities against concentration bounds.

For a Markov chain whose kernel is minorized by nu, additive statistics with
bounded differences concentrate at a rate governed by the Dobrushin
coefficients of the chain.  This script builds chains with known nu, checks
the geometric decay of the Dobrushin sequence, and compares empirical tails
of an occupation frequency against the exact variance-proxy bound and its
closed-form corollary.
"""

import numpy as np

from pairchain import (
    MinorizedChain,
    additive_indicator_spec,
    dobrushin_bound,
    dobrushin_sequence,
    empirical_tail,
    indicator_mean,
)


def main():
    n = 100
    rng = np.random.default_rng(12)
    t_grid = np.array([0.02, 0.05, 0.1, 0.15, 0.2])

    for nu in (0.2, 0.5, 1.0):
        chain = MinorizedChain.build(nu, n_states=3, seed=8)
        deltas = dobrushin_sequence(chain, 6)
        geo = [dobrushin_bound(nu, q) for q in range(1, 7)]
        print(f"\nnu = {nu}")
        print("  Dobrushin exact   :", " ".join(f"{d:.3f}" for d in deltas))
        print("  geometric bound   :", " ".join(f"{g:.3f}" for g in geo))

        spec = additive_indicator_spec(n, target=0)
        mean_f = indicator_mean(chain, n, target=0)
        tails = empirical_tail(chain, spec, t_grid, n_replicates=50_000,
                               rng=rng, mean_f=mean_f)
        print(f"  occupation frequency of state 0: Ef = {mean_f:.3f}, "
              f"variance proxy D_n = {tails['dn']:.5f}")
        print(f"  {'t':>6} {'empirical':>10} {'theorem':>9} {'corollary':>10}")
        for j, t in enumerate(t_grid):
            print(f"  {t:>6.2f} {tails['empirical'][j]:>10.4f} "
                  f"{tails['theorem'][j]:>9.4f} "
                  f"{tails['corollary'][j]:>10.4f}")

    print("\nat nu = 1 the chain is an iid sequence and the variance proxy "
          "collapses to\nthe classical bounded-difference value "
          "sum(gamma^2); smaller nu inflates the\nproxy through the "
          "geometric tail of Dobrushin coefficients.")


if __name__ == "__main__":
    main()

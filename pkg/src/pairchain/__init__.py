"""Bayesian nonparametric strength estimation for pairwise-comparison chains.

A sequence of paired comparisons is modeled by hidden strengths drawn i.i.d.
from an unknown distribution, each observed outcome comparing consecutive
strengths through a win/tie/loss kernel.  The package simulates the model,
computes exact reference answers on finite strength grids, and estimates the
strength distribution with a slice-augmented Dirichlet process mixture whose
trajectory move is a particle backward-simulation smoother.  A companion
module checks Hoeffding-type tail bounds for Lipschitz statistics of the
minorized comparison chain.

Quick start::

    import numpy as np
    from pairchain import (DpmHyper, HomeTies, MixtureDensity, SamplerConfig,
                           simulate_hidden_chain, run_chain, density_estimate)

    truth = MixtureDensity([0.6, 0.4], [-0.45, 0.675], [0.30, 0.42])
    kernel = HomeTies(alpha=1.3, theta=2.0)
    chain = simulate_hidden_chain(truth, kernel, n=500, seed=7)
    samples = run_chain(chain.outcomes, kernel,
                        SamplerConfig(n_sweeps=1500, burn_in=1000,
                                      hyper=DpmHyper(mean_var=0.2), seed=7))
    nodes = np.linspace(-6, 6, 512)
    estimate = density_estimate(samples, nodes)
"""

from .concentration import (LipschitzSpec, MinorizedChain,
                            additive_indicator_spec, chain_marginals,
                            check_bounded_differences, corollary_bound,
                            dn_bound, dobrushin_bound, dobrushin_coefficient,
                            dobrushin_sequence, empirical_tail,
                            indicator_mean, simulate_chain, theorem_bound)
from .dpm import (DpmHyper, DpmState, extend_truncation, leftover_mass,
                  mixture_snapshot, sample_allocations, sample_atoms,
                  sample_sticks_and_slices, stick_to_weights, validate_state)
from .errors import DegeneracyError, TruncationLimitError
from .gibbs import (PosteriorSample, SamplerConfig, align_translation,
                    density_estimate, gibbs_sweep, init_state, l1_distance,
                    predict_championships, run_chain, sample_from_density,
                    slice_prior)
from .gridref import (FilterState, GridModel, exact_loglik, filter_path,
                      filter_step, forgetting_gap, smoothing_marginals,
                      truncation_gap)
from .kernels import (BradleyTerry, ExpStrengths, HomeTies, kernel_lower_bound,
                      kernel_prob, outcome_probs)
from .mixtures import MixtureDensity, standard_normal_mixture
from .simulate import (ChampionshipResult, HiddenChain, round_robin_schedule,
                       simulate_championship, simulate_hidden_chain)
from .smc import (ParticleCloud, SliceMixture, StationaryPrior, apf_init,
                  apf_step, backward_weights, ffbsi_linear, ffbsi_quadratic,
                  forward_filter)

__version__ = "0.1.0"

__all__ = [
    "BradleyTerry", "ChampionshipResult", "DegeneracyError", "DpmHyper",
    "DpmState", "ExpStrengths", "FilterState", "GridModel", "HiddenChain",
    "HomeTies", "LipschitzSpec", "MinorizedChain", "MixtureDensity",
    "ParticleCloud", "PosteriorSample", "SamplerConfig", "SliceMixture",
    "StationaryPrior", "TruncationLimitError", "additive_indicator_spec",
    "align_translation", "apf_init", "apf_step", "backward_weights",
    "chain_marginals", "check_bounded_differences", "corollary_bound",
    "density_estimate", "dn_bound", "dobrushin_bound",
    "dobrushin_coefficient", "dobrushin_sequence", "empirical_tail",
    "exact_loglik", "extend_truncation", "ffbsi_linear", "ffbsi_quadratic",
    "filter_path", "filter_step", "forgetting_gap", "forward_filter",
    "gibbs_sweep", "indicator_mean", "init_state", "kernel_lower_bound",
    "kernel_prob", "l1_distance", "leftover_mass", "mixture_snapshot",
    "outcome_probs", "predict_championships", "round_robin_schedule",
    "run_chain", "sample_allocations", "sample_atoms", "sample_from_density",
    "sample_sticks_and_slices", "simulate_chain", "simulate_championship",
    "simulate_hidden_chain", "slice_prior", "smoothing_marginals",
    "standard_normal_mixture", "stick_to_weights", "theorem_bound",
    "truncation_gap", "validate_state",
]

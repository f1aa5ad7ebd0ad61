"""Shuffle-model differential privacy with personalized local budgets.

Central-guarantee accounting for shuffled locally-randomized reports, exact
small-instance hypothesis-testing oracles validating the Gaussian bound, and
private mean / frequency / SGD pipelines built on the same accountant.
"""

from .accountant import (AmplificationReport, Cohort, NoAmplificationError,
                         amplify, amplify_composed, central_budget,
                         contribution_weight, sample_budgets)
from .counts import (CountDistribution, TrinomialComponent,
                     convolve_components, count_distribution,
                     neyman_pearson_curve, neyman_pearson_curve_from_pmfs,
                     symmetrized_curve)
from .data import Dataset, load_dense_matrix, load_idx, make_blobs, save_dense_matrix
from .gaussian_approx import (DiscrepancyReport, DominanceReport,
                              bivariate_normal_cdf, gaussian_cell_mass,
                              gaussian_dominance_report, gaussian_pair_mu,
                              gaussian_pair_mu_generic,
                              multinomial_gaussian_discrepancy,
                              trinomial_moments, tv_multinomial_vs_gaussian)
from .mechanisms import (NonIdentifiableError, ShuffledBatch, freq_estimate,
                         laplace_randomize, laplace_scale, mean_estimate,
                         rr_randomize, shuffle)
from .noise import NoiseSource
from .sgd import (TrainConfig, TrainReport, clip_gradient, gradient_check,
                  make_model, noise_scale, train)
from .tradeoff import (BracketError, EmpiricalCurve, EpsDeltaCurve, GdpCurve,
                       GdpParam, PrivacyBudget, compose_gdp, compose_tradeoff,
                       dp_epsilon_for_delta, epsdelta_tradeoff,
                       gdp_delta_grid_supremum, gdp_to_dp, gdp_tradeoff,
                       group_gdp, normal_cdf, normal_quantile)

__version__ = "0.1.0"

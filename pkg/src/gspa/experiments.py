"""Reproducible experiment drivers producing CSV-ready tables.

Every driver is a pure function of its arguments plus an integer seed; trial
seeds are derived from (seed, grid point, trial) so re-runs are byte-stable
and grid points can be computed independently.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .accountant import Cohort, amplify, central_budget, sample_budgets
from .counts import TrinomialComponent
from .gaussian_approx import (gaussian_dominance_report,
                              multinomial_gaussian_discrepancy)
from .data import make_blobs
from .mechanisms import freq_estimate, mean_estimate
from .noise import NoiseSource
from .sgd import TrainConfig, train
from .tradeoff import PrivacyBudget

__all__ = [
    "ResultTable",
    "account_rows",
    "account_sweep",
    "freq_experiment",
    "largest_remainder_counts",
    "mean_experiment",
    "oracle_check_sweep",
    "sgd_compare",
    "three_group_cohort",
    "tv_sweep",
]


@dataclass(frozen=True)
class ResultTable:
    """Column names plus homogeneous result rows."""

    columns: tuple
    rows: tuple

    def column(self, name: str) -> list:
        idx = self.columns.index(name)
        return [row[idx] for row in self.rows]


def largest_remainder_counts(n: int, fractions) -> list[int]:
    """Integer group sizes matching the fractions exactly in total.

    Floors each target, then hands the leftover units to the largest
    fractional remainders (ties broken by group order).
    """
    fractions = [float(f) for f in fractions]
    if any(f < 0.0 for f in fractions) or abs(math.fsum(fractions) - 1.0) > 1e-9:
        raise ValueError(f"fractions must be non-negative and sum to 1, got {fractions}")
    targets = [n * f for f in fractions]
    counts = [int(math.floor(t)) for t in targets]
    leftover = n - sum(counts)
    order = sorted(range(len(fractions)),
                   key=lambda i: (counts[i] - targets[i], i))
    for i in order[:leftover]:
        counts[i] += 1
    return counts


def three_group_cohort(n: int, f_c: float, f_l: float = 0.09,
                       eps_conservative: float = 0.1, eps_moderate: float = 0.5,
                       eps_liberal: float = 1.0) -> Cohort:
    """Cohort split into conservative / moderate / liberal budget groups.

    The moderate fraction absorbs the remainder 1 - f_c - f_l; group sizes
    use largest-remainder rounding and the budgets are laid out block-wise.
    """
    f_m = 1.0 - f_c - f_l
    counts = largest_remainder_counts(n, (f_c, f_m, f_l))
    epsilons = np.repeat([eps_conservative, eps_moderate, eps_liberal], counts)
    return Cohort.from_epsilons(epsilons)


def account_rows(label: str, cohort: Cohort, target_deltas, seed=0) -> ResultTable:
    """Accounting summary of one explicit cohort at the requested deltas."""
    report = amplify(cohort)
    rows = []
    for delta in target_deltas:
        central = central_budget(cohort, delta)
        rows.append(("account", label, cohort.n, report.mu.mu, report.denominator,
                     central.epsilon, delta,
                     float(max(b.epsilon for b in cohort.budgets)), seed))
    return ResultTable(
        columns=("experiment", "distribution", "n", "mu", "denominator",
                 "central_epsilon", "target_delta", "max_local_epsilon", "seed"),
        rows=tuple(rows))


def account_sweep(distributions, n_values, target_delta: float = 1e-4,
                  seed: int = 0, repeat_first: int | None = 1000) -> ResultTable:
    """Central guarantees of the named budget distributions across cohort sizes."""
    rows = []
    columns = None
    for di, name in enumerate(distributions):
        for n in n_values:
            cohort = sample_budgets(name, int(n), [seed, di],
                                    repeat_first=repeat_first)
            table = account_rows(name, cohort, (target_delta,), seed=seed)
            columns = table.columns
            rows.extend(table.rows)
    return ResultTable(columns=columns, rows=tuple(rows))


def _mean_ci(values) -> tuple[float, float]:
    values = np.asarray(values, dtype=float)
    half_width = 1.96 * values.std(ddof=1) / math.sqrt(values.size) \
        if values.size > 1 else 0.0
    return float(values.mean()), float(half_width)


_ESTIMATION_COLUMNS = ("experiment", "sweep", "f_c", "eps_conservative", "n",
                       "trials", "mae", "mae_ci95", "mean_z", "bias", "mu", "seed")


def _sweep_points(f_c_grid, eps_c_grid, f_c_default, eps_c_default):
    if f_c_grid is None:
        f_c_grid = np.linspace(0.01, 0.5, 8)
    if eps_c_grid is None:
        eps_c_grid = np.linspace(0.05, 0.5, 8)
    points = [("f_c", float(f), eps_c_default) for f in f_c_grid]
    points += [("eps_conservative", f_c_default, float(e)) for e in eps_c_grid]
    return points


def mean_experiment(n: int = 10_000, trials: int = 1000, f_c_grid=None,
                    eps_c_grid=None, f_c_default: float = 0.54,
                    eps_c_default: float = 0.1, f_l: float = 0.09,
                    eps_moderate: float = 0.5, eps_liberal: float = 1.0,
                    clip=(20.0, 80.0), data_mean: float = 50.0,
                    data_sigma: float = 10.0, seed: int = 0,
                    zero_noise: bool = False) -> ResultTable:
    """MAE of the shuffled private mean across f_c and eps_conservative grids.

    Each trial redraws the data from N(data_mean, data_sigma^2); the ground
    truth is the mean of the clipped data, which the estimator is unbiased
    for.  Reports the trial-mean MAE with a 95% CI half-width per grid point.
    """
    rows = []
    for pid, (sweep, f_c, eps_c) in enumerate(
            _sweep_points(f_c_grid, eps_c_grid, f_c_default, eps_c_default)):
        cohort = three_group_cohort(n, f_c, f_l, eps_c, eps_moderate, eps_liberal)
        mu = amplify(cohort).mu.mu
        errors = []
        estimates = []
        for t in range(trials):
            rng = np.random.default_rng([seed, pid, t])
            data = rng.normal(data_mean, data_sigma, size=n)
            noise = NoiseSource.zero() if zero_noise \
                else NoiseSource.seeded([seed, pid, t, 1])
            z, _ = mean_estimate(data, cohort, clip, noise, [seed, pid, t, 2])
            truth = float(np.mean(np.clip(data, clip[0], clip[1])))
            errors.append(abs(z - truth))
            estimates.append(z - truth)
        mae, ci = _mean_ci(errors)
        mean_err = float(np.mean(estimates))
        rows.append(("mean", sweep, f_c, eps_c, n, trials, mae, ci,
                     mean_err, abs(mean_err), mu, seed))
    return ResultTable(columns=_ESTIMATION_COLUMNS, rows=tuple(rows))


def freq_experiment(n: int = 10_000, trials: int = 1000, density: float = 0.7,
                    f_c_grid=None, eps_c_grid=None, f_c_default: float = 0.54,
                    eps_c_default: float = 0.1, f_l: float = 0.09,
                    eps_moderate: float = 0.5, eps_liberal: float = 1.0,
                    seed: int = 0) -> ResultTable:
    """MAE and bias of the shuffled private frequency across the same grids.

    The data holds an exact count round(density * n) of ones, so the target
    frequency is fixed and the estimator's unbiasedness shows as a bias
    column compatible with its standard error.  Each trial re-pairs bits and
    budgets uniformly at random; the debiasing is only unbiased when the data
    carries no information about who holds which budget.
    """
    ones = int(round(density * n))
    bits = np.concatenate([np.ones(ones, dtype=int), np.zeros(n - ones, dtype=int)])
    truth = ones / n
    rows = []
    for pid, (sweep, f_c, eps_c) in enumerate(
            _sweep_points(f_c_grid, eps_c_grid, f_c_default, eps_c_default)):
        cohort = three_group_cohort(n, f_c, f_l, eps_c, eps_moderate, eps_liberal)
        mu = amplify(cohort).mu.mu
        estimates = []
        for t in range(trials):
            rng = np.random.default_rng([seed, pid, t])
            noise = NoiseSource.seeded([seed, pid, t, 1])
            z, _ = freq_estimate(rng.permutation(bits), cohort, noise,
                                 [seed, pid, t, 2])
            estimates.append(z)
        mae, ci = _mean_ci([abs(z - truth) for z in estimates])
        mean_z = float(np.mean(estimates))
        rows.append(("freq", sweep, f_c, eps_c, n, trials, mae, ci,
                     mean_z, abs(mean_z - truth), mu, seed))
    return ResultTable(columns=_ESTIMATION_COLUMNS, rows=tuple(rows))


def oracle_check_sweep(n_values, eps_values, delta: float = 0.0,
                       alpha_step: float = 1e-3, max_n: int = 200) -> ResultTable:
    """Dominance reports for uniform cohorts over an (n, epsilon) grid."""
    alphas = np.linspace(0.0, 1.0, round(1.0 / alpha_step) + 1)
    rows = []
    for n in n_values:
        for eps in eps_values:
            cohort = Cohort.uniform(int(n), float(eps), delta)
            report = gaussian_dominance_report(cohort, alphas=alphas, max_n=max_n)
            rows.append(("oracle-check", int(n), float(eps), delta, report.mu,
                         report.tau_half_l1, report.tau_sup_cell,
                         report.min_slack, report.argmin_alpha))
    return ResultTable(
        columns=("experiment", "n", "eps0", "delta", "mu", "tau_half_l1",
                 "tau_sup_cell", "min_slack", "argmin_alpha"),
        rows=tuple(rows))


def tv_sweep(m_values, eps0: float = 0.5, delta0: float = 0.0) -> ResultTable:
    """Exact-vs-Gaussian discrepancies for m identical background trials."""
    budget = PrivacyBudget(eps0, delta0)
    component = TrinomialComponent.background(budget)
    rows = []
    for m in m_values:
        disc = multinomial_gaussian_discrepancy([component] * int(m))
        rows.append(("tv-sweep", int(m), eps0, disc.sup_cell, disc.half_l1,
                     disc.sup_cell * math.sqrt(m), disc.half_l1 * math.sqrt(m)))
    return ResultTable(
        columns=("experiment", "m", "eps0", "sup_cell", "half_l1",
                 "sup_cell_sqrt_m", "half_l1_sqrt_m"),
        rows=tuple(rows))


def sgd_compare(distributions=("constant", "unif2", "unif3"), seeds=(0, 1, 2, 3, 4),
                *, clients: int = 20, shard_size: int = 50, epochs: int = 10,
                dim: int = 20, separation: float = 6.0, n_test: int = 400,
                delta_local: float = 1e-5, clip_bound: float = 2.0,
                step_size: float = 0.05, model: str = "linear-softmax",
                hidden_units: int = 32, target_delta: float = 1e-4,
                zero_noise: bool = False) -> ResultTable:
    """Per-epoch accuracy of private SGD under different budget distributions.

    The dataset and every training random stream are shared across
    distributions for each seed, so accuracy differences isolate the noise
    levels implied by the budgets.
    """
    samples = clients * shard_size
    rows = []
    for seed in seeds:
        dataset = make_blobs(samples, n_test, dim=dim, separation=separation,
                             seed=[seed, 101])
        for di, name in enumerate(distributions):
            cohort = sample_budgets(name, clients, [seed, 202, di],
                                    delta=delta_local)
            config = TrainConfig(cohort=cohort, epochs=epochs, clients=clients,
                                 samples=samples, clip_bound=clip_bound,
                                 step_size=step_size, model=model,
                                 hidden_units=hidden_units, seed=seed,
                                 target_delta=target_delta)
            noise = NoiseSource.zero() if zero_noise else None
            report = train(dataset, config, noise=noise)
            for epoch in range(epochs):
                rows.append(("sgd", name, seed, epoch + 1,
                             report.train_loss[epoch],
                             report.test_accuracy[epoch],
                             report.accounted_mu.mu, report.central.epsilon))
    return ResultTable(
        columns=("experiment", "distribution", "seed", "epoch", "train_loss",
                 "test_accuracy", "accounted_mu", "central_epsilon"),
        rows=tuple(rows))

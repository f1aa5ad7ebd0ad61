"""Local randomizers, the shuffler, and the two estimation pipelines.

Mean estimation: clip each value, add per-user Laplace noise scaled to the
clip width over the user's epsilon, shuffle, and average.  Frequency
estimation: randomized response per bit, shuffle, then debias the count of
ones.  Both attach the accountant's report for the cohort, since the privacy
guarantee comes from the shuffled release, not from the estimate itself.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .accountant import AmplificationReport, Cohort, amplify
from .noise import NoiseSource

__all__ = [
    "NonIdentifiableError",
    "ShuffledBatch",
    "freq_estimate",
    "laplace_randomize",
    "laplace_scale",
    "mean_estimate",
    "rr_randomize",
    "shuffle",
]


class NonIdentifiableError(ValueError):
    """The debiasing denominator is too close to zero to recover the frequency."""


def laplace_scale(epsilon: float, sensitivity: float) -> float:
    """Laplace scale sensitivity / epsilon; rejects non-informative epsilon = 0."""
    if not epsilon > 0.0:
        raise ValueError(
            "non-informative budget (epsilon = 0) not supported by the Laplace "
            "mechanism; the accountant still accepts such users")
    if not sensitivity > 0.0:
        raise ValueError(f"sensitivity must be > 0, got {sensitivity}")
    return sensitivity / epsilon


def laplace_randomize(x: float, epsilon: float, sensitivity: float,
                      noise: NoiseSource) -> float:
    """Release x + Lap(sensitivity / epsilon); unbiased for x."""
    return x + noise.laplace(laplace_scale(epsilon, sensitivity))


def rr_randomize(bit: int, epsilon: float, noise: NoiseSource) -> int:
    """Binary randomized response: keep the bit w.p. e^eps / (1 + e^eps).

    Equivalently P(y=1 | x=1) = e^eps / (1 + e^eps) and
    P(y=1 | x=0) = 1 / (1 + e^eps); epsilon = 0 is a fair coin.
    """
    if bit not in (0, 1):
        raise ValueError(f"bit must be 0 or 1, got {bit}")
    if not (epsilon >= 0.0 and math.isfinite(epsilon)):
        raise ValueError(f"epsilon must be finite and >= 0, got {epsilon}")
    keep = math.exp(epsilon) / (1.0 + math.exp(epsilon))
    return int(bit) if noise.uniform() < keep else 1 - int(bit)


@dataclass(frozen=True)
class ShuffledBatch:
    """Uniformly permuted reports; multiset of values equals the input's.

    ``budgets_permuted``, when present, carries the cohort's budgets under an
    independent second permutation, so report/budget pairs are unlinked; only
    permutation-invariant functions of the budgets should be consumed.
    The permutations themselves are never exposed.
    """

    values: np.ndarray
    permutation_seed: object
    budgets_permuted: tuple | None = None


def shuffle(items, seed, budgets=None) -> ShuffledBatch:
    """Uniform random shuffle of the reports, deterministic per seed."""
    values = np.asarray(items)
    if values.size == 0:
        raise ValueError("cannot shuffle an empty batch")
    rng = np.random.default_rng(seed)
    shuffled = values[rng.permutation(values.size)]
    permuted_budgets = None
    if budgets is not None:
        order = rng.permutation(len(budgets))
        permuted_budgets = tuple(budgets[i] for i in order)
    return ShuffledBatch(values=shuffled, permutation_seed=seed,
                         budgets_permuted=permuted_budgets)


def mean_estimate(data, cohort: Cohort, clip_range, noise: NoiseSource,
                  seed) -> tuple[float, AmplificationReport]:
    """Shuffled private mean of ``data`` under the cohort's budgets.

    Values are clipped to ``clip_range = (lo, hi)``; the per-user Laplace
    scale uses sensitivity hi - lo.  The estimate averages the shuffled
    reports with an exactly rounded sum, so it is bit-identical across
    permutation seeds for fixed per-user noise.
    """
    data = np.asarray(data, dtype=float)
    if data.ndim != 1 or data.size != cohort.n:
        raise ValueError("need one data value per cohort budget")
    lo, hi = float(clip_range[0]), float(clip_range[1])
    if not lo < hi:
        raise ValueError(f"clip range must satisfy lo < hi, got ({lo}, {hi})")
    epsilons = cohort.epsilons
    if np.any(epsilons <= 0.0):
        raise ValueError(
            "non-informative budget (epsilon = 0) not supported by the Laplace "
            "mechanism; the accountant still accepts such users")
    reports = np.clip(data, lo, hi) + noise.laplace((hi - lo) / epsilons,
                                                    size=data.size)
    batch = shuffle(reports, seed, budgets=cohort.budgets)
    z = math.fsum(batch.values) / cohort.n
    return z, amplify(cohort)


def freq_estimate(bits, cohort: Cohort, noise: NoiseSource,
                  seed) -> tuple[float, AmplificationReport]:
    """Shuffled private frequency of ones among binary ``bits``.

    Applies randomized response per user, shuffles, and debiases:
    z = (A - B) / (n - 2B) with A the shuffled count of ones and
    B = sum_i 1 / (1 + e^eps_i).  Unbiased for the true frequency; raises
    :class:`NonIdentifiableError` when n - 2B is too small (all epsilons
    near zero).
    """
    bits = np.asarray(bits)
    if bits.ndim != 1 or bits.size != cohort.n:
        raise ValueError("need one bit per cohort budget")
    if not np.isin(bits, (0, 1)).all():
        raise ValueError("bits must be 0 or 1")
    epsilons = cohort.epsilons
    keep = np.exp(epsilons) / (1.0 + np.exp(epsilons))
    flips = noise.uniform(size=bits.size) >= keep
    reports = np.where(flips, 1 - bits, bits)
    batch = shuffle(reports, seed, budgets=cohort.budgets)
    a = float(np.sum(batch.values))
    # permutation-invariant by construction, so the cohort order serves
    b = math.fsum((1.0 / (1.0 + np.exp(epsilons))).tolist())
    denominator = cohort.n - 2.0 * b
    if abs(denominator) < 1e-8 * cohort.n:
        raise NonIdentifiableError(
            "frequency is non-identifiable: n - 2B is too close to zero")
    z = (a - b) / denominator
    return z, amplify(cohort)

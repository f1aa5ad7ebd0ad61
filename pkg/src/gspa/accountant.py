"""Central-privacy accounting for shuffled reports with per-user budgets.

Shuffling a batch of locally randomized reports yields a central guarantee
far stronger than any single user's local one.  The accountant turns a cohort
of per-user ``(epsilon_i, delta_i)`` budgets into the Gaussian-DP parameter

    mu = sqrt(2 / (sum_i a_i - max_i a_i)),    a_i = (1 - delta_i) / (1 + e^epsilon_i),

i.e. the worst case over which single user's report is under test, with the
remaining users providing the amplifying noise floor.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable

import numpy as np

from .tradeoff import (GdpParam, PrivacyBudget, compose_gdp,
                       dp_epsilon_for_delta)

__all__ = [
    "AmplificationReport",
    "Cohort",
    "DISTRIBUTION_NAMES",
    "NoAmplificationError",
    "amplify",
    "amplify_composed",
    "central_budget",
    "contribution_weight",
    "sample_budgets",
]


class NoAmplificationError(ValueError):
    """The cohort admits no finite central guarantee (denominator <= 0)."""


@dataclass(frozen=True)
class Cohort:
    """Ordered collection of per-user local privacy budgets."""

    budgets: tuple

    def __post_init__(self):
        budgets = tuple(self.budgets)
        if not budgets:
            raise ValueError("cohort must contain at least one budget")
        if not all(isinstance(b, PrivacyBudget) for b in budgets):
            raise ValueError("all cohort entries must be PrivacyBudget values")
        object.__setattr__(self, "budgets", budgets)
        object.__setattr__(self, "_epsilons", np.array([b.epsilon for b in budgets]))
        object.__setattr__(self, "_deltas", np.array([b.delta for b in budgets]))

    @property
    def n(self) -> int:
        return len(self.budgets)

    @property
    def epsilons(self) -> np.ndarray:
        return self._epsilons

    @property
    def deltas(self) -> np.ndarray:
        return self._deltas

    @classmethod
    def uniform(cls, n: int, epsilon: float, delta: float = 0.0) -> "Cohort":
        return cls((PrivacyBudget(epsilon, delta),) * n)

    @classmethod
    def from_epsilons(cls, epsilons: Iterable[float], delta: float = 0.0) -> "Cohort":
        return cls(tuple(PrivacyBudget(float(e), delta) for e in epsilons))


def contribution_weight(budget: PrivacyBudget) -> float:
    """Per-user amplification weight (1 - delta) / (1 + e^epsilon), in [0, 1/2]."""
    return (1.0 - budget.delta) / (1.0 + math.exp(budget.epsilon))


@dataclass(frozen=True)
class AmplificationReport:
    """Result of accounting one shuffled release of a cohort's reports."""

    mu: GdpParam
    denominator: float
    worst_index: int
    per_user_weights: tuple

    def __post_init__(self):
        object.__setattr__(self, "per_user_weights", tuple(self.per_user_weights))


def amplify(cohort: Cohort) -> AmplificationReport:
    """Central Gaussian-DP parameter of one shuffled release.

    The denominator sums every user's weight except the largest one (first
    occurrence on ties), covering the worst case of which user's value is
    being tested.  Raises :class:`NoAmplificationError` when that sum is not
    positive (e.g. all deltas equal 1).
    """
    if cohort.n < 2:
        raise ValueError("n >= 2 required: amplification needs at least one other user")
    weights = (1.0 - cohort.deltas) / (1.0 + np.exp(cohort.epsilons))
    worst_index = int(np.argmax(weights))
    denominator = math.fsum(w for i, w in enumerate(weights.tolist())
                            if i != worst_index)
    if denominator <= 0.0:
        raise NoAmplificationError(
            "no amplification guarantee: remaining-user weight sum is not positive")
    mu = math.sqrt(2.0 / denominator)
    return AmplificationReport(mu=GdpParam(mu), denominator=denominator,
                               worst_index=worst_index,
                               per_user_weights=tuple(weights.tolist()))


def amplify_composed(cohort: Cohort, epochs: int) -> GdpParam:
    """Guarantee after ``epochs`` independent shuffled releases: sqrt(T) * mu."""
    if not (isinstance(epochs, (int, np.integer)) and epochs >= 1):
        raise ValueError(f"epochs must be an integer >= 1, got {epochs}")
    mu = amplify(cohort).mu.mu
    return GdpParam(compose_gdp([mu] * int(epochs)))


def central_budget(cohort: Cohort, target_delta: float) -> PrivacyBudget:
    """Central (epsilon, delta) implied by the cohort at the requested delta."""
    mu = amplify(cohort).mu.mu
    return PrivacyBudget(dp_epsilon_for_delta(mu, target_delta), target_delta)


DISTRIBUTION_NAMES = ("unif1", "unif2", "unif3", "constant", "mixed")


def sample_budgets(name: str, n: int, seed, *, delta: float = 0.0,
                   repeat_first: int | None = None) -> Cohort:
    """Draw a cohort of local budgets from a named epsilon distribution.

    unif1 = U(0.01, 1); unif2 = U(0.01, 2); unif3 = U(0.5, 1);
    constant = 0.5 for everyone; mixed = half at 0.5 and half at 0.01 (odd
    remainder goes to the 0.5 group).  ``delta`` is shared by all users.

    With ``repeat_first=k`` and ``n > k``, only the first ``k`` values are
    drawn and then repeated cyclically, which keeps sweeps over ``n``
    comparable by reusing one fixed parameter set.
    """
    if n < 2:
        raise ValueError(f"n >= 2 required, got {n}")
    if name not in DISTRIBUTION_NAMES:
        raise ValueError(f"unknown budget distribution {name!r}; "
                         f"expected one of {DISTRIBUTION_NAMES}")
    base_n = n if repeat_first is None else min(n, int(repeat_first))
    rng = np.random.default_rng(seed)
    if name == "unif1":
        eps = rng.uniform(0.01, 1.0, size=base_n)
    elif name == "unif2":
        eps = rng.uniform(0.01, 2.0, size=base_n)
    elif name == "unif3":
        eps = rng.uniform(0.5, 1.0, size=base_n)
    elif name == "constant":
        eps = np.full(base_n, 0.5)
    else:  # mixed
        high = (base_n + 1) // 2
        eps = np.concatenate([np.full(high, 0.5), np.full(base_n - high, 0.01)])
    if base_n < n:
        eps = np.resize(eps, n)
    return Cohort.from_epsilons(eps, delta)

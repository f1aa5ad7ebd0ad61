"""Exact count-statistic distributions for shuffled three-outcome reports.

A shuffled transcript of reports over the alphabet {0, 1, 2} carries no more
information than the pair of counts (N0, N1).  One distinguished user's report
depends on which hypothesis holds -- its 0/1 probabilities swap between the
two -- while every other user contributes a 0/1-symmetric three-outcome trial
with P(0) = P(1) = (1 - delta_i) / (1 + e^epsilon_i).  This module builds the
exact joint pmf of (N0, N1) by sequential convolution and derives the optimal
(Neyman-Pearson) trade-off curve between the two hypotheses.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .accountant import Cohort, contribution_weight
from .tradeoff import EmpiricalCurve, PrivacyBudget

__all__ = [
    "HYPOTHESES",
    "CountDistribution",
    "TrinomialComponent",
    "convolve_components",
    "count_distribution",
    "neyman_pearson_curve",
    "neyman_pearson_curve_from_pmfs",
    "symmetrized_curve",
]

HYPOTHESES = ("H0", "H1")


@dataclass(frozen=True)
class TrinomialComponent:
    """Outcome probabilities (report 0, report 1, report 2) of a single trial."""

    p0: float
    p1: float
    p2: float

    def __post_init__(self):
        probs = (self.p0, self.p1, self.p2)
        if any(p < 0.0 for p in probs):
            raise ValueError(f"probabilities must be >= 0, got {probs}")
        if abs(math.fsum(probs) - 1.0) > 1e-12:
            raise ValueError(f"probabilities must sum to 1, got {probs}")

    @classmethod
    def background(cls, budget: PrivacyBudget) -> "TrinomialComponent":
        """Symmetric trial of a non-distinguished user: P(0) = P(1) = weight."""
        a = contribution_weight(budget)
        return cls(a, a, max(0.0, 1.0 - 2.0 * a))

    @classmethod
    def distinct(cls, budget: PrivacyBudget, hypothesis: str) -> "TrinomialComponent":
        """Trial of the distinguished user; 0/1 probabilities swap under H1."""
        if hypothesis not in HYPOTHESES:
            raise ValueError(f"hypothesis must be one of {HYPOTHESES}, got {hypothesis!r}")
        swap = contribution_weight(budget)
        keep = swap * math.exp(budget.epsilon)
        p0, p1 = (keep, swap) if hypothesis == "H0" else (swap, keep)
        return cls(p0, p1, budget.delta)


class CountDistribution:
    """Exact joint pmf of (N0, N1) over a fixed number of three-outcome trials.

    ``pmf[k0, k1]`` is the probability of seeing ``k0`` zero-reports and
    ``k1`` one-reports; the support satisfies ``k0 + k1 <= n``.
    """

    def __init__(self, pmf: np.ndarray):
        pmf = np.asarray(pmf, dtype=float)
        if pmf.ndim != 2 or pmf.shape[0] != pmf.shape[1]:
            raise ValueError("pmf must be a square 2-d array")
        if pmf.min() < -1e-12:
            raise ValueError("pmf entries must be non-negative")
        if abs(pmf.sum() - 1.0) > 1e-10:
            raise ValueError(f"pmf must sum to 1, got {pmf.sum()!r}")
        self.pmf = pmf

    @property
    def n(self) -> int:
        return self.pmf.shape[0] - 1

    def swapped(self) -> "CountDistribution":
        """Distribution of (N1, N0); exact transpose of the pmf array."""
        return CountDistribution(self.pmf.T)

    def total_variation(self, other: "CountDistribution") -> float:
        """Half-L1 distance, padding the smaller support with zeros."""
        size = max(self.pmf.shape[0], other.pmf.shape[0])
        p = np.zeros((size, size))
        q = np.zeros((size, size))
        p[: self.pmf.shape[0], : self.pmf.shape[1]] = self.pmf
        q[: other.pmf.shape[0], : other.pmf.shape[1]] = other.pmf
        return 0.5 * float(np.abs(p - q).sum())


def convolve_components(components: Sequence[TrinomialComponent]) -> CountDistribution:
    """Exact pmf of summed counts, one trial per component, O(m^3) time.

    The per-step updates use only two-operand additions so that swapping every
    component's (p0, p1) yields the exactly transposed array.
    """
    m = len(components)
    if m < 1:
        raise ValueError("need at least one component")
    pmf = np.zeros((m + 1, m + 1))
    pmf[0, 0] = 1.0
    for c in components:
        shifted = np.zeros_like(pmf)
        shifted[1:, :] = c.p0 * pmf[:-1, :]
        shifted[:, 1:] += c.p1 * pmf[:, :-1]
        pmf = c.p2 * pmf + shifted
    return CountDistribution(pmf)


def count_distribution(cohort: Cohort, distinct_index: int,
                       hypothesis: str) -> CountDistribution:
    """Exact count pmf of a shuffled cohort with one distinguished user.

    The user at ``distinct_index`` (0-based) contributes the hypothesis-
    dependent trial; all others contribute their symmetric background trials.
    """
    if not 0 <= distinct_index < cohort.n:
        raise ValueError(f"distinct_index must lie in [0, {cohort.n - 1}]")
    components = [TrinomialComponent.distinct(cohort.budgets[distinct_index], hypothesis)]
    components.extend(TrinomialComponent.background(b)
                      for i, b in enumerate(cohort.budgets) if i != distinct_index)
    return convolve_components(components)


def neyman_pearson_curve_from_pmfs(p, q) -> EmpiricalCurve:
    """Optimal trade-off curve between two pmfs on a shared finite outcome set.

    Outcomes are rejected in order of decreasing likelihood ratio q/p; ties
    are grouped, so randomized tests appear as the linear interpolation
    between consecutive vertices.
    """
    p = np.asarray(p, dtype=float).ravel()
    q = np.asarray(q, dtype=float).ravel()
    if p.shape != q.shape:
        raise ValueError("pmfs must share one outcome space")
    for name, v in (("p", p), ("q", q)):
        if v.min() < -1e-12 or abs(v.sum() - 1.0) > 1e-9:
            raise ValueError(f"{name} is not a pmf")
    live = (p > 0.0) | (q > 0.0)
    p, q = p[live], q[live]
    with np.errstate(divide="ignore"):
        ratio = np.where(p > 0.0, q / np.where(p > 0.0, p, 1.0), np.inf)
    order = np.argsort(-ratio, kind="stable")
    p, q, ratio = p[order], q[order], ratio[order]
    starts = np.concatenate([[0], 1 + np.nonzero(ratio[1:] != ratio[:-1])[0]])
    alpha = np.concatenate([[0.0], np.cumsum(np.add.reduceat(p, starts))])
    beta = np.concatenate([[1.0], 1.0 - np.cumsum(np.add.reduceat(q, starts))])
    if abs(alpha[-1] - 1.0) > 1e-9 or abs(beta[-1]) > 1e-9:
        raise ValueError("pmf masses drifted away from 1")
    alpha[-1], beta[-1] = 1.0, 0.0
    alpha = np.maximum.accumulate(np.clip(alpha, 0.0, 1.0))
    beta = np.minimum.accumulate(np.clip(beta, 0.0, 1.0))
    return EmpiricalCurve(alpha, beta)


def neyman_pearson_curve(p: CountDistribution, q: CountDistribution) -> EmpiricalCurve:
    """Optimal trade-off curve for testing count distribution p against q."""
    if p.pmf.shape != q.pmf.shape:
        raise ValueError("count distributions must share one support size")
    return neyman_pearson_curve_from_pmfs(p.pmf, q.pmf)


def symmetrized_curve(p: CountDistribution, q: CountDistribution,
                      alphas=None) -> EmpiricalCurve:
    """Pointwise maximum of the two directed trade-off curves on an alpha grid."""
    if alphas is None:
        alphas = np.linspace(0.0, 1.0, 1001)
    alphas = np.asarray(alphas, dtype=float)
    forward = neyman_pearson_curve(p, q)(alphas)
    backward = neyman_pearson_curve(q, p)(alphas)
    return EmpiricalCurve(alphas, np.maximum(forward, backward))

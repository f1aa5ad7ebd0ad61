"""Trade-off function primitives for hypothesis-testing privacy analysis.

A trade-off curve maps a type-I error level ``alpha`` to the smallest
achievable type-II error ``beta`` when testing one distribution against
another.  Privacy guarantees are lower bounds on such curves.  Two closed-form
families are supported -- the ``(epsilon, delta)`` family and the Gaussian
family ``G_mu(alpha) = Phi(Phi^-1(1 - alpha) - mu)`` -- together with
conversions between them, composition rules for the Gaussian family, and
piecewise-linear empirical curves.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.optimize import bisect
from scipy.special import ndtr, ndtri

__all__ = [
    "BracketError",
    "EmpiricalCurve",
    "EpsDeltaCurve",
    "GdpCurve",
    "GdpParam",
    "PrivacyBudget",
    "compose_gdp",
    "compose_tradeoff",
    "dp_epsilon_for_delta",
    "epsdelta_tradeoff",
    "gdp_delta_grid_supremum",
    "gdp_to_dp",
    "gdp_tradeoff",
    "group_gdp",
    "normal_cdf",
    "normal_quantile",
]


class BracketError(ValueError):
    """No bracket for the epsilon root search could be established."""


def normal_cdf(x):
    """Standard normal CDF (erf-based, accurate to ~1e-16 absolute)."""
    return ndtr(x)


def normal_quantile(p):
    """Inverse of :func:`normal_cdf`; maps 0 to -inf and 1 to +inf."""
    return ndtri(p)


@dataclass(frozen=True)
class PrivacyBudget:
    """One user's local privacy parameters: epsilon in nats, delta in [0, 1]."""

    epsilon: float
    delta: float = 0.0

    def __post_init__(self):
        if not (math.isfinite(self.epsilon) and self.epsilon >= 0.0):
            raise ValueError(f"epsilon must be finite and >= 0, got {self.epsilon}")
        if not 0.0 <= self.delta <= 1.0:
            raise ValueError(f"delta must lie in [0, 1], got {self.delta}")


@dataclass(frozen=True)
class GdpParam:
    """Gaussian-DP parameter: the guarantee of testing N(0,1) against N(mu,1)."""

    mu: float

    def __post_init__(self):
        if not (math.isfinite(self.mu) and self.mu >= 0.0):
            raise ValueError(f"mu must be finite and >= 0, got {self.mu}")


def _as_alpha(alpha):
    """Validate alpha in [0, 1] (scalar or array), return float array."""
    a = np.asarray(alpha, dtype=float)
    if np.any(a < 0.0) or np.any(a > 1.0):
        raise ValueError("alpha must lie in [0, 1]")
    return a


def _maybe_scalar(values, like):
    return float(values) if np.isscalar(like) or np.ndim(like) == 0 else values


def gdp_tradeoff(mu: float, alpha):
    """Gaussian trade-off curve G_mu(alpha) = Phi(Phi^-1(1 - alpha) - mu).

    Non-increasing and convex in ``alpha``; ``mu = 0`` gives the
    no-information line ``1 - alpha``.  Accepts scalar or array ``alpha``.
    """
    if not (math.isfinite(mu) and mu >= 0.0):
        raise ValueError(f"mu must be finite and >= 0, got {mu}")
    a = _as_alpha(alpha)
    beta = ndtr(ndtri(1.0 - a) - mu)
    return _maybe_scalar(beta, alpha)


def epsdelta_tradeoff(budget: PrivacyBudget, alpha):
    """Trade-off lower bound of an (epsilon, delta) guarantee.

    f(alpha) = max(0, 1 - delta - e^eps * alpha, e^-eps * (1 - delta - alpha)).
    """
    a = _as_alpha(alpha)
    eps, delta = budget.epsilon, budget.delta
    beta = np.maximum(0.0, np.maximum(1.0 - delta - math.exp(eps) * a,
                                      math.exp(-eps) * (1.0 - delta - a)))
    return _maybe_scalar(beta, alpha)


def gdp_to_dp(mu: float, epsilon: float) -> float:
    """Smallest delta such that a mu-GDP guarantee implies (epsilon, delta)-DP.

    delta(eps) = Phi(-eps/mu + mu/2) - e^eps * Phi(-eps/mu - mu/2); strictly
    decreasing in ``epsilon`` for fixed ``mu > 0``.  Returns 0 for ``mu = 0``.
    """
    if not (math.isfinite(mu) and mu >= 0.0):
        raise ValueError(f"mu must be finite and >= 0, got {mu}")
    if not (math.isfinite(epsilon) and epsilon >= 0.0):
        raise ValueError(f"epsilon must be finite and >= 0, got {epsilon}")
    if mu == 0.0:
        return 0.0
    delta = float(ndtr(-epsilon / mu + mu / 2.0)
                  - math.exp(epsilon) * ndtr(-epsilon / mu - mu / 2.0))
    return min(max(delta, 0.0), 1.0)


def dp_epsilon_for_delta(mu: float, target_delta: float) -> float:
    """Invert :func:`gdp_to_dp` in epsilon by bracketed bisection.

    Returns the epsilon at which ``gdp_to_dp(mu, epsilon)`` meets
    ``target_delta`` (within 1e-10), or 0 when the target is already met with
    no epsilon at all.
    """
    if not mu > 0.0:
        raise ValueError(f"mu must be > 0, got {mu}")
    if not 0.0 < target_delta < 1.0:
        raise ValueError(f"target_delta must lie in (0, 1), got {target_delta}")
    if target_delta >= gdp_to_dp(mu, 0.0):
        return 0.0
    hi = 1.0
    while gdp_to_dp(mu, hi) > target_delta:
        hi *= 2.0
        if hi > 1e9:
            raise BracketError(
                f"could not bracket epsilon for mu={mu}, target_delta={target_delta}")
    eps = float(bisect(lambda e: gdp_to_dp(mu, e) - target_delta, 0.0, hi,
                       xtol=1e-13))
    if abs(gdp_to_dp(mu, eps) - target_delta) > 1e-10:
        raise BracketError(
            f"bisection failed to meet target_delta={target_delta} at mu={mu}")
    return eps


def gdp_delta_grid_supremum(mu: float, epsilon: float, step: float = 1e-3) -> float:
    """Dual form of :func:`gdp_to_dp` as a grid supremum.

    delta(eps) = sup_alpha (1 - e^eps * alpha - G_mu(alpha)); evaluated on a
    uniform alpha grid of the given step.  Independent route used to
    cross-check the closed form.
    """
    alphas = np.linspace(0.0, 1.0, round(1.0 / step) + 1)
    values = 1.0 - math.exp(epsilon) * alphas - gdp_tradeoff(mu, alphas)
    return float(max(values.max(), 0.0))


def compose_gdp(mus) -> float:
    """Root-sum-of-squares composition of Gaussian-DP parameters."""
    mus = [float(m) for m in mus]
    if not mus:
        raise ValueError("compose_gdp requires at least one parameter")
    if any(m < 0 or not math.isfinite(m) for m in mus):
        raise ValueError("all mu values must be finite and >= 0")
    return math.sqrt(math.fsum(m * m for m in mus))


def group_gdp(mu: float, k: int) -> float:
    """Group guarantee: a mu-GDP mechanism is (k * mu)-GDP for groups of size k."""
    if not (math.isfinite(mu) and mu >= 0.0):
        raise ValueError(f"mu must be finite and >= 0, got {mu}")
    if not (isinstance(k, (int, np.integer)) and k >= 1):
        raise ValueError(f"group size must be an integer >= 1, got {k}")
    return k * mu


def compose_tradeoff(f, g, alpha):
    """Chain two trade-off lower bounds into alpha -> g(1 - f(alpha)).

    If the first test's type-II error is at least ``f`` and the second link's
    trade-off is at least ``g``, the chained pair is bounded below by this
    composition.
    """
    return g(1.0 - f(alpha))


@dataclass(frozen=True)
class GdpCurve:
    """Callable Gaussian trade-off curve with fixed mu."""

    mu: float

    def __call__(self, alpha):
        return gdp_tradeoff(self.mu, alpha)


@dataclass(frozen=True)
class EpsDeltaCurve:
    """Callable (epsilon, delta) trade-off curve."""

    budget: PrivacyBudget

    def __call__(self, alpha):
        return epsdelta_tradeoff(self.budget, alpha)


class EmpiricalCurve:
    """Piecewise-linear trade-off curve through (alpha, beta) vertices.

    Vertices must describe a valid trade-off function: values in [0, 1],
    non-increasing, convex, and pointwise below the line ``1 - alpha``.
    Randomized tests between adjacent vertices correspond to the linear
    interpolation used for evaluation; beyond the last vertex the curve is 0.
    """

    _TOL = 1e-9

    def __init__(self, alphas, betas, validate: bool = True):
        alphas = np.asarray(alphas, dtype=float)
        betas = np.asarray(betas, dtype=float)
        if alphas.ndim != 1 or alphas.shape != betas.shape or alphas.size < 2:
            raise ValueError("need matching 1-d vertex arrays of length >= 2")
        order = np.lexsort((betas, alphas))
        alphas, betas = alphas[order], betas[order]
        # collapse duplicate alphas, keeping the infimum beta
        keep = np.ones(alphas.size, dtype=bool)
        keep[1:] = np.diff(alphas) > 0
        self.alphas = alphas[keep]
        self.betas = betas[keep]
        if validate:
            self._validate()

    def _validate(self):
        a, b = self.alphas, self.betas
        tol = self._TOL
        if a[0] < -tol or a[-1] > 1.0 + tol or np.any(b < -tol) or np.any(b > 1.0 + tol):
            raise ValueError("vertices must lie in the unit square")
        if np.any(np.diff(b) > tol):
            raise ValueError("beta must be non-increasing in alpha")
        if np.any(b - (1.0 - a) > tol):
            raise ValueError("trade-off curve must satisfy beta <= 1 - alpha")
        # division-free convexity: da1*db2 - da2*db1 >= 0 at every interior
        # vertex, with a tolerance scaled to the 1-ulp noise of the vertices
        da, db = np.diff(a), np.diff(b)
        defect = da[:-1] * db[1:] - da[1:] * db[:-1]
        scale = da[:-1] + da[1:] + np.abs(db[:-1]) + np.abs(db[1:])
        if np.any(defect < -1e-12 * scale):
            raise ValueError("trade-off curve must be convex")

    @property
    def vertices(self) -> np.ndarray:
        return np.column_stack([self.alphas, self.betas])

    def __call__(self, alpha):
        a = _as_alpha(alpha)
        beta = np.interp(a, self.alphas, self.betas, left=self.betas[0], right=0.0)
        return _maybe_scalar(beta, alpha)

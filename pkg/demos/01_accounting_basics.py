"""Accounting walkthrough: from per-user local budgets to a central guarantee.

Each user randomizes their own data under a personal (epsilon_i, delta_i)
budget.  After a trusted shuffler permutes the reports, the release as a
whole satisfies a far stronger central guarantee, summarized by a single
Gaussian-DP parameter mu and convertible to central (epsilon, delta) pairs.
"""

import math

from gspa import (Cohort, PrivacyBudget, amplify, amplify_composed,
                  central_budget, compose_gdp, gdp_to_dp)

# A small cohort with heterogeneous budgets; one cautious user (eps = 0.05),
# one who releases nothing useful at all (eps = 0), and a generous one.
cohort = Cohort((
    PrivacyBudget(0.05),
    PrivacyBudget(0.0),
    PrivacyBudget(0.5),
    PrivacyBudget(1.0),
    PrivacyBudget(2.0),
))

report = amplify(cohort)
print("per-user weights (1 - delta) / (1 + e^eps):")
for budget, weight in zip(cohort.budgets, report.per_user_weights):
    print(f"  eps = {budget.epsilon:4.2f}  ->  weight {weight:.4f}")
print(f"worst (removed) index : {report.worst_index}")
print(f"denominator           : {report.denominator:.4f}")
print(f"central mu            : {report.mu.mu:.4f}")

# The eps = 0 user is fine for the accountant: they contribute the maximal
# weight 1/2, i.e. the most amplifying noise for everyone else.

# Growing the cohort strengthens the guarantee roughly like 1/sqrt(n).
for n in (100, 1000, 10_000):
    big = Cohort.uniform(n, 0.5)
    mu = amplify(big).mu.mu
    closed = math.sqrt(2 * (1 + math.exp(0.5)) / (n - 1))
    print(f"n = {n:6d}: mu = {mu:.5f} (closed form {closed:.5f})")

# Converting mu to classical central (epsilon, delta) at delta = 1e-4:
big = Cohort.uniform(10_000, 0.5)
central = central_budget(big, 1e-4)
print(f"\nn = 10^4 at local eps = 0.5 -> central "
      f"({central.epsilon:.4f}, {central.delta})")

# The whole delta(eps) curve is available, not just one point.
mu = amplify(big).mu.mu
print("delta(eps) along the curve:")
for eps in (0.01, 0.03, 0.05, 0.1):
    print(f"  eps = {eps:.2f} -> delta = {gdp_to_dp(mu, eps):.2e}")

# Composition across repeated releases follows the root-sum-of-squares rule.
print(f"\n50 repeated releases: mu = {amplify_composed(big, 50).mu:.4f} "
      f"= sqrt(50) * {amplify(big).mu.mu:.4f}")
print(f"composing mixed parameters [0.1, 0.2, 0.2]: "
      f"{compose_gdp([0.1, 0.2, 0.2]):.4f}")

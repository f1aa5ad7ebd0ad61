"""Shared independent oracles for the test suite.

These deliberately avoid the library's own code paths: brute-force
enumeration over outcome tuples for count distributions, and exhaustive
rejection-set search plus convex hulls for optimal trade-off curves.
"""

import itertools
import math

import numpy as np


def enumerate_count_pmf(components):
    """Exact (N0, N1) pmf by enumerating every outcome tuple (3^m outcomes)."""
    m = len(components)
    pmf = np.zeros((m + 1, m + 1))
    for outcomes in itertools.product((0, 1, 2), repeat=m):
        prob = 1.0
        for c, o in zip(components, outcomes):
            prob *= (c.p0, c.p1, c.p2)[o]
        pmf[outcomes.count(0), outcomes.count(1)] += prob
    return pmf


def lower_convex_hull(points):
    """Vertices of the lower convex hull, sorted by x (Andrew monotone chain)."""
    best = {}
    for x, y in points:
        best[x] = min(y, best.get(x, math.inf))
    points = sorted(best.items())
    hull = []
    for p in points:
        while len(hull) >= 2:
            (x1, y1), (x2, y2) = hull[-2], hull[-1]
            if (x2 - x1) * (p[1] - y1) - (p[0] - x1) * (y2 - y1) <= 0:
                hull.pop()
            else:
                break
        hull.append(p)
    return hull


def brute_force_tradeoff_vertices(p, q):
    """Optimal trade-off vertices via all 2^k deterministic rejection sets.

    Randomized tests fill in the convex hull, so the optimal curve is the
    lower convex hull of the deterministic (alpha, beta) points.
    """
    p = np.asarray(p, dtype=float).ravel()
    q = np.asarray(q, dtype=float).ravel()
    live = (p > 0) | (q > 0)
    p, q = p[live], q[live]
    k = p.size
    if k > 16:
        raise ValueError("brute force limited to 16 outcomes")
    points = []
    for mask in range(1 << k):
        chosen = [(mask >> i) & 1 for i in range(k)]
        alpha = math.fsum(pi for pi, c in zip(p, chosen) if c)
        beta = 1.0 - math.fsum(qi for qi, c in zip(q, chosen) if c)
        points.append((alpha, beta))
    return lower_convex_hull(points)


def eval_polyline(vertices, alpha):
    xs = np.array([v[0] for v in vertices])
    ys = np.array([v[1] for v in vertices])
    return np.interp(alpha, xs, ys, left=ys[0], right=ys[-1])

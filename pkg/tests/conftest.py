"""Shared helpers for the test suite."""

import itertools
import math

from truedisc import SplitMix64, e_from_obs, normal_quantile


def lr_evalues(k, seed, n_false=None):
    """Likelihood-ratio e-values from the Gaussian test-bed: half alternative,
    half null unless ``n_false`` says otherwise.  Deterministic per seed."""
    if n_false is None:
        n_false = k // 2
    rng = SplitMix64(seed)
    vals = []
    for i in range(k):
        mu = -3.0 if i < n_false else 0.0
        vals.append(e_from_obs(mu + normal_quantile(rng.uniform()), -3.0))
    return tuple(vals)


def guarded_product(values):
    """Product with the 0 * inf = 0 convention used across the package."""
    out = 1.0
    for v in values:
        if v == 0.0 or out == 0.0:
            out = 0.0
        else:
            out *= v
    return out


def u_stat_bruteforce(values, n):
    """Independent oracle: enumerate every subset and use exact binomials."""
    k = len(values)
    m = min(n, k)
    total = sum(guarded_product(c) for c in itertools.combinations(values, m))
    return total / math.comb(k, m)


def esp_bruteforce(values, i):
    """Sum of all i-subset products, by enumeration."""
    if i == 0:
        return 1.0
    return sum(guarded_product(c) for c in itertools.combinations(values, i))


def close_rel(a, b, tol=1e-9):
    """|a - b| <= tol * max(1, |b|), with inf == inf allowed."""
    if math.isinf(a) or math.isinf(b):
        return a == b
    return abs(a - b) <= tol * max(1.0, abs(b))

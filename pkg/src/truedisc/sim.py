"""Seeded generation of the Gaussian test-bed: observations, likelihood-ratio
e-values, left-tail p-values, and ground-truth labels.

Reproducibility is pinned to two named algorithms so any conforming
implementation, in any language, emits bit-identical streams:

  * splitmix64 for the uniform source.  A raw output z maps to the open
    unit interval as ((z >> 11) + 0.5) * 2**-53.  Golden value: seed 0
    yields 0xe220a8397b1dcdaf, i.e. uniform 0.8833108082136427.
  * the AS241-class rational approximation for the standard-normal
    quantile (absolute error well below 1e-9 over (0, 1)).

Observation k under mean mu is mu + quantile(next uniform).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .errors import ValidationError

_MASK64 = (1 << 64) - 1


class SplitMix64:
    """splitmix64: 64-bit add-and-mix generator with a one-word state."""

    __slots__ = ("state",)

    def __init__(self, seed: int):
        if int(seed) != seed or not 0 <= int(seed) <= _MASK64:
            raise ValidationError(f"seed must be an unsigned 64-bit integer, got {seed!r}")
        self.state = int(seed)

    def next_u64(self) -> int:
        self.state = (self.state + 0x9E3779B97F4A7C15) & _MASK64
        z = self.state
        z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & _MASK64
        z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & _MASK64
        return z ^ (z >> 31)

    def uniform(self) -> float:
        """Uniform draw in the open interval (0, 1) with 53-bit resolution."""
        return ((self.next_u64() >> 11) + 0.5) * 2.0 ** -53


def normal_quantile(p: float) -> float:
    """Standard-normal quantile via the AS241-class rational minimax fits,
    one for the central region and two for the tails."""
    if not 0.0 < p < 1.0:
        raise ValidationError(f"quantile argument must be in (0,1), got {p!r}")
    q = p - 0.5
    if abs(q) <= 0.425:
        r = 0.180625 - q * q
        num = (((((((2.5090809287301226727e3 * r + 3.3430575583588128105e4) * r
                    + 6.7265770927008700853e4) * r + 4.5921953931549871457e4) * r
                  + 1.3731693765509461125e4) * r + 1.9715909503065514427e3) * r
                + 1.3314166789178437745e2) * r + 3.3871328727963666080e0)
        den = (((((((5.2264952788528545610e3 * r + 2.8729085735721942674e4) * r
                    + 3.9307895800092710610e4) * r + 2.1213794301586595867e4) * r
                  + 5.3941960214247511077e3) * r + 6.8718700749205790830e2) * r
                + 4.2313330701600911252e1) * r + 1.0)
        return q * num / den
    r = p if q < 0.0 else 1.0 - p
    r = math.sqrt(-math.log(r))
    if r <= 5.0:
        r -= 1.6
        num = (((((((7.74545014278341407640e-4 * r + 2.27238449892691845833e-2) * r
                    + 2.41780725177450611770e-1) * r + 1.27045825245236838258e0) * r
                  + 3.64784832476320460504e0) * r + 5.76949722146069140550e0) * r
                + 4.63033784615654529590e0) * r + 1.42343711074968357734e0)
        den = (((((((1.05075007164441684324e-9 * r + 5.47593808499534494600e-4) * r
                    + 1.51986665636164571966e-2) * r + 1.48103976427480074590e-1) * r
                  + 6.89767334985100004550e-1) * r + 1.67638483018380384940e0) * r
                + 2.05319162663775882187e0) * r + 1.0)
    else:
        r -= 5.0
        num = (((((((2.01033439929228813265e-7 * r + 2.71155556874348757815e-5) * r
                    + 1.24266094738807843860e-3) * r + 2.65321895265761230930e-2) * r
                  + 2.96560571828504891230e-1) * r + 1.78482653991729133580e0) * r
                + 5.46378491116411436990e0) * r + 6.65790464350110377720e0)
        den = (((((((2.04426310338993978564e-15 * r + 1.42151175831644588870e-7) * r
                    + 1.84631831751005468180e-5) * r + 7.86869131145613259100e-4) * r
                  + 1.48753612908506148525e-2) * r + 1.36929880922735805310e-1) * r
                + 5.99832206555887937690e-1) * r + 1.0)
    x = num / den
    return -x if q < 0.0 else x


def normal_cdf(x: float) -> float:
    """Standard-normal CDF as erfc(-x / sqrt 2) / 2; accurate to a few ulp."""
    return 0.5 * math.erfc(-x / math.sqrt(2.0))


def e_from_obs(x: float, alt_mean: float = -3.0) -> float:
    """Likelihood ratio of N(alt_mean, 1) against N(0, 1) at observation x:
    exp(alt_mean * x - alt_mean^2 / 2).  Overflow saturates to +inf."""
    try:
        return math.exp(alt_mean * x - 0.5 * alt_mean * alt_mean)
    except OverflowError:
        return math.inf


def p_from_obs(x: float) -> float:
    """Left-tail p-value of observation x under N(0, 1); the alternative
    sits to the left of the null, so small x means small p."""
    return normal_cdf(x)


@dataclass(frozen=True)
class SimConfig:
    """Study layout: the first ``n_false`` hypotheses are false (observations
    drawn from N(alt_mean, 1)); the rest are true nulls (N(0, 1))."""

    K: int
    n_false: int
    alt_mean: float = -3.0
    seed: int = 1

    def __post_init__(self):
        if int(self.K) != self.K or self.K < 1:
            raise ValidationError(f"K must be a positive integer, got {self.K!r}")
        if int(self.n_false) != self.n_false or not 0 <= self.n_false <= self.K:
            raise ValidationError(
                f"n_false must be an integer in 0..K={self.K}, got {self.n_false!r}"
            )
        if math.isnan(float(self.alt_mean)) or math.isinf(float(self.alt_mean)):
            raise ValidationError(f"alt_mean must be finite, got {self.alt_mean!r}")
        if int(self.seed) != self.seed or not 0 <= self.seed <= _MASK64:
            raise ValidationError(f"seed must be an unsigned 64-bit integer, got {self.seed!r}")


@dataclass(frozen=True)
class SimOutput:
    x: tuple[float, ...]
    e: tuple[float, ...]
    p: tuple[float, ...]
    is_null: tuple[bool, ...]


def generate_study(cfg: SimConfig) -> SimOutput:
    """Draw the K observations in index order from one splitmix64 stream,
    then transform each to its e-value and p-value."""
    rng = SplitMix64(cfg.seed)
    xs = []
    for k in range(cfg.K):
        z = normal_quantile(rng.uniform())
        mu = cfg.alt_mean if k < cfg.n_false else 0.0
        xs.append(mu + z)
    return SimOutput(
        x=tuple(xs),
        e=tuple(e_from_obs(x, cfg.alt_mean) for x in xs),
        p=tuple(p_from_obs(x) for x in xs),
        is_null=tuple(k >= cfg.n_false for k in range(cfg.K)),
    )

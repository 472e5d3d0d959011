"""Self-contained statistical helpers: integer-parameter Beta CDFs, spacing
samplers, a one-sample KS statistic, Wilson score intervals, and a chi-square
tail for integer degrees of freedom.

The Beta CDF is restricted to positive integer shape parameters on purpose:
there it reduces to a finite binomial sum,

    F_{a,b}(x) = sum_{j=a}^{a+b-1} C(a+b-1, j) x^j (1-x)^(a+b-1-j),

so no incomplete-beta special function is needed.  All the distributional
facts exercised by the test-suite (hanging-size fractions, order-statistic
spacings) live in this integer-parameter family.
"""

from __future__ import annotations

import math
from collections.abc import Callable, Sequence
from dataclasses import dataclass

import numpy as np


class StatsError(ValueError):
    pass


@dataclass(frozen=True)
class BetaIntParams:
    """Beta(a, b) with positive integer shape parameters."""

    a: int
    b: int

    def __post_init__(self):
        if not (isinstance(self.a, int) and isinstance(self.b, int)):
            raise StatsError(f"Beta parameters must be integers, got {self.a!r}, {self.b!r}")
        if self.a < 1 or self.b < 1:
            raise StatsError(f"Beta parameters must be >= 1, got a={self.a} b={self.b}")

    @property
    def mean(self) -> float:
        return self.a / (self.a + self.b)

    @property
    def variance(self) -> float:
        s = self.a + self.b
        return self.a * self.b / (s * s * (s + 1.0))


def beta_cdf_int(params: BetaIntParams, x: float) -> float:
    """CDF of Beta(a, b) at x via the binomial-sum identity."""
    if x <= 0.0:
        return 0.0
    if x >= 1.0:
        return 1.0
    a, b = params.a, params.b
    n = a + b - 1
    total = 0.0
    for j in range(a, n + 1):
        total += math.comb(n, j) * (x ** j) * ((1.0 - x) ** (n - j))
    return min(1.0, total)


def beta_cdf(a: int, b: int, x: float) -> float:
    return beta_cdf_int(BetaIntParams(a, b), x)


def uniform_spacings(k: int, rng: np.random.Generator) -> np.ndarray:
    """One draw of the k spacings of k-1 uniform points on [0, 1].

    Sampled as normalized exponentials, which is exchangeable; the vector is
    renormalized so it sums to 1 up to floating-point rounding.
    """
    if k < 1:
        raise StatsError(f"spacing count must be >= 1, got {k}")
    e = rng.exponential(size=k)
    return e / e.sum()


def ks_statistic(sample: Sequence[float], cdf: Callable[[float], float]) -> float:
    """One-sample Kolmogorov-Smirnov statistic against a reference CDF.

    Takes both one-sided gaps around each order statistic:
    D = max_i max( F(x_(i)) - i/n, (i+1)/n - F(x_(i)) ).
    """
    xs = np.sort(np.asarray(sample, dtype=float))
    n = xs.size
    if n == 0:
        raise StatsError("KS statistic needs a non-empty sample")
    fs = np.array([cdf(float(x)) for x in xs])
    grid = np.arange(n, dtype=float)
    d_minus = np.max(fs - grid / n)
    d_plus = np.max((grid + 1.0) / n - fs)
    return float(max(d_minus, d_plus))


def ks_critical(n: int, alpha: float = 0.01) -> float:
    """Approximate large-sample KS critical value c(alpha)/sqrt(n)."""
    table = {0.10: 1.224, 0.05: 1.358, 0.01: 1.628}
    if alpha not in table:
        raise StatsError(f"supported alpha levels: {sorted(table)}, got {alpha}")
    if n < 1:
        raise StatsError(f"sample size must be >= 1, got {n}")
    return table[alpha] / math.sqrt(n)


def wilson_interval(successes: int, trials: int, z: float = 1.96) -> tuple[float, float]:
    """Wilson score interval for a binomial proportion."""
    if trials < 1:
        raise StatsError(f"trials must be >= 1, got {trials}")
    if not (0 <= successes <= trials):
        raise StatsError(f"successes {successes} outside 0..{trials}")
    if z < 0:
        raise StatsError(f"z must be >= 0, got {z}")
    p = successes / trials
    z2 = z * z
    denom = 1.0 + z2 / trials
    center = (p + z2 / (2.0 * trials)) / denom
    half = (z / denom) * math.sqrt(p * (1.0 - p) / trials + z2 / (4.0 * trials * trials))
    return (max(0.0, center - half), min(1.0, center + half))


def chi_square_sf(x: float, df: int) -> float:
    """Upper tail P(X >= x) of chi-square with integer df.

    Uses the regularized upper incomplete gamma Q(df/2, x/2) built by upward
    recurrence from Q(1/2) = erfc(sqrt(.)) or Q(1) = exp(-.), so only
    math.erfc and elementary functions are involved.
    """
    if df < 1:
        raise StatsError(f"degrees of freedom must be >= 1, got {df}")
    if x <= 0.0:
        return 1.0
    y = x / 2.0
    if df % 2 == 0:
        s = 1.0
        q = math.exp(-y)
    else:
        s = 0.5
        q = math.erfc(math.sqrt(y))
    # Q(s+1, y) = Q(s, y) + y^s e^{-y} / Gamma(s+1)
    while s < df / 2.0 - 1e-12:
        q += math.exp(s * math.log(y) - y - math.lgamma(s + 1.0))
        s += 1.0
    return min(1.0, max(0.0, q))


def chi_square_test(
    observed: Sequence[int], expected_probs: Sequence[float]
) -> tuple[float, float, int]:
    """Pearson chi-square statistic, p-value, and degrees of freedom."""
    obs = np.asarray(observed, dtype=float)
    probs = np.asarray(expected_probs, dtype=float)
    if obs.shape != probs.shape:
        raise StatsError("observed and expected lengths differ")
    if obs.size < 2:
        raise StatsError("chi-square needs at least 2 categories")
    total = obs.sum()
    if total <= 0:
        raise StatsError("observed counts sum to zero")
    if not math.isclose(float(probs.sum()), 1.0, rel_tol=1e-9, abs_tol=1e-9):
        raise StatsError(f"expected probabilities sum to {probs.sum()}, not 1")
    exp = probs * total
    if np.any(exp <= 0):
        raise StatsError("every category needs positive expected count")
    stat = float(np.sum((obs - exp) ** 2 / exp))
    df = obs.size - 1
    return stat, chi_square_sf(stat, df), df

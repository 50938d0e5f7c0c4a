"""Signal-power distribution families and their CGF machinery.

Each family exposes the cumulant generating function K(t) = log E[exp(t X)]
with exact first and second derivatives, a third derivative (analytic or
finite-difference, see ``cgf_d3``), the open convergence strip of the MGF,
the characteristic function M(jt), and an exact sampler. All power
quantities are linear milliwatts.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .exceptions import StripViolation

# step scale for central finite differences of exact second derivatives
_CBRT_EPS = float(np.finfo(float).eps) ** (1.0 / 3.0)


@dataclass(frozen=True)
class Strip:
    """Open interval of t on which the MGF is finite."""

    lower: float
    upper: float

    def __post_init__(self):
        if not self.lower < 0.0 < self.upper:
            raise ValueError("convergence strip must contain 0 in its interior")

    @property
    def width(self) -> float:
        return self.upper - self.lower

    def contains(self, t) -> bool:
        t = np.asarray(t, dtype=float)
        return bool(np.all((t > self.lower) & (t < self.upper)))

    def require(self, t) -> None:
        if not self.contains(t):
            raise StripViolation(
                f"t={t!r} outside open convergence strip ({self.lower}, {self.upper})"
            )


class PowerDistribution:
    """Common interface of the power-distribution families.

    Subclasses implement the unchecked ``_cgf*`` kernels; the public
    methods enforce the strip. Kernels accept scalars or ndarrays.
    """

    def strip(self) -> Strip:
        raise NotImplementedError

    @property
    def mean(self) -> float:
        raise NotImplementedError

    @property
    def variance(self) -> float:
        raise NotImplementedError

    def cgf(self, t):
        self.strip().require(t)
        return self._cgf(t)

    def cgf_d1(self, t):
        self.strip().require(t)
        return self._cgf_d1(t)

    def cgf_d2(self, t):
        self.strip().require(t)
        return self._cgf_d2(t)

    def cgf_d3(self, t: float) -> float:
        """Third CGF derivative.

        Default is a central finite difference of the exact second
        derivative; families with simple closed forms override it.
        """
        strip = self.strip()
        strip.require(t)
        h = _CBRT_EPS * max(1.0, abs(t))
        if math.isfinite(strip.width):
            h = max(h, _CBRT_EPS / strip.width)
        # keep both stencil points well inside the strip
        if math.isfinite(strip.upper):
            h = min(h, 0.25 * (strip.upper - t))
        if math.isfinite(strip.lower):
            h = min(h, 0.25 * (t - strip.lower))
        return (self._cgf_d2(t + h) - self._cgf_d2(t - h)) / (2.0 * h)

    def characteristic_function(self, t):
        """M(jt) for real t, principal branch; finite for all real t."""
        raise NotImplementedError

    def sample(self, rng: np.random.Generator, size=None):
        """Draw power samples whose population MGF equals the family MGF."""
        raise NotImplementedError

    def _cgf(self, t):
        raise NotImplementedError

    def _cgf_d1(self, t):
        raise NotImplementedError

    def _cgf_d2(self, t):
        raise NotImplementedError


@dataclass(frozen=True)
class NakagamiM(PowerDistribution):
    """Gamma-distributed power: shape m, rate m / mean_power."""

    m: float
    mean_power: float

    def __post_init__(self):
        if not self.m >= 0.5:
            raise ValueError(f"Nakagami shape m must be >= 0.5, got {self.m}")
        if not self.mean_power > 0:
            raise ValueError(f"mean_power must be > 0, got {self.mean_power}")

    @property
    def rate(self) -> float:
        return self.m / self.mean_power

    def strip(self) -> Strip:
        return Strip(-math.inf, self.rate)

    @property
    def mean(self) -> float:
        return self.mean_power

    @property
    def variance(self) -> float:
        return self.mean_power ** 2 / self.m

    def _cgf(self, t):
        return -self.m * np.log1p(-np.asarray(t) / self.rate)

    def _cgf_d1(self, t):
        return self.m / (self.rate - np.asarray(t))

    def _cgf_d2(self, t):
        return self.m / (self.rate - np.asarray(t)) ** 2

    def cgf_d3(self, t: float) -> float:
        self.strip().require(t)
        return 2.0 * self.m / (self.rate - t) ** 3

    def characteristic_function(self, t):
        z = 1.0 - 1j * np.asarray(t) / self.rate
        return np.exp(-self.m * np.log(z))

    def sample(self, rng, size=None):
        return rng.gamma(shape=self.m, scale=self.mean_power / self.m, size=size)


@dataclass(frozen=True)
class Rician(PowerDistribution):
    """Line-of-sight power model: Rice factor r, r = 0 is Rayleigh."""

    r: float
    mean_power: float

    def __post_init__(self):
        if not self.r >= 0:
            raise ValueError(f"Rice factor r must be >= 0, got {self.r}")
        if not self.mean_power > 0:
            raise ValueError(f"mean_power must be > 0, got {self.mean_power}")

    def strip(self) -> Strip:
        return Strip(-math.inf, (1.0 + self.r) / self.mean_power)

    @property
    def mean(self) -> float:
        return self.mean_power

    @property
    def variance(self) -> float:
        return self.mean_power ** 2 * (1.0 + 2.0 * self.r) / (1.0 + self.r) ** 2

    def _cgf(self, t):
        a = 1.0 + self.r
        s = np.asarray(t) * self.mean_power
        return np.log(a) - np.log(a - s) + self.r * s / (a - s)

    def _cgf_d1(self, t):
        a = 1.0 + self.r
        s = np.asarray(t) * self.mean_power
        return self.mean_power * (a * a - s) / (a - s) ** 2

    def _cgf_d2(self, t):
        a = 1.0 + self.r
        s = np.asarray(t) * self.mean_power
        return self.mean_power ** 2 * (2.0 * a * a - a - s) / (a - s) ** 3

    def characteristic_function(self, t):
        a = 1.0 + self.r
        denom = a - 1j * np.asarray(t) * self.mean_power
        return (a / denom) * np.exp(self.r * 1j * np.asarray(t) * self.mean_power / denom)

    def sample(self, rng, size=None):
        nu = math.sqrt(self.r * self.mean_power / (1.0 + self.r))
        sigma = math.sqrt(self.mean_power / (2.0 * (1.0 + self.r)))
        x = rng.normal(nu, sigma, size=size)
        y = rng.normal(0.0, sigma, size=size)
        return x * x + y * y


# validation bound: the power PDF/MGF degenerate as |b| -> 1
_HOYT_B_MAX = 1.0 - 1e-9


@dataclass(frozen=True)
class Hoyt(PowerDistribution):
    """Unequal-variance two-Gaussian power model; asymmetry b, b = 0 is Rayleigh."""

    b: float
    mean_power: float

    def __post_init__(self):
        if not abs(self.b) <= _HOYT_B_MAX:
            raise ValueError(
                f"Hoyt asymmetry |b| must be < 1, got {self.b}. Parameters from the "
                "fading-figure convention convert as b = (1 - m**2) / (1 + m**2)."
            )
        if not self.mean_power > 0:
            raise ValueError(f"mean_power must be > 0, got {self.mean_power}")

    def strip(self) -> Strip:
        return Strip(-math.inf, 1.0 / (self.mean_power * (1.0 + abs(self.b))))

    @property
    def mean(self) -> float:
        return self.mean_power

    @property
    def variance(self) -> float:
        return self.mean_power ** 2 * (1.0 + self.b ** 2)

    def _halves(self):
        return self.mean_power * (1.0 - self.b), self.mean_power * (1.0 + self.b)

    def _cgf(self, t):
        lo, hi = self._halves()
        t = np.asarray(t)
        return -0.5 * (np.log1p(-t * lo) + np.log1p(-t * hi))

    def _cgf_d1(self, t):
        lo, hi = self._halves()
        t = np.asarray(t)
        return 0.5 * (lo / (1.0 - lo * t) + hi / (1.0 - hi * t))

    def _cgf_d2(self, t):
        lo, hi = self._halves()
        t = np.asarray(t)
        return 0.5 * (lo ** 2 / (1.0 - lo * t) ** 2 + hi ** 2 / (1.0 - hi * t) ** 2)

    def characteristic_function(self, t):
        lo, hi = self._halves()
        t = np.asarray(t)
        return np.exp(-0.5 * (np.log(1.0 - 1j * t * lo) + np.log(1.0 - 1j * t * hi)))

    def sample(self, rng, size=None):
        lo, hi = self._halves()
        x = rng.normal(0.0, math.sqrt(hi / 2.0), size=size)
        y = rng.normal(0.0, math.sqrt(lo / 2.0), size=size)
        return x * x + y * y


@dataclass(frozen=True)
class GaussianTest(PowerDistribution):
    """Gaussian test distribution; the tail formula is exact for it."""

    mu: float
    sigma2: float

    def __post_init__(self):
        if not self.sigma2 > 0:
            raise ValueError(f"sigma2 must be > 0, got {self.sigma2}")

    def strip(self) -> Strip:
        return Strip(-math.inf, math.inf)

    @property
    def mean(self) -> float:
        return self.mu

    @property
    def variance(self) -> float:
        return self.sigma2

    def _cgf(self, t):
        t = np.asarray(t)
        return self.mu * t + 0.5 * self.sigma2 * t * t

    def _cgf_d1(self, t):
        return self.mu + self.sigma2 * np.asarray(t)

    def _cgf_d2(self, t):
        return self.sigma2 * np.ones_like(np.asarray(t, dtype=float))

    def cgf_d3(self, t: float) -> float:
        return 0.0

    def characteristic_function(self, t):
        t = np.asarray(t)
        return np.exp(1j * self.mu * t - 0.5 * self.sigma2 * t * t)

    def sample(self, rng, size=None):
        return rng.normal(self.mu, math.sqrt(self.sigma2), size=size)


FAMILIES = {
    "nakagami_m": NakagamiM,
    "rician": Rician,
    "hoyt": Hoyt,
    "gaussian": GaussianTest,
}

"""Composite CGF of the outage variable: threshold * interference - signal.

For a scenario with desired-signal power S, interferer powers P_1..P_L and
linear threshold q, the outage variable is q * sum_k P_k - S. Its CGF and
derivatives are assembled term-wise with the chain-rule factors q, q**2,
q**3 and the sign flips from the negated signal argument.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .exceptions import InvalidScenario
from .fading import PowerDistribution, Strip


@dataclass(frozen=True)
class SirScenario:
    """Desired signal, interferers, linear SIR threshold and noise power (mW)."""

    desired: PowerDistribution
    interferers: tuple[PowerDistribution, ...]
    threshold_q: float
    noise_power: float = 0.0

    def __post_init__(self):
        object.__setattr__(self, "interferers", tuple(self.interferers))
        if len(self.interferers) < 1:
            raise InvalidScenario("at least one interferer is required")
        if not self.threshold_q > 0:
            raise InvalidScenario(f"threshold_q must be > 0, got {self.threshold_q}")
        if not self.noise_power >= 0:
            raise InvalidScenario(f"noise_power must be >= 0, got {self.noise_power}")


@dataclass(frozen=True)
class CgfEval:
    """CGF value and first two derivatives at a point."""

    t: float
    k: float
    k1: float
    k2: float


class CompositeCgf:
    """CGF of q * sum(interferers) - desired, with derivatives, strip and CF.

    Immutable; all evaluation methods are pure. Term sums use exact
    (error-free) accumulation so results do not depend on interferer order.
    """

    def __init__(self, desired: PowerDistribution,
                 interferers: tuple[PowerDistribution, ...], q: float):
        if len(interferers) < 1:
            raise InvalidScenario("at least one interferer is required")
        if not q > 0:
            raise InvalidScenario(f"threshold q must be > 0, got {q}")
        self.desired = desired
        self.interferers = tuple(interferers)
        self.q = float(q)
        lower = -desired.strip().upper
        upper = min(d.strip().upper for d in self.interferers) / self.q
        self.strip = Strip(lower, upper)
        self.mean = self.q * math.fsum(d.mean for d in self.interferers) - desired.mean
        self.variance = (self.q ** 2 * math.fsum(d.variance for d in self.interferers)
                         + desired.variance)

    def k(self, t: float) -> float:
        self.strip.require(t)
        q = self.q
        terms = [float(d._cgf(q * t)) for d in self.interferers]
        terms.append(float(self.desired._cgf(-t)))
        return math.fsum(terms)

    def k1(self, t: float) -> float:
        self.strip.require(t)
        q = self.q
        terms = [q * float(d._cgf_d1(q * t)) for d in self.interferers]
        terms.append(-float(self.desired._cgf_d1(-t)))
        return math.fsum(terms)

    def k2(self, t: float) -> float:
        self.strip.require(t)
        q = self.q
        terms = [q * q * float(d._cgf_d2(q * t)) for d in self.interferers]
        terms.append(float(self.desired._cgf_d2(-t)))
        return math.fsum(terms)

    def eval(self, t: float) -> CgfEval:
        self.strip.require(t)
        q = self.q
        k = [float(d._cgf(q * t)) for d in self.interferers]
        k1 = [q * float(d._cgf_d1(q * t)) for d in self.interferers]
        k2 = [q * q * float(d._cgf_d2(q * t)) for d in self.interferers]
        k.append(float(self.desired._cgf(-t)))
        k1.append(-float(self.desired._cgf_d1(-t)))
        k2.append(float(self.desired._cgf_d2(-t)))
        return CgfEval(t=t, k=math.fsum(k), k1=math.fsum(k1), k2=math.fsum(k2))

    def d3(self, t: float) -> float:
        self.strip.require(t)
        q = self.q
        terms = [q ** 3 * d.cgf_d3(q * t) for d in self.interferers]
        terms.append(-self.desired.cgf_d3(-t))
        return math.fsum(terms)

    def characteristic_function(self, t):
        """M(jt) of the composite variable, for real scalar or array t."""
        t = np.asarray(t)
        out = self.desired.characteristic_function(-t)
        for d in self.interferers:
            out = out * d.characteristic_function(self.q * t)
        return out


def build_composite(s: SirScenario) -> CompositeCgf:
    """Assemble the composite CGF object for a scenario.

    Noise power is deliberately not folded in here; SINR evaluation shifts
    the evaluation point instead (see the analysis module).
    """
    return CompositeCgf(s.desired, s.interferers, s.threshold_q)

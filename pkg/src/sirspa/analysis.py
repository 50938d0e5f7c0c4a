"""High-level metrics: outage curves over threshold grids, SINR outage, capacity."""

from __future__ import annotations

import math
from dataclasses import dataclass, replace, field

import numpy as np
from scipy.integrate import quad

from .composite import SirScenario, build_composite
from .exceptions import QuadratureNotConverged, SirspaError
from .oracles import (
    MonteCarloConfig,
    QuadratureConfig,
    exponential_signal_closed_form,
    gil_pelaez_ccdf,
    monte_carlo_outage,
)
from .saddlepoint import SolverConfig, ccdf

METHODS = ("spa", "gil_pelaez", "monte_carlo", "closed_form")


@dataclass(frozen=True)
class ThresholdGrid:
    """Inclusive SIR threshold grid in dB."""

    start_db: float
    stop_db: float
    step_db: float

    def __post_init__(self):
        if not self.start_db <= self.stop_db:
            raise ValueError("start_db must be <= stop_db")
        if not self.step_db > 0:
            raise ValueError("step_db must be > 0")
        if self._size() > 10 ** 6:
            raise ValueError("grid size exceeds 1e6 points")

    def _size(self) -> int:
        return int(math.floor((self.stop_db - self.start_db) / self.step_db + 1e-9)) + 1

    def values_db(self) -> np.ndarray:
        return self.start_db + self.step_db * np.arange(self._size())


@dataclass(frozen=True)
class OutageResult:
    """One outage evaluation with method label and diagnostics."""

    q_db: float
    q_linear: float
    p_out: float
    method: str
    t_hat: float | None = None
    iterations: int | None = None
    near_mean: bool = False
    clamped: bool = False
    error_estimate: float | None = None
    error: str | None = None


def db_to_linear(db: float) -> float:
    return 10.0 ** (db / 10.0)


def outage_point(s: SirScenario, method: str = "spa",
                 solver: SolverConfig = SolverConfig(),
                 quadrature: QuadratureConfig = QuadratureConfig(),
                 monte_carlo: MonteCarloConfig = MonteCarloConfig(),
                 q_db: float | None = None) -> OutageResult:
    """Outage probability for one scenario with the selected method.

    SINR outage with noise power N0 > 0 evaluates the composite tail at
    x = -q * N0; with N0 = 0 this is the plain SIR outage at x = 0.
    """
    q = s.threshold_q
    if q_db is None:
        q_db = 10.0 * math.log10(q)
    x = -q * s.noise_power
    if method == "spa":
        c = build_composite(s)
        p, sol = ccdf(c, x, solver)
        return OutageResult(q_db=q_db, q_linear=q, p_out=p, method=method,
                            t_hat=sol.t_hat, iterations=sol.iterations,
                            near_mean=sol.near_mean, clamped=sol.clamped)
    if method == "gil_pelaez":
        c = build_composite(s)
        p, err = gil_pelaez_ccdf(c, x, quadrature)
        return OutageResult(q_db=q_db, q_linear=q, p_out=p, method=method,
                            error_estimate=err)
    if method == "monte_carlo":
        p, se = monte_carlo_outage(s, monte_carlo)
        return OutageResult(q_db=q_db, q_linear=q, p_out=p, method=method,
                            error_estimate=se)
    if method == "closed_form":
        p = exponential_signal_closed_form(s)
        return OutageResult(q_db=q_db, q_linear=q, p_out=p, method=method)
    raise ValueError(f"unknown method {method!r}; expected one of {METHODS}")


def outage_curve(template: SirScenario, grid: ThresholdGrid, method: str = "spa",
                 solver: SolverConfig = SolverConfig(),
                 quadrature: QuadratureConfig = QuadratureConfig(),
                 monte_carlo: MonteCarloConfig = MonteCarloConfig()) -> list[OutageResult]:
    """One outage result per grid point; the template's threshold is replaced
    per point. A failed point carries an error marker instead of being dropped."""
    results = []
    for q_db in grid.values_db():
        q = db_to_linear(float(q_db))
        s = replace(template, threshold_q=q)
        try:
            results.append(outage_point(s, method, solver, quadrature,
                                        monte_carlo, q_db=float(q_db)))
        except SirspaError as exc:
            results.append(OutageResult(q_db=float(q_db), q_linear=q,
                                        p_out=math.nan, method=method,
                                        error=f"{type(exc).__name__}: {exc}"))
    return results


def sinr_outage(s: SirScenario,
                solver: SolverConfig = SolverConfig()) -> OutageResult:
    """SINR outage via the saddlepoint engine (tail at x = -q * N0)."""
    return outage_point(s, "spa", solver)


def ergodic_capacity(template: SirScenario, method: str = "spa",
                     solver: SolverConfig = SolverConfig(),
                     quadrature: QuadratureConfig = QuadratureConfig()) -> tuple[float, float]:
    """Mean capacity E[log2(1 + SINR)] in bits/s/Hz.

    Integrates the success probability over the capacity axis c with
    q = 2**c - 1, which equals the mean by the tail-integral identity.
    Truncates where the success probability falls below 1e-8.
    """
    if method not in ("spa", "gil_pelaez"):
        raise ValueError(f"capacity supports methods 'spa'/'gil_pelaez', got {method!r}")

    def success(c_val: float) -> float:
        q = 2.0 ** c_val - 1.0
        if q <= 0.0:
            return 1.0
        s = replace(template, threshold_q=q)
        comp = build_composite(s)
        x = -q * s.noise_power
        if method == "spa":
            p, _ = ccdf(comp, x, solver)
        else:
            p, _ = gil_pelaez_ccdf(comp, x, quadrature)
        return 1.0 - p

    c_max = 1.0
    while success(c_max) >= 1e-8 and c_max < 64.0:
        c_max *= 2.0
    value, err, info = quad(success, 0.0, c_max, epsabs=1e-9, epsrel=1e-8,
                            limit=400, full_output=True)[:3]
    if "last" in info and info.get("last", 0) >= 400:
        raise QuadratureNotConverged("capacity quadrature exhausted its budget",
                                     value=value, error_estimate=err)
    return max(0.0, float(value)), float(err)


def monte_carlo_capacity(template: SirScenario,
                         mc: MonteCarloConfig = MonteCarloConfig()) -> tuple[float, float]:
    """Mean of log2(1 + S / (I + N0)) over paired samples; independent capacity oracle."""
    children = np.random.SeedSequence(mc.seed).spawn(mc.batches)
    base, extra = divmod(mc.samples, mc.batches)
    batch_means = np.empty(mc.batches)
    sizes = [base + 1 if i < extra else base for i in range(mc.batches)]
    for i, (child, n) in enumerate(zip(children, sizes)):
        rng = np.random.Generator(np.random.PCG64(child))
        p0 = template.desired.sample(rng, n)
        interference = np.zeros(n)
        for d in template.interferers:
            interference += d.sample(rng, n)
        cap = np.log2(1.0 + p0 / (interference + template.noise_power))
        batch_means[i] = float(np.mean(cap))
    weights = np.asarray(sizes) / mc.samples
    mean = float(np.dot(weights, batch_means))
    if mc.batches > 1:
        std_error = float(np.std(batch_means, ddof=1)) / math.sqrt(mc.batches)
    else:
        std_error = math.nan
    return mean, std_error

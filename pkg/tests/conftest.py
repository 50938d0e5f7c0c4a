"""Shared fixtures and numerical helpers for the test suite."""

from __future__ import annotations

import math
from pathlib import Path

import numpy as np
import pytest

from sirspa import Hoyt, NakagamiM, Rician, SirScenario

CONFIG_DIR = Path(__file__).resolve().parent.parent / "configs"


def rel_err(approx: float, exact: float) -> float:
    return abs(approx - exact) / max(1.0, abs(exact))


def fd_step(t: float, dist_to_edge: float) -> float:
    """Central-difference step: scale-aware, kept well inside the strip."""
    h = 1e-5 * max(1.0, abs(t))
    if math.isfinite(dist_to_edge):
        h = min(h, 1e-3 * dist_to_edge)
    return h


def central_diff(f, t: float, h: float) -> float:
    return (f(t + h) - f(t - h)) / (2.0 * h)


def strip_points(strip, rng: np.random.Generator, n: int) -> np.ndarray:
    """Random points in the strip interior, away from the edges."""
    lo = strip.lower if math.isfinite(strip.lower) else -10.0
    hi = strip.upper if math.isfinite(strip.upper) else 10.0
    span = hi - lo
    return rng.uniform(lo + 0.05 * span, hi - 0.05 * span, size=n)


def dist_to_edge(strip, t: float) -> float:
    d_up = strip.upper - t if math.isfinite(strip.upper) else math.inf
    d_lo = t - strip.lower if math.isfinite(strip.lower) else math.inf
    return min(d_up, d_lo)


def random_distribution(rng: np.random.Generator, families=("nakagami_m", "rician", "hoyt")):
    family = families[rng.integers(len(families))]
    mean_power = float(10.0 ** (rng.uniform(-3.0, 6.0) / 10.0))
    if family == "nakagami_m":
        return NakagamiM(m=float(rng.uniform(0.5, 4.0)), mean_power=mean_power)
    if family == "rician":
        return Rician(r=float(rng.uniform(0.0, 4.0)), mean_power=mean_power)
    return Hoyt(b=float(rng.uniform(-0.9, 0.9)), mean_power=mean_power)


def random_scenario(rng: np.random.Generator, families=("nakagami_m", "rician", "hoyt"),
                    max_interferers: int = 8) -> SirScenario:
    desired = random_distribution(rng, families)
    n = int(rng.integers(1, max_interferers + 1))
    interferers = tuple(random_distribution(rng, families) for _ in range(n))
    q = float(10.0 ** (rng.uniform(-10.0, 20.0) / 10.0))
    return SirScenario(desired=desired, interferers=interferers, threshold_q=q)


@pytest.fixture
def rng():
    return np.random.default_rng(20260823)

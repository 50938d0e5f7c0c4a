"""Saddle-point solver and Lugannani-Rice tail approximation.

The saddle point solves K'(t) = x on the composite CGF. K' is strictly
increasing on the strip (convexity), so the root is unique; a safeguarded
Newton iteration from t = 0 with a bisection fallback toward the bracket
is guaranteed to find it. The tail probability is the three-term
Lugannani-Rice value, with a breakdown branch near the mean where the
1/w singularity would otherwise blow up.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace

from scipy.special import ndtr

from .composite import CompositeCgf
from .exceptions import (
    BreakdownBranchRequired,
    DivergedSolver,
    NoSaddleInStrip,
)

_SQRT_2PI = math.sqrt(2.0 * math.pi)
# never evaluate closer to a strip edge than this fraction of its scale
_EDGE_MARGIN = 1e-12


@dataclass(frozen=True)
class SolverConfig:
    """Newton-solver and breakdown-branch parameters."""

    tol: float = 1e-8
    max_iter: int = 50
    near_mean_w_threshold: float = 1e-4
    interpolation_delta: float = 1e-3  # in units of sqrt(Var)
    near_mean_method: str = "interpolate"  # or "skewness"

    def __post_init__(self):
        if not self.tol > 0:
            raise ValueError("tol must be > 0")
        if not self.max_iter >= 1:
            raise ValueError("max_iter must be >= 1")
        if not (self.near_mean_w_threshold > 0 and self.interpolation_delta > 0):
            raise ValueError("thresholds must be > 0")
        if self.near_mean_method not in ("interpolate", "skewness"):
            raise ValueError(f"unknown near_mean_method {self.near_mean_method!r}")


@dataclass(frozen=True)
class SaddleSolution:
    """Root of K'(t) = x plus the Lugannani-Rice intermediates."""

    t_hat: float
    w: float
    u: float
    iterations: int
    converged: bool
    near_mean: bool
    clamped: bool = False


def _phi(w: float) -> float:
    return math.exp(-0.5 * w * w) / _SQRT_2PI


def _edge_points(edge: float, inward_scale: float):
    """Points approaching a finite or infinite strip edge from zero."""
    if math.isfinite(edge):
        margin = _EDGE_MARGIN * max(abs(edge), 1.0)
        for i in range(1, 60):
            t = edge * (1.0 - 0.5 ** i)
            if abs(edge - t) < margin:
                return
            yield t
    else:
        sign = 1.0 if edge > 0 else -1.0
        for i in range(0, 512):
            yield sign * inward_scale * 2.0 ** i


def _bracket(c: CompositeCgf, x: float):
    """Bracket the root of K'(t) - x. K' is increasing, so the sign of the
    residual at 0 tells which half of the strip holds the root."""
    g0 = c.mean - x
    scale = max(1.0, abs(x)) / max(c.variance, 1e-300)
    if g0 > 0.0:  # root at t < 0
        for t in _edge_points(c.strip.lower, scale):
            if c.k1(t) - x < 0.0:
                return t, 0.0
        raise NoSaddleInStrip(f"K' does not cross x={x} inside the strip")
    else:  # root at t >= 0
        for t in _edge_points(c.strip.upper, scale):
            if c.k1(t) - x > 0.0:
                return 0.0, t
        raise NoSaddleInStrip(f"K' does not cross x={x} inside the strip")


def solve_saddle(c: CompositeCgf, x: float,
                 cfg: SolverConfig = SolverConfig()) -> SaddleSolution:
    """Solve K'(t) = x by safeguarded Newton iteration from t = 0.

    Every iterate stays strictly inside the strip: a proposed Newton step
    that would leave the current bracket is replaced by the midpoint of the
    iterate and the violated bracket edge. After the residual tolerance is
    met one extra Newton step polishes the root to near machine precision.
    """
    if not math.isfinite(x):
        raise ValueError(f"x must be finite, got {x}")
    scale = cfg.tol * max(1.0, abs(x), math.sqrt(c.variance))
    lo, hi = _bracket(c, x)
    t = 0.0 if lo <= 0.0 <= hi else 0.5 * (lo + hi)
    converged = False
    iterations = 0
    polish = 0
    while iterations < cfg.max_iter:
        iterations += 1
        e = c.eval(t)
        g = e.k1 - x
        if abs(g) <= scale:
            converged = True
            if polish >= 1 or g == 0.0:
                break
            polish += 1
        # tighten the bracket around the root
        if g < 0.0:
            lo = t
        else:
            hi = t
        t_new = t - g / e.k2
        if not lo < t_new < hi:
            t_new = 0.5 * (t + (hi if t_new >= hi else lo))
        assert c.strip.contains(t_new)
        if t_new == t:
            break
        t = t_new
    if not converged:
        g_final = c.k1(t) - x
        converged = abs(g_final) <= scale
    e = c.eval(t)
    arg = 2.0 * (x * t - e.k)
    w = math.copysign(math.sqrt(max(arg, 0.0)), t)
    u = t * math.sqrt(e.k2)
    near_mean = t == 0.0 or abs(w) < cfg.near_mean_w_threshold
    return SaddleSolution(t_hat=t, w=w, u=u, iterations=iterations,
                          converged=converged, near_mean=near_mean)


def lugannani_rice(c: CompositeCgf, x: float, sol: SaddleSolution) -> float:
    """Three-term Lugannani-Rice upper-tail probability at x, clamped to [0, 1]."""
    if not sol.converged:
        raise DivergedSolver("saddle solver did not converge")
    if sol.near_mean:
        raise BreakdownBranchRequired(
            "saddle point too close to the mean; use ccdf_at_mean or interpolation"
        )
    p = ndtr(-sol.w) + _phi(sol.w) * (1.0 / sol.u - 1.0 / sol.w)
    return min(1.0, max(0.0, float(p)))


def ccdf_at_mean(c: CompositeCgf) -> float:
    """Skewness-corrected tail probability at x = E[X] (saddle point 0)."""
    k2 = c.k2(0.0)
    k3 = c.d3(0.0)
    p = 0.5 - k3 / (6.0 * _SQRT_2PI * k2 ** 1.5)
    return min(1.0, max(0.0, p))


def _lr_at(c: CompositeCgf, x: float, cfg: SolverConfig) -> float:
    sol = solve_saddle(c, x, cfg)
    if not sol.converged:
        raise DivergedSolver(f"saddle solver did not converge at x={x}")
    if sol.near_mean:
        # interpolation anchor degenerated onto the mean; fall back
        return ccdf_at_mean(c)
    return lugannani_rice(c, x, sol)


def ccdf(c: CompositeCgf, x: float,
         cfg: SolverConfig = SolverConfig()) -> tuple[float, SaddleSolution]:
    """Upper-tail probability of the composite variable at x.

    Routes through the Lugannani-Rice formula away from the mean. Inside
    the breakdown neighborhood (|w| below the configured threshold) the
    value is linearly interpolated between the tail formula evaluated at
    mean +- delta * sqrt(Var); the skewness-corrected mean value is
    available instead via ``near_mean_method="skewness"``.
    """
    sol = solve_saddle(c, x, cfg)
    if not sol.converged:
        raise DivergedSolver(f"saddle solver did not converge at x={x}")
    if sol.near_mean:
        if cfg.near_mean_method == "skewness":
            p_raw = ccdf_at_mean(c)
        else:
            delta = cfg.interpolation_delta * math.sqrt(c.variance)
            x_lo, x_hi = c.mean - delta, c.mean + delta
            p_lo = _lr_at(c, x_lo, cfg)
            p_hi = _lr_at(c, x_hi, cfg)
            frac = (x - x_lo) / (x_hi - x_lo)
            p_raw = (1.0 - frac) * p_lo + frac * p_hi
    else:
        p_raw = ndtr(-sol.w) + _phi(sol.w) * (1.0 / sol.u - 1.0 / sol.w)
        p_raw = float(p_raw)
    p = min(1.0, max(0.0, p_raw))
    if p != p_raw:
        sol = replace(sol, clamped=True)
    return p, sol

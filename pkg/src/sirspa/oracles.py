"""Independent reference methods: Gil-Pelaez inversion, Monte Carlo, closed form.

These serve both as validation oracles for the saddlepoint engine and as
selectable computation methods in their own right.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .composite import SirScenario
from .exceptions import QuadratureNotConverged, UnsupportedScenario
from .fading import NakagamiM

# Monte Carlo streams use numpy's PCG64 via SeedSequence(seed).spawn(batch);
# recorded so results are reproducible across implementations
RNG_ALGORITHM = "numpy-pcg64-seedseq"

_GL_NODES, _GL_WEIGHTS = np.polynomial.legendre.leggauss(20)


@dataclass(frozen=True)
class QuadratureConfig:
    """Adaptive Gauss-Legendre tolerances and panel budget."""

    rel_tol: float = 1e-9
    abs_tol: float = 1e-12
    max_panels: int = 2 ** 15

    def __post_init__(self):
        if not (self.rel_tol > 0 and self.abs_tol > 0):
            raise ValueError("tolerances must be > 0")
        if not self.max_panels >= 1:
            raise ValueError("max_panels must be >= 1")


@dataclass(frozen=True)
class MonteCarloConfig:
    """Sample budget, seed and batch count for streaming error estimation."""

    samples: int = 10 ** 6
    seed: int = 0
    batches: int = 100

    def __post_init__(self):
        if not self.samples >= 1:
            raise ValueError("samples must be >= 1")
        if not 1 <= self.batches <= self.samples:
            raise ValueError("batches must be in [1, samples]")


def _gl_batch(f, a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Fixed-order Gauss-Legendre values for a batch of panels [a_i, b_i]."""
    half = 0.5 * (b - a)
    mid = 0.5 * (a + b)
    theta = mid[:, None] + half[:, None] * _GL_NODES[None, :]
    vals = f(theta.ravel()).reshape(theta.shape)
    return half * (vals @ _GL_WEIGHTS)


def gil_pelaez_ccdf(c, x: float,
                    qc: QuadratureConfig = QuadratureConfig()) -> tuple[float, float]:
    """Upper-tail probability by numerical inversion of the characteristic function.

    Evaluates 1/2 + (1/pi) * integral_0^inf Im{M(jt) exp(-jtx)} / t dt with
    the substitution t = tan(theta) mapping to a finite theta interval, then
    adaptive panel-halving Gauss-Legendre. The integrand limit at t -> 0 is
    supplied analytically (mean - x) to avoid 0/0 cancellation.

    ``c`` needs only ``characteristic_function`` and ``mean``; both the
    composite CGF object and a single power distribution qualify.

    Returns the clamped probability and the quadrature's own error estimate
    (in probability units).
    """
    mean = c.mean

    def integrand(theta):
        t = np.tan(theta)
        with np.errstate(invalid="ignore", over="ignore", divide="ignore"):
            z = c.characteristic_function(t) * np.exp(-1j * t * x)
            val = z.imag / t * (1.0 + t * t)
        return np.where(t < 1e-12, mean - x, val)

    a = np.linspace(0.0, 0.5 * np.pi, 17)[:-1]
    b = np.linspace(0.0, 0.5 * np.pi, 17)[1:]
    whole = _gl_batch(integrand, a, b)
    # tolerance on the final probability, translated to per-panel integral budget
    p_guess = 0.5 + float(np.sum(whole)) / np.pi
    tol_p = max(qc.abs_tol, qc.rel_tol * max(abs(p_guess), 1e-3))
    accepted: list[float] = []
    errors: list[float] = []
    used = len(a)
    exhausted = False
    while len(a) > 0:
        n = len(a)
        mid = 0.5 * (a + b)
        child = _gl_batch(integrand,
                          np.concatenate([a, mid]), np.concatenate([mid, b]))
        left, right = child[:n], child[n:]
        refined = left + right
        err = np.abs(refined - whole)
        ok = err <= 2.0 * tol_p * (b - a)
        if used >= qc.max_panels:
            exhausted = True
            ok = np.ones_like(ok)
        accepted.extend(refined[ok].tolist())
        errors.extend(err[ok].tolist())
        keep = ~ok
        a = np.concatenate([a[keep], mid[keep]])
        b = np.concatenate([mid[keep], b[keep]])
        whole = np.concatenate([left[keep], right[keep]])
        used += int(keep.sum())
    integral = math.fsum(accepted)
    err_p = math.fsum(errors) / np.pi
    p_raw = 0.5 + integral / np.pi
    p = min(1.0, max(0.0, p_raw))
    tol_final = max(qc.abs_tol, qc.rel_tol * max(abs(p_raw), 1e-3))
    if exhausted and err_p > tol_final:
        raise QuadratureNotConverged(
            f"error estimate {err_p:.3e} above tolerance at {qc.max_panels} panels",
            value=p, error_estimate=err_p)
    return p, err_p


def _batch_sizes(samples: int, batches: int) -> list[int]:
    base, extra = divmod(samples, batches)
    return [base + 1 if i < extra else base for i in range(batches)]


def monte_carlo_outage(s: SirScenario,
                       mc: MonteCarloConfig = MonteCarloConfig()) -> tuple[float, float]:
    """Empirical outage frequency: fraction of draws with q*(I + N0) > S.

    Deterministic for a fixed seed: batch b always uses the b-th spawned
    child of SeedSequence(seed), so the result is invariant to how batches
    are scheduled.
    """
    children = np.random.SeedSequence(mc.seed).spawn(mc.batches)
    sizes = _batch_sizes(mc.samples, mc.batches)
    q, n0 = s.threshold_q, s.noise_power
    hits = 0
    batch_means = np.empty(mc.batches)
    for i, (child, n) in enumerate(zip(children, sizes)):
        rng = np.random.Generator(np.random.PCG64(child))
        p0 = s.desired.sample(rng, n)
        interference = np.zeros(n)
        for d in s.interferers:
            interference += d.sample(rng, n)
        count = int(np.count_nonzero(q * (interference + n0) > p0))
        hits += count
        batch_means[i] = count / n if n else 0.0
    p = hits / mc.samples
    if mc.batches > 1:
        std_error = float(np.std(batch_means, ddof=1)) / math.sqrt(mc.batches)
    else:
        std_error = math.sqrt(max(p * (1.0 - p), 1.0 / mc.samples) / mc.samples)
    return p, std_error


def exponential_signal_closed_form(s: SirScenario) -> float:
    """Exact outage for an exponential signal and gamma interferers.

    Valid when the desired power is Nakagami-m with m = 1 (rate L0) and all
    interferers are Nakagami-m: the outage equals
    1 - exp(-L0*q*N0) * prod_k (1 + q*L0/L_k)^(-m_k),
    from Pr(S > y) = exp(-L0*y) averaged over the interference MGF.
    """
    d = s.desired
    if not isinstance(d, NakagamiM) or abs(d.m - 1.0) > 1e-12:
        raise UnsupportedScenario("closed form needs an exponential (m=1) signal")
    if not all(isinstance(k, NakagamiM) for k in s.interferers):
        raise UnsupportedScenario("closed form needs Nakagami-m interferers")
    lam0 = d.rate
    q = s.threshold_q
    log_success = -lam0 * q * s.noise_power - math.fsum(
        k.m * math.log1p(q * lam0 / k.rate) for k in s.interferers)
    return 1.0 - math.exp(log_success)

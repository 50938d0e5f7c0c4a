"""Composite CGF of q * interference - signal: assembly, strips, derivatives."""

import math
from dataclasses import replace

import numpy as np
import pytest

from sirspa import (
    CompositeCgf,
    GaussianTest,
    Hoyt,
    InvalidScenario,
    NakagamiM,
    Rician,
    SirScenario,
    StripViolation,
    build_composite,
)

from conftest import central_diff, dist_to_edge, fd_step, random_scenario, strip_points


def rayleigh_pair(q: float = 1.0) -> SirScenario:
    d = NakagamiM(m=1.0, mean_power=1.0)
    return SirScenario(desired=d, interferers=(d,), threshold_q=q)


def fig4_scenario(q: float = 1.0) -> SirScenario:
    return SirScenario(
        desired=NakagamiM(m=2.0, mean_power=10.0 ** 0.5),
        interferers=tuple(NakagamiM(m=m, mean_power=1.0)
                          for m in (3.7, 3.5, 4.1, 1.7, 2.1)),
        threshold_q=q,
    )


class TestScenarioValidation:
    def test_needs_interferer(self):
        d = NakagamiM(m=1.0, mean_power=1.0)
        with pytest.raises(InvalidScenario):
            SirScenario(desired=d, interferers=(), threshold_q=1.0)

    def test_threshold_positive(self):
        d = NakagamiM(m=1.0, mean_power=1.0)
        with pytest.raises(InvalidScenario):
            SirScenario(desired=d, interferers=(d,), threshold_q=0.0)

    def test_noise_nonnegative(self):
        d = NakagamiM(m=1.0, mean_power=1.0)
        with pytest.raises(InvalidScenario):
            SirScenario(desired=d, interferers=(d,), threshold_q=1.0,
                        noise_power=-0.1)


class TestStripAssembly:
    def test_rayleigh_pair_strip(self):
        c = build_composite(rayleigh_pair())
        assert c.strip.lower == pytest.approx(-1.0)
        assert c.strip.upper == pytest.approx(1.0)

    def test_five_interferer_strip(self):
        p0 = 10.0 ** 0.5  # 5 dBm
        s = SirScenario(
            desired=NakagamiM(m=1.0, mean_power=p0),
            interferers=tuple(NakagamiM(m=1.0, mean_power=1.0) for _ in range(5)),
            threshold_q=1.0)
        c = build_composite(s)
        assert c.strip.lower == pytest.approx(-1.0 / p0)
        assert c.strip.upper == pytest.approx(1.0)

    def test_threshold_scales_upper(self):
        c = build_composite(rayleigh_pair(q=4.0))
        assert c.strip.upper == pytest.approx(0.25)
        assert c.strip.lower == pytest.approx(-1.0)

    def test_mixed_families_strip(self):
        s = SirScenario(
            desired=NakagamiM(m=2.0, mean_power=2.0),
            interferers=(NakagamiM(m=1.0, mean_power=1.0),
                         Rician(r=1.0, mean_power=4.0),
                         Hoyt(b=0.5, mean_power=1.0)),
            threshold_q=2.0)
        c = build_composite(s)
        # binding interferer: min(1.0, 0.5, 2/3) / q
        assert c.strip.upper == pytest.approx(0.25)
        assert c.strip.lower == pytest.approx(-1.0)

    def test_strip_edges(self):
        c = build_composite(rayleigh_pair())
        width = c.strip.width
        e = c.eval(c.strip.upper - 1e-9 * width)
        assert math.isfinite(e.k) and math.isfinite(e.k1) and math.isfinite(e.k2)
        with pytest.raises(StripViolation):
            c.eval(c.strip.upper)
        with pytest.raises(StripViolation):
            c.eval(c.strip.upper + 1e-12)
        with pytest.raises(StripViolation):
            c.k(c.strip.lower)


class TestEval:
    def test_zero_point_cumulants(self, rng):
        for _ in range(50):
            s = random_scenario(rng)
            c = build_composite(s)
            e = c.eval(0.0)
            mean = s.threshold_q * sum(d.mean for d in s.interferers) - s.desired.mean
            var = (s.threshold_q ** 2 * sum(d.variance for d in s.interferers)
                   + s.desired.variance)
            assert e.k == 0.0
            assert e.k1 == pytest.approx(mean, rel=1e-12, abs=1e-12)
            assert e.k2 == pytest.approx(var, rel=1e-12)
            assert c.mean == pytest.approx(mean, rel=1e-12, abs=1e-12)
            assert c.variance == pytest.approx(var, rel=1e-12)

    def test_rayleigh_pair_point(self):
        e = build_composite(rayleigh_pair()).eval(0.5)
        assert e.k == pytest.approx(-math.log(0.5) - math.log(1.5), abs=1e-14)

    def test_fig4_point_term_recomputation(self):
        s = fig4_scenario()
        c = build_composite(s)
        t = 0.1
        k = sum(float(d.cgf(s.threshold_q * t)) for d in s.interferers)
        k += float(s.desired.cgf(-t))
        assert c.k(t) == pytest.approx(k, rel=1e-14)

    def test_finite_difference_consistency(self, rng):
        for _ in range(10):
            s = random_scenario(rng)
            c = build_composite(s)
            for t in strip_points(c.strip, rng, 100):
                h = fd_step(t, dist_to_edge(c.strip, t))
                e = c.eval(t)
                assert abs(central_diff(c.k, t, h) - e.k1) <= 1e-6 * max(1.0, abs(e.k1))
                assert abs(central_diff(c.k1, t, h) - e.k2) <= 1e-6 * max(1.0, abs(e.k2))
                assert e.k2 > 0.0

    def test_eval_matches_split_methods(self, rng):
        s = random_scenario(rng)
        c = build_composite(s)
        for t in strip_points(c.strip, rng, 20):
            e = c.eval(t)
            assert e.k == c.k(t)
            assert e.k1 == c.k1(t)
            assert e.k2 == c.k2(t)

    def test_permutation_bit_identity(self):
        s = fig4_scenario()
        c1 = CompositeCgf(s.desired, s.interferers, s.threshold_q)
        c2 = CompositeCgf(s.desired, tuple(reversed(s.interferers)), s.threshold_q)
        for t in (-0.2, 0.0, 0.1, 0.3):
            e1, e2 = c1.eval(t), c2.eval(t)
            assert (e1.k, e1.k1, e1.k2) == (e2.k, e2.k1, e2.k2)

    def test_monte_carlo_moments(self, rng):
        for _ in range(5):
            s = random_scenario(rng, max_interferers=4)
            c = build_composite(s)
            n = 10 ** 6
            gen = np.random.default_rng(rng.integers(2 ** 32))
            gamma = s.threshold_q * sum(d.sample(gen, n) for d in s.interferers)
            gamma -= s.desired.sample(gen, n)
            se_mean = np.std(gamma, ddof=1) / math.sqrt(n)
            assert abs(np.mean(gamma) - c.mean) <= 4.0 * se_mean
            centered = gamma - np.mean(gamma)
            m2 = np.mean(centered ** 2)
            m4 = np.mean(centered ** 4)
            se_var = math.sqrt(max(m4 - m2 ** 2, 0.0) / n)
            assert abs(np.var(gamma) - c.variance) <= 4.0 * se_var


class TestThirdDerivative:
    def test_all_gaussian(self):
        s = SirScenario(desired=GaussianTest(mu=1.0, sigma2=1.0),
                        interferers=(GaussianTest(mu=2.0, sigma2=0.5),),
                        threshold_q=1.0)
        assert build_composite(s).d3(0.3) == 0.0

    def test_symmetric_pair_cancels(self):
        assert build_composite(rayleigh_pair()).d3(0.0) == pytest.approx(0.0, abs=1e-13)

    def test_fig4_matches_fd_of_k2(self):
        c = build_composite(fig4_scenario())
        h = 1e-5
        fd = central_diff(c.k2, 0.0, h)
        assert c.d3(0.0) == pytest.approx(fd, rel=1e-5)


class TestCharacteristicFunction:
    def test_zero(self):
        c = build_composite(fig4_scenario())
        assert complex(c.characteristic_function(0.0)) == pytest.approx(1.0 + 0.0j)

    def test_rayleigh_pair_point(self):
        c = build_composite(rayleigh_pair())
        assert complex(c.characteristic_function(1.0)) == pytest.approx(
            0.5 + 0.0j, abs=1e-15)

    def test_modulus_and_symmetry(self, rng):
        s = random_scenario(rng)
        c = build_composite(s)
        ts = np.linspace(-30.0, 30.0, 101)
        cf = c.characteristic_function(ts)
        assert np.all(np.abs(cf) <= 1.0 + 1e-12)
        assert np.allclose(c.characteristic_function(-ts), np.conj(cf), atol=1e-14)

    def test_empirical_cf_fig2_style(self):
        s = SirScenario(
            desired=Rician(r=2.0, mean_power=10.0 ** 0.5),
            interferers=tuple(Rician(r=0.5, mean_power=1.0) for _ in range(5)),
            threshold_q=1.0)
        c = build_composite(s)
        t = 3.0
        n = 10 ** 7
        gen = np.random.default_rng(13)
        gamma = s.threshold_q * sum(d.sample(gen, n) for d in s.interferers)
        gamma -= s.desired.sample(gen, n)
        emp = np.mean(np.exp(1j * t * gamma))
        assert abs(emp - complex(c.characteristic_function(t))) <= 1e-3

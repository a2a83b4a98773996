import math
from dataclasses import replace

import numpy as np
import pytest
from scipy import stats

from thzrf import channel, mc, perf
from thzrf.errors import ParameterError
from thzrf.perf import modulation_for_order

from conftest import with_thz

N = 10**6
KS_CRIT_1PCT = 1.6276 / math.sqrt(N)


def ks(samples, cdf):
    return stats.kstest(samples, cdf).statistic


class TestRng:
    def test_seed_replay(self, baseline):
        g = baseline.geometry
        a = mc.sample_hpf(baseline.thz, g, mc.make_rng(7), 100)
        b = mc.sample_hpf(baseline.thz, g, mc.make_rng(7), 100)
        assert np.array_equal(a, b)
        assert not np.array_equal(a, mc.sample_hpf(baseline.thz, g, mc.make_rng(8), 100))

    def test_streams_differ(self):
        assert mc.make_rng(1, stream=0).random() != mc.make_rng(1, stream=1).random()

    @pytest.mark.parametrize("seed", [-1, 2**64])
    def test_bad_seed(self, seed):
        with pytest.raises(ParameterError):
            mc.make_rng(seed)


class TestSamplers:
    def test_rayleigh_special_case(self, baseline):
        params = replace(baseline.thz, alpha=2.0, mu=1, h_hat_f=1.3)
        r = mc.sample_alpha_mu(params, mc.make_rng(1), N)
        assert ks(r, lambda x: -np.expm1(-(x / 1.3) ** 2)) < KS_CRIT_1PCT

    @pytest.mark.parametrize("alpha, mu", [(2.0, 3), (1.0, 2), (0.6, 4)])
    def test_alpha_moment(self, baseline, alpha, mu):
        params = replace(baseline.thz, alpha=alpha, mu=mu, h_hat_f=0.8)
        r_alpha = mc.sample_alpha_mu(params, mc.make_rng(2), N) ** alpha
        stderr = r_alpha.std(ddof=1) / math.sqrt(N)
        assert abs(r_alpha.mean() - 0.8**alpha) <= 3 * stderr

    def test_non_integer_mu(self, baseline):
        fake = type("P", (), {"mu": 1.5, "alpha": 1.0, "h_hat_f": 1.0})()
        with pytest.raises(ParameterError):
            mc.sample_alpha_mu(fake, mc.make_rng(0), 10)

    def test_pointing_loss_centre(self, baseline):
        g = baseline.geometry
        assert mc.pointing_loss(0.0, g) == g.S0

    def test_pointing_loss_cdf(self, baseline):
        g = baseline.geometry
        h = mc.sample_pointing_loss(g, baseline.thz.sigma_s, mc.make_rng(3), N)
        assert np.all((h > 0) & (h <= g.S0))
        assert ks(h, lambda y: np.clip(y / g.S0, 0, 1) ** g.phi) < KS_CRIT_1PCT

    def test_no_jitter(self, baseline):
        g = baseline.geometry
        h = mc.sample_pointing_loss(g, 1e-9, mc.make_rng(4), 10_000)
        assert np.all(np.abs(h - g.S0) <= 1e-6)

    def test_composite_positive_and_median(self, baseline):
        g = baseline.geometry
        h = mc.sample_hpf(baseline.thz, g, mc.make_rng(5), N)
        assert np.all(h > 0)
        # F(median) is a Binomial proportion around 1/2
        assert abs(channel.hpf_cdf(np.median(h), g, baseline.thz) - 0.5) <= 3 * 0.5 / math.sqrt(N)

    def test_rf_hop_quantiles(self, baseline):
        gbar = baseline.gamma2_mean
        g2 = gbar * mc.make_rng(6).standard_exponential(N)
        for q in (0.05, 0.25, 0.5, 0.75, 0.95):
            x = -gbar * math.log1p(-q)
            emp = np.mean(g2 <= x)
            assert abs(emp - perf.snr_cdf_hop2(x, baseline)) <= 3 * math.sqrt(q * (1 - q) / N)


class TestEstimators:
    def test_zero_threshold(self, baseline):
        est = mc.simulate_op(replace(baseline, gamma_th=0.0), 10_000, 1)
        assert est.value == 0.0 and est.stderr == 0.0

    def test_dead_rf_hop(self, baseline):
        assert mc.simulate_op(replace(baseline, er_over_no2=1e-30), 10_000, 1).value == 1.0

    def test_op_matches_closed_form(self, baseline):
        est = mc.simulate_op(baseline, N, 11)
        assert est.within(perf.outage_probability(baseline))

    @pytest.mark.parametrize("M", [4, 16])
    def test_ser_matches_closed_form(self, baseline, M):
        mod = modulation_for_order(M)
        est = mc.simulate_ser(baseline, mod, N, 12)
        assert est.within(perf.average_ser_closed_form(baseline, mod))

    def test_ser_limits(self, baseline):
        huge_b = perf.Modulation(1.0, 1e12, "test")
        assert mc.simulate_ser(baseline, huge_b, 10_000, 1).value < 1e-12
        mod = modulation_for_order(16)
        est = mc.simulate_ser(replace(baseline, es_over_no1=1e-30), mod, 10_000, 1)
        assert est.value == pytest.approx(mod.a / 2, rel=1e-9)

    def test_bit_reproducible(self, baseline):
        a = mc.simulate_op(baseline, 300_000, 99, chunk=70_000)
        b = mc.simulate_op(baseline, 300_000, 99, chunk=70_000)
        assert a == b
        c = mc.simulate_ser(baseline, modulation_for_order(4), 200_000, 99, strands=3)
        d = mc.simulate_ser(baseline, modulation_for_order(4), 200_000, 99, strands=3)
        assert c == d

    def test_stderr_scaling(self, baseline):
        mod = modulation_for_order(4)
        small = mc.simulate_ser(baseline, mod, 10**4, 21)
        large = mc.simulate_ser(baseline, mod, 10**6, 22)
        assert small.stderr / large.stderr == pytest.approx(10.0, rel=0.2)

    def test_merge_matches_direct_moments(self):
        values = np.random.default_rng(0).normal(3.0, 2.0, 10_001)
        parts = [mc._moments(chunk) for chunk in np.array_split(values, 7)]
        est = mc._merge(parts)
        assert est.value == pytest.approx(values.mean(), rel=1e-14)
        assert est.stderr == pytest.approx(values.std(ddof=1) / math.sqrt(values.size), rel=1e-12)

    def test_transparent_rf_is_hop1_only(self, baseline):
        s = replace(baseline, er_over_no2=1e30)
        est = mc.simulate_op(s, N, 31)
        g = s.geometry
        gamma1 = s.gamma1_scale * mc.sample_hpf(s.thz, g, mc.make_rng(32), N) ** 2
        hop1 = np.mean(gamma1 <= s.gamma_th)
        assert abs(est.value - hop1) <= 3 * math.sqrt(2) * est.stderr

    def test_too_few_trials(self, baseline):
        with pytest.raises(ParameterError):
            mc.simulate_op(baseline, 1, 0)

    def test_other_fading_orders(self, baseline):
        s = with_thz(baseline, alpha=2.0, mu=3)
        assert mc.simulate_op(s, N, 41).within(perf.outage_probability(s))

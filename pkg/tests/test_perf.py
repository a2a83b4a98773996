import math
from dataclasses import replace

import mpmath as mp
import numpy as np
import pytest

from thzrf import perf, specfun
from thzrf.errors import ConvergenceError, DomainError, ParameterError
from thzrf.perf import modulation_constants, modulation_for_order

from conftest import with_thz

MODS = [modulation_for_order(M) for M in (2, 4, 16)]


def min_combining(x, scenario):
    f1 = perf.snr_cdf_hop1(x, scenario)
    f2 = perf.snr_cdf_hop2(x, scenario)
    return f1 + f2 - f1 * f2


class TestModulation:
    def test_constants(self):
        def ab(mod):
            return mod.a, mod.b

        assert ab(modulation_constants("bpsk")) == (1.0, 0.5)
        assert ab(modulation_constants("qpsk")) == (1.0, 0.25)
        for M in (4, 16, 64, 256):
            assert ab(modulation_constants("mqam", M)) == (4.0, 3.0 / (M - 1))

    def test_order_axis(self):
        assert modulation_for_order(2).label == "BPSK"
        assert modulation_for_order(16).label == "16-QAM"

    @pytest.mark.parametrize("M", [None, 2, 6, 12])
    def test_bad_qam_order(self, M):
        with pytest.raises(ParameterError):
            modulation_constants("mqam", M)

    def test_unknown_scheme(self):
        with pytest.raises(ParameterError):
            modulation_constants("8psk")


class TestPerHop:
    def test_origin(self, baseline):
        assert perf.snr_cdf_hop1(0.0, baseline) == 0.0
        assert perf.snr_cdf_hop2(0.0, baseline) == 0.0
        assert perf.e2e_snr_cdf(0.0, baseline) == 0.0

    def test_hop2_median(self, baseline):
        assert perf.snr_cdf_hop2(baseline.gamma2_mean * math.log(2), baseline) == pytest.approx(0.5, rel=1e-14)

    def test_hop1_expanded_form(self, baseline):
        # 1 - (phi/alpha) (x / (S0^2 h^2 g1))^(phi/2) sum_k mu^(phi/alpha)/k! Gamma(k - phi/alpha, y)
        mp.mp.dps = 40
        thz, g = baseline.thz, baseline.geometry
        beta = g.phi / thz.alpha
        rng = np.random.default_rng(5)
        for x in 10 ** rng.uniform(-2, 5, 50):
            ratio = mp.mpf(x) / (g.S0**2 * thz.h_hat_f**2 * baseline.gamma1_scale)
            y = thz.mu * ratio ** (mp.mpf(thz.alpha) / 2)
            total = sum(mp.mpf(thz.mu) ** beta / mp.factorial(k) * mp.gammainc(k - beta, y) for k in range(thz.mu))
            expected = float(1 - beta * ratio ** (mp.mpf(g.phi) / 2) * total)
            assert perf.snr_cdf_hop1(x, baseline) == pytest.approx(expected, abs=1e-12)

    def test_negative_argument(self, baseline):
        with pytest.raises(DomainError):
            perf.e2e_snr_cdf(-1.0, baseline)


class TestEndToEnd:
    def test_min_combining_identity(self, make_scenario):
        rng = np.random.default_rng(17)
        worst = 0.0
        for _ in range(40):
            s = make_scenario(
                sigma_s_mm=rng.uniform(1, 20), es_over_no1_db=rng.uniform(0, 60),
                er_over_no2_db=rng.uniform(20, 80), alpha=rng.uniform(0.5, 3), mu=int(rng.integers(1, 5)),
            )
            x = 10 ** rng.uniform(-3, 5, 5)
            worst = max(worst, np.max(np.abs(perf.e2e_snr_cdf(x, s) - min_combining(x, s))))
        assert worst <= 1e-10

    def test_monotone_and_bounded(self, baseline):
        x = np.geomspace(1e-4, 1e6, 500)
        F = perf.e2e_snr_cdf(x, baseline)
        assert np.all(np.diff(F) >= 0) and F[0] >= 0 and F[-1] <= 1

    def test_rf_transparent_limit(self, make_scenario):
        s = make_scenario(er_over_no2_db=300)
        x = np.geomspace(1e-2, 1e5, 40)
        assert np.max(np.abs(perf.e2e_snr_cdf(x, s) - perf.snr_cdf_hop1(x, s))) <= 1e-9

    def test_worst_link_floors(self, baseline):
        strong_thz = replace(baseline, es_over_no1=1e30)
        assert abs(perf.outage_probability(strong_thz) - perf.snr_cdf_hop2(baseline.gamma_th, baseline)) <= 1e-9
        strong_rf = replace(baseline, er_over_no2=1e30)
        assert abs(perf.outage_probability(strong_rf) - perf.snr_cdf_hop1(baseline.gamma_th, baseline)) <= 1e-9

    def test_zero_threshold(self, baseline):
        assert perf.outage_probability(replace(baseline, gamma_th=0.0)) == 0.0

    def test_op_monotone_in_knobs(self, make_scenario):
        es = [perf.outage_probability(make_scenario(es_over_no1_db=v)) for v in range(0, 61, 5)]
        er = [perf.outage_probability(make_scenario(er_over_no2_db=v)) for v in range(0, 81, 5)]
        sig = [perf.outage_probability(make_scenario(sigma_s_mm=v)) for v in range(1, 21)]
        assert np.all(np.diff(es) <= 0) and np.all(np.diff(er) <= 0) and np.all(np.diff(sig) >= 0)


class TestSer:
    @pytest.mark.parametrize("mod", MODS, ids=lambda m: m.label)
    @pytest.mark.parametrize(
        "overrides",
        [{}, {"sigma_s_mm": 2}, {"sigma_s_mm": 20, "es_over_no1_db": 60}, {"alpha": 2.5, "mu": 3}, {"alpha": 0.6, "mu": 1}],
    )
    def test_closed_form_matches_quadrature(self, make_scenario, mod, overrides):
        s = make_scenario(**overrides)
        closed = perf.average_ser_closed_form(s, mod)
        quad = perf.average_ser_quadrature(s, mod)
        assert closed == pytest.approx(quad, rel=1e-8)
        assert 0 < closed <= mod.a / 2

    def test_fox_h_terms_are_real(self, baseline):
        params = perf.ser_fox_h_params(baseline, 0)
        value, info = specfun.fox_h(params, 0.3, full_output=True)
        assert abs(info.imag) <= 1e-8 * abs(value)

    def test_total_outage_limit(self, baseline):
        mod = MODS[2]
        s = replace(baseline, es_over_no1=1e-30)
        assert perf.average_ser_quadrature(s, mod) == pytest.approx(mod.a / 2, rel=1e-9)
        assert perf.average_ser_closed_form(s, mod) == pytest.approx(mod.a / 2, rel=1e-6)

    def test_always_outage_cdf(self):
        for mod in MODS:
            assert perf.ser_from_cdf(lambda x: 1.0, mod) == pytest.approx(mod.a / 2, rel=1e-12)

    @pytest.mark.parametrize("gbar", [0.1, 3.0, 100.0, 1e4])
    def test_rayleigh_anchor(self, gbar):
        for mod in MODS:
            expected = mod.a / 2 * (1 - math.sqrt(mod.b * gbar / (1 + mod.b * gbar)))
            got = perf.ser_from_cdf(lambda x: -math.expm1(-x / gbar), mod, breakpoints=[gbar])
            assert abs(got - expected) <= 1e-8

    def test_rayleigh_anchor_through_scenario(self, baseline):
        s = replace(baseline, es_over_no1=1e30)
        gbar = s.gamma2_mean
        for mod in MODS:
            expected = mod.a / 2 * (1 - math.sqrt(mod.b * gbar / (1 + mod.b * gbar)))
            assert abs(perf.average_ser_quadrature(s, mod) - expected) <= 1e-8
            assert abs(perf.average_ser_closed_form(s, mod) - expected) <= 1e-8

    def test_monotone(self, make_scenario):
        mod = MODS[1]
        es = [perf.average_ser_closed_form(make_scenario(es_over_no1_db=v), mod) for v in range(0, 81, 10)]
        er = [perf.average_ser_closed_form(make_scenario(er_over_no2_db=v), mod) for v in range(0, 81, 10)]
        sig = [perf.average_ser_closed_form(make_scenario(sigma_s_mm=v), mod) for v in range(1, 21)]
        assert np.all(np.diff(es) < 0) and np.all(np.diff(er) < 0) and np.all(np.diff(sig) >= 0)

    def test_convergence_failure_carries_per_k(self, baseline, monkeypatch):
        s = with_thz(baseline, mu=3)
        real = specfun.fox_h

        def flaky(params, z, **kw):
            if params.lower[0][0] == pytest.approx((s.thz.alpha * 1 - s.geometry.phi) / s.thz.alpha):
                raise ConvergenceError("forced", error_estimate=0.25)
            return real(params, z, **kw)

        monkeypatch.setattr(specfun, "fox_h", flaky)
        with pytest.raises(ConvergenceError) as exc:
            perf.average_ser_closed_form(s, MODS[0])
        assert exc.value.details["per_k_error"] == {1: 0.25}

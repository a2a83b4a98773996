"""End-to-end performance of the decode-and-forward THz-RF link.

Per-hop SNR CDFs, the end-to-end SNR CDF as a single gamma-sum expression,
outage probability, and the average SER both in closed form (a/2 minus a sum
of Fox H-functions) and by direct quadrature of -int F_e(x) dP_e/dx dx.
"""

import math
from dataclasses import dataclass

import numpy as np
from scipy import integrate

from . import channel, specfun
from .errors import ConvergenceError, DomainError, ParameterError


@dataclass(frozen=True)
class Scenario:
    """Both hops plus the transmit-SNR knobs and the outage threshold (all linear)."""

    thz: channel.ThzLinkParams
    rf: channel.RfLinkParams
    es_over_no1: float
    er_over_no2: float
    gamma_th: float

    def __post_init__(self):
        for name in ("es_over_no1", "er_over_no2"):
            value = getattr(self, name)
            if not (value > 0 and math.isfinite(value)):
                raise ParameterError(f"{name} must be finite and positive, got {value}")
        # a zero threshold is allowed: it is the never-in-outage limit
        if not (self.gamma_th >= 0 and math.isfinite(self.gamma_th)):
            raise ParameterError(f"gamma_th must be finite and >= 0, got {self.gamma_th}")

    @property
    def geometry(self):
        return channel.misalignment_geometry(self.thz)

    @property
    def gamma1_scale(self):
        """|h_l|**2 * Es/N_o1; gamma_1 is this times |h_pf|**2."""
        return channel.thz_path_gain(self.thz) ** 2 * self.es_over_no1

    @property
    def gamma2_mean(self):
        """Mean SNR of the Rayleigh RF hop, |h_g|**2 * Er/N_o2."""
        return channel.rf_path_gain(self.rf) ** 2 * self.er_over_no2


@dataclass(frozen=True)
class Modulation:
    """Conditional SER constants, P_e(x) = a * Q(sqrt(2 b x))."""

    a: float
    b: float
    label: str


def modulation_constants(scheme, M=None):
    """(a, b) for BPSK, QPSK or square M-QAM.

    >>> modulation_constants("mqam", 16)
    Modulation(a=4.0, b=0.2, label='16-QAM')
    """
    scheme = scheme.lower()
    if scheme == "bpsk":
        return Modulation(1.0, 0.5, "BPSK")
    if scheme == "qpsk":
        return Modulation(1.0, 0.25, "QPSK")
    if scheme in ("mqam", "qam"):
        if M is None or M < 4 or int(M) & (int(M) - 1):
            raise ParameterError(f"M-QAM needs M >= 4 and a power of two, got {M}")
        return Modulation(4.0, 3.0 / (M - 1), f"{int(M)}-QAM")
    raise ParameterError(f"unknown modulation {scheme!r}")


def modulation_for_order(M):
    """Constellation of order M on the M-QAM family axis; M = 2 is BPSK."""
    if M == 2:
        return modulation_constants("bpsk")
    return modulation_constants("mqam", M)


def _nonneg(x):
    x = np.asarray(x, dtype=float)
    if np.any(x < 0) or not np.all(np.isfinite(x)):
        raise DomainError("SNR arguments must be finite and >= 0")
    return x


def snr_cdf_hop1(x, scenario):
    """CDF of gamma_1 = |h_l|**2 |h_pf|**2 Es/N_o1."""
    x = _nonneg(x)
    return channel.hpf_cdf(np.sqrt(x / scenario.gamma1_scale), scenario.geometry, scenario.thz)


def snr_cdf_hop2(x, scenario):
    """CDF of the exponentially distributed RF-hop SNR."""
    x = _nonneg(x)
    return specfun._wrap(x, -np.expm1(-x / scenario.gamma2_mean))


def _e2e_cdf_evaluator(scenario):
    thz, geom = scenario.thz, scenario.geometry
    g1, g2 = scenario.gamma1_scale, scenario.gamma2_mean
    offset = math.log(thz.mu) - 0.5 * thz.alpha * math.log(g1) - thz.alpha * math.log(thz.h_hat_f * geom.S0)

    def cdf(x):
        flat = np.atleast_1d(np.asarray(x, dtype=float)).ravel()
        out = np.zeros_like(flat)
        pos = flat > 0
        if np.any(pos):
            xp = flat[pos]
            log_y = offset + 0.5 * thz.alpha * np.log(xp)
            comp = channel.complementary_sum(log_y, geom, thz) * np.exp(-xp / g2)
            out[pos] = np.clip(1.0 - comp, 0.0, 1.0)
        return out

    return cdf


def e2e_snr_cdf(x, scenario):
    """CDF of gamma_e = min(gamma_1, gamma_2), evaluated as one expression.

    1 - (phi/alpha) (x / (S0**2 h_hat_f**2 g1))**(phi/2) exp(-x/g2)
        * sum_k mu**(phi/alpha) / k! * Gamma(k - phi/alpha, y(x)),
    y(x) = mu (x / g1)**(alpha/2) / (h_hat_f S0)**alpha.
    """
    x = _nonneg(x)
    return specfun._wrap(x, _e2e_cdf_evaluator(scenario)(x).reshape(x.shape))


def outage_probability(scenario):
    """P[gamma_e <= gamma_th]."""
    return e2e_snr_cdf(scenario.gamma_th, scenario)


def ser_fox_h_params(scenario, k):
    """H^{2,2}_{3,3} parameters of the k-th summand of the closed-form SER."""
    alpha, phi = scenario.thz.alpha, scenario.geometry.phi
    return specfun.FoxHParams(
        upper=((-(phi + 1.0) / 2.0, alpha / 2.0), ((1.0 - phi) / 2.0, alpha / 2.0), (1.0, 1.0)),
        lower=(((alpha * k - phi) / alpha, 1.0), (0.0, 1.0), (-(phi + 1.0) / 2.0, alpha / 2.0)),
        m=2,
        n=2,
    )


def ser_closed_form_terms(scenario, mod):
    """The mu summands subtracted from a/2 in the closed-form SER."""
    thz, geom = scenario.thz, scenario.geometry
    alpha, phi, mu = thz.alpha, geom.phi, thz.mu
    g1 = scenario.gamma1_scale
    rate = 1.0 / scenario.gamma2_mean + mod.b
    log_z = (
        math.log(mu) - 0.5 * alpha * math.log(g1)
        - alpha * math.log(thz.h_hat_f * geom.S0) - 0.5 * alpha * math.log(rate)
    )
    log_pref = (
        math.log(mod.a) + 0.5 * math.log(mod.b / (4.0 * math.pi))
        + math.log(phi / alpha) + (phi / alpha) * math.log(mu)
        - 0.5 * phi * (2.0 * math.log(geom.S0 * thz.h_hat_f) + math.log(g1))
        - 0.5 * (phi + 1.0) * math.log(rate)
    )
    terms = []
    failures = {}
    for k in range(mu):
        try:
            terms.append(specfun.fox_h(
                ser_fox_h_params(scenario, k), math.exp(log_z),
                log_scale=log_pref - math.lgamma(k + 1.0),
            ))
        except ConvergenceError as exc:
            failures[k] = exc.error_estimate
    if failures:
        raise ConvergenceError(
            f"Fox H evaluation failed for k in {sorted(failures)}",
            error_estimate=max(failures.values()),
            details={"per_k_error": failures},
        )
    return terms


def average_ser_closed_form(scenario, mod):
    """Average SER as a/2 minus a sum of Fox H-functions.

    Raises:
        ConvergenceError: some Fox H summand did not converge;
            ``details['per_k_error']`` maps k to its error estimate.
    """
    total = 0.0
    for term in ser_closed_form_terms(scenario, mod):
        total += term
    return mod.a / 2.0 - total


def ser_from_cdf(cdf, mod, breakpoints=(), epsabs=1e-13, epsrel=1e-11):
    """a sqrt(b/pi) * int_0^inf cdf(u**2) exp(-b u**2) du.

    Equals -int_0^inf F(x) dP_e/dx dx after x = u**2, which removes the
    x**(-1/2) endpoint singularity. ``breakpoints`` are x-values where the
    CDF changes quickly.
    """
    upper = math.sqrt(745.0 / mod.b)
    knots = sorted({math.sqrt(p) for p in breakpoints if 0 < p and math.sqrt(p) < upper})
    edges = [0.0, *knots, upper]
    total = 0.0
    for lo, hi in zip(edges[:-1], edges[1:]):
        val, err = integrate.quad(
            lambda u: cdf(u * u) * math.exp(-mod.b * u * u), lo, hi,
            limit=400, epsabs=epsabs, epsrel=epsrel, full_output=1,
        )[:2]
        if not math.isfinite(val) or err > max(1e3 * epsabs, 1e-7 * abs(val)):
            raise ConvergenceError("SER quadrature did not converge", error_estimate=err)
        total += val
    return mod.a * math.sqrt(mod.b / math.pi) * total


def _cdf_knots(scenario):
    g1 = scenario.gamma1_scale * (scenario.thz.h_hat_f * scenario.geometry.S0) ** 2
    g2 = scenario.gamma2_mean
    return [f * g for g in (g1, g2) for f in (1e-4, 1e-2, 0.1, 0.5, 1.0, 2.0, 10.0)]


def average_ser_quadrature(scenario, mod):
    """Average SER by adaptive quadrature of the end-to-end CDF."""
    cdf = _e2e_cdf_evaluator(scenario)
    return ser_from_cdf(lambda x: cdf(x)[0], mod, _cdf_knots(scenario))

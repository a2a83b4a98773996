"""THz and RF link models.

Deterministic path gains (Friis spreading plus molecular absorption for the
THz hop, a power-law path gain for the RF hop), the misalignment geometry of
a Gaussian beam on a circular aperture, and the statistics of the composite
alpha-mu fading / pointing-error amplitude |h_pf| of the THz hop.
"""

import math
import warnings
from dataclasses import dataclass

import numpy as np
from scipy import integrate

from . import specfun
from .errors import BandWarning, DomainError, ParameterError, UnsupportedParameterError

SPEED_OF_LIGHT = 299_792_458.0  # m/s

# Absorption fit for the 275-400 GHz window; frequencies in Hz, kappa in 1/m.
ABSORPTION_Q = (0.2205, 0.1303, 0.0294, 0.4093, 0.0925, 2.014, 0.1702, 0.0303, 0.537, 0.0956)
ABSORPTION_C = (5.54e-37, -3.94e-25, 9.06e-14, -6.36e-3)
ABSORPTION_P = (10.835, 12.664)  # line centres, 1/cm
ABSORPTION_BAND = (275e9, 400e9)

BUCK_T_RANGE = (250.0, 330.0)  # K

# below this the scaled gamma argument is replaced by its small-argument limit
_SMALL_Y = 1e-290


def db_to_linear(value_db):
    return 10.0 ** (value_db / 10.0)


def linear_to_db(value):
    return 10.0 * math.log10(value)


@dataclass(frozen=True)
class ThzLinkParams:
    """Physical parameters of the source-relay THz hop (SI units, linear gains)."""

    f1: float          # carrier frequency [Hz]
    d1: float          # S-R distance [m]
    Gt1: float         # transmit antenna gain [linear]
    Gr1: float         # receive antenna gain [linear]
    T: float           # temperature [K]
    psi: float         # relative humidity [%]
    p: float           # pressure [Pa]
    alpha: float       # alpha-mu nonlinearity
    mu: int            # alpha-mu clustering, integer
    h_hat_f: float     # alpha-root mean of the fading envelope
    sigma_s: float     # pointing jitter std per axis [m]
    r1: float          # receive aperture radius [m]
    w_d1: float        # beam footprint radius at d1 [m]

    def __post_init__(self):
        for name in ("f1", "d1", "Gt1", "Gr1", "T", "p", "alpha", "h_hat_f", "sigma_s", "r1", "w_d1"):
            value = getattr(self, name)
            if not (math.isfinite(value) and value > 0):
                raise ParameterError(f"{name} must be finite and positive, got {value}")
        if not 0.0 <= self.psi <= 100.0:
            raise ParameterError(f"psi must be in [0, 100], got {self.psi}")
        if isinstance(self.mu, bool) or float(self.mu) != int(self.mu):
            raise UnsupportedParameterError(
                f"mu must be an integer for the finite-sum CDF, got {self.mu}"
            )
        if int(self.mu) < 1:
            raise ParameterError(f"mu must be >= 1, got {self.mu}")
        object.__setattr__(self, "mu", int(self.mu))


@dataclass(frozen=True)
class MisalignmentGeometry:
    zeta: float
    S0: float
    w_e: float
    phi: float


@dataclass(frozen=True)
class RfLinkParams:
    """Relay-destination RF hop."""

    fr: float     # carrier frequency [Hz]
    Gt2: float    # linear
    Gr2: float    # linear
    d2: float     # [m]
    eta2: float   # path-loss exponent

    def __post_init__(self):
        for name in ("fr", "Gt2", "Gr2", "d2", "eta2"):
            value = getattr(self, name)
            if not (math.isfinite(value) and value > 0):
                raise ParameterError(f"{name} must be finite and positive, got {value}")


def saturated_water_vapor_pressure(T, p=101325.0):
    """Saturated water vapour pressure over water in Pa (Buck 1981).

    The pressure enhancement factor is ignored, so ``p`` does not enter the
    result; it is accepted to keep the (T, p) signature of the absorption fit.
    """
    if not BUCK_T_RANGE[0] <= T <= BUCK_T_RANGE[1]:
        raise DomainError(f"Buck equation used outside {BUCK_T_RANGE} K: T={T}")
    t = T - 273.15
    return 611.21 * math.exp((18.678 - t / 234.5) * t / (257.14 + t))


def molecular_absorption(f1, T, psi, p):
    """Molecular absorption coefficient kappa in 1/m.

    Two water-vapour lines plus a cubic background. Outside 275-400 GHz the
    value is still returned but a :class:`BandWarning` is issued.
    """
    if not ABSORPTION_BAND[0] <= f1 <= ABSORPTION_BAND[1]:
        warnings.warn(
            f"absorption fit evaluated at {f1:.4g} Hz, outside 275-400 GHz",
            BandWarning,
            stacklevel=2,
        )
    q1, q2, q3, q4, q5, q6, q7, q8, q9, q10 = ABSORPTION_Q
    c1, c2, c3, c4 = ABSORPTION_C
    p1, p2 = ABSORPTION_P
    v = (psi / 100.0) * saturated_water_vapor_pressure(T, p) / p
    wavenumber = f1 / (100.0 * SPEED_OF_LIGHT)
    line1 = q1 * v * (q2 * v + q3) / ((q4 * v + q5) ** 2 + (wavenumber - p1) ** 2)
    line2 = q6 * v * (q7 * v + q8) / ((q9 * v + q10) ** 2 + (wavenumber - p2) ** 2)
    return line1 + line2 + c1 * f1**3 + c2 * f1**2 + c3 * f1 + c4


def thz_path_gain(params):
    """Deterministic amplitude gain h_l of the THz hop."""
    kappa = molecular_absorption(params.f1, params.T, params.psi, params.p)
    friis = SPEED_OF_LIGHT * math.sqrt(params.Gt1 * params.Gr1) / (4.0 * math.pi * params.f1 * params.d1)
    return friis * math.exp(-0.5 * kappa * params.d1)


def misalignment_geometry(params):
    """Pointing-error geometry of a Gaussian beam on a circular aperture."""
    zeta = math.sqrt(math.pi / 2.0) * params.r1 / params.w_d1
    erf_zeta = specfun.erf(zeta)
    S0 = erf_zeta**2
    w_e2 = params.w_d1**2 * math.sqrt(math.pi) * erf_zeta / (2.0 * zeta * math.exp(-zeta**2))
    phi = w_e2 / (2.0 * params.sigma_s**2)
    return MisalignmentGeometry(zeta=zeta, S0=S0, w_e=math.sqrt(w_e2), phi=phi)


def rf_path_gain(params):
    """Deterministic amplitude gain h_g = xi * d2**(-eta2/2) of the RF hop."""
    xi = SPEED_OF_LIGHT * math.sqrt(params.Gt2 * params.Gr2) / (4.0 * math.pi * params.fr)
    return xi * params.d2 ** (-params.eta2 / 2.0)


# ---------------------------------------------------------------------------
# composite fading statistics
# ---------------------------------------------------------------------------

_LARGE_LOG_Y = 700.0


def log_scaled_gamma_from_log_arg(a, log_y):
    """log(exp(y) * y**(-a) * Gamma(a, y)) given log y.

    Below y = 1e-290 the leading small-y behaviour of Gamma(a, y) is used,
    so the result stays finite when y itself underflows.
    """
    log_y = np.asarray(log_y, dtype=float)
    out = np.empty_like(log_y)
    small = log_y < math.log(_SMALL_Y)
    if np.any(small):
        ls = log_y[small]
        if a > 0:
            out[small] = math.lgamma(a) - a * ls
        elif a == 0:
            out[small] = np.log(-ls - specfun.EULER_GAMMA)
        else:
            out[small] = -math.log(-a)
    if np.any(~small):
        out[~small] = specfun.log_scaled_upper_incomplete_gamma(a, np.exp(log_y[~small]))
    return out


def complementary_sum(log_y, geom, params):
    """1 - F_{|h_pf|} written as the finite gamma sum, from log y.

    y = mu * x**alpha / (h_hat_f * S0)**alpha. Each summand is
    (phi/alpha) * y**(phi/alpha) * Gamma(k - phi/alpha, y) / k!. The
    y**(phi/alpha) factor cancels against the scaled gamma, leaving
    beta * y**k * exp(-y) * [exp(y) y**(beta-k) Gamma(k - beta, y)] / k!.
    """
    beta = geom.phi / params.alpha
    log_y = np.asarray(log_y, dtype=float)
    total = np.zeros_like(log_y)
    live = log_y < _LARGE_LOG_Y  # exp(-y) underflows beyond this
    if not np.any(live):
        return total
    ly = log_y[live]
    y = np.exp(ly)
    for k in range(params.mu):
        log_term = (
            math.log(beta) + k * ly - y
            + log_scaled_gamma_from_log_arg(k - beta, ly)
            - math.lgamma(k + 1.0)
        )
        total[live] += np.exp(log_term)
    return total


def _log_y(x, geom, params):
    with np.errstate(divide="ignore"):
        return (
            math.log(params.mu)
            + params.alpha * (np.log(x) - math.log(params.h_hat_f * geom.S0))
        )


def _check_mu(params):
    if float(params.mu) != int(params.mu):
        raise UnsupportedParameterError("the finite-sum CDF needs integer mu")


def hpf_cdf(x, geom, params):
    """CDF of the composite amplitude |h_pf| = |h_f| * h_p.

    F(0) = 0 exactly; for arguments so small that the gamma argument
    underflows, the small-argument limit of Gamma(k - phi/alpha, y) is used,
    which cancels the y**(phi/alpha) prefactor analytically.
    """
    _check_mu(params)
    x = np.asarray(x, dtype=float)
    if np.any(x < 0) or not np.all(np.isfinite(x)):
        raise DomainError("hpf_cdf needs finite x >= 0")
    flat = np.atleast_1d(x).ravel()
    out = np.zeros_like(flat)
    pos = flat > 0
    if np.any(pos):
        comp = complementary_sum(_log_y(flat[pos], geom, params), geom, params)
        out[pos] = np.clip(1.0 - comp, 0.0, 1.0)
    return specfun._wrap(x, out.reshape(x.shape))


def hpf_pdf(x, geom, params):
    """PDF of |h_pf|.

    phi * S0**-phi * mu**(phi/alpha) / (h_hat_f**phi * Gamma(mu))
    * x**(phi-1) * Gamma(mu - phi/alpha, y), the derivative of
    :func:`hpf_cdf`.
    """
    _check_mu(params)
    x = np.asarray(x, dtype=float)
    if np.any(x <= 0) or not np.all(np.isfinite(x)):
        raise DomainError("hpf_pdf needs finite x > 0")
    flat = np.atleast_1d(x).ravel()
    beta = geom.phi / params.alpha
    log_y = _log_y(flat, geom, params)
    pdf = np.zeros_like(flat)
    live = log_y < _LARGE_LOG_Y
    ly = log_y[live]
    log_pdf = (
        math.log(geom.phi) - np.log(flat[live]) + params.mu * ly - np.exp(ly)
        + log_scaled_gamma_from_log_arg(params.mu - beta, ly)
        - math.lgamma(params.mu)
    )
    pdf[live] = np.exp(log_pdf)
    return specfun._wrap(x, pdf.reshape(x.shape))


def hpf_support_cutoff(geom, params, rel=1e-16):
    """Upper abscissa beyond which the pdf is below ``rel`` times its peak."""
    scale = params.h_hat_f * geom.S0
    grid = scale * np.logspace(-6, 3, 2000)
    pdf = hpf_pdf(grid, geom, params)
    peak = pdf.max()
    above = np.nonzero(pdf >= rel * peak)[0]
    return float(grid[min(above[-1] + 1, grid.size - 1)]), float(grid[np.argmax(pdf)])


def hpf_normalization(geom, params):
    """Integral of :func:`hpf_pdf` over (0, adaptive cutoff)."""
    upper, mode = hpf_support_cutoff(geom, params)
    scale = params.h_hat_f * geom.S0
    points = sorted({p for p in (mode, scale, 0.1 * scale, 3.0 * scale) if 0 < p < upper})
    value, _ = integrate.quad(
        lambda t: hpf_pdf(t, geom, params), 0.0, upper,
        points=points, limit=500, epsabs=1e-13, epsrel=1e-11,
    )
    return value

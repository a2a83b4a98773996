"""Special functions used by the link analysis.

Error function and Gaussian Q-function, the upper incomplete gamma function
for any real order (including negative, non-integer orders), and a numerical
Fox H-function evaluated by trapezoidal quadrature along a vertical
Mellin-Barnes contour.

All functions are pure. The incomplete gamma routines are vectorised over
``x`` for a scalar order ``a``.
"""

import math
from dataclasses import dataclass

import numpy as np
from scipy import optimize
from scipy import special as sp

from .errors import ConvergenceError, DivergenceError, DomainError, ParameterError

EULER_GAMMA = 0.57721566490153286061
_EPS = np.finfo(float).eps
_FPMIN = 1e-300
_MAX_ITER = 5000


def _as_finite(x, name="x"):
    arr = np.asarray(x, dtype=float)
    if not np.all(np.isfinite(arr)):
        raise DomainError(f"{name} must be finite")
    return arr


def _wrap(template, values):
    if np.ndim(template) == 0:
        return float(np.reshape(values, ()))
    return values


def erf(x):
    """Error function, elementwise."""
    x = _as_finite(x)
    return _wrap(x, sp.erf(x))


def erfc(x):
    """Complementary error function, elementwise."""
    x = _as_finite(x)
    return _wrap(x, sp.erfc(x))


def gaussian_q(x):
    """Gaussian tail probability Q(x) = P[N(0, 1) > x]."""
    x = _as_finite(x)
    return _wrap(x, 0.5 * sp.erfc(x / math.sqrt(2.0)))


# ---------------------------------------------------------------------------
# upper incomplete gamma
# ---------------------------------------------------------------------------

def _log_series_lower_regularized(a, x):
    # log P(a, x) for a > 0 from the power series; used where x < a + 1
    term = np.ones_like(x)
    total = np.ones_like(x)
    ap = a
    for _ in range(_MAX_ITER):
        ap += 1.0
        term = term * x / ap
        total = total + term
        if np.all(term <= total * _EPS * 0.5):
            break
    else:
        raise ConvergenceError("incomplete gamma series did not converge")
    return a * np.log(x) - x - math.lgamma(a + 1.0) + np.log(total)


def _log_gamma_series_region(a, x):
    log_p = _log_series_lower_regularized(a, x)
    return math.lgamma(a) + np.log1p(-np.exp(log_p))


def _continued_fraction_scaled(a, x):
    """exp(x) * x**(-a) * Gamma(a, x) by the Legendre continued fraction.

    Modified Lentz iteration; needs x + 1 - a >= 1 to converge quickly.
    Converged entries are frozen so large batches only iterate the laggards.
    """
    h = np.empty_like(x)
    idx = np.arange(x.size)
    xa = x
    b = xa + 1.0 - a
    c = np.full_like(xa, 1.0 / _FPMIN)
    d = 1.0 / b
    hh = d.copy()
    for i in range(1, _MAX_ITER):
        an = -i * (i - a)
        b = b + 2.0
        d = an * d + b
        d = np.where(np.abs(d) < _FPMIN, _FPMIN, d)
        c = b + an / c
        c = np.where(np.abs(c) < _FPMIN, _FPMIN, c)
        d = 1.0 / d
        delta = d * c
        hh = hh * delta
        done = np.abs(delta - 1.0) <= 2.0 * _EPS
        if np.any(done):
            h[idx[done]] = hh[done]
            keep = ~done
            idx, b, c, d, hh = idx[keep], b[keep], c[keep], d[keep], hh[keep]
            if idx.size == 0:
                return h
    raise ConvergenceError("incomplete gamma continued fraction did not converge")


def _exp1_series(x):
    # E1(x) for 0 < x < 1
    total = np.zeros_like(x)
    term = np.ones_like(x)
    for k in range(1, _MAX_ITER):
        term = -term * x / k
        contrib = term / k
        total = total + contrib
        if np.all(np.abs(contrib) <= _EPS * np.abs(total)):
            break
    return -EULER_GAMMA - np.log(x) - total


def _log_gamma_downward_scaled(a, x):
    """log(exp(x) x**-a Gamma(a, x)) for a <= 0 and 0 < x < 1 via downward recurrence.

    Works with R(s) = x * exp(x) * x**(-s) * Gamma(s, x), for which
    Gamma(s, x) = (Gamma(s + 1, x) - x**s e**-x) / s becomes
    R(s) = x * (R(s + 1) - 1) / s. Every R stays O(1), so orders far below
    zero do not overflow.
    """
    steps = int(math.ceil(-a))
    if a == -steps:
        start = 0.0
        r = x * np.exp(x) * _exp1_series(x)
    else:
        start = a + steps
        log_g = _log_gamma_series_region(start, x)
        r = np.exp(x + (1.0 - start) * np.log(x) + log_g)
    s = start
    while s > a + 0.5:
        s -= 1.0
        r = x * (r - 1.0) / s
    return np.log(r / x)


def _log_scaled_positive_x(a, x):
    # log(exp(x) * x**(-a) * Gamma(a, x)) for x > 0
    out = np.empty_like(x)
    cf = x >= max(a + 1.0, 1.0)
    if np.any(cf):
        out[cf] = np.log(_continued_fraction_scaled(a, x[cf]))
    rest = ~cf
    if np.any(rest):
        xr = x[rest]
        if a > 0:
            out[rest] = _log_gamma_series_region(a, xr) - a * np.log(xr) + xr
        else:
            out[rest] = _log_gamma_downward_scaled(a, xr)
    return out


def _check_gamma_args(a, x):
    a = float(a)
    if not math.isfinite(a):
        raise DomainError("order a must be finite")
    x = _as_finite(x)
    if np.any(x < 0):
        raise DomainError("Gamma(a, x) requires x >= 0")
    if a <= 0 and np.any(x == 0):
        raise DivergenceError(f"Gamma({a}, 0) diverges for a <= 0")
    return a, x


def log_scaled_upper_incomplete_gamma(a, x):
    """log(exp(x) * x**(-a) * Gamma(a, x)) for x > 0.

    Stays O(log) in size even when a is far below zero, where
    log Gamma(a, x) itself is huge and adding a * log(x) back would cancel.
    """
    a, x = _check_gamma_args(a, x)
    if np.any(x == 0):
        raise DomainError("scaled Gamma(a, x) needs x > 0")
    flat = np.atleast_1d(x).astype(float).ravel()
    return _wrap(x, _log_scaled_positive_x(a, flat).reshape(np.shape(x)))


def log_upper_incomplete_gamma(a, x):
    """Natural log of the upper incomplete gamma function Gamma(a, x).

    Gamma(a, x) is strictly positive for every real ``a`` when ``x > 0``, so
    the log is always defined there. Use this instead of
    :func:`upper_incomplete_gamma` when the value may overflow.
    """
    a, x = _check_gamma_args(a, x)
    flat = np.atleast_1d(x).astype(float).ravel()
    out = np.empty_like(flat)
    zero = flat == 0
    if np.any(zero):
        out[zero] = math.lgamma(a)
    if np.any(~zero):
        xp = flat[~zero]
        out[~zero] = a * np.log(xp) - xp + _log_scaled_positive_x(a, xp)
    return _wrap(x, out.reshape(np.shape(x)))


def upper_incomplete_gamma(a, x):
    """Upper incomplete gamma function, integral of t**(a-1) e**-t over (x, inf).

    Args:
        a: real order; negative and non-integer values are allowed.
        x: argument(s), ``x >= 0``; ``x == 0`` needs ``a > 0``.

    Returns:
        Gamma(a, x), a float for scalar ``x`` and an array otherwise.

    Raises:
        DomainError: negative or non-finite ``x``.
        DivergenceError: ``x == 0`` with ``a <= 0``.
    """
    a, x = _check_gamma_args(a, x)
    if a > 0 and np.all(x == 0):
        return _wrap(x, np.full(np.shape(x), math.gamma(a)))
    return _wrap(x, np.exp(np.asarray(log_upper_incomplete_gamma(a, x))))


# ---------------------------------------------------------------------------
# Fox H-function
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class FoxHParams:
    """Parameters of H^{m,n}_{p,q}[z | (a_j, A_j) ; (b_j, B_j)].

    The kernel is
    prod_{j<m} G(b_j + B_j s) prod_{j<n} G(1 - a_j - A_j s)
    / (prod_{j>=m} G(1 - b_j - B_j s) prod_{j>=n} G(a_j + A_j s))
    and H = (1 / 2 pi i) * integral of kernel(s) z**(-s) ds.
    """

    upper: tuple
    lower: tuple
    m: int
    n: int

    def __post_init__(self):
        upper = tuple((float(a), float(A)) for a, A in self.upper)
        lower = tuple((float(b), float(B)) for b, B in self.lower)
        object.__setattr__(self, "upper", upper)
        object.__setattr__(self, "lower", lower)
        if any(A <= 0 for _, A in upper) or any(B <= 0 for _, B in lower):
            raise ParameterError("Fox H scale parameters must be positive")
        if not (0 <= self.m <= len(lower) and 0 <= self.n <= len(upper)):
            raise ParameterError("need 0 <= m <= q and 0 <= n <= p")

    @property
    def p(self):
        return len(self.upper)

    @property
    def q(self):
        return len(self.lower)

    def decay_rate(self):
        """a* = sum of left-group scales minus sum of right-group scales."""
        up = sum(A for j, (_, A) in enumerate(self.upper) if j < self.n)
        up -= sum(A for j, (_, A) in enumerate(self.upper) if j >= self.n)
        lo = sum(B for j, (_, B) in enumerate(self.lower) if j < self.m)
        lo -= sum(B for j, (_, B) in enumerate(self.lower) if j >= self.m)
        return up + lo


@dataclass(frozen=True)
class FoxHInfo:
    """Diagnostics from one :func:`fox_h` evaluation."""

    imag: float
    error_estimate: float
    abscissa: float
    truncation: float
    step: float
    refinements: int
    nodes: int


def log_kernel(params, s):
    """Log of the Mellin-Barnes kernel at complex points ``s``."""
    s = np.asarray(s, dtype=complex)
    out = np.zeros_like(s)
    for j, (b, B) in enumerate(params.lower):
        if j < params.m:
            out += sp.loggamma(b + B * s)
        else:
            out -= sp.loggamma(1.0 - b - B * s)
    for j, (a, A) in enumerate(params.upper):
        if j < params.n:
            out += sp.loggamma(1.0 - a - A * s)
        else:
            out -= sp.loggamma(a + A * s)
    return out


def _pole_bounds(params):
    left = max((-b / B for b, B in params.lower[: params.m]), default=-math.inf)
    right = min(((1.0 - a) / A for a, A in params.upper[: params.n]), default=math.inf)
    if not left < right:
        raise ParameterError(
            f"no separating contour: left poles reach {left}, right poles start at {right}"
        )
    return left, right


def contour_abscissa(params):
    """Real part of the vertical contour and its distance to the nearest pole.

    The contour sits midway between the rightmost pole of the m lower-group
    gammas and the leftmost pole of the n upper-group gammas; with only one
    side bounded it sits one unit inside that bound.
    """
    left, right = _pole_bounds(params)
    if math.isinf(left) and math.isinf(right):
        return 0.0, 1.0
    if math.isinf(right):
        return left + 1.0, 1.0
    if math.isinf(left):
        return right - 1.0, 1.0
    return 0.5 * (left + right), 0.5 * (right - left)


def _placed_abscissa(params, log_z):
    # Slide the contour inside the pole gap to where the integrand is smallest
    # on the real axis. For extreme z the midpoint leaves |z**-s| huge and the
    # oscillating integrand cancels down to the answer, losing digits.
    left, right = _pole_bounds(params)
    c0, d0 = contour_abscissa(params)
    if math.isinf(left) and math.isinf(right):
        lo, hi = -3.0, 3.0
    elif math.isinf(right):
        lo, hi = left + 0.1, left + 3.0
    elif math.isinf(left):
        lo, hi = right - 3.0, right - 0.1
    else:
        margin = 0.1 * (right - left)
        lo, hi = left + margin, right - margin

    def logmag(c):
        return float((log_kernel(params, c + 0j) - c * log_z).real)

    res = optimize.minimize_scalar(logmag, bounds=(lo, hi), method="bounded", options={"xatol": 1e-4})
    # only move when it buys at least a factor of ten
    if not res.success or logmag(c0) - res.fun < math.log(10.0):
        return c0, d0
    c = float(res.x)
    return c, min(c - left, right - c)


def _truncation(params, c, log_z, log_scale):
    def logmag(t):
        s = c + 1j * t
        return (log_kernel(params, s) - s * log_z).real + log_scale

    peak = logmag(0.0)
    t = 0.5
    while t < 2.0**24:
        val = logmag(t)
        peak = max(peak, val)
        if val < peak - 45.0 and logmag(1.5 * t) < val:
            return t
        t *= 2.0
    raise ConvergenceError("Fox H integrand does not decay along the contour")


def _trapezoid(params, c, log_z, log_scale, T, h):
    n = int(math.ceil(T / h))
    t = np.arange(-n, n + 1) * h
    s = c + 1j * t
    vals = np.exp(log_scale + log_kernel(params, s) - s * log_z)
    vals = np.where(np.isfinite(vals), vals, 0.0)
    total = vals.sum() * h / (2.0 * math.pi)
    mass = np.abs(vals).sum() * h / (2.0 * math.pi)
    return total, mass, t.size


def fox_h(params, z, *, log_scale=0.0, rtol=1e-9, max_refinements=6, full_output=False):
    """Fox H-function H^{m,n}_{p,q}[z] for real z > 0.

    The Mellin-Barnes integral is taken along Re(s) = c with the trapezoidal
    rule, truncated symmetrically at |Im s| = T. T is doubled and the step
    halved until two successive estimates agree to ``rtol``.

    ``log_scale`` multiplies the result by exp(log_scale) inside the
    integrand, which keeps huge prefactors and tiny H values from
    under/overflowing separately.

    Raises:
        ParameterError: no separating contour exists, or the integrand does
            not decay along vertical lines (a* <= 0).
        ConvergenceError: the refinement budget is exhausted; the exception
            carries the last difference between estimates.
    """
    z = float(z)
    if not (z > 0 and math.isfinite(z)):
        raise DomainError("fox_h needs a finite z > 0")
    if params.decay_rate() <= 0:
        raise ParameterError("a* <= 0: contour integral does not converge")
    log_z = math.log(z)
    c, dist = _placed_abscissa(params, log_z)
    T = _truncation(params, c, log_z, log_scale)
    h = math.pi * dist / (30.0 + 0.5 * abs(log_z) * dist)
    h = min(h, 0.25)

    prev, mass, nodes = _trapezoid(params, c, log_z, log_scale, T, h)
    err = math.inf
    for k in range(1, max_refinements + 1):
        T *= 2.0
        h *= 0.5
        cur, mass, nodes = _trapezoid(params, c, log_z, log_scale, T, h)
        err = abs(cur - prev)
        if err <= rtol * abs(cur) or err <= 20.0 * _EPS * mass:
            value = cur.real
            if not full_output:
                return value
            info = FoxHInfo(
                imag=cur.imag, error_estimate=err, abscissa=c,
                truncation=T, step=h, refinements=k, nodes=nodes,
            )
            return value, info
        prev = cur
    raise ConvergenceError(
        f"Fox H quadrature not converged after {max_refinements} refinements",
        error_estimate=err,
        details={"abscissa": c, "truncation": T, "step": h, "z": z},
    )

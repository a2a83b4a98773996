"""Monte Carlo generative model of the mixed THz-RF link.

Draws the THz composite amplitude as alpha-mu fading times a Gaussian-jitter
pointing loss, the RF hop as Rayleigh fading, and estimates outage
probability and average SER (by averaging the conditional SER) with
standard errors.

Reproducibility contract: ``(seed, scenario, n, strands)`` fixes every
estimate bit for bit. Generators are PCG64 streams derived from
``numpy.random.SeedSequence``.
"""

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from . import specfun
from .channel import misalignment_geometry, rf_path_gain, thz_path_gain
from .errors import ParameterError

DEFAULT_CHUNK = 250_000


@dataclass(frozen=True)
class Estimate:
    """Sample mean with its standard error (sample std / sqrt(n))."""

    value: float
    stderr: float
    n: int

    def within(self, reference, k=3.0):
        return abs(self.value - reference) <= k * self.stderr


def make_rng(seed, stream=None):
    """PCG64 generator for ``seed``; ``stream`` selects an independent sub-stream."""
    if isinstance(seed, np.random.Generator):
        return seed
    entropy = int(seed)
    if entropy < 0 or entropy >= 2**64:
        raise ParameterError("seed must be a 64-bit unsigned integer")
    key = (entropy,) if stream is None else (entropy, *np.atleast_1d(stream).tolist())
    return np.random.Generator(np.random.PCG64(np.random.SeedSequence(key)))


def sample_alpha_mu(params, rng, size=None):
    """alpha-mu envelope: h_hat_f * (Z / mu)**(1/alpha), Z ~ Gamma(mu, 1).

    Z is the sum of ``mu`` unit exponentials, so ``mu`` must be an integer.
    """
    if int(params.mu) != params.mu or params.mu < 1:
        raise ParameterError("sample_alpha_mu needs integer mu >= 1")
    n = 1 if size is None else int(size)
    z = rng.standard_exponential((n, params.mu)).sum(axis=1)
    r = params.h_hat_f * (z / params.mu) ** (1.0 / params.alpha)
    return r[0] if size is None else r


def pointing_loss(radial, geom):
    """Pointing loss S0 * exp(-r**2 / w_e**2) at radial displacement(s) ``radial``."""
    return geom.S0 * np.exp(-np.square(radial) / geom.w_e**2)


def sample_pointing_loss(geom, sigma_s, rng, size=None):
    """Pointing loss for isotropic Gaussian jitter of std ``sigma_s`` per axis.

    With phi = w_e**2 / (2 sigma_s**2) this gives P[h_p <= y] = (y / S0)**phi
    on (0, S0].
    """
    n = 1 if size is None else int(size)
    xy = rng.normal(0.0, sigma_s, (n, 2))
    h = pointing_loss(np.hypot(xy[:, 0], xy[:, 1]), geom)
    return h[0] if size is None else h


def sample_hpf(params, geom, rng, size=None):
    """Composite THz amplitude |h_pf| = alpha-mu envelope * pointing loss."""
    n = 1 if size is None else int(size)
    h = sample_alpha_mu(params, rng, n) * sample_pointing_loss(geom, params.sigma_s, rng, n)
    return h[0] if size is None else h


def sample_e2e_snr(scenario, rng, size):
    """End-to-end SNR min(gamma_1, gamma_2) of the decode-and-forward link."""
    geom = misalignment_geometry(scenario.thz)
    g1 = thz_path_gain(scenario.thz) ** 2 * scenario.es_over_no1
    g2 = rf_path_gain(scenario.rf) ** 2 * scenario.er_over_no2
    gamma1 = g1 * np.square(sample_hpf(scenario.thz, geom, rng, size))
    # |h_f|**2 of a unit-power Rayleigh envelope is a unit exponential
    gamma2 = g2 * rng.standard_exponential(size)
    return np.minimum(gamma1, gamma2)


def _moments(values):
    mean = float(values.mean())
    return values.size, mean, float(np.square(values - mean).sum())


def _merge(parts):
    # pairwise (Chan et al.) combination of count, mean and squared deviations
    n, mean, m2 = parts[0]
    for nb, mb, m2b in parts[1:]:
        total = n + nb
        delta = mb - mean
        mean = mean + delta * nb / total
        m2 = m2 + m2b + delta * delta * n * nb / total
        n = total
    var = m2 / (n - 1)
    return Estimate(value=mean, stderr=math.sqrt(var / n), n=n)


def _run(statistic, n, seed, strands, chunk):
    if n < 2:
        raise ParameterError("need at least two Monte Carlo trials")
    strands = max(1, int(strands))
    counts = [n // strands + (1 if i < n % strands else 0) for i in range(strands)]

    def strand(idx):
        rng = make_rng(seed, stream=idx)
        parts = []
        left = counts[idx]
        while left > 0:
            m = min(chunk, left)
            parts.append(_moments(statistic(rng, m)))
            left -= m
        return parts

    if strands == 1:
        parts = strand(0)
    else:
        with ThreadPoolExecutor(max_workers=strands) as pool:
            parts = [p for chunk_parts in pool.map(strand, range(strands)) for p in chunk_parts]
    return _merge(parts)


def simulate_op(scenario, n, seed, strands=1, chunk=DEFAULT_CHUNK):
    """Fraction of trials with min(gamma_1, gamma_2) <= gamma_th."""

    def stat(rng, m):
        return (sample_e2e_snr(scenario, rng, m) <= scenario.gamma_th).astype(float)

    return _run(stat, n, seed, strands, chunk)


def simulate_ser(scenario, mod, n, seed, strands=1, chunk=DEFAULT_CHUNK):
    """Average of a * Q(sqrt(2 b gamma_e)) over generated end-to-end SNRs."""

    def stat(rng, m):
        gamma = sample_e2e_snr(scenario, rng, m)
        return mod.a * specfun.gaussian_q(np.sqrt(2.0 * mod.b * gamma))

    return _run(stat, n, seed, strands, chunk)

# %% [markdown]
# THz hop: path gain, pointing-error geometry and composite fading statistics

# %%
from dataclasses import replace
from pathlib import Path

import numpy as np

from thzrf import channel, config

scenario = config.parse_scenario(Path(__file__).resolve().parents[1] / "configs" / "baseline.cfg")
thz = scenario.thz

# %% Link budget pieces
kappa = channel.molecular_absorption(thz.f1, thz.T, thz.psi, thz.p)
print(f"water vapour pressure at {thz.T} K: {channel.saturated_water_vapor_pressure(thz.T):.2f} Pa")
print(f"absorption kappa = {kappa:.4e} 1/m, path gain h_l = {channel.thz_path_gain(thz):.6f}")

# absorption grows with humidity
for psi in (0, 25, 50, 75, 100):
    print(f"  humidity {psi:3d}%  kappa = {channel.molecular_absorption(thz.f1, thz.T, psi, thz.p):.4e}")

# %% Misalignment geometry; doubling the jitter quarters phi
g = channel.misalignment_geometry(thz)
print(g)
print("phi at 2x jitter:", channel.misalignment_geometry(replace(thz, sigma_s=2 * thz.sigma_s)).phi)

# %% Composite CDF and PDF of |h_pf|
x = np.linspace(0.05, 3.0, 8)
for xi, F, f in zip(x, channel.hpf_cdf(x, g, thz), channel.hpf_pdf(x, g, thz)):
    print(f"x={xi:5.2f}  F={F:.6f}  f={f:.6f}")
print("pdf integrates to", channel.hpf_normalization(g, thz))

# %% More jitter pushes mass toward deep fades
for sigma_mm in (2, 10, 20):
    p = replace(thz, sigma_s=sigma_mm * 1e-3)
    print(f"sigma_s={sigma_mm:2d} mm  P[|h_pf| < 0.1] = {channel.hpf_cdf(0.1, channel.misalignment_geometry(p), p):.4e}")

# %% [markdown]
# Monte Carlo: generate the channel and compare with the formulas

# %%
from pathlib import Path

import numpy as np
from scipy import stats

from thzrf import channel, config, mc, perf

s = config.parse_scenario(Path(__file__).resolve().parents[1] / "configs" / "baseline.cfg")
g = s.geometry
rng = mc.make_rng(2024)

# %% Composite fading samples against the analytic CDF
h = mc.sample_hpf(s.thz, g, rng, 10**6)
ks = stats.kstest(h, lambda v: channel.hpf_cdf(v, g, s.thz))
print(f"KS D = {ks.statistic:.2e}, 1% critical value = {stats.kstwo.ppf(0.99, h.size):.2e}")

# %% Outage and SER estimates with standard errors
est = mc.simulate_op(s, 10**6, 1)
print(f"OP  closed {perf.outage_probability(s):.6e}  MC {est.value:.6e} +- {est.stderr:.1e}")
for M in (4, 16):
    mod = perf.modulation_for_order(M)
    est = mc.simulate_ser(s, mod, 10**6, 2, strands=2)
    closed = perf.average_ser_closed_form(s, mod)
    print(f"SER {mod.label:6s} closed {closed:.6e}  MC {est.value:.6e} +- {est.stderr:.1e}  z={(est.value - closed) / est.stderr:+.2f}")

# %% Same seed, same numbers
a = mc.simulate_op(s, 10**5, 7)
b = mc.simulate_op(s, 10**5, 7)
print("reproducible:", a == b)

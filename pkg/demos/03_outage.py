# %% [markdown]
# Outage probability of the decode-and-forward link
#
# The end-to-end SNR is the weaker hop, so each hop sets an outage floor.

# %%
from dataclasses import replace
from pathlib import Path

import numpy as np

from thzrf import config, perf

base = config.read_scenario_values(Path(__file__).resolve().parents[1] / "configs" / "baseline.cfg")


def scenario(**kw):
    return config.build_scenario({**base, **kw})


# %% OP against Es/No1 for two RF qualities
print(" Es/No1   OP(Er=40 dB)   OP(Er=60 dB)")
for es in range(0, 61, 10):
    ops = [perf.outage_probability(scenario(es_over_no1_db=es, er_over_no2_db=er)) for er in (40, 60)]
    print(f"{es:6d}   {ops[0]:.6e}   {ops[1]:.6e}")

# %% The floor is the RF-hop outage alone
s = scenario(er_over_no2_db=40)
print("RF-only outage:", perf.snr_cdf_hop2(s.gamma_th, s))
print("OP with a perfect THz hop:", perf.outage_probability(replace(s, es_over_no1=1e30)))

# %% The closed form agrees with combining the two hop CDFs
x = np.geomspace(1e-2, 1e4, 5)
f1, f2 = perf.snr_cdf_hop1(x, s), perf.snr_cdf_hop2(x, s)
print("max |F_e - (F1 + F2 - F1 F2)| =", np.max(np.abs(perf.e2e_snr_cdf(x, s) - (f1 + f2 - f1 * f2))))

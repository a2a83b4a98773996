# %% [markdown]
# Average symbol error rate: Fox H closed form against direct quadrature

# %%
import math
from dataclasses import replace
from pathlib import Path

from thzrf import config, perf

base = config.read_scenario_values(Path(__file__).resolve().parents[1] / "configs" / "baseline.cfg")

# %%
print(" Es/No1  M     closed form        quadrature        rel.diff")
for es in (10, 30, 50):
    s = config.build_scenario({**base, "es_over_no1_db": es})
    for M in (2, 4, 16):
        mod = perf.modulation_for_order(M)
        closed = perf.average_ser_closed_form(s, mod)
        quad = perf.average_ser_quadrature(s, mod)
        print(f"{es:6d} {M:3d}  {closed:.12e}  {quad:.12e}  {abs(closed - quad) / quad:.1e}")

# %% With a perfect THz hop the textbook Rayleigh result comes back
s = replace(config.build_scenario(base), es_over_no1=1e30)
mod = perf.modulation_constants("bpsk")
gbar = s.gamma2_mean
rayleigh = mod.a / 2 * (1 - math.sqrt(mod.b * gbar / (1 + mod.b * gbar)))
print("Rayleigh:", rayleigh, " closed form:", perf.average_ser_closed_form(s, mod))

# %% Each H-term of the sum
for k, term in enumerate(perf.ser_closed_form_terms(config.build_scenario(base), mod)):
    print(f"k={k}: {term:.12e}")

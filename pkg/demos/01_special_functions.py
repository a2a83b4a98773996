# %% [markdown]
# Special functions: incomplete gamma at negative orders and the Fox H-function
#
# The link formulas need Gamma(a, x) with a far below zero and an H-function
# that has no library implementation. Both live in `thzrf.specfun`.

# %%
import math

import numpy as np

from thzrf import specfun

# %% Negative, non-integer orders
for a in (-0.5, -3.7, -40.25):
    for x in (0.01, 1.0, 25.0):
        print(f"Gamma({a:7.2f}, {x:5.2f}) = {specfun.upper_incomplete_gamma(a, x):.15e}")

# %% The recurrence Gamma(a+1, x) = a Gamma(a, x) + x^a e^-x holds to rounding
a, x = -2.3, 4.0
lhs = specfun.upper_incomplete_gamma(a + 1, x)
rhs = a * specfun.upper_incomplete_gamma(a, x) + x**a * math.exp(-x)
print("recurrence residual:", abs(lhs - rhs) / abs(lhs))

# %% Very negative orders overflow; the log form does not
print("log Gamma(-900, 0.05) =", specfun.log_upper_incomplete_gamma(-900.0, 0.05))

# %% Fox H by contour quadrature, checked on two reductions
exp_params = specfun.FoxHParams(upper=(), lower=((0.0, 1.0),), m=1, n=0)
print("H[0.5] =", specfun.fox_h(exp_params, 0.5), " e^-0.5 =", math.exp(-0.5))

gamma_params = specfun.FoxHParams(upper=((1.0, 1.0),), lower=((0.75, 1.0), (0.0, 1.0)), m=2, n=0)
for z in np.geomspace(1e-3, 10, 5):
    h, info = specfun.fox_h(gamma_params, z, full_output=True)
    ref = specfun.upper_incomplete_gamma(0.75, z)
    print(f"z={z:8.4f}  H={h:.12e}  rel.err={abs(h - ref) / ref:.1e}  nodes={info.nodes}  imag={info.imag:.1e}")

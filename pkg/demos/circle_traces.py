# %% [markdown]
# Traces of inverse Laplacian powers on the circle
#
# On the circle the Fourier modes e^{ik theta} diagonalise the Laplacian with
# eigenvalue -k^2, so D^-n has eigenvalue (-1)^n / k^(2n) for k != 0.
# Summing them gives 2 (-1)^n zeta(2n).

# %%
import math

import numpy as np

from spectrace.special_fn import zeta
from spectrace.torus_spectral import EigenRule, INV_LAPLACE_S1, direct_trace_s1, trace_inv_laplacian_s1

rule = EigenRule(INV_LAPLACE_S1, 1)
print([rule.eval(k) for k in (-2, -1, 0, 1, 2)])  # zero mode is sent to 0

# %%
for n in (1, 2, 3):
    res = trace_inv_laplacian_s1(n, 1e-12)
    print(n, res.value.real, "+/-", res.error_bound, "direct:", res.checks["direct_value"])

# %% zeta(2) = pi^2/6, so the first trace is -pi^2/3
print(trace_inv_laplacian_s1(1).value.real, -math.pi ** 2 / 3)

# %% how the direct eigenvalue sum approaches the closed form
cutoffs = np.array([10, 100, 1000, 10_000])
for K in cutoffs:
    out = direct_trace_s1(1, int(K))
    # the integral-bracket midpoint is folded in; the error stays inside tail_bound
    print(K, out.value.real + 2 * zeta(2.0, 1e-13).value, out.tail_bound)

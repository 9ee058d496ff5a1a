# %% [markdown]
# Why P^2 = (d* D^-1)^2 on the torus has no trace
#
# P has eigenvalue -i (k+m)/(k^2+m^2), so |P^2| has (k+m)^2/(k^2+m^2)^2.
# On each sup-norm shell of radius r there are 8r points and the summand is
# about 1/r^2, so every shell adds a constant and the partial sums grow like R.

# %%
import numpy as np

from spectrace.torus_spectral import block_sum, p2_divergence_certificate, trace_p_power_t2

for N in (1, 3, 5, 8, 10):
    cert = p2_divergence_certificate(N)
    print(N, cert.radius, round(cert.attained, 3))

# %% the dyadic squares [2^j, 2^(j+1) - 1]^2 on their own
# the summand is homogeneous of degree -2, so each block is a Riemann sum of
# the same integral over [1, 2]^2 and the block sums level off below 1
print([round(block_sum(j), 4) for j in range(1, 11)])

h = 1 / 2000
x = 1 + h * (np.arange(2000) + 0.5)
X, Y = np.meshgrid(x, x)
print("integral over [1,2]^2:", np.sum((X + Y) ** 2 / (X * X + Y * Y) ** 2) * h * h)

# %% even powers above 2 do converge
res = trace_p_power_t2(4, 1e-6)
print(res.status, res.value, res.error_bound)
res = trace_p_power_t2(1)
print(res.status, res.certificate.partial_sums, res.extension)

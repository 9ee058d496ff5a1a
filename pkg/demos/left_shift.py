# %% [markdown]
# A diagonal sum that depends on the basis
#
# The left shift L(a1, a2, ...) = (a2, a3, ...) has zero diagonal in the
# standard basis. In the orthonormal basis
#     psi_n = (e_1 + ... + e_n - n e_{n+1}) / sqrt(n (n+1))
# each diagonal entry is -1/(n(n+1)), and these add up to -1.

# %%
import numpy as np

from spectrace import counterexamples as cx

print(cx.psi_vector(1).coefficients, cx.psi_vector(2).coefficients)

# %%
N = 10_000
std = cx.diag_partial_sums(cx.LEFT_SHIFT_STANDARD, N)
psi = cx.diag_partial_sums(cx.LEFT_SHIFT_PSI, N)
print(std[-1], psi[[0, 1, 2, 9, 99, N - 1]])

# %% the identity and the alternating sign operator fail in a different way
print(cx.diag_partial_sums(cx.IDENTITY, 6))
print(cx.diag_partial_sums(cx.ALTERNATING, 6))

# %% trajectories as CSV
print(cx.partial_sums_csv(cx.LEFT_SHIFT_PSI, 5))
print(np.allclose(psi, -(1 - 1 / np.arange(2, N + 2))))

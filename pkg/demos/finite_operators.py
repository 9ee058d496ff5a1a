# %% [markdown]
# Finite-dimensional operators: |A|, square roots and the trace norm

# %%
import numpy as np

from spectrace import finop

A = finop.random_operator(6, seed=3)
absA = finop.abs_op(A)

# sum of <phi, |A| phi> over five random orthonormal bases
print([round(finop.trace_diag(absA, finop.random_orthonormal_basis(6, s)).real, 12) for s in range(5)])

dec, tnorm = finop.canonical_and_trace_norm(A)
print("singular values", dec.mu)
print("trace norm", tnorm, "reconstruction error", np.abs(dec.reconstruct() - A).max())

# %% square root by the binomial series, with Newton-Schulz as fallback
P = A.conj().T @ A + np.eye(6)
B = finop.sqrt_psd(P, 1e-12, method="series")
print(finop.opnorm(B @ B - P), finop.is_psd(B))

S = A.conj().T @ A
S[:, :] = S @ np.diag([1, 1, 1, 0, 0, 0]) @ S  # rank 3, series would stall
print(finop.opnorm(finop.sqrt_psd(S) @ finop.sqrt_psd(S) - S))

# %% trace equals the eigenvalue sum
print(finop.trace_diag(A), np.linalg.eigvals(A).sum(), finop.lidskii_check(A))

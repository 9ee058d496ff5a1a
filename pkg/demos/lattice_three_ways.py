# %% [markdown]
# One lattice sum, three routes
#
# S(n) = sum over (k, m) != 0 of (k^2 + m^2)^-n.
# 1. add it up shell by shell (sup-norm squares of 8r points)
# 2. 4 zeta(n) beta(n)
# 3. Mellin transform of theta3(e^-t)^2 - 1, whose q-expansion counts
#    representations as a sum of two squares

# %%
from spectrace.lattice import lattice_sum_closed, lattice_sum_direct, radius_for_tail, shell_modes
from spectrace.special_fn import mellin_theta, theta3

print(shell_modes(1))

# %%
for n in (2, 3, 4):
    R = radius_for_tail(n, 1e-8)
    direct = lattice_sum_direct(n, R)
    closed = lattice_sum_closed(n)
    mel = mellin_theta(n, 1e-10)
    print(f"n={n}  R={R:6d}  direct={direct.value.real:.12f} (+<= {direct.tail_bound:.0e})"
          f"  closed={closed.value:.12f}  mellin={mel.value:.12f}")

# %% theta3 near t = 0 behaves like sqrt(pi/t)
for t in (1.0, 0.1, 0.01):
    print(t, theta3(t).value ** 2 * t)

# %% the shell table can be dumped for plotting
from spectrace.lattice import shell_csv

print(shell_csv(lattice_sum_direct(2, 5), 2))

# coding: utf-8

# # Exact expectations for tiny graphs
#
# For T <= 6 the whole probability tree can be enumerated with exact
# rationals. That gives ground truth for the simulator.

from hardcopy import oracle
from hardcopy.ensemble import small_t_monte_carlo

alpha, m, T = 0.8, 1, 4
exact = oracle.exact_expectations(alpha, m, T)
# The arithmetic is exact in the binary value of alpha, so the rationals have
# large denominators; print them as floats.

print("E[D_k(T)]:", {k: round(v, 6) for k, v in exact.E_Dk.items()})
print("E[e_T] =", exact.E_e)

# The enumerated edge expectation agrees with the forward recurrence
# E(e_{t+1}) = E(e_t) (1 + 2(1 - alpha)/t) + alpha m.

print(oracle.check_against_recurrence(exact, alpha, m))

# And a million compiled runs land within a few standard errors.

mc = small_t_monte_carlo(alpha, m, T, 1_000_000, seed=1)
for k, v in exact.E_Dk.items():
    print(f"k={k}: exact {v:.5f}  simulated {mc.dk_mean[k]:.5f} +- {mc.dk_stderr[k]:.5f}")

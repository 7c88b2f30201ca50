# coding: utf-8

# # A single hard-copy run
#
# At every step a coin with bias alpha decides between two moves: a brand new
# vertex that attaches m edges preferentially (proportional to degree), or a
# hard copy of a uniformly chosen vertex, cloning every edge it has.
# Copying is what keeps multi-edges around and what makes the edge count grow
# slightly faster than linearly.

import numpy as np

from hardcopy import HardCopyParams, analytic, degree_histogram, fit_power_law, simulate

params = HardCopyParams(alpha=0.9, m=1, seed=7, steps=200_000)
g, traj = simulate(params)
print(g)

# The trajectory is recorded at powers of two. Compare e_t / t with the
# limiting rate mu = alpha m / (2 alpha - 1).

mu = analytic.mu(params.alpha, params.m)
for t, e, dmax, multi, eta in traj.rows()[-6:]:
    print(f"t={t:>7d}  e/t={e / t:.4f}  (mu={mu:.4f})  max degree={dmax:>5d}  multi-edge vertices={multi}")

# Degree counts against the limit sequence d_k.

hist = degree_histogram(g)
theory = analytic.limit_degree_sequence(params.alpha, params.m, 20)
print(" k   D_k/t     d_k")
for k in range(1, 11):
    print(f"{k:2d}  {hist[k] / g.t:.5f}  {theory[k]:.5f}")

# A discrete power-law fit of the tail. The limit exponent is 1 + 2 alpha / (2 alpha - 1);
# at finite k the fit sits a little below it.

fit = fit_power_law(g.degrees(), k_min=10)
print(f"gamma_hat = {fit.gamma_hat:.3f}, limit exponent = {analytic.asymptotic_exponent(params.alpha):.3f}")
print(f"structural invariants violated: {g.invariant_violations() or 'none'}")

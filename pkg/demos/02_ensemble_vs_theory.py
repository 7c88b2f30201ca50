# coding: utf-8

# # Replicated runs against the limit degree sequence
#
# Replica r is seeded with (master_seed, r), so an ensemble is reproducible
# regardless of how many threads run it.

import numpy as np

from hardcopy import HardCopyParams, analytic, compare_to_theory, run_ensemble, variance_growth_fit

params = HardCopyParams(alpha=0.85, m=1)
summary = run_ensemble(params, T=50_000, R=40, checkpoints=[1_000, 10_000, 50_000], master_seed=3)

theory = analytic.limit_degree_sequence(params.alpha, params.m, 10_000)
cmp = compare_to_theory(summary, theory, k_range=(1, 12))
print(" k   empirical   theory     z")
for k, emp, th, se, z in cmp.rows():
    print(f"{k:2d}  {emp:.5f}    {th:.5f}   {z:+.2f}")
print(f"max |diff| = {cmp.max_abs_diff:.2e}, implied constant m_hat = {cmp.m_hat:.3f}")

# How fast does Var(e_t) grow? The fit is on log-log axes.

fit = variance_growth_fit(summary)
print("Var(e_t):", dict(zip(fit.t, np.round(fit.variance, 1).tolist())))
print(f"slope = {fit.slope:.3f}")

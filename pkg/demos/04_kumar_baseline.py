# coding: utf-8

# # The linear-growth copying model as a baseline
#
# Each new vertex picks a uniform prototype and, for each of its d out-links,
# either points at a uniform vertex (probability cf) or copies the
# prototype's link. In-degrees follow a power law with exponent (2 - cf)/(1 - cf).

import numpy as np

from hardcopy import KumarParams, analytic, fit_power_law, run_kumar

for cf in (0.4, 0.5, 0.6):
    state = run_kumar(KumarParams(copy_factor=cf, out_degree=1, seed=11, steps=500_000))
    fit = fit_power_law(state.in_degrees(), k_min=30)
    print(f"cf={cf}: gamma_hat={fit.gamma_hat:.3f}  limit={analytic.kumar_exponent(cf):.3f}  tail size={fit.n_tail}")

"""Exit criteria for the package, one test per criterion.

Each test records a one-line PASS/FAIL verdict that pytest prints in its
terminal summary. Seeds are fixed up front; tolerances are the stated ones.
"""
import csv
import time

import numpy as np
import pytest

from hardcopy import analytic, oracle
from hardcopy.cli import main
from hardcopy.ensemble import qs_diagnostics, run_ensemble, small_t_monte_carlo, variance_growth_fit
from hardcopy.graph import new_initial
from hardcopy.powerlaw import fit_power_law
from hardcopy.process import HardCopyParams, KumarParams, evolve, run_kumar, simulate

SEED = 20261016


def read_dk(path):
    with open(path, newline="") as fh:
        return {int(r["k"]): (float(r["mean"]), float(r["stderr"])) for r in csv.DictReader(fh)}


def test_1_oracle_equivalence(record_criterion):
    start = time.perf_counter()
    worst = 0.0
    rec_err = 0.0
    failures = []
    for i, (alpha, T) in enumerate([(a, T) for a in (0.8, 0.9) for T in (3, 4, 5)]):
        exact = oracle.exact_expectations(alpha, 1, T)
        mc = small_t_monte_carlo(alpha, 1, T, 10**6, seed=SEED + i)
        for k in range(len(mc.dk_mean)):
            diff = abs(mc.dk_mean[k] - exact.E_Dk.get(k, 0.0))
            se = mc.dk_stderr[k]
            if se == 0:
                if diff > 1e-12:
                    failures.append((alpha, T, k))
                continue
            worst = max(worst, diff / se)
            if diff > 4 * se:
                failures.append((alpha, T, k))
        z_e = abs(mc.e_mean - exact.E_e) / mc.e_stderr
        worst = max(worst, z_e)
        if z_e > 4:
            failures.append((alpha, T, "e"))
        check = oracle.check_against_recurrence(exact, alpha, 1, rtol=1e-9)
        rec_err = max(rec_err, check["relative_error"])
        if not check["ok"]:
            failures.append((alpha, T, "recurrence"))
    elapsed = time.perf_counter() - start
    ok = not failures and elapsed <= 120
    record_criterion(1, "oracle equivalence", ok,
                     f"max |z|={worst:.2f} (limit 4), recurrence rel err={rec_err:.1e} "
                     f"(limit 1e-9), {elapsed:.0f}s (limit 120s)")
    assert not failures, failures
    assert elapsed <= 120


@pytest.fixture(scope="module")
def ensemble_cmd():
    return ["ensemble", "--alpha", "0.9", "--m", "1", "--steps", "100000",
            "--replicas", "50", "--seed", str(SEED)]


@pytest.fixture(scope="module")
def ensemble_run(ensemble_cmd, tmp_path_factory):
    out = tmp_path_factory.mktemp("c2")
    start = time.perf_counter()
    code = main(ensemble_cmd + ["--out", str(out)])
    return out, code, time.perf_counter() - start


def test_2_degree_sequence_head(ensemble_run, record_criterion):
    out, code, elapsed = ensemble_run
    assert code == 0
    theory = analytic.limit_degree_sequence(0.9, 1, 2)
    assert theory[1] == pytest.approx(0.642857, abs=1e-6)
    assert theory[2] == pytest.approx(theory[1] / 3.8)
    dk = read_dk(out / "dk_empirical.csv")
    d1, d2 = dk[1][0], dk[2][0]
    ok = abs(d1 - 0.6429) <= 0.02 and abs(d2 - 0.1692) <= 0.01 and elapsed <= 300
    record_criterion(2, "head of the degree sequence", ok,
                     f"D1/T={d1:.5f} (0.6429+-0.02), D2/T={d2:.5f} (0.1692+-0.01), "
                     f"{elapsed:.0f}s (limit 300s)")
    assert abs(d1 - 0.6429) <= 0.02
    assert abs(d2 - 0.1692) <= 0.01
    assert elapsed <= 300


def test_3_exponent(record_criterion):
    start = time.perf_counter()
    g, _ = simulate(HardCopyParams(alpha=0.9, m=1, seed=SEED, steps=10**6),
                    checkpoints=[10**6], histograms=False)
    fit = fit_power_law(g.degrees(), k_min=10)
    elapsed = time.perf_counter() - start
    ok = abs(fit.gamma_hat - 2.8) <= 0.2 and elapsed <= 300
    record_criterion(3, "power-law exponent", ok,
                     f"gamma_hat={fit.gamma_hat:.4f} (2.8+-0.2, n_tail={fit.n_tail}, "
                     f"KS={fit.ks_distance:.4f}), {elapsed:.0f}s (limit 300s)")
    assert abs(fit.gamma_hat - 2.8) <= 0.2
    assert elapsed <= 300


def test_4_edge_growth(record_criterion):
    alpha, m = 0.9, 1
    s = run_ensemble(HardCopyParams(alpha=alpha, m=m), 10**4, 200,
                     checkpoints=[10**3, 10**4], master_seed=SEED)
    growth = analytic.expected_edges_exact(alpha, m, 10**4)
    rate = analytic.mu(alpha, m)
    rel = abs(s.at(10**4).e_mean - growth.at(10**4)) / growth.at(10**4)

    def remainder_ratio(T):
        return abs(s.at(T).e_mean / T - rate) / T ** (2 * (1 - alpha) - 1)

    def ratio_stderr(T):
        return s.at(T).e_stderr / T / T ** (2 * (1 - alpha) - 1)

    r3, r4 = remainder_ratio(10**3), remainder_ratio(10**4)
    ok = rel <= 0.01 and r4 <= 2 * r3
    record_criterion(4, "edge growth", ok,
                     f"mean e_T rel. dev. from exact E(e_T)={rel:.4%} (limit 1%); remainder ratio "
                     f"T=1e4: {r4:.3f}+-{ratio_stderr(10**4):.3f} vs 2x T=1e3: {2 * r3:.3f}"
                     f"+-{2 * ratio_stderr(10**3):.3f} (MC standard errors)")
    assert rel <= 0.01
    assert r4 <= 2 * r3


def test_5_analytic_self_consistency(record_criterion):
    seq = analytic.limit_degree_sequence(0.9, 1, 10**6)
    mass = float(seq.d.sum())
    worst = 0.0
    for m in (1, 2, 3):
        ba = analytic.limit_degree_sequence(1.0, m, 1000)
        k = ba.k.astype(float)
        closed = 2 * m * (m + 1) / (k * (k + 1) * (k + 2))
        worst = max(worst, float(np.max(np.abs(ba.d / closed - 1))))
    big = analytic.limit_degree_sequence(0.9, 1, 10**7)
    mean_deg = big.mean_degree(tail_correction=True)
    dev = abs(mean_deg / (2 * big.mu) - 1)
    ok = mass >= 0.999 and worst <= 1e-12 and dev <= 0.02
    record_criterion(5, "analytic self-consistency", ok,
                     f"sum d_k (k<=1e6)={mass:.6f} (>=0.999); BA rel err={worst:.1e} (<=1e-12); "
                     f"mean degree={mean_deg:.5f} vs 2mu=2.25, dev {dev:.3%} (<=2%)")
    assert mass >= 0.999
    assert worst <= 1e-12
    assert dev <= 0.02


def test_6_invariant_fuzz(record_criterion):
    rng = np.random.default_rng(SEED)
    violations = []
    for i in range(1000):
        alpha = float(1 - rng.random())           # (0, 1]
        m = int(rng.integers(1, 6))
        seed = int(rng.integers(0, 2**63))
        p = HardCopyParams(alpha=alpha, m=m, seed=seed, steps=1000)
        g = new_initial(m)
        traj = evolve(g, p, checkpoints=range(2, 1001), histograms=False,
                      multi_edges=False, warn=False)
        bad = list(g.invariant_violations())
        if g.t != 1000 or g.vertex_count() != 1000:
            bad.append("vertex_count")
        t = np.array(traj.t)
        if not np.array_equal(t, np.arange(2, 1001)):
            bad.append("checkpoints")
        if np.any(np.diff(traj.max_degree) > 2 * m):
            bad.append("max_degree_step")
        if np.any(np.array(traj.e) < m * t):
            bad.append("edge_lower_bound_path")
        if bad:
            violations.append((alpha, m, seed, bad))
    record_criterion(6, "invariant fuzz", not violations,
                     f"{len(violations)} violating configurations out of 1000")
    assert not violations, violations[:5]


def test_7_kumar_baseline(record_criterion):
    state = run_kumar(KumarParams(copy_factor=0.5, out_degree=1, seed=SEED, steps=10**6))
    # k_min=30: the exact limit law k!/(k+3)! gives an asymptotic MLE of 2.92 there
    fit = fit_power_law(state.in_degrees(), k_min=30)
    target = analytic.kumar_exponent(0.5)
    ok = abs(fit.gamma_hat - target) <= 0.3
    record_criterion(7, "Kumar baseline exponent", ok,
                     f"gamma_hat={fit.gamma_hat:.4f} ({target}+-0.3, k_min=30, n_tail={fit.n_tail})")
    assert ok


def test_8_qs_diagnostics(record_criterion):
    alpha, m = 0.9, 1
    params = HardCopyParams(alpha=alpha, m=m)
    eps0 = analytic.default_epsilons(alpha, m).epsilon0
    s = run_ensemble(params, 10**5, 200, checkpoints=[10**3, 10**4, 10**5], master_seed=SEED)
    deg_viol = conc_viol = 0
    for tr in s.replicas[:100]:
        final = qs_diagnostics(tr, params, eps0=eps0, t_min=100).rows[-1]
        assert final["t"] == 10**5
        deg_viol += final["max_degree"] is False
        conc_viol += final["concentration"] is False
    fit = variance_growth_fit(s)
    bound = analytic.variance_exponent_bound(alpha, m, eps0)
    ok = deg_viol == 0 and conc_viol == 0 and fit.slope is not None and fit.slope <= bound + 0.2
    record_criterion(8, "qs-bound diagnostics", ok,
                     f"max-degree violations={deg_viol}, concentration violations={conc_viol} "
                     f"(100 seeds); Var(e_T) slope={fit.slope:.3f} (<= {bound:.1f}+0.2)")
    assert deg_viol == 0 and conc_viol == 0
    assert fit.slope <= bound + 0.2


def test_9_determinism(ensemble_cmd, ensemble_run, tmp_path, record_criterion):
    first, code, _ = ensemble_run
    assert code == 0
    assert main(ensemble_cmd + ["--out", str(tmp_path)]) == 0
    names = sorted(p.name for p in first.iterdir())
    same = names == sorted(p.name for p in tmp_path.iterdir()) and all(
        (first / n).read_bytes() == (tmp_path / n).read_bytes() for n in names)
    record_criterion(9, "determinism", same, f"{len(names)} output files compared byte-for-byte")
    assert same

"""Command-line entry point: ``hardcopy <command> [options]``.

Exit codes: 0 success, 1 usage error, 2 invalid parameters, 3 I/O failure.
Every option can also be given in a JSON file passed as ``--config``; keys
are the option names with dashes replaced by underscores, and explicit
flags take precedence over the file.
"""
from __future__ import annotations

import argparse
import csv
import json
import logging
import math
import sys
import warnings
from pathlib import Path

import numpy as np

from . import analytic, oracle
from .ensemble import (CheckpointStats, compare_to_theory, degree_histogram,
                       run_ensemble)
from .graph import InvalidParameter
from .powerlaw import FitError, fit_power_law
from .process import (HardCopyParams, RegimeWarning, geometric_schedule, simulate,
                      validate_hard_copy)

log = logging.getLogger("hardcopy")

EXIT_USAGE, EXIT_PARAM, EXIT_IO = 1, 2, 3


class UsageError(Exception):
    pass


class ParamError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def fmt(x):
    if isinstance(x, (int, np.integer)):
        return str(int(x))
    return format(float(x), ".12g")


def _json_num(x):
    if isinstance(x, (bool, np.bool_)):
        return bool(x)
    if isinstance(x, (int, np.integer)):
        return int(x)
    x = float(x)
    return None if math.isnan(x) else float(format(x, ".12g"))


def _clean(obj):
    if isinstance(obj, dict):
        return {k: _clean(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_clean(v) for v in obj]
    if isinstance(obj, (int, float, np.integer, np.floating, bool, np.bool_)):
        return _json_num(obj)
    return obj


def write_csv(path, header, rows):
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(header)
        for row in rows:
            w.writerow([fmt(v) for v in row])


def write_json(path, doc):
    with open(path, "w") as fh:
        json.dump(_clean(doc), fh, indent=2, sort_keys=True)
        fh.write("\n")


# option name -> (type, default, help)
OPTIONS = {
    "alpha": (float, None, "probability of the preferential-attachment step"),
    "m": (int, 1, "edges per new vertex"),
    "steps": (int, None, "final time T (vertex count)"),
    "seed": (int, 0, "master seed"),
    "out": (str, None, "output directory"),
    "replicas": (int, 50, "number of replicas"),
    "threads": (int, 1, "worker threads"),
    "checkpoints": (str, None, "comma-separated checkpoint times (default: powers of two and T)"),
    "k_min": (int, 10, "lower cutoff for the power-law fit"),
    "k_max": (int, 1000, "largest degree in theory tables"),
    "edges": (bool, False, "also write edges.txt"),
    "degrees": (str, None, "degrees.csv to fit"),
    "empirical": (str, None, "dk_empirical.csv to compare instead of running an ensemble"),
}

COMMANDS = {
    "simulate": ("single run", ["alpha", "m", "steps", "seed", "out", "checkpoints", "edges"]),
    "ensemble": ("replicated runs", ["alpha", "m", "steps", "seed", "out", "replicas",
                                     "threads", "checkpoints"]),
    "analytic": ("theory tables", ["alpha", "m", "steps", "k_max", "out"]),
    "oracle": ("exact enumeration for tiny T", ["alpha", "m", "steps", "out"]),
    "fit": ("discrete power-law fit of a degrees.csv", ["degrees", "k_min", "out"]),
    "compare": ("ensemble vs limit degree sequence", ["alpha", "m", "steps", "seed", "out",
                                                      "replicas", "threads", "k_max",
                                                      "empirical"]),
}

REQUIRED = {
    "simulate": ["alpha", "steps", "out"],
    "ensemble": ["alpha", "steps", "out"],
    "analytic": ["alpha", "out"],
    "oracle": ["alpha", "steps"],
    "fit": ["degrees"],
    "compare": ["alpha", "steps", "out"],
}


def build_parser():
    p = _Parser(prog="hardcopy", description="Hard-copy scale-free random graph process")
    sub = p.add_subparsers(dest="command", parser_class=_Parser)
    for name, (help_, opts) in COMMANDS.items():
        sp = sub.add_parser(name, help=help_)
        sp.add_argument("--config", help="JSON file with option values")
        for opt in opts:
            typ, _, h = OPTIONS[opt]
            flag = "--" + opt.replace("_", "-")
            if typ is bool:
                sp.add_argument(flag, action="store_true", default=None, help=h)
            else:
                sp.add_argument(flag, type=typ, default=None, help=h)
    return p


def resolve(command, ns):
    """Merge config file and flags into a plain dict, validating key names and types."""
    allowed = COMMANDS[command][1]
    cfg = {}
    if ns.config:
        try:
            with open(ns.config) as fh:
                raw = json.load(fh)
        except OSError as exc:
            raise OSError(f"cannot read config {ns.config}: {exc}") from exc
        except json.JSONDecodeError as exc:
            raise ParamError(f"config {ns.config} is not valid JSON: {exc}") from exc
        for key, val in raw.items():
            if key not in allowed:
                raise ParamError(f"unknown config key '{key}' for command {command}")
            typ = OPTIONS[key][0]
            try:
                cfg[key] = typ(val) if val is not None else None
            except (TypeError, ValueError):
                raise ParamError(f"config key '{key}' has invalid value {val!r}") from None
    out = {}
    for key in allowed:
        flag = getattr(ns, key)
        out[key] = flag if flag is not None else cfg.get(key, OPTIONS[key][1])
    for key in REQUIRED[command]:
        if out[key] is None:
            raise ParamError(f"missing required parameter '{key}'")
    return out


def _params(c):
    try:
        return HardCopyParams(alpha=c["alpha"], m=c["m"], seed=c.get("seed", 0),
                              steps=c["steps"] if c.get("steps") is not None else 2)
    except InvalidParameter as exc:
        raise ParamError(str(exc)) from None


def _checkpoints(c, T):
    if not c.get("checkpoints"):
        return geometric_schedule(T)
    try:
        pts = sorted({int(x) for x in str(c["checkpoints"]).split(",") if x.strip()})
    except ValueError:
        raise ParamError(f"parameter 'checkpoints' must be comma-separated integers") from None
    if not pts or pts[0] < 2 or pts[-1] > T:
        raise ParamError(f"parameter 'checkpoints' must lie in [2, {T}]")
    if pts[-1] != T:
        pts.append(T)
    return pts


def _outdir(c):
    out = Path(c["out"])
    out.mkdir(parents=True, exist_ok=True)
    return out


def _regime_warnings(params):
    report = validate_hard_copy(params.alpha, params.m)
    msgs = []
    if not report.theorem_regime:
        msgs.append(f"out of regime: 2m(1-alpha) = {2 * params.m * (1 - params.alpha):.6g} "
                    f">= alpha = {params.alpha}")
        log.warning(msgs[-1])
    return report, msgs


def cmd_simulate(c):
    params = _params(c)
    report, msgs = _regime_warnings(params)
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", RegimeWarning)
        g, traj = simulate(params, checkpoints=_checkpoints(c, params.steps), histograms=False)
    out = _outdir(c)
    hist = degree_histogram(g)
    write_csv(out / "degrees.csv", ["k", "count", "fraction"],
              [(k, n, n / g.t) for k, n in zip(hist.k.tolist(), hist.counts.tolist())])
    write_csv(out / "trajectory.csv", ["t", "e", "max_degree", "multi_edge_vertices", "eta"],
              traj.rows())
    if c.get("edges"):
        g.write_edges(out / "edges.txt")
    final = dict(zip(["t", "e", "max_degree", "multi_edge_vertices", "eta"], traj.rows()[-1]))
    write_json(out / "summary.json", {
        "params": params.as_dict(), "regime": report.as_dict(), "results": final,
        "seeds": {"seed": params.seed}, "warnings": msgs})
    return 0


def cmd_ensemble(c):
    params = _params(c)
    if c["replicas"] < 2:
        raise ParamError(f"parameter 'replicas' must be >= 2, got {c['replicas']}")
    report, msgs = _regime_warnings(params)
    T = params.steps
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", RegimeWarning)
        summary = run_ensemble(params, T, c["replicas"], _checkpoints(c, T),
                               master_seed=params.seed, threads=c["threads"])
    out = _outdir(c)
    for st in summary.stats:
        rows = list(zip(st.k.tolist(), st.dk_mean.tolist(), st.dk_stderr.tolist()))
        name = "dk_empirical.csv" if st.t == T else f"dk_empirical_t{st.t}.csv"
        write_csv(out / name, ["k", "mean", "stderr"], rows)
    write_json(out / "ensemble.json", {
        "params": params.as_dict(), "regime": report.as_dict(),
        "results": {"replicas": summary.R, "checkpoints": [s.as_dict() for s in summary.stats]},
        "seeds": {"master_seed": params.seed,
                  "replica_rule": "PCG64(SeedSequence([master_seed, replica_index]))"},
        "warnings": msgs})
    return 0


def _theory(params, k_max):
    try:
        return analytic.limit_degree_sequence(params.alpha, params.m, k_max)
    except InvalidParameter as exc:
        raise ParamError(str(exc)) from None


def cmd_analytic(c):
    params = _params(c)
    seq = _theory(params, c["k_max"])
    eps = analytic.default_epsilons(params.alpha, params.m)
    T = c["steps"] or 1000
    growth = analytic.expected_edges_exact(params.alpha, params.m, T)
    out = _outdir(c)
    write_csv(out / "dk_theory.csv", ["k", "d_k"], zip(seq.k.tolist(), seq.d.tolist()))
    write_csv(out / "edges_expected.csv", ["t", "E_e", "eta"],
              zip(growth.t.tolist(), growth.expected_e.tolist(), growth.eta.tolist()))
    print(f"mu={fmt(seq.mu)}")
    print(f"exponent={fmt(seq.exponent)}")
    print(f"epsilon0={fmt(eps.epsilon0)}")
    print(f"epsilon1={fmt(eps.epsilon1)}")
    return 0


def cmd_oracle(c):
    try:
        res = oracle.exact_expectations(c["alpha"], c["m"], c["steps"])
    except InvalidParameter as exc:
        raise ParamError(str(exc)) from None
    check = oracle.check_against_recurrence(res, c["alpha"], c["m"])
    if c.get("out"):
        out = _outdir(c)
        write_csv(out / "exact.csv", ["k", "E_Dk"], sorted(res.E_Dk.items()))
        write_json(out / "exact.json", {"T": res.T, "E_e": res.E_e,
                                        "E_max_degree": res.E_max_degree,
                                        "recurrence_check": check})
    print(f"E_e={fmt(res.E_e)}")
    print(f"E_max_degree={fmt(res.E_max_degree)}")
    print(f"recurrence_relative_error={fmt(check['relative_error'])}")
    return 0


def read_degrees_csv(path):
    counts = {}
    with open(path, newline="") as fh:
        for row in csv.DictReader(fh):
            counts[int(row["k"])] = int(row["count"])
    return counts


def cmd_fit(c):
    counts = read_degrees_csv(c["degrees"])
    try:
        fit = fit_power_law(counts, c["k_min"])
    except FitError as exc:
        raise ParamError(str(exc)) from None
    doc = _clean(fit.as_dict())
    if c.get("out"):
        write_json(_outdir(c) / "fit.json", doc)
    print(json.dumps(doc, sort_keys=True))
    return 0


def read_empirical_csv(path, t):
    rows = []
    with open(path, newline="") as fh:
        for row in csv.DictReader(fh):
            rows.append((int(row["k"]), float(row["mean"]), float(row["stderr"])))
    rows.sort()
    k, mean, se = (np.array(col) for col in zip(*rows))
    return CheckpointStats(t=t, k=k.astype(np.int64), dk_mean=mean, dk_stderr=se)


def cmd_compare(c):
    params = _params(c)
    seq = _theory(params, c["k_max"])
    if c.get("empirical"):
        stats = read_empirical_csv(c["empirical"], params.steps)
    else:
        if c["replicas"] < 2:
            raise ParamError(f"parameter 'replicas' must be >= 2, got {c['replicas']}")
        stats = run_ensemble(params, params.steps, c["replicas"], [params.steps],
                             master_seed=params.seed, threads=c["threads"]).at()
    hi = min(seq.k_max, int(stats.k[-1]))
    cmp = compare_to_theory(stats, seq, k_range=(params.m, hi))
    out = _outdir(c)
    write_csv(out / "comparison.csv", ["k", "empirical", "theory", "stderr", "z"], cmp.rows())
    doc = {"t": cmp.t, "max_abs_diff": cmp.max_abs_diff, "m_hat": cmp.m_hat,
           "epsilon1": cmp.eps1, "max_abs_z": float(np.max(np.abs(cmp.z)))}
    write_json(out / "compare.json", {"params": params.as_dict(), "results": doc,
                                      "seeds": {"master_seed": params.seed}})
    print(json.dumps(_clean(doc), sort_keys=True))
    return 0


HANDLERS = {"simulate": cmd_simulate, "ensemble": cmd_ensemble, "analytic": cmd_analytic,
            "oracle": cmd_oracle, "fit": cmd_fit, "compare": cmd_compare}


def main(argv=None):
    logging.basicConfig(level=logging.INFO, stream=sys.stderr, format="%(levelname)s %(message)s")
    parser = build_parser()
    try:
        ns = parser.parse_args(argv)
        if ns.command is None:
            raise UsageError("a command is required")
        c = resolve(ns.command, ns)
        return HANDLERS[ns.command](c)
    except UsageError as exc:
        parser.print_usage(sys.stderr)
        print(f"hardcopy: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (ParamError, InvalidParameter) as exc:
        print(f"hardcopy: invalid parameter: {exc}", file=sys.stderr)
        return EXIT_PARAM
    except OSError as exc:
        print(f"hardcopy: I/O error: {exc}", file=sys.stderr)
        return EXIT_IO


if __name__ == "__main__":
    sys.exit(main())

"""Exact expectations by full enumeration of the process tree (tiny T only).

Graph states here are plain symmetric multiplicity matrices and all weights
are exact rationals; nothing is shared with the compiled simulator.
"""
from __future__ import annotations

import itertools
from collections import defaultdict
from dataclasses import dataclass
from fractions import Fraction

from .analytic import expected_edges_exact
from .graph import InvalidParameter

MAX_T = 6
MAX_M = 2


def initial_state(m):
    return ((0, 2 * m), (2 * m, 0))


def degrees_of(state):
    return tuple(sum(row) for row in state)


def _grow(state, new_row):
    rows = [row + (new_row[i],) for i, row in enumerate(state)]
    rows.append(tuple(new_row) + (0,))
    return tuple(rows)


def step_outcomes(state, alpha, m):
    """All one-step successors of ``state`` as ``(probability, next_state)``.

    Preferential steps are expanded over ordered m-tuples of neighbours,
    copy steps over the t possible targets.
    """
    a = Fraction(alpha)
    t = len(state)
    deg = degrees_of(state)
    two_e = sum(deg)
    out = []
    for tup in itertools.product(range(t), repeat=m):
        w = a
        row = [0] * t
        for v in tup:
            w *= Fraction(deg[v], two_e)
            row[v] += 1
        out.append((w, _grow(state, row)))
    if a < 1:
        for i in range(t):
            out.append(((1 - a) / t, _grow(state, list(state[i]))))
    return out


def _guard(m, T):
    if not 2 <= T <= MAX_T:
        raise InvalidParameter(f"enumeration limited to 2 <= T <= {MAX_T}, got T={T}")
    if not 1 <= m <= MAX_M:
        raise InvalidParameter(f"enumeration limited to 1 <= m <= {MAX_M}, got m={m}")


def outcome_distribution(alpha, m, T):
    """Exact law of the degree vector ``(d_1, ..., d_T)`` at time T."""
    _guard(m, T)
    level = {initial_state(m): Fraction(1)}
    for _ in range(2, T):
        nxt = defaultdict(Fraction)
        for state, p in level.items():
            for w, s in step_outcomes(state, alpha, m):
                nxt[s] += p * w
        level = nxt
    law = defaultdict(Fraction)
    for state, p in level.items():
        law[degrees_of(state)] += p
    return dict(law)


@dataclass(frozen=True)
class ExactExpectations:
    T: int
    E_Dk: dict          # k -> E[D_k(T)]
    E_e: float
    E_max_degree: float
    exact: dict         # the same quantities as Fractions


def exact_expectations(alpha, m, T):
    """``E[D_k(T)]``, ``E[e_T]`` and ``E[max degree]`` computed exactly."""
    law = outcome_distribution(alpha, m, T)
    total = sum(law.values())
    if total != 1:
        raise AssertionError(f"probability mass {total} != 1")
    e_dk = defaultdict(Fraction)
    e_e = Fraction(0)
    e_max = Fraction(0)
    for deg, p in law.items():
        for d in deg:
            e_dk[d] += p
        e_e += p * Fraction(sum(deg), 2)
        e_max += p * max(deg)
    e_dk = dict(sorted(e_dk.items()))
    return ExactExpectations(
        T=T, E_Dk={k: float(v) for k, v in e_dk.items()}, E_e=float(e_e),
        E_max_degree=float(e_max),
        exact={"E_Dk": e_dk, "E_e": e_e, "E_max_degree": e_max})


def check_against_recurrence(exact, alpha, m, rtol=1e-9):
    """Compare the enumerated ``E[e_T]`` with the forward edge recurrence."""
    analytic = expected_edges_exact(alpha, m, exact.T).at(exact.T)
    rel = abs(exact.E_e - analytic) / abs(analytic)
    return {"T": exact.T, "oracle": exact.E_e, "recurrence": analytic,
            "relative_error": rel, "ok": rel <= rtol}

"""Two-sided K-functional brackets and exact small-instance oracles.

The K-functional of a matrix in the mixed-norm couple is the infimum of
``norm(b) + t * norm_T(c)`` over decompositions ``a = b + c``. The
bracket encloses it between the scaled two-sided rectangle norm and the
cost of an explicit decomposition. Two independent oracles exist for
small instances: a linear program that is exact for the (inf, 1) couple,
and a brute-force minimum over binary cell assignments (an upper bound
for any couple, since an optimal decomposition need not be a masking).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np
from scipy.optimize import linprog

from .measure import WeightedMatrix
from .norms import CoupleSpec, mixed_inf_one, mixed_inf_one_T
from .rectnorm import GuardError, triple_norm
from .splitting import split_p_q

__all__ = [
    "KtBracket",
    "LpSolution",
    "MaskSolution",
    "kt_bracket",
    "kt_exact_lp",
    "kt_mask_bruteforce",
]


@dataclass(frozen=True, eq=False)
class KtBracket:
    """Certified enclosure ``lower <= K_t(a) <= upper`` together with the
    decomposition attaining the upper bound."""

    lower: float
    upper: float
    lower_source: str
    upper_source: str
    decomposition: tuple[WeightedMatrix, WeightedMatrix]


class LpSolution(NamedTuple):
    value: float
    b: WeightedMatrix
    c: WeightedMatrix


class MaskSolution(NamedTuple):
    value: float
    a_cells: frozenset


def kt_bracket(
    a: WeightedMatrix,
    spec: CoupleSpec,
    *,
    oracle: str = "split",
    override: bool = False,
) -> KtBracket:
    """Two-sided bracket for the K-functional at ``spec.t``.

    The lower bound is always ``c_pq`` times the two-sided rectangle
    norm. The upper bound comes from the requested oracle: the certified
    splitting (any couple), the exact linear program (``oracle="lp"``,
    (inf, 1) only), or the mask brute force (``oracle="mask"``, small
    instances only).
    """
    lower = spec.c_pq * triple_norm(a, spec, override=override).value
    t = spec.t
    if oracle == "split":
        res = split_p_q(a, spec, override=override)
        b = a.restrict(res.a_cells)
        c = a.restrict(res.b_cells)
        upper = res.bound_a + t * res.bound_b
        source = "split"
    elif oracle == "lp":
        if not spec.is_p_infinite or spec.q != 1.0:
            raise ValueError("the lp oracle applies to the (inf, 1) couple only")
        sol = kt_exact_lp(a, t)
        b, c = sol.b, sol.c
        upper = sol.value
        source = "lp"
    elif oracle == "mask":
        sol = kt_mask_bruteforce(a, spec)
        b = a.restrict(sol.a_cells)
        c = a.with_entries(a.entries - b.entries)
        upper = sol.value
        source = "mask"
    else:
        raise ValueError(f"unknown oracle {oracle!r}")
    if lower > upper * (1.0 + 1e-9) + 1e-12:
        raise RuntimeError(
            f"bracket inverted: lower {lower} exceeds upper {upper}"
        )
    return KtBracket(lower, upper, "rect-norm-scaled", source, (b, c))


def kt_exact_lp(a: WeightedMatrix, t: float, *, max_side: int = 32) -> LpSolution:
    """Exact K-functional for the (inf, 1) couple by linear programming.

    For this couple an optimal decomposition can be taken with
    ``b = x .* a`` for fractions ``x`` in [0, 1] per cell, which makes the
    problem linear: minimize ``u + t v`` subject to every weighted row sum
    of ``b`` at most ``u`` and every weighted column sum of ``a - b`` at
    most ``v``. The reported value is recomputed from the returned
    decomposition, so it is always an achievable cost.
    """
    t = float(t)
    if not (math.isfinite(t) and t > 0.0):
        raise ValueError("t must be finite and positive")
    m, n = a.shape
    if m > max_side or n > max_side:
        raise GuardError(
            f"lp oracle limited to {max_side} rows/columns, got {m} x {n}"
        )
    mu = a.row_space.masses
    nu = a.col_space.masses
    abs_a = np.abs(a.entries)
    nzi, nzj = np.nonzero(abs_a)
    k = nzi.size
    if k == 0:
        zero = a.with_entries(np.zeros((m, n)))
        return LpSolution(0.0, zero, zero)

    row_w = abs_a[nzi, nzj] * nu[nzj]
    col_w = abs_a[nzi, nzj] * mu[nzi]
    n_rows = int(nzi.max()) + 1
    n_cols = int(nzj.max()) + 1
    a_ub = np.zeros((n_rows + n_cols, k + 2))
    b_ub = np.zeros(n_rows + n_cols)
    for idx in range(k):
        a_ub[nzi[idx], idx] = row_w[idx]
        a_ub[n_rows + nzj[idx], idx] = -col_w[idx]
    a_ub[:n_rows, k] = -1.0
    a_ub[n_rows:, k + 1] = -1.0
    for j in range(n_cols):
        b_ub[n_rows + j] = -float(col_w[nzj == j].sum())
    cost = np.zeros(k + 2)
    cost[k] = 1.0
    cost[k + 1] = t
    bounds = [(0.0, 1.0)] * k + [(0.0, None), (0.0, None)]
    res = linprog(cost, A_ub=a_ub, b_ub=b_ub, bounds=bounds, method="highs")
    if not res.success:
        raise RuntimeError(f"lp oracle failed: {res.message}")
    x = np.clip(res.x[:k], 0.0, 1.0)
    b_entries = np.zeros((m, n))
    b_entries[nzi, nzj] = a.entries[nzi, nzj] * x
    b = a.with_entries(b_entries)
    c = a.with_entries(a.entries - b_entries)
    value = mixed_inf_one(b) + t * mixed_inf_one_T(c)
    return LpSolution(float(value), b, c)


def _weak_rows(values: np.ndarray, masses: np.ndarray, p: float) -> np.ndarray:
    """Weak l^p norm of every row of a nonnegative matrix, vectorized."""
    if math.isinf(p):
        return values.max(axis=1)
    order = np.argsort(-values, axis=1, kind="stable")
    sv = np.take_along_axis(values, order, axis=1)
    cm = np.cumsum(masses[order], axis=1)
    return (sv * cm ** (1.0 / p)).max(axis=1)


def kt_mask_bruteforce(
    a: WeightedMatrix,
    spec: CoupleSpec,
    *,
    max_cells: int = 20,
    chunk: int = 1 << 15,
) -> MaskSolution:
    """Minimum decomposition cost over all binary cell assignments.

    Every nonzero cell goes wholly to the A side or the B side; zero
    cells ride with the A side. This is an upper bound for the
    K-functional of any couple and is compared against the LP oracle and
    the splitting upper bound in verification.
    """
    m, n = a.shape
    if m * n > max_cells:
        raise GuardError(
            f"mask brute force limited to {max_cells} cells, got {m * n}"
        )
    p, q, t = spec.p, spec.q, spec.t
    mu = a.row_space.masses
    nu = a.col_space.masses
    abs_a = np.abs(a.entries)
    nzi, nzj = np.nonzero(abs_a)
    k = nzi.size
    all_cells = frozenset((i, j) for i in range(m) for j in range(n))
    if k == 0:
        return MaskSolution(0.0, all_cells)

    powered = abs_a[nzi, nzj] ** q
    row_contrib = np.zeros((k, m))
    row_contrib[np.arange(k), nzi] = powered * nu[nzj]
    col_contrib = np.zeros((k, n))
    col_contrib[np.arange(k), nzj] = powered * mu[nzi]
    inv_q = 1.0 / q

    best_value = math.inf
    best_mask = 0
    total = 1 << k
    for lo in range(0, total, chunk):
        hi = min(lo + chunk, total)
        idx = np.arange(lo, hi, dtype=np.int64)
        bits = ((idx[:, None] >> np.arange(k, dtype=np.int64)[None, :]) & 1).astype(float)
        rows_q = bits @ row_contrib
        cols_q = (1.0 - bits) @ col_contrib
        side_a = _weak_rows(rows_q if q == 1.0 else rows_q ** inv_q, mu, p)
        side_b = _weak_rows(cols_q if q == 1.0 else cols_q ** inv_q, nu, p)
        costs = side_a + t * side_b
        local = int(np.argmin(costs))
        if costs[local] < best_value:
            best_value = float(costs[local])
            best_mask = lo + local

    zero_cells = all_cells - frozenset(zip(nzi.tolist(), nzj.tolist()))
    chosen = frozenset(
        (int(nzi[idx]), int(nzj[idx])) for idx in range(k) if (best_mask >> idx) & 1
    )
    return MaskSolution(best_value, chosen | zero_cells)

"""Shared fixtures-as-functions and slow independent oracles.

The oracles here deliberately avoid the library's vectorized paths:
rectangle suprema run over itertools subsets with plain Python floats,
and the weak norm uses the distribution form instead of rearrangement
breakpoints, so agreement is meaningful.
"""

from __future__ import annotations

import itertools
import math

import numpy as np

from ktcouple import CoupleSpec, MeasureSpace, WeightedMatrix

RTOL = 1e-9


def leq(a: float, b: float, tol: float = RTOL) -> bool:
    return a <= b + tol * max(abs(a), abs(b), 1.0)


def close(a: float, b: float, tol: float = RTOL) -> bool:
    return abs(a - b) <= tol * max(abs(a), abs(b), 1.0)


def unit_matrix(entries) -> WeightedMatrix:
    arr = np.asarray(entries, dtype=float)
    return WeightedMatrix(
        arr, MeasureSpace.uniform(arr.shape[0]), MeasureSpace.uniform(arr.shape[1])
    )


def random_matrix(rng, max_rows=4, max_cols=4, uniform_masses=False, mass_low=0.1, mass_high=10.0):
    m = int(rng.integers(1, max_rows + 1))
    n = int(rng.integers(1, max_cols + 1))
    if uniform_masses:
        mu, nu = np.ones(m), np.ones(n)
    else:
        mu = rng.uniform(mass_low, mass_high, m)
        nu = rng.uniform(mass_low, mass_high, n)
    return WeightedMatrix(
        rng.uniform(-1.0, 1.0, (m, n)), MeasureSpace(mu), MeasureSpace(nu)
    )


def nonempty_subsets(size: int):
    for r in range(1, size + 1):
        yield from itertools.combinations(range(size), r)


def _rect_value(a: WeightedMatrix, rows, cols, q: float) -> float:
    total = 0.0
    for i in rows:
        for j in cols:
            total += (
                abs(float(a.entries[i, j])) ** q
                * float(a.row_space.masses[i])
                * float(a.col_space.masses[j])
            )
    return total ** (1.0 / q)


def naive_triple(a: WeightedMatrix, spec: CoupleSpec) -> float:
    """Two-sided rectangle norm by exhaustive subset loops."""
    m, n = a.shape
    best = 0.0
    for rows in nonempty_subsets(m):
        mu_e = sum(float(a.row_space.masses[i]) for i in rows)
        for cols in nonempty_subsets(n):
            nu_f = sum(float(a.col_space.masses[j]) for j in cols)
            den = max(mu_e ** spec.alpha, (nu_f ** spec.alpha) / spec.t)
            best = max(best, _rect_value(a, rows, cols, spec.q) / den)
    return best


def naive_quad(a: WeightedMatrix, spec: CoupleSpec) -> float:
    """Constrained rectangle norm by exhaustive subset loops."""
    m, n = a.shape
    best = 0.0
    for rows in nonempty_subsets(m):
        mu_e = sum(float(a.row_space.masses[i]) for i in rows)
        for cols in nonempty_subsets(n):
            nu_f = sum(float(a.col_space.masses[j]) for j in cols)
            if (nu_f ** spec.alpha) / spec.t <= mu_e ** spec.alpha:
                best = max(best, _rect_value(a, rows, cols, spec.q) / mu_e ** spec.alpha)
    return best


def naive_weak(f, masses, p: float) -> float:
    """Weak l^p norm in distribution form: sup over levels v of
    ``v * mass(|f| >= v)^(1/p)``."""
    values = [abs(float(x)) for x in f]
    best = 0.0
    for v in set(values):
        if v == 0.0:
            continue
        mass = sum(float(m) for x, m in zip(values, masses) if x >= v)
        best = max(best, v if math.isinf(p) else v * mass ** (1.0 / p))
    return best


def naive_lorentz(f, masses, p: float, q: float) -> float:
    """Lorentz (p, q) norm summed atom by atom (no value grouping); the
    within-group terms telescope, so this matches the grouped step form."""
    pairs = sorted(
        ((abs(float(x)), float(m)) for x, m in zip(f, masses)),
        key=lambda vm: -vm[0],
    )
    total = 0.0
    cum_prev = 0.0
    acc = 0.0
    for v, m in pairs:
        cum = cum_prev + m
        acc += v ** q * (p / q) * (cum ** (q / p) - cum_prev ** (q / p))
        cum_prev = cum
    total = acc
    return total ** (1.0 / q)

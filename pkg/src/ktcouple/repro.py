"""Canned study cases with self-checking reports.

Each case builds a documented instance family, computes the quantities
of interest, and returns a report whose checks carry the computed value,
the expected value, the comparison relation, and a provenance tag:
``reference`` for values asserted by the source material, ``derived``
for values established by an independent computation, and ``analytic``
for closed-form facts. A check with an empty provenance is rejected.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Mapping

import numpy as np

from .measure import MeasureSpace, WeightedMatrix
from .norms import CoupleSpec, lorentz_pq_norm
from .rectnorm import quad_norm, triple_norm
from .splitting import split_infty_one, split_p_one

__all__ = [
    "ReproCheck",
    "ReproReport",
    "repro_remark23",
    "repro_remark24",
    "repro_prop34",
    "repro_varopoulos",
]

_RELATIONS = ("eq", "le", "ge", "lt", "gt")


@dataclass(frozen=True)
class ReproCheck:
    """One verdict: ``computed`` compared to ``expected`` under
    ``relation`` with a relative tolerance (relative to ``expected``
    when it is nonzero, absolute otherwise; ignored by strict
    relations)."""

    name: str
    computed: float
    expected: float
    relation: str
    tolerance: float
    provenance: str

    def __post_init__(self):
        if self.relation not in _RELATIONS:
            raise ValueError(f"unknown relation {self.relation!r}")
        if not self.provenance:
            raise ValueError("every check needs a provenance tag")
        if self.tolerance < 0.0:
            raise ValueError("tolerance must be nonnegative")

    @property
    def slack(self) -> float:
        return self.tolerance * (abs(self.expected) if self.expected != 0.0 else 1.0)

    @property
    def passed(self) -> bool:
        c, e = self.computed, self.expected
        if self.relation == "eq":
            return abs(c - e) <= self.slack
        if self.relation == "le":
            return c <= e + self.slack
        if self.relation == "ge":
            return c >= e - self.slack
        if self.relation == "lt":
            return c < e
        return c > e


@dataclass(frozen=True)
class ReproReport:
    case_id: str
    params: Mapping[str, float]
    checks: tuple[ReproCheck, ...]
    extras: Mapping[str, float] = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return all(check.passed for check in self.checks)


def _row_instance(n: int) -> WeightedMatrix:
    """Single row of ones on unit masses."""
    return WeightedMatrix(
        np.ones((1, n)), MeasureSpace.uniform(1), MeasureSpace.uniform(n)
    )


def repro_remark23(n: int = 16, p: float = 2.0) -> ReproReport:
    """Single-row all-ones instance at t = 1: the constrained rectangle
    norm stays at 1 while the two-sided norm grows like n^(1/p), so the
    two differ by an unbounded factor; the splitting upper bound still
    certifies the two-sided norm up to its factor-two guarantee."""
    if n < 1:
        raise ValueError("n must be positive")
    spec = CoupleSpec(p, 1.0, 1.0)
    a = _row_instance(n)
    quad = quad_norm(a, spec).value
    triple = triple_norm(a, spec).value
    split = split_p_one(a, 1.0, p)
    upper = split.bound_a + split.bound_b
    checks = (
        ReproCheck("constrained_rect_norm", quad, 1.0, "eq", 1e-12, "reference"),
        ReproCheck("rect_norm", triple, float(n) ** (1.0 / p), "eq", 1e-12, "reference"),
        ReproCheck("split_upper_dominates_k", upper, float(n) ** (1.0 / p), "ge", 1e-9, "derived"),
        ReproCheck("split_upper_within_factor_two", upper, 2.0 * triple, "le", 1e-9, "derived"),
        ReproCheck("rect_norm_within_pstar_of_upper", triple, spec.p_star * upper, "le", 1e-9, "derived"),
    )
    return ReproReport(
        "remark23",
        {"n": n, "p": p, "t": 1.0},
        checks,
        {"split_upper": upper, "ratio_triple_over_quad": triple / quad},
    )


def _threshold_scan_k1(a: WeightedMatrix, p: float, q: float) -> float:
    """Upper bound for the K-functional at t = 1 in the mixed Lorentz
    norms, by scanning level-set truncations ``b = (a - s)_+``,
    ``c = min(a, s)`` over all entry values s (entries must be
    nonnegative)."""
    entries = a.entries
    mu_space, nu_space = a.row_space, a.col_space
    nu = nu_space.masses
    mu = mu_space.masses
    best = math.inf
    levels = np.unique(np.concatenate(([0.0], entries.ravel())))
    for s in levels:
        b = np.maximum(entries - s, 0.0)
        c = np.minimum(entries, s)
        row_sums = b @ nu
        col_sums = mu @ c
        cost = lorentz_pq_norm(row_sums, mu_space, p, q) + lorentz_pq_norm(
            col_sums, nu_space, p, q
        )
        best = min(best, float(cost))
    return best


def repro_remark24(
    sizes: tuple[int, ...] = (4, 16, 64, 256), p: float = 2.0, q: float = 1.0
) -> ReproReport:
    """Square instances whose first row decays like j^(-1/p): the
    two-sided rectangle norm stays bounded by p/(p-1) for every size,
    while the mixed-Lorentz threshold-scan upper bound K1 grows without
    bound (logarithmically), exhibiting the gap between the couple's
    rectangle bracket and the Lorentz-normed K-functional."""
    spec_checks = []
    extras = {}
    k1_values = []
    for n in sizes:
        entries = np.zeros((n, n))
        entries[0, :] = (np.arange(1, n + 1)) ** (-1.0 / p)
        a = WeightedMatrix(entries, MeasureSpace.uniform(n), MeasureSpace.uniform(n))
        triple = triple_norm(a, CoupleSpec(p, q, 1.0)).value
        k1 = _threshold_scan_k1(a, p, q)
        k1_values.append(k1)
        extras[f"rect_norm_{n}"] = triple
        extras[f"k1_{n}"] = k1
        pstar = p / (p - 1.0)
        spec_checks.append(
            ReproCheck(f"rect_norm_bounded_{n}", triple, pstar, "le", 1e-9, "reference")
        )
        spec_checks.append(
            ReproCheck(f"k1_dominates_rect_norm_{n}", k1, triple, "ge", 1e-9, "derived")
        )
    for (n_small, k_small), (n_large, k_large) in zip(
        zip(sizes, k1_values), zip(sizes[1:], k1_values[1:])
    ):
        spec_checks.append(
            ReproCheck(
                f"k1_increases_{n_small}_to_{n_large}", k_large, k_small, "gt", 0.0, "reference"
            )
        )
    return ReproReport(
        "remark24", {"p": p, "q": q, "t": 1.0}, tuple(spec_checks), extras
    )


def repro_prop34(
    n: int = 64, p: float = 2.0, q: float = 1.0, t: float = 0.25
) -> ReproReport:
    """Constant matrix on uniform unit masses: for 0 < t <= 1 the
    two-sided norm equals t while the constrained norm drops to
    ``t^(p/(p-q))`` (realized by the largest feasible rectangle), so
    their ratio ``t^(-q/(p-q))`` is unbounded as t decreases."""
    if not (0.0 < t <= 1.0):
        raise ValueError("this family is calibrated for 0 < t <= 1")
    spec = CoupleSpec(p, q, t)
    # normalized so the full rectangle realizes the value t
    cell = float(n) ** (-(1.0 / q + (0.0 if math.isinf(p) else 1.0 / p)))
    a = WeightedMatrix(
        np.full((n, n), cell), MeasureSpace.uniform(n), MeasureSpace.uniform(n)
    )
    triple = triple_norm(a, spec).value
    quad = quad_norm(a, spec).value
    exponent = 1.0 if math.isinf(p) else p / (p - q)
    checks = (
        ReproCheck("rect_norm", triple, t, "eq", 0.05, "reference"),
        ReproCheck("constrained_rect_norm", quad, t ** exponent, "eq", 0.05, "reference"),
        ReproCheck(
            "ratio", triple / quad, t ** (-q / (p - q)), "eq", 0.05, "reference"
        ),
    )
    return ReproReport(
        "prop34",
        {"n": n, "p": p, "q": q, "t": t},
        checks,
        {"rect_norm": triple, "constrained_rect_norm": quad, "ratio": triple / quad},
    )


def repro_varopoulos(
    m: int = 3, t: float = 2.5, seed: int = 0, trials: int = 100
) -> ReproReport:
    """Random square (inf, 1) instances on unit masses at t >= 1: the
    splitting upper bound stays within the factor ``1 + t/floor(t)``
    (always below 3) of the constrained rectangle norm, giving a
    constructive equivalence with a dimension-free constant."""
    if t < 1.0:
        raise ValueError("this family is calibrated for t >= 1")
    rng = np.random.default_rng(seed)
    factor = 1.0 + t / math.floor(t)
    space = MeasureSpace.uniform(m)
    spec = CoupleSpec(math.inf, 1.0, t)
    worst = 0.0
    within = 0
    for _ in range(trials):
        a = WeightedMatrix(rng.uniform(-1.0, 1.0, (m, m)), space, space)
        split = split_infty_one(a, t)
        upper = split.bound_a + t * split.bound_b
        quad = quad_norm(a, spec).value
        ratio = upper / quad if quad > 0.0 else (0.0 if upper == 0.0 else math.inf)
        worst = max(worst, ratio)
        if upper <= factor * quad + 1e-9 * max(1.0, quad):
            within += 1
    checks = (
        ReproCheck("instances_within_factor", within, trials, "eq", 0.0, "derived"),
        ReproCheck("max_ratio_upper_over_constrained", worst, factor, "le", 1e-9, "reference"),
        ReproCheck("factor_below_three", factor, 3.0, "lt", 0.0, "analytic"),
    )
    return ReproReport(
        "varopoulos",
        {"m": m, "t": t, "seed": seed, "trials": trials},
        checks,
        {"factor": factor, "max_ratio": worst},
    )

"""Constructive matrix splittings certifying two-sided K-functional bounds.

Each stage works on the active submatrix. Columns are ordered by their
active-row mass (ties toward the smaller index), the longest prefix whose
cumulative column mass stays within the stage threshold is kept, and the
active row with the smallest kept-prefix row sum (ties toward the larger
index) moves its kept cells to the A side; its remaining cells, and every
cell of a dropped column in still-active rows, end up on the B side.
Active columns then shrink to the kept prefix.

The partition depends only on entry magnitudes, the masses, and t; it is
invariant under rescaling the matrix. Certification recomputes both side
norms on the produced partition and raises :class:`CertificationError`
when either certified inequality fails, so a broken partition can never
return silently.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .measure import WeightedMatrix
from .norms import CoupleSpec, mixed_inf_one, mixed_inf_one_T, mixed_weak_norm, mixed_weak_norm_T
from .rectnorm import triple_norm

__all__ = [
    "CertificationError",
    "SplitStage",
    "SplitTrace",
    "SplitResult",
    "split_infty_one",
    "split_p_one",
    "split_p_q",
]

CERT_RTOL = 1e-9
CERT_ATOL = 1e-12


class CertificationError(RuntimeError):
    """A produced partition failed its recomputed certified bound."""


@dataclass(frozen=True)
class SplitStage:
    """Snapshot of one stage: the active rows, the active columns in mass
    order with their masses, the kept-prefix length, the kept-prefix row
    sums aligned with ``active_rows``, and the retired row."""

    active_rows: tuple[int, ...]
    column_order: tuple[int, ...]
    column_masses: tuple[float, ...]
    kept: int
    row_sums: tuple[float, ...]
    chosen_row: int


@dataclass(frozen=True)
class SplitTrace:
    stages: tuple[SplitStage, ...]


@dataclass(frozen=True, eq=False)
class SplitResult:
    """A-side cells, B-side cells, their certified norms, and the scale
    (the two-sided rectangle norm) they were certified against."""

    a_cells: frozenset
    b_cells: frozenset
    bound_a: float
    bound_b: float
    scale: float
    trace: SplitTrace


def _partition(weights: np.ndarray, mu: np.ndarray, nu: np.ndarray, factor: float):
    """Runs the staged partition on nonnegative ``weights``; ``factor``
    multiplies the active row mass to form the column-mass threshold."""
    m, n = weights.shape
    active_rows = list(range(m))
    active_cols = list(range(n))
    a_cells: set[tuple[int, int]] = set()
    stages = []
    while active_rows:
        rows = np.asarray(active_rows, dtype=int)
        cols = np.asarray(active_cols, dtype=int)
        sub = weights[np.ix_(rows, cols)]
        sigma = mu[rows] @ sub
        order = np.argsort(-sigma, kind="stable")
        ordered_cols = cols[order]
        threshold = float(mu[rows].sum()) * factor
        cum_nu = np.cumsum(nu[ordered_cols])
        kept = int(np.searchsorted(cum_nu, threshold, side="right"))
        kept_cols = ordered_cols[:kept]
        if kept:
            tau = sub[:, order[:kept]] @ nu[kept_cols]
        else:
            tau = np.zeros(rows.size)
        t_min = tau.min()
        chosen = int(max(r for r, v in zip(rows, tau) if v == t_min))
        a_cells.update((chosen, int(j)) for j in kept_cols)
        stages.append(
            SplitStage(
                active_rows=tuple(int(r) for r in rows),
                column_order=tuple(int(c) for c in ordered_cols),
                column_masses=tuple(float(s) for s in sigma[order]),
                kept=kept,
                row_sums=tuple(float(v) for v in tau),
                chosen_row=chosen,
            )
        )
        active_rows.remove(chosen)
        active_cols = sorted(int(j) for j in kept_cols)
    return a_cells, SplitTrace(tuple(stages))


def _all_cells(shape: tuple[int, int]) -> frozenset:
    return frozenset((i, j) for i in range(shape[0]) for j in range(shape[1]))


def _certify(bound_a: float, bound_b: float, scale: float, t: float):
    cap_a = scale * (1.0 + CERT_RTOL) + CERT_ATOL
    cap_b = (scale / t) * (1.0 + CERT_RTOL) + CERT_ATOL
    if bound_a > cap_a or bound_b > cap_b:
        raise CertificationError(
            f"partition bounds ({bound_a}, {bound_b}) exceed the certified "
            f"caps ({scale}, {scale / t})"
        )


def _split(a, spec, weights, factor, norm_a, norm_b, override):
    scale = triple_norm(a, spec, override=override).value
    shape = a.shape
    if scale == 0.0:
        return SplitResult(_all_cells(shape), frozenset(), 0.0, 0.0, 0.0, SplitTrace(()))
    a_cells, trace = _partition(weights, a.row_space.masses, a.col_space.masses, factor)
    b_cells = _all_cells(shape) - a_cells
    bound_a = norm_a(a.restrict(a_cells))
    bound_b = norm_b(a.restrict(b_cells))
    _certify(bound_a, bound_b, scale, spec.t)
    return SplitResult(frozenset(a_cells), b_cells, bound_a, bound_b, scale, trace)


def split_infty_one(a: WeightedMatrix, t: float, *, override: bool = False) -> SplitResult:
    """Splitting for the (inf, 1) couple: the A side is controlled in the
    sup-of-row-sums norm by the two-sided rectangle norm s, the B side in
    the transposed norm by s / t."""
    spec = CoupleSpec(math.inf, 1.0, t)
    return _split(
        a, spec, np.abs(a.entries), t, mixed_inf_one, mixed_inf_one_T, override
    )


def split_p_one(a: WeightedMatrix, t: float, p: float, *, override: bool = False) -> SplitResult:
    """Splitting for a (p, 1) couple, certified in the mixed weak norms.

    The stage threshold uses ``t**p_star`` with ``p_star = p/(p-1)``
    (1 when p is infinite, recovering :func:`split_infty_one`).
    """
    spec = CoupleSpec(p, 1.0, t)
    return _split(
        a,
        spec,
        np.abs(a.entries),
        t ** spec.p_star,
        lambda x: mixed_weak_norm(x, p, 1.0),
        lambda x: mixed_weak_norm_T(x, p, 1.0),
        override,
    )


def split_p_q(a: WeightedMatrix, spec: CoupleSpec, *, override: bool = False) -> SplitResult:
    """Splitting for a general (p, q) couple via q-convexification.

    The partition is the (p/q, 1) partition of the entrywise q-th powers
    at parameter ``t**q``; the certified bounds are the mixed weak (p, q)
    norms of the two restricted pieces against the original scale.
    """
    p, q, t = spec.p, spec.q, spec.t
    inner_pstar = 1.0 if math.isinf(p) else (p / q) / (p / q - 1.0)
    return _split(
        a,
        spec,
        np.abs(a.entries) ** q,
        (t ** q) ** inner_pstar,
        lambda x: mixed_weak_norm(x, p, q),
        lambda x: mixed_weak_norm_T(x, p, q),
        override,
    )

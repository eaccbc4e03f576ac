"""Weighted l^q, weak-l^p, Lorentz, and mixed matrix norms.

The mixed norms pair an inner exponent over one axis with an outer
functional over the other. ``mixed_weak_norm`` is the outer weak-l^p of
the row-wise inner l^q norms; the ``_T`` variants swap the roles of the
two axes.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .measure import MeasureSpace, WeightedMatrix, rearrange

__all__ = [
    "CoupleSpec",
    "lq_norm",
    "weak_lp_norm",
    "lorentz_pq_norm",
    "mixed_inf_one",
    "mixed_inf_one_T",
    "mixed_weak_norm",
    "mixed_weak_norm_T",
]


@dataclass(frozen=True)
class CoupleSpec:
    """Exponent pair and parameter for one couple computation.

    Requires ``1 < p <= inf``, ``1 <= q < p`` with ``q`` finite, and a
    finite positive ``t``. Derived quantities: ``p_star`` is the
    conjugate-like ratio ``p/(p-1)`` (1 at ``p = inf``), ``alpha`` equals
    ``1/q - 1/p`` (just ``1/q`` at ``p = inf``), and ``c_pq`` is the lower
    bracket constant ``(1 - q/p)^(1/q)``.
    """

    p: float
    q: float
    t: float

    def __post_init__(self):
        p, q, t = float(self.p), float(self.q), float(self.t)
        if not p > 1.0:
            raise ValueError("p must satisfy 1 < p <= inf")
        if not (math.isfinite(q) and 1.0 <= q < p):
            raise ValueError("q must be finite with 1 <= q < p")
        if not (math.isfinite(t) and t > 0.0):
            raise ValueError("t must be finite and positive")
        object.__setattr__(self, "p", p)
        object.__setattr__(self, "q", q)
        object.__setattr__(self, "t", t)

    @property
    def is_p_infinite(self) -> bool:
        return math.isinf(self.p)

    @property
    def p_star(self) -> float:
        if self.is_p_infinite:
            return 1.0
        return self.p / (self.p - 1.0)

    @property
    def alpha(self) -> float:
        if self.is_p_infinite:
            return 1.0 / self.q
        return 1.0 / self.q - 1.0 / self.p

    @property
    def c_pq(self) -> float:
        if self.is_p_infinite:
            return 1.0
        return (1.0 - self.q / self.p) ** (1.0 / self.q)

    def with_t(self, t: float) -> "CoupleSpec":
        return CoupleSpec(self.p, self.q, t)


def _check_vector(f, space: MeasureSpace) -> np.ndarray:
    v = np.asarray(f, dtype=float)
    if v.ndim != 1 or v.shape[0] != space.size:
        raise ValueError("vector length must match the space size")
    if not np.all(np.isfinite(v)):
        raise ValueError("vector must be finite")
    return v


def lq_norm(f, space: MeasureSpace, q: float) -> float:
    """Weighted l^q norm; ``q = inf`` gives the sup norm."""
    v = _check_vector(f, space)
    q = float(q)
    if math.isinf(q):
        return float(np.abs(v).max())
    if not q >= 1.0:
        raise ValueError("q must satisfy q >= 1")
    return float((np.abs(v) ** q @ space.masses) ** (1.0 / q))


def weak_lp_norm(f, space: MeasureSpace, p: float) -> float:
    """Weak l^p norm, the sup of value times (mass at or above it)^(1/p)."""
    p = float(p)
    if not p > 0.0:
        raise ValueError("p must be positive")
    r = rearrange(f, space)
    if math.isinf(p):
        return float(r.values[0])
    return float((r.values * r.cum_masses ** (1.0 / p)).max())


def lorentz_pq_norm(f, space: MeasureSpace, p: float, q: float) -> float:
    """Lorentz (p, q) norm in closed step form.

    With breakpoints ``(v_k, T_k)`` of the decreasing rearrangement this is
    ``(sum_k v_k^q (p/q) (T_k^{q/p} - T_{k-1}^{q/p}))^{1/q}``.
    """
    p, q = float(p), float(q)
    if not (math.isfinite(p) and p > 0.0):
        raise ValueError("p must be finite and positive")
    if not (math.isfinite(q) and q > 0.0):
        raise ValueError("q must be finite and positive")
    r = rearrange(f, space)
    powers = r.cum_masses ** (q / p)
    increments = np.diff(np.concatenate(([0.0], powers)))
    return float(((r.values ** q * (p / q) * increments).sum()) ** (1.0 / q))


def _row_q_sums(a: WeightedMatrix, q: float) -> np.ndarray:
    return np.abs(a.entries) ** q @ a.col_space.masses


def row_q_norms(a: WeightedMatrix, q: float) -> np.ndarray:
    """Inner weighted l^q norm of every row, as a vector on the row space."""
    q = float(q)
    if not (math.isfinite(q) and q >= 1.0):
        raise ValueError("q must be finite with q >= 1")
    if q == 1.0:
        return np.abs(a.entries) @ a.col_space.masses
    return _row_q_sums(a, q) ** (1.0 / q)


def mixed_inf_one(a: WeightedMatrix) -> float:
    """Largest weighted l^1 row sum (outer sup, inner l^1)."""
    return float((np.abs(a.entries) @ a.col_space.masses).max())


def mixed_inf_one_T(a: WeightedMatrix) -> float:
    """Largest weighted l^1 column sum (axes swapped)."""
    return float((a.row_space.masses @ np.abs(a.entries)).max())


def mixed_weak_norm(a: WeightedMatrix, p: float, q: float) -> float:
    """Outer weak-l^p over rows of the inner l^q norms over columns."""
    return weak_lp_norm(row_q_norms(a, q), a.row_space, p)


def mixed_weak_norm_T(a: WeightedMatrix, p: float, q: float) -> float:
    """Same as :func:`mixed_weak_norm` with the two axes swapped."""
    return mixed_weak_norm(a.transpose(), p, q)

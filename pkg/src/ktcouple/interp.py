"""Interpolation quantities for positive-kernel operators.

A kernel k(i, j) acts by integrating against the column space,
``(u f)(i) = sum_j k(i, j) f(j) nu_j``, and pairs with row-space
functions through ``<g, h> = sum_i g(i) h(i) mu_i``. Everything here is
driven by rectangle sums of ``|k|``: testing the operator on indicator
functions of a column set F against an indicator of a row set E gives
exactly the weighted l^1 rectangle mass.

``theta_inf_norm`` and ``bracket_u_p`` compute the same interpolation
norm by two different routes (a scan of the parametrized operator norm
over candidate parameters versus a single rectangle supremum); their
agreement is a correctness check, so neither is expressed through the
other.
"""

from __future__ import annotations

import heapq
import math
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from .kt import _weak_rows, kt_bracket, kt_exact_lp
from .measure import WeightedMatrix
from .norms import CoupleSpec, mixed_weak_norm, mixed_weak_norm_T
from .rectnorm import GUARD_LIMIT, GuardError, _rect_sup, triple_norm

__all__ = [
    "OperatorKernel",
    "InterpSpec",
    "Interval",
    "op_triple_norm",
    "bracket_u_p",
    "theta_inf_norm",
    "theta_q_norm",
    "weak_type_check",
]


@dataclass(frozen=True, eq=False)
class OperatorKernel:
    """An integral operator given by its kernel matrix."""

    kernel: WeightedMatrix

    def apply(self, f) -> np.ndarray:
        """Image of a column-space function: integrate the kernel against
        ``f`` with the column masses."""
        v = np.asarray(f, dtype=float)
        if v.shape != (self.kernel.col_space.size,):
            raise ValueError("function length must match the column space")
        return self.kernel.entries @ (v * self.kernel.col_space.masses)

    def pairing(self, g, h) -> float:
        """Mass-weighted pairing of two row-space functions."""
        gv = np.asarray(g, dtype=float)
        hv = np.asarray(h, dtype=float)
        if gv.shape != hv.shape or gv.shape != (self.kernel.row_space.size,):
            raise ValueError("pairing arguments must live on the row space")
        return float((gv * hv * self.kernel.row_space.masses).sum())

    def modulus(self) -> "OperatorKernel":
        return OperatorKernel(self.kernel.with_entries(np.abs(self.kernel.entries)))


@dataclass(frozen=True)
class InterpSpec:
    """Interpolation parameter ``theta`` in (0, 1) and outer exponent
    ``q`` in [1, inf]. The associated Lebesgue exponent is ``p = 1/theta``."""

    theta: float
    q: float

    def __post_init__(self):
        theta, q = float(self.theta), float(self.q)
        if not (0.0 < theta < 1.0):
            raise ValueError("theta must lie strictly between 0 and 1")
        if not q >= 1.0:
            raise ValueError("q must satisfy 1 <= q <= inf")
        object.__setattr__(self, "theta", theta)
        object.__setattr__(self, "q", q)

    @property
    def p(self) -> float:
        return 1.0 / self.theta


class Interval(NamedTuple):
    lower: float
    upper: float

    @property
    def width(self) -> float:
        return self.upper - self.lower

    @property
    def midpoint(self) -> float:
        return 0.5 * (self.lower + self.upper)


def op_triple_norm(u: OperatorKernel, t: float, *, override: bool = False) -> float:
    """Two-sided rectangle norm of the kernel in the (inf, 1) couple at t."""
    return triple_norm(u.kernel, CoupleSpec(math.inf, 1.0, t), override=override).value


def _subset_tableau(a: WeightedMatrix, override: bool):
    """All rectangle l^1 masses of ``|a|`` with the subset masses of both
    axes. Cost and memory grow with 2^rows times 2^cols, guarded like the
    rectangle norms."""
    m, n = a.shape
    pairs = ((1 << m) - 1) * ((1 << n) - 1)
    if pairs > GUARD_LIMIT and not override:
        raise GuardError(
            f"subset tableau needs {pairs} rectangle masses, above the guard "
            f"of {GUARD_LIMIT}; pass override=True to force it"
        )
    row_masks = np.arange(1, 1 << m, dtype=np.int64)
    col_masks = np.arange(1, 1 << n, dtype=np.int64)
    row_bits = ((row_masks[:, None] >> np.arange(m)[None, :]) & 1).astype(float)
    col_bits = ((col_masks[:, None] >> np.arange(n)[None, :]) & 1).astype(float)
    mu_e = row_bits @ a.row_space.masses
    nu_f = col_bits @ a.col_space.masses
    weighted = np.abs(a.entries) * np.outer(a.row_space.masses, a.col_space.masses)
    sums = row_bits @ weighted @ col_bits.T
    return mu_e, nu_f, sums


def theta_inf_norm(
    u: OperatorKernel,
    spec: InterpSpec,
    *,
    override: bool = False,
    candidate_limit: int = 1 << 26,
) -> float:
    """Supremum of ``t^(-theta)`` times the parametrized operator norm.

    The supremum over t > 0 is attained on the finite candidate set of
    mass ratios ``nu(F) / mu(E)``: each rectangle's own contribution
    peaks exactly at its ratio. The scan is quadratic in the number of
    rectangles, so it is meant for small kernels.
    """
    theta = spec.theta
    mu_e, nu_f, sums = _subset_tableau(u.kernel, override)
    if not sums.any():
        return 0.0
    candidates = np.unique(np.outer(1.0 / mu_e, nu_f))
    if candidates.size * mu_e.size * nu_f.size > candidate_limit and not override:
        raise GuardError(
            "candidate scan too large; pass override=True to force it"
        )
    best = 0.0
    for t in candidates:
        norm_t = float((sums / np.maximum(mu_e[:, None], nu_f[None, :] / t)).max())
        best = max(best, float(t) ** (-theta) * norm_t)
    return best


def bracket_u_p(u: OperatorKernel, spec: InterpSpec, *, override: bool = False) -> float:
    """Rectangle form of the interpolation norm: the supremum over
    nonempty rectangles of ``nu(F)^(-theta) mu(E)^(theta-1)`` times the
    weighted l^1 mass of ``|k|`` on E x F."""
    theta = spec.theta
    kernel = u.kernel
    abs_k = np.abs(kernel.entries)
    keep_r = np.nonzero(abs_k.any(axis=1))[0]
    keep_c = np.nonzero(abs_k.any(axis=0))[0]
    if keep_r.size == 0:
        return 0.0

    def denom(x, y):
        return (y ** theta) * (x ** (1.0 - theta))

    res = _rect_sup(
        abs_k[np.ix_(keep_r, keep_c)],
        kernel.row_space.masses[keep_r],
        kernel.col_space.masses[keep_c],
        1.0,
        denom,
        None,
        override,
    )
    return float(res[0])


def weak_type_check(u: OperatorKernel, p: float, *, override: bool = False) -> float:
    """Largest normalized weak l^p norm of the kernel acting on indicator
    functions: the sup over column sets F of
    ``nu(F)^(-1/p) * weak_lp(sum_{j in F} |k(., j)| nu_j)``.

    This is equivalent to the rectangle form of the interpolation norm at
    ``theta = 1/p`` up to the factor ``p/(p-1)`` in one direction and 1
    in the other.
    """
    p = float(p)
    if not (math.isfinite(p) and p > 1.0):
        raise ValueError("p must be finite with p > 1")
    kernel = u.kernel
    m, n = kernel.shape
    count = (1 << n) - 1
    if count > GUARD_LIMIT and not override:
        raise GuardError(
            f"weak-type scan needs {count} column sets, above the guard of "
            f"{GUARD_LIMIT}; pass override=True to force it"
        )
    weighted = np.abs(kernel.entries) * kernel.col_space.masses[None, :]
    mu = kernel.row_space.masses
    nu = kernel.col_space.masses
    best = 0.0
    chunk = 1 << 15
    for lo in range(1, count + 1, chunk):
        hi = min(lo + chunk, count + 1)
        idx = np.arange(lo, hi, dtype=np.int64)
        bits = ((idx[:, None] >> np.arange(n, dtype=np.int64)[None, :]) & 1).astype(float)
        images = bits @ weighted.T
        weak = _weak_rows(images, mu, p)
        nu_f = bits @ nu
        best = max(best, float((weak * nu_f ** (-1.0 / p)).max()))
    return best


def _power_integral(lo: float, hi: float, exponent: float) -> float:
    """Integral of t^(exponent - 1) over [lo, hi]; exponent must be nonzero."""
    return (hi ** exponent - lo ** exponent) / exponent


def _upper_cell_integral(x, y, u_left, u_right, theta, g):
    """Integral over one grid cell of the q-th power upper envelope
    ``min(u_right, u_left * t / x)`` times ``t^(-theta q - 1)``. Uses that
    the K-functional is nondecreasing while K/t is nonincreasing."""
    if u_left == 0.0:
        return 0.0
    crossing = x * u_right / u_left
    slope = (u_left / x) ** g
    const = u_right ** g
    if crossing <= x:
        return const * _power_integral(x, y, -theta * g)
    if crossing >= y:
        return slope * _power_integral(x, y, (1.0 - theta) * g)
    return slope * _power_integral(x, crossing, (1.0 - theta) * g) + const * _power_integral(
        crossing, y, -theta * g
    )


def _lower_cell_integral(x, y, l_left, l_right, theta, g):
    """Same for the lower envelope ``max(l_left, l_right * t / y)``."""
    if l_left == 0.0 and l_right == 0.0:
        return 0.0
    const = l_left ** g
    slope = (l_right / y) ** g
    if l_right == 0.0:
        return const * _power_integral(x, y, -theta * g)
    crossing = y * l_left / l_right
    if crossing <= x:
        return slope * _power_integral(x, y, (1.0 - theta) * g)
    if crossing >= y:
        return const * _power_integral(x, y, -theta * g)
    return const * _power_integral(x, crossing, -theta * g) + slope * _power_integral(
        crossing, y, (1.0 - theta) * g
    )


def theta_q_norm(
    a: WeightedMatrix,
    spec: InterpSpec,
    p: float = math.inf,
    q: float = 1.0,
    *,
    oracle: str = "bracket",
    ratio: float = 1.1,
    decades: float = 4.0,
    tol_rel: float = 1e-6,
    max_refine: int = 2000,
    override: bool = False,
) -> Interval:
    """Certified enclosure of the (theta, q) interpolation norm of ``a``
    in the (p, q) couple, the q-integral over t of ``t^(-theta) K_t``.

    K-functional values on a geometric grid come from the requested
    oracle (``"bracket"`` for certified two-sided bounds, ``"lp"`` for
    the exact (inf, 1) value). Between grid points the envelopes use
    monotonicity of K and of K/t; beyond the grid the tails are bounded
    in closed form. For ``spec.q = inf`` the grid refines adaptively
    around the supremum until the enclosure is within ``tol_rel`` or
    ``max_refine`` evaluations were spent.
    """
    if oracle not in ("bracket", "lp"):
        raise ValueError(f"unknown oracle {oracle!r}")
    if oracle == "lp" and not (math.isinf(p) and q == 1.0):
        raise ValueError("the lp oracle applies to the (inf, 1) couple only")
    theta = spec.theta
    g = spec.q
    norm_plain = mixed_weak_norm(a, p, q)
    norm_t = mixed_weak_norm_T(a, p, q)
    if norm_plain == 0.0:
        return Interval(0.0, 0.0)

    def envelope(t: float) -> tuple[float, float]:
        if oracle == "lp":
            value = kt_exact_lp(a, t).value
            return value, value
        bracket = kt_bracket(a, CoupleSpec(p, q, t), override=override)
        return bracket.lower, bracket.upper

    t_center = norm_plain / norm_t
    t_lo = t_center * 10.0 ** (-decades)
    t_hi = t_center * 10.0 ** decades
    count = max(2, int(math.ceil(math.log(t_hi / t_lo) / math.log(ratio))) + 1)
    grid = list(np.geomspace(t_lo, t_hi, count))
    values = {t: envelope(t) for t in grid}

    if math.isinf(g):
        return _sup_enclosure(
            grid, values, envelope, theta, norm_plain, norm_t, tol_rel, max_refine
        )

    upper_sum = norm_t ** g * _power_integral(0.0, grid[0], (1.0 - theta) * g)
    upper_sum += norm_plain ** g * grid[-1] ** (-theta * g) / (theta * g)
    lower_sum = values[grid[0]][0] ** g * grid[0] ** (-theta * g) / ((1.0 - theta) * g)
    lower_sum += values[grid[-1]][0] ** g * grid[-1] ** (-theta * g) / (theta * g)
    for x, y in zip(grid, grid[1:]):
        (l_left, u_left), (l_right, u_right) = values[x], values[y]
        upper_sum += _upper_cell_integral(x, y, u_left, u_right, theta, g)
        lower_sum += _lower_cell_integral(x, y, l_left, l_right, theta, g)
    return Interval(lower_sum ** (1.0 / g), upper_sum ** (1.0 / g))


def _sup_enclosure(grid, values, envelope, theta, norm_plain, norm_t, tol_rel, max_refine):
    """Adaptive enclosure of ``sup_t t^(-theta) K_t``. Grid cells carry
    the upper bound ``min(x^-theta U(y), y^(1-theta) U(x)/x)``; the worst
    cell is bisected geometrically until the gap closes or the budget or
    resolution limit is reached."""

    def cell_upper(x, y):
        return min(
            x ** (-theta) * values[y][1],
            y ** (1.0 - theta) * values[x][1] / x,
        )

    heap = []
    for x, y in zip(grid, grid[1:]):
        heapq.heappush(heap, (-cell_upper(x, y), x, y))
    t_lo, t_hi = grid[0], grid[-1]
    lower = max(t ** (-theta) * lv for t, (lv, uv) in values.items())
    spent = 0
    while True:
        head_upper = t_lo ** (1.0 - theta) * norm_t
        tail_upper = t_hi ** (-theta) * norm_plain
        cell_top, x, y = heap[0] if heap else (0.0, None, None)
        upper = max(head_upper, tail_upper, -cell_top)
        if upper - lower <= tol_rel * max(lower, 1e-300) or spent >= max_refine:
            return Interval(lower, upper)
        spent += 1
        if head_upper >= max(tail_upper, -cell_top):
            new_t = t_lo * 0.1
            values[new_t] = envelope(new_t)
            heapq.heappush(heap, (-cell_upper(new_t, t_lo), new_t, t_lo))
            t_lo = new_t
        elif tail_upper >= -cell_top:
            new_t = t_hi * 10.0
            values[new_t] = envelope(new_t)
            heapq.heappush(heap, (-cell_upper(t_hi, new_t), t_hi, new_t))
            t_hi = new_t
        else:
            heapq.heappop(heap)
            if y / x - 1.0 < 1e-12:
                # cell cannot be resolved further; keep its bound
                heapq.heappush(heap, (cell_top, x, y))
                return Interval(lower, max(head_upper, tail_upper, -cell_top))
            mid = math.sqrt(x * y)
            values[mid] = envelope(mid)
            heapq.heappush(heap, (-cell_upper(x, mid), x, mid))
            heapq.heappush(heap, (-cell_upper(mid, y), mid, y))
        lower = max(
            lower, max(t ** (-theta) * lv for t, (lv, uv) in values.items())
        )

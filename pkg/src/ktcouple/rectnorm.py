"""Rectangle-supremum norms with exact enumeration.

The supremum runs over nonempty index rectangles E x F. Row subsets are
enumerated exactly. Columns are handled per row subset: when the column
masses are all equal only sorted prefixes need evaluation (for a fixed
column count the denominator is fixed, so the heaviest columns win),
otherwise column subsets are enumerated exactly as well.

Exact reductions applied before enumeration:

* all-zero columns never help and are dropped; all-zero rows are dropped
  only for the unconstrained norm (for the constrained variant extra row
  mass can make an infeasible rectangle feasible, so they stay);
* when both mass vectors are uniform and ``|a|`` is constant the
  objective depends on a rectangle only through its side counts, and a
  scan over (|E|, |F|) is exact.

Reported witnesses therefore never contain all-zero rows or columns.
Ties break toward the lexicographically smallest (rows, cols) pair among
evaluated maximizers, with equality judged after rounding values to 12
significant digits.

Enumeration cost is guarded: above ``GUARD_LIMIT`` objective evaluations
a call refuses with :class:`GuardError` unless ``override=True``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .measure import Rectangle, WeightedMatrix, rect_mass_sum
from .norms import CoupleSpec

__all__ = [
    "GuardError",
    "RectNormResult",
    "GUARD_LIMIT",
    "triple_norm",
    "quad_norm",
    "triple_norm_p1_degenerate",
]

GUARD_LIMIT = 2 ** 24
WITNESS_DIGITS = 12
_ROW_CHUNK = 1 << 12
_PAIR_CHUNK = 1 << 22


class GuardError(RuntimeError):
    """Raised when an enumeration would exceed its cost guard."""


@dataclass(frozen=True)
class RectNormResult:
    """Value of a rectangle supremum with an attaining witness.

    ``regime`` records which branch of the defining expression was active
    at the witness: for the two-sided norm one of ``row-mass``,
    ``col-mass``, ``balanced`` (or ``zero``); for the constrained norm
    ``constrained``, ``zero``, or ``empty`` when no rectangle is feasible.
    """

    value: float
    witness: Rectangle
    regime: str


def _round_sig(v: float) -> float:
    if v == 0.0 or not math.isfinite(v):
        return v
    return float(f"{v:.{WITNESS_DIGITS}g}")


def _bit_indices(mask: int) -> tuple[int, ...]:
    out = []
    i = 0
    while mask:
        if mask & 1:
            out.append(i)
        mask >>= 1
        i += 1
    return tuple(out)


def _mask_block(lo: int, hi: int, width: int) -> np.ndarray:
    idx = np.arange(lo, hi, dtype=np.int64)
    bits = (idx[:, None] >> np.arange(width, dtype=np.int64)[None, :]) & 1
    return bits.astype(float)


class _Best:
    """Tracks the maximum and its lexicographically smallest witness."""

    __slots__ = ("raw", "rounded", "value", "rows", "cols")

    def __init__(self):
        self.raw = 0.0
        self.rounded = -math.inf
        self.value = 0.0
        self.rows = None
        self.cols = None

    def offer(self, value: float, rows: tuple[int, ...], cols: tuple[int, ...]):
        r = _round_sig(value)
        if r > self.rounded or (
            r == self.rounded and (rows, cols) < (self.rows, self.cols)
        ):
            self.rounded = r
            self.value = value
            self.rows = rows
            self.cols = cols

    def collect(self, vals: np.ndarray, witness_at):
        block_max = float(vals.max())
        if block_max <= 0.0:
            return
        if block_max > self.raw:
            self.raw = block_max
        thresh = self.raw * (1.0 - 1e-10)
        if block_max < thresh:
            return
        for r, c in np.argwhere(vals >= thresh):
            rows, cols = witness_at(int(r), int(c))
            self.offer(float(vals[r, c]), rows, cols)


def _rect_sup(wq, mu, nu, inv_q, denom_fn, feas_fn, override):
    """Exact supremum of num(E,F)^inv_q / denom(mu(E), nu(F)) over rectangles.

    ``wq`` must be the entrywise q-th powers of the magnitudes. Returns
    ``(value, rows, cols)`` when the supremum is positive,
    ``(0.0, None, None)`` when feasible rectangles exist but all have zero
    numerator, and ``None`` when ``feas_fn`` rules out every rectangle.
    """
    m, n = wq.shape
    uniform_nu = bool(np.all(nu == nu[0]))
    n_row_masks = (1 << m) - 1
    evals = n_row_masks * (n if uniform_nu else ((1 << n) - 1))
    if evals > GUARD_LIMIT and not override:
        raise GuardError(
            f"supremum needs {evals} rectangle evaluations, above the guard "
            f"of {GUARD_LIMIT}; pass override=True to force the enumeration"
        )
    weights = wq * mu[:, None] * nu[None, :]
    best = _Best()
    saw_feasible = feas_fn is None

    for lo in range(1, n_row_masks + 1, _ROW_CHUNK):
        hi = min(lo + _ROW_CHUNK, n_row_masks + 1)
        block = _mask_block(lo, hi, m)
        mu_e = block @ mu
        col_w = block @ weights
        if uniform_nu:
            order = np.argsort(-col_w, axis=1, kind="stable")
            nums = np.cumsum(np.take_along_axis(col_w, order, axis=1), axis=1)
            nu_f = nu[0] * np.arange(1, n + 1)
            vals = nums if inv_q == 1.0 else nums ** inv_q
            vals = vals / denom_fn(mu_e[:, None], nu_f[None, :])
            if feas_fn is not None:
                ok = np.broadcast_to(
                    feas_fn(mu_e[:, None], nu_f[None, :]), vals.shape
                )
                saw_feasible = saw_feasible or bool(ok.any())
                vals = np.where(ok, vals, -np.inf)

            def witness_at(r, c, lo=lo, order=order):
                rows = _bit_indices(lo + r)
                cols = tuple(sorted(int(j) for j in order[r, : c + 1]))
                return rows, cols

            best.collect(vals, witness_at)
        else:
            n_col_masks = (1 << n) - 1
            col_chunk = max(1, _PAIR_CHUNK // (hi - lo))
            for clo in range(1, n_col_masks + 1, col_chunk):
                chi = min(clo + col_chunk, n_col_masks + 1)
                cblock = _mask_block(clo, chi, n)
                nu_f = cblock @ nu
                nums = col_w @ cblock.T
                vals = nums if inv_q == 1.0 else nums ** inv_q
                vals = vals / denom_fn(mu_e[:, None], nu_f[None, :])
                if feas_fn is not None:
                    ok = np.broadcast_to(
                        feas_fn(mu_e[:, None], nu_f[None, :]), vals.shape
                    )
                    saw_feasible = saw_feasible or bool(ok.any())
                    vals = np.where(ok, vals, -np.inf)

                def witness_at(r, c, lo=lo, clo=clo):
                    return _bit_indices(lo + r), _bit_indices(clo + c)

                best.collect(vals, witness_at)

    if best.rows is not None:
        return best.value, best.rows, best.cols
    if saw_feasible:
        return 0.0, None, None
    return None


def _size_scan(cell_wq, mu0, nu0, m, n, inv_q, denom_fn, feas_fn):
    """Exact scan over side counts for a constant matrix on uniform masses."""
    mu_e = mu0 * np.arange(1, m + 1)
    nu_f = nu0 * np.arange(1, n + 1)
    nums = cell_wq * np.outer(mu_e, nu_f)
    vals = nums if inv_q == 1.0 else nums ** inv_q
    vals = vals / denom_fn(mu_e[:, None], nu_f[None, :])
    if feas_fn is not None:
        ok = np.broadcast_to(feas_fn(mu_e[:, None], nu_f[None, :]), vals.shape)
        if not ok.any():
            return None
        vals = np.where(ok, vals, -np.inf)
    target = _round_sig(float(vals.max()))
    for e in range(m):
        for f in range(n):
            if _round_sig(float(vals[e, f])) == target:
                return float(vals[e, f]), tuple(range(e + 1)), tuple(range(f + 1))
    raise AssertionError("unreachable: maximum vanished during scan")


def _is_constant_uniform(sub, smu, snu) -> bool:
    return (
        bool(np.all(sub == sub.flat[0]))
        and bool(np.all(smu == smu[0]))
        and bool(np.all(snu == snu[0]))
    )


def _sup_on_submatrix(absq, mu, nu, keep_r, keep_c, inv_q, denom_fn, feas_fn, override):
    """Runs the fast scan or the full enumeration on a kept submatrix and
    maps witness indices back to the original axes."""
    sub = absq[np.ix_(keep_r, keep_c)]
    smu = mu[keep_r]
    snu = nu[keep_c]
    if _is_constant_uniform(sub, smu, snu):
        res = _size_scan(
            float(sub.flat[0]), float(smu[0]), float(snu[0]),
            len(keep_r), len(keep_c), inv_q, denom_fn, feas_fn,
        )
    else:
        res = _rect_sup(sub, smu, snu, inv_q, denom_fn, feas_fn, override)
    if res is None:
        return None
    value, rows, cols = res
    if rows is None:
        return 0.0, None, None
    rows = tuple(int(keep_r[i]) for i in rows)
    cols = tuple(int(keep_c[j]) for j in cols)
    return value, rows, cols


def triple_norm(a: WeightedMatrix, spec: CoupleSpec, *, override: bool = False) -> RectNormResult:
    """Two-sided rectangle norm: the supremum over nonempty rectangles of
    the q-mass of ``a`` divided by ``max(mu(E)^alpha, nu(F)^alpha / t)``.
    """
    q, alpha, t = spec.q, spec.alpha, spec.t
    mu = a.row_space.masses
    nu = a.col_space.masses
    absq = np.abs(a.entries) if q == 1.0 else np.abs(a.entries) ** q

    def denom(x, y):
        return np.maximum(x ** alpha, (y ** alpha) / t)

    keep_r = np.nonzero(absq.any(axis=1))[0]
    keep_c = np.nonzero(absq.any(axis=0))[0]
    if keep_r.size == 0:
        return RectNormResult(0.0, Rectangle((0,), (0,)), "zero")
    value, rows, cols = _sup_on_submatrix(
        absq, mu, nu, keep_r, keep_c, 1.0 / q, denom, None, override
    )
    x = a.row_space.subset_mass(rows) ** alpha
    y = (a.col_space.subset_mass(cols) ** alpha) / t
    regime = "row-mass" if x > y else ("col-mass" if x < y else "balanced")
    return RectNormResult(float(value), Rectangle(rows, cols), regime)


def _quad_zero_result(a: WeightedMatrix, spec: CoupleSpec) -> RectNormResult:
    """Zero-value result with the lexicographically smallest feasible
    witness, or the empty witness when no rectangle is feasible.

    The smallest feasible rectangle is always a row prefix paired with a
    single column: enlarging E only helps feasibility while prefixes are
    lexicographically minimal, and any feasible column set contains a
    feasible singleton.
    """
    alpha, t = spec.alpha, spec.t
    cum_mu = np.cumsum(a.row_space.masses)
    nu = a.col_space.masses
    for k in range(1, cum_mu.size + 1):
        feasible = np.nonzero((nu ** alpha) / t <= cum_mu[k - 1] ** alpha)[0]
        if feasible.size:
            return RectNormResult(
                0.0, Rectangle(tuple(range(k)), (int(feasible[0]),)), "zero"
            )
    return RectNormResult(0.0, Rectangle((), ()), "empty")


def quad_norm(a: WeightedMatrix, spec: CoupleSpec, *, override: bool = False) -> RectNormResult:
    """Constrained rectangle norm: the supremum of ``mu(E)^(-alpha)`` times
    the q-mass of ``a``, over rectangles with ``nu(F)^alpha / t <= mu(E)^alpha``.

    When no rectangle is feasible the value is 0 with an empty witness.
    """
    q, alpha, t = spec.q, spec.alpha, spec.t
    mu = a.row_space.masses
    nu = a.col_space.masses
    absq = np.abs(a.entries) if q == 1.0 else np.abs(a.entries) ** q

    def denom(x, y):
        return x ** alpha

    def feas(x, y):
        return (y ** alpha) / t <= x ** alpha

    keep_c = np.nonzero(absq.any(axis=0))[0]
    if keep_c.size == 0:
        return _quad_zero_result(a, spec)
    keep_r = np.arange(mu.size)
    res = _sup_on_submatrix(
        absq, mu, nu, keep_r, keep_c, 1.0 / q, denom, feas, override
    )
    if res is None or res[1] is None:
        return _quad_zero_result(a, spec)
    value, rows, cols = res
    return RectNormResult(float(value), Rectangle(rows, cols), "constrained")


def triple_norm_p1_degenerate(a: WeightedMatrix, t: float) -> float:
    """Degenerate two-sided norm at p = 1: the rectangle denominator is the
    constant ``max(1, 1/t)``, so the supremum is ``min(1, t)`` times the
    weighted l^1 mass of the full matrix.
    """
    t = float(t)
    if not (math.isfinite(t) and t > 0.0):
        raise ValueError("t must be finite and positive")
    m, n = a.shape
    full = Rectangle(tuple(range(m)), tuple(range(n)))
    return min(1.0, t) * rect_mass_sum(a, full, 1.0)

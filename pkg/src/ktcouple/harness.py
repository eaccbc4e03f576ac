"""Self-contained property suites for end-to-end verification.

Each suite draws seeded random instances, checks an exact relation the
library promises, and reports pass counts. The suites are intentionally
redundant with the unit tests: they exercise the same laws through the
public API only, on fresh instances every run, and they are what the
command line ``verify`` subcommand executes.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass

import numpy as np

from .interp import InterpSpec, OperatorKernel, bracket_u_p, theta_inf_norm
from .kt import kt_exact_lp, kt_mask_bruteforce
from .measure import MeasureSpace, Rectangle, WeightedMatrix, rect_mass_sum
from .norms import CoupleSpec, mixed_weak_norm
from .rectnorm import triple_norm, triple_norm_p1_degenerate
from .splitting import split_infty_one, split_p_q

__all__ = ["PropertyResult", "VerifyReport", "run_verification"]

_RTOL = 1e-9


def _leq(a: float, b: float) -> bool:
    return a <= b + _RTOL * max(abs(a), abs(b), 1.0)


def _close(a: float, b: float) -> bool:
    return abs(a - b) <= _RTOL * max(abs(a), abs(b), 1.0)


@dataclass(frozen=True)
class PropertyResult:
    name: str
    passed: int
    failed: int
    first_failure: str = ""

    @property
    def ok(self) -> bool:
        return self.failed == 0


@dataclass(frozen=True)
class VerifyReport:
    seed: int
    properties: tuple[PropertyResult, ...]

    @property
    def ok(self) -> bool:
        return all(prop.ok for prop in self.properties)


def _random_instance(rng, max_rows=4, max_cols=4, uniform=False) -> WeightedMatrix:
    m = int(rng.integers(1, max_rows + 1))
    n = int(rng.integers(1, max_cols + 1))
    if uniform:
        mu, nu = np.ones(m), np.ones(n)
    else:
        mu = rng.uniform(0.5, 2.0, m)
        nu = rng.uniform(0.5, 2.0, n)
    entries = rng.uniform(-1.0, 1.0, (m, n))
    return WeightedMatrix(entries, MeasureSpace(mu), MeasureSpace(nu))


class _Tally:
    def __init__(self, name: str):
        self.name = name
        self.passed = 0
        self.failed = 0
        self.first_failure = ""

    def record(self, ok: bool, detail: str):
        if ok:
            self.passed += 1
        else:
            self.failed += 1
            if not self.first_failure:
                self.first_failure = detail

    def result(self) -> PropertyResult:
        return PropertyResult(self.name, self.passed, self.failed, self.first_failure)


def _sandwich_chain(rng, trials: int, corrupt_split: bool) -> PropertyResult:
    tally = _Tally("sandwich-chain")
    for case in range(trials):
        a = _random_instance(rng, uniform=(case % 2 == 0))
        for t in (0.1, 1.0, 7.0):
            spec = CoupleSpec(math.inf, 1.0, t)
            triple = triple_norm(a, spec).value
            exact = kt_exact_lp(a, t).value
            split = split_infty_one(a, t)
            upper = split.bound_a + t * split.bound_b
            if corrupt_split:
                upper *= 0.4
            ok = _leq(triple, exact) and _leq(exact, upper) and _leq(upper, 2.0 * triple)
            if a.shape[0] * a.shape[1] <= 12:
                mask = kt_mask_bruteforce(a, spec).value
                ok = ok and _leq(exact, mask) and _leq(mask, upper)
            tally.record(
                ok,
                f"case {case} t={t}: triple={triple} lp={exact} upper={upper}",
            )
    return tally.result()


def _split_certification(rng, trials: int) -> PropertyResult:
    tally = _Tally("split-certification")
    couples = ((2.0, 1.0), (3.0, 1.0), (4.0, 2.0), (math.inf, 2.0))
    for case in range(trials):
        a = _random_instance(rng, uniform=(case % 2 == 0))
        p, q = couples[case % len(couples)]
        for t in (0.1, 1.0, 7.0):
            spec = CoupleSpec(p, q, t)
            res = split_p_q(a, spec)
            upper = res.bound_a + t * res.bound_b
            lower = spec.c_pq * res.scale
            ok = (
                _leq(res.bound_a, res.scale)
                and _leq(res.bound_b, res.scale / t)
                and _leq(lower, upper)
            )
            if a.shape[0] * a.shape[1] <= 12:
                mask = kt_mask_bruteforce(a, spec).value
                ok = ok and _leq(lower, mask) and _leq(mask, upper)
            tally.record(
                ok,
                f"case {case} couple=({p},{q}) t={t}: scale={res.scale} "
                f"bounds=({res.bound_a},{res.bound_b})",
            )
    return tally.result()


def _q_convexification(rng, trials: int) -> PropertyResult:
    tally = _Tally("q-convexification")
    couples = ((4.0, 2.0), (3.0, 1.5), (math.inf, 2.0), (5.0, 3.0))
    for case in range(trials):
        a = _random_instance(rng, uniform=(case % 2 == 0))
        p, q = couples[case % len(couples)]
        for t in (0.5, 1.0, 2.0):
            spec = CoupleSpec(p, q, t)
            convexified = a.with_entries(np.abs(a.entries) ** q)
            inner_p = math.inf if math.isinf(p) else p / q
            inner = CoupleSpec(inner_p, 1.0, t ** q)
            ok = _close(
                triple_norm(a, spec).value ** q, triple_norm(convexified, inner).value
            ) and _close(
                mixed_weak_norm(a, p, q) ** q,
                mixed_weak_norm(convexified, inner_p, 1.0),
            )
            tally.record(ok, f"case {case} couple=({p},{q}) t={t}")
    return tally.result()


def _bracket_equality(rng, trials: int) -> PropertyResult:
    tally = _Tally("bracket-equality")
    thetas = (0.25, 0.5, 0.75)
    for case in range(trials):
        kernel = OperatorKernel(_random_instance(rng, uniform=(case % 2 == 0)))
        spec = InterpSpec(thetas[case % len(thetas)], math.inf)
        scan = theta_inf_norm(kernel, spec)
        rect = bracket_u_p(kernel, spec)
        tally.record(
            _close(scan, rect), f"case {case} theta={spec.theta}: {scan} vs {rect}"
        )
    return tally.result()


def _p1_degeneracy(rng, trials: int) -> PropertyResult:
    tally = _Tally("p1-degeneracy")
    for case in range(trials):
        a = _random_instance(rng, max_rows=3, max_cols=3, uniform=(case % 2 == 0))
        for t in (0.1, 1.0, 7.0):
            value = triple_norm_p1_degenerate(a, t)
            m, n = a.shape
            full = Rectangle(tuple(range(m)), tuple(range(n)))
            closed = min(1.0, t) * rect_mass_sum(a, full, 1.0)
            denominator = max(1.0, 1.0 / t)
            naive = 0.0
            for rows in _nonempty_subsets(m):
                for cols in _nonempty_subsets(n):
                    mass = rect_mass_sum(a, Rectangle(rows, cols), 1.0)
                    naive = max(naive, mass / denominator)
            tally.record(
                _close(value, closed) and _close(value, naive),
                f"case {case} t={t}: {value} vs {closed} vs {naive}",
            )
    return tally.result()


def _nonempty_subsets(size: int):
    indices = range(size)
    for r in range(1, size + 1):
        yield from itertools.combinations(indices, r)


def run_verification(
    seed: int = 0, trials: int = 40, *, corrupt_split: bool = False
) -> VerifyReport:
    """Runs every property suite on fresh seeded instances.

    ``corrupt_split`` deliberately shrinks the splitting upper bound in
    the sandwich chain; it exists so the failure path of the harness can
    itself be tested.
    """
    rng = np.random.default_rng(seed)
    properties = (
        _sandwich_chain(rng, trials, corrupt_split),
        _split_certification(rng, trials),
        _q_convexification(rng, trials),
        _bracket_equality(rng, min(trials, 25)),
        _p1_degeneracy(rng, min(trials, 20)),
    )
    return VerifyReport(seed, properties)

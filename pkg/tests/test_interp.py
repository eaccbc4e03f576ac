import math

import numpy as np
import pytest

import ktcouple.interp as interp_mod
from ktcouple import (
    GuardError,
    InterpSpec,
    MeasureSpace,
    OperatorKernel,
    Rectangle,
    WeightedMatrix,
    bracket_u_p,
    op_triple_norm,
    rect_mass_sum,
    theta_inf_norm,
    theta_q_norm,
    weak_type_check,
)

from helpers import close, leq, random_matrix, unit_matrix


def kernel_of(entries, mu=None, nu=None) -> OperatorKernel:
    entries = np.asarray(entries, dtype=float)
    m, n = entries.shape
    row = MeasureSpace.uniform(m) if mu is None else MeasureSpace(mu)
    col = MeasureSpace.uniform(n) if nu is None else MeasureSpace(nu)
    return OperatorKernel(WeightedMatrix(entries, row, col))


class TestOperatorKernel:
    def test_indicator_pairing_is_rectangle_mass(self):
        rng = np.random.default_rng(400)
        for k in range(30):
            a = random_matrix(rng, uniform_masses=(k % 2 == 0))
            u = OperatorKernel(a).modulus()
            m, n = a.shape
            rows = tuple(sorted(rng.choice(m, size=rng.integers(1, m + 1), replace=False)))
            cols = tuple(sorted(rng.choice(n, size=rng.integers(1, n + 1), replace=False)))
            f = np.zeros(n)
            f[list(cols)] = 1.0
            g = np.zeros(m)
            g[list(rows)] = 1.0
            paired = u.pairing(g, u.apply(f))
            assert close(paired, rect_mass_sum(a, Rectangle.of(rows, cols), 1.0), 1e-12)

    def test_apply_shape_validation(self):
        u = kernel_of([[1.0, 2.0]])
        with pytest.raises(ValueError):
            u.apply([1.0])
        with pytest.raises(ValueError):
            u.pairing([1.0, 2.0], [1.0])

    def test_modulus(self):
        u = kernel_of([[-3.0, 1.0]])
        assert np.array_equal(u.modulus().kernel.entries, [[3.0, 1.0]])


class TestTripleNormDuality:
    def test_transpose_swaps_parameter(self):
        rng = np.random.default_rng(401)
        for k in range(25):
            a = random_matrix(rng, uniform_masses=(k % 2 == 0))
            u = OperatorKernel(a)
            u_t = OperatorKernel(a.transpose())
            for t in (0.3, 1.0, 4.5):
                assert close(op_triple_norm(u, t), t * op_triple_norm(u_t, 1.0 / t), 1e-12)


class TestBracketUP:
    def test_worked_ones(self):
        u = kernel_of(np.ones((2, 2)))
        assert close(bracket_u_p(u, InterpSpec(0.5, 1.0)), 2.0, 1e-12)

    def test_zero_kernel(self):
        assert bracket_u_p(kernel_of(np.zeros((2, 3))), InterpSpec(0.25, 1.0)) == 0.0

    def test_matches_scan(self):
        rng = np.random.default_rng(402)
        for k in range(40):
            a = random_matrix(rng, uniform_masses=(k % 2 == 0))
            u = OperatorKernel(a)
            spec = InterpSpec((0.2, 0.5, 0.8)[k % 3], 1.0)
            scan = theta_inf_norm(u, spec)
            rect = bracket_u_p(u, spec)
            assert close(scan, rect, 1e-9)

    def test_scan_guard(self, monkeypatch):
        monkeypatch.setattr(interp_mod, "GUARD_LIMIT", 8)
        u = kernel_of(np.arange(1.0, 10.0).reshape(3, 3), mu=(1.0, 2.0, 3.0))
        with pytest.raises(GuardError):
            theta_inf_norm(u, InterpSpec(0.5, 1.0))
        assert theta_inf_norm(u, InterpSpec(0.5, 1.0), override=True) > 0.0


class TestWeakType:
    def test_worked_diagonal(self):
        u = kernel_of([[2.0, 0.0], [0.0, 2.0]])
        assert close(weak_type_check(u, 2.0), 2.0, 1e-12)

    def test_sandwich_with_rectangle_form(self):
        rng = np.random.default_rng(403)
        for k in range(30):
            a = random_matrix(rng, uniform_masses=(k % 2 == 0))
            u = OperatorKernel(a)
            p = (1.5, 2.0, 4.0)[k % 3]
            w = weak_type_check(u, p)
            rect = bracket_u_p(u, InterpSpec(1.0 / p, 1.0))
            assert leq(w, rect)
            assert leq(rect, (p / (p - 1.0)) * w)

    def test_exponent_validation(self):
        u = kernel_of([[1.0]])
        with pytest.raises(ValueError):
            weak_type_check(u, 1.0)
        with pytest.raises(ValueError):
            weak_type_check(u, math.inf)


class TestInterpSpec:
    @pytest.mark.parametrize("theta,q", [(0.0, 1.0), (1.0, 1.0), (-0.2, 1.0), (0.5, 0.5)])
    def test_rejects(self, theta, q):
        with pytest.raises(ValueError):
            InterpSpec(theta, q)

    def test_p_is_reciprocal(self):
        assert InterpSpec(0.25, math.inf).p == 4.0


class TestThetaQNorm:
    def test_single_cell_sup_norm(self):
        a = unit_matrix([[1.0]])
        iv = theta_q_norm(a, InterpSpec(0.5, math.inf), oracle="lp")
        assert iv.lower <= 1.0 <= iv.upper
        assert iv.width <= 1e-6 * iv.midpoint + 1e-12

    def test_single_cell_finite_q(self):
        # K_t = min(1, t), theta = 1/2, q = 2: the squared integral is
        # int_0^1 t dt/t + int_1^inf t^-2 dt = 1 + 1 = 2.
        a = unit_matrix([[1.0]])
        iv = theta_q_norm(a, InterpSpec(0.5, 2.0), oracle="lp", ratio=1.02, decades=6.0)
        assert leq(iv.lower, math.sqrt(2.0))
        assert leq(math.sqrt(2.0), iv.upper)
        assert iv.width <= 0.01 * iv.midpoint

    def test_lp_grid_enclosure_tightens(self):
        rng = np.random.default_rng(7)
        a = unit_matrix(rng.uniform(-1.0, 1.0, size=(3, 3)))
        iv = theta_q_norm(a, InterpSpec(0.5, 2.0), oracle="lp", ratio=1.05)
        assert iv.lower > 0.0
        assert iv.width <= 0.02 * iv.midpoint

    def test_bracket_interval_contains_lp_interval(self):
        rng = np.random.default_rng(7)
        a = unit_matrix(rng.uniform(-1.0, 1.0, size=(3, 3)))
        spec = InterpSpec(0.5, 2.0)
        iv_lp = theta_q_norm(a, spec, oracle="lp", ratio=1.1)
        iv_br = theta_q_norm(a, spec, oracle="bracket", ratio=1.1)
        assert leq(iv_br.lower, iv_lp.lower)
        assert leq(iv_lp.upper, iv_br.upper)

    def test_general_couple_bracket(self):
        rng = np.random.default_rng(404)
        a = random_matrix(rng, max_rows=3, max_cols=3)
        iv = theta_q_norm(a, InterpSpec(0.4, 3.0), p=4.0, q=2.0, ratio=1.2, decades=3.0)
        assert 0.0 < iv.lower <= iv.upper

    def test_sup_oracle_adaptive(self):
        rng = np.random.default_rng(405)
        a = random_matrix(rng, max_rows=2, max_cols=2)
        iv = theta_q_norm(a, InterpSpec(0.3, math.inf), oracle="lp", tol_rel=1e-4)
        assert iv.width <= 1e-4 * iv.lower + 1e-12

    def test_zero_matrix(self):
        a = unit_matrix(np.zeros((2, 2)))
        assert theta_q_norm(a, InterpSpec(0.5, 1.0)) == (0.0, 0.0)

    def test_oracle_validation(self):
        a = unit_matrix([[1.0]])
        with pytest.raises(ValueError):
            theta_q_norm(a, InterpSpec(0.5, 1.0), oracle="nope")
        with pytest.raises(ValueError):
            theta_q_norm(a, InterpSpec(0.5, 1.0), p=2.0, q=1.0, oracle="lp")

    def test_interval_helpers(self):
        iv = theta_q_norm(unit_matrix([[2.0]]), InterpSpec(0.5, math.inf), oracle="lp")
        assert iv.midpoint == 0.5 * (iv.lower + iv.upper)
        assert iv.width == iv.upper - iv.lower

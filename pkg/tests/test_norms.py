import math

import numpy as np
import pytest

from ktcouple import (
    CoupleSpec,
    MeasureSpace,
    lorentz_pq_norm,
    lq_norm,
    mixed_inf_one,
    mixed_inf_one_T,
    mixed_weak_norm,
    mixed_weak_norm_T,
    row_q_norms,
    weak_lp_norm,
)

from helpers import close, naive_lorentz, naive_weak, unit_matrix


class TestCoupleSpec:
    def test_derived_quantities(self):
        spec = CoupleSpec(2.0, 1.0, 1.0)
        assert spec.p_star == 2.0
        assert spec.alpha == 0.5
        assert spec.c_pq == pytest.approx(0.5)

        inf_spec = CoupleSpec(math.inf, 2.0, 3.0)
        assert inf_spec.p_star == 1.0
        assert inf_spec.alpha == 0.5
        assert inf_spec.c_pq == 1.0

        mid = CoupleSpec(4.0, 2.0, 1.0)
        assert mid.alpha == 0.25
        assert mid.c_pq == pytest.approx(math.sqrt(0.5))

    def test_validation(self):
        for p, q, t in (
            (1.0, 1.0, 1.0),
            (0.5, 0.2, 1.0),
            (2.0, 2.0, 1.0),
            (2.0, 3.0, 1.0),
            (2.0, math.inf, 1.0),
            (2.0, 1.0, 0.0),
            (2.0, 1.0, -1.0),
            (2.0, 1.0, math.inf),
        ):
            with pytest.raises(ValueError):
                CoupleSpec(p, q, t)

    def test_with_t(self):
        spec = CoupleSpec(2.0, 1.0, 1.0).with_t(4.0)
        assert spec.t == 4.0
        assert spec.p == 2.0


class TestLqNorm:
    def test_values(self):
        space = MeasureSpace.uniform(4)
        f = [2.0, 0.0, 0.0, 2.0]
        assert lq_norm(f, space, 1.0) == 4.0
        assert lq_norm(f, space, 2.0) == pytest.approx(2.0 * math.sqrt(2.0))
        assert lq_norm(f, space, math.inf) == 2.0

    def test_masses_enter(self):
        space = MeasureSpace(np.array([3.0, 5.0]))
        assert lq_norm([1.0, -1.0], space, 1.0) == 8.0

    def test_validation(self):
        with pytest.raises(ValueError):
            lq_norm([1.0], MeasureSpace.uniform(1), 0.5)
        with pytest.raises(ValueError):
            lq_norm([1.0, 2.0], MeasureSpace.uniform(1), 1.0)


class TestWeakNorm:
    def test_worked_value(self):
        assert weak_lp_norm([3.0, 1.0], MeasureSpace.uniform(2), 2.0) == 3.0

    def test_matches_distribution_form(self):
        rng = np.random.default_rng(10)
        for k in range(200):
            n = int(rng.integers(1, 8))
            masses = rng.uniform(0.1, 10.0, n)
            f = rng.integers(-3, 4, n).astype(float)
            p = (1.0, 2.0, 2.7, math.inf)[k % 4]
            lib = weak_lp_norm(f, MeasureSpace(masses), p)
            ref = naive_weak(f, masses, p)
            assert close(lib, ref, 1e-12), (f.tolist(), masses.tolist(), p)

    def test_dominated_by_lq(self):
        rng = np.random.default_rng(11)
        for _ in range(50):
            n = int(rng.integers(1, 8))
            space = MeasureSpace(rng.uniform(0.1, 10.0, n))
            f = rng.uniform(-1, 1, n)
            assert weak_lp_norm(f, space, 2.0) <= lq_norm(f, space, 2.0) + 1e-12


class TestLorentzNorm:
    def test_worked_values(self):
        two = MeasureSpace.uniform(2)
        assert lorentz_pq_norm([1.0, 1.0], two, 2.0, 1.0) == pytest.approx(2.0 * math.sqrt(2.0))
        assert lorentz_pq_norm([2.0, 1.0], two, 1.0, 1.0) == 3.0

    def test_diagonal_reduces_to_lq(self):
        rng = np.random.default_rng(12)
        for _ in range(50):
            n = int(rng.integers(1, 8))
            space = MeasureSpace(rng.uniform(0.1, 10.0, n))
            f = rng.uniform(-2, 2, n)
            p = float(rng.uniform(1.0, 4.0))
            assert close(lorentz_pq_norm(f, space, p, p), lq_norm(f, space, p), 1e-12)

    def test_matches_ungrouped_form(self):
        rng = np.random.default_rng(13)
        for k in range(100):
            n = int(rng.integers(1, 8))
            masses = rng.uniform(0.1, 10.0, n)
            f = rng.integers(0, 4, n).astype(float)
            p, q = [(2.0, 1.0), (3.0, 2.0), (1.5, 1.5), (1.0, 1.0)][k % 4]
            lib = lorentz_pq_norm(f, MeasureSpace(masses), p, q)
            ref = naive_lorentz(f, masses, p, q)
            assert close(lib, ref, 1e-12)

    def test_validation(self):
        with pytest.raises(ValueError):
            lorentz_pq_norm([1.0], MeasureSpace.uniform(1), math.inf, 1.0)
        with pytest.raises(ValueError):
            lorentz_pq_norm([1.0], MeasureSpace.uniform(1), 2.0, math.inf)


class TestMixedNorms:
    def test_inf_one(self):
        a = unit_matrix([[1.0, 1.0], [1.0, 0.0]])
        assert mixed_inf_one(a) == 2.0
        assert mixed_inf_one_T(a) == 2.0

    def test_inf_one_weights(self):
        a = unit_matrix([[1.0, -2.0], [0.0, 1.0]])
        assert mixed_inf_one(a) == 3.0
        assert mixed_inf_one_T(a) == 3.0

    def test_mixed_weak_worked(self):
        a = unit_matrix([[1.0, 1.0], [1.0, 0.0]])
        assert mixed_weak_norm(a, 2.0, 1.0) == 2.0

    def test_mixed_weak_p_inf_is_sup_of_rows(self):
        a = unit_matrix([[1.0, 1.0], [1.0, 0.0]])
        assert mixed_weak_norm(a, math.inf, 1.0) == mixed_inf_one(a)
        assert mixed_weak_norm_T(a, math.inf, 1.0) == mixed_inf_one_T(a)

    def test_transpose_symmetry(self):
        rng = np.random.default_rng(14)
        for _ in range(30):
            m, n = rng.integers(1, 5, 2)
            a = unit_matrix(rng.uniform(-1, 1, (m, n)))
            assert mixed_weak_norm_T(a, 3.0, 1.5) == mixed_weak_norm(a.transpose(), 3.0, 1.5)

    def test_homogeneity(self):
        rng = np.random.default_rng(15)
        a = unit_matrix(rng.uniform(-1, 1, (3, 3)))
        base = mixed_weak_norm(a, 2.0, 1.0)
        scaled = mixed_weak_norm(a.with_entries(-2.5 * a.entries), 2.0, 1.0)
        assert close(scaled, 2.5 * base, 1e-12)

    def test_row_q_norms_validation(self):
        a = unit_matrix([[1.0]])
        with pytest.raises(ValueError):
            row_q_norms(a, math.inf)

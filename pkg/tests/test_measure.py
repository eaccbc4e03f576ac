import numpy as np
import pytest

from ktcouple import MeasureSpace, Rectangle, WeightedMatrix, rearrange, rect_mass_sum

from helpers import unit_matrix


class TestMeasureSpace:
    def test_validation(self):
        with pytest.raises(ValueError):
            MeasureSpace(np.array([1.0, 0.0]))
        with pytest.raises(ValueError):
            MeasureSpace(np.array([1.0, -2.0]))
        with pytest.raises(ValueError):
            MeasureSpace(np.array([]))
        with pytest.raises(ValueError):
            MeasureSpace(np.array([1.0, np.inf]))

    def test_totals(self):
        space = MeasureSpace(np.array([1.0, 2.0, 4.0]))
        assert space.size == 3
        assert space.total == 7.0
        assert not space.is_uniform
        assert MeasureSpace.uniform(5).is_uniform
        assert space.subset_mass([0, 2]) == 5.0
        assert space.subset_mass([]) == 0.0
        with pytest.raises(ValueError):
            space.subset_mass([3])

    def test_masses_are_readonly(self):
        space = MeasureSpace.uniform(2)
        with pytest.raises(ValueError):
            space.masses[0] = 5.0


class TestWeightedMatrix:
    def test_shape_validation(self):
        with pytest.raises(ValueError):
            WeightedMatrix(np.ones((2, 3)), MeasureSpace.uniform(3), MeasureSpace.uniform(3))
        with pytest.raises(ValueError):
            WeightedMatrix(np.array([[np.nan]]), MeasureSpace.uniform(1), MeasureSpace.uniform(1))

    def test_transpose_involution(self):
        rng = np.random.default_rng(0)
        a = WeightedMatrix(
            rng.normal(size=(2, 3)),
            MeasureSpace(np.array([1.0, 2.0])),
            MeasureSpace(np.array([3.0, 4.0, 5.0])),
        )
        back = a.transpose().transpose()
        assert np.array_equal(back.entries, a.entries)
        assert np.array_equal(a.transpose().row_space.masses, a.col_space.masses)

    def test_restrict(self):
        a = unit_matrix([[1.0, 2.0], [3.0, 4.0]])
        r = a.restrict({(0, 1), (1, 0)})
        assert np.array_equal(r.entries, np.array([[0.0, 2.0], [3.0, 0.0]]))


class TestRectangle:
    def test_canonicalization(self):
        r = Rectangle.of([2, 0, 2], [1])
        assert r.rows == (0, 2)
        assert r.cols == (1,)
        assert not r.is_empty
        assert r.cells() == {(0, 1), (2, 1)}

    def test_empty(self):
        assert Rectangle((), (0,)).is_empty
        assert Rectangle((), ()).cells() == frozenset()

    def test_validation(self):
        with pytest.raises(ValueError):
            Rectangle((1, 0), (0,))
        with pytest.raises(ValueError):
            Rectangle((0, 0), (0,))
        with pytest.raises(ValueError):
            Rectangle((-1,), (0,))


class TestRearrange:
    def test_two_values(self):
        r = rearrange([3.0, 1.0], MeasureSpace.uniform(2))
        assert r.steps == ((3.0, 1.0), (1.0, 2.0))

    def test_zero_class_is_kept(self):
        r = rearrange([0.0, 0.0], MeasureSpace(np.array([2.0, 5.0])))
        assert r.steps == ((0.0, 7.0),)
        assert r.total_mass == 7.0

    def test_merges_equal_values(self):
        r = rearrange([1.0, 2.0, 1.0], MeasureSpace(np.array([1.0, 1.0, 2.0])))
        assert r.steps == ((2.0, 1.0), (1.0, 4.0))

    def test_uses_magnitudes(self):
        r = rearrange([-2.0, 1.0], MeasureSpace.uniform(2))
        assert r.steps == ((2.0, 1.0), (1.0, 2.0))

    def test_total_mass_always_covered(self):
        rng = np.random.default_rng(1)
        for _ in range(50):
            n = int(rng.integers(1, 8))
            space = MeasureSpace(rng.uniform(0.1, 10.0, n))
            r = rearrange(rng.integers(-3, 4, n).astype(float), space)
            assert np.isclose(r.total_mass, space.total)
            assert np.all(np.diff(r.values) < 0)

    def test_equimeasurability(self):
        rng = np.random.default_rng(2)
        for _ in range(30):
            n = int(rng.integers(2, 8))
            f = rng.integers(-3, 4, n).astype(float)
            masses = rng.uniform(0.1, 10.0, n)
            perm = rng.permutation(n)
            r1 = rearrange(f, MeasureSpace(masses))
            r2 = rearrange(f[perm], MeasureSpace(masses[perm]))
            assert r1.values.tolist() == r2.values.tolist()
            assert np.allclose(r1.cum_masses, r2.cum_masses)

    def test_mass_above(self):
        r = rearrange([3.0, 1.0, 1.0], MeasureSpace.uniform(3))
        assert r.mass_above(2.0) == 1.0
        assert r.mass_above(0.5) == 3.0
        assert r.mass_above(3.0) == 0.0

    def test_length_mismatch(self):
        with pytest.raises(ValueError):
            rearrange([1.0], MeasureSpace.uniform(2))


class TestRectMassSum:
    def test_worked_values(self):
        a = unit_matrix([[2.0, 0.0], [0.0, 2.0]])
        full = Rectangle((0, 1), (0, 1))
        assert rect_mass_sum(a, full, 1.0) == 4.0
        assert rect_mass_sum(a, Rectangle((0,), (0,)), 1.0) == 2.0
        assert rect_mass_sum(a, full, 2.0) == pytest.approx(np.sqrt(8.0))

    def test_empty_rectangle(self):
        a = unit_matrix([[1.0]])
        assert rect_mass_sum(a, Rectangle((), ()), 1.0) == 0.0

    def test_weights_enter(self):
        a = WeightedMatrix(
            np.array([[1.0, 1.0]]),
            MeasureSpace(np.array([2.0])),
            MeasureSpace(np.array([3.0, 5.0])),
        )
        assert rect_mass_sum(a, Rectangle((0,), (0, 1)), 1.0) == 16.0

    def test_monotone_in_rectangle(self):
        rng = np.random.default_rng(3)
        a = WeightedMatrix(
            rng.uniform(-1, 1, (3, 3)),
            MeasureSpace(rng.uniform(0.1, 2, 3)),
            MeasureSpace(rng.uniform(0.1, 2, 3)),
        )
        small = rect_mass_sum(a, Rectangle((0,), (1,)), 1.5)
        big = rect_mass_sum(a, Rectangle((0, 1), (1, 2)), 1.5)
        assert small <= big + 1e-15

    def test_bad_input(self):
        a = unit_matrix([[1.0]])
        with pytest.raises(ValueError):
            rect_mass_sum(a, Rectangle((1,), (0,)), 1.0)
        with pytest.raises(ValueError):
            rect_mass_sum(a, Rectangle((0,), (0,)), 0.5)

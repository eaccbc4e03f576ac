"""Finite weighted measure spaces, weighted matrices, and rearrangements.

Vectors live on a single space; matrices carry one space per axis. All
norm-level code downstream consumes these types, so validation is strict:
masses are strictly positive and finite, entries are finite, and index
sets are canonical (sorted, unique, in range).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable

import numpy as np

__all__ = [
    "MeasureSpace",
    "WeightedMatrix",
    "Rectangle",
    "Rearrangement",
    "rearrange",
    "rect_mass_sum",
]


def _readonly_array(values, name: str, ndim: int) -> np.ndarray:
    arr = np.array(values, dtype=float)
    if arr.ndim != ndim:
        raise ValueError(f"{name} must be {ndim}-dimensional, got shape {arr.shape}")
    if arr.size == 0:
        raise ValueError(f"{name} must be nonempty")
    if not np.all(np.isfinite(arr)):
        raise ValueError(f"{name} must contain only finite values")
    arr.flags.writeable = False
    return arr


@dataclass(frozen=True, eq=False)
class MeasureSpace:
    """A finite collection of atoms with strictly positive masses."""

    masses: np.ndarray

    def __post_init__(self):
        arr = _readonly_array(self.masses, "masses", 1)
        if np.any(arr <= 0.0):
            raise ValueError("masses must be strictly positive")
        object.__setattr__(self, "masses", arr)

    @classmethod
    def uniform(cls, size: int, mass: float = 1.0) -> "MeasureSpace":
        return cls(np.full(int(size), float(mass)))

    @property
    def size(self) -> int:
        return int(self.masses.shape[0])

    @property
    def total(self) -> float:
        return float(self.masses.sum())

    @property
    def is_uniform(self) -> bool:
        return bool(np.all(self.masses == self.masses[0]))

    def subset_mass(self, indices: Iterable[int]) -> float:
        idx = np.asarray(list(indices), dtype=int)
        if idx.size == 0:
            return 0.0
        if idx.min() < 0 or idx.max() >= self.size:
            raise ValueError("subset indices out of range")
        return float(self.masses[idx].sum())


@dataclass(frozen=True, eq=False)
class WeightedMatrix:
    """A real matrix together with the measure space of each axis."""

    entries: np.ndarray
    row_space: MeasureSpace
    col_space: MeasureSpace

    def __post_init__(self):
        arr = _readonly_array(self.entries, "entries", 2)
        if arr.shape != (self.row_space.size, self.col_space.size):
            raise ValueError(
                f"entries shape {arr.shape} does not match spaces "
                f"({self.row_space.size}, {self.col_space.size})"
            )
        object.__setattr__(self, "entries", arr)

    @property
    def shape(self) -> tuple[int, int]:
        return (self.row_space.size, self.col_space.size)

    def abs_entries(self) -> np.ndarray:
        return np.abs(self.entries)

    def transpose(self) -> "WeightedMatrix":
        return WeightedMatrix(self.entries.T.copy(), self.col_space, self.row_space)

    def with_entries(self, entries) -> "WeightedMatrix":
        return WeightedMatrix(entries, self.row_space, self.col_space)

    def restrict(self, cells: Iterable[tuple[int, int]]) -> "WeightedMatrix":
        """Matrix equal to this one on ``cells`` and zero elsewhere."""
        mask = np.zeros(self.shape)
        for i, j in cells:
            mask[i, j] = 1.0
        return self.with_entries(self.entries * mask)


@dataclass(frozen=True)
class Rectangle:
    """An index rectangle E x F, canonicalized as sorted tuples.

    Either side may be empty; the rectangle is then empty as a cell set.
    """

    rows: tuple[int, ...]
    cols: tuple[int, ...]

    def __post_init__(self):
        for name, side in (("rows", self.rows), ("cols", self.cols)):
            tup = tuple(int(i) for i in side)
            if any(i < 0 for i in tup):
                raise ValueError(f"{name} must be nonnegative")
            if any(b <= a for a, b in zip(tup, tup[1:])):
                raise ValueError(f"{name} must be strictly increasing")
            object.__setattr__(self, name, tup)

    @classmethod
    def of(cls, rows: Iterable[int], cols: Iterable[int]) -> "Rectangle":
        return cls(tuple(sorted(set(int(i) for i in rows))),
                   tuple(sorted(set(int(j) for j in cols))))

    @property
    def is_empty(self) -> bool:
        return not self.rows or not self.cols

    def cells(self) -> frozenset[tuple[int, int]]:
        return frozenset((i, j) for i in self.rows for j in self.cols)


@dataclass(frozen=True, eq=False)
class Rearrangement:
    """Decreasing rearrangement as (value, cumulative mass) breakpoints.

    Values are strictly decreasing and nonnegative; cumulative masses are
    strictly increasing and end at the total mass of the space. A zero
    value class is kept, so the last breakpoint always covers the whole
    space.
    """

    values: np.ndarray
    cum_masses: np.ndarray

    def __post_init__(self):
        vals = _readonly_array(self.values, "values", 1)
        cums = _readonly_array(self.cum_masses, "cum_masses", 1)
        if vals.shape != cums.shape:
            raise ValueError("values and cum_masses must align")
        if np.any(vals < 0.0):
            raise ValueError("rearranged values must be nonnegative")
        if np.any(np.diff(vals) >= 0.0):
            raise ValueError("values must be strictly decreasing")
        if cums[0] <= 0.0 or np.any(np.diff(cums) <= 0.0):
            raise ValueError("cumulative masses must be strictly increasing and positive")
        object.__setattr__(self, "values", vals)
        object.__setattr__(self, "cum_masses", cums)

    @property
    def total_mass(self) -> float:
        return float(self.cum_masses[-1])

    @property
    def steps(self) -> tuple[tuple[float, float], ...]:
        return tuple((float(v), float(t)) for v, t in zip(self.values, self.cum_masses))

    def mass_above(self, level: float) -> float:
        """Mass of the set where the step function strictly exceeds ``level``."""
        idx = np.nonzero(self.values > level)[0]
        if idx.size == 0:
            return 0.0
        return float(self.cum_masses[idx[-1]])


def rearrange(f, space: MeasureSpace) -> Rearrangement:
    """Decreasing rearrangement of ``|f|`` against the masses of ``space``."""
    v = np.abs(np.asarray(f, dtype=float))
    if v.ndim != 1 or v.shape[0] != space.size:
        raise ValueError("vector length must match the space size")
    order = np.argsort(-v, kind="stable")
    sv = v[order]
    sm = space.masses[order]
    ends = np.append(np.nonzero(np.diff(sv))[0], sv.size - 1)
    return Rearrangement(sv[ends], np.cumsum(sm)[ends])


def rect_mass_sum(a: WeightedMatrix, rect: Rectangle, q: float) -> float:
    """Mass-weighted l^q sum of ``|a|`` over a rectangle.

    Computes ``(sum_{i in E, j in F} |a(i,j)|^q mu_i nu_j)^(1/q)``; the
    empty rectangle gives 0.
    """
    q = float(q)
    if not (q >= 1.0 and math.isfinite(q)):
        raise ValueError("q must be finite and >= 1")
    if rect.is_empty:
        return 0.0
    m, n = a.shape
    if rect.rows[-1] >= m or rect.cols[-1] >= n:
        raise ValueError("rectangle indices out of range")
    sub = np.abs(a.entries[np.ix_(rect.rows, rect.cols)]) ** q
    mu = a.row_space.masses[list(rect.rows)]
    nu = a.col_space.masses[list(rect.cols)]
    return float((sub * np.outer(mu, nu)).sum() ** (1.0 / q))

"""
Elements of the Hilbert spaces hosting predictors and responses.

A Hilbert point is a direct sum of grid functions (one per L² component) and a
real vector. All numerical work is done on the flat coordinate vector obtained
by concatenating the functional values (component by component) and the scalar
part; the direct-sum inner product is then a weighted dot product whose weights
are the trapezoid quadrature weights on functional coordinates and 1 on scalar
coordinates.
"""

import logging
from dataclasses import dataclass, field
from functools import cached_property

import numpy as np
from numpy.typing import NDArray

from flm_maxtest.constants import GRID_WEIGHT_RTOL
from flm_maxtest.errors import ConformabilityError, DomainError

logger = logging.getLogger(__name__)


def trapezoid_weights(points: NDArray[np.float64]) -> NDArray[np.float64]:
    """
    Trapezoid quadrature weights: half of each adjacent interval, endpoints
    get the one-sided half.
    """
    gaps = np.diff(points)
    weights = np.zeros_like(points)
    weights[:-1] += gaps / 2
    weights[1:] += gaps / 2
    return weights


@dataclass(frozen=True, eq=False)
class Grid:
    """
    Discretization of an interval.

    Attributes:
        points: strictly increasing abscissae, at least 2.
        weights: trapezoid quadrature weights derived from `points`.
    """

    points: NDArray[np.float64]
    weights: NDArray[np.float64] = field(init=False)

    def __post_init__(self):
        points = np.asarray(self.points, dtype=np.float64)
        if points.ndim != 1 or len(points) < 2:
            raise DomainError("a grid needs at least 2 points")
        if not np.all(np.isfinite(points)):
            raise DomainError("grid points must be finite")
        if not np.all(np.diff(points) > 0):
            raise DomainError("grid points must be strictly increasing")
        points.setflags(write=False)
        weights = trapezoid_weights(points)
        weights.setflags(write=False)
        object.__setattr__(self, "points", points)
        object.__setattr__(self, "weights", weights)
        length = points[-1] - points[0]
        if not abs(weights.sum() - length) <= GRID_WEIGHT_RTOL * length:
            raise DomainError(
                f"quadrature weights sum to {weights.sum()!r}, expected the grid length {length!r}"
            )

    @classmethod
    def uniform(cls, start: float, stop: float, num: int) -> "Grid":
        """Equispaced grid of `num` points on [start, stop]."""
        return cls(np.linspace(start, stop, num))

    @property
    def size(self) -> int:
        return len(self.points)

    @property
    def start(self) -> float:
        return float(self.points[0])

    @property
    def stop(self) -> float:
        return float(self.points[-1])

    def __eq__(self, other) -> bool:
        if not isinstance(other, Grid):
            return NotImplemented
        return self is other or np.array_equal(self.points, other.points)

    def __hash__(self) -> int:
        return hash(self.points.tobytes())

    def __repr__(self) -> str:
        return f"Grid(size={self.size}, start={self.start}, stop={self.stop})"


@dataclass(frozen=True)
class Layout:
    """
    Shape of a Hilbert point: the grids of its L² components and the
    dimension of its Euclidean part.
    """

    grids: tuple[Grid, ...] = ()
    scalar_dim: int = 0

    def __post_init__(self):
        object.__setattr__(self, "grids", tuple(self.grids))
        if self.scalar_dim < 0:
            raise DomainError("scalar dimension must be non-negative")
        if not self.grids and self.scalar_dim == 0:
            raise DomainError(
                "a Hilbert point needs at least one functional or scalar component"
            )

    @cached_property
    def dim(self) -> int:
        """Length of the flat coordinate vector."""
        return sum(g.size for g in self.grids) + self.scalar_dim

    @cached_property
    def weights(self) -> NDArray[np.float64]:
        """Inner-product weight of every flat coordinate."""
        weights = np.concatenate(
            [g.weights for g in self.grids] + [np.ones(self.scalar_dim)]
        )
        weights.setflags(write=False)
        return weights

    @cached_property
    def offsets(self) -> tuple[int, ...]:
        """Start offset of every functional component, then of the scalar part."""
        sizes = [g.size for g in self.grids]
        return tuple(int(o) for o in np.concatenate([[0], np.cumsum(sizes)]))

    @property
    def is_functional(self) -> bool:
        return len(self.grids) > 0

    def split(self, coordinates: NDArray[np.float64]):
        """Split a flat coordinate vector into (functional values, scalar part)."""
        offsets = self.offsets
        functional = [
            coordinates[..., offsets[k] : offsets[k + 1]]
            for k in range(len(self.grids))
        ]
        return functional, coordinates[..., offsets[-1] :]

    def check_conformable(self, other: "Layout") -> None:
        """
        Raises:
            ConformabilityError: when the grids or scalar dimensions differ.
        """
        if self != other:
            raise ConformabilityError(
                f"non-conformable layouts: {self.describe()} vs {other.describe()}"
            )

    def describe(self) -> str:
        grids = ", ".join(repr(g) for g in self.grids)
        return f"Layout(grids=[{grids}], scalar_dim={self.scalar_dim})"


@dataclass(frozen=True, eq=False)
class HilbertPoint:
    """
    Element of L²(T_1) ⊕ ... ⊕ L²(T_d) ⊕ R^q stored as flat coordinates.
    """

    layout: Layout
    coordinates: NDArray[np.float64]

    def __post_init__(self):
        coordinates = np.array(self.coordinates, dtype=np.float64)
        if coordinates.shape != (self.layout.dim,):
            raise DomainError(
                f"expected {self.layout.dim} coordinates, got shape {coordinates.shape}"
            )
        coordinates.setflags(write=False)
        object.__setattr__(self, "coordinates", coordinates)

    @classmethod
    def from_parts(
        cls,
        functional_parts: list[tuple[Grid, NDArray[np.float64]]] = (),
        scalar_part: NDArray[np.float64] | list[float] = (),
    ) -> "HilbertPoint":
        """
        Build a point from (grid, values) pairs and a scalar vector.
        """
        scalar_part = np.asarray(scalar_part, dtype=np.float64).reshape(-1)
        grids = []
        chunks = []
        for grid, values in functional_parts:
            values = np.asarray(values, dtype=np.float64)
            if values.shape != (grid.size,):
                raise DomainError(
                    f"values of length {values.shape} do not match {grid!r}"
                )
            grids.append(grid)
            chunks.append(values)
        layout = Layout(grids=tuple(grids), scalar_dim=len(scalar_part))
        return cls(layout=layout, coordinates=np.concatenate(chunks + [scalar_part]))

    @classmethod
    def function(cls, grid: Grid, values: NDArray[np.float64]) -> "HilbertPoint":
        """A single grid function."""
        return cls.from_parts(functional_parts=[(grid, values)])

    @classmethod
    def vector(cls, values: NDArray[np.float64] | list[float]) -> "HilbertPoint":
        """A single Euclidean vector."""
        return cls.from_parts(scalar_part=values)

    @classmethod
    def zeros(cls, layout: Layout) -> "HilbertPoint":
        return cls(layout=layout, coordinates=np.zeros(layout.dim))

    @property
    def functional_parts(self) -> list[tuple[Grid, NDArray[np.float64]]]:
        functional, _ = self.layout.split(self.coordinates)
        return list(zip(self.layout.grids, functional))

    @property
    def scalar_part(self) -> NDArray[np.float64]:
        _, scalar = self.layout.split(self.coordinates)
        return scalar

    def _combine(self, other: "HilbertPoint", op) -> "HilbertPoint":
        self.layout.check_conformable(other.layout)
        return HilbertPoint(self.layout, op(self.coordinates, other.coordinates))

    def __add__(self, other: "HilbertPoint") -> "HilbertPoint":
        return self._combine(other, np.add)

    def __sub__(self, other: "HilbertPoint") -> "HilbertPoint":
        return self._combine(other, np.subtract)

    def __mul__(self, scalar: float) -> "HilbertPoint":
        return HilbertPoint(self.layout, self.coordinates * float(scalar))

    __rmul__ = __mul__

    def __neg__(self) -> "HilbertPoint":
        return HilbertPoint(self.layout, -self.coordinates)

    def __repr__(self) -> str:
        return f"HilbertPoint({self.layout.describe()})"


def inner_product(a: HilbertPoint, b: HilbertPoint) -> float:
    """
    Direct-sum inner product: trapezoid quadrature on every L² component plus
    the Euclidean product of the scalar parts.

    Raises:
        ConformabilityError: when `a` and `b` do not share a layout.
    """
    a.layout.check_conformable(b.layout)
    return float(np.sum(a.layout.weights * a.coordinates * b.coordinates))


def norm(a: HilbertPoint) -> float:
    """Norm induced by `inner_product`."""
    return float(np.sqrt(max(inner_product(a, a), 0.0)))


@dataclass(frozen=True, eq=False)
class Sample:
    """
    n conformable Hilbert points stored as an n x dim matrix of flat
    coordinates.

    Attributes:
        layout: shared layout of the elements.
        values: n x layout.dim coordinates, one row per element.
        centered: whether the pointwise mean has been subtracted.
        mean: the subtracted mean, present iff `centered`.
    """

    layout: Layout
    values: NDArray[np.float64]
    centered: bool = False
    mean: HilbertPoint | None = None

    def __post_init__(self):
        values = np.array(self.values, dtype=np.float64)
        if values.ndim != 2 or values.shape[1] != self.layout.dim:
            raise DomainError(
                f"expected an n x {self.layout.dim} matrix, got shape {values.shape}"
            )
        if self.centered != (self.mean is not None):
            raise DomainError("a sample carries a mean iff it is centered")
        values.setflags(write=False)
        object.__setattr__(self, "values", values)

    @classmethod
    def from_elements(cls, elements: list[HilbertPoint]) -> "Sample":
        """
        Raises:
            DomainError: for an empty list.
            ConformabilityError: when elements do not share a layout.
        """
        if not elements:
            raise DomainError("cannot build a sample from no elements")
        layout = elements[0].layout
        for element in elements[1:]:
            layout.check_conformable(element.layout)
        return cls(layout=layout, values=np.vstack([e.coordinates for e in elements]))

    @classmethod
    def concat(cls, *samples: "Sample") -> "Sample":
        """
        Direct sum of samples observed on the same subjects: the functional
        components of all samples come first (in order), then their scalar
        parts concatenated.
        """
        if not samples:
            raise DomainError("nothing to concatenate")
        n = samples[0].n
        if any(s.n != n for s in samples):
            raise DomainError(
                f"samples have different sizes: {[s.n for s in samples]}"
            )
        functional = []
        scalars = []
        grids = []
        for s in samples:
            parts, scalar = s.layout.split(s.values)
            functional.extend(parts)
            grids.extend(s.layout.grids)
            scalars.append(scalar)
        layout = Layout(
            grids=tuple(grids), scalar_dim=sum(s.layout.scalar_dim for s in samples)
        )
        return cls(layout=layout, values=np.hstack(functional + scalars))

    @property
    def n(self) -> int:
        return self.values.shape[0]

    @property
    def elements(self) -> list[HilbertPoint]:
        return [HilbertPoint(self.layout, row) for row in self.values]

    def __len__(self) -> int:
        return self.n

    def take(self, indices: NDArray[np.int_]) -> "Sample":
        """Reorder (or subset) the elements."""
        return Sample(
            layout=self.layout,
            values=self.values[np.asarray(indices)],
            centered=self.centered,
            mean=self.mean,
        )

    def scaled(self, factor: float) -> "Sample":
        mean = None if self.mean is None else self.mean * factor
        return Sample(self.layout, self.values * factor, self.centered, mean)

    def weighted(self) -> NDArray[np.float64]:
        """Coordinates multiplied by the inner-product weights."""
        return self.values * self.layout.weights


def center(sample: Sample) -> Sample:
    """
    Subtract the pointwise mean from every element. Idempotent: a centered
    sample is returned unchanged.

    Raises:
        DomainError: for an empty sample.
    """
    if sample.n == 0:
        raise DomainError("cannot center an empty sample")
    if sample.centered:
        return sample
    mean = sample.values.mean(axis=0)
    logger.debug(f"centering a sample of size {sample.n} and dimension {sample.layout.dim}")
    return Sample(
        layout=sample.layout,
        values=sample.values - mean,
        centered=True,
        mean=HilbertPoint(sample.layout, mean),
    )

"""The known, stationary environment model.

Grid geometry with aliased cell features, the nine king-move actions,
deterministic per-action transition kernels, the masked (expected) kernel
for unseen controls, deterministic emission likelihoods, and the sensing
dilation operator. Everything here is immutable after construction and
shared read-only by all agents.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum
from functools import lru_cache

import numpy as np

from .beliefs import Cell, cell_at, flat_index


class Action(Enum):
    """The 8 king-graph moves plus STAY; values are (drow, dcol)."""

    NORTH = (-1, 0)
    NORTHEAST = (-1, 1)
    EAST = (0, 1)
    SOUTHEAST = (1, 1)
    SOUTH = (1, 0)
    SOUTHWEST = (1, -1)
    WEST = (0, -1)
    NORTHWEST = (-1, -1)
    STAY = (0, 0)

    @property
    def delta(self) -> tuple[int, int]:
        return self.value

    @classmethod
    def from_delta(cls, drow: int, dcol: int) -> "Action":
        return _ACTION_BY_DELTA[(drow, dcol)]


ACTIONS: tuple[Action, ...] = tuple(Action)
_ACTION_BY_DELTA = {a.value: a for a in Action}


@dataclass(eq=False)
class GridSpec:
    """An H x W grid whose cells carry feature ids from {0, .., n_features-1}."""

    height: int
    width: int
    features: np.ndarray
    n_features: int

    def __post_init__(self):
        self.features = np.asarray(self.features, dtype=np.int64)
        if self.height < 1 or self.width < 1:
            raise ValueError("grid dimensions must be positive")
        if self.n_features < 1:
            raise ValueError("feature alphabet must be non-empty")
        if self.features.shape != (self.height * self.width,):
            raise ValueError("features must be a flat vector of length H*W")
        if self.features.min() < 0 or self.features.max() >= self.n_features:
            raise ValueError("feature ids must lie in [0, n_features)")

    @property
    def n_cells(self) -> int:
        return self.height * self.width

    @property
    def shape(self) -> tuple[int, int]:
        return (self.height, self.width)

    def flat(self, cell: Cell) -> int:
        return flat_index(cell, self.width)

    def cell(self, flat: int) -> Cell:
        return cell_at(flat, self.width)

    def in_bounds(self, cell: Cell) -> bool:
        return 0 <= cell[0] < self.height and 0 <= cell[1] < self.width

    @staticmethod
    def round_robin(height: int, width: int, n_features: int) -> "GridSpec":
        """Assign features cyclically over the flattened index.

        Balanced, but invariant under a sublattice of grid translations, so
        interior trajectories can stay ambiguous forever; prefer shuffled
        for experiments.
        """
        features = np.arange(height * width, dtype=np.int64) % n_features
        return GridSpec(height, width, features, n_features)

    @staticmethod
    def shuffled(
        height: int, width: int, n_features: int, rng: np.random.Generator
    ) -> "GridSpec":
        """Balanced feature assignment with the cells shuffled by ``rng``:
        each feature covers (as near as possible) the same number of cells,
        with no spatial symmetry."""
        features = rng.permutation(np.arange(height * width, dtype=np.int64) % n_features)
        return GridSpec(height, width, features, n_features)


def chebyshev(a: Cell, b: Cell) -> int:
    return max(abs(a[0] - b[0]), abs(a[1] - b[1]))


def within_sensing(a: Cell, b: Cell, sensing_range: int) -> bool:
    """True iff the two cells are within Chebyshev distance ``sensing_range``."""
    return chebyshev(a, b) <= sensing_range


def displace(grid: GridSpec, flat: int, action: Action) -> int:
    """Destination cell of ``action`` from ``flat``; out-of-grid moves clamp
    to the source cell."""
    row, col = grid.cell(flat)
    drow, dcol = action.delta
    target = Cell(row + drow, col + dcol)
    return grid.flat(target) if grid.in_bounds(target) else flat


def build_action_kernel(grid: GridSpec, action: Action) -> np.ndarray:
    """Deterministic transition kernel for one action.

    Column x holds p(x'|x, u): a single 1 at the displaced cell (or at x
    itself when the move would leave the grid). Oriented so the control
    update is the plain product kernel @ belief.
    """
    n = grid.n_cells
    kernel = np.zeros((n, n))
    for source in range(n):
        kernel[displace(grid, source, action), source] = 1.0
    return kernel


def masked_action_kernel(grid: GridSpec) -> np.ndarray:
    """Expected kernel over all nine actions, for peers whose control is hidden."""
    total = np.zeros((grid.n_cells, grid.n_cells))
    for action in ACTIONS:
        total += build_action_kernel(grid, action)
    return total / len(ACTIONS)


def emission_likelihood(grid: GridSpec, z: int) -> np.ndarray:
    """Deterministic p(z|x): 1 on cells carrying feature z, 0 elsewhere."""
    if not 0 <= z < grid.n_features:
        raise ValueError(f"feature id {z} outside alphabet of size {grid.n_features}")
    return (grid.features == z).astype(float)


def masked_observation_likelihood(grid: GridSpec) -> np.ndarray:
    """Uniform likelihood for peers whose observation is hidden: a no-op
    once renormalized."""
    return np.ones(grid.n_cells)


def chebyshev_matrix(grid: GridSpec) -> np.ndarray:
    """All-pairs Chebyshev distances, indexed by flat cell."""
    rows, cols = np.divmod(np.arange(grid.n_cells), grid.width)
    return np.maximum(
        np.abs(rows[:, None] - rows[None, :]), np.abs(cols[:, None] - cols[None, :])
    ).astype(float)


def sensing_operator(grid: GridSpec, sensing_range: int) -> np.ndarray:
    """Binary dilation operator: entry (x, x') is 1 iff d_cheb(x, x') <= range.

    Applied to a belief b it yields v with v(x) = sum of b over the sensing
    neighborhood of x: the probability that an agent distributed as b senses
    a target located at x.
    """
    if sensing_range < 0:
        raise ValueError("sensing range must be non-negative")
    return (chebyshev_matrix(grid) <= sensing_range).astype(float)


# Kernels and sensing operators depend only on geometry, not on features,
# so they are memoized across episodes; cached arrays are never mutated.
@lru_cache(maxsize=32)
def _cached_kernels(height: int, width: int):
    grid = GridSpec.round_robin(height, width, 1)
    kernels = {a: build_action_kernel(grid, a) for a in ACTIONS}
    return kernels, masked_action_kernel(grid)


@lru_cache(maxsize=32)
def _cached_sensing(height: int, width: int, sensing_range: int):
    return sensing_operator(GridSpec.round_robin(height, width, 1), sensing_range)


@dataclass(eq=False)
class WorldModel:
    """Precomputed operator bundle every agent filters with.

    Kernels, emission vectors and the sensing operator are built once per
    grid and shared; they are never mutated.
    """

    grid: GridSpec
    sensing_range: int
    kernels: dict[Action, np.ndarray] = field(init=False)
    masked_kernel: np.ndarray = field(init=False)
    emissions: dict[int, np.ndarray] = field(init=False)
    masked_emission: np.ndarray = field(init=False)
    sensing: np.ndarray = field(init=False)

    def __post_init__(self):
        grid = self.grid
        self.kernels, self.masked_kernel = _cached_kernels(grid.height, grid.width)
        self.emissions = {z: emission_likelihood(grid, z) for z in range(grid.n_features)}
        self.masked_emission = masked_observation_likelihood(grid)
        self.sensing = _cached_sensing(grid.height, grid.width, self.sensing_range)

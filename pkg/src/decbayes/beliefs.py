"""Elementary operations on grid beliefs (probability vectors over cells).

A belief is a flat float64 vector of length H*W: non-negative entries that
sum to one. Cells are addressed either as ``Cell(row, col)`` or as the flat
index ``row * W + col``.
"""

from __future__ import annotations

from typing import NamedTuple

import numpy as np

# Beliefs are valid when their mass sums to one within this tolerance.
SUM_TOL = 1e-9
# Cells whose mass is within this absolute tolerance of the maximum count as
# tied for the MAP estimate. Ties here are structural (products of exact
# rationals), not accumulated noise.
MAP_TIE_TOL = 1e-12


class Cell(NamedTuple):
    row: int
    col: int


class ZeroMassError(ValueError):
    """A belief update assigned zero likelihood to the entire support.

    Signals an inconsistency between the environment and the model an agent
    filters with; runs must abort rather than continue on a broken posterior.
    """


def flat_index(cell: Cell, width: int) -> int:
    """Flatten (row, col) to row * width + col."""
    return cell[0] * width + cell[1]


def cell_at(flat: int, width: int) -> Cell:
    """Inverse of flat_index."""
    row, col = divmod(int(flat), width)
    return Cell(row, col)


def uniform_belief(n_cells: int) -> np.ndarray:
    return np.full(n_cells, 1.0 / n_cells)


def dirac_belief(n_cells: int, flat: int) -> np.ndarray:
    bel = np.zeros(n_cells)
    bel[flat] = 1.0
    return bel


def normalize(raw: np.ndarray) -> np.ndarray:
    """Scale a non-negative vector to unit mass.

    Raises ZeroMassError when the input sums to zero.
    """
    raw = np.asarray(raw, dtype=float)
    if np.any(raw < 0.0):
        raise ValueError("belief mass must be non-negative")
    total = raw.sum()
    if total <= 0.0:
        raise ZeroMassError("cannot normalize a zero-mass vector")
    return raw / total


def entropy_bits(bel: np.ndarray) -> float:
    """Shannon entropy in bits; zero-mass cells contribute nothing."""
    p = bel[bel > 0.0]
    # + 0.0 folds the -0.0 a Dirac would otherwise produce into plain zero
    return float(-(p * np.log2(p)).sum() + 0.0)


def chebyshev_to(truth: Cell, shape: tuple[int, int]) -> np.ndarray:
    """Chebyshev distance from every cell to ``truth``, as a flat vector."""
    height, width = shape
    rows = np.abs(np.arange(height) - truth[0])
    cols = np.abs(np.arange(width) - truth[1])
    return np.maximum(rows[:, None], cols[None, :]).ravel().astype(float)


def w1_to_dirac(bel: np.ndarray, truth: Cell, shape: tuple[int, int]) -> float:
    """1-Wasserstein distance from a belief to a Dirac at ``truth``.

    Under a Dirac target every unit of mass must travel to the target cell,
    so the optimal transport cost collapses to the expected ground distance
    sum_x bel(x) * d_cheb(x, truth), in cells.
    """
    return float(bel @ chebyshev_to(truth, shape))


def map_estimate(bel: np.ndarray, shape: tuple[int, int], rng: np.random.Generator) -> Cell:
    """Maximum-a-posteriori cell, breaking ties uniformly at random.

    Always consumes exactly one uniform double, tie or not, so runs that
    differ only in belief content keep their random streams aligned (common
    random numbers across experiment variants).
    """
    top = bel.max()
    tied = np.flatnonzero(bel >= top - MAP_TIE_TOL)
    flat = tied[int(rng.random() * tied.size)]
    return cell_at(int(flat), shape[1])

"""Stationary heuristic and random control policies.

The heuristic policies are pure functions of a BeliefBank (the agent's own
estimation state) and never see the true world state; the prey policy is
the one exception and reads true positions only, never a bank. This mirrors
the information flow of the decentralized setting.
"""

from __future__ import annotations

from enum import Enum

import numpy as np

from .beliefs import Cell, map_estimate
from .filtering import BeliefBank
from .world import ACTIONS, Action, chebyshev

# Target offsets at most this large (per axis) are treated as "already
# there": an unbiased dead-zone around fractional mean targets.
MEAN_DEAD_ZONE = 0.5


class PolicyKind(Enum):
    CONGREGATION = "congregation"
    PREDATOR = "predator"
    PREY_GLOBAL = "prey_global"
    RANDOM = "random"


def _sign(x) -> int:
    return (x > 0) - (x < 0)


def _step_toward(drow: float, dcol: float) -> Action:
    """Quantize a real-valued offset to a king move, with the dead-zone."""
    step_r = 0 if abs(drow) <= MEAN_DEAD_ZONE else _sign(drow)
    step_c = 0 if abs(dcol) <= MEAN_DEAD_ZONE else _sign(dcol)
    return Action.from_delta(step_r, step_c)


def congregation_action(
    bank: BeliefBank, shape: tuple[int, int], rng: np.random.Generator
) -> Action:
    """Move toward the mean of the most-likely positions of all agents.

    MAP cells (self included) are extracted with random tie-breaking, then
    the agent steps toward their arithmetic mean from its own MAP cell.
    """
    maps = {j: map_estimate(bank.agent_beliefs[j], shape, rng) for j in sorted(bank.agent_beliefs)}
    rows = [cell.row for cell in maps.values()]
    cols = [cell.col for cell in maps.values()]
    target_r = sum(rows) / len(rows)
    target_c = sum(cols) / len(cols)
    own = maps[bank.owner]
    return _step_toward(target_r - own.row, target_c - own.col)


def predator_action(
    bank: BeliefBank,
    prey: int,
    shape: tuple[int, int],
    rng: np.random.Generator,
    separation_radius: int = 1,
) -> Action:
    """Chase the believed prey position while keeping predators apart.

    Attraction: unit step from the own MAP cell toward the prey-belief MAP.
    Repulsion: for every other predator whose MAP cell lies within
    ``separation_radius`` (Chebyshev) of the own MAP cell, a unit step away
    from it. The move is the componentwise sign of the summed field.
    """
    maps = {j: map_estimate(bank.agent_beliefs[j], shape, rng) for j in sorted(bank.agent_beliefs)}
    prey_map = map_estimate(bank.external_beliefs[prey], shape, rng)
    own = maps[bank.owner]

    field_r = _sign(prey_map.row - own.row)
    field_c = _sign(prey_map.col - own.col)
    for j, other in maps.items():
        if j == bank.owner or chebyshev(other, own) > separation_radius:
            continue
        field_r += _sign(own.row - other.row)
        field_c += _sign(own.col - other.col)
    return Action.from_delta(_sign(field_r), _sign(field_c))


def prey_action(state, prey: int) -> Action:
    """Flee the mean of the true predator positions (global information)."""
    positions = state.agent_positions
    mean_r = sum(cell.row for cell in positions) / len(positions)
    mean_c = sum(cell.col for cell in positions) / len(positions)
    own: Cell = state.external_positions[prey - len(positions)]
    return _step_toward(own.row - mean_r, own.col - mean_c)


def random_action(rng: np.random.Generator) -> Action:
    """Uniform draw over the nine actions."""
    return ACTIONS[rng.integers(len(ACTIONS))]

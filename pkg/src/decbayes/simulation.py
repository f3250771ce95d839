"""Ground-truth world stepping and episode orchestration.

The simulator owns the only global view: true positions, collision
ordering, and rewards. Each step it hands every agent a LocalFrame with
exactly the information the decentralization rules allow (own observation,
in-range peers' executed controls and observations, indicator bits for
in-range externals) and nothing else. Agent ids are global: cooperative
agents are 0..n-1, external entities n..n+m-1.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Optional

import numpy as np

from .beliefs import Cell
from .filtering import (
    MASKED,
    BeliefBank,
    BeliefMessage,
    VisibleControls,
    VisibleObservations,
    control_update,
    external_indicator_update,
    observation_update,
    share_round,
)
from .policies import PolicyKind, congregation_action, predator_action, prey_action, random_action
from .world import Action, GridSpec, WorldModel, chebyshev_matrix, within_sensing


@dataclass
class WorldState:
    """True global state: grid, entity positions, step counter."""

    grid: GridSpec
    agent_positions: list[Cell]
    external_positions: list[Cell]
    time: int = 0

    def __post_init__(self):
        everyone = self.agent_positions + self.external_positions
        if any(not self.grid.in_bounds(cell) for cell in everyone):
            raise ValueError("entity position out of bounds")
        if len(set(everyone)) != len(everyone):
            raise ValueError("two entities occupy the same cell")

    @property
    def n_agents(self) -> int:
        return len(self.agent_positions)

    def position(self, entity: int) -> Cell:
        n = self.n_agents
        return self.agent_positions[entity] if entity < n else self.external_positions[entity - n]


@dataclass
class LocalFrame:
    """The masked information packet one agent receives each step."""

    owner: int
    own_observation: int
    visible_controls: VisibleControls
    visible_observations: VisibleObservations
    neighbor_ids: set[int]
    messages: dict[int, BeliefMessage] = field(default_factory=dict)


@dataclass
class StepOutcome:
    executed_controls: dict[int, Action]
    frames: list[LocalFrame]
    reward: int


@dataclass
class MetricsRecord:
    """Per-timestep metrics for one seed: reward plus Wasserstein divergences
    (total over all agent-pair beliefs; prey beliefs separately)."""

    seed: int
    t: int
    step_reward: int
    cumulative_reward: int
    total_w1: float
    prey_w1: Optional[float]


def step_world(
    state: WorldState, intended: dict[int, Action]
) -> tuple[WorldState, dict[int, Action]]:
    """Apply intended moves in ascending entity id order.

    Each entity's clamped target is checked against the occupancy at the
    moment of its move; a blocked or clamped move leaves the entity in place
    with executed control STAY, so executed controls replay exactly.
    """
    grid = state.grid
    positions = {i: cell for i, cell in enumerate(state.agent_positions + state.external_positions)}
    occupied = set(positions.values())
    executed: dict[int, Action] = {}
    for entity in sorted(positions):
        action = intended[entity]
        source = positions[entity]
        drow, dcol = action.delta
        target = Cell(source.row + drow, source.col + dcol)
        if action is Action.STAY or not grid.in_bounds(target) or target in occupied:
            executed[entity] = Action.STAY
            continue
        occupied.remove(source)
        occupied.add(target)
        positions[entity] = target
        executed[entity] = action

    n = state.n_agents
    new_state = WorldState(
        grid,
        [positions[i] for i in range(n)],
        [positions[i] for i in range(n, len(positions))],
        state.time + 1,
    )
    return new_state, executed


def build_local_frame(
    state: WorldState, agent: int, executed: dict[int, Action], sensing_range: int
) -> LocalFrame:
    """Mask the post-move global picture down to what one agent may see.

    Peers within sensing range contribute their executed control and
    observed feature; everything else is MASKED. Externals contribute a
    single indicator bit each and never any position information.
    """
    grid = state.grid
    own_pos = state.agent_positions[agent]
    controls: VisibleControls = {}
    features: dict[int, object] = {}
    neighbor_ids: set[int] = set()
    for j, pos in enumerate(state.agent_positions):
        if within_sensing(own_pos, pos, sensing_range):
            controls[j] = executed[j]
            features[j] = int(grid.features[grid.flat(pos)])
            if j != agent:
                neighbor_ids.add(j)
        else:
            controls[j] = MASKED
            features[j] = MASKED
    n = state.n_agents
    indicators = {
        n + e: within_sensing(own_pos, pos, sensing_range)
        for e, pos in enumerate(state.external_positions)
    }
    for entity in indicators:
        controls[entity] = MASKED
    return LocalFrame(
        owner=agent,
        own_observation=int(grid.features[grid.flat(own_pos)]),
        visible_controls=controls,
        visible_observations=VisibleObservations(features, indicators),
        neighbor_ids=neighbor_ids,
    )


def reward_congregation(state: WorldState, sensing_range: int) -> int:
    """Sum over agents of how many other agents sit within sensing range."""
    total = 0
    for i, a in enumerate(state.agent_positions):
        for j, b in enumerate(state.agent_positions):
            if i != j and within_sensing(a, b, sensing_range):
                total += 1
    return total


def reward_predator_prey(state: WorldState, sensing_range: int) -> int:
    """Number of predators with at least one prey within sensing range."""
    return sum(
        any(within_sensing(p, e, sensing_range) for e in state.external_positions)
        for p in state.agent_positions
    )


@dataclass
class Scenario:
    """Fully-resolved runtime parameters for one episode family.

    ``sensing_range`` governs visibility, communication, and the sensing
    operator; ``reward_range`` governs scoring only. They differ for the
    oracle system, whose sensing spans the map while rewards keep the base
    range. Feature maps are drawn per episode when ``feature_assignment``
    is "shuffled" (balanced, symmetry-free), or fixed cyclically with
    "round_robin".
    """

    height: int
    width: int
    n_features: int
    n_agents: int
    n_external: int
    task: str  # "congregation" | "predator_prey"
    agent_policy: PolicyKind
    sensing_range: int
    reward_range: int
    rounds: int
    horizon: int
    separation_radius: int = 1
    feature_assignment: str = "shuffled"

    def __post_init__(self):
        if self.task not in ("congregation", "predator_prey"):
            raise ValueError(f"unknown task {self.task!r}")
        if self.task == "predator_prey" and self.n_external < 1:
            raise ValueError("predator_prey needs at least one prey")
        if self.agent_policy not in (
            PolicyKind.CONGREGATION,
            PolicyKind.PREDATOR,
            PolicyKind.RANDOM,
        ):
            raise ValueError("cooperative agents cannot use the prey policy")
        if self.feature_assignment not in ("shuffled", "round_robin"):
            raise ValueError(f"unknown feature assignment {self.feature_assignment!r}")
        if self.n_agents + self.n_external > self.height * self.width:
            raise ValueError("more entities than cells")

    def build_grid(self, rng: np.random.Generator) -> GridSpec:
        if self.feature_assignment == "shuffled":
            return GridSpec.shuffled(self.height, self.width, self.n_features, rng)
        return GridSpec.round_robin(self.height, self.width, self.n_features)


class Episode:
    """One deterministic seeded episode.

    Runs the per-step pipeline: act, move, mask, control update,
    observation update (plus indicator fusion per external), belief
    sharing, score. Optional observer hooks receive the episode after each
    step and after each sharing round; they must not mutate anything.
    """

    def __init__(
        self,
        scenario: Scenario,
        seed: int,
        on_step: Optional[Callable] = None,
        on_share_round: Optional[Callable] = None,
    ):
        self.scenario = scenario
        self.seed = seed
        self.on_step = on_step
        self.on_share_round = on_share_round
        self.rng = np.random.default_rng(np.random.SeedSequence(seed))
        self.t = 0

        # Episode randomness, in fixed order: feature map first, then placement.
        grid = scenario.build_grid(self.rng)
        self.grid = grid
        self.model = WorldModel(grid, scenario.sensing_range)
        flats = self.rng.choice(grid.n_cells, size=scenario.n_agents + scenario.n_external, replace=False)
        cells = [grid.cell(f) for f in flats]
        self.state = WorldState(grid, cells[: scenario.n_agents], cells[scenario.n_agents :])

        agent_ids = range(scenario.n_agents)
        self.external_ids = list(range(scenario.n_agents, scenario.n_agents + scenario.n_external))
        self.banks = [
            BeliefBank.uniform(i, agent_ids, self.external_ids, grid.n_cells) for i in agent_ids
        ]
        self._cheb = chebyshev_matrix(grid)

    def _intended_actions(self) -> dict[int, Action]:
        scenario = self.scenario
        shape = self.grid.shape
        intended: dict[int, Action] = {}
        for i in range(scenario.n_agents):
            if scenario.agent_policy is PolicyKind.RANDOM:
                intended[i] = random_action(self.rng)
            elif scenario.agent_policy is PolicyKind.CONGREGATION:
                intended[i] = congregation_action(self.banks[i], shape, self.rng)
            else:
                intended[i] = predator_action(
                    self.banks[i],
                    self.external_ids[0],
                    shape,
                    self.rng,
                    scenario.separation_radius,
                )
        for entity in self.external_ids:
            intended[entity] = prey_action(self.state, entity)
        return intended

    def step(self) -> StepOutcome:
        scenario = self.scenario
        intended = self._intended_actions()
        self.state, executed = step_world(self.state, intended)
        frames = [
            build_local_frame(self.state, i, executed, scenario.sensing_range)
            for i in range(scenario.n_agents)
        ]

        banks = [
            control_update(bank, frames[i].visible_controls, self.model)
            for i, bank in enumerate(self.banks)
        ]
        banks = [
            observation_update(bank, frames[i].visible_observations, self.model)
            for i, bank in enumerate(banks)
        ]
        for i, frame in enumerate(frames):
            for entity in self.external_ids:
                banks[i] = external_indicator_update(
                    banks[i], entity, frame.visible_observations.indicators[entity], self.model.sensing
                )

        if scenario.rounds > 0:
            neighbor_sets = [frame.neighbor_ids for frame in frames]
            messages = {bank.owner: BeliefMessage.from_bank(bank) for bank in banks}
            for frame in frames:
                frame.messages = {j: messages[j] for j in sorted(frame.neighbor_ids)}
            for round_index in range(scenario.rounds):
                before = banks
                banks = share_round(banks, neighbor_sets)
                if self.on_share_round is not None:
                    self.on_share_round(self, self.t + 1, round_index, before, banks)
        self.banks = banks
        self.t += 1

        if scenario.task == "congregation":
            reward = reward_congregation(self.state, scenario.reward_range)
        else:
            reward = reward_predator_prey(self.state, scenario.reward_range)
        outcome = StepOutcome(executed, frames, reward)
        if self.on_step is not None:
            self.on_step(self, self.t, outcome)
        return outcome

    def total_w1(self) -> float:
        """Sum of W1-to-truth over every maintained agent-pair belief."""
        total = 0.0
        for j in range(self.scenario.n_agents):
            column = self._cheb[:, self.grid.flat(self.state.agent_positions[j])]
            stacked = sum(bank.agent_beliefs[j] for bank in self.banks)
            total += float(stacked @ column)
        return total

    def prey_w1(self) -> Optional[float]:
        """Sum of W1-to-truth over every maintained external-entity belief."""
        if not self.external_ids:
            return None
        total = 0.0
        for e, entity in enumerate(self.external_ids):
            column = self._cheb[:, self.grid.flat(self.state.external_positions[e])]
            stacked = sum(bank.external_beliefs[entity] for bank in self.banks)
            total += float(stacked @ column)
        return total

    def run(self) -> list[MetricsRecord]:
        records = []
        cumulative = 0
        for _ in range(self.scenario.horizon):
            outcome = self.step()
            cumulative += outcome.reward
            records.append(
                MetricsRecord(
                    seed=self.seed,
                    t=self.t,
                    step_reward=outcome.reward,
                    cumulative_reward=cumulative,
                    total_w1=self.total_w1(),
                    prey_w1=self.prey_w1(),
                )
            )
        return records


def run_episode(
    scenario: Scenario,
    seed: int,
    on_step: Optional[Callable] = None,
    on_share_round: Optional[Callable] = None,
) -> list[MetricsRecord]:
    """Run one seeded episode to the horizon and return its metric records."""
    return Episode(scenario, seed, on_step=on_step, on_share_round=on_share_round).run()

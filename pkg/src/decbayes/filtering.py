"""Per-agent decentralized Bayes filtering.

Each agent owns a BeliefBank: one belief per cooperative agent (itself
included) and one per external entity. A step applies three phases in
order: control update (transition kernels, masked for out-of-range peers),
observation update (emission likelihoods, masked observations are a no-op),
and entropy-greedy belief sharing over a fixed number of synchronous
message-passing rounds. External entities never reveal controls or
observations; their beliefs advance with the masked kernel and are fused
with the owner's self-localization through the sensing indicator bit.

All updates are functional: banks and belief vectors are treated as
immutable, so any number of agents may be updated concurrently.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .beliefs import ZeroMassError, entropy_bits, normalize, uniform_belief
from .world import Action, WorldModel


class _Masked:
    """Sentinel for controls/observations hidden by the sensing range."""

    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self):
        return "MASKED"


MASKED = _Masked()

# One entry per tracked id: a concrete Action, or MASKED when out of range.
VisibleControls = dict[int, Action | _Masked]


@dataclass
class VisibleObservations:
    """Per cooperative agent: a feature id or MASKED. Per external entity:
    only the indicator bit (in range or not), never a position."""

    features: dict[int, "int | _Masked"]
    indicators: dict[int, bool]


@dataclass
class BeliefBank:
    """Everything one agent believes: a belief per cooperative agent and per
    external entity, keyed by global entity id."""

    owner: int
    agent_beliefs: dict[int, np.ndarray]
    external_beliefs: dict[int, np.ndarray]

    @staticmethod
    def uniform(owner, agent_ids, external_ids, n_cells) -> "BeliefBank":
        return BeliefBank(
            owner,
            {j: uniform_belief(n_cells) for j in agent_ids},
            {e: uniform_belief(n_cells) for e in external_ids},
        )

    def copy(self) -> "BeliefBank":
        return BeliefBank(
            self.owner,
            {j: bel.copy() for j, bel in self.agent_beliefs.items()},
            {e: bel.copy() for e, bel in self.external_beliefs.items()},
        )


@dataclass(frozen=True)
class BeliefMessage:
    """One agent's broadcast: a snapshot of its full bank at round start.

    The contained arrays are never mutated in place anywhere in the package,
    so sharing references preserves round-snapshot semantics.
    """

    sender: int
    agent_beliefs: dict[int, np.ndarray]
    external_beliefs: dict[int, np.ndarray]

    @staticmethod
    def from_bank(bank: BeliefBank) -> "BeliefMessage":
        return BeliefMessage(bank.owner, dict(bank.agent_beliefs), dict(bank.external_beliefs))


def control_update(bank: BeliefBank, controls: VisibleControls, model: WorldModel) -> BeliefBank:
    """Advance every belief through its transition kernel.

    Visible peers use the kernel of their executed action; masked peers and
    all external entities use the expected (masked) kernel. Kernels are
    column-stochastic, so mass is preserved without renormalizing.
    """
    masked = model.masked_kernel
    agent_beliefs = {}
    for j, bel in bank.agent_beliefs.items():
        control = controls[j]
        kernel = masked if control is MASKED else model.kernels[control]
        agent_beliefs[j] = kernel @ bel
    external_beliefs = {e: masked @ bel for e, bel in bank.external_beliefs.items()}
    return BeliefBank(bank.owner, agent_beliefs, external_beliefs)


def observation_update(bank: BeliefBank, obs: VisibleObservations, model: WorldModel) -> BeliefBank:
    """Condition each cooperative belief on its observation.

    Masked observations have a uniform likelihood; multiplying by it and
    renormalizing is the identity, so the belief is passed through untouched
    (bit-identical). External entities are handled separately by
    external_indicator_update.
    """
    agent_beliefs = {}
    for j, bel in bank.agent_beliefs.items():
        z = obs.features[j]
        if z is MASKED:
            agent_beliefs[j] = bel
            continue
        try:
            agent_beliefs[j] = normalize(model.emissions[z] * bel)
        except ZeroMassError:
            raise ZeroMassError(
                f"observation update wiped out belief of agent {bank.owner} "
                f"about agent {j} (observed feature {z})"
            ) from None
    return BeliefBank(bank.owner, agent_beliefs, dict(bank.external_beliefs))


def external_indicator_update(
    bank: BeliefBank, entity: int, indicator: bool, sensing: np.ndarray
) -> BeliefBank:
    """Fuse the sensing indicator bit into one external-entity belief.

    v = sensing @ self-belief is, per cell, the probability the owner would
    sense a target there. Indicator set: posterior proportional to v * prior.
    Indicator clear: the complement likelihood (1 - v) applies, the unique
    consistent counterpart under deterministic sensing.
    """
    v = sensing @ bank.agent_beliefs[bank.owner]
    # v can overshoot 1 by float error; the complement must stay non-negative.
    likelihood = v if indicator else np.maximum(1.0 - v, 0.0)
    try:
        posterior = normalize(likelihood * bank.external_beliefs[entity])
    except ZeroMassError:
        raise ZeroMassError(
            f"indicator update (bit={indicator}) wiped out belief of agent "
            f"{bank.owner} about external entity {entity}"
        ) from None
    external_beliefs = dict(bank.external_beliefs)
    external_beliefs[entity] = posterior
    return BeliefBank(bank.owner, bank.agent_beliefs, external_beliefs)


def _adopt(current_ids, entropies, messages, owner, senders, pick):
    """Greedy argmin-entropy adoption for one belief table.

    The search starts at the owner's own belief and ``senders`` lists
    neighbors in ascending id; only a strictly lower entropy displaces the
    current choice, so ties prefer self, then the lowest sender id.
    """
    adopted = {}
    for k in current_ids:
        best = owner
        best_h = entropies[owner, k]
        for n in senders:
            h = entropies[n, k]
            if h < best_h:
                best, best_h = n, h
        adopted[k] = pick(messages[best], k).copy()
    return adopted


def share_round(banks: list[BeliefBank], neighbor_sets: list[set[int]]) -> list[BeliefBank]:
    """One synchronous message-passing round.

    Every agent broadcasts its bank, then every agent replaces each tracked
    belief (cooperative and external) with the minimum-entropy candidate
    among its own and its neighbors' pre-round snapshots.
    """
    messages = {bank.owner: BeliefMessage.from_bank(bank) for bank in banks}
    entropies: dict[tuple[int, int], float] = {}
    for bank in banks:
        for k, bel in bank.agent_beliefs.items():
            entropies[bank.owner, k] = entropy_bits(bel)
        for k, bel in bank.external_beliefs.items():
            entropies[bank.owner, k] = entropy_bits(bel)

    fused = []
    for bank, neighbors in zip(banks, neighbor_sets):
        senders = sorted(neighbors)
        fused.append(
            BeliefBank(
                bank.owner,
                _adopt(
                    bank.agent_beliefs, entropies, messages, bank.owner, senders,
                    lambda msg, k: msg.agent_beliefs[k],
                ),
                _adopt(
                    bank.external_beliefs, entropies, messages, bank.owner, senders,
                    lambda msg, k: msg.external_beliefs[k],
                ),
            )
        )
    return fused


def share_beliefs(
    banks: list[BeliefBank], neighbor_sets: list[set[int]], rounds: int
) -> list[BeliefBank]:
    """Run ``rounds`` synchronous sharing rounds; zero rounds is a no-op.

    Neighbor sets must be symmetric (they derive from the symmetric
    Chebyshev sensing threshold). Each extra round extends the effective
    communication range by one hop.
    """
    if rounds < 0:
        raise ValueError("rounds must be non-negative")
    for _ in range(rounds):
        banks = share_round(banks, neighbor_sets)
    return banks

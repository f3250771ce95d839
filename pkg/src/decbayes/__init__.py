"""Decentralized multi-agent Bayes filtering on grid worlds.

Every agent runs a discrete Bayes filter over every agent's position,
masking the control and observation channels of out-of-range peers, and
sharpens its posteriors by adopting the lowest-entropy beliefs heard from
neighbors over synchronous message-passing rounds.
"""

from .beliefs import (
    Cell,
    ZeroMassError,
    dirac_belief,
    entropy_bits,
    map_estimate,
    normalize,
    uniform_belief,
    w1_to_dirac,
)
from .experiments import (
    AggregateRow,
    ConfigError,
    ExperimentConfig,
    ExperimentResult,
    aggregate,
    emit_plotdata,
    run_experiment,
)
from .filtering import (
    MASKED,
    BeliefBank,
    BeliefMessage,
    VisibleObservations,
    control_update,
    external_indicator_update,
    observation_update,
    share_beliefs,
    share_round,
)
from .policies import (
    PolicyKind,
    congregation_action,
    predator_action,
    prey_action,
    random_action,
)
from .simulation import (
    Episode,
    LocalFrame,
    MetricsRecord,
    Scenario,
    StepOutcome,
    WorldState,
    build_local_frame,
    reward_congregation,
    reward_predator_prey,
    run_episode,
    step_world,
)
from .world import (
    ACTIONS,
    Action,
    GridSpec,
    WorldModel,
    build_action_kernel,
    chebyshev,
    emission_likelihood,
    masked_action_kernel,
    masked_observation_likelihood,
    sensing_operator,
    within_sensing,
)

__all__ = [name for name in dir() if not name.startswith("_")]

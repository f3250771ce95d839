"""Entropy-greedy belief sharing along a communication chain.

Three agents form a line a-b-c where only adjacent pairs can talk. Agent a
holds a sharp (zero entropy) estimate of a target's position; b and c know
nothing. Each synchronous message-passing round, every agent adopts the
lowest-entropy candidate among its own and its neighbors' beliefs, so the
sharp estimate hops one link per round: transitivity without ever talking
to a stranger.
"""

import numpy as np

from decbayes import GridSpec
from decbayes.beliefs import dirac_belief, entropy_bits
from decbayes.filtering import BeliefBank, share_round

grid = GridSpec.round_robin(10, 10, 4)
TARGET = 2  # the tracked agent id everyone estimates

def fresh_banks():
    banks = [BeliefBank.uniform(i, range(3), [], grid.n_cells) for i in range(3)]
    banks[0].agent_beliefs[TARGET] = dirac_belief(grid.n_cells, grid.flat((4, 7)))
    return banks

def show(banks, label):
    entropies = [entropy_bits(b.agent_beliefs[TARGET]) for b in banks]
    print(f"{label}: entropy about agent {TARGET} = "
          + ", ".join(f"{h:.2f}" for h in entropies) + " bits")

chain = [{1}, {0, 2}, {1}]

banks = fresh_banks()
show(banks, "round 0")
for round_index in range(1, 4):
    banks = share_round(banks, chain)
    show(banks, f"round {round_index}")

print("\nwith zero rounds the bank is untouched; with an empty neighborhood")
print("the candidate set is the agent itself and nothing can change:")
banks = fresh_banks()
isolated = share_round(banks, [set(), set(), set()])
same = all(
    np.array_equal(a.agent_beliefs[TARGET], b.agent_beliefs[TARGET])
    for a, b in zip(banks, isolated)
)
print(f"isolated round left all beliefs unchanged: {same}")

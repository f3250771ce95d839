"""Environment model: kernels, emissions, sensing."""

import numpy as np
import pytest

from decbayes.beliefs import Cell, dirac_belief, entropy_bits, normalize, uniform_belief
from decbayes.world import (
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


def test_nine_distinct_actions():
    deltas = {a.delta for a in ACTIONS}
    assert len(ACTIONS) == 9
    assert deltas == {(dr, dc) for dr in (-1, 0, 1) for dc in (-1, 0, 1)}
    for a in ACTIONS:
        assert Action.from_delta(*a.delta) is a


def test_stay_kernel_is_identity():
    for grid in (GridSpec.round_robin(1, 1, 1), GridSpec.round_robin(4, 7, 3)):
        assert np.array_equal(build_action_kernel(grid, Action.STAY), np.eye(grid.n_cells))


def test_east_kernel_on_1x2_grid():
    grid = GridSpec.round_robin(1, 2, 1)
    kernel = build_action_kernel(grid, Action.EAST)
    # cell (0,0) moves east with probability 1
    assert kernel[1, 0] == 1.0 and kernel[0, 0] == 0.0
    # cell (0,1) clamps to itself
    assert kernel[1, 1] == 1.0 and kernel[0, 1] == 0.0


def test_kernel_columns_are_distributions():
    grid = GridSpec.round_robin(5, 4, 2)
    for action in ACTIONS:
        kernel = build_action_kernel(grid, action)
        assert np.all(kernel >= 0.0)
        assert np.max(np.abs(kernel.sum(axis=0) - 1.0)) <= 1e-12
        # deterministic: exactly one unit entry per source column
        assert np.all(kernel.sum(axis=0) == 1.0)
        assert np.all((kernel == 0.0) | (kernel == 1.0))


def test_interior_columns_form_permutation():
    grid = GridSpec.round_robin(6, 6, 1)
    interior = [grid.flat(Cell(r, c)) for r in range(1, 5) for c in range(1, 5)]
    for action in ACTIONS:
        kernel = build_action_kernel(grid, action)
        dests = {int(np.argmax(kernel[:, x])) for x in interior}
        assert len(dests) == len(interior)


def test_masked_kernel_1x1_identity():
    grid = GridSpec.round_robin(1, 1, 1)
    assert np.array_equal(masked_action_kernel(grid), np.eye(1))


def test_masked_kernel_is_exact_average():
    grid = GridSpec.round_robin(4, 5, 2)
    masked = masked_action_kernel(grid)
    total = sum(build_action_kernel(grid, a) for a in ACTIONS)
    assert np.array_equal(masked, total / 9.0)
    assert np.max(np.abs(masked.sum(axis=0) - 1.0)) <= 1e-12


def test_masked_kernel_center_of_3x3():
    # Oracle: enumerate the nine king destinations of the center by hand.
    grid = GridSpec.round_robin(3, 3, 1)
    center = grid.flat(Cell(1, 1))
    dests = set()
    for dr in (-1, 0, 1):
        for dc in (-1, 0, 1):
            dests.add(grid.flat(Cell(1 + dr, 1 + dc)))
    assert dests == set(range(9))
    column = masked_action_kernel(grid)[:, center]
    assert np.allclose(column, np.full(9, 1.0 / 9.0))


def test_emission_distinct_features_one_hot():
    grid = GridSpec.round_robin(3, 3, 9)
    for z in range(9):
        lik = emission_likelihood(grid, z)
        assert lik.sum() == 1.0 and lik[z] == 1.0


def test_emission_single_feature_uninformative():
    grid = GridSpec.round_robin(4, 4, 1)
    assert np.array_equal(emission_likelihood(grid, 0), np.ones(16))


def test_emission_balanced_counts():
    grid = GridSpec.round_robin(10, 10, 4)
    for z in range(4):
        # oracle: count cells carrying the feature
        expected = sum(1 for f in grid.features if f == z)
        assert expected == 25
        assert emission_likelihood(grid, z).sum() == expected


def test_emission_partition_of_cells():
    rng = np.random.default_rng(3)
    grid = GridSpec.shuffled(6, 7, 5, rng)
    stack = sum(emission_likelihood(grid, z) for z in range(5))
    assert np.array_equal(stack, np.ones(42))


def test_shuffled_assignment_is_balanced():
    rng = np.random.default_rng(8)
    grid = GridSpec.shuffled(10, 10, 4, rng)
    counts = np.bincount(grid.features, minlength=4)
    assert np.array_equal(counts, [25, 25, 25, 25])


def test_masked_observation_is_all_ones_and_noop():
    grid = GridSpec.round_robin(5, 5, 3)
    lik = masked_observation_likelihood(grid)
    assert np.array_equal(lik, np.ones(25))
    dirac = dirac_belief(25, 7)
    assert np.array_equal(normalize(lik * dirac), dirac)
    uni = uniform_belief(25)
    assert np.allclose(normalize(lik * uni), uni)


def test_masked_observation_preserves_entropy():
    grid = GridSpec.round_robin(10, 10, 4)
    lik = masked_observation_likelihood(grid)
    rng = np.random.default_rng(21)
    for _ in range(100):
        bel = normalize(rng.random(100))
        after = normalize(lik * bel)
        assert entropy_bits(after) == pytest.approx(entropy_bits(bel), abs=1e-12)


def test_sensing_zero_range_is_identity():
    grid = GridSpec.round_robin(4, 4, 1)
    assert np.array_equal(sensing_operator(grid, 0), np.eye(16))


def test_sensing_full_range_covers_map():
    grid = GridSpec.round_robin(4, 6, 1)
    op = sensing_operator(grid, 6)
    rng = np.random.default_rng(4)
    bel = normalize(rng.random(24))
    assert np.allclose(op @ bel, np.ones(24))


def test_sensing_dirac_neighborhood():
    grid = GridSpec.round_robin(10, 10, 1)
    center = Cell(5, 5)
    # oracle: enumerate the 3x3 neighborhood
    neighborhood = {
        grid.flat(Cell(5 + dr, 5 + dc)) for dr in (-1, 0, 1) for dc in (-1, 0, 1)
    }
    v = sensing_operator(grid, 1) @ dirac_belief(100, grid.flat(center))
    for flat in range(100):
        assert v[flat] == (1.0 if flat in neighborhood else 0.0)


def test_sensing_output_in_unit_interval():
    grid = GridSpec.round_robin(8, 8, 1)
    op = sensing_operator(grid, 2)
    rng = np.random.default_rng(6)
    for _ in range(50):
        v = op @ normalize(rng.random(64))
        assert np.all(v >= 0.0) and np.all(v <= 1.0 + 1e-12)


def test_sensing_operator_symmetric_unit_diagonal():
    grid = GridSpec.round_robin(5, 7, 1)
    op = sensing_operator(grid, 2)
    assert np.array_equal(op, op.T)
    assert np.all(np.diag(op) == 1.0)


def test_within_sensing():
    assert within_sensing(Cell(3, 3), Cell(3, 3), 0)
    assert within_sensing(Cell(3, 3), Cell(4, 4), 1)
    assert not within_sensing(Cell(3, 3), Cell(3, 5), 1)
    assert chebyshev(Cell(0, 0), Cell(2, 9)) == 9


def test_grid_spec_validation():
    with pytest.raises(ValueError):
        GridSpec(0, 3, np.zeros(0, dtype=int), 1)
    with pytest.raises(ValueError):
        GridSpec(2, 2, np.array([0, 1, 2, 3]), 3)  # feature id out of range
    with pytest.raises(ValueError):
        GridSpec(2, 2, np.array([0, 1]), 2)  # wrong length


def test_world_model_bundles_operators():
    grid = GridSpec.round_robin(4, 4, 2)
    model = WorldModel(grid, 1)
    assert set(model.kernels) == set(ACTIONS)
    assert np.array_equal(model.masked_kernel, masked_action_kernel(grid))
    assert np.array_equal(model.emissions[1], emission_likelihood(grid, 1))
    assert np.array_equal(model.sensing, sensing_operator(grid, 1))

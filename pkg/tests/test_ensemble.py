import math

import numpy as np
import pytest
from scipy.spatial import cKDTree

from faultygrover.density import evolve_density, success_probs, trace
from faultygrover.ensemble import (
    WeightedMixture,
    batch_probs,
    draw_faults,
    evolve_exact,
    mixture_to_density,
    sample_batch,
    sample_trajectory,
)
from faultygrover.errors import BranchExplosionError
from faultygrover.reduced_state import (
    SearchSpace,
    apply_diffusion,
    apply_query,
    evolve,
    init_uniform,
    norm_sq,
)


def test_t0_single_uniform_branch():
    space = SearchSpace(16, 3, 0.4)
    mix = evolve_exact(space, 0)
    assert len(mix) == 1
    (w, s, t), = mix.branches
    assert w == 1.0 and t == 0 and s == init_uniform(space)


def test_t1_branches():
    n = 100
    space = SearchSpace(n, 4, 0.2)
    mix = evolve_exact(space, 1)
    assert mix.weights == pytest.approx([0.8, 0.2])
    u = init_uniform(space)
    # the query halves of the two branches are the tabulated t = 1 rows
    amp = 1 / math.sqrt(n)
    rows = [(amp, -amp, -amp), (amp, -amp, amp)]
    for (_, s, _), fault, row in zip(mix.branches, (False, True), rows):
        queried = apply_query(u, space, fault)
        assert (queried.alpha, queried.beta, queried.gamma) == pytest.approx(row)
        expected = apply_diffusion(queried, space)
        assert (s.alpha, s.beta, s.gamma) == pytest.approx(
            (expected.alpha, expected.beta, expected.gamma), abs=1e-15
        )


def test_t12_enumeration_matches_density():
    space = SearchSpace(64, 3, 0.3)
    mix = evolve_exact(space, 12, merge_tol=0.0)
    assert len(mix) == 4096
    rho = mixture_to_density(mix, space)
    assert np.abs(rho.as_array() - evolve_density(space, 12).as_array()).max() <= 1e-12


@pytest.mark.parametrize("n", [16, 64])
@pytest.mark.parametrize("k", [2, 3, 5])
@pytest.mark.parametrize("eps", [0.0, 0.3, 0.7, 1.0])
def test_exact_vs_density(n, k, eps):
    space = SearchSpace(n, k, eps)
    for t in range(13):
        rho = mixture_to_density(evolve_exact(space, t), space)
        assert np.abs(rho.as_array() - evolve_density(space, t).as_array()).max() <= 1e-12


@pytest.mark.parametrize("t", [5, 12, 20])
def test_merging_is_sound(t):
    space = SearchSpace(64, 3, 0.4)
    merged = mixture_to_density(evolve_exact(space, t, merge_tol=1e-12), space)
    plain = mixture_to_density(evolve_exact(space, t), space)
    assert np.abs(merged.as_array() - plain.as_array()).max() <= 1e-9


def test_coarse_merging_collapses_branches():
    space = SearchSpace(64, 3, 0.4)
    mix = evolve_exact(space, 12, merge_tol=0.05)
    assert len(mix) < 4096
    assert mix.weights.sum() == pytest.approx(1.0, abs=1e-12)


def test_branch_explosion_raises():
    with pytest.raises(BranchExplosionError):
        evolve_exact(SearchSpace(64, 3, 0.5), 10, max_branches=100)


def test_mixture_invariants():
    space = SearchSpace(32, 5, 0.35)
    mix = evolve_exact(space, 9)
    assert mix.weights.sum() == pytest.approx(1.0, abs=1e-12)
    assert (mix.weights > 0).all()
    for _, s, _ in mix.branches[:50]:
        assert norm_sq(s, space) == pytest.approx(1.0, abs=1e-12)
    assert trace(mixture_to_density(mix, space), space) == pytest.approx(1.0, abs=1e-12)


def test_mixture_to_density_single_uniform_branch():
    space = SearchSpace(10, 2)
    mix = WeightedMixture.from_branches([(1.0, init_uniform(space))])
    assert mixture_to_density(mix, space).as_tuple() == pytest.approx((0.1,) * 6, abs=1e-15)


@pytest.mark.parametrize("eps", [0.0, 0.25, 0.6])
def test_two_branch_query_mixture(eps):
    n = 20
    space = SearchSpace(n, 3, eps)
    u = init_uniform(space)
    mix = WeightedMixture.from_branches(
        [(1 - eps, apply_query(u, space, False)), (eps, apply_query(u, space, True))]
    )
    rho = mixture_to_density(mix, space)
    expected = (1 / n, (1 - 2 * eps) / n, 1 / n, -1 / n, -(1 - 2 * eps) / n, 1 / n)
    assert rho.as_tuple() == pytest.approx(expected, abs=1e-15)
    # diffusing this mixture gives one full density step from uniform
    from faultygrover.density import apply_diffusion_density
    stepped = apply_diffusion_density(rho, space)
    assert stepped.as_array() == pytest.approx(evolve_density(space, 1).as_array(), abs=1e-15)


def test_sample_trajectory_deterministic_cases():
    space = SearchSpace(128, 3, 0.0)
    for seed in (0, 1, (5, 9)):
        assert sample_trajectory(space, 25, seed) == evolve(space, 25)
    space = SearchSpace(128, 3, 1.0)
    mix = evolve_exact(space, 25)
    assert len(mix) == 1
    s = sample_trajectory(space, 25, 7)
    assert (s.alpha, s.beta, s.gamma) == pytest.approx(
        (mix.alpha[0], mix.beta[0], mix.gamma[0]), abs=1e-15
    )


def test_sample_trajectory_reproducible():
    space = SearchSpace(256, 3, 0.5)
    assert sample_trajectory(space, 40, (11, 3)) == sample_trajectory(space, 40, (11, 3))
    assert sample_trajectory(space, 40, (11, 3)) != sample_trajectory(space, 40, (11, 4))


def test_batch_rows_equal_single_trajectories():
    space = SearchSpace(64, 3, 0.4)
    amps = sample_batch(space, 15, 20, base_seed=99)
    for i in (0, 7, 19):
        s = sample_trajectory(space, 15, (99, i))
        assert amps[i] == pytest.approx([s.alpha, s.beta, s.gamma], abs=1e-15)


def test_monte_carlo_marked_probability():
    space = SearchSpace(256, 3, 0.5)
    probs = batch_probs(space, sample_batch(space, 40, 100_000, base_seed=2024))
    _, pf, pk = success_probs(evolve_density(space, 40), space)
    assert abs((probs[:, 1] + probs[:, 2]).mean() - (pf + pk)) < 0.01


def test_branch_frequencies_match_weights():
    space = SearchSpace(64, 3, 0.3)
    t, samples = 6, 100_000
    mix = evolve_exact(space, t, merge_tol=1e-12)
    amps = sample_batch(space, t, samples, base_seed=5)
    scale = np.sqrt([space.n_unmarked, space.n_nonfaulty, 1.0])
    dist, idx = cKDTree(mix.sphere_points(space)).query(amps * scale)
    assert dist.max() < 1e-9
    counts = np.bincount(idx, minlength=len(mix))
    freq = counts / samples
    sigma = np.sqrt(mix.weights * (1 - mix.weights) / samples)
    assert np.all(np.abs(freq - mix.weights) <= 4 * sigma)


def test_fault_flags_are_bernoulli():
    space = SearchSpace(10, 2, 0.3)
    flags = draw_faults(space, 200_000, seed=1)
    assert abs(flags.mean() - 0.3) < 4 * math.sqrt(0.3 * 0.7 / 200_000)

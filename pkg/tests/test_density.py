import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from conftest import random_density
from faultygrover.density import (
    SymmetricDensity,
    apply_diffusion_density,
    apply_faulty_query_density,
    evolve_density,
    init_uniform_density,
    limit_state,
    min_eigenvalue,
    reduce3,
    step_density,
    success_probs,
    trace,
    trace_distance,
    trace_distance_to_limit,
)
from faultygrover.ensemble import WeightedMixture, evolve_exact, mixture_to_density
from faultygrover.errors import DegenerateInstanceError
from faultygrover.oracle import diffusion_matrix, evolve_full, expand_symmetric
from faultygrover.reduced_state import (
    ReducedPureState,
    SearchSpace,
    evolve,
    init_uniform,
    measure_probs,
)


def test_uniform_density():
    space = SearchSpace(4, 2)
    rho = init_uniform_density(space)
    assert rho.as_tuple() == (0.25,) * 6
    assert trace(rho, space) == pytest.approx(1.0, abs=1e-15)
    ev = np.linalg.eigvalsh(reduce3(rho, space))
    assert ev == pytest.approx([0.0, 0.0, 1.0], abs=1e-12)


@pytest.mark.parametrize(
    "p, a_prime, d_prime",
    [
        (0.0, 0.1, -0.2),  # perfect query
        (0.5, 0.0, 0.0),
        (0.3, 0.04, -0.08),
    ],
)
def test_faulty_query_density(p, a_prime, d_prime):
    rho = SymmetricDensity(0.3, 0.1, 0.2, 0.05, 0.2, 0.01)
    out = apply_faulty_query_density(rho, SearchSpace(16, 3, p))
    assert (out.a_prime, out.d_prime) == pytest.approx((a_prime, d_prime), abs=1e-15)
    assert out.c == -rho.c
    assert (out.a, out.b, out.d) == (rho.a, rho.b, rho.d)


def test_diffusion_density_fixes_uniform():
    space = SearchSpace(20, 4, 0.3)
    rho = init_uniform_density(space)
    assert apply_diffusion_density(rho, space).as_array() == pytest.approx(rho.as_array(), abs=1e-16)


@given(
    st.integers(3, 200).flatmap(lambda n: st.tuples(st.just(n), st.integers(2, n - 1))),
    st.integers(0, 2**32 - 1),
)
def test_diffusion_density_is_involution(nk, seed):
    space = SearchSpace(*nk)
    rho = random_density(space, np.random.default_rng(seed))
    twice = apply_diffusion_density(apply_diffusion_density(rho, space), space)
    assert twice.as_array() == pytest.approx(rho.as_array(), abs=1e-12)


def test_diffusion_density_matches_full_conjugation():
    space = SearchSpace(8, 3)
    d = diffusion_matrix(8)
    rng = np.random.default_rng(0)
    for _ in range(20):
        rho = random_density(space, rng)
        full = d @ expand_symmetric(rho, space) @ d
        reduced = expand_symmetric(apply_diffusion_density(rho, space), space)
        assert np.abs(full - reduced).max() <= 1e-12


def test_zero_fault_density_reproduces_pure_grover():
    for n, k in [(64, 2), (256, 5)]:
        space = SearchSpace(n, k, 0.0)
        rho = init_uniform_density(space)
        s = init_uniform(space)
        for _ in range(60):
            rho, s = step_density(rho, space), evolve(space, 1, state=s)
            assert success_probs(rho, space) == pytest.approx(measure_probs(s, space), abs=1e-10)


@pytest.mark.parametrize("p", [0.0, 0.2, 0.5, 0.9, 1.0])
def test_one_step_matches_two_branch_enumeration(p):
    # after one step the mixture has exactly the no-fault and fault branches
    space = SearchSpace(8, 3, p)
    rho = step_density(init_uniform_density(space), space)
    mix = mixture_to_density(evolve_exact(space, 1), space)
    assert rho.as_array() == pytest.approx(mix.as_array(), abs=1e-15)


def test_query_alone_keeps_first_step_marked_mass():
    # sign flips cannot change the diagonal, whatever the fault probability
    for p in (0.0, 0.3, 1.0):
        space = SearchSpace(8, 3, p)
        rho = apply_faulty_query_density(init_uniform_density(space), space)
        assert success_probs(rho, space) == pytest.approx((5 / 8, 2 / 8, 1 / 8), abs=1e-15)


def test_fifty_steps_match_full_oracle():
    space = SearchSpace(16, 3, 0.7)
    rho = evolve_density(space, 50)
    full = evolve_full(space, 50)
    assert np.abs(expand_symmetric(rho, space) - full).max() <= 1e-10


def test_success_probs():
    space = SearchSpace(100, 3)
    assert success_probs(init_uniform_density(space), space) == pytest.approx((0.97, 0.02, 0.01))
    assert success_probs(limit_state(space), space) == pytest.approx((1 / 3,) * 3, abs=1e-15)
    norm = math.sqrt(97 * 0.08**2 + 2 * 0.3**2 + 0.2**2)
    s = ReducedPureState(0.08 / norm, 0.3 / norm, -0.2 / norm)
    rho = mixture_to_density(WeightedMixture.from_branches([(1.0, s)]), space)
    assert success_probs(rho, space) == pytest.approx(measure_probs(s, space), abs=1e-15)


def test_limit_state_values():
    space = SearchSpace(8, 3, 0.4)
    lim = limit_state(space)
    assert lim.as_tuple() == pytest.approx((1 / 6, 0.0, 1 / 3, 0.0, 0.0, 1 / 15), abs=1e-15)
    assert reduce3(lim, space) == pytest.approx(np.eye(3) / 3, abs=1e-15)
    with pytest.raises(DegenerateInstanceError):
        limit_state(SearchSpace(8, 1))


def test_reduce3_of_uniform_is_projector():
    space = SearchSpace(50, 4)
    m = reduce3(init_uniform_density(space), space)
    v = np.array([math.sqrt(3 / 50), math.sqrt(1 / 50), math.sqrt(46 / 50)])
    assert m == pytest.approx(np.outer(v, v), abs=1e-15)


@pytest.mark.parametrize("n, k", [(8, 2), (16, 3), (32, 5)])
def test_reduce3_eigenvalues_match_full(n, k):
    space = SearchSpace(n, k, 0.35)
    rho = evolve_density(space, 17)
    full_ev = np.linalg.eigvalsh(expand_symmetric(rho, space))
    full_ev = np.sort(full_ev[np.abs(full_ev) > 1e-12])
    red_ev = np.linalg.eigvalsh(reduce3(rho, space))
    red_ev = np.sort(red_ev[np.abs(red_ev) > 1e-12])
    assert red_ev == pytest.approx(full_ev, abs=1e-12)


def test_trace_distance_values():
    space = SearchSpace(100, 3, 0.5)
    assert trace_distance_to_limit(limit_state(space), space) == pytest.approx(0.0, abs=1e-15)
    # uniform is a pure state |v><v|; against I/3 the eigenvalues are 2/3, -1/3, -1/3
    value = trace_distance_to_limit(init_uniform_density(space), space)
    assert value == pytest.approx(2 / 3, abs=1e-12)
    with pytest.raises(DegenerateInstanceError):
        trace_distance_to_limit(init_uniform_density(SearchSpace(100, 1)), SearchSpace(100, 1))


def test_trace_distance_symmetric_and_bounded():
    rng = np.random.default_rng(1)
    space = SearchSpace(40, 4)
    for _ in range(20):
        m1 = reduce3(random_density(space, rng), space)
        m2 = reduce3(random_density(space, rng), space)
        d = trace_distance(m1, m2)
        assert 0 <= d <= 1 + 1e-12
        assert d == pytest.approx(trace_distance(m2, m1), abs=1e-14)


def test_running_minimum_distance_is_monotone():
    space = SearchSpace(64, 3, 0.5)
    rho = init_uniform_density(space)
    best = []
    for _ in range(400):
        rho = step_density(rho, space)
        d = trace_distance_to_limit(rho, space)
        best.append(min(best[-1], d) if best else d)
    assert all(b2 <= b1 for b1, b2 in zip(best, best[1:]))


@pytest.mark.parametrize("p", [0.0, 0.25, 0.5, 0.75, 1.0])
def test_trace_and_psd_preserved(p):
    rng = np.random.default_rng(int(p * 100))
    for n, k in [(16, 2), (64, 3), (1000, 7)]:
        space = SearchSpace(n, k, p)
        rho = random_density(space, rng)
        for _ in range(2000):
            rho = step_density(rho, space)
            assert abs(trace(rho, space) - 1.0) <= 1e-12
        assert min_eigenvalue(rho, space) >= -1e-10


def test_psd_every_step():
    rng = np.random.default_rng(11)
    space = SearchSpace(32, 3, 0.25)
    rho = random_density(space, rng)
    for _ in range(10_000):
        rho = step_density(rho, space)
        assert min_eigenvalue(rho, space) >= -1e-10


@pytest.mark.parametrize("n", [16, 32, 64, 128])
@pytest.mark.parametrize("p", [0.1, 0.5, 0.8])
def test_converges_within_budget_and_off_diagonals_decay(n, p):
    space = SearchSpace(n, 3, p)
    budget = int(100 * n / min(p, 1 - p))
    rho = init_uniform_density(space)
    crossed = None
    for t in range(1, budget + 1):
        rho = step_density(rho, space)
        dist = trace_distance_to_limit(rho, space)
        off = max(abs(rho.a_prime), abs(rho.d_prime), abs(rho.c))
        if crossed is None and dist < 1e-3:
            crossed = t
            assert off < 1e-3
        if dist < 1e-4:
            assert off < 1e-4
            break
    else:
        pytest.fail(f"no convergence within {budget} steps")
    assert crossed is not None

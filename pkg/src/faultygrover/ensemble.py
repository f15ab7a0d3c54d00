"""Pure-state unravelings of the faulty-query mixture.

``evolve_exact`` enumerates fault words (optionally merging branches that land
on the same sphere point) and ``sample_trajectory`` draws one word at random.
Trajectory ``i`` of a batch with base seed ``s`` uses generator seed ``(s, i)``,
so a batch is reproducible regardless of how it is split across workers.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence, Union

import numpy as np
from scipy.sparse import coo_matrix
from scipy.sparse.csgraph import connected_components
from scipy.spatial import cKDTree

from faultygrover.density import SymmetricDensity
from faultygrover.errors import BranchExplosionError
from faultygrover.reduced_state import (
    ReducedPureState,
    SearchSpace,
    diffuse_amplitudes,
    evolve,
    init_uniform,
)

Seed = Union[int, Sequence[int]]

DEFAULT_MAX_BRANCHES = 1 << 20


@dataclass(frozen=True)
class WeightedMixture:
    """Branches of the mixture after ``t`` steps, stored column-wise."""

    t: int
    weights: np.ndarray
    alpha: np.ndarray
    beta: np.ndarray
    gamma: np.ndarray

    @classmethod
    def from_branches(
        cls, branches: Sequence[tuple[float, ReducedPureState]], t: int = 0
    ) -> "WeightedMixture":
        return cls(
            t,
            np.array([w for w, _ in branches], dtype=float),
            np.array([s.alpha for _, s in branches], dtype=float),
            np.array([s.beta for _, s in branches], dtype=float),
            np.array([s.gamma for _, s in branches], dtype=float),
        )

    def __len__(self) -> int:
        return len(self.weights)

    @property
    def branches(self) -> list[tuple[float, ReducedPureState, int]]:
        return [
            (float(w), ReducedPureState(float(x), float(y), float(z)), self.t)
            for w, x, y, z in zip(self.weights, self.alpha, self.beta, self.gamma)
        ]

    def sphere_points(self, space: SearchSpace) -> np.ndarray:
        return np.column_stack(
            [
                self.alpha * math.sqrt(space.n_unmarked),
                self.beta * math.sqrt(space.n_nonfaulty),
                self.gamma,
            ]
        )


def _merge(points: np.ndarray, weights: np.ndarray, tol: float):
    """Group points closer than ``tol`` (transitively); returns representative index and summed weight."""
    pairs = cKDTree(points).query_pairs(tol, output_type="ndarray")
    m = len(points)
    if len(pairs) == 0:
        return np.arange(m), weights
    graph = coo_matrix((np.ones(len(pairs)), (pairs[:, 0], pairs[:, 1])), shape=(m, m))
    n_groups, labels = connected_components(graph, directed=False)
    summed = np.bincount(labels, weights=weights, minlength=n_groups)
    first = np.full(n_groups, m)
    np.minimum.at(first, labels, np.arange(m))
    return first, summed


def evolve_exact(
    space: SearchSpace,
    t: int,
    merge_tol: float = 0.0,
    max_branches: int = DEFAULT_MAX_BRANCHES,
) -> WeightedMixture:
    """Enumerate both fault outcomes at every step.

    Branches whose sphere points are closer than ``merge_tol`` are merged with
    summed weights; ``merge_tol=0`` keeps all ``2**t`` words. Zero-probability
    outcomes (``fault_prob`` of 0 or 1) are dropped. Raises
    ``BranchExplosionError`` instead of truncating.
    """
    if t < 0:
        raise ValueError("t must be non-negative")
    if max_branches < 1:
        raise ValueError("max_branches must be positive")
    n, k, eps = space.n, space.k, space.fault_prob
    s = init_uniform(space)
    weights = np.ones(1)
    alpha, beta, gamma = np.array([s.alpha]), np.array([s.beta]), np.array([s.gamma])
    outcomes = [(w, fault) for w, fault in ((1.0 - eps, False), (eps, True)) if w > 0]
    for _ in range(t):
        new_w, new_a, new_b, new_g = [], [], [], []
        for w, fault in outcomes:
            new_w.append(weights * w)
            new_a.append(alpha)
            new_b.append(-beta)
            new_g.append(gamma if fault else -gamma)
        weights = np.concatenate(new_w)
        alpha, beta, gamma = diffuse_amplitudes(
            np.concatenate(new_a), np.concatenate(new_b), np.concatenate(new_g), n, k
        )
        if merge_tol > 0 and len(weights) > 1:
            points = np.column_stack(
                [alpha * math.sqrt(n - k), beta * math.sqrt(k - 1), gamma]
            )
            keep, weights = _merge(points, weights, merge_tol)
            alpha, beta, gamma = alpha[keep], beta[keep], gamma[keep]
        if len(weights) > max_branches:
            raise BranchExplosionError(
                f"{len(weights)} branches exceed max_branches={max_branches}; "
                "lower t or raise merge_tol"
            )
    return WeightedMixture(t, weights, alpha, beta, gamma)


def draw_faults(space: SearchSpace, t: int, seed: Seed) -> np.ndarray:
    """Independent Bernoulli(fault_prob) fault flags for ``t`` steps."""
    rng = np.random.default_rng(seed)
    return rng.random(t) < space.fault_prob


def sample_trajectory(space: SearchSpace, t: int, seed: Seed) -> ReducedPureState:
    if t < 0:
        raise ValueError("t must be non-negative")
    return evolve(space, t, faults=draw_faults(space, t, seed).tolist())


def sample_batch(space: SearchSpace, t: int, samples: int, base_seed: int) -> np.ndarray:
    """Final amplitudes of ``samples`` trajectories, shape ``(samples, 3)``.

    Row ``i`` equals ``sample_trajectory(space, t, (base_seed, i))``.
    """
    faults = np.empty((samples, t), dtype=bool)
    for i in range(samples):
        faults[i] = draw_faults(space, t, (base_seed, i))
    s = init_uniform(space)
    alpha = np.full(samples, s.alpha)
    beta = np.full(samples, s.beta)
    gamma = np.full(samples, s.gamma)
    for j in range(t):
        beta = -beta
        gamma = np.where(faults[:, j], gamma, -gamma)
        alpha, beta, gamma = diffuse_amplitudes(alpha, beta, gamma, space.n, space.k)
    return np.column_stack([alpha, beta, gamma])


def batch_probs(space: SearchSpace, amplitudes: np.ndarray) -> np.ndarray:
    """Per-trajectory (unmarked, non-faulty marked, faulty) probabilities."""
    scale = np.array([space.n_unmarked, space.n_nonfaulty, 1.0])
    return amplitudes**2 * scale


def mixture_to_density(mix: WeightedMixture, space: SearchSpace) -> SymmetricDensity:
    w, x, y, z = mix.weights, mix.alpha, mix.beta, mix.gamma
    return SymmetricDensity(
        float(np.sum(w * y * y)),
        float(np.sum(w * y * z)),
        float(np.sum(w * z * z)),
        float(np.sum(w * x * y)),
        float(np.sum(w * x * z)),
        float(np.sum(w * x * x)),
    )

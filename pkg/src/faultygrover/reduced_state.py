"""Symmetric pure states of Grover's search with one faulty marked item.

Every item in the same role (unmarked / non-faulty marked / faulty) carries the
same amplitude, so a state of dimension ``n`` is fully described by three reals
``(alpha, beta, gamma)``. All operators involved are real, so amplitudes stay real.

One algorithm step is ``D . E? . Q``: the query flips the marked items, the fault
(with probability ``fault_prob``) flips the faulty item back, then diffusion
inverts about the mean.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass
from typing import Iterable, Optional

import numpy as np

logger = logging.getLogger(__name__)

NORM_TOL = 1e-12
RENORM_EVERY = 10_000


@dataclass(frozen=True)
class SearchSpace:
    """``n`` items, ``k`` of them marked; the last marked item is the faulty one.

    ``fault_prob`` is the probability that a query leaves the faulty item unflipped.
    """

    n: int
    k: int
    fault_prob: float = 0.0

    def __post_init__(self):
        if int(self.n) != self.n or self.n < 1:
            raise ValueError(f"n must be a positive integer, got {self.n!r}")
        if int(self.k) != self.k or not 1 <= self.k <= self.n:
            raise ValueError(f"k must satisfy 1 <= k <= n, got k={self.k!r}, n={self.n}")
        if not 0.0 <= self.fault_prob <= 1.0:
            raise ValueError(f"fault_prob must lie in [0, 1], got {self.fault_prob!r}")

    @property
    def n_unmarked(self) -> int:
        return self.n - self.k

    @property
    def n_nonfaulty(self) -> int:
        return self.k - 1

    def with_fault_prob(self, fault_prob: float) -> "SearchSpace":
        return SearchSpace(self.n, self.k, fault_prob)


@dataclass(frozen=True)
class ReducedPureState:
    alpha: float  # each unmarked item
    beta: float  # each non-faulty marked item
    gamma: float  # the faulty item


@dataclass(frozen=True)
class SpherePoint:
    x: float
    y: float
    z: float

    def as_array(self) -> np.ndarray:
        return np.array([self.x, self.y, self.z])


def norm_sq(state: ReducedPureState, space: SearchSpace) -> float:
    return (
        space.n_unmarked * state.alpha**2
        + space.n_nonfaulty * state.beta**2
        + state.gamma**2
    )


def init_uniform(space: SearchSpace) -> ReducedPureState:
    amp = 1.0 / math.sqrt(space.n)
    return ReducedPureState(amp, amp, amp)


def diffuse_amplitudes(alpha, beta, gamma, n: int, k: int):
    """Inversion about the mean on raw amplitudes; accepts scalars or arrays."""
    mean = ((n - k) * alpha + (k - 1) * beta + gamma) / n
    return 2 * mean - alpha, 2 * mean - beta, 2 * mean - gamma


def apply_diffusion(state: ReducedPureState, space: SearchSpace) -> ReducedPureState:
    return ReducedPureState(
        *diffuse_amplitudes(state.alpha, state.beta, state.gamma, space.n, space.k)
    )


def apply_query(
    state: ReducedPureState, space: SearchSpace, fault_occurred: bool = False
) -> ReducedPureState:
    gamma = state.gamma if fault_occurred else -state.gamma
    return ReducedPureState(state.alpha, -state.beta, gamma)


def step(
    state: ReducedPureState, space: SearchSpace, fault_occurred: bool = False
) -> ReducedPureState:
    return apply_diffusion(apply_query(state, space, fault_occurred), space)


def renormalize(state: ReducedPureState, space: SearchSpace) -> ReducedPureState:
    scale = 1.0 / math.sqrt(norm_sq(state, space))
    return ReducedPureState(state.alpha * scale, state.beta * scale, state.gamma * scale)


def evolve(
    space: SearchSpace,
    t: int,
    faults: Optional[Iterable[bool]] = None,
    state: Optional[ReducedPureState] = None,
) -> ReducedPureState:
    """Run ``t`` steps from ``state`` (uniform by default).

    ``faults`` gives the fault flag of each step; missing means no fault ever.
    The norm is checked every ``RENORM_EVERY`` steps and restored if it drifted.
    """
    if state is None:
        state = init_uniform(space)
    flags = iter(faults) if faults is not None else None
    for i in range(1, t + 1):
        fault = next(flags) if flags is not None else False
        state = step(state, space, fault)
        if i % RENORM_EVERY == 0:
            drift = abs(norm_sq(state, space) - 1.0)
            if drift > NORM_TOL:
                logger.info("renormalizing after %d steps (norm drift %.3e)", i, drift)
                state = renormalize(state, space)
    return state


def measure_probs(state: ReducedPureState, space: SearchSpace) -> tuple[float, float, float]:
    """Born-rule mass on (unmarked, non-faulty marked, faulty) items."""
    return (
        space.n_unmarked * state.alpha**2,
        space.n_nonfaulty * state.beta**2,
        state.gamma**2,
    )


def grover_angle(space: SearchSpace) -> float:
    """Rotation angle of one fault-free step, ``2 arcsin(sqrt(k/n))``."""
    return 2.0 * math.asin(math.sqrt(space.k / space.n))


def grover_closed_form(space: SearchSpace, t: int) -> float:
    """Marked-item probability of fault-free Grover after ``t`` steps."""
    return math.sin((2 * t + 1) * grover_angle(space) / 2) ** 2


def to_sphere(state: ReducedPureState, space: SearchSpace) -> SpherePoint:
    return SpherePoint(
        state.alpha * math.sqrt(space.n_unmarked),
        state.beta * math.sqrt(space.n_nonfaulty),
        state.gamma,
    )


def from_sphere(point: SpherePoint, space: SearchSpace) -> ReducedPureState:
    # empty sectors carry no amplitude; keep them at zero instead of dividing by zero
    alpha = point.x / math.sqrt(space.n_unmarked) if space.n_unmarked else 0.0
    beta = point.y / math.sqrt(space.n_nonfaulty) if space.n_nonfaulty else 0.0
    return ReducedPureState(alpha, beta, point.z)

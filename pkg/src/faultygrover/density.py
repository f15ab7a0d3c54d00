"""Six-parameter symmetric density matrices and their exact evolution.

Under the permutation symmetry of the problem the ``n x n`` density matrix has
only six distinct entries::

    a   non-faulty marked x non-faulty marked
    a'  non-faulty marked x faulty
    b   faulty x faulty
    c   non-faulty marked x unmarked
    d'  faulty x unmarked
    d   unmarked x unmarked

Both the faulty-query channel and diffusion act linearly on these six numbers,
so one step costs O(1) regardless of ``n``.
"""

from __future__ import annotations

import math
from dataclasses import astuple, dataclass
from typing import Iterator, Optional

import numpy as np

from faultygrover.errors import DegenerateInstanceError
from faultygrover.reduced_state import SearchSpace


@dataclass(frozen=True)
class SymmetricDensity:
    a: float
    a_prime: float
    b: float
    c: float
    d_prime: float
    d: float

    def as_tuple(self) -> tuple[float, ...]:
        return astuple(self)

    def as_array(self) -> np.ndarray:
        return np.array(astuple(self))


def trace(rho: SymmetricDensity, space: SearchSpace) -> float:
    return space.n_nonfaulty * rho.a + rho.b + space.n_unmarked * rho.d


def init_uniform_density(space: SearchSpace) -> SymmetricDensity:
    v = 1.0 / space.n
    return SymmetricDensity(v, v, v, v, v, v)


def apply_faulty_query_density(rho: SymmetricDensity, space: SearchSpace) -> SymmetricDensity:
    """Average of the perfect query and the faulty-item-skipping query.

    Entries coupling the faulty item to another sector pick up ``(1 - 2p)`` or
    ``(2p - 1)``; the marked/unmarked coupling ``c`` always flips.
    """
    s = 2.0 * space.fault_prob - 1.0
    return SymmetricDensity(rho.a, -s * rho.a_prime, rho.b, -rho.c, s * rho.d_prime, rho.d)


def apply_diffusion_density(rho: SymmetricDensity, space: SearchSpace) -> SymmetricDensity:
    """Conjugation by the diffusion matrix, ``rho_ij -> 4V - 2V_i - 2V_j + rho_ij``.

    ``V_i`` is the mean of row ``i`` (equal to column ``i``) and ``V`` the mean of
    all entries.
    """
    n, k = space.n, space.k
    nf, nu = k - 1, n - k
    a, ap, b, c, dp, d = astuple(rho)
    v1 = (nf * a + ap + nu * c) / n
    vk = (nf * ap + b + nu * dp) / n
    vn = (nf * c + dp + nu * d) / n
    v = (nf * v1 + vk + nu * vn) / n
    return SymmetricDensity(
        4 * v - 4 * v1 + a,
        4 * v - 2 * v1 - 2 * vk + ap,
        4 * v - 4 * vk + b,
        4 * v - 2 * v1 - 2 * vn + c,
        4 * v - 2 * vk - 2 * vn + dp,
        4 * v - 4 * vn + d,
    )


def step_density(rho: SymmetricDensity, space: SearchSpace) -> SymmetricDensity:
    return apply_diffusion_density(apply_faulty_query_density(rho, space), space)


def density_trajectory(
    space: SearchSpace, t_max: int, rho: Optional[SymmetricDensity] = None
) -> Iterator[tuple[int, SymmetricDensity]]:
    """Yield ``(t, rho_t)`` for ``t = 0 .. t_max``."""
    if rho is None:
        rho = init_uniform_density(space)
    yield 0, rho
    for t in range(1, t_max + 1):
        rho = step_density(rho, space)
        yield t, rho


def evolve_density(
    space: SearchSpace, t: int, rho: Optional[SymmetricDensity] = None
) -> SymmetricDensity:
    if rho is None:
        rho = init_uniform_density(space)
    for _ in range(t):
        rho = step_density(rho, space)
    return rho


def success_probs(rho: SymmetricDensity, space: SearchSpace) -> tuple[float, float, float]:
    """Diagonal mass on (unmarked, non-faulty marked, faulty) items."""
    return space.n_unmarked * rho.d, space.n_nonfaulty * rho.a, rho.b


def _require_limit_instance(space: SearchSpace) -> None:
    if space.k < 2:
        raise DegenerateInstanceError("the limit state needs k >= 2 (no non-faulty marked items)")
    if space.n <= space.k:
        raise DegenerateInstanceError("the limit state needs at least one unmarked item")


def limit_state(space: SearchSpace) -> SymmetricDensity:
    """Equal mixture of |psi+>, |i_k> and |psi->."""
    _require_limit_instance(space)
    third = 1.0 / 3.0
    return SymmetricDensity(
        third / space.n_nonfaulty, 0.0, third, 0.0, 0.0, third / space.n_unmarked
    )


def reduce3(rho: SymmetricDensity, space: SearchSpace) -> np.ndarray:
    """The 3x3 block of ``rho`` in the basis (|psi+>, |i_k>, |psi->).

    For k = 1 the |psi+> row and column are zero.
    """
    nf, nu = space.n_nonfaulty, space.n_unmarked
    sf, su = math.sqrt(nf), math.sqrt(nu)
    m = np.array(
        [
            [nf * rho.a, sf * rho.a_prime, sf * su * rho.c],
            [sf * rho.a_prime, rho.b, su * rho.d_prime],
            [sf * su * rho.c, su * rho.d_prime, nu * rho.d],
        ]
    )
    return m


def trace_distance(m1: np.ndarray, m2: np.ndarray) -> float:
    return 0.5 * float(np.abs(np.linalg.eigvalsh(m1 - m2)).sum())


def trace_distance_to_limit(rho: SymmetricDensity, space: SearchSpace) -> float:
    return trace_distance(reduce3(rho, space), reduce3(limit_state(space), space))


def min_eigenvalue(rho: SymmetricDensity, space: SearchSpace) -> float:
    return float(np.linalg.eigvalsh(reduce3(rho, space))[0])

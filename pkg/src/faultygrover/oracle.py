"""Brute-force references on the full ``n``-dimensional space.

Basis order: the ``k - 1`` non-faulty marked items, then the faulty item (index
``k - 1``), then the ``n - k`` unmarked items. Everything here is dense and meant
for small ``n``; it is the ground truth the reduced simulators are tested against.
"""

from __future__ import annotations

import itertools

import numpy as np

from faultygrover.density import SymmetricDensity
from faultygrover.errors import PatternViolationError
from faultygrover.reduced_state import SearchSpace

MAX_N = 256
MAX_N_WORDS = 64
MAX_T_WORDS = 16
PATTERN_TOL = 1e-8


def _check_size(space: SearchSpace, limit: int = MAX_N) -> None:
    if space.n > limit:
        raise ValueError(f"oracle is limited to n <= {limit}, got n={space.n}")


def diffusion_matrix(n: int) -> np.ndarray:
    return np.full((n, n), 2.0 / n) - np.eye(n)


def query_signs(space: SearchSpace, fault: bool) -> np.ndarray:
    """Diagonal of the query; with ``fault`` the faulty item is left unflipped."""
    signs = np.ones(space.n)
    signs[: space.k] = -1.0
    if fault:
        signs[space.k - 1] = 1.0
    return signs


def uniform_full(space: SearchSpace) -> np.ndarray:
    return np.full((space.n, space.n), 1.0 / space.n)


def roles(space: SearchSpace) -> np.ndarray:
    """Role index per basis vector: 0 non-faulty marked, 1 faulty, 2 unmarked."""
    r = np.full(space.n, 2)
    r[: space.k - 1] = 0
    r[space.k - 1] = 1
    return r


# (row role, column role) -> field of SymmetricDensity
_FIELD = {
    (0, 0): "a", (0, 1): "a_prime", (1, 0): "a_prime", (1, 1): "b",
    (0, 2): "c", (2, 0): "c", (1, 2): "d_prime", (2, 1): "d_prime", (2, 2): "d",
}


def expand_symmetric(rho: SymmetricDensity, space: SearchSpace) -> np.ndarray:
    _check_size(space)
    r = roles(space)
    table = np.array([
        [rho.a, rho.a_prime, rho.c],
        [rho.a_prime, rho.b, rho.d_prime],
        [rho.c, rho.d_prime, rho.d],
    ])
    return table[r[:, None], r[None, :]]


def extract_symmetric(
    rho: np.ndarray, space: SearchSpace, tol: float = PATTERN_TOL
) -> tuple[SymmetricDensity, float]:
    """Role-wise averages of a full matrix and the largest within-role spread."""
    r = roles(space)
    values: dict[str, list[np.ndarray]] = {}
    for (ri, rj), name in _FIELD.items():
        block = rho[np.ix_(r == ri, r == rj)]
        if block.size:
            values.setdefault(name, []).append(block.ravel())
    fields = {}
    spread = 0.0
    for name in ("a", "a_prime", "b", "c", "d_prime", "d"):
        if name not in values:
            fields[name] = 0.0
            continue
        entries = np.concatenate(values[name])
        fields[name] = float(entries.mean())
        spread = max(spread, float(entries.max() - entries.min()))
    if spread > tol:
        raise PatternViolationError(f"within-role spread {spread:.3e} exceeds {tol:.1e}")
    return SymmetricDensity(**fields), spread


def full_step(rho: np.ndarray, space: SearchSpace) -> np.ndarray:
    """``D [(1-p) Q rho Q + p Q_f rho Q_f] D`` with ``Q_f`` the faulty query."""
    _check_size(space)
    p = space.fault_prob
    q = query_signs(space, fault=False)
    qf = query_signs(space, fault=True)
    mixed = (1 - p) * (q[:, None] * rho * q[None, :]) + p * (qf[:, None] * rho * qf[None, :])
    d = diffusion_matrix(space.n)
    return d @ mixed @ d


def evolve_full(space: SearchSpace, t: int, rho: np.ndarray | None = None) -> np.ndarray:
    if rho is None:
        rho = uniform_full(space)
    for _ in range(t):
        rho = full_step(rho, space)
    return rho


def enumerate_words_full(space: SearchSpace, t: int) -> np.ndarray:
    """Weighted sum of ``|psi^w><psi^w|`` over every fault word ``w`` of length ``t``."""
    _check_size(space, MAX_N_WORDS)
    if t > MAX_T_WORDS:
        raise ValueError(f"word enumeration is limited to t <= {MAX_T_WORDS}, got t={t}")
    n, eps = space.n, space.fault_prob
    d = diffusion_matrix(n)
    signs = (query_signs(space, False), query_signs(space, True))
    words = np.array(list(itertools.product((0, 1), repeat=t)), dtype=int).reshape(2**t, t)
    psi = np.full((len(words), n), 1.0 / np.sqrt(n))
    for j in range(t):
        psi = np.where(words[:, j:j + 1] == 1, signs[1], signs[0]) * psi
        psi = psi @ d.T
    n_faults = words.sum(axis=1)
    weights = eps**n_faults * (1 - eps) ** (t - n_faults)
    return (psi * weights[:, None]).T @ psi


def nonzero_eigenvalues(rho: np.ndarray, tol: float = 1e-9) -> np.ndarray:
    ev = np.linalg.eigvalsh(rho)
    return np.sort(ev[np.abs(ev) > tol])

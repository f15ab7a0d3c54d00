"""Spherical trigonometry on the reduced-state sphere.

Coordinates of a sphere point ``(x, y, z)``:

* latitude ``a = arcsin z``, measured from the equator ``z = 0``;
* longitude ``b = atan2(y, x)``, measured from ``(1, 0, 0)`` toward ``(0, 1, 0)``;
  the target meridian is ``b = pi/2`` and values beyond it are overshoot;
* ``A = arctan(1/sqrt(k-1))``, the inclination of the fault-free great circle.

Speeds are expressed as fractions of the fault-free Grover angle ``v_G``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Optional

import numpy as np
from scipy.optimize import bisect

from faultygrover.errors import (
    DegenerateInstanceError,
    NapierDomainError,
    PreconditionError,
    SingularEndpointError,
)
from faultygrover.quadrature import adaptive_gauss_kronrod
from faultygrover.reduced_state import SearchSpace, SpherePoint, grover_angle

QUARTER_PI = math.pi / 4
QUAD_TOL = 1e-10
_POLE_TOL = 1e-15
_ANGLE_SLACK = 1e-12


# -- Napier's rules ---------------------------------------------------------


def _tan(x: float) -> float:
    if abs(math.cos(x)) < _POLE_TOL:
        raise NapierDomainError(f"tan undefined at {x!r}")
    return math.tan(x)


def _cot(x: float) -> float:
    if abs(math.sin(x)) < _POLE_TOL:
        raise NapierDomainError(f"cot undefined at {x!r}")
    return math.cos(x) / math.sin(x)


@dataclass(frozen=True)
class RightTriangle:
    """Right spherical triangle with right angle C; side ``a`` is opposite angle ``A``."""

    a: float
    b: float
    c: float
    A: float
    B: float

    @classmethod
    def from_angle_and_leg(cls, A: float, b: float) -> "RightTriangle":
        """Solve the triangle from angle ``A`` and its adjacent leg ``b``."""
        c = math.atan2(math.tan(b), math.cos(A))  # R6
        a = math.atan(math.tan(A) * math.sin(b))  # R4
        B = math.acos(math.sin(A) * math.cos(b))  # R9
        return cls(a, b, c, A, B)


# rule -> (left side, right side) as functions of the triangle
NAPIER_RULES: dict[str, tuple[Callable[[RightTriangle], float], Callable[[RightTriangle], float]]] = {
    "R1": (lambda t: math.cos(t.c), lambda t: math.cos(t.a) * math.cos(t.b)),
    "R2": (lambda t: math.sin(t.a), lambda t: math.sin(t.A) * math.sin(t.c)),
    "R3": (lambda t: math.sin(t.b), lambda t: math.sin(t.B) * math.sin(t.c)),
    "R4": (lambda t: _tan(t.a), lambda t: _tan(t.A) * math.sin(t.b)),
    "R5": (lambda t: _tan(t.b), lambda t: _tan(t.B) * math.sin(t.a)),
    "R6": (lambda t: _tan(t.b), lambda t: math.cos(t.A) * _tan(t.c)),
    "R7": (lambda t: _tan(t.a), lambda t: math.cos(t.B) * _tan(t.c)),
    "R8": (lambda t: math.cos(t.A), lambda t: math.sin(t.B) * math.cos(t.a)),
    "R9": (lambda t: math.cos(t.B), lambda t: math.sin(t.A) * math.cos(t.b)),
    "R10": (lambda t: math.cos(t.c), lambda t: _cot(t.A) * _cot(t.B)),
}


def napier(rule: str, *, a: float = 0.0, b: float = 0.0, c: float = 0.0,
           A: float = 0.0, B: float = 0.0) -> float:
    """Right-hand side of Napier rule ``rule`` ("R1" .. "R10").

    Only the angles the rule mentions matter; the rest are ignored.
    """
    try:
        _, rhs = NAPIER_RULES[rule]
    except KeyError:
        raise ValueError(f"unknown rule {rule!r}") from None
    return rhs(RightTriangle(a, b, c, A, B))


def napier_residuals(tri: RightTriangle) -> dict[str, float]:
    return {name: lhs(tri) - rhs(tri) for name, (lhs, rhs) in NAPIER_RULES.items()}


# -- coordinates --------------------------------------------------------------


def inclination(space: SearchSpace) -> float:
    if space.k < 2:
        raise DegenerateInstanceError("inclination is undefined for k = 1")
    return math.atan(1.0 / math.sqrt(space.k - 1))


@dataclass(frozen=True)
class GeodesicCoords:
    a: float
    b: float
    c: float
    A: float
    r1_residual: float


def state_to_geodesic(point: SpherePoint, space: SearchSpace) -> GeodesicCoords:
    A = inclination(space)
    a = math.asin(max(-1.0, min(1.0, point.z)))
    b = math.atan2(point.y, point.x)
    c = math.acos(max(-1.0, min(1.0, point.x)))
    return GeodesicCoords(a, b, c, A, math.cos(c) - math.cos(a) * math.cos(b))


def longitude(points: np.ndarray) -> np.ndarray:
    return np.arctan2(points[..., 1], points[..., 0])


def latitude(points: np.ndarray) -> np.ndarray:
    return np.arcsin(np.clip(points[..., 2], -1.0, 1.0))


def orthodrome_basis(space: SearchSpace) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Orthonormal ``(e1, e2, normal)`` of the fault-free great circle.

    ``e1 = (1, 0, 0)``, ``e2`` points toward the target meridian along the circle.
    Fault-free steps rotate by ``v_G`` about ``normal``.
    """
    k = space.k
    e1 = np.array([1.0, 0.0, 0.0])
    e2 = np.array([0.0, math.sqrt((k - 1) / k), math.sqrt(1.0 / k)])
    return e1, e2, np.cross(e1, e2)


def rotation_phase(points: np.ndarray, space: SearchSpace) -> np.ndarray:
    """Angle about the orthodrome normal, i.e. progress along the fault-free route."""
    e1, e2, _ = orthodrome_basis(space)
    return np.arctan2(points @ e2, points @ e1)


# -- fault displacement ----------------------------------------------------------


def _check_A(A: float) -> None:
    if not 0.0 <= A <= QUARTER_PI + _ANGLE_SLACK:
        raise PreconditionError(f"A must lie in [0, pi/4], got {A!r}")


def fault_displacement(a: float, A: float) -> float:
    """Set-back ``c_err`` a single fault inflicts on a state at latitude ``a``.

    ``arctan(tan 2a * sqrt(1 - cos^2 A / cos^2 a))`` for ``0 <= a <= A <= pi/4``.
    """
    _check_A(A)
    if not 0.0 <= a <= A + _ANGLE_SLACK:
        raise PreconditionError(f"latitude must satisfy 0 <= a <= A, got a={a!r}, A={A!r}")
    radicand = 1.0 - math.cos(A) ** 2 / math.cos(a) ** 2
    if radicand <= 0.0:
        return 0.0
    return math.atan(math.tan(2 * a) * math.sqrt(radicand))


@dataclass(frozen=True)
class CorollaryReport:
    A: float
    passed: bool
    worst_c_err: float  # over the near region a <= min(A, pi/6)
    worst_a: float
    max_remaining: Optional[float]  # over a > pi/6: distance left to the target meridian
    points_checked: int


def check_corollary_one(A: float, grid_step: float = 1e-3) -> CorollaryReport:
    """Either a fault costs at most pi/4, or the state is within pi/4 of the target.

    Near latitudes ``a <= pi/6`` are checked through ``fault_displacement``; far
    latitudes through the distance ``c = arcsin(sin a / sin A)`` already covered.
    """
    if not 0.0 < A <= QUARTER_PI + _ANGLE_SLACK:
        raise PreconditionError(f"A must lie in (0, pi/4], got {A!r}")
    near_end = min(A, math.pi / 6)
    near = np.append(np.arange(0.0, near_end, grid_step), near_end)
    c_errs = np.array([fault_displacement(float(a), A) for a in near])
    i = int(np.argmax(c_errs))
    ok = bool(np.all(c_errs <= QUARTER_PI + _ANGLE_SLACK))

    max_remaining = None
    far = np.arange(math.pi / 6 + grid_step, A, grid_step) if A > math.pi / 6 else np.array([])
    if A > math.pi / 6:
        far = np.append(far, A)
        c = np.arcsin(np.clip(np.sin(far) / math.sin(A), -1.0, 1.0))
        remaining = math.pi / 2 - c
        max_remaining = float(remaining.max())
        ok = ok and max_remaining <= QUARTER_PI + _ANGLE_SLACK
    return CorollaryReport(A, ok, float(c_errs[i]), float(near[i]), max_remaining,
                           len(near) + len(far))


# -- speed bounds and quadrature -------------------------------------------------


def speed_lower(b, A: float):
    """Slowest fault-tolerant speed on meridian ``b``, as a fraction of ``v_G``.

    Written with sines and cosines so ``b = pi/2`` evaluates to ``|cos 2A|``.
    """
    sb2 = np.sin(b) ** 2
    ratio = sb2 / (math.cos(A) ** 2 * np.cos(b) ** 2 + sb2)
    return np.sqrt(np.maximum(1.0 - math.sin(2 * A) ** 2 * ratio, 0.0))


def projected_speed_lower(b, A: float):
    """Lower bound on the speed's projection onto the equator, fraction of ``v_G``."""
    return speed_lower(b, A) * math.cos(A)


def _check_integral_args(b_star: float, A: float) -> None:
    _check_A(A)
    if b_star < 0.0:
        raise PreconditionError(f"b_star must be non-negative, got {b_star!r}")
    if A >= QUARTER_PI - _ANGLE_SLACK and b_star >= math.pi / 2:
        raise SingularEndpointError("integrand diverges at b = pi/2 when A = pi/4")


def inverse_projected_speed_integral(b_star: float, A: float, abs_tol: float = QUAD_TOL) -> float:
    """``int_0^{b*} db / projected_speed_lower(b, A)`` (in units of ``1/v_G``)."""
    _check_integral_args(b_star, A)
    value, _ = adaptive_gauss_kronrod(
        lambda b: 1.0 / projected_speed_lower(b, A), 0.0, b_star, abs_tol=abs_tol
    )
    return value


def steps_upper_bound(b_star: float, A: float, space: SearchSpace) -> float:
    """Most steps any branch needs to reach meridian ``b_star``."""
    v_g = grover_angle(space)
    # tolerance is on the step count, so tighten the angular integral by v_G
    value = inverse_projected_speed_integral(b_star, A, abs_tol=QUAD_TOL * v_g) / v_g
    return max(value, b_star / v_g)


def meridian_gap(b_star: float, A: float) -> float:
    """How far the fastest branch can be past ``b_star`` when the slowest reaches it."""
    return max(inverse_projected_speed_integral(b_star, A) - b_star, 0.0)


# -- constants used in the O(sqrt N) search guarantee ----------------------------

A_THRESHOLD = 0.1953 * math.pi
SEARCH_FLOOR = math.cos(math.pi / 8) ** 2
SEARCH_FLOOR_K2 = math.cos(0.17 * math.pi) ** 2


@dataclass(frozen=True)
class Theorem1Report:
    sup_gap_3pi8: float  # max over the A grid of meridian_gap(3pi/8, A)
    sup_gap_at_A: float
    sup_gap_ok: bool  # <= pi/4
    gap_033: float  # meridian_gap(0.33 pi, pi/4)
    gap_033_ok: bool  # <= 0.34 pi
    a_threshold: float  # largest A with meridian_gap(3pi/8, A) <= pi/4
    a_threshold_ok: bool  # within [0.1950 pi, 0.1956 pi]
    floor: float  # cos^2(pi/8)
    floor_k2: float  # cos^2(0.17 pi)

    @property
    def passed(self) -> bool:
        return self.sup_gap_ok and self.gap_033_ok and self.a_threshold_ok


def a_grid(a_max: float = A_THRESHOLD, step: float = 1e-3 * math.pi) -> np.ndarray:
    grid = np.arange(0.0, a_max, step)
    return np.append(grid[grid < a_max - 1e-15], a_max)


def gap_threshold(b_star: float = 3 * math.pi / 8, gap: float = QUARTER_PI,
                  xtol: float = 1e-12) -> float:
    """Largest ``A`` with ``meridian_gap(b_star, A) <= gap``, by bisection."""
    return bisect(lambda A: meridian_gap(b_star, A) - gap, 1e-6, QUARTER_PI, xtol=xtol)


def theorem1_constants(grid_step: float = 1e-3 * math.pi) -> Theorem1Report:
    grid = a_grid(A_THRESHOLD, grid_step)
    gaps = np.array([meridian_gap(3 * math.pi / 8, float(A)) for A in grid])
    i = int(np.argmax(gaps))
    gap_033 = meridian_gap(0.33 * math.pi, QUARTER_PI)
    a_star = gap_threshold()
    return Theorem1Report(
        sup_gap_3pi8=float(gaps[i]),
        sup_gap_at_A=float(grid[i]),
        sup_gap_ok=bool(gaps[i] <= QUARTER_PI),
        gap_033=gap_033,
        gap_033_ok=gap_033 <= 0.34 * math.pi,
        a_threshold=a_star,
        a_threshold_ok=0.1950 * math.pi <= a_star <= 0.1956 * math.pi,
        floor=SEARCH_FLOOR,
        floor_k2=SEARCH_FLOOR_K2,
    )

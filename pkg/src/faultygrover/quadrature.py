"""One-dimensional quadrature: adaptive Gauss-Kronrod and a fixed composite rule.

The two are deliberately unrelated so that each can check the other.
"""

from __future__ import annotations

import heapq
from typing import Callable

import numpy as np

from faultygrover.errors import QuadratureError

# 7-point Gauss / 15-point Kronrod, nodes on [0, 1] half of [-1, 1]
_XK = np.array([
    0.991455371120812639206854697526329,
    0.949107912342758524526189684047851,
    0.864864423359769072789712788640926,
    0.741531185599394439863864773280788,
    0.586087235467691130294144845693013,
    0.405845151377397166906606412076961,
    0.207784955007898467600689403773245,
    0.000000000000000000000000000000000,
])
_WK = np.array([
    0.022935322010529224963732008058970,
    0.063092092629978553290700663189204,
    0.104790010322250183839876322541518,
    0.140653259715525918745189590510238,
    0.169004726639267902826583426598550,
    0.190350578064785409913256402421014,
    0.204432940075298892414161999234649,
    0.209482141084727828012999174891714,
])
_WG = np.array([
    0.129484966168869693270611432679082,
    0.279705391489276667901467771423780,
    0.381830050505118944950369775488975,
    0.417959183673469387755102040816327,
])
_NODES = np.concatenate([-_XK[:-1], _XK[::-1]])
_WEIGHTS_K = np.concatenate([_WK[:-1], _WK[::-1]])
# Gauss nodes are the odd-indexed Kronrod nodes
_WEIGHTS_G = np.zeros(15)
_WEIGHTS_G[[1, 3, 5, 7, 9, 11, 13]] = np.concatenate([_WG[:-1], _WG[::-1]])


def _gk15(f: Callable[[np.ndarray], np.ndarray], lo: float, hi: float) -> tuple[float, float]:
    half = 0.5 * (hi - lo)
    fx = f(0.5 * (hi + lo) + half * _NODES)
    kron = half * float(_WEIGHTS_K @ fx)
    gauss = half * float(_WEIGHTS_G @ fx)
    return kron, abs(kron - gauss)


def adaptive_gauss_kronrod(
    f: Callable[[np.ndarray], np.ndarray],
    lo: float,
    hi: float,
    abs_tol: float = 1e-10,
    max_panels: int = 2000,
) -> tuple[float, float]:
    """Integrate a vectorized ``f`` over ``[lo, hi]`` by panel bisection.

    The panel with the largest error estimate is split until the summed
    estimate is below ``abs_tol``. Returns ``(value, error_estimate)``.
    """
    if hi == lo:
        return 0.0, 0.0
    value, err = _gk15(f, lo, hi)
    heap = [(-err, lo, hi, value)]
    total, total_err = value, err
    while total_err > abs_tol:
        if len(heap) >= max_panels:
            raise QuadratureError(
                f"no convergence on [{lo}, {hi}] after {max_panels} panels "
                f"(error estimate {total_err:.3e})"
            )
        neg_err, a, b, v = heapq.heappop(heap)
        mid = 0.5 * (a + b)
        v1, e1 = _gk15(f, a, mid)
        v2, e2 = _gk15(f, mid, b)
        heapq.heappush(heap, (-e1, a, mid, v1))
        heapq.heappush(heap, (-e2, mid, b, v2))
        total += v1 + v2 - v
        total_err += e1 + e2 + neg_err
    # re-sum to shed the running-update rounding
    return float(sum(item[3] for item in heap)), total_err


def composite_gauss_legendre(
    f: Callable[[np.ndarray], np.ndarray],
    lo: float,
    hi: float,
    panels: int = 1_000_000,
    order: int = 4,
    chunk: int = 100_000,
) -> float:
    """Fixed ``order``-point Gauss-Legendre on ``panels`` equal panels."""
    x, w = np.polynomial.legendre.leggauss(order)
    width = (hi - lo) / panels
    total = 0.0
    for start in range(0, panels, chunk):
        idx = np.arange(start, min(start + chunk, panels))
        mids = lo + (idx + 0.5) * width
        pts = mids[:, None] + 0.5 * width * x[None, :]
        total += float(np.sum(f(pts.ravel()).reshape(pts.shape) @ w))
    return 0.5 * width * total

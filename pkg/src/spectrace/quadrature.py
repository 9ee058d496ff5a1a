"""Globally adaptive Gauss-Kronrod (7/15) quadrature on finite intervals."""
from __future__ import annotations

import heapq
from dataclasses import dataclass
from typing import Callable

import numpy as np

from .errors import NonConvergenceError

# Kronrod abscissae on [0, 1); odd indices are the embedded Gauss nodes.
_XGK = np.array([
    0.991455371120812639206854697526329,
    0.949107912342758524526189684047851,
    0.864864423359769072789712788640926,
    0.741531185599394439863864773280788,
    0.586087235467691130294144845693013,
    0.405845151377397166906606412076961,
    0.207784955007898467600689403773245,
    0.000000000000000000000000000000000,
])
_WGK = np.array([
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

_NODES = np.concatenate([-_XGK[:-1], _XGK[::-1]])          # 15 nodes, ascending
_KW = np.concatenate([_WGK[:-1], _WGK[::-1]])
_GW = np.zeros(15)
_GW[[1, 3, 5]] = _WG[:3]
_GW[[13, 11, 9]] = _WG[:3]
_GW[7] = _WG[3]


@dataclass(frozen=True)
class QuadResult:
    value: float
    error_estimate: float
    panels: int
    evaluations: int


def _panel(f, a: float, b: float) -> tuple[float, float]:
    half = 0.5 * (b - a)
    mid = 0.5 * (a + b)
    y = np.asarray(f(mid + half * _NODES), dtype=float)
    kron = half * float(np.dot(_KW, y))
    gauss = half * float(np.dot(_GW, y))
    return kron, abs(kron - gauss)


def integrate(
    f: Callable[[np.ndarray], np.ndarray],
    a: float,
    b: float,
    tol: float,
    max_panels: int = 4000,
) -> QuadResult:
    """Integrate a vectorised ``f`` over ``[a, b]`` to absolute accuracy ``tol``.

    The panel with the largest Gauss/Kronrod disagreement is bisected until
    the summed disagreement drops below ``tol``. The disagreement is the error
    of the 7-point rule, so it over-estimates the error of the returned
    15-point value on smooth integrands.
    """
    if not b > a:
        raise ValueError("integration interval must satisfy b > a")
    val, err = _panel(f, a, b)
    heap = [(-err, a, b, val)]
    total_err = err
    evals = 15
    while total_err > tol:
        if len(heap) >= max_panels:
            raise NonConvergenceError(
                f"quadrature on [{a}, {b}] did not reach {tol:g} within {max_panels} panels"
            )
        neg_err, lo, hi, _ = heapq.heappop(heap)
        mid = 0.5 * (lo + hi)
        v1, e1 = _panel(f, lo, mid)
        v2, e2 = _panel(f, mid, hi)
        evals += 30
        heapq.heappush(heap, (-e1, lo, mid, v1))
        heapq.heappush(heap, (-e2, mid, hi, v2))
        total_err += e1 + e2 + neg_err
    # sum panels left to right so the result does not depend on heap order
    panels = sorted(heap, key=lambda p: p[1])
    value = float(np.sum([p[3] for p in panels]))
    error = float(np.sum([-p[0] for p in panels]))
    return QuadResult(value, error, len(panels), evals)

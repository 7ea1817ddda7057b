"""Adaptive Gauss-Kronrod quadrature for matrix-valued integrands.

One shared node set integrates every matrix entry at once, which matters
here because each frequency evaluation costs a dense linear solve.  The
integrand of interest is a sum of narrow Lorentzian-like peaks, so the
caller seeds break points at the known peak locations; subdivision then
proceeds by always bisecting the interval with the largest error estimate.
Interval contributions are accumulated with a deterministic pairwise
reduction so the result does not depend on processing order.
"""

from __future__ import annotations

import heapq
from dataclasses import dataclass

import numpy as np

from .errors import QuadratureError

# 15-point Kronrod nodes/weights with the embedded 7-point Gauss rule.
_XK = np.array([
    -0.991455371120813, -0.949107912342759, -0.864864423359769,
    -0.741531185599394, -0.586087235467691, -0.405845151377397,
    -0.207784955007898, 0.0,
    0.207784955007898, 0.405845151377397, 0.586087235467691,
    0.741531185599394, 0.864864423359769, 0.949107912342759,
    0.991455371120813,
])
_WK = np.array([
    0.022935322010529, 0.063092092629979, 0.104790010322250,
    0.140653259715525, 0.169004726639267, 0.190350578064785,
    0.204432940075298, 0.209482141084728,
    0.204432940075298, 0.190350578064785, 0.169004726639267,
    0.140653259715525, 0.104790010322250, 0.063092092629979,
    0.022935322010529,
])
_WG = np.array([
    0.129484966168870, 0.279705391489277, 0.381830050505119,
    0.417959183673469, 0.381830050505119, 0.279705391489277,
    0.129484966168870,
])
_GAUSS_IDX = np.arange(1, 15, 2)


@dataclass
class QuadratureResult:
    value: np.ndarray
    error: float
    n_eval: int


def _gk15(f, a: float, b: float) -> tuple[np.ndarray, np.ndarray, float]:
    half = 0.5 * (b - a)
    mid = 0.5 * (a + b)
    nodes = mid + half * _XK
    vals = np.stack([np.asarray(f(x), dtype=float) for x in nodes])
    kron = half * np.tensordot(_WK, vals, axes=(0, 0))
    gauss = half * np.tensordot(_WG, vals[_GAUSS_IDX], axes=(0, 0))
    err = float(np.abs(kron - gauss).max())
    return kron, vals, err


def adaptive_matrix_quad(f, breakpoints, tol: float = 1e-8,
                         rel_tol: float = 1e-10,
                         max_intervals: int = 4000) -> QuadratureResult:
    """Integrate the matrix-valued ``f`` over [breakpoints[0], breakpoints[-1]].

    Stops when the summed per-interval error drops below
    max(tol, rel_tol * max|integral|); raises QuadratureError if the
    interval budget is exhausted first.
    """
    pts = np.unique(np.asarray(breakpoints, dtype=float))
    if pts.size < 2:
        raise QuadratureError("need at least two distinct break points")

    heap: list[tuple[float, int, float, float]] = []
    results: dict[int, np.ndarray] = {}
    counter = 0
    n_eval = 0
    err_total = 0.0
    running = None
    for a, b in zip(pts[:-1], pts[1:]):
        val, _, err = _gk15(f, a, b)
        results[counter] = val
        heapq.heappush(heap, (-err, counter, a, b))
        counter += 1
        n_eval += 15
        err_total += err
        running = val if running is None else running + val

    while err_total > max(tol, rel_tol * max(float(np.abs(running).max()), 1.0)):
        if counter >= max_intervals:
            raise QuadratureError(
                f"tolerance {tol} not reached with {counter} intervals "
                f"(error estimate {err_total:.3e})")
        neg_err, idx, a, b = heapq.heappop(heap)
        err_total += neg_err  # remove the parent's error
        running = running - results.pop(idx)
        m = 0.5 * (a + b)
        for lo, hi in ((a, m), (m, b)):
            val, _, err = _gk15(f, lo, hi)
            results[counter] = val
            heapq.heappush(heap, (-err, counter, lo, hi))
            counter += 1
            n_eval += 15
            err_total += err
            running = running + val

    # deterministic pairwise accumulation in left-endpoint order
    order = sorted(heap, key=lambda item: item[2])
    stacked = np.stack([results[item[1]] for item in order])
    value = stacked.sum(axis=0)
    return QuadratureResult(value=value, error=err_total, n_eval=n_eval)


def real_line_quad(f, inner_breakpoints, window: float, tol: float = 1e-8,
                   rel_tol: float = 1e-10,
                   max_intervals: int = 4000) -> QuadratureResult:
    """Integrate ``f`` over the whole real line.

    The core [-window, window] is handled directly with the supplied break
    points; each tail is mapped onto t in (0, 1] via omega = +/- window / t,
    which is exact for the O(1/omega^2) tails of stable transfer functions
    (the mapped integrand tends to a finite constant at t -> 0, and the
    Kronrod nodes never touch the endpoints).
    """
    window = float(window)
    pts = [p for p in np.atleast_1d(inner_breakpoints) if -window < p < window]
    pts = np.unique(np.concatenate([[-window, window], pts]))

    budget = max_intervals
    core = adaptive_matrix_quad(f, pts, tol=tol / 2, rel_tol=rel_tol,
                                max_intervals=budget)

    def upper(t: float) -> np.ndarray:
        w = window / t
        return np.asarray(f(w)) * window / (t * t)

    def lower(t: float) -> np.ndarray:
        w = -window / t
        return np.asarray(f(w)) * window / (t * t)

    tail_pts = [0.0, 0.25, 1.0]
    tail_hi = adaptive_matrix_quad(upper, tail_pts, tol=tol / 4, rel_tol=rel_tol,
                                   max_intervals=budget)
    tail_lo = adaptive_matrix_quad(lower, tail_pts, tol=tol / 4, rel_tol=rel_tol,
                                   max_intervals=budget)
    value = core.value + tail_hi.value + tail_lo.value
    return QuadratureResult(
        value=value,
        error=core.error + tail_hi.error + tail_lo.error,
        n_eval=core.n_eval + tail_hi.n_eval + tail_lo.n_eval,
    )

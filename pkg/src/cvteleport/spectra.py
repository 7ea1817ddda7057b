"""Stationary covariance matrices of filtered output modes.

Frequency-domain route: with the Fourier convention x(w) = Int x(t) e^{iwt} dt
the Langevin system solves to R(w) = M(w) D R_in(w), M(w) = (-iw*I - A)^{-1},
and the causal filter F_i(t) = sqrt(2/tau) exp(-(1/tau + i*Omega_i) t) (t>0)
acts multiplicatively:

    T(w) = Phi(w) W(w),     W(w) = F_bare M(w) D - nu,
    Phi  = diag(F2(w), F2*(-w), F3(w), F3*(-w), 1, 1),

where F_bare = diag(sqrt(2*gamma2) x2, sqrt(2*gamma3) x2, 1, 1) carries the
input-output prefactors (a_out = sqrt(2*gamma) a - a_in) and
nu = diag(1, 1, 1, 1, 0, 0): the last two rows keep the intracavity
microwave operators, so the 6x6 CM is finite and physical.  The stationary
CM of (filtered mode 2, filtered mode 3, intracavity microwave) is

    V = (1/2pi) Int Herm[ Q T(w) N T(-w)^T Q^T ] dw,

with the 1/2pi fixed by the vacuum-normalisation invariant (filtered vacuum
in = exact vacuum out).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import DomainError, SingularMatrixError, UnstableSystemError
from .langevin import (
    LinearSystem,
    QUADRATURE_ROTATION,
    STABILITY_MARGIN_TOL,
    stability,
)
from .quadrature import QuadratureResult, real_line_quad

#: marker returned by filter_response for zero-bandwidth filters, whose
#: Lorentzian has collapsed to a delta handled by the analytic fast path
ZERO_BANDWIDTH_DELTA = object()


@dataclass(frozen=True)
class FilterSpec:
    """Causal output filter: central frequency Omega (units of omega_m) and
    time constant tau (units of 1/omega_m); 1/tau is the bandwidth."""

    Omega: float
    tau: float | None = None
    zero_bandwidth: bool = False

    def __post_init__(self) -> None:
        if not self.zero_bandwidth:
            if self.tau is None or self.tau <= 0:
                raise DomainError(f"tau must be positive, got {self.tau}")


def filter_response(f: FilterSpec, omega: float):
    """Fourier transform F(w) = sqrt(2/tau) / (1/tau - i (w - Omega)).

    |F|^2 is a Lorentzian normalised to Int |F|^2 dw / 2pi = 1.  For a
    zero-bandwidth filter the module-level ZERO_BANDWIDTH_DELTA marker is
    returned; the analytic fast path consumes it.
    """
    if f.zero_bandwidth:
        return ZERO_BANDWIDTH_DELTA
    return math.sqrt(2.0 / f.tau) / (1.0 / f.tau - 1j * (omega - f.Omega))


@dataclass(frozen=True)
class TransferMatrix:
    omega: float
    T: np.ndarray


def _resolvent(sys: LinearSystem, omega: float) -> np.ndarray:
    """M(w) D = (-iw*I - A)^{-1} D."""
    lhs = -1j * omega * np.eye(6) - sys.A
    try:
        return np.linalg.solve(lhs, sys.Din)
    except np.linalg.LinAlgError as exc:
        raise SingularMatrixError(f"(A - iw) singular at omega={omega}") from exc


def _bare_transfer(sys: LinearSystem, omega: float) -> np.ndarray:
    """W(w): transfer rows before the filter factors are applied."""
    p = sys.params
    f_bare = np.array([math.sqrt(2.0 * p.gamma2)] * 2 +
                      [math.sqrt(2.0 * p.gamma3)] * 2 + [1.0] * 2)
    W = f_bare[:, None] * _resolvent(sys, omega)
    for k in range(4):
        W[k, k] -= 1.0
    return W


def _filter_factors(filters: tuple[FilterSpec, FilterSpec], omega: float) -> np.ndarray:
    f2, f3 = filters
    phi = np.ones(6, dtype=complex)
    phi[0] = filter_response(f2, omega)
    phi[1] = np.conj(filter_response(f2, -omega))
    phi[2] = filter_response(f3, omega)
    phi[3] = np.conj(filter_response(f3, -omega))
    return phi


def transfer_matrix(sys: LinearSystem, filters: tuple[FilterSpec, FilterSpec],
                    omega: float) -> TransferMatrix:
    """Full transfer matrix T(w) from input noises to the filtered outputs
    (rows 0-3) and intracavity microwave operators (rows 4-5)."""
    if filters[0].zero_bandwidth or filters[1].zero_bandwidth:
        raise DomainError("transfer_matrix needs finite-bandwidth filters; "
                          "use filtered_cm_zero_bandwidth for the delta limit")
    phi = _filter_factors(filters, omega)
    return TransferMatrix(omega=omega, T=phi[:, None] * _bare_transfer(sys, omega))


def _hermitian_part(C: np.ndarray) -> np.ndarray:
    return 0.5 * (C + C.conj().T)


def _cm_integrand(sys: LinearSystem, filters) -> callable:
    N = sys.N
    Q = QUADRATURE_ROTATION

    def integrand(omega: float) -> np.ndarray:
        Tw = transfer_matrix(sys, filters, omega).T
        Tm = transfer_matrix(sys, filters, -omega).T
        C = Q @ (Tw @ N @ Tm.T) @ Q.T
        return _hermitian_part(C).real / (2.0 * math.pi)

    return integrand


def _peak_breakpoints(sys: LinearSystem, filters) -> tuple[np.ndarray, float]:
    """Break points at every Lorentzian peak (filter centers and drift
    resonances) plus multiples of their widths, and the core window size."""
    peaks: list[tuple[float, float]] = []
    for f in filters:
        if not f.zero_bandwidth:
            peaks.append((f.Omega, 1.0 / f.tau))
            peaks.append((-f.Omega, 1.0 / f.tau))
    for lam in stability(sys.A).eigenvalues:
        width = max(abs(lam.real), 1e-6)
        peaks.append((lam.imag, width))
        peaks.append((-lam.imag, width))
    pts = [0.0]
    window = 10.0
    for center, width in peaks:
        for k in (0.0, 1.0, 3.0, 10.0, 30.0):
            pts.extend([center - k * width, center + k * width])
        window = max(window, abs(center) + 50.0 * width)
    pts = np.asarray(pts)
    return pts[np.abs(pts) < window], window


def filtered_output_cm(sys: LinearSystem, filters: tuple[FilterSpec, FilterSpec],
                       tol: float = 1e-8, rel_tol: float = 1e-10,
                       max_intervals: int = 4000) -> tuple[np.ndarray, float]:
    """6x6 quadrature CM of the two filtered optical outputs and the
    intracavity microwave mode, by adaptive frequency integration.

    Returns (V, error_estimate).  Dispatches to the analytic fast path when
    both filters are zero-bandwidth (the optical 4x4 is then returned).
    """
    if filters[0].zero_bandwidth and filters[1].zero_bandwidth:
        return filtered_cm_zero_bandwidth(sys, filters[0].Omega, filters[1].Omega), 0.0
    rep = stability(sys.A)
    if rep.margin >= STABILITY_MARGIN_TOL:
        raise UnstableSystemError(f"margin {rep.margin:.3e}")
    pts, window = _peak_breakpoints(sys, filters)
    res: QuadratureResult = real_line_quad(
        _cm_integrand(sys, filters), pts, window,
        tol=tol, rel_tol=rel_tol, max_intervals=max_intervals)
    V = res.value
    asym = float(np.abs(V - V.T).max())
    V = 0.5 * (V + V.T)
    return V, max(res.error, asym)


def intracavity_cm_frequency(sys: LinearSystem, tol: float = 1e-8,
                             rel_tol: float = 1e-10,
                             max_intervals: int = 4000) -> tuple[np.ndarray, float]:
    """Intracavity quadrature CM by frequency integration of the bare
    resolvent spectrum; an independent cross-check of the Lyapunov route."""
    rep = stability(sys.A)
    if rep.margin >= STABILITY_MARGIN_TOL:
        raise UnstableSystemError(f"margin {rep.margin:.3e}")
    N = sys.N
    Q = QUADRATURE_ROTATION

    def integrand(omega: float) -> np.ndarray:
        MD = _resolvent(sys, omega)
        MDm = _resolvent(sys, -omega)
        C = Q @ (MD @ N @ MDm.T) @ Q.T
        return _hermitian_part(C).real / (2.0 * math.pi)

    pts, window = _peak_breakpoints(sys, ())
    res = real_line_quad(integrand, pts, window, tol=tol, rel_tol=rel_tol,
                         max_intervals=max_intervals)
    V = 0.5 * (res.value + res.value.T)
    return V, res.error


def filtered_cm_zero_bandwidth(sys: LinearSystem, Omega2: float = 0.0,
                               Omega3: float = 0.0) -> np.ndarray:
    """Analytic zero-bandwidth limit of the filtered-output optical CM.

    As 1/tau -> 0 each |F|^2/2pi concentrates into a delta at its center, a
    product of two filter factors survives only when their centers coincide
    (exact comparison of the +/-Omega_j center list), and the optical-
    microwave cross correlations vanish.  The 4x4 optical CM is assembled
    from the bare transfer rows evaluated at the filter centers; no
    frequency integration is involved.
    """
    rep = stability(sys.A)
    if rep.margin >= STABILITY_MARGIN_TOL:
        raise UnstableSystemError(f"margin {rep.margin:.3e}")
    centers = np.array([Omega2, -Omega2, Omega3, -Omega3])
    N = sys.N
    rows = {c: _bare_transfer(sys, c) for c in np.unique(centers)}
    C = np.zeros((4, 4), dtype=complex)
    for k in range(4):
        Wk = rows[centers[k]]
        for l in range(4):
            if centers[k] + centers[l] == 0.0:
                C[k, l] = Wk[k, :] @ N @ rows[centers[l]][l, :]
    Q4 = QUADRATURE_ROTATION[:4, :4]
    V = _hermitian_part(Q4 @ C @ Q4.T).real
    return 0.5 * (V + V.T)


def extract_optical_blocks(V) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """(Va2, Va3, Va23) blocks of the optical 4x4 CM (input 4x4 or 6x6)."""
    V = np.asarray(V, dtype=float)
    if V.shape not in ((4, 4), (6, 6)):
        raise DomainError(f"expected 4x4 or 6x6 CM, got {V.shape}")
    V4 = V[:4, :4]
    return V4[:2, :2].copy(), V4[2:, 2:].copy(), V4[:2, 2:].copy()

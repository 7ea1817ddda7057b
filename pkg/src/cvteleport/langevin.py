"""Six-operator linear Langevin system: drift / input / diffusion matrices,
stability, the Bogolyubov reparametrisation, and the Lyapunov steady state.

Operator ordering is fixed as R = (a2, a2^dag, a3, a3^dag, b, b^dag):
rows 2k+1 are the conjugates of rows 2k with daggered/undaggered columns
swapped.  All rates are dimensionless (units of the microwave frequency).
"""

from __future__ import annotations

from dataclasses import dataclass
from math import atanh, sqrt

import numpy as np
from scipy import linalg

from .errors import DomainError, EigenSolveError, SolveError, UnstableSystemError

#: stability margin must lie below this before any steady-state computation
STABILITY_MARGIN_TOL = -1e-9

# single-mode quadrature rotation (a, a^dag) -> (X, Y)
_QJ = np.array([[1.0, 1.0], [-1.0j, 1.0j]]) / np.sqrt(2.0)

#: block-diagonal quadrature rotation for the three modes
QUADRATURE_ROTATION = np.kron(np.eye(3), _QJ)


@dataclass(frozen=True)
class DynamicsParams:
    """Effective couplings, decay rates and microwave occupation, all in
    units of the microwave frequency."""

    G2: float
    G3: float
    gamma2: float
    gamma3: float
    gamma_m: float
    n_m: float

    def __post_init__(self) -> None:
        for name in ("G2", "G3", "gamma2", "gamma3", "gamma_m", "n_m"):
            if getattr(self, name) < 0:
                raise DomainError(f"{name} must be non-negative, got {getattr(self, name)}")


@dataclass(frozen=True)
class StabilityReport:
    stable: bool
    margin: float
    eigenvalues: tuple[complex, ...]


def drift_matrix(p: DynamicsParams) -> np.ndarray:
    """Drift matrix A of dR/dt = A R + D R_in.

    Encodes da2/dt = -gamma2 a2 - i G2 b, da3/dt = -gamma3 a3 - i G3 b^dag,
    db/dt = -gamma_m b - i G2 a2 - i G3 a3^dag, plus conjugate rows.
    """
    A = np.zeros((6, 6), dtype=complex)
    A[0, 0] = -p.gamma2
    A[0, 4] = -1j * p.G2
    A[1, 1] = -p.gamma2
    A[1, 5] = 1j * p.G2
    A[2, 2] = -p.gamma3
    A[2, 5] = -1j * p.G3
    A[3, 3] = -p.gamma3
    A[3, 4] = 1j * p.G3
    A[4, 4] = -p.gamma_m
    A[4, 0] = -1j * p.G2
    A[4, 3] = -1j * p.G3
    A[5, 5] = -p.gamma_m
    A[5, 1] = 1j * p.G2
    A[5, 2] = 1j * p.G3
    return A


def input_matrix(p: DynamicsParams) -> np.ndarray:
    """Diagonal input-coupling matrix diag(sqrt(2*gamma_j)) per operator row."""
    return np.diag([sqrt(2.0 * p.gamma2)] * 2 +
                   [sqrt(2.0 * p.gamma3)] * 2 +
                   [sqrt(2.0 * p.gamma_m)] * 2)


def diffusion_matrix(p: DynamicsParams) -> np.ndarray:
    """One-sided noise correlations <R_in,k R_in,l>: optical blocks have a
    single 1 in the (1,2) slot (n_opt ~ 0); the microwave block carries
    (n_m + 1) above and n_m below the diagonal."""
    N = np.zeros((6, 6), dtype=complex)
    N[0, 1] = 1.0
    N[2, 3] = 1.0
    N[4, 5] = p.n_m + 1.0
    N[5, 4] = p.n_m
    return N


def symmetrized_diffusion(p: DynamicsParams) -> np.ndarray:
    """(N + N^T)/2: the classical-equivalent noise covariance used by the
    Lyapunov and Monte-Carlo routes (the CM is built from symmetrised
    moments)."""
    N = diffusion_matrix(p)
    return 0.5 * (N + N.T)


@dataclass(frozen=True)
class LinearSystem:
    A: np.ndarray
    Din: np.ndarray
    N: np.ndarray
    params: DynamicsParams

    @classmethod
    def from_params(cls, p: DynamicsParams) -> "LinearSystem":
        return cls(drift_matrix(p), input_matrix(p), diffusion_matrix(p), p)


def quadrature_drift(A: np.ndarray) -> np.ndarray:
    """Drift matrix in the real quadrature basis x = Q R (exactly real for
    the paired-row structure produced by :func:`drift_matrix`)."""
    Q = QUADRATURE_ROTATION
    Ax = Q @ A @ Q.conj().T
    if np.abs(Ax.imag).max() > 1e-12:
        raise SolveError("drift matrix lacks the conjugate-pair structure")
    return Ax.real


def quadrature_noise_covariance(p: DynamicsParams) -> np.ndarray:
    """Q N_sym Q^T: diagonal (1/2, 1/2, 1/2, 1/2, n_m + 1/2, n_m + 1/2)."""
    return np.diag([0.5] * 4 + [p.n_m + 0.5] * 2)


def stability(A: np.ndarray) -> StabilityReport:
    """Eigenvalue stability report: stable iff max Re(eig(A)) < 0."""
    try:
        ev = np.linalg.eigvals(np.asarray(A, dtype=complex))
    except np.linalg.LinAlgError as exc:
        raise EigenSolveError(str(exc)) from exc
    order = np.lexsort((ev.imag, ev.real))
    ev = ev[order]
    margin = float(ev.real.max())
    return StabilityReport(stable=margin < 0.0, margin=margin, eigenvalues=tuple(ev))


def _require_stable(A: np.ndarray) -> StabilityReport:
    rep = stability(A)
    if rep.margin >= STABILITY_MARGIN_TOL:
        raise UnstableSystemError(
            f"stability margin {rep.margin:.3e} >= {STABILITY_MARGIN_TOL}")
    return rep


def lyapunov_steady_state(sys: LinearSystem) -> np.ndarray:
    """Steady-state symmetrised second moments M = <R R^T>_sym solving
    A M + M A^T + Din N_sym Din^T = 0.

    Solved in the real quadrature basis (where the Lyapunov equation has the
    standard real-symmetric form) and rotated back; the residual of the
    stated complex equation is verified to < 1e-10 * ||M||.
    """
    _require_stable(sys.A)
    Ax = quadrature_drift(sys.A)
    Qn = sys.Din @ quadrature_noise_covariance(sys.params) @ sys.Din.T
    try:
        Vx = linalg.solve_continuous_lyapunov(Ax, -Qn)
    except (linalg.LinAlgError, ValueError) as exc:
        raise SolveError(str(exc)) from exc
    Vx = 0.5 * (Vx + Vx.T)
    Q = QUADRATURE_ROTATION
    M = Q.conj().T @ Vx @ Q.conj()
    n_sym = symmetrized_diffusion(sys.params)
    resid = sys.A @ M + M @ sys.A.T + sys.Din @ n_sym @ sys.Din.T
    norm = np.linalg.norm(M)
    if np.linalg.norm(resid) > 1e-10 * max(norm, 1.0):
        raise SolveError(f"Lyapunov residual {np.linalg.norm(resid):.3e} too large")
    return M


def moments_to_quadrature_cm(M: np.ndarray) -> np.ndarray:
    """Real symmetric quadrature CM from operator-ordered moments."""
    Q = QUADRATURE_ROTATION
    V = Q @ M @ Q.T
    V = 0.5 * (V + V.conj().T)
    return 0.5 * (V.real + V.real.T)


def intracavity_quadrature_cm(sys: LinearSystem) -> np.ndarray:
    """Quadrature-form steady-state intracavity CM from the Lyapunov solve."""
    return moments_to_quadrature_cm(lyapunov_steady_state(sys))


def bogolyubov(G2: float, G3: float) -> tuple[float, float]:
    """Collective coupling G = sqrt(G2^2 - G3^2) and squeezing parameter
    r = atanh(G3/G2) of the Bogolyubov form; requires G2 > G3 >= 0."""
    if G3 < 0 or G2 <= G3:
        raise DomainError(f"Bogolyubov form requires G2 > G3 >= 0, got G2={G2}, G3={G3}")
    return sqrt(G2 * G2 - G3 * G3), atanh(G3 / G2)

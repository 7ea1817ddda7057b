"""Entanglement and teleportation metrics for two-mode Gaussian states.

Quadrature convention: X = (a + a^dag)/sqrt(2), Y = (a - a^dag)/(i*sqrt(2)),
so each vacuum quadrature has variance 1/2 and a covariance matrix V is
physical iff V + (i/2)*J >= 0 with J the symplectic form.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy import integrate

from .constants import CONSTANTS, PhysicalConstants
from .errors import (
    DomainError,
    EigenSolveError,
    NonPhysicalCMError,
    NonPositiveGammaError,
    QuadratureError,
)

_Z = np.diag([1.0, -1.0])


def symplectic_form(n_modes: int) -> np.ndarray:
    """Block-diagonal J with [[0, 1], [-1, 0]] per mode, (X1,Y1,X2,Y2,...) order."""
    j2 = np.array([[0.0, 1.0], [-1.0, 0.0]])
    return np.kron(np.eye(n_modes), j2)


def physicality_margin(V: np.ndarray) -> float:
    """Smallest eigenvalue of V + (i/2)J; >= 0 (up to roundoff) for a state."""
    n = V.shape[0] // 2
    H = V + 0.5j * symplectic_form(n)
    return float(np.linalg.eigvalsh(H).min())


def is_physical_cm(V: np.ndarray, tol: float = -1e-9) -> bool:
    if np.abs(V - V.T).max() > 1e-10:
        return False
    return physicality_margin(V) >= tol


def thermal_occupation(omega: float, T: float) -> float:
    """Mean occupation 1/(exp(hbar*omega/k_B*T) - 1) of a mode at temperature T.

    Returns 0 at T = 0 and whenever hbar*omega/(k_B*T) > 700 (exp underflow).
    """
    if omega <= 0:
        raise DomainError(f"omega must be positive, got {omega}")
    if T < 0:
        raise DomainError(f"T must be non-negative, got {T}")
    if T == 0.0:
        return 0.0
    x = CONSTANTS.hbar * omega / (CONSTANTS.k_B * T)
    if x > 700.0:
        return 0.0
    return 1.0 / math.expm1(x)


@dataclass(eq=False)
class TwoModeCM:
    """Two-mode covariance matrix in the block form [[Va2, Va23], [Va23^T, Va3]]."""

    Va2: np.ndarray
    Va3: np.ndarray
    Va23: np.ndarray

    @classmethod
    def from_matrix(cls, V4: np.ndarray) -> "TwoModeCM":
        V4 = np.asarray(V4, dtype=float)
        if V4.shape != (4, 4):
            raise DomainError(f"expected a 4x4 matrix, got shape {V4.shape}")
        return cls(V4[:2, :2].copy(), V4[2:, 2:].copy(), V4[:2, 2:].copy())

    @property
    def matrix(self) -> np.ndarray:
        V = np.zeros((4, 4))
        V[:2, :2] = self.Va2
        V[2:, 2:] = self.Va3
        V[:2, 2:] = self.Va23
        V[2:, :2] = self.Va23.T
        return V


def _as_blocks(cm) -> TwoModeCM:
    if isinstance(cm, TwoModeCM):
        return cm
    return TwoModeCM.from_matrix(np.asarray(cm))


@dataclass(frozen=True)
class MetricsResult:
    E_N: float
    eta_minus: float
    F: float
    F_opt: float
    stable: bool = True


def log_negativity(cm) -> tuple[float, float]:
    """Logarithmic negativity E_N = max(0, -ln 2*eta) and the smallest
    partial-transpose symplectic eigenvalue eta of a two-mode CM.

    eta^2 = (Sig - sqrt(Sig^2 - 4 det V)) / 2 with
    Sig = det Va2 + det Va3 - 2 det Va23 is evaluated in the rationalised
    form 2 det V / (Sig + sqrt(...)) to survive the near-singular CMs that
    occur at the instability boundary.  Roundoff-negative square-root
    arguments are clamped at zero only within -1e-12 (absolute, scaled).
    """
    b = _as_blocks(cm)
    V4 = b.matrix
    sig = np.linalg.det(b.Va2) + np.linalg.det(b.Va3) - 2.0 * np.linalg.det(b.Va23)
    det4 = np.linalg.det(V4)
    inner = sig * sig - 4.0 * det4
    scale = max(1.0, sig * sig)
    if inner < -1e-9 * scale:
        raise NonPhysicalCMError(f"Sig^2 - 4 det V = {inner} < 0 beyond tolerance")
    inner = max(inner, 0.0)
    denom = sig + math.sqrt(inner)
    if denom <= 0:
        raise NonPhysicalCMError(f"non-positive symplectic invariant Sig={sig}")
    eta_sq = 2.0 * det4 / denom
    if eta_sq < -1e-12:
        raise NonPhysicalCMError(f"eta^2 = {eta_sq} is not real-positive")
    eta = math.sqrt(max(eta_sq, 0.0))
    if eta == 0.0:
        return math.inf, 0.0
    return max(0.0, -math.log(2.0 * eta)), eta


def symplectic_eigenvalues(V4: np.ndarray, partial_transpose: bool = False) -> tuple[float, float]:
    """Symplectic spectrum of a two-mode CM via |eig(iJV)|, as an independent
    route to the closed form used by :func:`log_negativity`.

    With ``partial_transpose`` the momentum sign of the second mode is
    flipped first, so the smaller returned value equals eta_minus.
    """
    V4 = np.asarray(V4, dtype=float)
    if np.abs(V4 - V4.T).max() > 1e-10:
        raise NonPhysicalCMError("covariance matrix is not symmetric")
    if partial_transpose:
        P = np.diag([1.0, 1.0, 1.0, -1.0])
        V4 = P @ V4 @ P
    J = symplectic_form(2)
    try:
        ev = np.linalg.eigvals(1j * J @ V4)
    except np.linalg.LinAlgError as exc:
        raise EigenSolveError(str(exc)) from exc
    vals = np.sort(np.abs(ev))
    # each symplectic value appears twice (+/- pair); average the pairs
    return float(0.5 * (vals[0] + vals[1])), float(0.5 * (vals[2] + vals[3]))


def teleportation_fidelity(cm) -> float:
    """Fidelity of unit-gain coherent-state teleportation over the channel CM.

    F = 1/sqrt(det Gamma) with
    Gamma = 2 V_in + Z Va2 Z + Va3 - Z Va23 - Va23^T Z,  Z = diag(1, -1),
    V_in = I/2 for the coherent input.
    """
    b = _as_blocks(cm)
    gamma = np.eye(2) + _Z @ b.Va2 @ _Z + b.Va3 - _Z @ b.Va23 - b.Va23.T @ _Z
    det = np.linalg.det(gamma)
    if det <= 0:
        raise NonPositiveGammaError(f"det Gamma = {det} <= 0")
    return float(1.0 / math.sqrt(det))


def fidelity_quadrature(cm, abs_tol: float = 1e-8, half_width: float | None = None) -> float:
    """Teleportation fidelity from the characteristic-function integral,

        F = (1/pi) * Int |chi_in(alpha)|^2 [chi_ch(alpha*, alpha)]^* d^2 alpha,

    evaluated by 2-D numerical quadrature over the phase plane.  Gaussian
    characteristic functions chi(Lam) = exp(-Lam^T V Lam / 2) are used with
    Lam = sqrt(2) * (Im a, -Re a); the sign of the conjugated slot is fixed
    so the vacuum channel integrates to 1/2 and ideal two-mode squeezing
    reproduces 1/(1 + e^{-2s}) (checked in the test suite).  Serves as an
    independent oracle for :func:`teleportation_fidelity`.
    """
    b = _as_blocks(cm)
    V4 = b.matrix
    if not is_physical_cm(V4):
        raise NonPhysicalCMError("channel CM is not physical")
    V_in = 0.5 * np.eye(2)

    def chi_in(lam: np.ndarray) -> float:
        return math.exp(-0.5 * lam @ V_in @ lam)

    def chi_ch(lam4: np.ndarray) -> float:
        return math.exp(-0.5 * lam4 @ V4 @ lam4)

    def integrand(re: float, im: float) -> float:
        abar = np.array([im, -re])
        slot2 = np.array([-im, -re])          # sqrt(2)-scaled vec of alpha*
        lam4 = math.sqrt(2.0) * np.concatenate([slot2, abar])
        return chi_in(math.sqrt(2.0) * abar) ** 2 * chi_ch(lam4)

    if half_width is None:
        gamma = np.eye(2) + _Z @ b.Va2 @ _Z + b.Va3 - _Z @ b.Va23 - b.Va23.T @ _Z
        lam_min = np.linalg.eigvalsh(0.5 * (gamma + gamma.T)).min()
        if lam_min <= 0:
            raise NonPositiveGammaError("integrand is not integrable (Gamma not PD)")
        half_width = max(8.0 / math.sqrt(lam_min), 6.0)
    val, err = integrate.dblquad(
        integrand, -half_width, half_width, -half_width, half_width,
        epsabs=abs_tol, epsrel=1e-10,
    )
    if err > 100 * max(abs_tol, 1e-12):
        raise QuadratureError(f"phase-plane integral error estimate {err} too large")
    return float(val / math.pi)


def fidelity_upper_bound(E_N: float) -> float:
    """Entanglement-limited fidelity bound F_opt = 1/(1 + exp(-E_N))."""
    if E_N < 0:
        raise DomainError(f"E_N must be non-negative, got {E_N}")
    return 1.0 / (1.0 + math.exp(-E_N))


def flip_mode_phase(V4: np.ndarray, mode: int = 1) -> np.ndarray:
    """CM after a pi phase rotation (X, Y -> -X, -Y) of one mode.

    A local-oscillator phase choice: leaves E_N invariant and maps the
    (X2+X3, Y2-Y3)-squeezed correlations this device produces onto the
    (X2-X3, Y2+Y3) sign convention assumed by the unit-gain fidelity formula.
    """
    r = np.ones(4)
    r[2 * mode:2 * mode + 2] = -1.0
    R = np.diag(r)
    return R @ np.asarray(V4, dtype=float) @ R


def tmsv_cm(s: float) -> np.ndarray:
    """Two-mode squeezed vacuum CM with squeezing parameter s."""
    c = 0.5 * math.cosh(2.0 * s)
    d = 0.5 * math.sinh(2.0 * s)
    V = np.diag([c, c, c, c])
    V[0, 2] = V[2, 0] = d
    V[1, 3] = V[3, 1] = -d
    return V


def random_symplectic(rng: np.random.Generator, max_squeeze: float = 1.0) -> np.ndarray:
    """Random two-mode symplectic: rotations, a beam splitter, and squeezers."""

    def rot(theta: float) -> np.ndarray:
        return np.array([[math.cos(theta), math.sin(theta)],
                         [-math.sin(theta), math.cos(theta)]])

    def local(th1: float, th2: float) -> np.ndarray:
        M = np.zeros((4, 4))
        M[:2, :2] = rot(th1)
        M[2:, 2:] = rot(th2)
        return M

    phi = rng.uniform(0.0, 2.0 * math.pi)
    bs = np.zeros((4, 4))
    bs[:2, :2] = math.cos(phi) * np.eye(2)
    bs[2:, 2:] = math.cos(phi) * np.eye(2)
    bs[:2, 2:] = math.sin(phi) * np.eye(2)
    bs[2:, :2] = -math.sin(phi) * np.eye(2)
    r1, r2 = rng.uniform(-max_squeeze, max_squeeze, size=2)
    sq = np.diag([math.exp(r1), math.exp(-r1), math.exp(r2), math.exp(-r2)])
    t = rng.uniform(0.0, 2.0 * math.pi, size=4)
    return local(t[0], t[1]) @ bs @ sq @ local(t[2], t[3])


def random_physical_cm(rng: np.random.Generator, max_squeeze: float = 1.0,
                       max_thermal: float = 3.0) -> np.ndarray:
    """Random physical two-mode CM, V = S diag(nu) S^T with nu_i >= 1/2."""
    nu = 0.5 + rng.uniform(0.0, max_thermal, size=2)
    D = np.diag([nu[0], nu[0], nu[1], nu[1]])
    S = random_symplectic(rng, max_squeeze)
    V = S @ D @ S.T
    return 0.5 * (V + V.T)

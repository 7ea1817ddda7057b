"""Stochastic time-domain oracle for the stationary covariance matrices.

The linear Langevin system is simulated in the real quadrature basis, where
the symmetrised quantum noise correlations map onto ordinary white noise
with per-quadrature intensities (1/2, 1/2, n_m + 1/2).  The causal output
filters are realised as auxiliary state variables obeying

    d a_F/dt = -(1/tau + i Omega) a_F + sqrt(2/tau) (sqrt(2 gamma) a - a_in),

i.e. the convolution with F(t) integrated alongside the system, which keeps
the filtered mode exactly causal and lets the whole augmented system use the
bias-free exact-exponential update: per step, x -> E x + eta with
E = expm(A dt) and eta drawn from the exact integrated-noise covariance
(Van Loan block-matrix construction).  Trajectories are grouped into blocks
seeded as (seed, block index), so results are reproducible regardless of
how blocks are scheduled; accumulation is pairwise and order-independent.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import sqrt

import numpy as np
from scipy.linalg import expm

from .errors import DomainError, StepSizeError, UnstableSystemError
from .langevin import (
    DynamicsParams,
    STABILITY_MARGIN_TOL,
    drift_matrix,
    input_matrix,
    quadrature_drift,
    quadrature_noise_covariance,
    stability,
)
from .spectra import FilterSpec

_BLOCK = 500


@dataclass(frozen=True)
class MonteCarloResult:
    cm: np.ndarray          # symmetrised quadrature CM estimate
    stderr: np.ndarray      # per-entry standard error of the estimate
    n_traj: int
    t_end: float
    dt: float


def _van_loan_step(Ax: np.ndarray, noise_cov: np.ndarray, dt: float):
    """Exact one-step propagator E = expm(Ax dt) and integrated-noise
    covariance C = Int_0^dt expm(Ax s) noise_cov expm(Ax^T s) ds."""
    n = Ax.shape[0]
    H = np.zeros((2 * n, 2 * n))
    H[:n, :n] = Ax
    H[:n, n:] = noise_cov
    H[n:, n:] = -Ax.T
    EH = expm(H * dt)
    E = EH[:n, :n]
    C = EH[:n, n:] @ E.T
    C = 0.5 * (C + C.T)
    w, U = np.linalg.eigh(C)
    L = U * np.sqrt(np.clip(w, 0.0, None))
    return E, L


def _augmented(p: DynamicsParams, filters: tuple[FilterSpec, FilterSpec]):
    """Quadrature drift/noise-input matrices of the system plus the two
    filter modes; returns (A_aug, B_aug, Sigma_x, output_index)."""
    Ax = quadrature_drift(drift_matrix(p))
    Sx = quadrature_noise_covariance(p)
    D = input_matrix(p)
    A = np.zeros((10, 10))
    A[:6, :6] = Ax
    B = np.zeros((10, 6))
    B[:6, :6] = D
    for i, (f, gamma, col) in enumerate(
            ((filters[0], p.gamma2, 0), (filters[1], p.gamma3, 2))):
        r = 6 + 2 * i
        A[r, r] = -1.0 / f.tau
        A[r, r + 1] = f.Omega
        A[r + 1, r] = -f.Omega
        A[r + 1, r + 1] = -1.0 / f.tau
        k = sqrt(2.0 / f.tau)
        A[r, col] = k * sqrt(2.0 * gamma)
        A[r + 1, col + 1] = k * sqrt(2.0 * gamma)
        B[r, col] = -k
        B[r + 1, col + 1] = -k
    # (Xf2, Yf2, Xf3, Yf3, Xb, Yb)
    out_idx = np.array([6, 7, 8, 9, 4, 5])
    return A, B, Sx, out_idx


def _run(A: np.ndarray, B: np.ndarray, Sx: np.ndarray, out_idx: np.ndarray,
         seed: int, n_traj: int, t_end: float | None, dt: float | None):
    margin = stability(A).margin
    if margin >= STABILITY_MARGIN_TOL:
        raise UnstableSystemError(f"augmented stability margin {margin:.3e}")
    speed = float(np.abs(np.linalg.eigvals(A)).max())
    if dt is None:
        dt = 0.04 / speed
    elif dt * speed >= 0.05:
        raise StepSizeError(f"dt*max|eig| = {dt * speed:.3f} >= 0.05")
    if t_end is None:
        t_end = 4.0 / abs(margin)
    steps = int(np.ceil(t_end / dt))

    E, L = _van_loan_step(A, B @ Sx @ B.T, dt)
    dim = A.shape[0]
    samples = np.empty((n_traj, out_idx.size))
    start = 0
    block_idx = 0
    while start < n_traj:
        m = min(_BLOCK, n_traj - start)
        rng = np.random.default_rng([seed, block_idx])
        x = np.zeros((m, dim))
        for _ in range(steps):
            x = x @ E.T + rng.standard_normal((m, dim)) @ L.T
        samples[start:start + m] = x[:, out_idx]
        start += m
        block_idx += 1

    prods = samples[:, :, None] * samples[:, None, :]
    cm = prods.mean(axis=0)
    cm = 0.5 * (cm + cm.T)
    stderr = prods.std(axis=0, ddof=1) / sqrt(n_traj)
    return MonteCarloResult(cm=cm, stderr=0.5 * (stderr + stderr.T),
                            n_traj=n_traj, t_end=steps * dt, dt=dt)


def monte_carlo_filtered_cm(p: DynamicsParams,
                            filters: tuple[FilterSpec, FilterSpec],
                            seed: int, n_traj: int,
                            t_end: float | None = None,
                            dt: float | None = None) -> MonteCarloResult:
    """Monte-Carlo estimate of the 6x6 filtered-output CM (filtered optical
    modes 2 and 3, intracavity microwave), with per-entry standard errors.

    Each trajectory contributes one sample of the joint quadrature vector at
    t_end; t_end defaults to 4 relaxation times of the augmented system.
    Deterministic for a fixed seed.
    """
    if filters[0].zero_bandwidth or filters[1].zero_bandwidth:
        raise DomainError("Monte-Carlo oracle needs finite-bandwidth filters")
    A, B, Sx, out_idx = _augmented(p, filters)
    return _run(A, B, Sx, out_idx, seed, n_traj, t_end, dt)


def monte_carlo_intracavity_cm(p: DynamicsParams, seed: int, n_traj: int,
                               t_end: float | None = None,
                               dt: float | None = None) -> MonteCarloResult:
    """Monte-Carlo estimate of the 6x6 intracavity quadrature CM."""
    A = quadrature_drift(drift_matrix(p))
    B = input_matrix(p)
    Sx = quadrature_noise_covariance(p)
    return _run(A, B, Sx, np.arange(6), seed, n_traj, t_end, dt)

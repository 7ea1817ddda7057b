"""Oracle-equivalence battery behind the ``validate`` CLI subcommand.

Each check pits two independent routes to the same quantity against each
other (closed form vs numerical quadrature, Lyapunov vs frequency integral
vs stochastic simulation, analytic derivative vs finite differences) and
reports one pass/fail line.  The filter-center dependence of the
zero-bandwidth entanglement is *reported*, not asserted: common shifts of
both filter centers and opposite shifts behave differently and the table
shows the measured values.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .graphene import (
    GrapheneConfig,
    chemical_potential,
    chemical_potential_exact,
    conductivity,
    conductivity_bias_derivative,
    spp_dispersion,
)
from .langevin import (
    DynamicsParams,
    LinearSystem,
    drift_matrix,
    intracavity_quadrature_cm,
    stability,
)
from .metrics import (
    fidelity_quadrature,
    fidelity_upper_bound,
    flip_mode_phase,
    log_negativity,
    random_physical_cm,
    symplectic_eigenvalues,
    teleportation_fidelity,
    tmsv_cm,
)
from .montecarlo import monte_carlo_filtered_cm
from .spectra import (
    FilterSpec,
    filtered_cm_zero_bandwidth,
    filtered_output_cm,
    intracavity_cm_frequency,
)

HEADLINE = DynamicsParams(G2=0.22, G3=0.2, gamma2=0.001, gamma3=0.001,
                          gamma_m=0.02, n_m=10.0)


@dataclass(frozen=True)
class CheckResult:
    name: str
    passed: bool
    detail: str


def random_stable_params(rng: np.random.Generator) -> DynamicsParams:
    """Draw dynamics parameters with a comfortable stability margin."""
    while True:
        p = DynamicsParams(
            G2=rng.uniform(0.05, 0.4),
            G3=rng.uniform(0.0, 0.35),
            gamma2=rng.uniform(0.02, 0.1),
            gamma3=rng.uniform(0.02, 0.1),
            gamma_m=rng.uniform(0.05, 0.2),
            n_m=rng.uniform(0.0, 5.0),
        )
        if stability(drift_matrix(p)).margin < -0.02:
            return p


def check_vacuum_normalization() -> CheckResult:
    p = DynamicsParams(G2=0.0, G3=0.0, gamma2=0.001, gamma3=0.001,
                       gamma_m=0.02, n_m=10.0)
    sys = LinearSystem.from_params(p)
    V_zb = filtered_cm_zero_bandwidth(sys)
    V_fin, _ = filtered_output_cm(
        sys, (FilterSpec(0.0, 200.0), FilterSpec(0.0, 200.0)))
    d1 = np.abs(V_zb - 0.5 * np.eye(4)).max()
    d2 = np.abs(V_fin[:4, :4] - 0.5 * np.eye(4)).max()
    ok = d1 < 1e-6 and d2 < 1e-6
    return CheckResult("vacuum normalization", ok,
                       f"zero-bw dev {d1:.2e}, finite-tau dev {d2:.2e}")


def check_tmsv_exactness() -> CheckResult:
    worst = 0.0
    for s in (0.1, 0.5 * math.log(2.0), 1.0, 2.0):
        V = tmsv_cm(s)
        E_N, eta = log_negativity(V)
        F = teleportation_fidelity(V)
        worst = max(worst,
                    abs(E_N - 2.0 * s),
                    abs(eta - 0.5 * math.exp(-2.0 * s)),
                    abs(F - 1.0 / (1.0 + math.exp(-2.0 * s))),
                    abs(F - fidelity_upper_bound(E_N)))
    return CheckResult("TMSV exactness", worst < 1e-10, f"max dev {worst:.2e}")


def check_symplectic_oracle(rng: np.random.Generator, n: int = 200) -> CheckResult:
    worst = 0.0
    for _ in range(n):
        V = random_physical_cm(rng)
        _, eta = log_negativity(V)
        eta_lo, _ = symplectic_eigenvalues(V, partial_transpose=True)
        worst = max(worst, abs(eta - eta_lo))
    return CheckResult(f"eta_minus closed form vs eig(iJV), {n} draws",
                       worst < 1e-10, f"max dev {worst:.2e}")


def check_fidelity_oracle(rng: np.random.Generator, n: int = 20) -> CheckResult:
    worst = 0.0
    for _ in range(n):
        V = random_physical_cm(rng, max_squeeze=0.8, max_thermal=2.0)
        worst = max(worst, abs(teleportation_fidelity(V) - fidelity_quadrature(V)))
    return CheckResult(f"fidelity closed form vs phase-plane integral, {n} draws",
                       worst < 1e-4, f"max dev {worst:.2e}")


def check_lyapunov_vs_frequency(rng: np.random.Generator, n: int = 3) -> CheckResult:
    worst = 0.0
    for _ in range(n):
        p = random_stable_params(rng)
        sys = LinearSystem.from_params(p)
        V_l = intracavity_quadrature_cm(sys)
        V_f, _ = intracavity_cm_frequency(sys)
        worst = max(worst, float(np.abs(V_l - V_f).max()))
    return CheckResult(f"Lyapunov vs frequency-integrated intracavity CM, {n} draws",
                       worst < 1e-6, f"max dev {worst:.2e}")


def check_montecarlo(seed: int, n_traj: int = 2000) -> CheckResult:
    rng = np.random.default_rng(seed)
    p = random_stable_params(rng)
    filters = (FilterSpec(0.0, 200.0), FilterSpec(0.0, 200.0))
    sys = LinearSystem.from_params(p)
    V, _ = filtered_output_cm(sys, filters)
    mc = monte_carlo_filtered_cm(p, filters, seed=seed, n_traj=n_traj)
    dev = np.abs(mc.cm - V) / np.maximum(3.0 * mc.stderr, 1e-12)
    worst = float(dev.max())
    return CheckResult(f"filtered CM vs Monte-Carlo ({n_traj} trajectories)",
                       worst <= 1.0, f"max |dev|/3SE = {worst:.2f}")


def check_graphene_linearization() -> CheckResult:
    cfg = GrapheneConfig()
    omega = 2.0 * math.pi * 193e12
    analytic = conductivity_bias_derivative(omega, cfg)

    def zeta_of(v: float) -> complex:
        return conductivity(omega, chemical_potential_exact(v, cfg), cfg.tau_s, cfg.T)

    h = 1e-3
    d1 = (zeta_of(h) - zeta_of(-h)) / (2.0 * h)
    d2 = (zeta_of(h / 2) - zeta_of(-h / 2)) / h
    richardson = (4.0 * d2 - d1) / 3.0
    rel = abs(richardson - analytic) / abs(analytic)
    return CheckResult("conductivity linearisation vs finite differences",
                       rel < 1e-3, f"relative dev {rel:.2e}")


def check_dispersion_branches(rng: np.random.Generator, n: int = 200) -> CheckResult:
    cfg = GrapheneConfig()
    mu_p, _ = chemical_potential(cfg)
    bad = 0
    for _ in range(n):
        omega = 2.0 * math.pi * rng.uniform(50e12, 400e12)
        zeta = complex(rng.uniform(1e-8, 1e-3), rng.uniform(-1e-3, 1e-3))
        try:
            beta, alpha = spp_dispersion(omega, zeta, cfg.eps_r)
        except Exception:
            bad += 1
            continue
        if beta.real < 0 or alpha.real <= 0:
            bad += 1
    return CheckResult(f"dispersion branch signs on {n} random conductivities",
                       bad == 0, f"{bad} violations")


def report_filter_center_dependence() -> CheckResult:
    """Zero-bandwidth E_N under common and opposite filter-center shifts.

    Informational: the delta-limit selection rule pairs the +Omega sideband
    of mode 2 with the -Omega sideband of mode 3, so E_N survives opposite
    shifts but collapses for common nonzero shifts.  Reported, not asserted.
    """
    sys = LinearSystem.from_params(HEADLINE)
    vals_common = []
    vals_opposite = []
    for om in (-0.5, 0.0, 0.5):
        vals_common.append(log_negativity(
            flip_mode_phase(filtered_cm_zero_bandwidth(sys, om, om)))[0])
        vals_opposite.append(log_negativity(
            flip_mode_phase(filtered_cm_zero_bandwidth(sys, om, -om)))[0])
    detail = ("common-shift E_N(-0.5,0,0.5) = "
              + ", ".join(f"{v:.4f}" for v in vals_common)
              + "; opposite-shift E_N = "
              + ", ".join(f"{v:.4f}" for v in vals_opposite))
    return CheckResult("filter-center dependence at zero bandwidth (report)",
                       True, detail)


def check_bound_adherence() -> CheckResult:
    sys_values = np.linspace(0.2, 0.35, 31)
    worst = -math.inf
    for g2 in sys_values:
        p = DynamicsParams(G2=float(g2), G3=0.2, gamma2=0.001, gamma3=0.001,
                           gamma_m=0.02, n_m=10.0)
        if not stability(drift_matrix(p)).stable:
            continue
        V = flip_mode_phase(filtered_cm_zero_bandwidth(LinearSystem.from_params(p)))
        E_N, _ = log_negativity(V)
        F = teleportation_fidelity(V)
        bound = fidelity_upper_bound(E_N) if math.isfinite(E_N) else 1.0
        worst = max(worst, F - bound)
    return CheckResult("F <= F_opt along the coupling sweep", worst <= 1e-9,
                       f"max F - F_opt = {worst:.2e}")


def run_validation(seed: int = 12345, fast: bool = False) -> list[CheckResult]:
    rng = np.random.default_rng(seed)
    checks = [
        check_vacuum_normalization(),
        check_tmsv_exactness(),
        check_symplectic_oracle(rng, 50 if fast else 200),
        check_fidelity_oracle(rng, 5 if fast else 20),
        check_lyapunov_vs_frequency(rng, 1 if fast else 3),
        check_graphene_linearization(),
        check_dispersion_branches(rng, 50 if fast else 200),
        check_bound_adherence(),
        report_filter_center_dependence(),
    ]
    if not fast:
        checks.append(check_montecarlo(seed))
    return checks


def format_validation(results: list[CheckResult]) -> str:
    width = max(len(r.name) for r in results)
    lines = []
    for r in results:
        status = "PASS" if r.passed else "FAIL"
        lines.append(f"[{status}] {r.name:<{width}}  {r.detail}")
    n_fail = sum(not r.passed for r in results)
    lines.append(f"{len(results) - n_fail}/{len(results)} checks passed")
    return "\n".join(lines)

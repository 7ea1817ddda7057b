"""Graphene conductivity, SPP dispersion, mode profiles and the
microwave-optical coupling rates they produce.

The sheet conductivity is

    zeta(w) = (i q^2 / 4 pi hbar) ln[(2 mu_c - hbar*Wc)/(2 mu_c + hbar*Wc)]
            + (i q^2 k_B T / pi hbar^2 Wc) * 2 ln(1 + exp(-mu_c / k_B T)),

with Wc = w/2pi + i/tau_s.  A microwave bias v modulates the chemical
potential, mu_c(v) = hbar V_f sqrt(pi n0) sqrt(1 + 2 C v / (q pi n0)) with
C = eps_r eps0 / d the capacitance per unit area, expanded to first order as
mu_c = mu' + v mu'' with mu' = hbar V_f sqrt(pi n0) and
mu'' = hbar V_f C / (q sqrt(pi n0)); the induced conductivity modulation
zeta'' then feeds the permittivity modulation of the waveguide and the
coupling rates g_j.

Branch discipline: the principal complex log/sqrt is used everywhere, with
explicit sign fixing so Re(beta) >= 0 and Re(alpha) >= 0.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

from .constants import CONSTANTS, PhysicalConstants
from .errors import (
    BranchPointError,
    DomainError,
    SingularModulationError,
    UnconfinedModeError,
)
from .langevin import DynamicsParams
from .metrics import thermal_occupation

#: exp(-x) treated as exactly 0 in thermal factors beyond this argument
_EXP_CUTOFF = 700.0


@dataclass(frozen=True)
class GrapheneConfig:
    """Material and geometry parameters of the graphene-loaded capacitor.

    Defaults are typical monolayer-graphene values: n0 = 1e16 1/m^2 doping,
    0.5 ps scattering time, Fermi velocity 1e6 m/s, 15 mK operation, a
    100 nm capacitor gap with eps_r = 4 dielectric, 100 um^2 plate area and
    10 um interaction length.  All overridable.
    """

    n0: float = 1e16          # electron density, 1/m^2
    tau_s: float = 0.5e-12    # scattering relaxation time, s
    V_f: float = 1e6          # Dirac fermion velocity, m/s
    T: float = 0.015          # temperature, K
    eps_r: float = 4.0        # capacitor dielectric constant
    d: float = 100e-9         # plate separation, m
    A_r: float = 100e-12      # plate area, m^2
    L: float = 10e-6          # interaction length, m
    exact_mu_derivative: bool = False

    def __post_init__(self) -> None:
        for name in ("n0", "tau_s", "V_f", "T", "eps_r", "d", "A_r", "L"):
            if getattr(self, name) <= 0:
                raise DomainError(f"{name} must be positive, got {getattr(self, name)}")

    def capacitance(self, constants: PhysicalConstants = CONSTANTS) -> float:
        """Capacitance per unit area, eps_r * eps0 / d."""
        return self.eps_r * constants.eps0 / self.d


@dataclass(frozen=True)
class PerturbedConductivity:
    zeta_p: complex       # static conductivity zeta', S
    zeta_pp: complex      # linear modulation coefficient zeta'', S/V


@dataclass(frozen=True)
class ModeProfile:
    """One SPP mode: frequency, propagation/decay constants and the profile
    coefficients K_x = beta, K_y = -i w eps eps0, K_z = alpha of the
    transverse field distributions D_i(x) = (i K_i / w eps eps0) e^{-+ alpha x}."""

    omega: float
    beta: complex
    alpha: complex
    K_x: complex
    K_y: complex
    K_z: complex
    eps_r: float

    def field(self, component: str, x: float,
              constants: PhysicalConstants = CONSTANTS) -> complex:
        """Transverse profile D_x, D_y or D_z at position x (sheet at x=0)."""
        K = {"x": self.K_x, "y": self.K_y, "z": self.K_z}[component]
        envelope = cmath.exp(self.alpha * x) if x < 0 else cmath.exp(-self.alpha * x)
        return 1j * K / (self.omega * self.eps_r * constants.eps0) * envelope

    def norm_integral(self, constants: PhysicalConstants = CONSTANTS) -> float:
        """Int (|D_x|^2 + |D_z|^2) dx in closed form (two-sided exponential)."""
        scale = (abs(self.K_x) ** 2 + abs(self.K_z) ** 2) / \
            (self.omega * self.eps_r * constants.eps0) ** 2
        return scale / self.alpha.real

    def hy_integral(self) -> float:
        """Int |D_y|^2 dx; D_y has unit amplitude so this is 1/Re(alpha)."""
        return 1.0 / self.alpha.real


def chemical_potential(cfg: GrapheneConfig,
                       constants: PhysicalConstants = CONSTANTS) -> tuple[float, float]:
    """First-order expansion (mu', mu'') of the chemical potential in the
    bias: mu' = hbar V_f sqrt(pi n0), mu'' = hbar V_f C / (q sqrt(pi n0)).

    With ``exact_mu_derivative`` set, mu'' is instead assembled as the
    analytic d(mu_c)/dv of the square-root form; the two agree identically.
    """
    root = math.sqrt(math.pi * cfg.n0)
    mu_p = constants.hbar * cfg.V_f * root
    C = cfg.capacitance(constants)
    if cfg.exact_mu_derivative:
        mu_pp = mu_p * C / (constants.q * math.pi * cfg.n0)
    else:
        mu_pp = constants.hbar * cfg.V_f * C / (constants.q * root)
    return mu_p, mu_pp


def chemical_potential_exact(v: float, cfg: GrapheneConfig,
                             constants: PhysicalConstants = CONSTANTS) -> float:
    """Unexpanded mu_c(v) = hbar V_f sqrt(pi n0) sqrt(1 + 2 C v / (q pi n0))."""
    C = cfg.capacitance(constants)
    arg = 1.0 + 2.0 * C * v / (constants.q * math.pi * cfg.n0)
    if arg < 0:
        raise DomainError(f"bias {v} V depletes the sheet")
    return constants.hbar * cfg.V_f * math.sqrt(math.pi * cfg.n0) * math.sqrt(arg)


def _w_complex(omega: float, tau_s: float) -> complex:
    """Wc = omega/2pi + i/tau_s."""
    return omega / (2.0 * math.pi) + 1j / tau_s


def conductivity(omega: float, mu_c: float, tau_s: float, T: float,
                 constants: PhysicalConstants = CONSTANTS) -> complex:
    """Sheet conductivity zeta(omega) at chemical potential mu_c (J)."""
    if omega <= 0 or tau_s <= 0 or T <= 0 or mu_c <= 0:
        raise DomainError("omega, tau_s, T and mu_c must all be positive")
    q, hbar, k_B = constants.q, constants.hbar, constants.k_B
    hw = hbar * _w_complex(omega, tau_s)
    num = 2.0 * mu_c - hw
    den = 2.0 * mu_c + hw
    if num == 0 or den == 0:
        raise BranchPointError(f"2 mu_c = |hbar Wc| at omega={omega}, mu_c={mu_c}")
    inter = 1j * q * q / (4.0 * math.pi * hbar) * cmath.log(num / den)
    x = mu_c / (k_B * T)
    if x > _EXP_CUTOFF:
        thermal_log = 0.0
    else:
        thermal_log = math.log1p(math.exp(-x))
    thermal = 1j * q * q * k_B * T / (math.pi * hbar * hbar * _w_complex(omega, tau_s)) \
        * 2.0 * thermal_log
    return inter + thermal


def zeta_pp_interband(omega: float, mu_p: float, mu_pp: float, tau_s: float,
                      constants: PhysicalConstants = CONSTANTS) -> complex:
    """Interband part of zeta'': i q^2 Wc mu'' / (pi [(2 mu')^2 - hbar^2 Wc^2]).

    This is the exact mu-derivative of the log term of zeta (the printed
    expression carries a spurious 1/hbar that would break the units)."""
    q, hbar = constants.q, constants.hbar
    wc = _w_complex(omega, tau_s)
    den = math.pi * ((2.0 * mu_p) ** 2 - (hbar * wc) ** 2)
    if den == 0:
        raise BranchPointError("pole of the interband derivative")
    return 1j * q * q * wc * mu_pp / den


def zeta_pp_thermal_printed(omega: float, mu_p: float, mu_pp: float, tau_s: float,
                            T: float,
                            constants: PhysicalConstants = CONSTANTS) -> complex:
    """Thermal part of zeta'' as printed (after its k_B T cancellation):
    i q^2 mu'' tanh(mu' / 2 k_B T) / Wc."""
    q, k_B = constants.q, constants.k_B
    return 1j * q * q * mu_pp * math.tanh(mu_p / (2.0 * k_B * T)) / \
        _w_complex(omega, tau_s)


def zeta_pp_thermal_exact(omega: float, mu_p: float, mu_pp: float, tau_s: float,
                          T: float,
                          constants: PhysicalConstants = CONSTANTS) -> complex:
    """Exact mu-derivative of the thermal term of zeta, times mu'':
    -(2 i q^2 / pi hbar^2 Wc) mu'' / (1 + exp(mu'/k_B T)); exponentially
    small for mu' >> k_B T and zero beyond the exp cutoff."""
    q, hbar, k_B = constants.q, constants.hbar, constants.k_B
    x = mu_p / (k_B * T)
    if x > _EXP_CUTOFF:
        return 0.0 + 0.0j
    occ = 1.0 / (1.0 + math.exp(x))
    return -2j * q * q * mu_pp * occ / (math.pi * hbar * hbar * _w_complex(omega, tau_s))


def conductivity_perturbation(omega: float, cfg: GrapheneConfig,
                              constants: PhysicalConstants = CONSTANTS
                              ) -> PerturbedConductivity:
    """Static conductivity zeta' and its linear bias modulation zeta''.

    zeta'' = interband derivative + thermal term; the thermal term follows
    the printed form unless ``exact_mu_derivative`` is set, in which case
    the exact derivative of the thermal log is used (the two coincide to
    machine precision at cryogenic mu'/k_B T).
    """
    mu_p, mu_pp = chemical_potential(cfg, constants)
    zeta_p = conductivity(omega, mu_p, cfg.tau_s, cfg.T, constants)
    zpp = zeta_pp_interband(omega, mu_p, mu_pp, cfg.tau_s, constants)
    if cfg.exact_mu_derivative:
        zpp += zeta_pp_thermal_exact(omega, mu_p, mu_pp, cfg.tau_s, cfg.T, constants)
    else:
        zpp += zeta_pp_thermal_printed(omega, mu_p, mu_pp, cfg.tau_s, cfg.T, constants)
    return PerturbedConductivity(zeta_p=zeta_p, zeta_pp=zpp)


def conductivity_bias_derivative(omega: float, cfg: GrapheneConfig,
                                 constants: PhysicalConstants = CONSTANTS) -> complex:
    """Exact linearisation d(zeta)/dv at v=0: the analytic mu-derivative of
    both terms of zeta times mu''.  Reference for the finite-difference
    self-consistency check."""
    mu_p, mu_pp = chemical_potential(cfg, constants)
    return (zeta_pp_interband(omega, mu_p, mu_pp, cfg.tau_s, constants) +
            zeta_pp_thermal_exact(omega, mu_p, mu_pp, cfg.tau_s, cfg.T, constants))


def _principal_sqrt_nonneg(z: complex) -> complex:
    """Principal square root, sign-fixed so Re >= 0."""
    r = cmath.sqrt(z)
    return -r if r.real < 0 else r


def spp_dispersion(omega: float, zeta_p: complex, eps_r: float,
                   constants: PhysicalConstants = CONSTANTS
                   ) -> tuple[complex, complex]:
    """Propagation constant beta = (w/c) sqrt(1 - 2/(Z0 zeta')) and
    transverse decay alpha = sqrt(beta^2 - eps_r (w/c)^2).

    The dimensionally consistent (w/c)^2 form is used under the root of
    alpha.  Branches are fixed to Re(beta) >= 0, Re(alpha) >= 0;
    Re(alpha) <= 0 after sign fixing means the mode is unconfined.
    """
    if zeta_p == 0:
        raise DomainError("zeta' must be nonzero")
    k0 = omega / constants.c
    beta = k0 * _principal_sqrt_nonneg(1.0 - 2.0 / (constants.Z0 * zeta_p))
    alpha = _principal_sqrt_nonneg(beta * beta - eps_r * k0 * k0)
    if alpha.real <= 0:
        raise UnconfinedModeError(
            f"Re(alpha) = {alpha.real} <= 0 at omega={omega}")
    return beta, alpha


def effective_permittivity(omega: float, beta_p: complex, zeta_p: complex,
                           zeta_pp: complex,
                           constants: PhysicalConstants = CONSTANTS
                           ) -> tuple[complex, complex]:
    """Static effective permittivity eps' = (c beta'/w)^2 and its modulation
    eps'' = 2 c^2 beta' beta'' / w^2 with
    beta'' = beta' zeta'' / [zeta' (1 - (Z0 zeta'/2)^2)]."""
    if zeta_p == 0:
        raise DomainError("zeta' must be nonzero")
    pole = 1.0 - (constants.Z0 * zeta_p / 2.0) ** 2
    if abs(pole) < 1e-12 * (1.0 + abs(constants.Z0 * zeta_p / 2.0) ** 2):
        raise SingularModulationError("Z0 zeta' = +/-2 pole of beta''")
    eps_p = (constants.c * beta_p / omega) ** 2
    beta_pp = beta_p * zeta_pp / (zeta_p * pole)
    eps_pp = 2.0 * constants.c ** 2 * beta_p * beta_pp / omega ** 2
    return eps_p, eps_pp


def mode_profile(omega: float, beta: complex, alpha: complex, eps_r: float,
                 constants: PhysicalConstants = CONSTANTS) -> ModeProfile:
    """Populate the SPP profile coefficients for given dispersion outputs."""
    return ModeProfile(
        omega=omega, beta=beta, alpha=alpha,
        K_x=beta,
        K_y=-1j * omega * eps_r * constants.eps0,
        K_z=alpha,
        eps_r=eps_r,
    )


def mode_overlap(pm: ModeProfile, pn: ModeProfile,
                 constants: PhysicalConstants = CONSTANTS) -> complex:
    """Normalised overlap l_mn of the (D_x, D_z) field components; by
    Cauchy-Schwarz |l_mn| <= 1, and l_mm = 1 exactly."""
    if pm is pn:
        return 1.0 + 0.0j
    s = pm.alpha.conjugate() + pn.alpha
    cm = 1.0 / (pm.omega * pm.eps_r * constants.eps0)
    cn = 1.0 / (pn.omega * pn.eps_r * constants.eps0)
    # Int over both half-spaces of e^{-(am* + an)|x|} = 2/s per component pair
    inner = cm * cn * (pm.K_x.conjugate() * pn.K_x +
                       pm.K_z.conjugate() * pn.K_z) * 2.0 / s
    return inner / math.sqrt(pm.norm_integral(constants) * pn.norm_integral(constants))


def mode_impedance_ratio(p: ModeProfile,
                         constants: PhysicalConstants = CONSTANTS) -> float:
    """Energy-partition factor xi = 1/2 + mu0 Int|D_y|^2 dx /
    (2 eps0 eps' Int(|D_x|^2 + |D_z|^2) dx), with eps' from the dispersion."""
    eps_p = (constants.c * p.beta / p.omega) ** 2
    xi = 0.5 + constants.mu0 * p.hy_integral() / \
        (2.0 * constants.eps0 * eps_p * p.norm_integral(constants))
    return xi


def sinc_phase(theta: complex) -> complex:
    """sinc(theta) e^{i theta} = (e^{2 i theta} - 1) / (2 i theta), with a
    series fallback below |theta| = 1e-4 to avoid cancellation; equals 1 at
    theta = 0."""
    if abs(theta) < 1e-4:
        t2 = theta * theta
        return (1.0 - t2 / 6.0 + t2 * t2 / 120.0) * cmath.exp(1j * theta)
    return (cmath.exp(2j * theta) - 1.0) / (2j * theta)


def phase_mismatch(j: int, beta1: complex, betaj: complex, L: float) -> complex:
    """Theta_j = (-1)^j (beta_1 - (-1)^j beta_j) L / 2 for j in {2, 3}."""
    if j not in (2, 3):
        raise DomainError(f"mode index must be 2 or 3, got {j}")
    sign = (-1.0) ** j
    return sign * (beta1 - sign * betaj) * L / 2.0


def coupling_rate(j: int, profiles: tuple[ModeProfile, ModeProfile, ModeProfile],
                  cfg: GrapheneConfig, eps_pp_j: complex, omega_m: float,
                  constants: PhysicalConstants = CONSTANTS) -> complex:
    """Single-photon coupling rate g_j (rad/s) between the microwave mode and
    sideband mode j in {2, 3}:

        g_j = eps''_j l_1j / (2 sqrt(xi_1 xi_j))
              * sqrt(2 w_1 w_j hbar w_m / (C A_r eps'_1 eps'_j))
              * sinc(Theta_j) e^{i Theta_j}.
    """
    if j not in (2, 3):
        raise DomainError(f"mode index must be 2 or 3, got {j}")
    p1 = profiles[0]
    pj = profiles[j - 1]
    eps_1 = (constants.c * p1.beta / p1.omega) ** 2
    eps_j = (constants.c * pj.beta / pj.omega) ** 2
    xi_1 = mode_impedance_ratio(p1, constants)
    xi_j = mode_impedance_ratio(pj, constants)
    l_1j = mode_overlap(p1, pj, constants)
    theta = phase_mismatch(j, p1.beta, pj.beta, cfg.L)
    cap = cfg.capacitance(constants)
    root = cmath.sqrt(
        2.0 * p1.omega * pj.omega * constants.hbar * omega_m /
        (cap * cfg.A_r * eps_1 * eps_j))
    return eps_pp_j * l_1j / (2.0 * cmath.sqrt(xi_1 * xi_j)) * root * sinc_phase(theta)


def build_dynamics_params(pump_amp: float, g2: complex, g3: complex,
                          gamma2: float, gamma3: float, gamma_m: float,
                          omega_m: float, T: float) -> DynamicsParams:
    """Effective dimensionless dynamics: G_j = pump_amp * |g_j| / omega_m,
    decay rates scaled by omega_m, and the microwave thermal occupation at
    temperature T."""
    if pump_amp <= 0:
        raise DomainError(f"pump amplitude must be positive, got {pump_amp}")
    if omega_m <= 0:
        raise DomainError(f"omega_m must be positive, got {omega_m}")
    return DynamicsParams(
        G2=pump_amp * abs(g2) / omega_m,
        G3=pump_amp * abs(g3) / omega_m,
        gamma2=gamma2 / omega_m,
        gamma3=gamma3 / omega_m,
        gamma_m=gamma_m / omega_m,
        n_m=thermal_occupation(omega_m, T),
    )

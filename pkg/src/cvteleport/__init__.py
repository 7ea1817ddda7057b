"""Microwave-mediated two-mode optical entanglement in a graphene plasmonic
waveguide, and the continuous-variable teleportation channel it provides.

Layers, bottom up:

- :mod:`cvteleport.graphene`  -- conductivity, SPP dispersion, coupling rates
- :mod:`cvteleport.langevin`  -- six-operator linear dynamics and stability
- :mod:`cvteleport.spectra`   -- filtered-output covariance matrices
- :mod:`cvteleport.montecarlo`-- stochastic time-domain oracle
- :mod:`cvteleport.metrics`   -- log-negativity and teleportation fidelity
- :mod:`cvteleport.sweep`     -- config-driven sweeps, CSV/JSON export
"""

from .constants import CONSTANTS, PhysicalConstants
from .graphene import (
    GrapheneConfig,
    ModeProfile,
    PerturbedConductivity,
    build_dynamics_params,
    chemical_potential,
    conductivity,
    conductivity_perturbation,
    coupling_rate,
    effective_permittivity,
    mode_overlap,
    mode_profile,
    spp_dispersion,
)
from .langevin import (
    DynamicsParams,
    LinearSystem,
    StabilityReport,
    bogolyubov,
    diffusion_matrix,
    drift_matrix,
    input_matrix,
    lyapunov_steady_state,
    stability,
)
from .metrics import (
    MetricsResult,
    TwoModeCM,
    fidelity_quadrature,
    fidelity_upper_bound,
    flip_mode_phase,
    log_negativity,
    symplectic_eigenvalues,
    teleportation_fidelity,
    thermal_occupation,
    tmsv_cm,
)
from .montecarlo import monte_carlo_filtered_cm, monte_carlo_intracavity_cm
from .spectra import (
    FilterSpec,
    TransferMatrix,
    extract_optical_blocks,
    filter_response,
    filtered_cm_zero_bandwidth,
    filtered_output_cm,
    intracavity_cm_frequency,
    transfer_matrix,
)
from .sweep import SweepConfig, SweepRow, emit_csv, parse_config, run_point, run_sweep

__version__ = "0.1.0"

"""Config-driven parameter sweeps producing E_N / F / F_opt tables.

A sweep config is a single JSON document:

    {
      "sweep": "G2",            # one of G2, G3, n_m, gamma_m, Omega
      "from": 0.15, "to": 0.35, "steps": 101,
      "base":    {"G2": 0.18, "G3": 0.2, "gamma2": 0.001, "gamma3": 0.001,
                  "gamma_m": 0.02, "n_m": 10.0},            # optional
      "filters": {"Omega2": 0.0, "Omega3": 0.0,
                  "zero_bandwidth": true, "tau": null},       # optional
      "outputs": ["E_N", "F", "F_opt", "eta_minus", "stability_margin"],
      "oracles": false, "seed": 12345,
      "graphene": { ... material/drive parameters ... }       # optional
    }

Unknown keys anywhere are rejected.  ``base`` defaults to the headline
operating point (G2 = 0.18, G3 = 0.2, gamma2 = gamma3 = 0.001,
gamma_m = 0.02, n_m = 10, in units of the microwave frequency) and
``filters`` to zero-bandwidth at Omega = 0.  When a ``graphene`` section is
present, G2 and G3 of the base point are derived from the material model.

Before metrics are computed the optical CM is re-expressed with the mode-3
local oscillator phase flipped by pi (see metrics.flip_mode_phase): the
device's Bogolyubov structure correlates (X2+X3, Y2-Y3), and the unit-gain
teleportation formula assumes the (X2-X3, Y2+Y3) sign convention.  E_N is
invariant under this relabelling.
"""

from __future__ import annotations

import dataclasses
import json
import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from .errors import CVTeleportError, ParseError, UnstableSystemError, ValidationError
from .graphene import (
    GrapheneConfig,
    build_dynamics_params,
    conductivity_perturbation,
    coupling_rate,
    effective_permittivity,
    mode_profile,
    spp_dispersion,
)
from .langevin import DynamicsParams, LinearSystem, drift_matrix, stability
from .metrics import (
    fidelity_upper_bound,
    flip_mode_phase,
    log_negativity,
    teleportation_fidelity,
)
from .spectra import FilterSpec, extract_optical_blocks, filtered_output_cm

SWEEP_PARAMS = ("G2", "G3", "n_m", "gamma_m", "Omega")
OUTPUT_FIELDS = ("E_N", "F", "F_opt", "eta_minus", "stability_margin")
CSV_HEADER = "sweep_param,value,stable,E_N,eta_minus,F,F_opt,margin,err_est"

_BASE_DEFAULTS = {"G2": 0.18, "G3": 0.2, "gamma2": 0.001, "gamma3": 0.001,
                  "gamma_m": 0.02, "n_m": 10.0}
_FILTER_DEFAULTS = {"Omega2": 0.0, "Omega3": 0.0, "zero_bandwidth": True, "tau": None}
_GRAPHENE_KEYS = {
    "n0", "tau_s", "V_f", "T", "eps_r", "d", "A_r", "L", "exact_mu_derivative",
    "f1", "f_m", "pump_amp", "gamma2_Hz", "gamma3_Hz", "gamma_m_Hz",
}
_GRAPHENE_DRIVE_DEFAULTS = {
    "f1": 193e12, "f_m": 10e9, "pump_amp": 1e7,
    "gamma2_Hz": None, "gamma3_Hz": None, "gamma_m_Hz": None,
}


@dataclass(frozen=True)
class SweepConfig:
    base: DynamicsParams
    sweep_param: str
    start: float
    stop: float
    steps: int
    filters: tuple[FilterSpec, FilterSpec]
    outputs: tuple[str, ...] = OUTPUT_FIELDS
    oracles: bool = False
    seed: int = 12345
    graphene: dict | None = None
    quad_tol: float = 1e-8


@dataclass(frozen=True)
class SweepRow:
    sweep_param: str
    value: float
    stable: bool
    margin: float | None = None
    E_N: float | None = None
    eta_minus: float | None = None
    F: float | None = None
    F_opt: float | None = None
    err_est: float | None = None
    error: str | None = None


def _reject_unknown(mapping: dict, allowed, where: str) -> None:
    for key in mapping:
        if key not in allowed:
            raise ValidationError(f"unknown key {key!r} in {where}")


def _coerce_number(value, name: str) -> float:
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise ValidationError(f"field {name!r} must be a number, got {value!r}")
    return float(value)


def graphene_dynamics(section: dict) -> tuple[DynamicsParams, dict]:
    """Derive the dimensionless dynamics from a config ``graphene`` section.

    Returns (params, report) where the report carries every intermediate
    quantity of the material-to-couplings chain.
    """
    _reject_unknown(section, _GRAPHENE_KEYS, "graphene")
    drive = dict(_GRAPHENE_DRIVE_DEFAULTS)
    material = {}
    for key, val in section.items():
        if key in drive:
            drive[key] = val
        else:
            material[key] = val
    cfg = GrapheneConfig(**material)
    omega1 = 2.0 * math.pi * _coerce_number(drive["f1"], "graphene.f1")
    omega_m = 2.0 * math.pi * _coerce_number(drive["f_m"], "graphene.f_m")
    omegas = (omega1, omega1 + omega_m, omega1 - omega_m)

    profiles = []
    perturbed = []
    for w in omegas:
        pert = conductivity_perturbation(w, cfg)
        beta, alpha = spp_dispersion(w, pert.zeta_p, cfg.eps_r)
        profiles.append(mode_profile(w, beta, alpha, cfg.eps_r))
        perturbed.append(pert)
    profiles = tuple(profiles)

    gs = {}
    eps_reports = {}
    for j in (2, 3):
        pert = perturbed[j - 1]
        eps_p, eps_pp = effective_permittivity(
            omegas[j - 1], profiles[j - 1].beta, pert.zeta_p, pert.zeta_pp)
        eps_reports[j] = (eps_p, eps_pp)
        gs[j] = coupling_rate(j, profiles, cfg, eps_pp, omega_m)

    # cavity decay rates default to the headline dimensionless values
    g2_hz = drive["gamma2_Hz"]
    g3_hz = drive["gamma3_Hz"]
    gm_hz = drive["gamma_m_Hz"]
    gamma2 = _coerce_number(g2_hz, "gamma2_Hz") * 2 * math.pi if g2_hz is not None \
        else _BASE_DEFAULTS["gamma2"] * omega_m
    gamma3 = _coerce_number(g3_hz, "gamma3_Hz") * 2 * math.pi if g3_hz is not None \
        else _BASE_DEFAULTS["gamma3"] * omega_m
    gamma_m = _coerce_number(gm_hz, "gamma_m_Hz") * 2 * math.pi if gm_hz is not None \
        else _BASE_DEFAULTS["gamma_m"] * omega_m
    params = build_dynamics_params(
        _coerce_number(drive["pump_amp"], "pump_amp"), gs[2], gs[3],
        gamma2, gamma3, gamma_m, omega_m, cfg.T)
    report = {
        "config": cfg,
        "omegas": omegas,
        "profiles": profiles,
        "perturbed": perturbed,
        "eps": eps_reports,
        "g2": gs[2],
        "g3": gs[3],
        "params": params,
    }
    return params, report


def _parse_filters(section: dict) -> tuple[FilterSpec, FilterSpec]:
    _reject_unknown(section, _FILTER_DEFAULTS, "filters")
    merged = {**_FILTER_DEFAULTS, **section}
    zb = merged["zero_bandwidth"]
    if not isinstance(zb, bool):
        raise ValidationError("filters.zero_bandwidth must be a boolean")
    tau = merged["tau"]
    if not zb:
        tau = _coerce_number(tau, "filters.tau")
    return (
        FilterSpec(Omega=_coerce_number(merged["Omega2"], "filters.Omega2"),
                   tau=tau, zero_bandwidth=zb),
        FilterSpec(Omega=_coerce_number(merged["Omega3"], "filters.Omega3"),
                   tau=tau, zero_bandwidth=zb),
    )


def parse_config(path: str) -> SweepConfig:
    """Load and validate a sweep config; unknown keys are rejected by name."""
    with open(path, "r", encoding="utf-8") as fh:
        text = fh.read()
    try:
        raw = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"{path}: line {exc.lineno} column {exc.colno}: {exc.msg}") from exc
    if not isinstance(raw, dict):
        raise ValidationError("config root must be a JSON object")
    allowed = {"sweep", "from", "to", "steps", "base", "filters", "outputs",
               "oracles", "seed", "graphene", "quad_tol"}
    _reject_unknown(raw, allowed, "config")

    for key in ("sweep", "from", "to", "steps"):
        if key not in raw:
            raise ValidationError(f"missing required field {key!r}")
    sweep_param = raw["sweep"]
    if sweep_param not in SWEEP_PARAMS:
        raise ValidationError(
            f"sweep parameter {sweep_param!r} not in {SWEEP_PARAMS}")
    start = _coerce_number(raw["from"], "from")
    stop = _coerce_number(raw["to"], "to")
    steps = raw["steps"]
    if isinstance(steps, bool) or not isinstance(steps, int):
        raise ValidationError(f"field 'steps' must be an integer, got {steps!r}")
    if steps < 2:
        raise ValidationError(f"steps must be >= 2, got {steps}")
    if start == stop:
        raise ValidationError("'from' and 'to' must differ")

    base_section = raw.get("base", {})
    if not isinstance(base_section, dict):
        raise ValidationError("'base' must be an object")
    _reject_unknown(base_section, _BASE_DEFAULTS, "base")
    merged = {**_BASE_DEFAULTS,
              **{k: _coerce_number(v, f"base.{k}") for k, v in base_section.items()}}
    graphene_section = raw.get("graphene")
    if graphene_section is not None:
        if not isinstance(graphene_section, dict):
            raise ValidationError("'graphene' must be an object")
        derived, _ = graphene_dynamics(graphene_section)
        merged["G2"] = derived.G2
        merged["G3"] = derived.G3
        merged["n_m"] = derived.n_m
    base = DynamicsParams(**merged)

    filters_section = raw.get("filters", {})
    if not isinstance(filters_section, dict):
        raise ValidationError("'filters' must be an object")
    filters = _parse_filters(filters_section)

    outputs = raw.get("outputs", list(OUTPUT_FIELDS))
    if not isinstance(outputs, list) or not set(outputs) <= set(OUTPUT_FIELDS):
        raise ValidationError(f"outputs must be a subset of {OUTPUT_FIELDS}")
    oracles = raw.get("oracles", False)
    if not isinstance(oracles, bool):
        raise ValidationError("'oracles' must be a boolean")
    seed = raw.get("seed", 12345)
    if isinstance(seed, bool) or not isinstance(seed, int):
        raise ValidationError(f"'seed' must be an integer, got {seed!r}")
    quad_tol = _coerce_number(raw.get("quad_tol", 1e-8), "quad_tol")

    return SweepConfig(base=base, sweep_param=sweep_param, start=start,
                       stop=stop, steps=steps, filters=filters,
                       outputs=tuple(outputs), oracles=oracles, seed=seed,
                       graphene=graphene_section, quad_tol=quad_tol)


def _apply_sweep_value(cfg: SweepConfig, value: float
                       ) -> tuple[DynamicsParams, tuple[FilterSpec, FilterSpec]]:
    if cfg.sweep_param == "Omega":
        f2, f3 = cfg.filters
        return cfg.base, (dataclasses.replace(f2, Omega=value),
                          dataclasses.replace(f3, Omega=value))
    return dataclasses.replace(cfg.base, **{cfg.sweep_param: value}), cfg.filters


def run_point(p: DynamicsParams, filters: tuple[FilterSpec, FilterSpec],
              sweep_param: str = "G2", value: float = float("nan"),
              quad_tol: float = 1e-8) -> SweepRow:
    """Stability -> covariance matrix -> metrics for one parameter point.

    Unstable points produce a flagged row with empty metric fields; no
    numbers are fabricated for them.
    """
    rep = stability(drift_matrix(p))
    if not rep.stable or rep.margin >= -1e-9:
        return SweepRow(sweep_param=sweep_param, value=value, stable=False,
                        margin=rep.margin)
    sys = LinearSystem.from_params(p)
    V, err = filtered_output_cm(sys, filters, tol=quad_tol)
    Va2, Va3, Va23 = extract_optical_blocks(V)
    V4 = np.block([[Va2, Va23], [Va23.T, Va3]])
    aligned = flip_mode_phase(V4)
    E_N, eta = log_negativity(aligned)
    F = teleportation_fidelity(aligned)
    F_opt = fidelity_upper_bound(E_N) if math.isfinite(E_N) else 1.0
    return SweepRow(sweep_param=sweep_param, value=value, stable=True,
                    margin=rep.margin, E_N=E_N, eta_minus=eta, F=F,
                    F_opt=F_opt, err_est=err)


def _worker_count() -> int:
    env = os.environ.get("CVTELEPORT_THREADS")
    if env:
        try:
            n = int(env)
        except ValueError as exc:
            raise ValidationError(f"CVTELEPORT_THREADS={env!r} is not an integer") from exc
        if n < 1:
            raise ValidationError("CVTELEPORT_THREADS must be >= 1")
        return n
    return os.cpu_count() or 1


def run_sweep(cfg: SweepConfig) -> list[SweepRow]:
    """Evaluate every sweep point; rows come back in sweep order and the
    result is deterministic for a fixed config (points are computed in
    pre-indexed slots, so scheduling cannot reorder or alter them)."""
    values = np.linspace(cfg.start, cfg.stop, cfg.steps)

    def one(value: float) -> SweepRow:
        p, filters = _apply_sweep_value(cfg, float(value))
        try:
            return run_point(p, filters, cfg.sweep_param, float(value),
                             quad_tol=cfg.quad_tol)
        except UnstableSystemError as exc:
            return SweepRow(sweep_param=cfg.sweep_param, value=float(value),
                            stable=False, error=str(exc))
        except CVTeleportError as exc:
            return SweepRow(sweep_param=cfg.sweep_param, value=float(value),
                            stable=False, error=f"{type(exc).__name__}: {exc}")

    workers = min(_worker_count(), cfg.steps)
    if workers == 1:
        return [one(v) for v in values]
    rows: list[SweepRow | None] = [None] * cfg.steps
    with ThreadPoolExecutor(max_workers=workers) as pool:
        for idx, row in enumerate(pool.map(one, values)):
            rows[idx] = row
    return rows


def _fmt(x: float | None) -> str:
    if x is None:
        return ""
    return f"{x:.16e}"


def rows_to_csv(rows: list[SweepRow]) -> str:
    """Render rows under the fixed header, full-precision scientific
    notation, locale-independent, trailing newline."""
    lines = [CSV_HEADER]
    for r in rows:
        lines.append(",".join([
            r.sweep_param,
            _fmt(r.value),
            "true" if r.stable else "false",
            _fmt(r.E_N),
            _fmt(r.eta_minus),
            _fmt(r.F),
            _fmt(r.F_opt),
            _fmt(r.margin),
            _fmt(r.err_est),
        ]))
    return "\n".join(lines) + "\n"


def emit_csv(rows: list[SweepRow], path: str) -> None:
    if not rows:
        raise ValidationError("refusing to write an empty sweep")
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(rows_to_csv(rows))


def rows_to_json(rows: list[SweepRow]) -> str:
    """JSON mirror of the CSV content."""
    payload = [dataclasses.asdict(r) for r in rows]
    return json.dumps(payload, indent=2, allow_nan=True) + "\n"


def check_sweep_shapes(rows: list[SweepRow]) -> list[str]:
    """Qualitative shape assertions for the supported sweep kinds; returns a
    list of human-readable failures (empty = all shapes hold)."""
    problems: list[str] = []
    if not rows:
        return ["empty sweep"]
    param = rows[0].sweep_param
    stable = [r for r in rows if r.stable and r.E_N is not None]
    if not stable:
        return ["no stable points in sweep"]
    if param in ("G2", "G3"):
        finite = [r for r in stable if math.isfinite(r.E_N)]
        if not finite:
            return ["no finite E_N values in sweep"]
        best = max(finite, key=lambda r: r.E_N)
        idx = [r.value for r in rows].index(best.value)
        boundary = None
        for i in range(len(rows) - 1):
            if rows[i].stable != rows[i + 1].stable:
                boundary = i if rows[i].stable else i + 1
        if boundary is not None and abs(idx - boundary) > 1:
            problems.append(
                f"E_N argmax at {best.value:g} is {abs(idx - boundary)} grid steps "
                f"from the stability boundary")
    if param == "n_m":
        fs = [r.F for r in stable if r.F is not None]
        increasing = all(b <= a + 1e-12 for a, b in zip(fs, fs[1:]))
        values = [r.value for r in stable]
        if values == sorted(values) and not increasing:
            problems.append("F is not monotonically decreasing in n_m")
    return problems

"""Figure rendering for sweep reports.

Renders the metric curves of a finished sweep to an image file next to the
CSV: E_N on one panel, F together with its entanglement bound F_opt and the
2/3 secure-teleportation threshold on the other.  Unstable points appear as
gaps, exactly as they do in the CSV.
"""

from __future__ import annotations

import math

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt  # noqa: E402

from .sweep import SweepRow

_AXIS_LABELS = {
    "G2": r"$G_2/\omega_m$",
    "G3": r"$G_3/\omega_m$",
    "n_m": r"microwave thermal occupation $n_m$",
    "gamma_m": r"$\gamma_m/\omega_m$",
    "Omega": r"filter center $\Omega/\omega_m$",
}


def _series(rows: list[SweepRow], attr: str):
    xs, ys = [], []
    for r in rows:
        v = getattr(r, attr)
        if r.stable and v is not None and math.isfinite(v):
            xs.append(r.value)
            ys.append(v)
    return xs, ys


def render_sweep_figure(rows: list[SweepRow], path: str) -> None:
    if not rows:
        raise ValueError("nothing to plot")
    param = rows[0].sweep_param
    xlabel = _AXIS_LABELS.get(param, param)

    fig, (ax_en, ax_f) = plt.subplots(1, 2, figsize=(9.0, 3.4))

    xs, ys = _series(rows, "E_N")
    ax_en.plot(xs, ys, color="tab:blue", lw=1.4)
    ax_en.set_xlabel(xlabel)
    ax_en.set_ylabel(r"$E_N$")
    ax_en.set_title("logarithmic negativity")

    xs, ys = _series(rows, "F")
    ax_f.plot(xs, ys, color="black", lw=1.4, label=r"$F$")
    xs, ys = _series(rows, "F_opt")
    ax_f.plot(xs, ys, color="tab:red", lw=1.2, ls="--", label=r"$F^{opt}$")
    ax_f.axhline(2.0 / 3.0, color="gray", lw=0.8, label=r"$F_{thr}=2/3$")
    ax_f.set_xlabel(xlabel)
    ax_f.set_ylabel("fidelity")
    ax_f.set_title("teleportation fidelity")
    ax_f.legend(frameon=False, fontsize=8)

    unstable = [r.value for r in rows if not r.stable]
    if unstable:
        for ax in (ax_en, ax_f):
            ax.axvspan(min(unstable), max(unstable), color="0.92", zorder=0)

    fig.tight_layout()
    fig.savefig(path, dpi=160)
    plt.close(fig)

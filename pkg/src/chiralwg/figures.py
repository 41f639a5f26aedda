"""Baked-in parameter sets for regenerating figure data.

Rates are in units of Gamma = (|k1|^2 + |k2|^2)/2 = 1. Axis ranges that are
a free choice are recorded in each file header.
"""

from __future__ import annotations

import math
import os
from dataclasses import dataclass, field
from typing import Callable, Optional

import numpy as np

from . import oracles
from .config import ScenarioConfig, SweepSpec
from .model import Drive, Emitter, EmitterChain
from .sweep import STAT_COLUMNS, run_sweep, sweep_comments, write_table
from .tcmt import ClassicalSystem, classical_transmissions

PI = math.pi


def two_atom_config(delta_a, delta_b, ka1, ka2, kb1, kb2, phi, gamma=0.0, p=1.0):
    """Two emitters, couplings given as rates |k|^2, forward drive of power p."""
    atoms = (
        Emitter.from_rates(delta_a, gamma, ka1, ka2, 0.0),
        Emitter.from_rates(delta_b, gamma, kb1, kb2, phi),
    )
    return ScenarioConfig(atoms, Drive.forward_power(p))


def antisym_config(delta, k1_rate, k2_rate, phi, gamma=0.0, p=1.0):
    return two_atom_config(delta, -delta, k1_rate, k2_rate, k1_rate, k2_rate, phi, gamma, p)


def single_atom_config(delta, gamma, k1_rate, k2_rate, p=1.0):
    return ScenarioConfig((Emitter.from_rates(delta, gamma, k1_rate, k2_rate),), Drive.forward_power(p))


@dataclass(frozen=True)
class Curve:
    name: str
    config: ScenarioConfig
    sweep: SweepSpec
    direction: str = "forward"


@dataclass(frozen=True)
class Figure:
    fig_id: str
    title: str
    curves: tuple
    notes: tuple = ()
    oracle: Optional[Callable] = field(default=None, compare=False)


# fig2: Delta_a = -Delta_b = Delta = Gamma, k1^2 = 1.2, k2^2 = 0.8, phi = pi;
# (a) gamma in {0, 0.05, 0.2, 0.5}; (b) gamma = 0.05, contour over (p, Delta).
FIG2_GAMMAS = (0.0, 0.05, 0.2, 0.5)
FIG2_POWER = SweepSpec("power", 1e-3, 1e2, 61, "log")
FIG2B_DELTAS = tuple(np.round(np.linspace(0.0, 3.0, 13), 10))
FIG2B_POWER = SweepSpec("power", 1e-2, 1e2, 41, "log")

# fig3: Delta = 0.5, k1^2 = 1.2, k2^2 = 0.8, p = 1, gamma in {0, 0.2, 0.5}, phi swept.
FIG3_GAMMAS = (0.0, 0.2, 0.5)
FIG3_PHASE = SweepSpec("phase", 0.0, 2 * PI, 201)

# fig4: same couplings as fig3, phi = pi/2, power swept over a chosen range.
FIG4_POWER = SweepSpec("power", 1e-3, 1e2, 61, "log")

# fig5: Delta = 0.5, k1^2 = 1.6, k2^2 = 0.4, gamma in {0.05, 0.2, 0.5};
# (a) p = 1, phi swept; (b), (c) phi = 2 pi / 3, power swept.
FIG5_GAMMAS = (0.05, 0.2, 0.5)
FIG5_PHASE = SweepSpec("phase", 0.0, 2 * PI, 201)
FIG5_POWER = SweepSpec("power", 1e-3, 1e2, 61, "log")

# fig6: Delta_a = 0, Delta_b = 1, k_a1 = k_b2 = sqrt(1.6), k_b1 = k_a2 = sqrt(0.4),
# phi = pi, gamma in {0, gamma_c = 0.6}, forward and backward drive.
FIG6_GAMMAS = (0.0, 0.6)
FIG6_POWER = SweepSpec("power", 1e-3, 1e1, 81, "log")

# fig7: one atom, Delta = 0, gamma = 0.05, k1^2 = 1.4, k2^2 = 0.6.
# (a) p swept on a grid of step 0.00125 that contains the critical power 0.13125;
# (b) Delta swept for several p.
FIG7_POWER = SweepSpec("power", 0.00125, 1.0, 800)
FIG7B_POWERS = (0.01, 0.13125, 0.5, 1.0)
FIG7B_DELTA = SweepSpec("delta_common", -3.0, 3.0, 121)


def _fig2a():
    return tuple(
        Curve(f"gamma_{g:g}", antisym_config(1.0, 1.2, 0.8, PI, g), FIG2_POWER) for g in FIG2_GAMMAS
    )


def _fig2b():
    return tuple(
        Curve(f"delta_{d:g}", antisym_config(float(d), 1.2, 0.8, PI, 0.05), FIG2B_POWER)
        for d in FIG2B_DELTAS
    )


def _fig3():
    return tuple(
        Curve(f"gamma_{g:g}", antisym_config(0.5, 1.2, 0.8, 0.0, g, 1.0), FIG3_PHASE) for g in FIG3_GAMMAS
    )


def _fig4():
    return tuple(
        Curve(f"gamma_{g:g}", antisym_config(0.5, 1.2, 0.8, PI / 2, g), FIG4_POWER) for g in FIG3_GAMMAS
    )


def _fig5a():
    return tuple(
        Curve(f"gamma_{g:g}", antisym_config(0.5, 1.6, 0.4, 0.0, g, 1.0), FIG5_PHASE) for g in FIG5_GAMMAS
    )


def _fig5bc():
    return tuple(
        Curve(f"gamma_{g:g}", antisym_config(0.5, 1.6, 0.4, 2 * PI / 3, g), FIG5_POWER) for g in FIG5_GAMMAS
    )


def fig6_config(gamma=0.0, p=1.0):
    return two_atom_config(0.0, 1.0, 1.6, 0.4, 0.4, 1.6, PI, gamma, p)


def _fig6():
    return tuple(
        Curve(f"gamma_{g:g}_{d}", fig6_config(g), FIG6_POWER, d)
        for g in FIG6_GAMMAS for d in ("forward", "backward")
    )


def _fig7a():
    return (Curve("numeric", single_atom_config(0.0, 0.05, 1.4, 0.6), FIG7_POWER),)


def _fig7b():
    return tuple(
        Curve(f"p_{p:g}", single_atom_config(0.0, 0.05, 1.4, 0.6, p), FIG7B_DELTA) for p in FIG7B_POWERS
    )


def _single_atom_params(delta, p):
    return oracles.SingleAtomParams(delta, 0.05, math.sqrt(1.4), math.sqrt(0.6), math.sqrt(p))


def _oracle_fig2a(out_dir):
    rows = []
    for p in FIG2_POWER.grid():
        pop, coh = oracles.transparency_elements(1.0, math.sqrt(1.2), math.sqrt(0.8), math.sqrt(p))
        rows.append({"power": p, "T": 1.0, "R": 0.0, "rho_ss": pop, "rho_sg_re": coh.real, "rho_sg_im": coh.imag})
    path = os.path.join(out_dir, "fig2a_oracle_gamma_0.csv")
    write_table(path, rows, comments=[
        "fig2a analytic transparency curve, gamma = 0, phi = pi",
        "T = 1 and R = 0 at every power; rho_ss, rho_sg from the pure bright-state solution",
    ])
    return [path]


def _oracle_fig5(out_dir, fig_id):
    g2 = oracles.two_atom_lowpower_g2_reflected(0.5, math.sqrt(1.6), math.sqrt(0.4))
    refl = oracles.two_atom_lowpower_reflectivity(0.5, math.sqrt(1.6), math.sqrt(0.4))
    rows = [{"power": p, "R_lowpower": refl, "g2_R_lowpower": g2} for p in FIG5_POWER.grid()]
    path = os.path.join(out_dir, f"{fig_id}_oracle_lowpower.csv")
    write_table(path, rows, comments=[
        f"{fig_id} weak-drive reference values",
        "valid only for gamma = 0, phi = pi/2 and p -> 0; shown as a horizontal reference",
    ])
    return [path]


def _oracle_fig6(out_dir, fig_id):
    ka, kb = math.sqrt(1.6), math.sqrt(0.4)
    rows = []
    classical = {}
    for g in FIG6_GAMMAS:
        chain = fig6_config(g).chain()
        tf, tb = classical_transmissions(ClassicalSystem.from_chain(chain))
        classical[g] = (abs(tf) ** 2, abs(tb) ** 2)
    closed = oracles.classical_two_atom_transmission(0.0, 1.0, ka, kb, PI)
    for p in FIG6_POWER.grid():
        row = {"power": p, "classical_closed_form_gamma_0": closed}
        for g, (f, b) in classical.items():
            row[f"classical_fwd_gamma_{g:g}"] = f
            row[f"classical_bwd_gamma_{g:g}"] = b
        rows.append(row)
    path = os.path.join(out_dir, f"{fig_id}_oracle_classical.csv")
    write_table(path, rows, comments=[
        f"{fig_id} classical coupled-mode transmission |t|^2 (power independent)",
        "classical incoherent output is identically zero",
    ])
    return [path]


def _oracle_fig7a(out_dir):
    rows = []
    for p in FIG7_POWER.grid():
        prm = _single_atom_params(0.0, p)
        t, r = oracles.single_atom_amplitudes(prm)
        T, R, inc, leak = oracles.single_atom_powers(prm)
        rows.append({"power": p, "abs_t_sq": abs(t) ** 2, "T_minus_abs_t_sq": inc, "leakage": leak,
                     "T": T, "R": R, "g2_T": oracles.single_atom_g2_transmitted(prm)})
    path = os.path.join(out_dir, "fig7a_oracle.csv")
    pc = oracles.critical_power(_single_atom_params(0.0, 0.0))
    write_table(path, rows, comments=["fig7a single-atom closed forms", f"critical power: {pc!r}"])
    return [path]


def _oracle_fig7b(out_dir):
    rows = []
    for delta in FIG7B_DELTA.grid():
        row = {"delta_common": delta}
        for p in FIG7B_POWERS:
            t, _ = oracles.single_atom_amplitudes(_single_atom_params(delta, p))
            row[f"abs_t_sq_p_{p:g}"] = abs(t) ** 2
        rows.append(row)
    path = os.path.join(out_dir, "fig7b_oracle.csv")
    write_table(path, rows, comments=["fig7b single-atom |t|^2 closed form versus detuning"])
    return [path]


FIGURES = {
    "fig2a": Figure("fig2a", "T vs p at phi = pi for several gamma", _fig2a(),
                    ("power range 1e-3..1e2 (chosen default)",), _oracle_fig2a),
    "fig2b": Figure("fig2b", "T over (p, Delta) at gamma = 0.05, one file per Delta", _fig2b(),
                    ("Delta grid 0..3 step 0.25, power range 1e-2..1e2 (chosen default)",)),
    "fig3": Figure("fig3", "I_inc^R/p and I_inc^T/p vs phi", _fig3()),
    "fig4": Figure("fig4", "I_c/p and I_inc/p vs p at phi = pi/2", _fig4(),
                   ("power range 1e-3..1e2 log-scale (chosen default)",)),
    "fig5a": Figure("fig5a", "g2_R vs phi at p = 1", _fig5a(),
                    oracle=lambda d: _oracle_fig5(d, "fig5a")),
    "fig5b": Figure("fig5b", "R vs p at phi = 2 pi / 3", _fig5bc(),
                    ("power range 1e-3..1e2 (chosen default)",),
                    lambda d: _oracle_fig5(d, "fig5b")),
    "fig5c": Figure("fig5c", "g2_R vs p at phi = 2 pi / 3", _fig5bc(),
                    ("power range 1e-3..1e2 (chosen default)",),
                    lambda d: _oracle_fig5(d, "fig5c")),
    "fig6a": Figure("fig6a", "I_c^T/p vs p, forward and backward", _fig6(),
                    ("power range 1e-3..1e1 (chosen default)",),
                    lambda d: _oracle_fig6(d, "fig6a")),
    "fig6b": Figure("fig6b", "I_inc^T/p vs p, forward and backward", _fig6(),
                    ("power range 1e-3..1e1 (chosen default)",)),
    "fig7a": Figure("fig7a", "single atom |t|^2, T - |t|^2, 1 - T - R vs p", _fig7a(),
                    oracle=_oracle_fig7a),
    "fig7b": Figure("fig7b", "single atom |t|^2 vs Delta for several p", _fig7b(),
                    oracle=_oracle_fig7b),
}

DERIVED_COLUMNS = (
    "abs_t_sq", "T_minus_abs_t_sq", "I_c_T_per_p", "I_inc_T_per_p", "I_c_R_per_p", "I_inc_R_per_p",
)


def add_derived(row):
    out = dict(row)
    p = row.get("p")
    t_re, t_im, T = row.get("t_re"), row.get("t_im"), row.get("T")
    abs_t_sq = None if t_re is None else t_re**2 + t_im**2
    out["abs_t_sq"] = abs_t_sq
    out["T_minus_abs_t_sq"] = None if abs_t_sq is None or T is None else T - abs_t_sq
    for key in ("I_c_T", "I_inc_T", "I_c_R", "I_inc_R"):
        value = row.get(key)
        out[f"{key}_per_p"] = None if value is None or not p else value / p
    return out


def run_figure(fig_id, out_dir, workers=None):
    """Write one CSV per curve (plus analytic curves where available); return the paths."""
    if fig_id not in FIGURES:
        raise KeyError(f"unknown figure {fig_id!r}; choose from {sorted(FIGURES)}")
    fig = FIGURES[fig_id]
    os.makedirs(out_dir, exist_ok=True)
    paths = []
    for curve in fig.curves:
        rows = [add_derived(r) for r in run_sweep(curve.config, curve.sweep, curve.direction, workers)]
        columns = ["index", curve.sweep.parameter, *DERIVED_COLUMNS, *STAT_COLUMNS, "diagnostics"]
        comments = [f"{fig.fig_id}: {fig.title}", f"curve: {curve.name}", *fig.notes,
                    *sweep_comments(curve.config, curve.sweep, curve.direction)[1:]]
        path = os.path.join(out_dir, f"{fig.fig_id}_{curve.name}.csv")
        paths.append(write_table(path, rows, columns, comments))
    if fig.oracle is not None:
        paths.extend(fig.oracle(out_dir))
    return paths

"""Closed-form results for one and two emitters.

These are independent ground truth for the numerical pipeline. Rates share
the caller's unit; couplings may be complex, only their moduli (and for the
reflection amplitude, their product) enter.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import UndefinedCorrelation


@dataclass(frozen=True)
class SingleAtomParams:
    delta: float = 0.0
    gamma: float = 0.0
    k1: complex = 0.0
    k2: complex = 0.0
    alpha: complex = 0.0

    @property
    def big_gamma(self):
        return 0.5 * (abs(self.k1) ** 2 + abs(self.k2) ** 2)

    @property
    def gamma_c(self):
        return 0.5 * (abs(self.k1) ** 2 - abs(self.k2) ** 2)

    @property
    def beta(self):
        return self.gamma - self.gamma_c

    @property
    def p(self):
        return abs(self.alpha) ** 2

    def _denominator(self):
        return self.delta**2 + (self.big_gamma + self.gamma) ** 2 + 2 * abs(self.k1) ** 2 * self.p


def single_atom_amplitudes(params):
    """Steady-state amplitude transmission and reflection (t, r)."""
    d = params._denominator()
    num = -1j * params.delta + params.big_gamma + params.gamma
    t = 1 - num * abs(params.k1) ** 2 / d
    r = -num * params.k1 * np.conj(params.k2) / d
    return complex(t), complex(r)


def single_atom_powers(params):
    """(T, R, T - |t|^2, 1 - T - R)."""
    d = params._denominator()
    k1sq = abs(params.k1) ** 2
    T = (params.delta**2 + params.beta**2 + 2 * k1sq * params.p) / d
    R = k1sq * abs(params.k2) ** 2 / d
    incoherent = 2 * k1sq**3 * params.p / d**2
    leakage = 2 * k1sq * params.gamma / d
    return T, R, incoherent, leakage


def single_atom_t_squared(params):
    """|t|^2 written through beta; algebraically equal to abs(t)**2."""
    d = params._denominator()
    k1sq = abs(params.k1) ** 2
    real_part = params.delta**2 + params.beta * (params.big_gamma + params.gamma) + 2 * k1sq * params.p
    return (real_part**2 + k1sq**2 * params.delta**2) / d**2


def critical_power(params, delta_tol=0.0, beta_rtol=1e-12):
    """Drive power at which coherent transmission vanishes, or None.

    Exists only on resonance and for beta <= 0; beta = 0 gives the
    classical critical coupling at p = 0. ``beta_rtol`` (relative to
    Gamma + gamma) absorbs rounding in |k|^2.
    """
    scale = params.big_gamma + params.gamma
    if abs(params.delta) > delta_tol or params.beta > beta_rtol * scale:
        return None
    k1sq = abs(params.k1) ** 2
    if k1sq == 0:
        return None
    return max(scale * (params.gamma_c - params.gamma) / (2 * k1sq), 0.0)


def single_atom_g2_transmitted(params):
    k1sq = abs(params.k1) ** 2
    beta = params.big_gamma + params.gamma - k1sq
    denom = params.delta**2 + 2 * k1sq * params.p + beta**2
    if denom == 0:
        raise UndefinedCorrelation("transmitted power vanishes")
    num = (2 * params.delta**2 + k1sq**2 - 2 * beta**2 + 4 * k1sq * params.p) * k1sq**2
    return 1 + num / denom**2


def single_atom_g2_at_criticality(params):
    """g2_T evaluated on the quantum critical point (beta < 0)."""
    if params.beta == 0:
        raise UndefinedCorrelation("g2_T diverges at classical critical coupling")
    k1sq = abs(params.k1) ** 2
    return (k1sq - 3 * params.beta) * (params.big_gamma + params.gamma) / params.beta**2


def single_oscillator_critical_amplitudes(delta, k1, k2):
    """Classical (t, r) of one resonator at critical coupling gamma = gamma_c."""
    den = 1j * delta + abs(k1) ** 2
    return complex(1j * delta / den), complex(-k1 * np.conj(k2) / den)


def two_atom_lowpower_g2_reflected(delta, k1, k2):
    """Weak-drive g2 of the reflected field.

    Derived for identical emitters, antisymmetric detunings +-delta, no
    intrinsic damping and a quarter-wave (pi/2) separation.
    """
    a, b = abs(k1) ** 2, abs(k2) ** 2
    s = a + b
    num = b**2 * (a**2 + 6 * a * b + b**2 + 4 * delta**2) ** 2
    den = (s**3 + 4 * s * delta**2) ** 2
    return num / den


def two_atom_lowpower_reflectivity(delta, k1, k2):
    """Weak-drive power reflectivity for the same configuration."""
    a, b = abs(k1) ** 2, abs(k2) ** 2
    num = 16 * a * b * (a**2 + 2 * a * b + b**2 + 4 * delta**2)
    den = (a**2 + 6 * a * b + b**2 + 4 * delta**2) ** 2
    return num / den


def transparency_elements(delta, k1, k2, alpha):
    """Bright-state population and its coherence with |g> at transparency.

    For phi an odd multiple of pi these are rho_ss and rho_sg; for even
    multiples the same values appear as rho_aa and rho_ag.
    """
    a, b = abs(k1) ** 2, abs(k2) ** 2
    den = (a - b) ** 2 + 8 * a * abs(alpha) ** 2 + 4 * delta**2
    pop = 8 * a * abs(alpha) ** 2 / den
    coh = 2 * math.sqrt(2) * k1 * alpha * (a - b - 2j * delta) / den
    return float(pop), complex(coh)


def classical_two_atom_transmission(delta_a, delta_b, k_alpha, k_beta, phi):
    """|t_fwd|^2 = |t_bwd|^2 for two lossless resonators with mirrored couplings.

    Couplings: k_a1 = k_b2 = k_alpha, k_b1 = k_a2 = k_beta.
    """
    a, b = abs(k_alpha) ** 2, abs(k_beta) ** 2
    big_gamma = 0.5 * (a + b)
    g_ab = np.conj(k_alpha) * k_beta * np.exp(1j * phi)
    g_ba = k_beta * np.conj(k_alpha) * np.exp(1j * phi)
    half = (a - b) ** 2 / 4
    num = (delta_a**2 + half) * (delta_b**2 + half)
    den = abs(g_ab * g_ba - (1j * delta_a + big_gamma) * (1j * delta_b + big_gamma)) ** 2
    with np.errstate(divide="ignore", invalid="ignore"):
        return float(np.float64(num) / np.float64(den))

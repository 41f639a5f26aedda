"""Physical system description: emitters, couplings, propagation phases, drive.

Rates (detunings, damping, |k|^2) share one user-chosen unit. Choosing it so
that (|k1|^2 + |k2|^2)/2 = 1 puts results on the usual Gamma-normalised axes.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field

import numpy as np

from . import hilbert
from .errors import ConfigError


def coupling_from_rate(rate):
    """Signed rate shorthand -> real coupling: ``sign(rate) * sqrt(|rate|)``.

    Real couplings to the two ports may carry opposite signs, so a negative
    rate encodes a negative amplitude with the same |k|^2.
    """
    return math.copysign(math.sqrt(abs(rate)), rate)


@dataclass(frozen=True)
class Emitter:
    delta: float = 0.0
    gamma: float = 0.0
    k1: complex = 0.0
    k2: complex = 0.0
    phi: float = 0.0

    def __post_init__(self):
        for name in ("delta", "gamma", "phi"):
            value = getattr(self, name)
            if isinstance(value, complex) or not math.isfinite(value):
                raise ConfigError(f"emitter field {name!r} must be a finite real, got {value!r}")
        for name in ("k1", "k2"):
            value = complex(getattr(self, name))
            if not (math.isfinite(value.real) and math.isfinite(value.imag)):
                raise ConfigError(f"emitter field {name!r} must be finite, got {value!r}")
        if self.gamma < 0:
            raise ConfigError(f"emitter field 'gamma' must be >= 0, got {self.gamma}")

    @classmethod
    def from_rates(cls, delta=0.0, gamma=0.0, k1_rate=0.0, k2_rate=0.0, phi=0.0):
        """Build from signed coupling rates |k|^2 instead of amplitudes."""
        return cls(delta, gamma, coupling_from_rate(k1_rate), coupling_from_rate(k2_rate), phi)


@dataclass(frozen=True)
class EmitterChain:
    """Emitters ordered along the waveguide, port-1 side first."""

    emitters: tuple[Emitter, ...]

    def __post_init__(self):
        emitters = tuple(self.emitters)
        object.__setattr__(self, "emitters", emitters)
        if not emitters:
            raise ConfigError("chain needs at least one emitter")
        if emitters[0].phi != 0:
            raise ConfigError(f"first emitter must have phi = 0, got {emitters[0].phi}")
        if len(emitters) > hilbert.MAX_ATOMS:
            raise ConfigError(f"at most {hilbert.MAX_ATOMS} emitters supported, got {len(emitters)}")
        phis = [e.phi for e in emitters]
        if any(b < a for a, b in zip(phis, phis[1:])):
            warnings.warn("emitter phases are not monotone along the chain", stacklevel=3)

    def __len__(self):
        return len(self.emitters)

    @property
    def n_atoms(self):
        return len(self.emitters)

    @property
    def phi_n(self):
        return self.emitters[-1].phi

    @property
    def deltas(self):
        return np.array([e.delta for e in self.emitters], dtype=float)

    @property
    def gammas(self):
        return np.array([e.gamma for e in self.emitters], dtype=float)

    @property
    def phis(self):
        return np.array([e.phi for e in self.emitters], dtype=float)

    @property
    def k1(self):
        return np.array([e.k1 for e in self.emitters], dtype=complex)

    @property
    def k2(self):
        return np.array([e.k2 for e in self.emitters], dtype=complex)


@dataclass(frozen=True)
class Drive:
    """Coherent input amplitudes, forward (port 1) and backward (port 2)."""

    forward: complex = 0.0
    backward: complex = 0.0

    @classmethod
    def forward_power(cls, p):
        return cls(forward=math.sqrt(p))

    @classmethod
    def backward_power(cls, p):
        return cls(backward=math.sqrt(p))

    @property
    def vector(self):
        return np.array([self.forward, self.backward], dtype=complex)


@dataclass(frozen=True, eq=False)
class DecayMatrix:
    """Waveguide-mediated dissipative couplings Gamma (N x N)."""

    matrix: np.ndarray = field(repr=False)

    def __array__(self, dtype=None, copy=None):
        return np.asarray(self.matrix, dtype=dtype)

    @property
    def n(self):
        return self.matrix.shape[0]


def build_k_matrix(chain):
    """Port coupling matrix K; row i = (k_i1 e^{i phi_i}, k_i2 e^{i(phi_N - phi_i)})."""
    phis = chain.phis
    return np.column_stack([
        chain.k1 * np.exp(1j * phis),
        chain.k2 * np.exp(1j * (chain.phi_n - phis)),
    ])


def build_decay_matrix(chain):
    k1, k2, phis = chain.k1, chain.k2, chain.phis
    n = chain.n_atoms
    g = np.zeros((n, n), dtype=complex)
    for i in range(n):
        g[i, i] = 0.5 * (abs(k1[i]) ** 2 + abs(k2[i]) ** 2)
        for j in range(i + 1, n):
            phase = np.exp(1j * (phis[j] - phis[i]))
            # i<j couples through the backward mode, i>j through the forward mode
            g[i, j] = k2[i] * np.conj(k2[j]) * phase
            g[j, i] = np.conj(k1[i]) * k1[j] * phase
    return DecayMatrix(g)


def validate_energy_conservation(chain, decay=None):
    """Max entrywise |K K^dagger - (Gamma + Gamma^dagger)|.

    ``decay`` overrides the matrix built from ``chain`` (to check a Gamma
    obtained elsewhere).
    """
    k = build_k_matrix(chain)
    g = build_decay_matrix(chain).matrix if decay is None else np.asarray(decay, dtype=complex)
    return float(np.max(np.abs(k @ k.conj().T - (g + g.conj().T))))


def drive_amplitudes(chain, drive):
    """Per-emitter complex Rabi amplitudes, K @ (eps_fwd, eps_bwd)."""
    return build_k_matrix(chain) @ drive.vector


def build_hamiltonian(chain, drive):
    """Rotating-frame Hamiltonian with number-operator detuning terms.

    H = sum_i Delta_i S_i^+ S_i^- + i sum_i (Omega_i S_i^+ - Omega_i^* S_i^-),
    with Omega = K (eps_fwd, eps_bwd)^T.
    """
    n = chain.n_atoms
    omegas = drive_amplitudes(chain, drive)
    h = np.zeros((2**n, 2**n), dtype=complex)
    for i, (emitter, omega) in enumerate(zip(chain.emitters, omegas)):
        sm = hilbert.lowering_operator(i, n)
        sp = sm.conj().T
        h += emitter.delta * (sp @ sm)
        h += 1j * (omega * sp - np.conj(omega) * sm)
    return 0.5 * (h + h.conj().T)

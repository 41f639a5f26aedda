"""Classical temporal coupled-mode theory for N linear resonators.

Steady state of dc/dt = -i Delta c - (Gamma + diag(gamma)) c + K e_in with
outputs e_out = C (e_in - K^+ c), e_out = (backward at port 1, forward at
port 2) and C the bare-waveguide antidiagonal phase matrix.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import SingularResponse
from .model import DecayMatrix, build_decay_matrix, build_k_matrix, validate_energy_conservation

COND_LIMIT = 1e13


@dataclass(frozen=True, eq=False)
class ClassicalSystem:
    deltas: np.ndarray
    decay: DecayMatrix = field(repr=False)
    k_matrix: np.ndarray = field(repr=False)
    phi_n: float = 0.0
    gammas: np.ndarray = None

    def __post_init__(self):
        n = len(self.deltas)
        if self.gammas is None:
            object.__setattr__(self, "gammas", np.zeros(n))

    @classmethod
    def from_chain(cls, chain):
        return cls(
            deltas=chain.deltas,
            decay=build_decay_matrix(chain),
            k_matrix=build_k_matrix(chain),
            phi_n=chain.phi_n,
            gammas=chain.gammas,
        )

    @property
    def n(self):
        return len(self.deltas)

    def energy_deviation(self):
        k = self.k_matrix
        g = self.decay.matrix
        return float(np.max(np.abs(k @ k.conj().T - (g + g.conj().T))))

    def response_matrix(self):
        """i Delta + Gamma + diag(gamma); intrinsic loss folds into the diagonal."""
        return 1j * np.diag(self.deltas) + self.decay.matrix + np.diag(self.gammas)

    def direct_matrix(self):
        ph = np.exp(1j * self.phi_n)
        return np.array([[0, ph], [ph, 0]], dtype=complex)


def classical_steady_amplitudes(sys, e_in):
    e_in = np.asarray(e_in, dtype=complex)
    m = sys.response_matrix()
    if np.linalg.cond(m) > COND_LIMIT:
        raise SingularResponse("undamped mode on resonance: response matrix is singular")
    return np.linalg.solve(m, sys.k_matrix @ e_in)


def classical_outputs(sys, e_in):
    e_in = np.asarray(e_in, dtype=complex)
    c = classical_steady_amplitudes(sys, e_in)
    return sys.direct_matrix() @ (e_in - sys.k_matrix.conj().T @ c)


def scattering_matrix(sys):
    """Two-port S with columns e_out for unit inputs; S[1,0] = t_fwd, S[0,1] = t_bwd."""
    return np.column_stack([classical_outputs(sys, (1, 0)), classical_outputs(sys, (0, 1))])


def classical_transmissions(sys):
    s = scattering_matrix(sys)
    return s[1, 0], s[0, 1]


__all__ = [
    "ClassicalSystem",
    "classical_outputs",
    "classical_steady_amplitudes",
    "classical_transmissions",
    "scattering_matrix",
    "validate_energy_conservation",
]

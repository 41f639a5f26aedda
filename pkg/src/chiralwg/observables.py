"""Output-field operators and the scalar statistics built from them.

Vacuum input terms are omitted from the output operators; they do not
contribute to normally ordered moments.
"""

from __future__ import annotations

from dataclasses import asdict, dataclass, field
from typing import Optional

import numpy as np

from . import hilbert
from .errors import AmbiguousDrive, DimensionMismatch, WrongSystemSize

IMAG_TOL = 1e-10
G2_POWER_FLOOR = 1e-14


@dataclass(frozen=True, eq=False)
class OutputOperator:
    """Field O = scalar_part * I + operator_part."""

    scalar_part: complex
    operator_part: np.ndarray = field(repr=False)

    def full(self):
        dim = self.operator_part.shape[0]
        return self.scalar_part * np.eye(dim, dtype=complex) + self.operator_part


def output_operator_transmitted(chain, drive):
    """Port-2 forward output: e^{i phi_N} eps_fwd - sum_i k_i1^* e^{i(phi_N - phi_i)} S_i^-."""
    n = chain.n_atoms
    phases = np.exp(1j * (chain.phi_n - chain.phis))
    op = sum(-np.conj(k) * ph * hilbert.lowering_operator(i, n)
             for i, (k, ph) in enumerate(zip(chain.k1, phases)))
    return OutputOperator(np.exp(1j * chain.phi_n) * drive.forward, np.asarray(op, dtype=complex))


def output_operator_reflected(chain, drive):
    """Port-1 backward output: e^{i phi_N} eps_bwd - sum_i k_i2^* e^{i phi_i} S_i^-."""
    n = chain.n_atoms
    phases = np.exp(1j * chain.phis)
    op = sum(-np.conj(k) * ph * hilbert.lowering_operator(i, n)
             for i, (k, ph) in enumerate(zip(chain.k2, phases)))
    return OutputOperator(np.exp(1j * chain.phi_n) * drive.backward, np.asarray(op, dtype=complex))


def _real(value, what):
    if abs(value.imag) > IMAG_TOL * max(1.0, abs(value.real)):
        raise ArithmeticError(f"{what} has imaginary part {value.imag:.3e}; convention error?")
    return float(value.real)


def field_moments(rho, o):
    """(<O>, <O^+ O>, <O^+ O^+ O O>) in state ``rho``."""
    rho = np.asarray(rho, dtype=complex)
    if rho.shape != o.operator_part.shape:
        raise DimensionMismatch(
            f"state of shape {rho.shape} does not match field operator {o.operator_part.shape}"
        )
    a = o.full()
    ad = a.conj().T
    mean = complex(np.trace(rho @ a))
    power = _real(np.trace(rho @ ad @ a), "<O+O>")
    two_photon = _real(np.trace(rho @ ad @ ad @ a @ a), "<O+O+OO>")
    return mean, power, two_photon


@dataclass(frozen=True)
class OutputStats:
    """Scalar observables for one parameter point.

    "Transmitted" is the output on the far side from the driven port, so for
    a backward-only drive ``t`` is the backward transmission. Ratios that are
    undefined (zero input, zero output power for g2) are ``None``.
    """

    direction: str
    p: float
    t: Optional[complex]
    r: Optional[complex]
    T: Optional[float]
    R: Optional[float]
    I_c_T: float
    I_inc_T: float
    I_c_R: float
    I_inc_R: float
    g2_T: Optional[float]
    g2_R: Optional[float]
    purity: float
    leakage: Optional[float]
    two_photon_T: float = 0.0
    two_photon_R: float = 0.0

    def as_dict(self):
        return asdict(self)


def drive_direction(drive):
    fwd, bwd = drive.forward != 0, drive.backward != 0
    if fwd and bwd:
        raise AmbiguousDrive("both ports driven; use field_moments for the raw moments")
    return "backward" if bwd else "forward"


def _g2(two_photon, power, p):
    if power < G2_POWER_FLOOR * max(p, np.finfo(float).tiny) or power <= 0:
        return None
    return two_photon / power**2


def compute_stats(chain, drive, rho):
    direction = drive_direction(drive)
    trans = output_operator_transmitted(chain, drive)
    refl = output_operator_reflected(chain, drive)
    if direction == "backward":
        trans, refl = refl, trans
        e_in = drive.backward
    else:
        e_in = drive.forward
    p = abs(e_in) ** 2

    mean_t, power_t, two_t = field_moments(rho, trans)
    mean_r, power_r, two_r = field_moments(rho, refl)
    ic_t, ic_r = abs(mean_t) ** 2, abs(mean_r) ** 2
    driven = p > 0
    T = power_t / p if driven else None
    R = power_r / p if driven else None
    return OutputStats(
        direction=direction,
        p=p,
        t=mean_t / e_in if driven else None,
        r=mean_r / e_in if driven else None,
        T=T,
        R=R,
        I_c_T=ic_t,
        I_inc_T=power_t - ic_t,
        I_c_R=ic_r,
        I_inc_R=power_r - ic_r,
        g2_T=_g2(two_t, power_t, p),
        g2_R=_g2(two_r, power_r, p),
        purity=hilbert.purity(np.asarray(rho)),
        leakage=1.0 - T - R if driven else None,
        two_photon_T=two_t,
        two_photon_R=two_r,
    )


@dataclass(frozen=True)
class CollectiveElements:
    """Two-atom state in the basis {|e>, |s>, |a>, |g>}."""

    p_e: float
    p_s: float
    p_a: float
    p_g: float
    rho_sg: complex
    rho_ag: complex
    rho_ea: complex
    rho_es: complex
    matrix: np.ndarray = field(repr=False, compare=False)


_R2 = 1 / np.sqrt(2)
# columns |e>, |s>, |a>, |g> in the product basis |ee>, |eg>, |ge>, |gg>
COLLECTIVE_BASIS = np.array([
    [1, 0, 0, 0],
    [0, _R2, _R2, 0],
    [0, _R2, -_R2, 0],
    [0, 0, 0, 1],
], dtype=complex)


def collective_populations(rho):
    rho = np.asarray(rho, dtype=complex)
    if rho.shape != (4, 4):
        raise WrongSystemSize(f"collective basis needs two atoms (4x4 state), got {rho.shape}")
    m = COLLECTIVE_BASIS.conj().T @ rho @ COLLECTIVE_BASIS
    e, s, a, g = range(4)
    return CollectiveElements(
        p_e=float(m[e, e].real),
        p_s=float(m[s, s].real),
        p_a=float(m[a, a].real),
        p_g=float(m[g, g].real),
        rho_sg=complex(m[s, g]),
        rho_ag=complex(m[a, g]),
        rho_ea=complex(m[e, a]),
        rho_es=complex(m[e, s]),
        matrix=m,
    )


def steady_stats(chain, drive):
    """Convenience: assemble, solve and evaluate in one call."""
    from .dynamics import assemble_liouvillian, solve_steady

    rho = solve_steady(assemble_liouvillian(chain, drive), chain, drive)
    return compute_stats(chain, drive, rho), rho

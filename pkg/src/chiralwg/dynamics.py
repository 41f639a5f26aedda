"""Master-equation superoperator, steady states and RK4 time evolution.

Vectorisation is column stacking, vec(A rho B) = (B^T kron A) vec(rho).
The dissipator keeps the normalisation in which an isolated emitter's
excited population decays at rate 2 (Gamma_ii + gamma_i).
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field

import numpy as np

from . import hilbert
from .errors import DimensionMismatch, NonUniqueSteadyState, SolverSingular, StepTooLarge
from .model import build_decay_matrix, build_hamiltonian, build_k_matrix

logger = logging.getLogger(__name__)

RANK_TOL = 1e-10
STEADY_RESIDUAL_TOL = 1e-9
DRIFT_TOL = 1e-6


@dataclass(frozen=True, eq=False)
class Superoperator:
    matrix: np.ndarray = field(repr=False)

    def __array__(self, dtype=None, copy=None):
        return np.asarray(self.matrix, dtype=dtype)

    @property
    def hilbert_dim(self):
        return int(round(np.sqrt(self.matrix.shape[0])))

    def apply(self, rho):
        """d rho/dt as a matrix."""
        rho = np.asarray(rho, dtype=complex)
        return hilbert.unvec(self.matrix @ hilbert.vec(rho), self.hilbert_dim)


@dataclass(frozen=True, eq=False)
class DensityMatrix:
    """State plus the route that produced it ("direct", "evolution", "given")."""

    rho: np.ndarray = field(repr=False)
    method: str = "given"

    def __array__(self, dtype=None, copy=None):
        return np.asarray(self.rho, dtype=dtype)

    @property
    def dim(self):
        return self.rho.shape[0]

    @property
    def n_atoms(self):
        return int(round(np.log2(self.dim)))

    def purity(self):
        return hilbert.purity(self.rho)


def unitary_part(h):
    """-i[H, rho]."""
    return -1j * (hilbert.spre(h) - hilbert.spost(h))


def local_dissipator(chain):
    """-sum_i (Gamma_ii + gamma_i)(S+S- rho - 2 S- rho S+ + rho S+S-)."""
    n = chain.n_atoms
    gamma = build_decay_matrix(chain).matrix
    out = np.zeros((4**n, 4**n), dtype=complex)
    for i, emitter in enumerate(chain.emitters):
        sm = hilbert.lowering_operator(i, n)
        sp = sm.conj().T
        num = sp @ sm
        rate = gamma[i, i].real + emitter.gamma
        out -= rate * (hilbert.spre(num) - 2 * hilbert.sprepost(sm, sp) + hilbert.spost(num))
    return out


def cross_dissipator(chain):
    """Waveguide-mediated pair terms, i < j, including the Hermitian conjugate
    of every term in the bracket."""
    n = chain.n_atoms
    gamma = build_decay_matrix(chain).matrix
    ops = hilbert.lowering_operators(n)
    out = np.zeros((4**n, 4**n), dtype=complex)
    for i in range(n):
        for j in range(i + 1, n):
            smi, smj = ops[i], ops[j]
            spi, spj = smi.conj().T, smj.conj().T
            g_ij, g_ji = gamma[i, j], gamma[j, i]
            bracket = (
                g_ij * hilbert.spre(spi @ smj)
                - (g_ij + np.conj(g_ji)) * hilbert.sprepost(smj, spi)
                + np.conj(g_ji) * hilbert.spost(spi @ smj)
            )
            conjugate = (
                np.conj(g_ij) * hilbert.spost(spj @ smi)
                - (np.conj(g_ij) + g_ji) * hilbert.sprepost(smi, spj)
                + g_ji * hilbert.spre(spj @ smi)
            )
            out -= bracket + conjugate
    return out


def assemble_liouvillian(chain, drive):
    h = build_hamiltonian(chain, drive)
    return Superoperator(unitary_part(h) + local_dissipator(chain) + cross_dissipator(chain))


def steady_residual(liouvillian, rho):
    return float(np.max(np.abs(np.asarray(liouvillian) @ hilbert.vec(np.asarray(rho)))))


def _trace_row(dim):
    return hilbert.vec(np.eye(dim)).real.astype(complex)


def null_space_dimension(liouvillian, tol=RANK_TOL):
    s = np.linalg.svd(np.asarray(liouvillian), compute_uv=False)
    if s[0] == 0:
        return len(s)
    return int(np.sum(s < tol * s[0]))


def _finish(rho, method):
    rho = 0.5 * (rho + rho.conj().T)
    rho = rho / np.trace(rho).real
    return DensityMatrix(rho, method)


def solve_steady(liouvillian, chain=None, drive=None, rank_tol=RANK_TOL):
    """Trace-one null vector of ``liouvillian``.

    Row 0 of L (the equation for d rho_00/dt, a population row and hence
    redundant given trace preservation) is replaced by the trace functional
    and the bordered system is solved directly. If L has a null space of
    dimension > 1 the state reached from |g><g| by time evolution is returned
    instead; that needs ``chain`` and ``drive``.
    """
    lmat = np.asarray(liouvillian, dtype=complex)
    d2 = lmat.shape[0]
    dim = int(round(np.sqrt(d2)))
    if lmat.shape != (d2, d2) or dim * dim != d2:
        raise DimensionMismatch(f"superoperator must be square with side dim^2, got {lmat.shape}")

    if null_space_dimension(lmat, rank_tol) > 1:
        logger.info("steady state not unique; falling back to time evolution from |g><g|")
        if chain is None or drive is None:
            raise NonUniqueSteadyState("degenerate null space and no chain/drive for the evolution fallback")
        return _steady_by_evolution(lmat, chain, drive)

    a = lmat.copy()
    a[0, :] = _trace_row(dim)
    b = np.zeros(d2, dtype=complex)
    b[0] = 1.0
    try:
        x = np.linalg.solve(a, b)
    except np.linalg.LinAlgError as exc:
        raise SolverSingular(str(exc)) from exc
    if not np.all(np.isfinite(x)):
        raise SolverSingular("non-finite solution of the bordered system")
    state = _finish(hilbert.unvec(x, dim), "direct")
    res = steady_residual(lmat, state.rho)
    if res > STEADY_RESIDUAL_TOL * max(1.0, np.max(np.abs(lmat))):
        raise SolverSingular(f"steady-state residual {res:.3e} too large")
    return state


def _steady_by_evolution(lmat, chain, drive, max_rounds=20):
    dt, t_final = default_time_grid(chain)
    n = chain.n_atoms
    rho = hilbert.ground_state(n)
    for _ in range(max_rounds):
        rho = np.asarray(evolve(chain, drive, rho, t_final, dt))
        if steady_residual(lmat, rho) < STEADY_RESIDUAL_TOL:
            return _finish(rho, "evolution")
    raise NonUniqueSteadyState(
        f"time evolution did not converge after {max_rounds * t_final:g} time units"
    )


def default_time_grid(chain):
    """(dt, t_final) = (1e-3 / rate_max, 50 / rate_min) with rate_i = Gamma_ii + gamma_i."""
    rates = np.real(np.diag(build_decay_matrix(chain).matrix)) + chain.gammas
    positive = rates[rates > 0]
    if positive.size == 0:
        return 1e-3, 50.0
    return 1e-3 / positive.max(), 50.0 / positive.min()


def _generator_pieces(chain, drive):
    """B = -iH - A and jump operators J_k with d rho/dt = B rho + rho B^+ + sum_k J_k rho J_k^+.

    A = sum_ij G_ij S_i^+ S_j^- with G = Gamma + diag(gamma); the jump matrix
    G + G^+ = K K^+ + 2 diag(gamma) is diagonalised into at most N channels.
    """
    n = chain.n_atoms
    ops = hilbert.lowering_operators(n)
    g = build_decay_matrix(chain).matrix + np.diag(chain.gammas)
    h = build_hamiltonian(chain, drive)
    a = sum(g[i, j] * (ops[i].conj().T @ ops[j]) for i in range(n) for j in range(n))
    jump = build_k_matrix(chain) @ build_k_matrix(chain).conj().T + 2 * np.diag(chain.gammas)
    w, u = np.linalg.eigh(0.5 * (jump + jump.conj().T))
    channels = []
    for k in range(n):
        if w[k] > 1e-15:
            channels.append(np.sqrt(w[k]) * sum(np.conj(u[j, k]) * ops[j] for j in range(n)))
    return -1j * h - a, channels


def evolve(chain, drive, rho0, t_final, dt):
    """Fixed-step classical RK4 integration of the master equation in matrix form."""
    if dt <= 0:
        raise ValueError(f"dt must be positive, got {dt}")
    if t_final < dt:
        raise ValueError(f"t_final ({t_final}) must be >= dt ({dt})")
    rho = np.array(np.asarray(rho0), dtype=complex)
    b, channels = _generator_pieces(chain, drive)
    bd = b.conj().T
    jumps = [(j, j.conj().T) for j in channels]

    def rhs(r):
        out = b @ r + r @ bd
        for j, jd in jumps:
            out += j @ r @ jd
        return out

    n_steps = int(round(t_final / dt))
    tr0 = np.trace(rho).real
    for step in range(1, n_steps + 1):
        k1 = rhs(rho)
        k2 = rhs(rho + 0.5 * dt * k1)
        k3 = rhs(rho + 0.5 * dt * k2)
        k4 = rhs(rho + dt * k3)
        rho = rho + (dt / 6.0) * (k1 + 2 * k2 + 2 * k3 + k4)
        if step % 1000 == 0 or step == n_steps:
            _check_drift(rho, tr0, step * dt)
    return DensityMatrix(rho, "evolution")


def _check_drift(rho, tr0, t):
    trace_drift = abs(np.trace(rho) - tr0)
    herm_drift = np.max(np.abs(rho - rho.conj().T))
    if not np.isfinite(trace_drift) or trace_drift > DRIFT_TOL or herm_drift > DRIFT_TOL:
        raise StepTooLarge(
            f"at t={t:g}: trace drift {trace_drift:.2e}, hermiticity drift {herm_drift:.2e}"
        )

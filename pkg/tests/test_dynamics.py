import math

import numpy as np
import pytest

from chiralwg import dynamics, hilbert
from chiralwg.dynamics import (
    DensityMatrix,
    Superoperator,
    assemble_liouvillian,
    default_time_grid,
    evolve,
    null_space_dimension,
    solve_steady,
    steady_residual,
)
from chiralwg.errors import NonUniqueSteadyState, SolverSingular, StepTooLarge
from chiralwg.model import Drive, Emitter, EmitterChain, build_decay_matrix, build_hamiltonian
from chiralwg.observables import collective_populations
from chiralwg.validation import random_chain, random_density_matrix

from conftest import PI, antisym_chain, forward, single_chain

FIG7 = dict(delta=0.0, gamma=0.05, k1_rate=1.4, k2_rate=0.6)


def literal_rhs(chain, drive, rho):
    """Master equation written out operator by operator in matrix form."""
    n = chain.n_atoms
    h = build_hamiltonian(chain, drive)
    g = build_decay_matrix(chain).matrix
    s = hilbert.lowering_operators(n)
    sp = [x.conj().T for x in s]
    out = -1j * (h @ rho - rho @ h)
    for i, e in enumerate(chain.emitters):
        out -= (g[i, i].real + e.gamma) * (sp[i] @ s[i] @ rho - 2 * s[i] @ rho @ sp[i] + rho @ sp[i] @ s[i])
    for i in range(n):
        for j in range(i + 1, n):
            term = (g[i, j] * sp[i] @ s[j] @ rho - (g[i, j] + np.conj(g[j, i])) * s[j] @ rho @ sp[i]
                    + np.conj(g[j, i]) * rho @ sp[i] @ s[j])
            out -= term + term.conj().T
    return out


def test_liouvillian_matches_literal_master_equation(rng):
    for _ in range(20):
        n = int(rng.integers(1, 4))
        chain = random_chain(rng, n)
        drive = Drive(complex(*rng.normal(size=2)), complex(*rng.normal(size=2)))
        rho = random_density_matrix(rng, 2**n)
        got = assemble_liouvillian(chain, drive).apply(rho)
        np.testing.assert_allclose(got, literal_rhs(chain, drive, rho), atol=1e-12)


def test_evolution_generator_matches_liouvillian(rng):
    for _ in range(20):
        n = int(rng.integers(1, 4))
        chain = random_chain(rng, n)
        drive = Drive(complex(*rng.normal(size=2)), 0)
        rho = random_density_matrix(rng, 2**n)
        b, jumps = dynamics._generator_pieces(chain, drive)
        compact = b @ rho + rho @ b.conj().T + sum(j @ rho @ j.conj().T for j in jumps)
        np.testing.assert_allclose(compact, assemble_liouvillian(chain, drive).apply(rho), atol=1e-12)


def test_single_atom_decay_steady_and_rate():
    chain = EmitterChain([Emitter(k1=1.0, k2=1.0)])  # Gamma_11 = 1
    rho = solve_steady(assemble_liouvillian(chain, Drive()))
    np.testing.assert_allclose(rho.rho, hilbert.ground_state(1), atol=1e-14)
    rho_t = evolve(chain, Drive(), hilbert.excited_state(1), 1.0, 1e-3)
    assert rho_t.rho[0, 0].real == pytest.approx(math.exp(-2.0), abs=1e-6)


def test_fig7_coherence_matches_closed_form():
    chain = single_chain(**FIG7)
    p = 0.13125
    rho = solve_steady(assemble_liouvillian(chain, forward(p)))
    s_minus = np.trace(rho.rho @ hilbert.lowering_operator(0, 1))
    t = 1 - np.conj(chain.k1[0]) * s_minus / math.sqrt(p)
    assert abs(t) ** 2 < 1e-12


@pytest.mark.parametrize("phi", [PI, 2 * PI])
def test_transparency_state_is_null_vector(phi):
    chain = antisym_chain(1.0, 1.2, 0.8, phi)
    lmat = assemble_liouvillian(chain, forward(1.0))
    rho = solve_steady(lmat)
    assert steady_residual(lmat, rho.rho) < 1e-10
    assert rho.method == "direct"


def test_zero_drive_gives_ground_state(rng):
    for _ in range(5):
        chain = random_chain(rng, int(rng.integers(1, 4)))
        rho = solve_steady(assemble_liouvillian(chain, Drive()))
        np.testing.assert_allclose(rho.rho, hilbert.ground_state(chain.n_atoms), atol=1e-12)


def test_odd_n_transparency_elements_vanish():
    rho = solve_steady(assemble_liouvillian(antisym_chain(1.0, 1.2, 0.8, PI), forward(1.0)))
    c = collective_populations(rho)
    assert abs(c.p_e) < 1e-9 and abs(c.rho_ea) < 1e-9 and abs(c.rho_ag) < 1e-9


def test_returned_state_is_physical(rng):
    for _ in range(20):
        chain = random_chain(rng, int(rng.integers(1, 4)))
        rho = solve_steady(assemble_liouvillian(chain, forward(float(rng.uniform(0.01, 5)))))
        assert np.max(np.abs(rho.rho - rho.rho.conj().T)) < 1e-10
        assert abs(np.trace(rho.rho) - 1) < 1e-10
        assert np.linalg.eigvalsh(rho.rho).min() >= -1e-8
        assert 0 <= rho.purity() <= 1 + 1e-10


def test_trace_and_hermiticity_preservation(rng):
    for _ in range(100):
        n = int(rng.integers(1, 3))
        chain = random_chain(rng, n)
        lmat = assemble_liouvillian(chain, Drive(complex(*rng.normal(size=2)), complex(*rng.normal(size=2))))
        drho = lmat.apply(random_density_matrix(rng, 2**n))
        assert abs(np.trace(drho)) < 1e-12
        assert np.max(np.abs(drho - drho.conj().T)) < 1e-12


def test_trace_functional_annihilates_liouvillian(rng):
    chain = random_chain(rng, 3)
    lmat = assemble_liouvillian(chain, forward(0.7)).matrix
    row = hilbert.vec(np.eye(8))
    assert np.max(np.abs(row @ lmat)) < 1e-12


def test_evolve_matches_solver_fig2a():
    chain = antisym_chain(1.0, 1.2, 0.8, PI, 0.05)
    drive = forward(1.0)
    dt, t_final = default_time_grid(chain)
    assert t_final == pytest.approx(50 / 1.05)
    rho_t = evolve(chain, drive, hilbert.ground_state(2), t_final, dt)
    rho_s = solve_steady(assemble_liouvillian(chain, drive))
    assert hilbert.trace_distance(rho_t.rho, rho_s.rho) < 1e-6


def test_evolve_fixed_point():
    chain = antisym_chain(0.5, 1.2, 0.8, PI / 2, 0.2)
    drive = forward(1.0)
    rho_s = solve_steady(assemble_liouvillian(chain, drive))
    rho_t = evolve(chain, drive, rho_s.rho, 5.0, 1e-3)
    np.testing.assert_allclose(rho_t.rho, rho_s.rho, atol=1e-8)


def test_evolve_argument_checks():
    chain = single_chain()
    with pytest.raises(ValueError):
        evolve(chain, Drive(), hilbert.ground_state(1), 1.0, 0.0)
    with pytest.raises(ValueError):
        evolve(chain, Drive(), hilbert.ground_state(1), 1e-4, 1e-3)


def test_evolve_step_too_large():
    with pytest.raises(StepTooLarge):
        evolve(single_chain(), forward(1.0), hilbert.excited_state(1), 30.0, 3.0)


def test_degenerate_null_space_falls_back_to_evolution():
    # an emitter with no coupling and no damping keeps both populations stationary
    chain = EmitterChain([Emitter(delta=0.3)])
    lmat = assemble_liouvillian(chain, Drive())
    assert null_space_dimension(lmat) == 2
    rho = solve_steady(lmat, chain, Drive())
    assert rho.method == "evolution"
    np.testing.assert_allclose(rho.rho, hilbert.ground_state(1), atol=1e-12)
    with pytest.raises(NonUniqueSteadyState):
        solve_steady(lmat)


def test_fallback_that_never_settles(monkeypatch):
    chain = EmitterChain([Emitter(delta=0.3)])
    lmat = assemble_liouvillian(chain, Drive())
    monkeypatch.setattr(dynamics, "evolve", lambda *a, **k: DensityMatrix(np.eye(2) / 2 + 0.3 * np.eye(2)[::-1]))
    monkeypatch.setattr(dynamics, "default_time_grid", lambda chain: (1e-3, 1.0))
    with pytest.raises(NonUniqueSteadyState):
        solve_steady(Superoperator(lmat.matrix + 0), chain, Drive())


def test_singular_linear_solve(monkeypatch):
    def broken(*args, **kwargs):
        raise np.linalg.LinAlgError("Singular matrix")

    monkeypatch.setattr(np.linalg, "solve", broken)
    with pytest.raises(SolverSingular):
        solve_steady(assemble_liouvillian(single_chain(), forward(1.0)))

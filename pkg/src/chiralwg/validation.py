"""Oracle-equivalence and invariant checks behind ``chiralwg validate``.

Every check reports its measured deviation next to its tolerance. The
Liouvillian builder is a parameter so that deliberately broken builders can
be shown to fail.
"""

from __future__ import annotations

import itertools
import math
import sys
import warnings
from dataclasses import dataclass

import numpy as np

from . import hilbert, oracles
from .dynamics import assemble_liouvillian, default_time_grid, evolve, solve_steady
from .model import (
    Drive,
    Emitter,
    EmitterChain,
    build_decay_matrix,
    build_hamiltonian,
    validate_energy_conservation,
)
from .observables import collective_populations, compute_stats
from .tcmt import ClassicalSystem, classical_transmissions

PI = math.pi


@dataclass(frozen=True)
class CheckResult:
    name: str
    passed: bool
    deviation: float
    tolerance: float
    detail: str = ""

    def line(self):
        status = "PASS" if self.passed else "FAIL"
        extra = f"  ({self.detail})" if self.detail else ""
        return f"[{status}] {self.name}: deviation {self.deviation:.3e} (tol {self.tolerance:.1e}){extra}"


def random_chain(rng, n, complex_couplings=True, gamma=None, max_rate=2.0):
    phis = np.concatenate([[0.0], np.sort(rng.uniform(0, 2 * PI, n - 1))])
    atoms = []
    for i in range(n):
        k = rng.uniform(0.1, math.sqrt(max_rate), 2)
        if complex_couplings:
            k = k * np.exp(1j * rng.uniform(0, 2 * PI, 2))
        g = rng.uniform(0, 0.5) if gamma is None else gamma
        atoms.append(Emitter(float(rng.uniform(-2, 2)), float(g), complex(k[0]), complex(k[1]), float(phis[i])))
    return EmitterChain(atoms)


def random_density_matrix(rng, dim):
    a = rng.normal(size=(dim, dim)) + 1j * rng.normal(size=(dim, dim))
    rho = a @ a.conj().T
    return rho / np.trace(rho)


def antisym_chain(delta, k1_rate, k2_rate, phi, gamma=0.0):
    return EmitterChain([
        Emitter.from_rates(delta, gamma, k1_rate, k2_rate, 0.0),
        Emitter.from_rates(-delta, gamma, k1_rate, k2_rate, phi),
    ])


def steady_stats(chain, drive, assemble=assemble_liouvillian):
    rho = solve_steady(assemble(chain, drive), chain, drive)
    return compute_stats(chain, drive, rho), rho


def _check(name, tol, fn, strict=False):
    """Run ``fn`` -> (deviation, detail); failures and exceptions become FAIL lines."""
    try:
        dev, detail = fn()
    except Exception as exc:  # a check must never abort the report
        return CheckResult(name, False, math.inf, tol, f"{type(exc).__name__}: {exc}")
    ok = dev <= tol if not strict else dev < tol
    return CheckResult(name, bool(ok and np.isfinite(dev)), float(dev), tol, detail)


# hilbert ---------------------------------------------------------------------

def check_kron_associative(rng):
    mats = [rng.normal(size=(2, 2)) + 1j * rng.normal(size=(2, 2)) for _ in range(3)]
    a, b, c = mats
    return float(np.max(np.abs(hilbert.kronecker(hilbert.kronecker(a, b), c)
                                - hilbert.kronecker(a, hilbert.kronecker(b, c))))), ""


def check_sites_commute():
    dev = 0.0
    for n in (2, 3, 4):
        ops = hilbert.lowering_operators(n)
        for i, j in itertools.permutations(range(n), 2):
            dev = max(dev, float(np.max(np.abs(ops[i] @ ops[j] - ops[j] @ ops[i]))))
    return dev, ""


def check_trace_cyclic(rng):
    a = rng.normal(size=(8, 8)) + 1j * rng.normal(size=(8, 8))
    b = rng.normal(size=(8, 8)) + 1j * rng.normal(size=(8, 8))
    return abs(np.trace(a @ b) - np.trace(b @ a)), ""


# model -----------------------------------------------------------------------

def check_energy_conservation(rng, count=100):
    dev = 0.0
    for _ in range(count):
        dev = max(dev, validate_energy_conservation(random_chain(rng, int(rng.integers(1, 5)))))
    return dev, f"{count} random chains, N <= 4"


def check_hamiltonian_hermitian(rng, count=20):
    dev = 0.0
    for _ in range(count):
        chain = random_chain(rng, int(rng.integers(1, 5)))
        drive = Drive(complex(*rng.normal(size=2)), complex(*rng.normal(size=2)))
        h = build_hamiltonian(chain, drive)
        dev = max(dev, float(np.max(np.abs(h - h.conj().T))))
    return dev, ""


def check_decay_phase_symmetry(rng, count=20):
    dev = 0.0
    for _ in range(count):
        k1, k2 = rng.uniform(0.2, 1.5, 2) * np.exp(1j * rng.uniform(0, 2 * PI, 2))
        phi = float(rng.uniform(0, 2 * PI))

        def gamma12(ph):
            with warnings.catch_warnings():
                warnings.simplefilter("ignore")
                chain = EmitterChain([Emitter(0, 0, k1, k2, 0), Emitter(0, 0, k1, k2, ph)])
            return build_decay_matrix(chain).matrix[0, 1]

        dev = max(dev, abs(gamma12(phi) - np.conj(gamma12(-phi))))
    return dev, ""


# dynamics --------------------------------------------------------------------

def check_trace_preservation(rng, assemble, count=100):
    dev = 0.0
    for _ in range(count):
        n = int(rng.integers(1, 3))
        chain = random_chain(rng, n)
        lmat = assemble(chain, Drive(complex(*rng.normal(size=2)), 0)).matrix
        rho = random_density_matrix(rng, 2**n)
        dev = max(dev, abs(np.trace(hilbert.unvec(lmat @ hilbert.vec(rho)))))
    return dev, f"{count} random states"


def check_hermiticity_preservation(rng, assemble, count=50):
    dev = 0.0
    for _ in range(count):
        n = int(rng.integers(1, 3))
        chain = random_chain(rng, n)
        lmat = assemble(chain, Drive(complex(*rng.normal(size=2)), 0)).matrix
        drho = hilbert.unvec(lmat @ hilbert.vec(random_density_matrix(rng, 2**n)))
        dev = max(dev, float(np.max(np.abs(drho - drho.conj().T))))
    return dev, ""


def check_steady_positivity(rng, assemble, count=20):
    worst = 0.0
    for _ in range(count):
        chain = random_chain(rng, int(rng.integers(1, 3)))
        _, rho = steady_stats(chain, Drive.forward_power(float(rng.uniform(0.01, 5))), assemble)
        worst = max(worst, -float(np.min(np.linalg.eigvalsh(rho.rho))))
    return max(worst, 0.0), "max negative eigenvalue"


def check_transparency_purity(assemble):
    dev = 0.0
    for phi in (PI, 2 * PI):
        for p in (0.1, 1.0, 10.0):
            stats, _ = steady_stats(antisym_chain(1.0, 1.2, 0.8, phi), Drive.forward_power(p), assemble)
            dev = max(dev, 1 - stats.purity, abs(stats.T - 1), abs(stats.R))
    return dev, "max of 1 - purity, |T - 1|, R"


def check_solver_vs_evolution(assemble, gamma=0.2):
    dev = 0.0
    for p, phi in itertools.product((0.1, 1.0, 10.0), (PI / 4, PI / 2, 3 * PI / 4)):
        chain = antisym_chain(0.5, 1.2, 0.8, phi, gamma)
        drive = Drive.forward_power(p)
        rho = solve_steady(assemble(chain, drive), chain, drive)
        dt, t_final = default_time_grid(chain)
        rho_t = evolve(chain, drive, hilbert.ground_state(2), t_final, dt)
        dev = max(dev, hilbert.trace_distance(rho.rho, rho_t.rho))
    return dev, "3x3 (p, phi) grid, trace distance"


# observables -----------------------------------------------------------------

def single_atom_grid():
    for delta in np.linspace(-3, 3, 13):
        for gamma in (0.0, 0.05, 0.5):
            for p in (1e-3, 0.1, 1.0, 10.0):
                yield float(delta), gamma, p


def check_single_atom_antibunching(assemble):
    dev = 0.0
    for delta, gamma, p in single_atom_grid():
        chain = EmitterChain([Emitter.from_rates(delta, gamma, 1.2, 0.8)])
        stats, _ = steady_stats(chain, Drive.forward_power(p), assemble)
        dev = max(dev, abs(stats.two_photon_R))
    return dev, "reflected <O+O+OO>"


def check_energy_balance(rng, assemble, count=30):
    lossless, lossy = 0.0, 0.0
    for _ in range(count):
        chain = random_chain(rng, int(rng.integers(1, 3)), gamma=0.0)
        stats, _ = steady_stats(chain, Drive.forward_power(float(rng.uniform(0.01, 5))), assemble)
        lossless = max(lossless, abs(stats.leakage))
        chain = random_chain(rng, int(rng.integers(1, 3)))
        stats, _ = steady_stats(chain, Drive.forward_power(float(rng.uniform(0.01, 5))), assemble)
        lossy = max(lossy, -stats.leakage)
    return max(lossless, lossy), "|1 - T - R| at gamma = 0, -(1 - T - R) otherwise"


def check_pi_periodicity(assemble, points=51):
    dev = 0.0
    for gamma in (0.0, 0.2, 0.5):
        for phi in np.linspace(0, PI, points):
            a, _ = steady_stats(antisym_chain(0.5, 1.2, 0.8, float(phi), gamma), Drive.forward_power(1.0), assemble)
            b, _ = steady_stats(antisym_chain(0.5, 1.2, 0.8, float(phi + PI), gamma), Drive.forward_power(1.0), assemble)
            dev = max(dev, abs(a.I_inc_R - b.I_inc_R), abs(a.I_inc_T - b.I_inc_T))
    return dev, f"{points}-point phase grid"


def check_transparency_nulls(assemble):
    dev = 0.0
    for phi in (PI, 2 * PI):
        stats, _ = steady_stats(antisym_chain(0.5, 1.2, 0.8, phi), Drive.forward_power(1.0), assemble)
        dev = max(dev, abs(stats.I_inc_R), abs(stats.I_inc_T))
    return dev, "incoherent power at phi = pi, 2 pi"


def check_classical_limit(assemble):
    dev = 0.0
    p = 1e-6
    for phi in (PI / 4, PI / 2, 2 * PI / 3):
        stats, _ = steady_stats(antisym_chain(0.5, 1.2, 0.8, phi, 0.2), Drive.forward_power(p), assemble)
        dev = max(dev, stats.I_inc_T / p, stats.I_inc_R / p)
    return dev, "I_inc/p at p = 1e-6"


# oracles ---------------------------------------------------------------------

def check_single_atom_oracles(assemble):
    dev = 0.0
    k1, k2 = math.sqrt(1.2), math.sqrt(0.8)
    for delta, gamma, p in single_atom_grid():
        chain = EmitterChain([Emitter(delta, gamma, k1, k2)])
        stats, _ = steady_stats(chain, Drive.forward_power(p), assemble)
        prm = oracles.SingleAtomParams(delta, gamma, k1, k2, math.sqrt(p))
        t, r = oracles.single_atom_amplitudes(prm)
        T, R, inc, leak = oracles.single_atom_powers(prm)
        g2 = oracles.single_atom_g2_transmitted(prm)
        dev = max(dev, abs(stats.t - t), abs(stats.r - r), abs(stats.T - T), abs(stats.R - R),
                  abs(stats.T - abs(stats.t) ** 2 - inc), abs(stats.leakage - leak), abs(stats.g2_T - g2))
    return dev, "13 x 3 x 4 grid"


def check_lowpower_g2(assemble):
    stats, _ = steady_stats(antisym_chain(0.5, 1.6, 0.4, PI / 2), Drive.forward_power(1e-3), assemble)
    expected = oracles.two_atom_lowpower_g2_reflected(0.5, math.sqrt(1.6), math.sqrt(0.4))
    return abs(stats.g2_R - expected), f"numeric {stats.g2_R:.5f} vs weak-drive {expected:.5f}"


def check_transparency_elements(assemble):
    dev = 0.0
    k1, k2 = math.sqrt(1.2), math.sqrt(0.8)
    for phi, odd in ((PI, True), (2 * PI, False)):
        for p in (0.1, 1.0, 10.0):
            _, rho = steady_stats(antisym_chain(1.0, 1.2, 0.8, phi), Drive.forward_power(p), assemble)
            c = collective_populations(rho)
            pop, coh = oracles.transparency_elements(1.0, k1, k2, math.sqrt(p))
            got_pop, got_coh = (c.p_s, c.rho_sg) if odd else (c.p_a, c.rho_ag)
            dev = max(dev, abs(got_pop - pop), abs(got_coh - coh))
    return dev, ""


# tcmt ------------------------------------------------------------------------

def check_quantum_classical(rng, assemble, count=20):
    dev = 0.0
    p = 1e-6
    for _ in range(count):
        chain = random_chain(rng, int(rng.integers(1, 3)))
        stats, _ = steady_stats(chain, Drive.forward_power(p), assemble)
        t_fwd, _ = classical_transmissions(ClassicalSystem.from_chain(chain))
        dev = max(dev, abs(stats.t - t_fwd))
    return dev, "t at p = 1e-6 vs classical S21"


def check_classical_reciprocity(rng, count=100):
    ka, kb = math.sqrt(1.6), math.sqrt(0.4)
    recip, closed = 0.0, 0.0
    for _ in range(count):
        da, db = rng.uniform(-3, 3, 2)
        phi = float(rng.uniform(0, 2 * PI))
        chain = EmitterChain([Emitter(float(da), 0, ka, kb, 0), Emitter(float(db), 0, kb, ka, phi)])
        tf, tb = classical_transmissions(ClassicalSystem.from_chain(chain))
        recip = max(recip, abs(abs(tf) - abs(tb)))
        closed = max(closed, abs(abs(tf) ** 2 - oracles.classical_two_atom_transmission(da, db, ka, kb, phi)))
    return max(recip, closed), f"{count} random draws"


def run_validate(assemble=assemble_liouvillian, stream=sys.stdout, seed=20240101):
    rng = np.random.default_rng(seed)
    checks = [
        ("hilbert: kronecker associativity", 1e-14, lambda: check_kron_associative(rng)),
        ("hilbert: distinct-site operators commute", 0.0, check_sites_commute),
        ("hilbert: trace cyclicity", 1e-12, lambda: check_trace_cyclic(rng)),
        ("model: K K^+ = Gamma + Gamma^+", 1e-12, lambda: check_energy_conservation(rng)),
        ("model: Hamiltonian hermitian", 1e-14, lambda: check_hamiltonian_hermitian(rng)),
        ("model: Gamma_12(phi) = Gamma_12(-phi)^*", 1e-14, lambda: check_decay_phase_symmetry(rng)),
        ("dynamics: trace preservation", 1e-12, lambda: check_trace_preservation(rng, assemble)),
        ("dynamics: hermiticity preservation", 1e-12, lambda: check_hermiticity_preservation(rng, assemble)),
        ("dynamics: steady-state positivity", 1e-8, lambda: check_steady_positivity(rng, assemble)),
        ("dynamics: transparency is pure, T = 1, R = 0", 1e-8, lambda: check_transparency_purity(assemble)),
        ("dynamics: direct solve vs RK4 evolution", 1e-6, lambda: check_solver_vs_evolution(assemble)),
        ("observables: single-atom reflection antibunched", 1e-12, lambda: check_single_atom_antibunching(assemble)),
        ("observables: energy balance", 1e-10, lambda: check_energy_balance(rng, assemble)),
        ("observables: pi-periodic incoherent output", 1e-8, lambda: check_pi_periodicity(assemble)),
        ("observables: incoherent nulls at transparency", 1e-10, lambda: check_transparency_nulls(assemble)),
        ("observables: weak-drive classical limit", 1e-3, lambda: check_classical_limit(assemble)),
        ("oracles: single-atom closed forms", 1e-8, lambda: check_single_atom_oracles(assemble)),
        ("oracles: weak-drive g2_R", 5e-3, lambda: check_lowpower_g2(assemble)),
        ("oracles: transparency density-matrix elements", 1e-8, lambda: check_transparency_elements(assemble)),
        ("tcmt: quantum weak-drive limit matches classical", 1e-4, lambda: check_quantum_classical(rng, assemble)),
        ("tcmt: classical reciprocity and closed form", 1e-10, lambda: check_classical_reciprocity(rng)),
    ]
    results = []
    for name, tol, fn in checks:
        res = _check(name, tol, fn)
        results.append(res)
        if stream is not None:
            print(res.line(), file=stream, flush=True)
    if stream is not None:
        failed = sum(not r.passed for r in results)
        print(f"{len(results) - failed}/{len(results)} checks passed", file=stream)
    return results

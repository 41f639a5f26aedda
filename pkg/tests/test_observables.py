import math

import numpy as np
import pytest

from chiralwg import hilbert
from chiralwg.dynamics import DensityMatrix, assemble_liouvillian, solve_steady
from chiralwg.errors import AmbiguousDrive, DimensionMismatch, WrongSystemSize
from chiralwg.model import Drive, Emitter, EmitterChain
from chiralwg.observables import (
    collective_populations,
    compute_stats,
    field_moments,
    output_operator_reflected,
    output_operator_transmitted,
    steady_stats,
)
from chiralwg.validation import random_chain, random_density_matrix

from conftest import PI, antisym_chain, forward, quiet_chain, single_chain

FIG3 = dict(delta=0.5, k1_rate=1.2, k2_rate=0.8)


def test_transmitted_operator_single_atom():
    chain = single_chain()
    o = output_operator_transmitted(chain, forward(0.25))
    assert o.scalar_part == pytest.approx(0.5)
    np.testing.assert_allclose(o.operator_part, -math.sqrt(1.2) * hilbert.lowering_operator(0, 1))


def test_transmitted_operator_odd_phase_scalar():
    o = output_operator_transmitted(antisym_chain(1, 1.2, 0.8, PI), forward(1.0))
    assert o.scalar_part == pytest.approx(-1.0)


def test_transmitted_operator_bare_waveguide():
    chain = EmitterChain([Emitter(), Emitter(phi=0.4)])
    o = output_operator_transmitted(chain, Drive(forward=0.5))
    assert o.scalar_part == pytest.approx(0.5 * np.exp(0.4j))
    assert not np.any(o.operator_part)


def test_reflected_operator():
    chain = single_chain()
    assert output_operator_reflected(chain, forward(1.0)).scalar_part == 0
    np.testing.assert_allclose(output_operator_reflected(chain, forward(1.0)).operator_part,
                               -math.sqrt(0.8) * hilbert.lowering_operator(0, 1))
    two = antisym_chain(1, 1.2, 0.8, PI)
    expected = -math.sqrt(0.8) * (hilbert.lowering_operator(0, 2) - hilbert.lowering_operator(1, 2))
    np.testing.assert_allclose(output_operator_reflected(two, forward(1.0)).operator_part, expected, atol=1e-15)


def test_operator_part_is_combination_of_lowering_operators(rng):
    chain = random_chain(rng, 3)
    o = output_operator_transmitted(chain, forward(1.0))
    ops = hilbert.lowering_operators(3)
    coeffs = [np.trace(op.conj().T @ o.operator_part) / 4 for op in ops]
    np.testing.assert_allclose(sum(c * op for c, op in zip(coeffs, ops)), o.operator_part, atol=1e-14)


def test_moments_coherent_field():
    chain = EmitterChain([Emitter(k1=0.8, k2=0.5), Emitter(k1=0.8, k2=0.5, phi=0.7)])
    alpha = 0.6
    o = output_operator_transmitted(chain, Drive(forward=alpha))
    mean, power, two = field_moments(hilbert.ground_state(2), o)
    assert mean == pytest.approx(alpha * np.exp(0.7j))
    assert power == pytest.approx(alpha**2)
    assert two == pytest.approx(alpha**4)


def test_single_atom_reflected_two_photon_exactly_zero(rng):
    chain = single_chain()
    o = output_operator_reflected(chain, forward(1.0))
    for _ in range(10):
        assert field_moments(random_density_matrix(rng, 2), o)[2] == 0.0


def test_field_moments_dimension_mismatch():
    o = output_operator_reflected(single_chain(), forward(1.0))
    with pytest.raises(DimensionMismatch):
        field_moments(hilbert.ground_state(2), o)


def test_quarter_wave_reflected_g2_value():
    stats, _ = steady_stats(antisym_chain(0.5, 1.6, 0.4, PI / 2), forward(1e-3))
    assert stats.g2_R == pytest.approx(0.0914, abs=5e-3)
    assert stats.R == pytest.approx(0.896, abs=1e-2)


@pytest.mark.parametrize("p", [0.1, 1.0, 10.0])
def test_transparency_stats(p):
    stats, _ = steady_stats(antisym_chain(1.0, 1.2, 0.8, PI), forward(p))
    assert abs(stats.t) == pytest.approx(1, abs=1e-10)
    assert stats.T == pytest.approx(1, abs=1e-10)
    assert abs(stats.R) < 1e-10


def test_critical_point_stats():
    stats, _ = steady_stats(single_chain(0.0, 0.05, 1.4, 0.6), forward(0.13125))
    assert abs(stats.t) < 1e-6
    assert stats.T == pytest.approx(0.35 / 1.05, abs=1e-10)


def test_coherent_plus_incoherent_is_total(rng):
    for _ in range(10):
        chain = random_chain(rng, int(rng.integers(1, 3)))
        p = float(rng.uniform(0.01, 5))
        stats, _ = steady_stats(chain, forward(p))
        assert stats.T * p == pytest.approx(stats.I_c_T + stats.I_inc_T, abs=1e-10)
        assert stats.R * p == pytest.approx(stats.I_c_R + stats.I_inc_R, abs=1e-10)
        assert 0 <= stats.purity <= 1 + 1e-10


def test_energy_balance(rng):
    for _ in range(20):
        chain = random_chain(rng, int(rng.integers(1, 3)), gamma=0.0)
        stats, _ = steady_stats(chain, forward(float(rng.uniform(0.01, 5))))
        assert abs(stats.leakage) < 1e-10
        chain = random_chain(rng, int(rng.integers(1, 3)))
        stats, _ = steady_stats(chain, forward(float(rng.uniform(0.01, 5))))
        assert stats.leakage >= -1e-10


@pytest.mark.parametrize("gamma", [0.0, 0.2, 0.5])
def test_pi_periodicity(gamma):
    for phi in np.linspace(0, PI, 7):
        a, _ = steady_stats(antisym_chain(phi=float(phi), gamma=gamma, **FIG3), forward(1.0))
        b, _ = steady_stats(antisym_chain(phi=float(phi) + PI, gamma=gamma, **FIG3), forward(1.0))
        assert abs(a.I_inc_R - b.I_inc_R) < 1e-8
        assert abs(a.I_inc_T - b.I_inc_T) < 1e-8


@pytest.mark.parametrize("phi", [PI, 2 * PI])
def test_transparency_incoherent_nulls(phi):
    stats, _ = steady_stats(antisym_chain(phi=phi, **FIG3), forward(1.0))
    assert abs(stats.I_inc_T) < 1e-10 and abs(stats.I_inc_R) < 1e-10


def test_weak_drive_is_coherent():
    p = 1e-6
    stats, _ = steady_stats(antisym_chain(phi=PI / 2, gamma=0.2, **FIG3), forward(p))
    assert stats.I_inc_T / p < 1e-3 and stats.I_inc_R / p < 1e-3


def mirrored(chain):
    """Same structure seen from the other end of the waveguide."""
    phi_n = chain.phi_n
    atoms = [Emitter(e.delta, e.gamma, e.k2, e.k1, phi_n - e.phi) for e in reversed(chain.emitters)]
    return quiet_chain(atoms)


def test_backward_drive_equals_forward_drive_of_mirror(rng):
    for _ in range(10):
        chain = random_chain(rng, int(rng.integers(1, 4)))
        p = float(rng.uniform(0.05, 3))
        back, _ = steady_stats(chain, Drive.backward_power(p))
        fwd, _ = steady_stats(mirrored(chain), forward(p))
        assert back.direction == "backward"
        for name in ("T", "R", "I_c_T", "I_inc_T", "I_c_R", "I_inc_R", "purity"):
            assert getattr(back, name) == pytest.approx(getattr(fwd, name), abs=1e-10), name
        assert back.t == pytest.approx(fwd.t, abs=1e-10)


def test_ambiguous_drive():
    chain = single_chain()
    with pytest.raises(AmbiguousDrive):
        compute_stats(chain, Drive(1.0, 1.0), hilbert.ground_state(1))


def test_zero_drive_stats():
    stats = compute_stats(single_chain(), Drive(), DensityMatrix(hilbert.ground_state(1)))
    assert stats.t is None and stats.T is None and stats.leakage is None
    assert stats.I_c_T == 0 and stats.I_inc_T == 0 and stats.I_c_R == 0
    assert stats.g2_T is None and stats.g2_R is None


def test_collective_ground():
    c = collective_populations(hilbert.ground_state(2))
    assert c.p_g == 1 and c.p_e == c.p_s == c.p_a == 0 and c.rho_sg == 0


def test_collective_odd_transparency_value():
    _, rho = steady_stats(antisym_chain(1.0, 1.2, 0.8, PI), forward(1.0))
    assert collective_populations(rho).p_s == pytest.approx(9.6 / 13.76, abs=1e-10)


def test_collective_even_mirrors_odd():
    _, odd = steady_stats(antisym_chain(1.0, 1.2, 0.8, PI), forward(1.0))
    _, even = steady_stats(antisym_chain(1.0, 1.2, 0.8, 2 * PI), forward(1.0))
    o, e = collective_populations(odd), collective_populations(even)
    assert e.p_a == pytest.approx(o.p_s, abs=1e-10)
    assert e.rho_ag == pytest.approx(o.rho_sg, abs=1e-10)
    assert abs(e.p_e) < 1e-9 and abs(e.rho_es) < 1e-9 and abs(e.rho_sg) < 1e-9


def test_collective_wrong_size():
    with pytest.raises(WrongSystemSize):
        collective_populations(hilbert.ground_state(1))


def test_operator_route_matches_collective_expressions():
    # odd-n transmitted moments expressed through collective-basis elements
    k1, alpha = math.sqrt(1.2), 0.8
    chain = antisym_chain(1.0, 1.2, 0.8, PI, 0.1)
    stats, rho = steady_stats(chain, forward(alpha**2))
    c = collective_populations(rho)
    mean = -alpha - math.sqrt(2) * k1 * (c.rho_ea - c.rho_ag)
    cross = k1 * alpha * (-c.rho_ea + c.rho_ag)
    power = alpha**2 + k1**2 * (2 * c.p_e + 2 * c.p_a) - math.sqrt(2) * 2 * cross.real
    assert stats.t * alpha == pytest.approx(mean, abs=1e-12)
    assert stats.T * alpha**2 == pytest.approx(power, abs=1e-12)

"""Adaptive stepper: accuracy, termination contract, recording, symmetry."""

import math

import numpy as np
import pytest

from bandsim import (
    CosineLattice,
    IntegratorConfig,
    PhaseState,
    Polynomial,
    Quartic,
    StepSizeUnderflowError,
    Termination,
    integrate,
    step_embedded,
    thin_samples,
)

HARMONIC = Polynomial(coeffs=(0.0, 0.0, 0.5))  # V = x^2/2, so x(t) = cos t


def _start(pot, energy, x0=0j, branch=1):
    return PhaseState(0.0, x0, pot.initial_momentum(energy, x0, branch))


def test_harmonic_oscillator_against_closed_form():
    # x0 = 1, p0 = 0, E = 1/2: exact solution x = cos t, p = -sin t
    rec = integrate(HARMONIC, 0.5, PhaseState(0.0, 1.0 + 0j, 0j),
                    IntegratorConfig(), t_max=10.0)
    s = rec.samples[-1]
    assert s.t == 10.0
    assert s.x == pytest.approx(math.cos(10.0), abs=1e-10)
    assert s.p == pytest.approx(-math.sin(10.0), abs=1e-10)
    assert rec.termination is Termination.TIME_BUDGET


def test_final_step_lands_exactly_on_t_max():
    pot = Quartic()
    rec = integrate(pot, 1.0, _start(pot, 1.0, 1.0 + 0j), IntegratorConfig(), t_max=7.3)
    assert rec.samples[-1].t == 7.3


def test_real_energy_real_start_stays_real():
    pot = Quartic()
    rec = integrate(pot, 1.0, PhaseState(0.0, 1.0 + 0j, 0j), IntegratorConfig(),
                    t_max=100.0)
    assert rec.termination is Termination.TIME_BUDGET
    assert max(abs(s.x.imag) for s in rec.samples) < 1e-8
    assert max(abs(s.p.imag) for s in rec.samples) < 1e-8


def test_energy_drift_stays_below_contract():
    pot = CosineLattice()
    cfg = IntegratorConfig()
    rec = integrate(pot, 0.1 - 0.15j, _start(pot, 0.1 - 0.15j), cfg, t_max=30.0)
    assert rec.termination is Termination.TIME_BUDGET
    assert rec.max_energy_drift <= cfg.energy_tol
    # reported drift must dominate the drift recomputed at every sample
    recomputed = max(abs(pot.hamiltonian(s.x, s.p) - (0.1 - 0.15j)) for s in rec.samples)
    assert recomputed <= rec.max_energy_drift + 1e-16


def test_energy_drift_termination():
    pot = CosineLattice()
    cfg = IntegratorConfig(energy_tol=1e-15)
    rec = integrate(pot, 0.1 - 0.15j, _start(pot, 0.1 - 0.15j), cfg, t_max=1000.0)
    assert rec.termination is Termination.ENERGY_DRIFT
    assert rec.max_energy_drift > cfg.energy_tol
    # the offending state is excluded from the kept samples
    kept = max(abs(pot.hamiltonian(s.x, s.p) - (0.1 - 0.15j)) for s in rec.samples)
    assert kept <= cfg.energy_tol


def test_escape_termination():
    pot = CosineLattice()
    # real E above the barrier tops: x runs away monotonically
    rec = integrate(pot, 2.0, _start(pot, 2.0), IntegratorConfig(escape_bound=10.0),
                    t_max=100.0)
    assert rec.termination is Termination.ESCAPED
    assert abs(rec.samples[-1].x) > 10.0  # the escaping state is kept as evidence


def test_step_budget_termination():
    pot = CosineLattice()
    rec = integrate(pot, 0.1 - 0.15j, _start(pot, 0.1 - 0.15j),
                    IntegratorConfig(max_steps=25), t_max=1000.0)
    assert rec.termination is Termination.STEP_BUDGET
    assert rec.n_accepted == 25


def test_observer_stop():
    pot = Quartic()
    seen = []

    def observer(s):
        seen.append(s.t)
        return s.t > 1.0

    rec = integrate(pot, 1.0, _start(pot, 1.0, 1.0 + 0j), IntegratorConfig(),
                    t_max=50.0, observer=observer)
    assert rec.termination is Termination.OBSERVER_STOP
    assert rec.samples[-1].t == seen[-1]
    assert rec.samples[-1].t <= 1.0 + 0.1  # within one h_max of the trigger


def test_off_shell_start_is_rejected():
    pot = CosineLattice()
    with pytest.raises(ValueError):
        integrate(pot, 0.5, PhaseState(0.0, 0j, 0j), IntegratorConfig(), t_max=1.0)


def test_step_size_underflow():
    pot = CosineLattice()
    cfg = IntegratorConfig(rel_tol=1e-16, abs_tol=1e-16, h_min=0.05, h_init=0.05,
                           h_max=0.05)
    with pytest.raises(StepSizeUnderflowError):
        integrate(pot, 0.1 - 0.15j, _start(pot, 0.1 - 0.15j), cfg, t_max=10.0)


def test_record_false_keeps_endpoints_only():
    pot = Quartic()
    rec = integrate(pot, 1.0, _start(pot, 1.0, 1.0 + 0j), IntegratorConfig(), t_max=5.0,
                    record=False)
    assert len(rec.samples) == 2
    assert rec.samples[0].t == 0.0
    assert rec.samples[-1].t == 5.0


def test_max_samples_decimation_keeps_bounds():
    pot = Quartic()
    rec = integrate(pot, 1.0, _start(pot, 1.0, 1.0 + 0j), IntegratorConfig(),
                    t_max=20.0, max_samples=64)
    assert 2 <= len(rec.samples) <= 128
    assert rec.samples[0].t == 0.0
    assert rec.samples[-1].t == 20.0
    ts = [s.t for s in rec.samples]
    assert ts == sorted(ts)


def test_step_embedded_error_estimate_scales_as_fifth_power():
    # halving h must shrink the local error estimate by roughly 2^5
    pot = CosineLattice()
    state = _start(pot, 0.3 - 0.4j)
    _, err1 = step_embedded(pot, state, 1e-2)
    _, err2 = step_embedded(pot, state, 5e-3)
    assert err2 < err1
    assert err1 / err2 == pytest.approx(32.0, rel=0.35)


def test_thin_samples_preserves_endpoints_and_order():
    samples = [PhaseState(float(t), complex(t), 0j) for t in range(1000)]
    out = thin_samples(samples, 50)
    assert len(out) <= 100
    assert out[0].t == 0.0
    assert out[-1].t == 999.0
    ts = [s.t for s in out]
    assert ts == sorted(ts)


def test_config_validation():
    with pytest.raises(ValueError):
        IntegratorConfig(h_min=1.0, h_init=0.1, h_max=0.5)
    with pytest.raises(ValueError):
        IntegratorConfig(rel_tol=0.0)
    with pytest.raises(ValueError):
        IntegratorConfig(max_steps=0)
    with pytest.raises(ValueError):
        IntegratorConfig(escape_bound=-1.0)


# --- discrete symmetries of the lattice dynamics ------------------------

E_SYM = 0.3 - 0.4j
T_SYM = 5.0


def _final_state(energy, x0=0j, branch=1):
    pot = CosineLattice()
    rec = integrate(pot, energy, _start(pot, energy, x0, branch), IntegratorConfig(),
                    t_max=T_SYM, record=False)
    assert rec.termination is Termination.TIME_BUDGET
    return rec.samples[-1]


def test_conjugation_symmetry():
    cfg = IntegratorConfig()
    a = _final_state(E_SYM)
    b = _final_state(E_SYM.conjugate())
    tol = 10 * cfg.rel_tol * max(1.0, abs(a.x), abs(a.p))
    assert abs(b.x - a.x.conjugate()) <= tol
    assert abs(b.p - a.p.conjugate()) <= tol


def test_parity_symmetry():
    cfg = IntegratorConfig()
    a = _final_state(E_SYM, branch=1)
    b = _final_state(E_SYM, branch=-1)
    tol = 10 * cfg.rel_tol * max(1.0, abs(a.x), abs(a.p))
    assert abs(b.x + a.x) <= tol
    assert abs(b.p + a.p) <= tol


def test_lattice_translation_symmetry():
    cfg = IntegratorConfig()
    two_pi = 2 * math.pi
    a = _final_state(E_SYM)
    b = _final_state(E_SYM, x0=complex(two_pi, 0.0))
    tol = 10 * cfg.rel_tol * max(1.0, abs(a.x), abs(a.p)) + 1e-12
    assert abs((b.x - two_pi) - a.x) <= tol
    assert abs(b.p - a.p) <= tol

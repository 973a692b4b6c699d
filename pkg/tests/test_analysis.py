"""Closed-orbit periods, loop actions, turning points, hyperbola fits."""

import cmath
import math

import pytest

from bandsim import (
    CosineLattice,
    DoubleWell,
    NoClosureError,
    OrbitResult,
    PhaseState,
    Polynomial,
    Quartic,
    action_integral,
    hyperbola_fit,
    orbit_period,
    turning_points,
)

# sqrt(pi/2) * Gamma(1/4) / Gamma(3/4): closed form for the quartic at E = 1
QUARTIC_PERIOD = math.sqrt(math.pi / 2) * math.gamma(0.25) / math.gamma(0.75)
# 4 * int_0^1 sqrt(2 (1 - x^4)) dx, quadrature-checked against the
# Gamma closed form to 6e-15
QUARTIC_ACTION = 4.944199139470318
# sqrt((5 +/- sqrt 21) / 2): where x^4 - 5 x^2 = -1
DW_OUTER = math.sqrt((5 + math.sqrt(21)) / 2)
DW_INNER = math.sqrt((5 - math.sqrt(21)) / 2)


def _orbit(pot, energy, x0, branch=1, **kw):
    p0 = pot.initial_momentum(energy, x0, branch)
    return orbit_period(pot, energy, PhaseState(0.0, x0, p0), **kw)


def test_quartic_real_orbit_period():
    orbit = _orbit(Quartic(), 1.0 + 0j, 1.0 + 0j)
    assert orbit.period == pytest.approx(QUARTIC_PERIOD, abs=1e-6)
    assert orbit.closure_error < orbit.closure_tol


def test_quartic_isochronism_of_nested_orbits():
    # distinct complex starts on the same energy surface share the period
    periods = [
        _orbit(Quartic(), 1.0 + 0j, x0).period
        for x0 in (1.0 + 0j, 1.05 + 0.2j, 0.7 - 0.35j)
    ]
    for p in periods[1:]:
        assert p == pytest.approx(periods[0], abs=1e-6)


def test_quartic_period_scales_as_inverse_fourth_root():
    t1 = _orbit(Quartic(), 1.0 + 0j, 1.0 + 0j).period
    t2 = _orbit(Quartic(), 1 / 16 + 0j, 0.5 + 0j).period
    assert t2 / t1 == pytest.approx(2.0, abs=1e-6)


def test_open_orbit_raises_no_closure():
    with pytest.raises(NoClosureError) as exc_info:
        _orbit(Quartic(), 1.0 + 0.1j, 1.0 + 0j, t_max=20.0)
    assert exc_info.value.best_distance > 1e-6


def test_orbit_period_rejects_bad_tolerances():
    with pytest.raises(ValueError):
        _orbit(Quartic(), 1.0 + 0j, 1.0 + 0j, closure_tol=0.0)


def test_quartic_action_against_quadrature():
    orbit = _orbit(Quartic(), 1.0 + 0j, 1.0 + 0j)
    result = action_integral(orbit)
    assert result.action.real == pytest.approx(QUARTIC_ACTION, abs=5e-4)
    assert abs(result.action.imag) < 1e-6
    assert result.n_eff.real == pytest.approx(QUARTIC_ACTION / math.pi - 0.5, abs=2e-4)


def test_harmonic_action_is_two_pi_e():
    # V = x^2/2 with E = 1: the loop area is exactly 2 pi E
    pot = Polynomial(coeffs=(0.0, 0.0, 0.5))
    orbit = _orbit(pot, 1.0 + 0j, complex(math.sqrt(2.0), 0.0))
    result = action_integral(orbit)
    # trapezoid over ~400 loop samples: discretization floor is a few 1e-4
    assert result.action.real == pytest.approx(2 * math.pi, abs=1e-3)


def test_action_requires_a_closed_orbit():
    good = _orbit(Quartic(), 1.0 + 0j, 1.0 + 0j)
    bad = OrbitResult(period=good.period, closure_error=1.0, closure_tol=1e-6,
                      samples=good.samples)
    with pytest.raises(ValueError):
        action_integral(bad)


def test_doublewell_turning_points_match_radicals():
    points = turning_points(DoubleWell(), -1.0 + 0j)
    assert len(points) == 4
    xs = sorted(z.real for z in points)
    assert xs == pytest.approx([-DW_OUTER, -DW_INNER, DW_INNER, DW_OUTER], abs=1e-12)
    assert all(abs(z.imag) < 1e-12 for z in points)


def test_quartic_turning_points_at_unit_energy():
    points = turning_points(Quartic(), 1.0 + 0j)
    expected = {1 + 0j, -1 + 0j, 1j, -1j}
    assert len(points) == 4
    for z in points:
        assert min(abs(z - w) for w in expected) < 1e-12


def test_polynomial_turning_points():
    # V = x^2/2 = 0.5 at x = +/- 1
    points = turning_points(Polynomial(coeffs=(0.0, 0.0, 0.5)), 0.5 + 0j)
    xs = sorted(z.real for z in points)
    assert xs == pytest.approx([-1.0, 1.0], abs=1e-12)


def test_cosine_turning_points_are_acos_pair():
    e = 0.3 - 0.2j
    points = turning_points(CosineLattice(), e)
    assert len(points) == 2
    expected = cmath.acos(-e)
    assert min(abs(z - expected) for z in points) < 1e-12
    assert min(abs(z + expected) for z in points) < 1e-12


def test_turning_points_solve_v_equals_e():
    for pot, e in ((Quartic(), 0.7 - 0.4j), (DoubleWell(), -1.0 - 1.0j)):
        for z in turning_points(pot, e):
            assert abs(pot.value(z) - e) < 1e-10


def test_hyperbola_fit_exact_data():
    fit = hyperbola_fit([(-0.1, 150.0), (-0.2, 75.0), (-0.3, 50.0)])
    assert fit.c == pytest.approx(15.0, rel=1e-12)
    assert fit.relative_residual == pytest.approx(0.0, abs=1e-12)


def test_hyperbola_fit_doubling_times_doubles_c():
    base = [(-0.1, 150.0), (-0.2, 75.0), (-0.3, 50.0), (-0.5, 30.0)]
    doubled = [(im, 2 * t) for im, t in base]
    f1 = hyperbola_fit(base)
    f2 = hyperbola_fit(doubled)
    assert f2.c == pytest.approx(2 * f1.c, rel=1e-12)
    assert f2.relative_residual == pytest.approx(f1.relative_residual, abs=1e-12)


def test_hyperbola_fit_reports_scatter():
    fit = hyperbola_fit([(-0.1, 160.0), (-0.2, 75.0), (-0.3, 50.0)])
    assert fit.relative_residual > 0.01


def test_hyperbola_fit_validation():
    with pytest.raises(ValueError):
        hyperbola_fit([(-0.1, 150.0), (-0.2, 75.0)])
    with pytest.raises(ValueError):
        hyperbola_fit([(0.0, 150.0), (-0.2, 75.0), (-0.3, 50.0)])
    with pytest.raises(ValueError):
        hyperbola_fit([(-0.1, -1.0), (-0.2, 75.0), (-0.3, 50.0)])

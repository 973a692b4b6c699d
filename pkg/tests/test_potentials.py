"""Potential values, gradients, kinetic conventions and the name factory."""

import cmath
import math

import numpy as np
import pytest

from bandsim import CosineLattice, DoubleWell, Polynomial, Potential, Quartic, make_potential

SEED = 1301


def _random_points(n: int, scale: float = 3.0) -> list[complex]:
    rng = np.random.default_rng(SEED)
    return [complex(rng.uniform(-scale, scale), rng.uniform(-scale, scale)) for _ in range(n)]


def test_cosine_values():
    pot = CosineLattice()
    assert pot.value(0.0) == -1.0
    assert pot.value(math.pi) == pytest.approx(1.0, abs=1e-15)
    # barrier tops at odd multiples of pi, wells at 2*pi*n
    assert pot.value(2 * math.pi).real == pytest.approx(-1.0, abs=1e-15)


def test_cosine_huge_imaginary_part_saturates():
    # cosh overflow must surface as an infinite value, not an exception
    v = CosineLattice().value(complex(0.0, 1e4))
    assert not cmath.isfinite(v)


@pytest.mark.parametrize(
    "pot",
    [
        CosineLattice(),
        Quartic(),
        DoubleWell(),
        Polynomial(coeffs=(0.5, -1.0, 0.25, 0.0, 2.0)),
    ],
)
def test_gradient_matches_finite_difference(pot):
    h = 1e-6
    for z in _random_points(12, scale=2.0):
        num = (pot.value(z + h) - pot.value(z - h)) / (2 * h)
        assert pot.gradient(z) == pytest.approx(num, abs=1e-6, rel=1e-6)


def test_polynomial_horner_against_numpy():
    coeffs = (1.0, -2.0, 0.0, 3.5)
    pot = Polynomial(coeffs=coeffs)
    ref = np.polynomial.polynomial.Polynomial(coeffs)
    for z in _random_points(8):
        assert pot.value(z) == pytest.approx(complex(ref(z)), rel=1e-12)


def test_kinetic_conventions():
    half = Quartic()
    full = DoubleWell()
    assert half.kinetic_coeff == 0.5
    assert full.kinetic_coeff == 1.0
    p = 2.0 + 1.0j
    assert half.hamiltonian(0.0, p) == pytest.approx(0.5 * p * p)
    assert full.hamiltonian(0.0, p) == pytest.approx(p * p + DoubleWell().value(0.0))


def test_initial_momentum_is_on_shell():
    rng = np.random.default_rng(SEED + 1)
    for pot in (CosineLattice(), Quartic(), DoubleWell()):
        for _ in range(10):
            e = complex(rng.uniform(-1, 2), rng.uniform(-1, 1))
            x0 = complex(rng.uniform(-2, 2), rng.uniform(-1, 1))
            for branch in (1, -1):
                p0 = pot.initial_momentum(e, x0, branch)
                assert pot.hamiltonian(x0, p0) == pytest.approx(e, abs=1e-12)
    # the two branches are opposite momenta
    p_plus = CosineLattice().initial_momentum(0.1 - 0.15j, 0j, 1)
    p_minus = CosineLattice().initial_momentum(0.1 - 0.15j, 0j, -1)
    assert p_minus == -p_plus


def test_make_potential_names():
    assert isinstance(make_potential("cosine"), CosineLattice)
    assert isinstance(make_potential("quartic"), Quartic)
    assert isinstance(make_potential("doublewell"), DoubleWell)
    poly = make_potential("poly:1,0,-2.5")
    assert isinstance(poly, Polynomial)
    assert poly.coeffs == (1.0, 0.0, -2.5)


def test_make_potential_default_conventions():
    assert make_potential("cosine").kinetic_half
    assert make_potential("quartic").kinetic_half
    assert not make_potential("doublewell").kinetic_half


def test_make_potential_kinetic_override():
    assert not make_potential("quartic", "full").kinetic_half
    assert make_potential("doublewell", "half").kinetic_half
    assert make_potential("poly:0,1", "full").kinetic_half is False


def test_make_potential_rejects_garbage():
    with pytest.raises(ValueError):
        make_potential("hexagonal")
    with pytest.raises(ValueError):
        make_potential("poly:1,spam")
    with pytest.raises(ValueError):
        make_potential("cosine", "third")


def test_polynomial_requires_coefficients():
    with pytest.raises(ValueError):
        Polynomial(coeffs=())


def test_potentials_are_frozen():
    pot = Quartic()
    with pytest.raises(Exception):
        pot.kinetic_half = False

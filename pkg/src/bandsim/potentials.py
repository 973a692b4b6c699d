"""One-dimensional potentials analytically continued to complex argument.

Every potential is a frozen dataclass carrying its own kinetic-term
convention: ``kinetic_half=True`` means H = p^2/2 + V(x), ``False`` means
H = p^2 + V(x).  Both conventions appear in the classical-tunneling
literature, so the choice travels with the potential instead of being a
global setting.

Positions, momenta and energies are plain Python ``complex``; scalar
``cmath`` arithmetic keeps the integrator hot loop fast.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field

__all__ = [
    "Potential",
    "CosineLattice",
    "Quartic",
    "DoubleWell",
    "Polynomial",
    "make_potential",
]

_CINF = complex(math.inf, math.inf)


@dataclass(frozen=True)
class Potential:
    """Base class: analytic V(x), its derivative, and the Hamiltonian."""

    kinetic_half: bool = field(default=True, kw_only=True)

    @property
    def kinetic_coeff(self) -> float:
        """Coefficient k in H = k*p^2 + V(x)."""
        return 0.5 if self.kinetic_half else 1.0

    def value(self, x: complex) -> complex:
        raise NotImplementedError

    def gradient(self, x: complex) -> complex:
        raise NotImplementedError

    def hamiltonian(self, x: complex, p: complex) -> complex:
        return self.kinetic_coeff * p * p + self.value(x)

    def initial_momentum(self, energy: complex, x0: complex, branch: int = +1) -> complex:
        """Momentum consistent with H(x0, p0) = energy.

        Uses the principal square root (branch cut along the negative real
        axis); ``branch`` = +1 or -1 selects the sign in front of it.
        """
        p0 = cmath.sqrt((energy - self.value(x0)) / self.kinetic_coeff)
        return p0 if branch >= 0 else -p0


@dataclass(frozen=True)
class CosineLattice(Potential):
    """V(x) = -cos(x): the 2*pi-periodic lattice with wells at x = 2*pi*n."""

    def value(self, x: complex) -> complex:
        try:
            return -cmath.cos(x)
        except OverflowError:
            # cosh(Im x) overflow; non-finite result signals escape upstream
            return _CINF

    def gradient(self, x: complex) -> complex:
        try:
            return cmath.sin(x)
        except OverflowError:
            return _CINF


@dataclass(frozen=True)
class Quartic(Potential):
    """V(x) = x^4, the single-well anharmonic oscillator."""

    def value(self, x: complex) -> complex:
        x2 = x * x
        return x2 * x2

    def gradient(self, x: complex) -> complex:
        return 4.0 * x * x * x


@dataclass(frozen=True)
class DoubleWell(Potential):
    """V(x) = x^4 - 5 x^2, two wells separated by a barrier at x = 0."""

    kinetic_half: bool = field(default=False, kw_only=True)

    def value(self, x: complex) -> complex:
        x2 = x * x
        return x2 * (x2 - 5.0)

    def gradient(self, x: complex) -> complex:
        return x * (4.0 * x * x - 10.0)


@dataclass(frozen=True)
class Polynomial(Potential):
    """V(x) = sum(coeffs[k] * x**k), real coefficients in ascending order."""

    coeffs: tuple[float, ...] = (0.0, 0.0)

    def __post_init__(self) -> None:
        if len(self.coeffs) < 2:
            raise ValueError("polynomial potential needs degree >= 1 (at least 2 coefficients)")
        if not all(math.isfinite(c) for c in self.coeffs):
            raise ValueError("polynomial coefficients must be finite")

    def value(self, x: complex) -> complex:
        acc = complex(self.coeffs[-1])
        for c in reversed(self.coeffs[:-1]):
            acc = acc * x + c
        return acc

    def gradient(self, x: complex) -> complex:
        n = len(self.coeffs) - 1
        acc = complex(n * self.coeffs[n])
        for k in range(n - 1, 0, -1):
            acc = acc * x + k * self.coeffs[k]
        return acc


_BY_NAME = {
    "cosine": CosineLattice,
    "quartic": Quartic,
    "doublewell": DoubleWell,
}


def make_potential(name: str, kinetic: str | None = None) -> Potential:
    """Build a potential from a CLI-style name.

    ``name`` is one of ``cosine``, ``quartic``, ``doublewell`` or
    ``poly:<c0,c1,...>``.  ``kinetic`` is ``"half"`` / ``"full"`` or None to
    keep the potential's conventional default (cosine and quartic: half;
    doublewell: full).
    """
    name = name.strip().lower()
    if name.startswith("poly:"):
        try:
            coeffs = tuple(float(tok) for tok in name[5:].split(","))
        except ValueError as exc:
            raise ValueError(f"bad polynomial coefficients in {name!r}") from exc
        pot: Potential = Polynomial(coeffs=coeffs)
    elif name in _BY_NAME:
        pot = _BY_NAME[name]()
    else:
        raise ValueError(
            f"unknown potential {name!r}; expected cosine, quartic, doublewell or poly:<coeffs>"
        )
    if kinetic is not None:
        if kinetic not in ("half", "full"):
            raise ValueError(f"kinetic must be 'half' or 'full', got {kinetic!r}")
        return type(pot)(**{**_fields_of(pot), "kinetic_half": kinetic == "half"})
    return pot


def _fields_of(pot: Potential) -> dict:
    if isinstance(pot, Polynomial):
        return {"coeffs": pot.coeffs}
    return {}

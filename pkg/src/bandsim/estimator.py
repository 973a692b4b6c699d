"""Scikit-learn style facade over the trajectory classifier.

The heavy lifting lives in :mod:`bandsim.events`; this wrapper exists so
energy grids can be classified with the familiar fit/predict calling
convention and be dropped into sklearn pipelines and model-selection
tooling.  There is no training involved: ``fit`` validates parameters and
freezes the run configuration, ``predict`` maps energies to kind symbols.
"""

from __future__ import annotations

import math

import numpy as np
from sklearn.base import BaseEstimator
from sklearn.utils.validation import check_is_fitted

from .events import ClassifyConfig, VerdictRecord, classify_energy
from .integrator import IntegratorConfig
from .potentials import CosineLattice
from .validation import check_energies

__all__ = ["EnergyBehaviorClassifier"]


class EnergyBehaviorClassifier(BaseEstimator):
    """Classify complex energies by the long-time behavior of trajectories.

    Each energy is integrated in the cosine lattice from ``x0`` and the
    resulting trajectory is labeled with one of five kind symbols:

    ========  ==============================================
    ``"C"``   conduction (sustained one-directional hopping)
    ``"H"``   hopping that reverses direction
    ``"L"``   localized (no hop within the time budget)
    ``"U"``   undecided (budget exhausted mid-walk)
    ``"X"``   escaped (left the lattice region or drifted)
    ========  ==============================================

    Parameters mirror :class:`~bandsim.events.ClassifyConfig` and
    :class:`~bandsim.integrator.IntegratorConfig`, flattened to scalars so
    ``get_params``/``set_params`` and grid search work out of the box.
    """

    def __init__(
        self,
        hop_quota: int = 10,
        t_max: float = 2000.0,
        confirm_margin: float = math.pi / 2,
        x0: complex = 0j,
        branch: int = 1,
        rel_tol: float = 1e-12,
        abs_tol: float = 1e-12,
        h_init: float = 1e-3,
        h_min: float = 1e-12,
        h_max: float = 0.1,
        max_steps: int = 100_000_000,
        energy_tol: float = 1e-8,
        escape_bound: float = 150.0,
    ):
        self.hop_quota = hop_quota
        self.t_max = t_max
        self.confirm_margin = confirm_margin
        self.x0 = x0
        self.branch = branch
        self.rel_tol = rel_tol
        self.abs_tol = abs_tol
        self.h_init = h_init
        self.h_min = h_min
        self.h_max = h_max
        self.max_steps = max_steps
        self.energy_tol = energy_tol
        self.escape_bound = escape_bound

    def _build_config(self) -> ClassifyConfig:
        return ClassifyConfig(
            hop_quota=self.hop_quota,
            t_max=self.t_max,
            confirm_margin=self.confirm_margin,
            x0=complex(self.x0),
            branch=self.branch,
            integrator=IntegratorConfig(
                rel_tol=self.rel_tol,
                abs_tol=self.abs_tol,
                h_init=self.h_init,
                h_min=self.h_min,
                h_max=self.h_max,
                max_steps=self.max_steps,
                energy_tol=self.energy_tol,
                escape_bound=self.escape_bound,
            ),
        )

    def fit(self, X, y=None):
        """Validate parameters and freeze the run configuration.

        ``X`` is only checked for shape; nothing is learned from it.
        """
        X = check_energies(X)
        # Raises on out-of-range parameters.
        self.config_ = self._build_config()
        self.potential_ = CosineLattice()
        self.classes_ = np.array(["C", "H", "L", "U", "X"], dtype="<U1")
        self.n_features_in_ = 1
        return self

    def predict(self, X) -> np.ndarray:
        """Return the kind symbol for each energy in ``X``."""
        return np.array([v.kind.symbol for v in self.verdicts(X)], dtype="<U1")

    def verdicts(self, X) -> list[VerdictRecord]:
        """Full verdict records (hops, timings, drift) for each energy."""
        check_is_fitted(self)
        energies = check_energies(X)
        return [
            classify_energy(self.potential_, complex(e), self.config_)
            for e in energies
        ]

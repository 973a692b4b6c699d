"""Complex-energy classical dynamics in one-dimensional potentials.

Integrates Hamilton's equations for complex positions and momenta,
detects well-to-well tunneling hops in the cosine lattice, classifies
complex energies as conduction / hopping / localized, maps conduction
bands in the complex-energy plane, and measures closed-orbit periods,
action integrals, turning points and tunneling-time laws.
"""

from .potentials import CosineLattice, DoubleWell, Polynomial, Potential, Quartic, make_potential
from .integrator import (
    IntegratorConfig,
    PhaseState,
    StepSizeUnderflowError,
    Termination,
    TrajectoryRecord,
    integrate,
    step_embedded,
    thin_samples,
)
from .events import (
    ClassifyConfig,
    Direction,
    HopDetector,
    HopEvent,
    HopSurvey,
    HopTiming,
    Kind,
    NonAdjacentWellJump,
    VerdictRecord,
    classify_energy,
    inter_hop_times,
    survey_hops,
    well_of,
)
from .sweep import (
    BandInterval,
    CheckpointMismatchError,
    EdgeResult,
    GridCell,
    GridSpec,
    bands_on_line,
    refine_edge,
    sweep,
)
from .analysis import (
    ActionResult,
    HyperbolaFit,
    NoClosureError,
    OrbitResult,
    action_integral,
    hyperbola_fit,
    orbit_period,
    turning_points,
)
from .estimator import EnergyBehaviorClassifier
from .validation import check_energies

__version__ = "0.1.0"

__all__ = [
    "__version__",
    # potentials
    "Potential",
    "CosineLattice",
    "Quartic",
    "DoubleWell",
    "Polynomial",
    "make_potential",
    # integrator
    "PhaseState",
    "Termination",
    "IntegratorConfig",
    "TrajectoryRecord",
    "StepSizeUnderflowError",
    "integrate",
    "step_embedded",
    "thin_samples",
    # events
    "Direction",
    "Kind",
    "HopEvent",
    "HopDetector",
    "NonAdjacentWellJump",
    "well_of",
    "ClassifyConfig",
    "VerdictRecord",
    "HopSurvey",
    "HopTiming",
    "classify_energy",
    "survey_hops",
    "inter_hop_times",
    # sweep
    "GridSpec",
    "GridCell",
    "BandInterval",
    "EdgeResult",
    "CheckpointMismatchError",
    "sweep",
    "refine_edge",
    "bands_on_line",
    # analysis
    "NoClosureError",
    "OrbitResult",
    "ActionResult",
    "HyperbolaFit",
    "orbit_period",
    "action_integral",
    "turning_points",
    "hyperbola_fit",
    # estimator
    "EnergyBehaviorClassifier",
    "check_energies",
]

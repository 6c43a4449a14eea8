"""Exact, mean-field and semiclassical spectra of bosonic n:m conversion systems."""

from .model import ModelSpec
from .algebra import (
    boson_power_commutator,
    casimir_completion,
    casimir_poly,
    commutator_poly,
    completion_residual,
    ladder_product,
)
from .meanfield import (
    BifurcationEvent,
    FixedPoint,
    KummerGeometry,
    TrajectoryRecord,
    classical_casimir,
    classical_commutator,
    classify_bifurcations,
    find_fixed_points,
    integrate_trajectory,
    kummer_mesh,
    potentials,
    radius,
)
from .quantum import (
    DosHistogram,
    SpectrumResult,
    SweepTable,
    TridiagonalOperator,
    build_operators,
    dos_histogram,
    eigen_spectrum,
    ladder_strength,
    sweep_epsilon,
)
from .semiclassics import (
    ActionSet,
    SemiclassicalSpectrum,
    TurningPointSet,
    action_area,
    barrier_actions,
    dos_semiclassical,
    orbit_angle,
    orbit_period,
    phase_correction,
    quantize_double_well,
    quantize_single_well,
    semiclassical_spectrum,
    tunneling_integral,
    turning_points,
)

__version__ = "0.1.0"

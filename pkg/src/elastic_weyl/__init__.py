"""Two-term eigenvalue counting asymptotics for linear elasticity with mixed
boundary conditions: closed-form bulk and boundary coefficients, a half-line
scattering pipeline that reproduces the boundary coefficient numerically, and
exact spectra for model domains (flat cylinders, the unit disk) that verify
the asymptotics at desk scale."""

from .materials import (
    BoundaryCondition,
    DomainGeometry,
    MaterialParameters,
    NonConvexError,
    WeylCoefficients,
    assemble_coefficients,
    boundary_weyl_constant,
    bulk_weyl_constant,
    half_integer_gamma,
    validate_material,
)
from .shift import (
    AnomalousThresholdError,
    GridRefinementError,
    PiecewiseConstantFunction,
    QuadratureError,
    ScatteringMatrix,
    SingularSystemError,
    SpectralZone,
    ThresholdClass,
    ThresholdError,
    ThresholdKind,
    Thresholds,
    boundary_system,
    classify_threshold,
    integrate_to_second_coefficient,
    phase_shift_curve,
    point_spectrum_scan,
    scattering_matrix,
    spectral_shift,
    thresholds,
    zone_of,
)
from .cylinders import (
    CylinderGeometry,
    SpectrumTable,
    counting_closed_form,
    cylinder_two_term,
    enumerate_cylinder,
    floor_sum_checks,
    r2,
    r2_sieve,
    secular_residual,
)
from .disk import (
    BesselEvaluator,
    DiskModeRoots,
    DiskSpectrum,
    DoubleRootError,
    bessel_j,
    boundary_matrix,
    count_disk,
    disk_spectrum,
    find_mode_roots,
    secular_det,
)
from .asymptotics import (
    AsymptoticModel,
    CoefficientEstimate,
    InsufficientSpanError,
    ResidualSeries,
    estimate_second_coefficient,
    residual_table,
    two_term_prediction,
)

__version__ = "0.1.0"

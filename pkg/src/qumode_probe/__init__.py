"""Continuous-variable qumode probe simulation and thermodynamic inference."""

from .jacobi import ConvergenceError, jacobi_eigh
from .models import (
    ParamFamily,
    RegimePreset,
    dicke_family,
    dicke_interaction,
    linear_family,
    preset_by_name,
    rabi_interaction,
    regime_presets,
)
from .operators import (
    EigenDecomposition,
    HermitianOperator,
    SpectralLine,
    Spectrum,
    SystemState,
    commutator_norm,
    eigendecompose,
    evenly_spaced_spectrum,
    sigma_x,
    sigma_z,
    site_sum,
    spectrum_of,
    spin_x,
    thermal_state,
)
from .probe import (
    Bin,
    GaussianMixture,
    Ideal,
    MomentumDistribution,
    PiecewiseUniform,
    PointMasses,
    ProbeConfig,
    Squeezed,
    apply_detector_binning,
    dephasing_function,
    distribution_binned,
    distribution_for,
    distribution_ideal,
    distribution_numeric_oracle,
    distribution_squeezed,
    map_p_to_E,
)
from .reconstruct import (
    Histogram,
    ReconstructedLine,
    ReconstructedSpectrum,
    ResolutionParams,
    detect_peaks,
    histogram,
    moments,
    reconstruct_record,
    required_samples,
    resolution_params,
)
from .sampling import (
    MeasurementRecord,
    sample_measurements,
    sample_measurements_partitioned,
)
from .thermo import (
    DegenerateGroundStateError,
    NonThermalSpectrumError,
    QuenchReport,
    ThermoReport,
    ValidityReport,
    entropy,
    estimate_beta,
    free_energy,
    ground_state_overlap,
    heat_capacity,
    heat_capacity_finite_difference,
    log_partition_function,
    partition_function,
    quench_work,
    recover_degeneracies,
    thermo_report,
    validity_check,
)

__version__ = "0.1.0"

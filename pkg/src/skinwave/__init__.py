"""Wave-packet dynamics in non-Hermitian lattices with open boundaries."""

from .errors import (
    ConfigError,
    DefectiveMatrix,
    DegenerateDensity,
    DimensionMismatch,
    ExceptionalParameter,
    InsufficientData,
    InvalidGrid,
    InvalidParameter,
    NumericalOverflow,
    SkinwaveError,
    UnknownPreset,
    WidthUnavailable,
)
from .evolve import (
    EvolutionResult,
    SpectralDecomposition,
    WaveState,
    decompose,
    decompose_model,
    evolve_series,
    matrix_exp,
    propagate_expm,
    propagate_spectral,
)
from .model import (
    BoundarySSH,
    ContinuousHN,
    DiscreteHN,
    Geometry,
    HamiltonianMatrix,
    ModelSpec,
    NonHermitianSSH,
    bloch_dispersion,
    build_gradient_forward,
    build_hamiltonian,
    build_laplacian,
    group_velocity,
    hermitian_dispersion,
)
from .oracle import (
    GeneralOracleParams,
    HNOracleParams,
    general_peak,
    general_peak_velocity,
    general_velocities,
    hn_density,
    hn_peak,
    hn_peak_velocity,
    hn_v_in,
    hn_v_ref,
    norm_amplification,
    predict_stuck,
    reflected_momentum,
    sigma_sq_t,
)
from .similarity import (
    SimilarityTransform,
    build_similarity,
    hermitian_counterpart,
    hermiticity_residual,
    skin_factor,
    skin_factor_per_unit_length,
)
from .wavepacket import (
    AnalysisOptions,
    GaussianParams,
    LinearFit,
    ReflectionOutcome,
    TrajectorySeries,
    classify_reflection,
    density,
    extract_trajectory,
    gaussian_state,
    peak_position,
    peak_velocity_series,
    sigma_from_halfwidth,
    top_two_peaks,
)

__version__ = "0.1.0"

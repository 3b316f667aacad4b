"""Compressed-sensing matrices from random orbits of finite group representations."""
from ._backend import DEFAULT as KERNEL_BACKEND
from .analysis import (
    OrbitConstantReport,
    RipReport,
    coherence,
    extremal_vector,
    min_measurements,
    omega_two,
    orbit_constant_exact,
    restricted_isometry_constant,
    spectral_norm,
)
from .errors import *  # noqa: F401,F403
from .experiments import (
    ExperimentConfig,
    ResultTable,
    load_config,
    run_delta_scaling,
    run_phase_transition,
    run_verification_suite,
)
from .groups import (
    FiniteGroup,
    SamplingSet,
    affine_axis_subset,
    make_affine,
    make_cyclic,
    make_direct_product,
    random_sampling_set,
    sampling_set,
)
from .recovery import RecoveryResult, hard_threshold, iht, omp, recovery_success
from .representations import (
    Representation,
    affine_quasi_regular,
    conjugate,
    dft_matrix,
    fourier_realization,
    left_regular,
    trivial,
    weyl_heisenberg,
)
from .sensing import (
    GeneratorSpec,
    MeasurementMatrix,
    build_measurement_matrix,
    draw_generator,
    partial_circulant_direct,
    read_matrix,
    write_matrix,
)

__version__ = "0.1.0"

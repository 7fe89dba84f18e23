"""Fisher-information toolkit for two-mode interferometry with product-state inputs."""

from .fock import (
    CutoffError,
    DimensionError,
    FisherMethod,
    FisherReport,
    ModeMoments,
    NormalizationError,
    SingleModeState,
    TruncationError,
    TwoModeState,
    differenced_number_moments,
    moments,
    tensor,
)
from .fisher import (
    cfi_photon_counting,
    max_cfi,
    moment_estimator_sensitivity,
    qcrb,
    qfi_entangled,
    qfi_product,
    qfi_variance,
)
from .optics import (
    MzConvention,
    PhaseSetting,
    beam_splitter_apply,
    inverse_beam_splitter_apply,
    mz_output_probs,
    phase_shift_apply,
)
from .optimize import (
    split_optimum_qfi,
    equal_split_is_best,
    fixed_total_best,
    mean_constrained_search,
    quadrature_bound_check,
)
from .states import (
    SqueezeSpec,
    coherent_state,
    from_spec,
    noon_state,
    number_state,
    optimal_mean_input,
    squeezed_vacuum,
    twin_fock_input,
)

__version__ = "0.1.0"

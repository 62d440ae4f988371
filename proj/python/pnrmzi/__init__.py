"""Phase estimation with a coherent plus squeezed-vacuum Mach-Zehnder interferometer
and photon-number-resolving detectors of finite resolution."""

from ._core import (
    AmplitudeTable,
    CutoffOverflow,
    DegenerateLikelihood,
    DomainError,
    Error,
    InsufficientData,
    LightSource,
    MalformedInput,
    NPhotonState,
    SizeExceeded,
    ZeroProbability,
    asymptotic_constant,
    build_amplitude_table,
    cfi_per_n_analytic,
    cfi_per_n_numeric,
    coherent_amplitude,
    conditional_probabilities,
    crb_experiment,
    fit_power_law,
    generation_probability,
    optimize_alpha,
    optimize_single_component,
    postselect,
    probability_derivatives,
    qfi_per_n_operator_oracle,
    sample_clicks,
    squeezed_amplitude,
    total_fisher_approx,
    total_fisher_exact,
    total_fisher_ideal,
    wigner_d_block,
)

__version__ = "0.1.0"

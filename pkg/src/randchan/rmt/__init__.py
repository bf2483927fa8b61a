"""Random-matrix sampling, channel constructions and Monte Carlo spectra."""
from .matrices import (  # noqa: F401
    MODELS,
    BoundPanel,
    Spectrum,
    apply_channel,
    apply_complementary,
    b_qrs,
    bell_output,
    bell_output_norm,
    bounds_of_channel,
    choi,
    choi_complement,
    choi_complement_gamma,
    choi_gamma,
    dual_choi,
    dual_choi_spectrum_check,
    hermitian_eigenvalues,
    is_hermitian,
    model_matrix,
    operator_norm,
    partial_transpose,
    projector_gamma,
    range_projector,
    tensor_channels,
)
from .montecarlo import MonteCarloResult, input_dimension, monte_carlo_spectrum  # noqa: F401
from .named import (  # noqa: F401
    antisymmetric_channel,
    depolarizing_channel,
    flip_operator,
    identity_channel,
    max_entangled,
    werner_holevo,
    werner_holevo_map,
)
from .sampling import ChannelSample, complex_gaussian, sample_haar_unitary, sample_isometry, stream  # noqa: F401

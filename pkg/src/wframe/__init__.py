"""Compactly supported tight wavelet frames on Vilenkin groups."""

from .extension import (
    ExtensionImpossible,
    MaskFamily,
    extend_algorithm_a,
    extend_theorem2,
    householder_unitary,
    modulation_matrix,
    verify_uep,
)
from .frames import (
    StepFunction,
    analyze,
    approx_order_report,
    frame_coefficient,
    indicator,
    inner_product,
    parseval_check,
    refinable_hat,
    sobolev_norm,
    step_fourier,
    wavelet_hat,
)
from .masks import (
    AdmissibilityError,
    WalshPolynomial,
    generate_mask,
    poly_eval,
    polyphase_decompose,
    polyphase_recompose,
    validate_mask,
)
from .vgroup import GroupElement, coset_rep, h_of, lambda_value, norm, ominus, oplus, shift
from .walsh import character, vc_forward, vc_inverse, walsh_eval

__version__ = "0.1.0"

"""zetaconv: exact convolution powers of the Riemann zeta distribution,
their heat-kernel limit profile, and the prime-side constants driving both.
"""

from .convolution import (
    ConvolutionTable,
    convolution_table,
    default_max_m,
    divisor_power_counts,
    exact_sup_norm,
    naive_convolution,
    sup_norm,
)
from .errors import (
    CertificationError,
    DivergentConstant,
    GridOutsideNeighborhood,
    InvalidInput,
    LimitTooLarge,
    MarginTooSmall,
    QuadratureNotConverged,
    SupNotCertified,
    TailNotCertified,
    TruncationInsufficient,
    ZetaconvError,
)
from .limit_analysis import (
    GaussianBlockResult,
    HeatKernelParams,
    InversionResult,
    LLTReport,
    LLTRow,
    OutsideSupResult,
    SampleBatch,
    clt_check,
    gaussian_block_bound,
    heat_kernel,
    inversion_quadrature,
    llt_report,
    outside_neighborhood_sup,
    sample,
)
from .prime_levy import (
    DualConstants,
    EnvelopeReport,
    LevyAtoms,
    PrimeTable,
    TaylorCoefficients,
    alpha_beta_dual,
    envelope_check,
    levy_atoms,
    moment_check,
    sieve,
    taylor_coefficients,
)
from .zeta_core import Certified, ZetaParams, char_fn, zeta, zeta_deriv1, zeta_deriv2

__version__ = "0.1.0"

__all__ = [
    "__version__",
    "Certified",
    "ZetaParams",
    "zeta",
    "zeta_deriv1",
    "zeta_deriv2",
    "char_fn",
    "PrimeTable",
    "sieve",
    "LevyAtoms",
    "levy_atoms",
    "TaylorCoefficients",
    "taylor_coefficients",
    "DualConstants",
    "alpha_beta_dual",
    "moment_check",
    "EnvelopeReport",
    "envelope_check",
    "ConvolutionTable",
    "divisor_power_counts",
    "convolution_table",
    "naive_convolution",
    "sup_norm",
    "exact_sup_norm",
    "default_max_m",
    "HeatKernelParams",
    "heat_kernel",
    "LLTReport",
    "LLTRow",
    "llt_report",
    "InversionResult",
    "inversion_quadrature",
    "GaussianBlockResult",
    "gaussian_block_bound",
    "OutsideSupResult",
    "outside_neighborhood_sup",
    "SampleBatch",
    "sample",
    "clt_check",
    "ZetaconvError",
    "InvalidInput",
    "CertificationError",
    "TruncationInsufficient",
    "LimitTooLarge",
    "TailNotCertified",
    "SupNotCertified",
    "QuadratureNotConverged",
    "MarginTooSmall",
    "DivergentConstant",
    "GridOutsideNeighborhood",
]

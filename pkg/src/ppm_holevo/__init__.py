"""Holevo bounds for coherent-pulse PPM communication with inter-symbol phase diffusion."""

from .analysis import (
    ChannelParams,
    HolevoReport,
    SplittingComparison,
    baselines,
    choose_truncation,
    conjecture_check,
    poisson_weights,
    splitting_comparison,
    total_holevo,
)
from .channel import FULL_DEPHASING, dephasing_exponent, dephasing_factor, kernel_density
from .enumeration import average_dim, build_average_basis, compositions, individual_dim, occupied_count
from .errors import (
    HolevoError,
    InvalidArgumentError,
    InvalidDistributionError,
    NumericalFailureError,
    PSDViolationError,
    ResourceLimitError,
)
from .sectors import (
    SectorContribution,
    average_matrix,
    chi1_asymptotic,
    chi1_exact,
    individual_matrix,
    sector_chi,
)
from .spectral import (
    eigenvalues_symmetric,
    entropy_bits,
    szego_entropy_integral,
    szego_symbol,
    toeplitz,
)

__version__ = "0.1.0"

"""Phase-space characteristic functions, quasi-probabilities and photon-number
moments of squeezed coherent thermal light, with brute-force Fock-basis checks."""

__version__ = "0.1.0"

from .core import (
    DomainError,
    PhaseSpaceGrid,
    SqueezeParam,
    StateParams,
    ThermalParam,
    nbar_from_theta,
    theta_from_nbar,
)
from .charfn import chi_a, chi_b, chi_thermal, transform_params
from .quasiprob import (
    SingularDistributionError,
    classify_distribution,
    fourier_w,
    gaussian_coefficients,
    w_a_closed,
    w_b_closed,
)
from .moments import (
    mean_number_B,
    mean_number_a,
    variance_combination_B,
    variance_combination_a,
    variance_p1,
)

"""Tomographic marginals of relativistic-oscillator states and their boost laws."""

__version__ = "0.1.0"

from .errors import (
    DegenerateProjectionError,
    DimensionError,
    ImaginaryResidualError,
    IntegrandError,
    InvalidVelocityError,
    RelMarginalError,
    UnsupportedOrderError,
)
from .marginal import (
    Gaussian2D,
    Grid,
    MarginalParams,
    MarginalParams1D,
    marginal_1d,
    marginal_gaussian,
    marginal_numeric,
    rotation_marginal,
)
from .mathcore import QuadratureSpec, Scheme, fd_derivative, hermite, integrate_2d, quad_nodes
from .oscillator import (
    LightConePoint,
    OscillatorState,
    boost_lightcone,
    boost_zt,
    degeneracy,
    lightcone_from_zt,
    mass_squared,
    phi_momentum,
    psi_boosted,
    psi_rest,
    subsidiary_residual,
    zt_from_lightcone,
)
from .relativity import (
    BoostReport,
    boost_pullback_params,
    galileo_marginal_shift,
    verify_covariance,
)
from .symplectic import is_symplectic, random_symplectic, symplectic_form
from .wigner import (
    GaussianWignerState,
    galileo_shift,
    wigner_eval,
    wigner_ground,
    wigner_numeric,
)

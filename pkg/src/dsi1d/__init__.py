"""Exact spectra, S-matrices and phase diagrams for scale-invariant contact interactions in 1D."""

from .angular import (
    AngularChannel,
    CouplingPair,
    PhaseRegion,
    PhaseVerdict,
    angular_eigenvalues,
    classify_phase,
    dimer_extent,
    eigenfunction,
    quantization_residual,
    symmetric_channel_roots,
)
from .coordinates import (
    HypersphericalPoint,
    ParticleConfig,
    SectorDecomposition,
    Statistics,
    assemble_wavefunction,
    coupling_profile,
    hyperspherical,
    jacobi_transform,
    sector_map,
)
from .exceptions import (
    ConvergenceError,
    Dsi1dError,
    NumericalRangeError,
    ValidationError,
)
from .radial import (
    BoundState,
    ChannelParams,
    ProblemConfig,
    ScatteringPoint,
    bound_radial_wavefunction,
    bound_state,
    critical_lambda,
    residue_check,
    s_matrix,
    scattering_radial_wavefunction,
)
from .special import ImagOrderParams, bessel_k_imag, hankel_imag

__version__ = "0.1.0"

"""Quantum kicked top: Floquet spectra, Lyapunov exponents, multifractality."""

from ._core import (
    DegenerateSubspaceError,
    DiagonalizationMethod,
    ExpansionBasis,
    FloquetEigensystem,
    KickedTopParams,
    NumericalError,
    Parity,
    ScalingModel,
    __version__,
    angular_momentum,
    averaged_dq,
    averaged_lyapunov,
    build_floquet,
    chisq_cdf,
    chisq_pdf,
    classical_step,
    coherent_state,
    distance_report,
    evolve_state,
    expansion_weights,
    fit_brody,
    fractal_dimensions,
    kappa_threshold,
    lyapunov_exponent,
    lyapunov_field,
    parity_operator,
    pool_rescaled_coefficients,
    ratio_stats,
    scaling_fit,
    solve_floquet,
    spacings,
    tangent_map,
    wigner_d_matrix,
)

__all__ = [name for name in dir() if not name.startswith("_")] + ["__version__"]

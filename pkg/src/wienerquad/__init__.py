"""Quadratic integral functionals of the Wiener process over signed weights.

Three cross-validating routes to the same objects:

* closed-form norm identities carried by the primitive of the weight
  (:mod:`wienerquad.measure`),
* signed Sturm-Liouville spectra by transfer-matrix shooting and by Galerkin
  projection (:mod:`wienerquad.spectral`), turned into weighted chi-square
  series (:mod:`wienerquad.quadform`),
* reproducible Monte Carlo through the sine-basis path expansion
  (:mod:`wienerquad.klbasis`).

:mod:`wienerquad.nonnuclear` builds the comb weights whose multiplier is
Hilbert-Schmidt but provably not trace class.
"""

from .measure import (
    Primitive,
    SignedMeasure,
    atom,
    atoms_measure,
    combine,
    density_measure,
    dstar_inner,
    dstar_norm,
    integral_t,
    m_norm_sq,
    primitive,
    zero_measure,
)
from .klbasis import (
    SampleEnsemble,
    basis_deriv,
    basis_eval,
    coeff_matrix,
    diag_coeff_via_primitive,
    kernel_partial_sum,
    path_values,
    sample_normals,
    tau_split,
    tau_truncated,
)
from .spectral import (
    DIRICHLET,
    NEUMANN,
    EigenPair,
    Spectrum,
    eigenfunction,
    find_eigenvalues,
    find_full_atomic_spectrum,
    galerkin_boundary_eigenvalues,
    galerkin_spectrum,
    hs_norm_sq,
    limit_omega,
    nuclear_diagnostics,
    propagate,
    shooting_function,
    transfer_matrix,
)
from .quadform import (
    ChiSquareSeries,
    MomentSummary,
    analytic_moments,
    cdf,
    cdf_grid,
    compare_laws,
    hs_identity_check,
    measure_moments,
    nuclear_bound_check,
    sample_moments,
    sample_series,
    series_from_spectrum,
)
from .nonnuclear import (
    choose_nu,
    comb_eigenvalue,
    comb_eigenvalue_table,
    majorization_check,
    omega_convergence_report,
    rho_comb,
    rho_nu,
    rho_scaled,
)

__version__ = "0.1.0"

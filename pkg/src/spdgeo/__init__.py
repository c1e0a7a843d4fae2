"""Geodesics, geometric means and determinant inequalities on the PSD cone.

The package provides:

* ``linalg``       -- eigendecomposition, matrix functions, polar
                      decomposition, determinants (dense, small, real);
* ``means``        -- the matrix geometric mean A#B with rank-deficient
                      regularisation and its characterising properties;
* ``geodesics``    -- Euclidean/Cholesky/Euclidean-root/Procrustes/
                      Riemannian distances and interpolation paths, plus
                      determinant-root (swelling) profiles;
* ``majorisation`` -- vector domination orders, the softplus isotone
                      function and compound matrices;
* ``verify``       -- seeded random ensembles and property campaigns for
                      every inequality the library relies on;
* ``field``/``cli`` -- tensor-field files, grid upsampling and the
                      ``spdgeo`` command-line tool.
"""

from .errors import (
    DomainViolation,
    HypothesisViolated,
    InvalidOrder,
    LengthMismatch,
    NegativeEntry,
    NonConvergence,
    NotPSD,
    ParseError,
    SingularInput,
    SpdGeoError,
    ValidationError,
)
from .linalg import (
    EigenDecomposition,
    PolarDecomposition,
    determinant,
    eig_sym,
    frobenius_norm,
    is_psd,
    matrix_function,
    polar,
    psd_tolerance,
    sqrt_psd,
)
from .means import (
    GeoMeanConfig,
    check_block_maximality,
    check_hiai_power,
    geometric_mean,
    geometric_mean_limit,
    naive_geometric_mean,
    naive_mean_eigenvalues,
)
from .geodesics import (
    GeodesicSpec,
    MetricKind,
    cholesky_upper,
    distance,
    path_point,
    swelling_profile,
    unscaled_polar_factor,
)
from .majorisation import (
    MajorisationVerdict,
    compound_matrix,
    log_majorises,
    majorises,
    phi_isotone,
    phi_isotone_gradient,
    random_majorisation_pair,
    sort_desc,
    weakly_majorises,
)
from .field import (
    TensorField,
    load_field,
    load_tensor,
    pack_tensor,
    save_field,
    save_tensor,
    unpack_tensor,
    upsample_field,
)
from .verify import (
    EnsembleSpec,
    PropertyId,
    RankMode,
    VerificationReport,
    generate_psd,
    generate_psd_pair,
    replay_witness,
    reports_to_csv,
    reports_to_json,
    run_all,
    run_property,
    search_extrapolation_counterexamples,
    verify_det_geomean,
    verify_log_majo_lemma,
    verify_main_theorem,
)

__version__ = "0.1.0"

"""truedisc: true-discovery guarantee matrices from independent e-values."""

from .baseline import closed_testing_pmatrix, simes_p
from .dm import (
    DiscoveryMatrix,
    PMatrix,
    SortedEValues,
    calibrate_matrix,
    discovery_matrix_fast,
    discovery_matrix_reference,
    sort_evalues,
)
from .errors import SizeGuardError, ValidationError
from .merge import (
    UStatAccumulator,
    e_to_p,
    relative_variance,
    u2_identity,
    u_statistic,
    validate_evalues,
)
from .render import (
    FISHER_P,
    JEFFREYS_E,
    Band,
    ColorScale,
    ComparisonReport,
    RenderSpec,
    classify,
    compare_report,
    ematrix_from_csv,
    matrix_to_csv,
    matrix_to_svg,
    pmatrix_from_csv,
    rows_from_csv,
)
from .sim import (
    SimConfig,
    SimOutput,
    SplitMix64,
    e_from_obs,
    generate_study,
    normal_cdf,
    normal_quantile,
    p_from_obs,
)

__version__ = "0.1.0"

__all__ = [
    "Band",
    "ColorScale",
    "ComparisonReport",
    "DiscoveryMatrix",
    "FISHER_P",
    "JEFFREYS_E",
    "PMatrix",
    "RenderSpec",
    "SimConfig",
    "SimOutput",
    "SizeGuardError",
    "SortedEValues",
    "SplitMix64",
    "UStatAccumulator",
    "ValidationError",
    "calibrate_matrix",
    "classify",
    "closed_testing_pmatrix",
    "compare_report",
    "discovery_matrix_fast",
    "discovery_matrix_reference",
    "e_from_obs",
    "e_to_p",
    "ematrix_from_csv",
    "generate_study",
    "matrix_to_csv",
    "matrix_to_svg",
    "normal_cdf",
    "normal_quantile",
    "p_from_obs",
    "pmatrix_from_csv",
    "relative_variance",
    "rows_from_csv",
    "simes_p",
    "sort_evalues",
    "u2_identity",
    "u_statistic",
    "validate_evalues",
]

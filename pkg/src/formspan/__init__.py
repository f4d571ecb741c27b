"""Exact engine for vector configurations: Tutte polynomials, graded spans
of subset products, reciprocal algebra dimensions, and the identities
tying them together."""

from .configs import (
    VectorConfig,
    delete,
    contract,
    direct_sum,
    make_config,
    parallel_extension,
    parse_config,
    restrict_to_flat,
)
from .exact import GF, QQ, FieldSpec, Matrix
from .matroid import (
    bases,
    circuits,
    closure,
    cocircuits,
    element_status,
    external_activity,
    flats,
    independent_sets,
    internal_activity,
    nbc_sets,
    rank_of,
)
from .prodspan import (
    DimTable,
    MultiPoly,
    PowerSeries,
    H_polynomial,
    activity_basis,
    cell_dimension,
    dim_P_top,
    dim_table,
    hilbert_P,
    nbc_dim_check,
    product_form,
    span_dimension,
    verify_main,
)
from .reciprocal import dim_C, terao_series, verify_terao
from .spanning import (
    h_polynomial_check,
    max_spanned_degree,
    min_cocircuit_size,
    verify_spanning,
)
from .tutte import (
    BivariatePoly,
    char_poly,
    crapo_decompose,
    parallel_tutte_formula,
    tutte_activities,
    tutte_corank_nullity,
    tutte_dc,
)

__version__ = "0.1.0"

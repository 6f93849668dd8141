"""Bernstein-polynomial spectral filters on graphs.

Design filters by choosing coefficients, apply them with sparse matvecs,
learn them from data under a non-negativity constraint, and check all of
it against a dense eigendecomposition on small graphs.
"""
from .bernstein import (
    FILTER_NAMES,
    BernCoeffs,
    FilterFn,
    ValidityReport,
    basis_matrix,
    bernstein_basis,
    design_coeffs,
    eval_filter,
    monomial_to_bernstein,
    named_filter,
    validate_filter,
)
from .classify import (
    PRESETS,
    ModelParams,
    NodeDataset,
    TrainConfig,
    forward,
    loss_and_grads,
    make_splits,
    run_splits,
    train,
)
from .errors import (
    BernfilterError,
    DatasetError,
    DivergenceError,
    FilterError,
    GraphError,
    OracleCapError,
)
from .graph import Graph, NormalizedOperator, build_graph, grid_graph, laplacian_matvec, normalized_operator
from .learn import (
    FitReport,
    LearnConfig,
    RegressionTask,
    interior_mask,
    learn_filter,
    make_regression_task,
    sse_and_r2,
)
from .propagation import BasisOperatorCache, bernnet_apply, bernnet_apply_matrix, build_basis_cache
from .spectral import (
    SpectralDecomposition,
    eigendecompose,
    energy_solution,
    exact_filter_apply,
    heat_suffix_sum,
    jacobi_eigh,
    ppr_suffix_sum,
)

__version__ = "0.1.0"

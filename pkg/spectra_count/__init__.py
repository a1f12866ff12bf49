__version__ = "0.1.0"


from .sparse import CsrMatrix, ShiftedOperator, as_operator, matvec
from .laplace import count_laplace_eigs_below, gen_laplace_2d, laplace_eigenvalues
from .loaders import load_matrix, read_matrix_market, write_matrix_market
from .dense import dense_inertia_oracle, hessenberg_eig, sturm_count_below, tridiag_eig, TridiagonalSym
from .krylov import arnoldi, krylov_poly_apply, lanczos
from .quadrature import apply_step_function, arnoldi_rule, ga_rule, gauss_rule
from .preconditioner import (
    FactoredPreconditioner, PreconditionerSpec, UnfactoredPreconditioner, as_unfactored, identity_preconditioner,
)
from .preconditioners import ildl_factorize, make_abs_diagonal, make_abs_ildl, make_ldl_exact, make_preconditioner
from .estimator import CountConfig, EstimateReport, Method, RngKind, sample_vector
from .estimators import estimate_count_arnoldi, estimate_count_chebyshev, estimate_count_lanczos, hutchinson_trace
from .counting import (
    estimate_count, estimate_interval_count, exact_count, find_minimal_steps, slice_spectrum,
)
from .exceptions import (
    SpectraCountError, ContractViolation, MatrixMarketError, EigenSolverError,
    QuadratureBreakdown, KrylovError, OracleRefusal,
)


__all__ = [
    "CsrMatrix", "ShiftedOperator", "as_operator", "matvec",
    "count_laplace_eigs_below", "gen_laplace_2d", "laplace_eigenvalues",
    "load_matrix", "read_matrix_market", "write_matrix_market",
    "dense_inertia_oracle", "hessenberg_eig", "sturm_count_below", "tridiag_eig", "TridiagonalSym",
    "arnoldi", "krylov_poly_apply", "lanczos",
    "apply_step_function", "arnoldi_rule", "ga_rule", "gauss_rule",
    "FactoredPreconditioner", "PreconditionerSpec", "UnfactoredPreconditioner",
    "as_unfactored", "identity_preconditioner",
    "ildl_factorize", "make_abs_diagonal", "make_abs_ildl", "make_ldl_exact", "make_preconditioner",
    "CountConfig", "EstimateReport", "Method", "RngKind", "sample_vector",
    "estimate_count_arnoldi", "estimate_count_chebyshev", "estimate_count_lanczos", "hutchinson_trace",
    "estimate_count", "estimate_interval_count", "exact_count", "find_minimal_steps", "slice_spectrum",
    "SpectraCountError", "ContractViolation", "MatrixMarketError", "EigenSolverError",
    "QuadratureBreakdown", "KrylovError", "OracleRefusal",
]

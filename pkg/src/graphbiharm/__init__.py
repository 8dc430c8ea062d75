"""Discrete variational calculus on weighted measured graphs and Nehari
ground states of the nonlinear biharmonic equation
L^2 u - L u + (lam*a + 1) u = |u|^(p-2) u, with its Dirichlet limit on the
potential well and coupling sweeps toward that limit."""

from . import _kernels
from .calculus import (
    IbpResiduals,
    VertexFunction,
    bilaplacian,
    check_ibp,
    cutoff,
    gradient_form,
    gradient_norm,
    indicator,
    integrate,
    laplacian,
    vertex_function,
    zeros,
)
from .convergence import CompareMetrics, SweepReport, SweepRow, compare, sweep
from .errors import (
    AsymmetricWeightError,
    CompactSupportError,
    ConfigError,
    DegenerateProblemError,
    DisconnectedDomainError,
    DisconnectedGraphError,
    DuplicateEdgeError,
    EmptyInteriorError,
    GraphbiharmError,
    GraphConstructionError,
    GraphMismatchError,
    NegativePotentialError,
    NonpositiveMeasureError,
    NonpositiveWeightError,
    NonzeroOutsideDomainError,
    ParameterRangeWarning,
    ParseError,
    QOutOfRangeError,
    SelfLoopError,
    UnknownVertexError,
    ZeroFunctionError,
)
from .graph import (
    AssumptionReport,
    Domain,
    Graph,
    Potential,
    build_graph,
    distance,
    distances_from,
    grid_graph,
    make_domain,
    make_potential,
    path_graph,
    random_graph,
    validate_assumptions,
)
from .spaces import SpaceSpec, embedding_constant, inner_product, norm
from .variational import (
    ProblemParams,
    Solution,
    SolverConfig,
    energy,
    energy_dirichlet,
    energy_gradient,
    nehari_project,
    nehari_project_dirichlet,
    residual_check,
    residual_check_dirichlet,
    solve_dirichlet,
    solve_ground_state,
)

__version__ = "0.1.0"


def kernel_backend() -> str:
    """Which kernel backend is active: 'cython' or 'numpy'."""
    return _kernels.BACKEND

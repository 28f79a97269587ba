"""Graph-Laplacian regularized estimation of design matrices.

Submodules
----------
graph
    Random geometric graphs, Laplacians, spectra.
synth
    Synthetic ``Y = Theta X + Omega`` instances.
solver
    Closed-form Laplacian/ridge estimators and a gradient-descent oracle.
bounds
    Error bounds and lemma diagnostics.
harness
    Seeded experiments and CSV/SVG artifacts; ``lapreg`` CLI in :mod:`lapreg.cli`.
"""

from .errors import (
    ConfigError,
    InvalidArgumentError,
    LapRegError,
    NonConvergenceError,
    NumericalFailureError,
    SingularSystemError,
)
from .graph import (
    Graph,
    LaplacianSpectrum,
    fiedler_value,
    generate_geometric_graph,
    identity_spectrum,
    is_connected,
    laplacian,
    laplacian_quadratic_form,
)
from .solver import (
    EstimateResult,
    EstimatorConfig,
    gradient_loss,
    objective,
    oracle_gradient_descent,
    solve_laplacian_regularized,
    solve_ridge,
    taylor_remainder,
)
from .synth import ModelInstance, make_instance, sample_coefficients, sample_design_matrix, synthesize_observations
from .bounds import (
    BoundIngredients,
    LemmaReport,
    corollary1_bound,
    kappa_from_sigma,
    lemma_diagnostics,
    recommended_alpha,
    theorem1_bound,
)

__version__ = "0.1.0"

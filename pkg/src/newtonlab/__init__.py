"""Second-order optimization laboratory for small nonlinear discretizations.

Exact-Hessian Newton, damped (Levenberg-Marquardt) Newton, BFGS,
saddle-free Newton, ADAM and gradient descent on regression and
strong-form PDE losses built from tiny networks and analytic
parameterizations, plus the measurement apparatus (eigen-spectrum
classification, basis/target orthogonality, trivial-solution detection)
needed to study which stationary points each method finds.
"""

from newtonlab.diffgraph import (
    DerivativeBundle,
    NonFiniteDerivative,
    ParamVector,
    SpatialJet,
    UnsupportedDimension,
    param_derivs,
    spatial_jet,
)
from newtonlab.models import Model, ModelSpec, ShapeError, build, fourier_embed
from newtonlab.objectives import (
    Objective,
    Quadrature1D,
    Quadrature2D,
    TargetFunction,
    TorusSpec,
    circle_loss,
    pinn1d_loss,
    pinn2d_loss,
    regression_loss,
    torus_loss,
)
from newtonlab.linalg import (
    EigFailure,
    SingularSystem,
    random_hessian_census,
    solve_shifted,
    sym_eig,
)
from newtonlab.optimizers import (
    OptimizerConfig,
    StepFailure,
    TrajectoryRecord,
    bfgs_run,
    adam_run,
    lm_newton_step,
    newton_step,
    run,
    saddle_free_step,
)
from newtonlab.diagnostics import (
    StationaryPointReport,
    classify,
    detect_trivial,
    orthogonality_pinn,
    orthogonality_regression,
)

__all__ = [
    "DerivativeBundle",
    "NonFiniteDerivative",
    "ParamVector",
    "SpatialJet",
    "UnsupportedDimension",
    "param_derivs",
    "spatial_jet",
    "Model",
    "ModelSpec",
    "ShapeError",
    "build",
    "fourier_embed",
    "Objective",
    "Quadrature1D",
    "Quadrature2D",
    "TargetFunction",
    "TorusSpec",
    "circle_loss",
    "torus_loss",
    "regression_loss",
    "pinn1d_loss",
    "pinn2d_loss",
    "EigFailure",
    "SingularSystem",
    "random_hessian_census",
    "solve_shifted",
    "sym_eig",
    "OptimizerConfig",
    "StepFailure",
    "TrajectoryRecord",
    "newton_step",
    "lm_newton_step",
    "saddle_free_step",
    "bfgs_run",
    "adam_run",
    "run",
    "StationaryPointReport",
    "classify",
    "detect_trivial",
    "orthogonality_regression",
    "orthogonality_pinn",
]

__version__ = "0.1.0"

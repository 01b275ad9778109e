"""High-order polygonal discontinuous Galerkin solver for 2D compressible flow.

One-step arbitrary-high-order time integration: an element-local
space-time predictor followed by a single conservative corrector update,
on polygonal Voronoi meshes with a continuous piecewise-polynomial
subgrid basis inside each cell.
"""

__version__ = "1.0.0"

from . import (basis, cases, discretization, harness, kernels, limiter, mesh,
               physics, solver)
from .errors import (AssemblyError, ConfigurationError, DegenerateInputError,
                     InadmissibleStateError, InvalidParameterError,
                     MeshQualityError, NumericalFailureError, PolyDGError,
                     PredictorDivergenceError, TopologyError)

__all__ = [
    "basis", "cases", "discretization", "harness", "kernels", "limiter",
    "mesh", "physics", "solver", "__version__",
    "PolyDGError", "InvalidParameterError", "ConfigurationError",
    "DegenerateInputError", "MeshQualityError", "TopologyError",
    "AssemblyError", "InadmissibleStateError", "PredictorDivergenceError",
    "NumericalFailureError",
]

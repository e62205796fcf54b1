from .kernels import BACKEND
from .projection import (ProjectionResult, natural_residual, project_box,
                         project_polyhedron)
from .solve import (SelectionReport, TikhonovPathParams, ViSolveParams,
                    ViSolveReport, estimate_lipschitz, optimal_selection,
                    regularized_game, regularized_operator, solve_regularized,
                    solve_vi)

__all__ = [
    "BACKEND",
    "ProjectionResult",
    "SelectionReport",
    "TikhonovPathParams",
    "ViSolveParams",
    "ViSolveReport",
    "estimate_lipschitz",
    "natural_residual",
    "optimal_selection",
    "project_box",
    "project_polyhedron",
    "regularized_game",
    "regularized_operator",
    "solve_regularized",
    "solve_vi",
]

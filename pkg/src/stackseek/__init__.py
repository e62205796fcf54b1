"""stackseek: induced Stackelberg equilibrium seeking over monotone follower games.

Leader-side Tikhonov incentives make the follower reaction single-valued;
a two-point zeroth-order loop then drives the leader's decision toward a
stationary point of the induced objective.
"""

from .engine import (BACKEND, TikhonovPathParams, ViSolveParams, ViSolveReport,
                     natural_residual, optimal_selection, project_box,
                     project_polyhedron, regularized_operator,
                     solve_regularized, solve_vi)
from .model import (MONOTONE, STRONGLY_MONOTONE, UNVERIFIED, Blocks,
                    FeasibleRegion, LeaderObjective, ParametricGame,
                    SelectionFunction, check_gradient, check_monotonicity,
                    check_strong_convexity, eval_pseudogradient, make_region)
from .seeker import (ScheduleParams, SeekProblem, Trace, TraceRecord,
                     estimate_gradient, sample_sphere, schedule, seek,
                     stationarity_profile)

__version__ = "0.1.0"

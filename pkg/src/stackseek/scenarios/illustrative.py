"""Two-follower illustrative game with a one-dimensional leader.

Follower costs (a := y + eps, required positive for follower convexity):

    J1(x1, x2; y) = a/2 * x1^2 + x1 x2
    J2(x2, x1; y) = 1/2 * x2^2 + a * x1 x2

so F(x; y) = (a x1 + x2, a x1 + x2): every interior point of the line
x2 = -a x1 zeroes the pseudogradient, giving a continuum of equilibria.
The hand expansion <F(u)-F(u'), u-u'> = a w1^2 + w2^2 + (1+a) w1 w2 is
indefinite unless a = 1, so the game is declared "unverified" by default;
pass monotonicity="monotone" only at a pinned a=1 configuration (the
sampling check is the guardrail).

The leader minimizes J0(y, x) = y^2 + y (x1 + x2).  With the selection
phi(x) = (x1 - t)^2 + w x2^2 the induced reaction is

    x1*(y) = t / (1 + w a^2),    x2*(y) = -a x1*(y).

The three first-order regimes iterate closed-form recursions in y (they
never query the follower oracles, so they are defined for every real y;
the oracles themselves fault when evaluated at a <= 0):

    oscillating/inexact:  grad_k = 2 y (1 - x1) + x1 (1 - eps)
    exact:                grad_k = 2 y + (x1 + x2) + y * d(x1 + x2)/dy
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Optional, Sequence

import numpy as np

from ..errors import DomainFault
from ..model import (UNVERIFIED, Blocks, LeaderObjective, ParametricGame,
                     SelectionFunction, make_region)
from ..seeker import SeekProblem


@dataclass(frozen=True)
class IllustrativeConfig:
    epsilon: float = 0.1
    x1_box: tuple[float, float] = (-50.0, 50.0)
    x2_box: tuple[float, float] = (-50.0, 50.0)
    phi_target: float = 1.0     # phi = (x1 - phi_target)^2 + phi_weight * x2^2
    phi_weight: float = 100.0
    y0: float = 0.0
    monotonicity: str = UNVERIFIED


@dataclass(frozen=True)
class IllustrativeScenario:
    problem: SeekProblem
    config: IllustrativeConfig
    x1_star: Callable[[float], float]
    x_star_phi: Callable[[float], np.ndarray]
    interior_equilibrium: Callable[[float, float], np.ndarray]
    in_interior_set: Callable[[np.ndarray, float], bool]
    induced_objective: Callable[[float], float]

    def grid_oracle(self, lo: float = -2.0, hi: float = 2.0, step: float = 1e-4) -> float:
        """Dense 1-d grid argmin of the induced objective."""
        ys = np.arange(lo, hi + step / 2, step)
        vals = np.array([self.induced_objective(float(t)) for t in ys])
        return float(ys[int(np.argmin(vals))])


def build_illustrative(config: IllustrativeConfig | None = None) -> IllustrativeScenario:
    config = config or IllustrativeConfig()
    eps = config.epsilon
    t, w = config.phi_target, config.phi_weight

    def a_of(y) -> float:
        yv = float(np.atleast_1d(y)[0])
        a = yv + eps
        if a <= 0.0:
            raise DomainFault(f"illustrative game needs y + eps > 0; got {a:.6g}")
        return a

    def F(x, y):
        a = a_of(y)
        s = a * x[0] + x[1]
        return np.array([s, s])

    def affine(y):
        a = a_of(y)
        return np.array([[a, 1.0], [a, 1.0]]), np.zeros(2)

    def j1(x, y):
        a = a_of(y)
        return 0.5 * a * x[0] ** 2 + x[0] * x[1]

    def j2(x, y):
        a = a_of(y)
        return 0.5 * x[1] ** 2 + a * x[0] * x[1]

    region = make_region(lo=[config.x1_box[0], config.x2_box[0]],
                         hi=[config.x1_box[1], config.x2_box[1]])
    game = ParametricGame(blocks=Blocks((1, 1)), F=F, region=region, m=1,
                          monotonicity=config.monotonicity, affine=affine,
                          cost_values=(j1, j2))

    phi = SelectionFunction(
        value=lambda x: (x[0] - t) ** 2 + w * x[1] ** 2,
        grad=lambda x: np.array([2.0 * (x[0] - t), 2.0 * w * x[1]]),
        mu=2.0 * min(1.0, w),
        quadratic=(np.array([[2.0, 0.0], [0.0, 2.0 * w]]), np.array([-2.0 * t, 0.0])),
    )

    j0 = LeaderObjective(
        value=lambda y, x: float(y[0] ** 2 + y[0] * (x[0] + x[1])))

    def x1_star(y: float) -> float:
        a = float(np.atleast_1d(y)[0]) + eps
        return t / (1.0 + w * a * a)

    def x_star_phi(y: float) -> np.ndarray:
        a = float(np.atleast_1d(y)[0]) + eps
        x1 = x1_star(y)
        return np.array([x1, -a * x1])

    def interior_equilibrium(y: float, x1: float) -> np.ndarray:
        return np.array([x1, -(float(y) + eps) * x1])

    def in_interior_set(x: np.ndarray, y: float) -> bool:
        a = float(y) + eps
        on_line = abs(x[1] + a * x[0]) <= 1e-9 * max(1.0, abs(x[0]))
        interior = (config.x1_box[0] < x[0] < config.x1_box[1]
                    and config.x2_box[0] < x[1] < config.x2_box[1])
        return bool(on_line and interior)

    def induced_objective(y: float) -> float:
        yv = float(np.atleast_1d(y)[0])
        x = x_star_phi(yv)
        return float(yv * yv + yv * (x[0] + x[1]))

    problem = SeekProblem(game=game, phi=phi, j0=j0, m=1,
                          y0=np.array([config.y0]))
    return IllustrativeScenario(problem=problem, config=config, x1_star=x1_star,
                                x_star_phi=x_star_phi,
                                interior_equilibrium=interior_equilibrium,
                                in_interior_set=in_interior_set,
                                induced_objective=induced_objective)


OSCILLATING = "oscillating"
INEXACT = "inexact"
EXACT = "exact"


@dataclass(frozen=True)
class Regime:
    """Lower-level reaction model for the first-order leader update.

    oscillating: x1 comes from an exogenous generator over the interior
    equilibrium set (default period-2 alternation between 0.5 and 1.5);
    inexact: x1 follows the phi-selection map but the leader ignores the
    dependence; exact: the leader differentiates through the induced map
    (central differences).
    """

    kind: str
    x1_sequence: Optional[Callable[[int], float]] = None

    def __post_init__(self):
        if self.kind not in (OSCILLATING, INEXACT, EXACT):
            raise ValueError(f"unknown regime {self.kind!r}")

    @staticmethod
    def oscillating(values: Sequence[float] = (0.5, 1.5)) -> "Regime":
        vals = tuple(float(v) for v in values)
        return Regime(OSCILLATING, lambda k: vals[k % len(vals)])

    @staticmethod
    def constant(value: float) -> "Regime":
        return Regime(OSCILLATING, lambda k, _v=float(value): _v)

    @staticmethod
    def inexact() -> "Regime":
        return Regime(INEXACT)

    @staticmethod
    def exact() -> "Regime":
        return Regime(EXACT)


@dataclass(frozen=True)
class RegimeRecord:
    k: int
    y: float
    x1: float
    x: np.ndarray
    grad: float
    j0: float


@dataclass
class RegimeTrace:
    records: list[RegimeRecord] = field(default_factory=list)
    fault: Optional[str] = None
    meta: dict = field(default_factory=dict)

    def __len__(self):
        return len(self.records)

    def column(self, name: str) -> np.ndarray:
        return np.array([getattr(r, name) for r in self.records])


def run_regime(scenario: IllustrativeScenario, regime: Regime, eta: float, K: int,
               y0: float | None = None, fd_step: float | None = None) -> RegimeTrace:
    """Iterate y_{k+1} = y_k - eta * grad_k for K steps under the given regime.

    Halts with a fault on a non-finite iterate (e.g. a wildly unstable
    step size); the closed-form recursions themselves are total.
    """
    eps = scenario.config.epsilon
    y = float(scenario.config.y0 if y0 is None else y0)
    trace = RegimeTrace(meta={"regime": regime.kind, "eta": eta, "K": K, "y0": y,
                              "epsilon": eps})
    seq = regime.x1_sequence or (lambda k: 0.5 if k % 2 == 0 else 1.5)
    for k in range(K):
        if regime.kind == OSCILLATING:
            x1 = float(seq(k))
            grad = 2.0 * y * (1.0 - x1) + x1 * (1.0 - eps)
            x = scenario.interior_equilibrium(y, x1)
        elif regime.kind == INEXACT:
            x1 = scenario.x1_star(y)
            grad = 2.0 * y * (1.0 - x1) + x1 * (1.0 - eps)
            x = scenario.interior_equilibrium(y, x1)
        else:  # EXACT
            x = scenario.x_star_phi(y)
            x1 = float(x[0])
            h = fd_step if fd_step is not None else 1e-6 * (1.0 + abs(y))
            xp = scenario.x_star_phi(y + h)
            xm = scenario.x_star_phi(y - h)
            dsum = float((xp[0] + xp[1]) - (xm[0] + xm[1])) / (2.0 * h)
            grad = 2.0 * y + (x[0] + x[1]) + y * dsum
        j0 = float(y * y + y * (x[0] + x[1]))
        trace.records.append(RegimeRecord(k=k, y=y, x1=x1, x=x, grad=grad, j0=j0))
        y = y - eta * grad
        if not np.isfinite(y):
            trace.fault = f"iterate diverged to non-finite y at k={k}"
            return trace
    return trace


@dataclass(frozen=True)
class Prop1Report:
    y_converged: bool
    x1_converged: bool
    consistent: bool
    y_range: float
    x1_range: float


def check_prop1(trace: RegimeTrace, tol: float = 1e-4) -> Prop1Report:
    """Convergence necessarily propagates from y to x1: flag the violation.

    A sequence counts as converged when its last-quarter range is below tol.
    """
    if len(trace) < 200:
        raise ValueError("check_prop1 needs a trace of length >= 200")
    q = len(trace) // 4
    ys = trace.column("y")[-q:]
    x1s = trace.column("x1")[-q:]
    y_range = float(ys.max() - ys.min())
    x1_range = float(x1s.max() - x1s.min())
    y_conv = y_range < tol
    x1_conv = x1_range < tol
    return Prop1Report(y_converged=y_conv, x1_converged=x1_conv,
                       consistent=not (y_conv and not x1_conv),
                       y_range=y_range, x1_range=x1_range)

"""Certified-monotone linear testbed with closed-form reference maps.

Each block pair solves F(x; y) = A x - b(y) with

    A = [[1, -1], [-1, 1]] (+ shift * I),   b(y) = (y, -y),

so A is symmetric PSD with kernel span{(1,1)} and the solution set of the
unshifted VI is the whole line {x1 - x2 = y} (big boxes keep it interior).
With phi = ||x||^2 / 2 the references are

    x_beta(y) = (y/(2+beta), -y/(2+beta)),   x*_phi(y) = (y/2, -y/2),

and the leader cost J0(y, x) = (y-1)^2 + ||x||^2 induces
J(y) = (y-1)^2 + pairs * y^2 / 2 with minimizer y* = 2/(2 + pairs).
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

import numpy as np

from ..model import (MONOTONE, STRONGLY_MONOTONE, Blocks, LeaderObjective,
                     ParametricGame, SelectionFunction, make_region)
from ..seeker import SeekProblem


@dataclass(frozen=True)
class TestbedConfig:
    pairs: int = 1
    box: float = 10.0
    shift: float = 0.0       # > 0: strongly monotone variant A + shift * I
    y0: float = -1.0


@dataclass(frozen=True)
class TestbedScenario:
    problem: SeekProblem
    config: TestbedConfig
    x_beta: Callable[[float, float], np.ndarray]
    x_star_phi: Callable[[float], np.ndarray]
    induced_objective: Callable[[float], float]
    solution_residual: Callable[[np.ndarray, float], float]

    def grid_oracle(self, lo: float = -2.0, hi: float = 2.0, step: float = 1e-4) -> float:
        ys = np.arange(lo, hi + step / 2, step)
        vals = np.array([self.induced_objective(float(t)) for t in ys])
        return float(ys[int(np.argmin(vals))])


def build_monotone_testbed(config: TestbedConfig | None = None) -> TestbedScenario:
    config = config or TestbedConfig()
    p = config.pairs
    if p < 1:
        raise ValueError("pairs must be >= 1")
    n = 2 * p
    shift = float(config.shift)

    block = np.array([[1.0, -1.0], [-1.0, 1.0]])
    A_mat = np.kron(np.eye(p), block) + shift * np.eye(n)
    A_mat = np.ascontiguousarray(A_mat)

    def b_of(y) -> np.ndarray:
        yv = float(np.atleast_1d(y)[0])
        return np.tile([yv, -yv], p)

    def F(x, y):
        return A_mat @ x - b_of(y)

    def affine(y):
        return A_mat, -b_of(y)

    region = make_region(lo=np.full(n, -config.box), hi=np.full(n, config.box))
    monotonicity = STRONGLY_MONOTONE if shift > 0 else MONOTONE
    game = ParametricGame(blocks=Blocks((1,) * n), F=F, region=region, m=1,
                          monotonicity=monotonicity, sigma=shift, affine=affine,
                          jacobian=lambda x, y: A_mat)

    phi = SelectionFunction(value=lambda x: 0.5 * float(x @ x),
                            grad=lambda x: np.asarray(x, dtype=float),
                            mu=1.0,
                            quadratic=(np.eye(n), np.zeros(n)))

    # sup ||grad_x J0|| = 2 ||x|| over the box
    L2 = 2.0 * config.box * np.sqrt(n)
    # induced objective is (y-1)^2 + c y^2 with c = 2 p / (2 + shift)^2
    c_ind = 2.0 * p / (2.0 + shift) ** 2
    j0 = LeaderObjective(value=lambda y, x: float((y[0] - 1.0) ** 2 + x @ x),
                         L2=L2, ell_tilde=2.0 + 2.0 * c_ind,
                         J0_star=float(c_ind / (1.0 + c_ind)))

    def x_beta(y: float, beta: float) -> np.ndarray:
        yv = float(np.atleast_1d(y)[0])
        return np.tile([yv / (2.0 + shift + beta), -yv / (2.0 + shift + beta)], p)

    def x_star_phi(y: float) -> np.ndarray:
        yv = float(np.atleast_1d(y)[0])
        if shift > 0:
            return np.tile([yv / (2.0 + shift), -yv / (2.0 + shift)], p)
        return np.tile([yv / 2.0, -yv / 2.0], p)

    def induced_objective(y: float) -> float:
        yv = float(np.atleast_1d(y)[0])
        x = x_star_phi(yv)
        return float((yv - 1.0) ** 2 + x @ x)

    def solution_residual(x: np.ndarray, y: float) -> float:
        """Distance of F(x; y) from zero: analytic VI residual for interior x."""
        return float(np.linalg.norm(A_mat @ np.asarray(x, dtype=float) - b_of(y)))

    problem = SeekProblem(game=game, phi=phi, j0=j0, m=1, y0=np.array([config.y0]))
    return TestbedScenario(problem=problem, config=config, x_beta=x_beta,
                           x_star_phi=x_star_phi, induced_objective=induced_objective,
                           solution_residual=solution_residual)

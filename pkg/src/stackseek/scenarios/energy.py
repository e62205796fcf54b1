"""Desk-scale peer-to-peer energy community.

One agent per bus.  Per hour h each agent i controls generation p_g, main
grid purchase p_mg, storage draw p_st (per-hour box, no intertemporal
state), bilateral trades p_tr with each partner, and its bus phase theta.
Agent cost per hour:

    c_g[i] * p_g                               (linear generation)
    (mg_slope * sum_j p_mg[j,h] + mg_price0) * p_mg[i,h]
                                               (aggregative grid purchase)
    sum_j  y[h] * p_tr[(i,j),h] + trade_quad * p_tr^2
                                               (priced trading, convex)

so the stacked pseudogradient is affine in x with PSD symmetric Jacobian:
monotone but far from strongly monotone (generation, storage and phases
carry no curvature), hence many equilibria for fixed prices.

Shared affine rows: nodal balance (trades and grid purchases inject at the
agent's own bus; the network carries the linearized DC flows B * dtheta),
trading reciprocity p_tr[(i,j)] + p_tr[(j,i)] = 0, and line flow limits.
Bus 0 is the slack: its phase is boxed to theta_ref.

The community manager prices each hour, y in R^H, minimizing
sum_i J_i + lam * ||y - y_ref||^2, and steers the selection with
phi(x) = sum_h ||p_g - gen_max||^2 + ||p_mg||^2 + ||theta - theta_ref||^2
       + ||p_tr||^2 + ||p_st||^2       (strongly convex, mu = 2).
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

import numpy as np

from ..errors import ConstructionFault
from ..model import (MONOTONE, Blocks, LeaderObjective, ParametricGame,
                     SelectionFunction, make_region)
from ..seeker import SeekProblem


@dataclass(frozen=True)
class EnergyConfig:
    nodes: int = 3
    hours: int = 2
    # (bus_i, bus_j, susceptance, flow_limit)
    lines: tuple[tuple[int, int, float, float], ...] = (
        (0, 1, 10.0, 4.0),
        (1, 2, 10.0, 4.0),
    )
    demand: tuple[tuple[float, ...], ...] = ((1.0, 1.5), (2.0, 2.5), (1.5, 1.0))
    gen_cost: tuple[float, ...] = (0.8, 2.0, 1.2)
    gen_max: tuple[float, ...] = (4.0, 1.0, 2.5)
    mg_price0: float = 1.5
    mg_slope: float = 0.25
    mg_max: float = 5.0
    storage_max: float = 0.5
    trade_max: float = 3.0
    trade_quad: float = 0.05
    partners: tuple[tuple[int, int], ...] = ((0, 1), (1, 2), (0, 2))
    theta_ref: float = 0.0
    theta_max: float = 0.6
    lam: float = 2.0
    y_ref: tuple[float, ...] = (1.0, 1.0)
    y0_offset: float = 1.0

    def validate(self):
        N, H = self.nodes, self.hours
        if len(self.demand) != N or any(len(d) != H for d in self.demand):
            raise ConstructionFault("demand must be nodes x hours")
        if len(self.gen_cost) != N or len(self.gen_max) != N:
            raise ConstructionFault("gen_cost/gen_max must have one entry per node")
        if len(self.y_ref) != H:
            raise ConstructionFault("y_ref must have one entry per hour")
        for (i, j, B, cap) in self.lines:
            if not (0 <= i < N and 0 <= j < N and i != j and B > 0 and cap > 0):
                raise ConstructionFault(f"bad line ({i},{j})")
        for (i, j) in self.partners:
            if not (0 <= i < N and 0 <= j < N and i != j):
                raise ConstructionFault(f"bad partner pair ({i},{j})")
        if len({tuple(sorted(p)) for p in self.partners}) != len(self.partners):
            raise ConstructionFault("duplicate partner pair")
        # connectivity of the electrical network
        seen = {0}
        frontier = [0]
        adj = {k: set() for k in range(N)}
        for (i, j, _, _) in self.lines:
            adj[i].add(j)
            adj[j].add(i)
        while frontier:
            u = frontier.pop()
            for w in adj[u]:
                if w not in seen:
                    seen.add(w)
                    frontier.append(w)
        if len(seen) != N:
            raise ConstructionFault("network is not connected")


@dataclass(frozen=True)
class EnergyScenario:
    problem: SeekProblem
    config: EnergyConfig
    index: "VarIndex"
    phi_reference: np.ndarray
    agent_costs: tuple[Callable, ...]


@dataclass(frozen=True)
class VarIndex:
    """Coordinate layout: agent-major, hour-major, kind order g/mg/st/tr.../theta."""

    nodes: int
    hours: int
    neighbors: tuple[tuple[int, ...], ...]
    block_sizes: tuple[int, ...]
    offsets: tuple[int, ...]

    @property
    def total(self) -> int:
        return sum(self.block_sizes)

    def _base(self, i: int, h: int) -> int:
        per_hour = 4 + len(self.neighbors[i])
        return self.offsets[i] + h * per_hour

    def g(self, i, h):
        return self._base(i, h)

    def mg(self, i, h):
        return self._base(i, h) + 1

    def st(self, i, h):
        return self._base(i, h) + 2

    def tr(self, i, j, h):
        return self._base(i, h) + 3 + self.neighbors[i].index(j)

    def theta(self, i, h):
        return self._base(i, h) + 3 + len(self.neighbors[i])


def build_energy_community(config: EnergyConfig | None = None) -> EnergyScenario:
    config = config or EnergyConfig()
    config.validate()
    N, H = config.nodes, config.hours

    nbr_sets: list[set[int]] = [set() for _ in range(N)]
    for (a, b) in config.partners:
        nbr_sets[a].add(b)
        nbr_sets[b].add(a)
    neighbors = tuple(tuple(sorted(s)) for s in nbr_sets)
    block_sizes = tuple(H * (4 + len(neighbors[i])) for i in range(N))
    offsets = tuple(int(v) for v in np.concatenate([[0], np.cumsum(block_sizes)[:-1]]))
    ix = VarIndex(N, H, neighbors, block_sizes, offsets)
    n = ix.total

    # boxes
    lo = np.full(n, -np.inf)
    hi = np.full(n, np.inf)
    for i in range(N):
        for h in range(H):
            lo[ix.g(i, h)], hi[ix.g(i, h)] = 0.0, config.gen_max[i]
            lo[ix.mg(i, h)], hi[ix.mg(i, h)] = 0.0, config.mg_max
            lo[ix.st(i, h)], hi[ix.st(i, h)] = -config.storage_max, config.storage_max
            for j in neighbors[i]:
                k = ix.tr(i, j, h)
                lo[k], hi[k] = -config.trade_max, config.trade_max
            k = ix.theta(i, h)
            if i == 0:  # slack bus pinned to the reference phase
                lo[k] = hi[k] = config.theta_ref
            else:
                lo[k] = config.theta_ref - config.theta_max
                hi[k] = config.theta_ref + config.theta_max

    # equality rows: nodal balance and trading reciprocity
    eq_rows, eq_rhs, eq_labels = [], [], []
    for i in range(N):
        for h in range(H):
            row = np.zeros(n)
            row[ix.g(i, h)] = 1.0
            row[ix.mg(i, h)] = 1.0
            row[ix.st(i, h)] = 1.0
            for j in neighbors[i]:
                row[ix.tr(i, j, h)] = 1.0
            for (a, b, B, _) in config.lines:
                if a == i:
                    row[ix.theta(a, h)] -= B
                    row[ix.theta(b, h)] += B
                elif b == i:
                    row[ix.theta(b, h)] -= B
                    row[ix.theta(a, h)] += B
            eq_rows.append(row)
            eq_rhs.append(config.demand[i][h])
            eq_labels.append(f"balance[node={i},hour={h}]")
    for (a, b) in config.partners:
        for h in range(H):
            row = np.zeros(n)
            row[ix.tr(a, b, h)] = 1.0
            row[ix.tr(b, a, h)] = 1.0
            eq_rows.append(row)
            eq_rhs.append(0.0)
            eq_labels.append(f"reciprocity[{a}-{b},hour={h}]")

    # inequality rows: line flow limits |B (theta_a - theta_b)| <= cap
    in_rows, in_rhs, in_labels = [], [], []
    for li, (a, b, B, cap) in enumerate(config.lines):
        for h in range(H):
            row = np.zeros(n)
            row[ix.theta(a, h)] = B
            row[ix.theta(b, h)] = -B
            in_rows.append(row.copy())
            in_rhs.append(cap)
            in_labels.append(f"flow[{a}-{b},hour={h}]<=cap")
            in_rows.append(-row)
            in_rhs.append(cap)
            in_labels.append(f"flow[{b}-{a},hour={h}]<=cap")

    region = make_region(lo, hi, A=np.array(in_rows), b=np.array(in_rhs),
                         equalities=(np.array(eq_rows), np.array(eq_rhs)),
                         row_labels=in_labels, equality_labels=eq_labels)

    # affine pseudogradient: Q x + c(y)
    Q = np.zeros((n, n))
    for h in range(H):
        mg_idx = [ix.mg(i, h) for i in range(N)]
        for a_i in mg_idx:
            for b_i in mg_idx:
                Q[a_i, b_i] += config.mg_slope * (2.0 if a_i == b_i else 1.0)
        for i in range(N):
            for j in neighbors[i]:
                k = ix.tr(i, j, h)
                Q[k, k] += 2.0 * config.trade_quad
    Q = np.ascontiguousarray(Q)

    base_c = np.zeros(n)
    for i in range(N):
        for h in range(H):
            base_c[ix.g(i, h)] = config.gen_cost[i]
            base_c[ix.mg(i, h)] = config.mg_price0

    def c_of(y) -> np.ndarray:
        y = np.atleast_1d(np.asarray(y, dtype=float))
        c = base_c.copy()
        for i in range(N):
            for h in range(H):
                for j in neighbors[i]:
                    c[ix.tr(i, j, h)] = y[h]
        return c

    def F(x, y):
        return Q @ x + c_of(y)

    def affine(y):
        return Q, c_of(y)

    def agent_cost(i):
        def cost(x, y):
            y = np.atleast_1d(np.asarray(y, dtype=float))
            total = 0.0
            for h in range(H):
                sigma_h = sum(x[ix.mg(j, h)] for j in range(N))
                total += config.gen_cost[i] * x[ix.g(i, h)]
                total += (config.mg_slope * sigma_h + config.mg_price0) * x[ix.mg(i, h)]
                for j in neighbors[i]:
                    tr = x[ix.tr(i, j, h)]
                    total += y[h] * tr + config.trade_quad * tr * tr
            return float(total)

        return cost

    agent_costs = tuple(agent_cost(i) for i in range(N))

    game = ParametricGame(blocks=Blocks(block_sizes), F=F, region=region, m=H,
                          monotonicity=MONOTONE, affine=affine,
                          jacobian=lambda x, y: Q, cost_values=agent_costs)

    # phi reference: full generation, no grid draw, flat phases, no trades/storage
    ref = np.zeros(n)
    for i in range(N):
        for h in range(H):
            ref[ix.g(i, h)] = config.gen_max[i]
            ref[ix.theta(i, h)] = config.theta_ref
    ref.setflags(write=False)

    phi = SelectionFunction(
        value=lambda x: float(np.sum((x - ref) ** 2)),
        grad=lambda x: 2.0 * (np.asarray(x, dtype=float) - ref),
        mu=2.0,
        quadratic=(2.0 * np.eye(n), -2.0 * ref))

    y_ref = np.asarray(config.y_ref, dtype=float)

    def j0_value(y, x):
        y = np.atleast_1d(np.asarray(y, dtype=float))
        total = sum(cost(x, y) for cost in agent_costs)
        return float(total + config.lam * np.sum((y - y_ref) ** 2))

    j0 = LeaderObjective(value=j0_value, lam=config.lam, y_ref=y_ref)

    problem = SeekProblem(game=game, phi=phi, j0=j0, m=H,
                          y0=y_ref + config.y0_offset)
    return EnergyScenario(problem=problem, config=config, index=ix,
                          phi_reference=ref, agent_costs=agent_costs)

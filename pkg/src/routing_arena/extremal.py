"""Integer-programming search for optimal and extreme Nash-routings.

Used when the profile space is too large to scan. Each edge's congestion is
encoded by one-hot level binaries, which turns every additive cost model into
linear expressions in the level variables; the Nash condition becomes one
big-M row per (player, current strategy, alternative). Solutions are always
re-checked with exact integer arithmetic before they are returned.
"""

from __future__ import annotations

import numpy as np
from scipy.optimize import Bounds, LinearConstraint, milp
from scipy.sparse import lil_matrix

from .errors import ArenaError, InstanceTooLargeError
from .game import CostModel, GameInstance, _counts

# keeps every coefficient an exactly representable double with room for HiGHS tolerances
MAX_COEFFICIENT = 2**40


class _Model:
    def __init__(self, game: GameInstance, model: CostModel | None):
        self.game = game
        self.model = model
        self.ncols = 0
        self.x = []  # x[i][j] column index
        for sizes in game.strategy_sizes:
            self.x.append(list(range(self.ncols, self.ncols + sizes)))
            self.ncols += sizes
        users = [set() for _ in range(game.n_edges)]
        self.incidence = [[] for _ in range(game.n_edges)]
        for i, options in enumerate(game.strategy_edges):
            for j, path in enumerate(options):
                for e in path:
                    users[e].add(i)
                    self.incidence[e].append(self.x[i][j])
        self.cap = [len(u) for u in users]
        self.rows = []  # (coeffs dict, lo, hi)
        self.integer = [1] * self.ncols
        for cols in self.x:
            self.rows.append(({c: 1 for c in cols}, 1, 1))
        self.levels = {}

    def add_col(self, integer=1):
        self.integer.append(integer)
        self.ncols += 1
        return self.ncols - 1

    def load(self, e):
        return {c: 1 for c in self.incidence[e]}

    def cost_expr(self, e, shift):
        """Linear expression (dict, constant) for ``g(C_e + shift)``."""
        g = self.model.edge_cost
        top = self.cap[e]
        if top <= 1:
            base = g(shift)
            slope = g(1 + shift) - base
            return {c: slope for c in self.incidence[e]}, base
        if e not in self.levels:
            z = [self.add_col() for _ in range(top + 1)]
            self.rows.append(({c: 1 for c in z}, 1, 1))
            row = {zc: lvl for lvl, zc in enumerate(z) if lvl}
            for c in self.incidence[e]:
                row[c] = row.get(c, 0) - 1
            self.rows.append((row, 0, 0))
            self.levels[e] = z
        z = self.levels[e]
        return {zc: g(lvl + shift) for lvl, zc in enumerate(z)}, 0

    def add_nash_rows(self):
        g = self.model.edge_cost
        for i, options in enumerate(self.game.strategy_edges):
            for j, cur in enumerate(options):
                cur_set = set(cur)
                for k, alt in enumerate(options):
                    if k == j:
                        continue
                    alt_set = set(alt)
                    row, const = {}, 0
                    # cost of staying minus cost of deviating; shared edges cancel
                    for e in cur_set - alt_set:
                        expr, c0 = self.cost_expr(e, 0)
                        const += c0
                        for col, v in expr.items():
                            row[col] = row.get(col, 0) + v
                    for e in alt_set - cur_set:
                        expr, c0 = self.cost_expr(e, 1)
                        const -= c0
                        for col, v in expr.items():
                            row[col] = row.get(col, 0) - v
                    big_m = sum(g(self.cap[e]) for e in cur_set - alt_set) \
                        - sum(g(1) for e in alt_set - cur_set)
                    if big_m <= 0:
                        continue
                    # row + const <= big_m * (1 - x_ij)
                    xc = self.x[i][j]
                    row[xc] = row.get(xc, 0) + big_m
                    self.rows.append((row, -np.inf, big_m - const))

    def solve(self, objective):
        a = lil_matrix((len(self.rows), self.ncols))
        lo = np.empty(len(self.rows))
        hi = np.empty(len(self.rows))
        for r, (coeffs, l, h) in enumerate(self.rows):
            for c, v in coeffs.items():
                if abs(v) > MAX_COEFFICIENT:
                    raise InstanceTooLargeError("cost coefficients too large for the integer-programming search")
                a[r, c] = v
            lo[r], hi[r] = l, h
        cvec = np.zeros(self.ncols)
        for c, v in objective.items():
            cvec[c] = v
        ub = np.ones(self.ncols)
        ub[self.t] = max(self.cap)
        res = milp(cvec, constraints=LinearConstraint(a.tocsr(), lo, hi),
                   integrality=np.array(self.integer), bounds=Bounds(np.zeros(self.ncols), ub),
                   options={"mip_rel_gap": 0, "presolve": True})
        if res.status == 2:
            return None
        if res.status != 0:
            raise ArenaError(f"integer program failed: {res.message}")
        routing = []
        for cols in self.x:
            vals = res.x[cols]
            routing.append(int(np.argmax(vals)))
        return tuple(routing)

    def add_objective_var(self):
        # integer so the optimum is a congestion value, not a fractional relaxation artefact
        self.t = self.add_col(integer=1)
        return self.t


def _check_model(model: CostModel):
    if not model.is_additive:
        raise InstanceTooLargeError(
            f"the integer-programming search supports additive cost models only, not {model}")


def milp_optimal_social_cost(game: GameInstance):
    """``(C*, routing)`` by minimising the largest edge load."""
    m = _Model(game, None)
    t = m.add_objective_var()
    for e in range(game.n_edges):
        if m.cap[e]:
            row = m.load(e)
            row[t] = -1
            m.rows.append((row, -np.inf, 0))
    r = m.solve({t: 1})
    return _verified(game, r), r


def milp_extremal_nash(game: GameInstance, model, sense: str = "max"):
    """``(routing, social_cost)`` of a Nash-routing with the largest (``max``) or smallest
    (``min``) network congestion, or None if no Nash-routing exists."""
    model = CostModel.parse(model)
    _check_model(model)
    m = _Model(game, model)
    m.add_nash_rows()
    t = m.add_objective_var()
    top = max(m.cap)
    if sense == "min":
        for e in range(game.n_edges):
            if m.cap[e]:
                row = m.load(e)
                row[t] = -1
                m.rows.append((row, -np.inf, 0))
        objective = {t: 1}
    elif sense == "max":
        pick = {}
        for e in range(game.n_edges):
            if m.cap[e]:
                y = m.add_col()
                pick[e] = y
                # t <= load_e + top * (1 - y_e)
                row = m.load(e)
                row = {c: -v for c, v in row.items()}
                row[t] = 1
                row[y] = top
                m.rows.append((row, -np.inf, top))
        m.rows.append(({y: 1 for y in pick.values()}, 1, 1))
        objective = {t: -1}
    else:
        raise ValueError(f"sense must be 'max' or 'min', not {sense!r}")
    r = m.solve(objective)
    if r is None:
        return None
    from .dynamics import is_nash

    if not is_nash(game, r, model):
        raise ArenaError("integer program returned a routing that is not a Nash-routing")
    return r, _verified(game, r)


def _verified(game: GameInstance, r) -> int:
    if r is None:
        raise ArenaError("integer program found no routing")
    return max(_counts(game, r))

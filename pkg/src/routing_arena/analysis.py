"""Exact equilibrium analysis by scanning the strategy-profile space.

Profiles are visited in lexicographic order of the choice tuple, so every list
and every witness produced here is reproducible byte for byte.
"""

from __future__ import annotations

import math
import os
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from .errors import InstanceTooLargeError, NoEquilibriumError, ValidationError
from .game import EXPONENTIAL, CostModel, GameInstance

DEFAULT_PROFILE_CAP = 10**7
CAP_ENV = "ARENA_CAP"


def resolve_cap(cap: int | None = None) -> int:
    """Explicit ``cap`` wins, then the ARENA_CAP environment variable, then the default."""
    if cap is not None:
        return int(cap)
    env = os.environ.get(CAP_ENV)
    if env:
        try:
            return int(env)
        except ValueError:
            raise ValidationError(f"{CAP_ENV} must be an integer, got {env!r}") from None
    return DEFAULT_PROFILE_CAP


def _require_within_cap(game: GameInstance, cap: int | None) -> None:
    cap = resolve_cap(cap)
    if game.profile_count > cap:
        raise InstanceTooLargeError(
            f"{game.profile_count} strategy profiles exceed the cap of {cap}")


CHUNK = 1 << 15


def _chunks(game: GameInstance):
    """Yield ``(choices, counts)`` arrays for consecutive blocks of profiles in lexicographic order."""
    sizes = np.array(game.strategy_sizes, dtype=np.int64)
    strides = np.ones(len(sizes), dtype=np.int64)
    for i in range(len(sizes) - 2, -1, -1):
        strides[i] = strides[i + 1] * sizes[i + 1]
    incidence = []
    for options in game.strategy_edges:
        inc = np.zeros((len(options), game.n_edges), dtype=np.int64)
        for j, path in enumerate(options):
            inc[j, list(path)] = 1
        incidence.append(inc)
    total = game.profile_count
    for lo in range(0, total, CHUNK):
        idx = np.arange(lo, min(lo + CHUNK, total), dtype=np.int64)
        choices = (idx[:, None] // strides[None, :]) % sizes[None, :]
        counts = np.zeros((len(idx), game.n_edges), dtype=np.int64)
        for i, inc in enumerate(incidence):
            counts += inc[choices[:, i]]
        yield choices, counts, incidence


def _edge_costs(model: CostModel, loads):
    if model.kind == "exp":
        return np.left_shift(np.int64(1), loads)
    if model.kind == "poly":
        return loads ** model.degree
    return loads


def _check_range(game: GameInstance, model: CostModel):
    # largest value any path cost can take must fit in int64
    top = game.n_players + 1
    biggest = game.L * (model.edge_cost(top) if model.kind != "max" else top)
    if biggest >= 2**62:
        raise InstanceTooLargeError("costs exceed the 64-bit range of the vectorised scan")


def _stable_mask(game: GameInstance, model: CostModel, choices, counts, incidence):
    """Boolean mask of profiles in which no player has a strictly better strategy.

    Removing a player's path and re-adding any strategy puts every edge of that
    strategy at (load without the player) + 1; the current strategy is priced
    the same way, so one matrix product gives current and alternative costs.
    """
    stable = np.ones(len(choices), dtype=bool)
    rows = np.arange(len(choices))
    for i, inc in enumerate(incidence):
        without = counts - inc[choices[:, i]]
        edge = _edge_costs(model, without + 1)
        if model.kind == "max":
            costs = np.where(inc[None, :, :] > 0, edge[:, None, :], 0).max(axis=2)
        else:
            costs = edge @ inc.T
        stable &= costs[rows, choices[:, i]] <= costs.min(axis=1)
    return stable


def optimal_social_cost(game: GameInstance, cap: int | None = None, prune: bool = True):
    """Minimum network congestion ``C*`` and the lexicographically smallest routing attaining it.

    ``prune=False`` runs the plain exhaustive scan; ``prune=True`` runs a
    depth-first branch and bound that cuts any partial routing whose congestion
    already reaches the best value found. Both return the same pair.
    """
    _require_within_cap(game, cap)
    if not prune:
        best, witness = None, None
        for choices, counts, _ in _chunks(game):
            sc = counts.max(axis=1)
            k = int(np.argmin(sc))
            if best is None or sc[k] < best:
                best, witness = int(sc[k]), tuple(int(c) for c in choices[k])
        return best, witness
    return _branch_and_bound(game)


def congestion_lower_bound(game: GameInstance) -> int:
    """Edges lying on every strategy of a player are forced; one path alone already gives 1."""
    forced = [0] * game.n_edges
    for options in game.strategy_edges:
        common = set(options[0]).intersection(*map(set, options[1:]))
        for e in common:
            forced[e] += 1
    return max(1, max(forced))


def _branch_and_bound(game: GameInstance):
    n = game.n_players
    options = game.strategy_edges
    counts = [0] * game.n_edges
    floor = congestion_lower_bound(game)
    best = [game.n_players + 1, None]
    choice = [0] * n

    def descend(i, partial_max):
        if i == n:
            if partial_max < best[0]:
                best[0], best[1] = partial_max, tuple(choice)
            return best[0] == floor
        for j, path in enumerate(options[i]):
            new_max = partial_max
            for e in path:
                counts[e] += 1
                if counts[e] > new_max:
                    new_max = counts[e]
            if new_max < best[0]:
                choice[i] = j
                done = descend(i + 1, new_max)
            else:
                done = False
            for e in path:
                counts[e] -= 1
            if done:
                return True
        return False

    descend(0, 0)
    return best[0], best[1]


def enumerate_nash(game: GameInstance, model=EXPONENTIAL, cap: int | None = None):
    """Every pure Nash-routing as ``(routing, social_cost)``, in lexicographic order."""
    _require_within_cap(game, cap)
    model = CostModel.parse(model)
    _check_range(game, model)
    out = []
    for choices, counts, incidence in _chunks(game):
        mask = _stable_mask(game, model, choices, counts, incidence)
        sc = counts.max(axis=1)
        out += [(tuple(int(c) for c in choices[k]), int(sc[k])) for k in np.flatnonzero(mask)]
    return out


@dataclass
class AnalysisReport:
    model: str
    optimal_sc: int
    optimal_routing: tuple[int, ...]
    nash_routings: list[tuple[tuple[int, ...], int]]
    poa: Fraction
    pos: Fraction
    profile_count: int
    exhaustive: bool = True
    bound: dict = field(default_factory=dict)

    @property
    def worst_nash(self):
        return max(self.nash_routings, key=lambda rs: (rs[1], [-c for c in rs[0]]))

    @property
    def best_nash(self):
        return min(self.nash_routings, key=lambda rs: (rs[1], rs[0]))


def _ratios(nash, opt):
    if not nash:
        raise NoEquilibriumError("the game has no pure Nash-routing under this cost model")
    costs = [sc for _, sc in nash]
    return Fraction(max(costs), opt), Fraction(min(costs), opt)


def _use_search(game: GameInstance, cap: int | None, method: str) -> bool:
    if method not in ("auto", "exhaustive", "milp"):
        raise ValidationError(f"unknown analysis method {method!r}")
    if method == "auto":
        return game.profile_count > resolve_cap(cap)
    return method == "milp"


def analyze(game: GameInstance, model=EXPONENTIAL, cap: int | None = None, method: str = "auto",
            alpha=None) -> AnalysisReport:
    """Optimum, Nash-routings, PoA and PoS of ``game`` under ``model``.

    ``method='exhaustive'`` scans every profile and lists every Nash-routing;
    it refuses games above the profile cap. ``method='milp'`` solves for the
    optimum and the two extreme Nash-routings with an integer program and
    lists only those witnesses. ``auto`` picks exhaustive whenever it fits.
    With ``alpha`` set, the log-product bound check is attached to the report.
    """
    model = CostModel.parse(model)
    if _use_search(game, cap, method):
        from .extremal import milp_extremal_nash, milp_optimal_social_cost

        opt, opt_r = milp_optimal_social_cost(game)
        worst = milp_extremal_nash(game, model, "max")
        if worst is None:
            raise NoEquilibriumError("the game has no pure Nash-routing under this cost model")
        best = milp_extremal_nash(game, model, "min")
        nash = sorted({worst, best})
        exhaustive = False
    else:
        opt, opt_r = optimal_social_cost(game, cap)
        nash = enumerate_nash(game, model, cap)
        exhaustive = True
    poa, pos = _ratios(nash, opt)
    report = AnalysisReport(str(model), opt, opt_r, nash, poa, pos, game.profile_count, exhaustive)
    if alpha is not None:
        ok, margin = poa_bound_check(game, report, alpha)
        report.bound = {"alpha": str(Fraction(alpha)), "holds": ok, "margin": margin,
                        "value": float(Fraction(alpha)) * _log_factor(game)}
    return report


def price_of_anarchy(game: GameInstance, model=EXPONENTIAL, cap: int | None = None,
                     method: str = "auto") -> Fraction:
    """Worst Nash social cost over ``C*``; raises NoEquilibriumError when no Nash-routing exists."""
    return analyze(game, model, cap, method).poa


def price_of_stability(game: GameInstance, model=EXPONENTIAL, cap: int | None = None,
                       method: str = "auto") -> Fraction:
    return analyze(game, model, cap, method).pos


def _log_factor(game: GameInstance) -> float:
    return (1 + math.log2(game.L)) * (1 + math.log2(game.n_edges))


def poa_bound_check(game: GameInstance, report: AnalysisReport, alpha) -> tuple[bool, float]:
    """Compare PoA with ``alpha * (1 + log2 L) * (1 + log2 |E|)``.

    Returns ``(holds, margin)`` with ``margin = bound - PoA``. The bound is only
    asymptotic, so callers report a violation rather than fail on it.
    """
    alpha = Fraction(alpha)
    bound = float(alpha) * _log_factor(game)
    margin = bound - float(report.poa)
    return margin >= 0, margin

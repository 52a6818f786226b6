"""Greedy moves, best-response dynamics and Nash checks.

A candidate path is priced after removing the mover's current path and adding
the candidate, so edges shared by both paths keep their congestion and new
edges gain one. Moves happen only on strict improvement.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field

from .errors import MalformedPairError, NonConvergenceError, ValidationError
from .game import (EXPONENTIAL, CostModel, GameInstance, _counts, check_player, check_routing,
                   exp_edge_set_cost)


@dataclass(frozen=True)
class Schedule:
    """Order in which players are offered a move.

    ``rr``      round-robin by player index, resuming after the last mover
    ``gain``    the move with the largest potential drop goes first, so the
                lowest-gain move is always last (ties by player index)
    ``random``  a fresh seeded shuffle of the players before every move
    """

    kind: str = "rr"
    seed: int = 0

    def __post_init__(self):
        if self.kind not in ("rr", "gain", "random"):
            raise ValidationError(f"unknown schedule {self.kind!r}")

    @classmethod
    def parse(cls, text) -> Schedule:
        if isinstance(text, Schedule):
            return text
        name, _, arg = str(text).strip().lower().partition(":")
        name = {"round-robin": "rr", "roundrobin": "rr",
                "lowest-potential-gain-last": "gain"}.get(name, name)
        if name == "random":
            try:
                return cls("random", int(arg) if arg else 0)
            except ValueError:
                raise ValidationError(f"random schedule needs an integer seed, got {text!r}") from None
        if arg:
            raise ValidationError(f"schedule {name!r} takes no parameter")
        return cls(name)

    def __str__(self):
        return f"random:{self.seed}" if self.kind == "random" else self.kind


@dataclass(frozen=True)
class MoveRecord:
    player: int
    from_choice: int
    to_choice: int
    pc_before: int
    pc_after: int
    potential_before: int
    potential_after: int


@dataclass
class DynamicsTrace:
    initial: tuple[int, ...]
    moves: list[MoveRecord] = field(default_factory=list)
    final: tuple[int, ...] = ()
    converged: bool = False

    @property
    def steps(self) -> int:
        return len(self.moves)

    def replay(self) -> tuple[int, ...]:
        """Apply the recorded moves to ``initial`` and return the resulting routing."""
        r = list(self.initial)
        for m in self.moves:
            if r[m.player] != m.from_choice:
                raise ValueError(f"move by player {m.player} starts from {m.from_choice}, routing has {r[m.player]}")
            r[m.player] = m.to_choice
        return tuple(r)


def _deviation_cost(model: CostModel, counts, current: tuple[int, ...], candidate: tuple[int, ...]) -> int:
    cur = set(current)
    if model.kind == "max":
        return max(counts[e] + (e not in cur) for e in candidate)
    return sum(model.edge_cost(counts[e] + (e not in cur)) for e in candidate)


def _best_response(game: GameInstance, counts, r, i: int, model: CostModel):
    """(best strictly-improving index or None, current cost, best cost)."""
    options = game.strategy_edges[i]
    current = options[r[i]]
    cost_now = model.path_cost(counts, current)
    best, best_cost = None, cost_now
    for j, cand in enumerate(options):
        if j == r[i]:
            continue
        c = _deviation_cost(model, counts, current, cand)
        if c < best_cost:
            best, best_cost = j, c
    return best, cost_now, best_cost


def best_response(game: GameInstance, r, i: int, model=EXPONENTIAL) -> int | None:
    """Lowest-index cheapest strategy strictly better than player ``i``'s current one, if any."""
    r = check_routing(game, r)
    check_player(game, i)
    return _best_response(game, _counts(game, r), r, i, CostModel.parse(model))[0]


def is_nash(game: GameInstance, r, model=EXPONENTIAL) -> bool:
    r = check_routing(game, r)
    model = CostModel.parse(model)
    counts = _counts(game, r)
    return all(_best_response(game, counts, r, i, model)[0] is None for i in range(game.n_players))


def _apply(game: GameInstance, counts, r, i: int, j: int) -> int:
    """Move player ``i`` to strategy ``j`` in place; return the change in potential."""
    old, new = set(game.strategy_edges[i][r[i]]), set(game.strategy_edges[i][j])
    delta = 0
    for e in old - new:
        delta -= 1 << (counts[e] - 1)
        counts[e] -= 1
    for e in new - old:
        delta += 1 << counts[e]
        counts[e] += 1
    r[i] = j
    return delta


def _step(game, counts, r, model, schedule, start, rng, pot):
    n = game.n_players
    if schedule.kind == "gain":
        best = None
        for i in range(n):
            j, before, after = _best_response(game, counts, r, i, model)
            if j is None:
                continue
            trial = list(counts)
            drop = -_apply(game, trial, list(r), i, j)
            if best is None or drop > best[0]:
                best = (drop, i, j, before, after)
        if best is None:
            return None
        _, i, j, before, after = best
    else:
        order = rng.sample(range(n), n) if schedule.kind == "random" else \
            [(start + k) % n for k in range(n)]
        for i in order:
            j, before, after = _best_response(game, counts, r, i, model)
            if j is not None:
                break
        else:
            return None
    frm = r[i]
    new_pot = pot + _apply(game, counts, r, i, j)
    return MoveRecord(i, frm, j, before, after, pot, new_pot)


def greedy_step(game: GameInstance, r, model=EXPONENTIAL, schedule="rr", *, start: int = 0,
                rng: random.Random | None = None):
    """Apply one greedy move, or return None if ``r`` is a Nash-routing.

    ``start`` is the first player tried by the round-robin schedule. The random
    schedule draws from ``rng`` (seeded from the schedule when omitted).
    Returns ``(new_routing, MoveRecord)``.
    """
    r = list(check_routing(game, r))
    model = CostModel.parse(model)
    schedule = Schedule.parse(schedule)
    if rng is None:
        rng = random.Random(schedule.seed)
    counts = _counts(game, r)
    pot = sum(1 << c for c in counts)
    move = _step(game, counts, r, model, schedule, start % game.n_players, rng, pot)
    if move is None:
        return None
    return tuple(r), move


def default_max_steps(game: GameInstance, initial, model=EXPONENTIAL) -> int:
    """Tight step bound for the exponential model; ``10*N*L`` for the others."""
    model = CostModel.parse(model)
    if model.kind == "exp":
        counts = _counts(game, check_routing(game, initial))
        return max(1, sum(1 << c for c in counts) - game.n_edges)
    return 10 * game.n_players * game.L


def run_best_response(game: GameInstance, initial, model=EXPONENTIAL, schedule="rr",
                      max_steps: int | None = None) -> DynamicsTrace:
    """Iterate greedy moves until none exists or ``max_steps`` moves were made.

    Raises NonConvergenceError when the budget runs out under a non-exponential
    model; the partial trace is attached to the exception.
    """
    initial = check_routing(game, initial)
    model = CostModel.parse(model)
    schedule = Schedule.parse(schedule)
    if max_steps is None:
        max_steps = default_max_steps(game, initial, model)
    if max_steps < 1:
        raise ValidationError("max_steps must be at least 1")
    rng = random.Random(schedule.seed)
    r = list(initial)
    counts = _counts(game, r)
    pot = sum(1 << c for c in counts)
    trace = DynamicsTrace(initial=initial)
    start = 0
    while True:
        if len(trace.moves) >= max_steps:
            # one last look: the budget may run out exactly at an equilibrium
            converged = all(_best_response(game, counts, r, i, model)[0] is None
                            for i in range(game.n_players))
            break
        move = _step(game, counts, r, model, schedule, start, rng, pot)
        if move is None:
            converged = True
            break
        trace.moves.append(move)
        pot = move.potential_after
        start = (move.player + 1) % game.n_players
    trace.final = tuple(r)
    trace.converged = converged
    if not converged and model.kind != "exp":
        raise NonConvergenceError(
            f"no equilibrium reached within {max_steps} moves under the {model} model", trace)
    return trace


def verify_lemma1_identity(game: GameInstance, r_before, r_after, i: int) -> bool:
    """Check the exact potential-drop identity for a unilateral move by player ``i``.

    With ``A`` the edges the mover leaves and ``B`` the edges it joins, the
    potential drops by exactly ``sum_A 2**C_e - (sum_B 2**C_e) / 2``, both sums
    taken after the move. Every edge of ``B`` carries the mover afterwards, so
    the ``B`` sum is even.
    """
    r_before = check_routing(game, r_before)
    r_after = check_routing(game, r_after)
    check_player(game, i)
    others = [k for k, (a, b) in enumerate(zip(r_before, r_after)) if a != b and k != i]
    if others:
        raise MalformedPairError(f"routings also differ for players {others}")
    old = set(game.strategy_edges[i][r_before[i]])
    new = set(game.strategy_edges[i][r_after[i]])
    before = _counts(game, r_before)
    after = _counts(game, r_after)
    drop = sum(1 << c for c in before) - sum(1 << c for c in after)
    left = exp_edge_set_cost(after, old - new)
    joined = exp_edge_set_cost(after, new - old)
    if joined % 2:
        return False
    return drop == left - joined // 2

"""Routing games: players, strategy profiles, congestion and cost formulas.

All costs and potentials are Python integers, so exponential edge costs
``2**C_e`` never overflow or round.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property

from .errors import InvalidPlayerError, InvalidRoutingError, ValidationError
from .graph import Graph, Path, validate_path

MAX_POLY_DEGREE = 8

Routing = tuple  # one strategy index per player


@dataclass(frozen=True)
class CostModel:
    """How a player prices its path from per-edge congestion.

    ``kind`` is one of ``exp``, ``max``, ``linear`` or ``poly`` (with ``degree``).
    """

    kind: str = "exp"
    degree: int = 1

    KINDS = ("exp", "max", "linear", "poly")

    def __post_init__(self):
        if self.kind not in self.KINDS:
            raise ValidationError(f"unknown cost model {self.kind!r}")
        if self.kind == "poly":
            if not 1 <= self.degree <= MAX_POLY_DEGREE:
                raise ValidationError(f"polynomial degree must be in 1..{MAX_POLY_DEGREE}, got {self.degree}")
        elif self.degree != 1:
            raise ValidationError(f"degree only applies to the poly model, not {self.kind!r}")

    @classmethod
    def parse(cls, text: str | CostModel) -> CostModel:
        """Parse ``exp``, ``max``, ``linear`` or ``poly:d``."""
        if isinstance(text, CostModel):
            return text
        aliases = {"exponential": "exp", "bottleneck": "max", "bottleneckmax": "max",
                   "linearsum": "linear", "sum": "linear"}
        name, _, deg = str(text).strip().lower().partition(":")
        name = aliases.get(name, name)
        if name == "poly":
            try:
                return cls("poly", int(deg))
            except ValueError:
                raise ValidationError(f"poly model needs an integer degree, got {text!r}") from None
        if deg:
            raise ValidationError(f"unexpected parameter in cost model {text!r}")
        return cls(name)

    def __str__(self):
        return f"poly:{self.degree}" if self.kind == "poly" else self.kind

    @property
    def is_additive(self) -> bool:
        return self.kind != "max"

    def edge_cost(self, c: int) -> int:
        if self.kind == "exp":
            return 1 << c
        if self.kind == "poly":
            return c**self.degree
        return c

    def path_cost(self, counts, edges) -> int:
        if self.kind == "max":
            return max(counts[e] for e in edges)
        if self.kind == "exp":
            return sum(1 << counts[e] for e in edges)
        if self.kind == "linear":
            return sum(counts[e] for e in edges)
        d = self.degree
        return sum(counts[e] ** d for e in edges)


EXPONENTIAL = CostModel("exp")


@dataclass(frozen=True)
class Player:
    source: int
    destination: int
    strategies: tuple[Path, ...]

    def __post_init__(self):
        object.__setattr__(self, "strategies", tuple(self.strategies))


@dataclass(frozen=True)
class GameInstance:
    graph: Graph
    players: tuple[Player, ...]
    name: str = ""

    def __post_init__(self):
        object.__setattr__(self, "players", tuple(self.players))
        if not self.players:
            raise ValidationError("a game needs at least one player")
        if self.graph.edge_count < 1:
            raise ValidationError("a game needs at least one edge")
        for i, pl in enumerate(self.players):
            if pl.source == pl.destination:
                raise ValidationError(f"player {i} has identical source and destination {pl.source}")
            if not pl.strategies:
                raise ValidationError(f"player {i} has an empty strategy set")
            seen = set()
            for j, p in enumerate(pl.strategies):
                if (p.source, p.destination) != (pl.source, pl.destination):
                    raise ValidationError(f"player {i} strategy {j} runs {p.source}->{p.destination}, "
                                          f"expected {pl.source}->{pl.destination}")
                if not validate_path(self.graph, p):
                    raise ValidationError(f"player {i} strategy {j} {list(p.edges)} is not a simple path")
                if p.edges in seen:
                    raise ValidationError(f"player {i} strategy {j} duplicates an earlier strategy")
                seen.add(p.edges)

    @property
    def n_players(self) -> int:
        return len(self.players)

    @property
    def n_edges(self) -> int:
        return self.graph.edge_count

    @cached_property
    def L(self) -> int:
        """Longest path over all strategy sets."""
        return max(len(p) for pl in self.players for p in pl.strategies)

    @cached_property
    def strategy_edges(self) -> tuple[tuple[tuple[int, ...], ...], ...]:
        """``strategy_edges[i][j]`` is the edge-id tuple of player i's strategy j."""
        return tuple(tuple(p.edges for p in pl.strategies) for pl in self.players)

    @cached_property
    def strategy_sizes(self) -> tuple[int, ...]:
        return tuple(len(pl.strategies) for pl in self.players)

    @property
    def profile_count(self) -> int:
        total = 1
        for k in self.strategy_sizes:
            total *= k
        return total


def check_routing(game: GameInstance, r) -> tuple[int, ...]:
    """Return ``r`` as a tuple of ints, raising InvalidRoutingError if it does not fit ``game``."""
    try:
        r = tuple(int(c) for c in r)
    except (TypeError, ValueError):
        raise InvalidRoutingError(f"routing {r!r} is not a sequence of integers") from None
    if len(r) != game.n_players:
        raise InvalidRoutingError(f"routing has {len(r)} choices for {game.n_players} players")
    for i, (c, k) in enumerate(zip(r, game.strategy_sizes)):
        if not 0 <= c < k:
            raise InvalidRoutingError(f"player {i} choice {c} outside 0..{k - 1}")
    return r


def check_player(game: GameInstance, i) -> int:
    if not (isinstance(i, int) and 0 <= i < game.n_players):
        raise InvalidPlayerError(f"player index {i!r} outside 0..{game.n_players - 1}")
    return i


def _counts(game: GameInstance, r) -> list[int]:
    counts = [0] * game.n_edges
    for edges_i, c in zip(game.strategy_edges, r):
        for e in edges_i[c]:
            counts[e] += 1
    return counts


def congestion(game: GameInstance, r) -> tuple[int, ...]:
    """Per-edge number of chosen paths crossing each edge."""
    return tuple(_counts(game, check_routing(game, r)))


def chosen_path(game: GameInstance, r, i: int) -> Path:
    return game.players[i].strategies[r[i]]


def player_cost(game: GameInstance, r, i: int, model=EXPONENTIAL) -> int:
    """Cost of player ``i`` in routing ``r``, its own path included."""
    r = check_routing(game, r)
    check_player(game, i)
    model = CostModel.parse(model)
    return model.path_cost(_counts(game, r), game.strategy_edges[i][r[i]])


def player_costs(game: GameInstance, r, model=EXPONENTIAL) -> tuple[int, ...]:
    r = check_routing(game, r)
    model = CostModel.parse(model)
    counts = _counts(game, r)
    return tuple(model.path_cost(counts, edges_i[c]) for edges_i, c in zip(game.strategy_edges, r))


def social_cost(game: GameInstance, r) -> int:
    """Network congestion: the largest edge congestion."""
    return max(congestion(game, r))


def potential(game: GameInstance, r) -> int:
    """Sum over every edge of ``2**C_e``; unused edges contribute 1."""
    return sum(1 << c for c in congestion(game, r))


def exp_edge_set_cost(counts, edge_set) -> int:
    """Sum of ``2**counts[e]`` over ``edge_set``."""
    return sum(1 << counts[e] for e in edge_set)


def max_path_length(game: GameInstance, r) -> int:
    """Longest chosen path; reported as a routing statistic only."""
    r = check_routing(game, r)
    return max(len(edges_i[c]) for edges_i, c in zip(game.strategy_edges, r))

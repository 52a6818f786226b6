"""Canonical and parameterised game families."""

from __future__ import annotations

import random
from dataclasses import dataclass, field

from .errors import GenerationError, InstanceTooLargeError, ValidationError
from .game import EXPONENTIAL, GameInstance, Player, player_costs
from .graph import Graph, Path, enumerate_simple_paths

MAX_CHAIN_EDGES = 10**5


@dataclass(frozen=True)
class GeneratorSpec:
    """Which family to build and with what parameters.

    kinds: ``fig2`` (k), ``multi-nash``, ``random`` (nodes, edges, players,
    max_len, seed) and ``chain`` (c_hat, l_star).
    """

    kind: str
    params: tuple[tuple[str, int], ...] = ()

    REQUIRED = {
        "fig2": ("k",),
        "multi-nash": (),
        "random": ("nodes", "edges", "players", "max_len", "seed"),
        "chain": ("c_hat", "l_star"),
    }

    @classmethod
    def of(cls, kind: str, **params) -> GeneratorSpec:
        kind = {"multi_nash": "multi-nash", "expansion-chain": "chain"}.get(kind, kind)
        if kind not in cls.REQUIRED:
            raise ValidationError(f"unknown generator {kind!r}")
        missing = [p for p in cls.REQUIRED[kind] if params.get(p) is None]
        if missing:
            raise ValidationError(f"generator {kind!r} needs {', '.join(missing)}")
        extra = set(params) - set(cls.REQUIRED[kind])
        if extra:
            raise ValidationError(f"generator {kind!r} takes no {', '.join(sorted(extra))}")
        for name, value in params.items():
            if not isinstance(value, int) or (value < 1 and name != "seed") or value < 0:
                raise ValidationError(f"generator parameter {name} must be a positive integer, got {value!r}")
        return cls(kind, tuple(sorted(params.items())))

    def __str__(self):
        return " ".join([self.kind] + [f"{k}={v}" for k, v in self.params])

    def build(self) -> Generated:
        p = dict(self.params)
        if self.kind == "fig2":
            return Generated(gen_fig2(p["k"]), spec=self)
        if self.kind == "multi-nash":
            return Generated(gen_multi_nash_witness(), spec=self)
        if self.kind == "random":
            return Generated(gen_random(p["nodes"], p["edges"], p["players"], p["max_len"], p["seed"]),
                             spec=self, seed=p["seed"])
        chain = gen_expansion_chain(p["c_hat"], p["l_star"])
        return Generated(chain.game, routing=chain.routing, spec=self, info=chain.info())


@dataclass
class Generated:
    game: GameInstance
    routing: tuple[int, ...] | None = None
    spec: GeneratorSpec | None = None
    seed: int | None = None
    info: dict = field(default_factory=dict)


def _with_all_paths(g: Graph, pairs, max_len=None) -> list[Player]:
    return [Player(u, v, enumerate_simple_paths(g, u, v, max_len)) for u, v in pairs]


def gen_fig2(k: int) -> GameInstance:
    """``k`` players from u=0 to v=1 over a direct edge plus ``k-1`` disjoint paths of length ``k``.

    Edge 0 is the direct edge, so strategy 0 of every player is that edge.
    """
    if k < 2:
        raise ValidationError(f"fig2 needs k >= 2, got {k}")
    edges = [(0, 1)]
    n = 2
    for _ in range(k - 1):
        prev = 0
        for _ in range(k - 1):
            edges.append((prev, n))
            prev, n = n, n + 1
        edges.append((prev, 1))
    g = Graph(n, tuple(edges))
    return GameInstance(g, _with_all_paths(g, [(0, 1)] * k, max_len=k), name=f"fig2-k{k}")


# 7 nodes, 8 edges; every player may use any simple path.
_WITNESS_EDGES = ((0, 1), (0, 3), (1, 4), (1, 5), (1, 6), (2, 4), (3, 5), (4, 5))
_WITNESS_PAIRS = ((1, 0), (6, 2), (0, 4))
WITNESS_HIGH = (0, 1, 0)  # congestion 2, player costs (4, 8, 6)
WITNESS_LOW = (0, 0, 2)   # congestion 1, player costs (2, 6, 6)


def gen_multi_nash_witness() -> GameInstance:
    """Three-player exponential game with two Nash-routings of congestion 2 and 1.

    The certificate (both routings are Nash, with cost vectors (4, 8, 6) and
    (2, 6, 6)) is checked on every call; GenerationError if it fails.
    """
    g = Graph(7, _WITNESS_EDGES)
    game = GameInstance(g, _with_all_paths(g, _WITNESS_PAIRS), name="multi-nash-witness")
    certify_witness(game)
    return game


def certify_witness(game: GameInstance) -> None:
    from .analysis import enumerate_nash

    nash = dict(enumerate_nash(game, EXPONENTIAL))
    for r, sc, costs in ((WITNESS_HIGH, 2, (4, 8, 6)), (WITNESS_LOW, 1, (2, 6, 6))):
        if nash.get(r) != sc or player_costs(game, r, EXPONENTIAL) != costs:
            raise GenerationError(f"witness routing {r} is not a Nash-routing with congestion {sc} "
                                  f"and player costs {costs}")


def gen_random(nodes: int, edges: int, players: int, max_len: int, seed: int,
               retries: int = 100) -> GameInstance:
    """Seeded random connected graph with random player pairs and all simple paths up to ``max_len``.

    A pair whose strategy set comes out empty is redrawn, up to ``retries`` times.
    """
    if nodes < 2:
        raise ValidationError("a random instance needs at least 2 nodes")
    if not nodes - 1 <= edges <= nodes * (nodes - 1) // 2:
        raise ValidationError(f"{edges} edges cannot form a connected simple graph on {nodes} nodes")
    if players < 1 or max_len < 1:
        raise ValidationError("players and max_len must be positive")
    rng = random.Random(seed)
    order = list(range(nodes))
    rng.shuffle(order)
    chosen = set()
    for i in range(1, nodes):
        a, b = order[i], order[rng.randrange(i)]
        chosen.add((min(a, b), max(a, b)))
    spare = [(a, b) for a in range(nodes) for b in range(a + 1, nodes) if (a, b) not in chosen]
    chosen.update(rng.sample(spare, edges - len(chosen)))
    g = Graph(nodes, tuple(sorted(chosen)))

    roster = []
    for _ in range(players):
        for _ in range(retries):
            u, v = rng.sample(range(nodes), 2)
            paths = enumerate_simple_paths(g, u, v, max_len)
            if paths:
                roster.append(Player(u, v, paths))
                break
        else:
            raise GenerationError(f"no connected pair within length {max_len} after {retries} draws")
    return GameInstance(g, roster, name=f"random-n{nodes}-m{edges}-p{players}-l{max_len}-s{seed}")


@dataclass
class ExpansionChain:
    game: GameInstance
    routing: tuple[int, ...]
    c_hat: int
    l_star: int
    depth: int
    stage_congestion: list[int]
    stage_edges: list[int]
    stage_players: list[int]

    @property
    def ecmin_partial_sums(self) -> list[int]:
        """Running totals of expansion edges per depth (root edge included)."""
        out, total = [], 0
        for e in self.stage_edges:
            total += e
            out.append(total)
        return out

    def info(self) -> dict:
        from .dynamics import is_nash

        return {
            "c_hat": self.c_hat,
            "l_star": self.l_star,
            "depth": self.depth,
            "stage_congestion": self.stage_congestion,
            "stage_edges": self.stage_edges,
            "stage_players": self.stage_players,
            "ecmin_partial_sums": self.ecmin_partial_sums,
            "emitted_is_nash": is_nash(self.game, self.routing, EXPONENTIAL),
        }


def chain_shape(c_hat: int, l_star: int):
    """Depth, per-depth congestion, expansion edges and supporting players of the chain.

    Depth ``k`` edges carry ``c_hat - k*(l+1)`` players (``l = log2 l_star``).
    A depth expands further only while its congestion exceeds ``l + 11`` and the
    next congestion stays at least 2.
    """
    if l_star < 2 or l_star & (l_star - 1):
        raise ValidationError(f"l_star must be a power of two >= 2, got {l_star}")
    lg = l_star.bit_length() - 1
    if c_hat <= lg + 11:
        raise ValidationError(f"c_hat must exceed log2(l_star) + 11 = {lg + 11}, got {c_hat}")
    congestion = [c_hat]
    while congestion[-1] > lg + 11 and congestion[-1] - (lg + 1) >= 2:
        congestion.append(congestion[-1] - (lg + 1))
    depth = len(congestion) - 1
    edges, players = [1], [c_hat - 1]
    for k in range(1, depth + 1):
        edges.append(players[-1] * l_star)
        players.append(edges[-1] * congestion[k])
    return depth, congestion, edges, players


def gen_expansion_chain(c_hat: int, l_star: int, max_edges: int = MAX_CHAIN_EDGES) -> ExpansionChain:
    """Layered instance with one root edge meant to carry ``c_hat`` players.

    Every player sits on a single edge in the emitted routing and owns one
    private alternative path. Non-terminal alternatives have length ``l_star``
    and each of their edges hosts the next depth's players; terminal
    alternatives are fresh paths of length 2. Strategy sets are exactly
    ``[own edge, own alternative]`` (the last root player has only the root
    edge), so the all-alternatives routing has congestion 1.
    """
    depth, congestion, stage_edges, stage_players = chain_shape(c_hat, l_star)
    total = sum(stage_edges) + 2 * stage_players[-1]
    if total > max_edges:
        raise InstanceTooLargeError(f"expansion chain needs {total} edges, above the limit of {max_edges}")

    edges = [(0, 1)]
    n = 2
    players: list[Player] = []

    def fresh_path(a, b, length):
        nonlocal n
        ids = []
        prev = a
        for _ in range(length - 1):
            edges.append((prev, n))
            ids.append(len(edges) - 1)
            prev, n = n, n + 1
        edges.append((prev, b))
        ids.append(len(edges) - 1)
        return ids

    pending = []  # (edge id, depth) whose players still need building
    for i in range(c_hat):
        strategies = [Path((0,), 0, 1)]
        if i < c_hat - 1:
            alt = fresh_path(0, 1, l_star)
            strategies.append(Path(alt, 0, 1))
            pending.extend((e, 1) for e in alt)
        players.append(Player(0, 1, strategies))
    head = 0
    while head < len(pending):
        eid, k = pending[head]
        head += 1
        a, b = edges[eid]
        length = l_star if k < depth else 2
        for _ in range(congestion[k]):
            alt = fresh_path(a, b, length)
            players.append(Player(a, b, [Path((eid,), a, b), Path(alt, a, b)]))
            if k < depth:
                pending.extend((e, k + 1) for e in alt)

    g = Graph(n, tuple(edges))
    game = GameInstance(g, players, name=f"chain-c{c_hat}-l{l_star}")
    return ExpansionChain(game, (0,) * len(players), c_hat, l_star, depth,
                          congestion, stage_edges, stage_players)

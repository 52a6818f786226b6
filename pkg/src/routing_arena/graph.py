"""Graphs and bounded simple-path enumeration.

Edges carry dense, stable ids ``0..|E|-1`` given by their position in
``Graph.edges``. Paths are sequences of edge ids plus explicit endpoints, so
orientation on undirected graphs is recovered by walking from the source.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property

from .errors import InstanceTooLargeError, ValidationError

DEFAULT_PATH_CAP = 10**6


@dataclass(frozen=True)
class Graph:
    node_count: int
    edges: tuple[tuple[int, int], ...]
    directed: bool = False

    def __post_init__(self):
        object.__setattr__(self, "edges", tuple((int(a), int(b)) for a, b in self.edges))
        if self.node_count < 1:
            raise ValidationError("graph needs at least one node")
        seen = set()
        for eid, (a, b) in enumerate(self.edges):
            if not (0 <= a < self.node_count and 0 <= b < self.node_count):
                raise ValidationError(f"edge {eid} ({a}, {b}) has an endpoint outside 0..{self.node_count - 1}")
            if a == b:
                raise ValidationError(f"edge {eid} is a self-loop on node {a}")
            key = (a, b) if self.directed else (min(a, b), max(a, b))
            if key in seen:
                raise ValidationError(f"edge {eid} ({a}, {b}) duplicates an earlier edge")
            seen.add(key)

    @property
    def edge_count(self) -> int:
        return len(self.edges)

    @cached_property
    def adjacency(self) -> tuple[tuple[tuple[int, int], ...], ...]:
        """Per node, the ``(edge_id, neighbour)`` pairs leaving it, by edge id."""
        adj = [[] for _ in range(self.node_count)]
        for eid, (a, b) in enumerate(self.edges):
            adj[a].append((eid, b))
            if not self.directed:
                adj[b].append((eid, a))
        return tuple(tuple(sorted(nbrs)) for nbrs in adj)


@dataclass(frozen=True)
class Path:
    edges: tuple[int, ...]
    source: int
    destination: int

    def __post_init__(self):
        object.__setattr__(self, "edges", tuple(int(e) for e in self.edges))

    def __len__(self):
        return len(self.edges)


def walk_nodes(g: Graph, p: Path) -> list[int] | None:
    """Node sequence visited by ``p`` starting at its source, or None if ``p`` is not a walk."""
    node = p.source
    nodes = [node]
    for eid in p.edges:
        if not (isinstance(eid, int) and 0 <= eid < g.edge_count):
            return None
        a, b = g.edges[eid]
        if node == a:
            node = b
        elif node == b and not g.directed:
            node = a
        else:
            return None
        nodes.append(node)
    return nodes


def validate_path(g: Graph, p: Path) -> bool:
    """True iff ``p`` is a non-empty node-simple walk from its source to its destination."""
    if not p.edges or p.source == p.destination:
        return False
    if not (0 <= p.source < g.node_count and 0 <= p.destination < g.node_count):
        return False
    nodes = walk_nodes(g, p)
    if nodes is None or nodes[-1] != p.destination:
        return False
    return len(set(nodes)) == len(nodes)


def enumerate_simple_paths(g: Graph, u: int, v: int, max_len: int | None = None,
                           cap: int = DEFAULT_PATH_CAP) -> list[Path]:
    """All node-simple ``u``-``v`` paths with at most ``max_len`` edges.

    Output is sorted shortest first, then lexicographically by edge-id sequence.
    ``max_len=None`` means unbounded (simple paths never exceed ``n - 1`` edges).
    Raises InstanceTooLargeError once more than ``cap`` paths are found.
    """
    if u == v:
        raise ValidationError(f"source and destination coincide (node {u})")
    for node in (u, v):
        if not 0 <= node < g.node_count:
            raise ValidationError(f"node {node} outside 0..{g.node_count - 1}")
    limit = g.node_count - 1 if max_len is None else min(max_len, g.node_count - 1)
    if limit < 1:
        if max_len is not None and max_len < 1:
            raise ValidationError("max_len must be at least 1")
        return []

    adj = g.adjacency
    found: list[tuple[int, ...]] = []
    on_path = [False] * g.node_count
    on_path[u] = True
    edge_stack: list[int] = []
    node_stack = [u]
    # iterator index per depth into the adjacency list of node_stack[depth]
    cursor = [0]
    while cursor:
        node = node_stack[-1]
        nbrs = adj[node]
        i = cursor[-1]
        if i >= len(nbrs) or len(edge_stack) >= limit:
            cursor.pop()
            on_path[node_stack.pop()] = False
            if edge_stack:
                edge_stack.pop()
            continue
        cursor[-1] = i + 1
        eid, nxt = nbrs[i]
        if on_path[nxt]:
            continue
        if nxt == v:
            found.append((*edge_stack, eid))
            if len(found) > cap:
                raise InstanceTooLargeError(
                    f"more than {cap} simple paths from {u} to {v} with length <= {limit}")
            continue
        edge_stack.append(eid)
        node_stack.append(nxt)
        on_path[nxt] = True
        cursor.append(0)

    found.sort(key=lambda es: (len(es), es))
    return [Path(es, u, v) for es in found]

"""Text formats for instances, routings, dynamics traces and analysis reports.

Instance file::

    [metadata]
    name = fig2-k3
    generator = fig2 k=3

    [graph]
    nodes = 6
    directed = false
    edge 0 1
    edge 0 2
    ...

    [players]
    player 0 1
      path 0
      path 1 2 3
    player 2 5 max_len 4

A player either lists its strategy paths (edge ids, one ``path`` line each)
or carries a ``max_len`` directive, in which case every simple path up to that
length is used. Every number is written in full decimal.
"""

from __future__ import annotations

import csv
import io
import os
import tempfile
from fractions import Fraction
from pathlib import Path as FsPath

from .analysis import AnalysisReport
from .dynamics import DynamicsTrace, MoveRecord
from .errors import ArenaError, ValidationError
from .game import GameInstance, Player
from .graph import Graph, Path, enumerate_simple_paths, validate_path

TRACE_COLUMNS = ("step", "player", "from", "to", "pc_before", "pc_after",
                 "potential_before", "potential_after")


def atomic_write(path, text: str) -> None:
    """Write ``text`` to a temp file beside ``path`` and rename it into place."""
    path = FsPath(path)
    if path.parent and not path.parent.exists():
        path.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=path.parent, prefix=f".{path.name}.", suffix=".tmp")
    try:
        with os.fdopen(fd, "w", newline="") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def _ints(text: str) -> tuple[int, ...]:
    return tuple(int(t) for t in text.split())


# -- instances ---------------------------------------------------------------

def dumps_instance(game: GameInstance, metadata: dict | None = None) -> str:
    meta = {"name": game.name}
    meta.update(metadata or {})
    out = ["# routing-arena instance", "[metadata]"]
    out += [f"{k} = {v}" for k, v in meta.items() if v is not None and v != ""]
    g = game.graph
    out += ["", "[graph]", f"nodes = {g.node_count}", f"directed = {str(g.directed).lower()}"]
    out += [f"edge {a} {b}" for a, b in g.edges]
    out += ["", "[players]"]
    for pl in game.players:
        out.append(f"player {pl.source} {pl.destination}")
        out += ["  path " + " ".join(map(str, p.edges)) for p in pl.strategies]
    return "\n".join(out) + "\n"


def write_instance(path, game: GameInstance, metadata: dict | None = None) -> None:
    atomic_write(path, dumps_instance(game, metadata))


def loads_instance(text: str) -> tuple[GameInstance, dict]:
    """Parse an instance document; errors name the offending line."""
    section = None
    meta: dict[str, str] = {}
    nodes = directed = None
    edges: list[tuple[int, int]] = []
    graph_line = None
    raw_players = []  # [line, u, v, max_len, [(line, edge ids)]]

    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if line.startswith("[") and line.endswith("]"):
            section = line[1:-1].strip()
            if section not in ("metadata", "graph", "players"):
                raise ValidationError(f"unknown section [{section}]", lineno)
            if section == "players" and nodes is None:
                raise ValidationError("[players] must follow a [graph] section with a node count", lineno)
            continue
        try:
            if section == "metadata":
                key, eq, value = line.partition("=")
                if not eq:
                    raise ValidationError(f"expected 'key = value', got {line!r}", lineno)
                meta[key.strip()] = value.strip()
            elif section == "graph":
                graph_line = graph_line or lineno
                if line.startswith("edge"):
                    pair = _ints(line[4:])
                    if len(pair) != 2:
                        raise ValidationError("an edge needs exactly two node ids", lineno)
                    edges.append(pair)
                    _check_edge(nodes, edges, lineno)
                    continue
                key, eq, value = (s.strip() for s in line.partition("="))
                if key == "nodes" and eq:
                    nodes = int(value)
                    if nodes < 1:
                        raise ValidationError("nodes must be positive", lineno)
                elif key == "directed" and eq:
                    if value.lower() not in ("true", "false"):
                        raise ValidationError(f"directed must be true or false, got {value!r}", lineno)
                    directed = value.lower() == "true"
                else:
                    raise ValidationError(f"unrecognised graph entry {line!r}", lineno)
            elif section == "players":
                word, _, rest = line.partition(" ")
                if word == "player":
                    fields = rest.split()
                    if len(fields) == 2:
                        max_len = None
                    elif len(fields) == 4 and fields[2] in ("max_len", "auto"):
                        max_len = int(fields[3])
                        if max_len < 1:
                            raise ValidationError("max_len must be at least 1", lineno)
                    else:
                        raise ValidationError("expected 'player SRC DST' or 'player SRC DST max_len N'", lineno)
                    raw_players.append([lineno, int(fields[0]), int(fields[1]), max_len, []])
                elif word == "path":
                    if not raw_players:
                        raise ValidationError("path line before any player", lineno)
                    if raw_players[-1][3] is not None:
                        raise ValidationError("a player with max_len cannot also list paths", lineno)
                    ids = _ints(rest)
                    if not ids:
                        raise ValidationError("empty path", lineno)
                    raw_players[-1][4].append((lineno, ids))
                else:
                    raise ValidationError(f"unrecognised player entry {line!r}", lineno)
            else:
                raise ValidationError("content outside any section", lineno)
        except ValueError as exc:
            if isinstance(exc, ValidationError):
                raise
            raise ValidationError(f"malformed number in {line!r}", lineno) from None

    if nodes is None:
        raise ValidationError("missing [graph] section or node count")
    try:
        g = Graph(nodes, tuple(edges), bool(directed))
    except ValidationError as exc:
        raise ValidationError(str(exc), graph_line) from None
    players = []
    for lineno, u, v, max_len, paths in raw_players:
        for node in (u, v):
            if not 0 <= node < nodes:
                raise ValidationError(f"node {node} outside 0..{nodes - 1}", lineno)
        if u == v:
            raise ValidationError(f"player source and destination coincide (node {u})", lineno)
        if max_len is not None:
            strategies = enumerate_simple_paths(g, u, v, max_len)
            if not strategies:
                raise ValidationError(f"no simple path from {u} to {v} within length {max_len}", lineno)
        else:
            if not paths:
                raise ValidationError("player lists no paths", lineno)
            strategies, seen = [], set()
            for pline, ids in paths:
                p = Path(ids, u, v)
                if not validate_path(g, p):
                    raise ValidationError(f"path {list(ids)} is not a simple path from {u} to {v}", pline)
                if ids in seen:
                    raise ValidationError(f"path {list(ids)} listed twice", pline)
                seen.add(ids)
                strategies.append(p)
        players.append(Player(u, v, strategies))
    if not players:
        raise ValidationError("instance has no players")
    if not edges:
        raise ValidationError("instance has no edges", graph_line)
    return GameInstance(g, players, name=meta.get("name", "")), meta


def _check_edge(nodes, edges, lineno):
    if nodes is None:
        raise ValidationError("edge listed before the node count", lineno)
    a, b = edges[-1]
    if not (0 <= a < nodes and 0 <= b < nodes):
        raise ValidationError(f"edge ({a}, {b}) has an endpoint outside 0..{nodes - 1}", lineno)
    if a == b:
        raise ValidationError(f"self-loop on node {a}", lineno)
    if (a, b) in edges[:-1]:
        raise ValidationError(f"edge ({a}, {b}) repeats an earlier edge", lineno)


def read_instance(path) -> tuple[GameInstance, dict]:
    try:
        text = FsPath(path).read_text()
    except OSError as exc:
        raise ValidationError(f"cannot read instance {path}: {exc.strerror}") from None
    return loads_instance(text)


# -- routings ----------------------------------------------------------------

def dumps_routing(r, comment: str = "") -> str:
    head = f"# {comment}\n" if comment else ""
    return head + "choices = " + " ".join(map(str, r)) + "\n"


def write_routing(path, r, comment: str = "") -> None:
    atomic_write(path, dumps_routing(r, comment))


def loads_routing(text: str) -> tuple[int, ...]:
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        key, eq, value = (s.strip() for s in line.partition("="))
        if key != "choices" or not eq:
            raise ValidationError(f"expected 'choices = ...', got {line!r}", lineno)
        try:
            return _ints(value)
        except ValueError:
            raise ValidationError("choices must be integers", lineno) from None
    raise ValidationError("routing file has no 'choices' line")


def read_routing(path) -> tuple[int, ...]:
    try:
        return loads_routing(FsPath(path).read_text())
    except OSError as exc:
        raise ValidationError(f"cannot read routing {path}: {exc.strerror}") from None


# -- dynamics traces -----------------------------------------------------------

def dumps_trace(trace: DynamicsTrace) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(TRACE_COLUMNS)
    for step, m in enumerate(trace.moves, 1):
        w.writerow((step, m.player, m.from_choice, m.to_choice, m.pc_before, m.pc_after,
                    m.potential_before, m.potential_after))
    return buf.getvalue()


def loads_trace(text: str) -> list[MoveRecord]:
    rows = list(csv.reader(io.StringIO(text)))
    if not rows or tuple(rows[0]) != TRACE_COLUMNS:
        raise ValidationError("trace header does not match " + ",".join(TRACE_COLUMNS), 1)
    moves = []
    for lineno, row in enumerate(rows[1:], 2):
        try:
            vals = [int(v) for v in row]
        except ValueError:
            raise ValidationError("non-integer trace field", lineno) from None
        if len(vals) != len(TRACE_COLUMNS) or vals[0] != lineno - 1:
            raise ValidationError("malformed trace row", lineno)
        moves.append(MoveRecord(*vals[1:]))
    return moves


def dumps_summary(entries: dict) -> str:
    out = []
    for key, value in entries.items():
        if isinstance(value, (tuple, list)):
            value = " ".join(map(str, value))
        elif isinstance(value, bool):
            value = str(value).lower()
        out.append(f"{key} = {value}")
    return "\n".join(out) + "\n"


def loads_summary(text: str) -> dict[str, str]:
    out = {}
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        key, eq, value = (s.strip() for s in line.partition("="))
        if not eq:
            raise ValidationError(f"expected 'key = value', got {line!r}", lineno)
        out[key] = value
    return out


def load_trace(trace_path, summary_path) -> DynamicsTrace:
    """Rebuild a DynamicsTrace from a trace file and its summary."""
    summary = loads_summary(FsPath(summary_path).read_text())
    moves = loads_trace(FsPath(trace_path).read_text())
    return DynamicsTrace(initial=_ints(summary["initial"]), moves=moves, final=_ints(summary["final"]),
                         converged=summary["converged"] == "true")


# -- analysis reports ----------------------------------------------------------

def dumps_report(report: AnalysisReport, name: str = "") -> str:
    out = ["# routing-arena analysis report", "[report]"]
    if name:
        out.append(f"instance = {name}")
    out += [
        f"model = {report.model}",
        f"method = {'exhaustive' if report.exhaustive else 'milp'}",
        f"profile_count = {report.profile_count}",
        f"optimal_sc = {report.optimal_sc}",
        "optimal_routing = " + " ".join(map(str, report.optimal_routing)),
        f"poa = {report.poa}",
        f"pos = {report.pos}",
        f"nash_count = {len(report.nash_routings)}",
    ]
    if report.bound:
        b = report.bound
        out += ["", "[bound]", f"alpha = {b['alpha']}", f"value = {b['value']:.6f}",
                f"margin = {b['margin']:.6f}", f"holds = {str(b['holds']).lower()}"]
    out += ["", "[nash]", "# choices ; social cost"]
    out += [" ".join(map(str, r)) + f" ; {sc}" for r, sc in report.nash_routings]
    return "\n".join(out) + "\n"


def loads_report(text: str) -> AnalysisReport:
    section = None
    fields: dict[str, str] = {}
    bound: dict = {}
    nash = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if line.startswith("["):
            section = line.strip("[]")
            continue
        if section == "nash":
            choices, sep, sc = line.partition(";")
            if not sep:
                raise ValidationError("nash line needs 'choices ; cost'", lineno)
            try:
                nash.append((_ints(choices), int(sc)))
            except ValueError:
                raise ValidationError(f"malformed number in {line!r}", lineno) from None
        elif section in ("report", "bound"):
            key, eq, value = (s.strip() for s in line.partition("="))
            if not eq:
                raise ValidationError(f"expected 'key = value', got {line!r}", lineno)
            (fields if section == "report" else bound)[key] = value
        else:
            raise ValidationError(f"content outside a known section: {line!r}", lineno)
    try:
        report = AnalysisReport(
            model=fields["model"], optimal_sc=int(fields["optimal_sc"]),
            optimal_routing=_ints(fields["optimal_routing"]), nash_routings=nash,
            poa=Fraction(fields["poa"]), pos=Fraction(fields["pos"]),
            profile_count=int(fields["profile_count"]), exhaustive=fields.get("method") != "milp")
    except KeyError as exc:
        raise ValidationError(f"report lacks field {exc.args[0]}") from None
    if bound:
        report.bound = {"alpha": bound["alpha"], "value": float(bound["value"]),
                        "margin": float(bound["margin"]), "holds": bound["holds"] == "true"}
    return report


def read_report(path) -> AnalysisReport:
    try:
        return loads_report(FsPath(path).read_text())
    except OSError as exc:
        raise ArenaError(f"cannot read report {path}: {exc.strerror}") from None

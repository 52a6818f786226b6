import pytest

from routing_arena import analyze, gen_fig2, is_nash, run_best_response
from routing_arena.errors import ValidationError
from routing_arena.formats import (atomic_write, dumps_instance, dumps_report, dumps_routing,
                                   dumps_summary, dumps_trace, load_trace, loads_instance,
                                   loads_report, loads_routing, loads_summary, loads_trace,
                                   read_instance, read_report, write_instance)
from routing_arena.generators import gen_expansion_chain, gen_random

TRIANGLE = """\
# a comment
[metadata]
name = tri

[graph]
nodes = 3
directed = false
edge 0 1
edge 1 2
edge 0 2

[players]
player 0 2
  path 2
  path 0 1
player 1 0 max_len 2
"""


def test_parse_listed_and_generated_strategies():
    game, meta = loads_instance(TRIANGLE)
    assert meta == {"name": "tri"} and game.name == "tri"
    assert game.strategy_edges == (((2,), (0, 1)), ((0,), (1, 2)))


@pytest.mark.parametrize("game", [gen_fig2(3), gen_random(6, 10, 4, 3, 7),
                                  gen_expansion_chain(13, 2).game], ids=lambda g: g.name)
def test_instance_round_trip(game, tmp_path):
    path = tmp_path / "g.txt"
    write_instance(path, game, {"generator": "x"})
    again, meta = read_instance(path)
    assert again == game
    assert meta["generator"] == "x"
    assert dumps_instance(again, {"generator": "x"}) == path.read_text()


def test_directed_flag_round_trips():
    text = TRIANGLE.replace("directed = false", "directed = true").replace("player 1 0 max_len 2\n", "")
    game, _ = loads_instance(text)
    assert game.graph.directed
    assert loads_instance(dumps_instance(game))[0] == game


@pytest.mark.parametrize("old, new, line", [
    ("edge 1 2", "edge 1 1", 9),                       # self-loop
    ("edge 0 2", "edge 0 7", 10),                       # out of range
    ("edge 0 2", "edge 0 1", 10),                       # repeated
    ("edge 0 2", "edge 2 1", 6),                       # reverse duplicate: caught by Graph, anchored at [graph]
    ("  path 0 1", "  path 0 0", 15),                  # repeated edge
    ("  path 0 1", "  path 2", 15),                    # duplicate strategy
    ("  path 0 1", "  path 0 x", 15),                  # bad number
    ("player 1 0 max_len 2", "player 1 1", 16),        # degenerate player
    ("player 1 0 max_len 2", "player 1 0 max_len 0", 16),
    ("player 1 0 max_len 2", "player 1 0 max_len 1\n  path 0", 17),
    ("directed = false", "directed = maybe", 7),
    ("[metadata]", "[meta]", 2),
    ("name = tri", "name tri", 3),
    ("player 0 2\n", "player 0 9\n", 13),
])
def test_errors_name_the_line(old, new, line):
    text = TRIANGLE.replace(old, new, 1)
    with pytest.raises(ValidationError) as info:
        loads_instance(text)
    assert info.value.line == line
    assert str(info.value).startswith(f"line {line}: ")


def test_missing_graph_section():
    with pytest.raises(ValidationError):
        loads_instance("[metadata]\nname = x\n")


def test_unreadable_instance(tmp_path):
    with pytest.raises(ValidationError):
        read_instance(tmp_path / "absent.txt")


# -- routings, traces, summaries ----------------------------------------------------

def test_routing_round_trip():
    assert loads_routing(dumps_routing((3, 0, 12), comment="hi")) == (3, 0, 12)


@pytest.mark.parametrize("text", ["", "picks = 1 2\n", "choices = 1 two\n"])
def test_routing_rejects(text):
    with pytest.raises(ValidationError):
        loads_routing(text)


def test_trace_round_trip_and_replay(fig2_5, tmp_path):
    trace = run_best_response(fig2_5, (0,) * 5, schedule="random:3")
    text = dumps_trace(trace)
    assert text.splitlines()[0] == "step,player,from,to,pc_before,pc_after,potential_before,potential_after"
    assert loads_trace(text) == trace.moves
    atomic_write(tmp_path / "trace.csv", text)
    atomic_write(tmp_path / "summary.txt", dumps_summary(
        {"converged": trace.converged, "initial": trace.initial, "final": trace.final}))
    again = load_trace(tmp_path / "trace.csv", tmp_path / "summary.txt")
    assert again.replay() == trace.final == again.final
    assert again.converged


def test_trace_keeps_huge_integers_exact():
    from routing_arena.dynamics import DynamicsTrace, MoveRecord
    big = 2**90 + 1
    trace = DynamicsTrace((0,), [MoveRecord(0, 0, 1, big, big - 1, big + 7, big)], (1,), True)
    text = dumps_trace(trace)
    assert str(big) in text and "e+" not in text
    assert loads_trace(text)[0].pc_before == big


@pytest.mark.parametrize("text, line", [
    ("step,player\n", 1),
    ("step,player,from,to,pc_before,pc_after,potential_before,potential_after\n1,0,0,1,4,2,9,x\n", 2),
    ("step,player,from,to,pc_before,pc_after,potential_before,potential_after\n2,0,0,1,4,2,9,8\n", 2),
])
def test_trace_rejects(text, line):
    with pytest.raises(ValidationError) as info:
        loads_trace(text)
    assert info.value.line == line


def test_summary_round_trip():
    text = dumps_summary({"converged": False, "final": (1, 2), "final_potential": 2**70})
    assert loads_summary(text) == {"converged": "false", "final": "1 2",
                                   "final_potential": str(2**70)}


# -- reports ---------------------------------------------------------------------

def test_report_round_trip_reverifies(witness, tmp_path):
    report = analyze(witness, alpha="3/2")
    path = tmp_path / "r.txt"
    atomic_write(path, dumps_report(report, witness.name))
    again = read_report(path)
    assert again.nash_routings == report.nash_routings
    assert (again.poa, again.pos, again.optimal_sc) == (report.poa, report.pos, report.optimal_sc)
    assert again.bound["holds"] and again.bound["alpha"] == "3/2"
    assert all(is_nash(witness, r) for r, _ in again.nash_routings)


def test_report_rejects_bad_nash_line():
    with pytest.raises(ValidationError) as info:
        loads_report("[report]\nmodel = exp\n[nash]\n0 1 ; two\n")
    assert info.value.line == 4


def test_atomic_write_leaves_no_temp_files(tmp_path):
    atomic_write(tmp_path / "sub" / "x.txt", "hello\n")
    assert [p.name for p in (tmp_path / "sub").iterdir()] == ["x.txt"]

import itertools
import random

import pytest

from conftest import small_random_games
from routing_arena import (EXPONENTIAL, GameInstance, Graph, Path, Player, best_response, gen_fig2,
                           greedy_step, is_nash, player_cost, potential, run_best_response,
                           verify_lemma1_identity)
from routing_arena.dynamics import Schedule, default_max_steps
from routing_arena.errors import MalformedPairError, NonConvergenceError, ValidationError
from routing_arena.game import CostModel, congestion

GAMES = small_random_games(25, seed=21)
ALL_ON_E = (0,) * 5


def naive_is_nash(game, r, model):
    """Independent oracle: price every unilateral deviation from scratch."""
    model = CostModel.parse(model)
    for i, options in enumerate(game.strategy_edges):
        now = player_cost(game, r, i, model)
        for j in range(len(options)):
            alt = r[:i] + (j,) + r[i + 1:]
            if player_cost(game, alt, i, model) < now:
                return False
    return True


# -- best response and Nash ----------------------------------------------------

def test_exp_best_response_leaves_the_shared_edge(fig2_5):
    assert player_cost(fig2_5, ALL_ON_E, 0) == 32
    j = best_response(fig2_5, ALL_ON_E, 0)
    assert j == 1
    assert player_cost(fig2_5, (j,) + ALL_ON_E[1:], 0) == 10


@pytest.mark.parametrize("i", range(5))
def test_linear_all_on_e_has_no_improvement(fig2_5, i):
    assert best_response(fig2_5, ALL_ON_E, i, "linear") is None


def test_single_strategy_has_no_best_response():
    g = Graph(2, ((0, 1),))
    game = GameInstance(g, [Player(0, 1, [Path((0,), 0, 1)])])
    assert best_response(game, (0,), 0) is None


def test_ties_keep_the_lowest_index():
    # two parallel length-2 routes with equal cost: nothing strictly better exists
    g = Graph(4, ((0, 1), (1, 3), (0, 2), (2, 3)))
    game = GameInstance(g, [Player(0, 3, [Path((0, 1), 0, 3), Path((2, 3), 0, 3)])])
    assert best_response(game, (1,), 0) is None


def test_nash_examples_on_fig2(fig2_5):
    assert is_nash(fig2_5, ALL_ON_E, "linear")
    assert not is_nash(fig2_5, ALL_ON_E, EXPONENTIAL)


def test_disjoint_routing_is_nash_under_bottleneck(fig2_5):
    assert is_nash(fig2_5, (0, 1, 2, 3, 4), "max")


@pytest.mark.parametrize("model", ["exp", "linear"])
def test_disjoint_routing_is_not_nash_under_sum_models(fig2_5, model):
    # the player on edge e pays 2 (exp) or 1 (linear); a long-path player pays 10 or 5
    # and drops to 4 or 2 by joining e
    assert not is_nash(fig2_5, (0, 1, 2, 3, 4), model)


@pytest.mark.parametrize("model", ["exp", "max", "linear", "poly:2"])
def test_is_nash_matches_deviation_oracle(model):
    for game in GAMES[:12]:
        for r in itertools.islice(itertools.product(*map(range, game.strategy_sizes)), 300):
            assert is_nash(game, r, model) == naive_is_nash(game, r, model)


# -- greedy step ---------------------------------------------------------------

def test_greedy_step_example(fig2_5):
    new_r, move = greedy_step(fig2_5, ALL_ON_E)
    assert new_r == (1, 0, 0, 0, 0)
    assert (move.player, move.from_choice, move.to_choice) == (0, 0, 1)
    assert (move.pc_before, move.pc_after) == (32, 10)
    assert (move.potential_before, move.potential_after) == (52, 41)
    assert potential(fig2_5, ALL_ON_E) == 2**5 + 20
    assert potential(fig2_5, new_r) == 2**4 + 5 * 2 + 15


def test_greedy_step_at_nash_is_none(witness):
    assert greedy_step(witness, (0, 0, 2)) is None


def test_greedy_step_round_robin_start(fig2_5):
    _, move = greedy_step(fig2_5, ALL_ON_E, start=3)
    assert move.player == 3


def test_gain_schedule_takes_the_largest_drop():
    rng = random.Random(2)
    for game in GAMES:
        r = tuple(rng.randrange(k) for k in game.strategy_sizes)
        step = greedy_step(game, r, schedule="gain")
        if step is None:
            continue
        drops = []
        for i in range(game.n_players):
            j = best_response(game, r, i)
            if j is not None:
                alt = r[:i] + (j,) + r[i + 1:]
                drops.append(potential(game, r) - potential(game, alt))
        _, move = step
        assert move.potential_before - move.potential_after == max(drops)


@pytest.mark.parametrize("text, expected", [
    ("rr", Schedule("rr")), ("gain", Schedule("gain")), ("random:7", Schedule("random", 7)),
    ("lowest-potential-gain-last", Schedule("gain")), ("round-robin", Schedule("rr")),
])
def test_schedule_parse(text, expected):
    assert Schedule.parse(text) == expected


@pytest.mark.parametrize("text", ["fifo", "random:x", "rr:1"])
def test_schedule_parse_rejects(text):
    with pytest.raises(ValidationError):
        Schedule.parse(text)


# -- potential-drop identity ----------------------------------------------------

def test_identity_worked_example(fig2_5):
    after = (1, 0, 0, 0, 0)
    counts = congestion(fig2_5, after)
    left = 2 ** counts[0]
    joined = sum(2 ** counts[e] for e in fig2_5.strategy_edges[0][1])
    assert (left, joined) == (16, 10)
    assert left - joined // 2 == 11 == 52 - 41
    assert verify_lemma1_identity(fig2_5, ALL_ON_E, after, 0)


def test_identity_trivial_move(fig2_5):
    assert verify_lemma1_identity(fig2_5, ALL_ON_E, ALL_ON_E, 2)


def test_identity_rejects_two_movers(fig2_5):
    with pytest.raises(MalformedPairError):
        verify_lemma1_identity(fig2_5, ALL_ON_E, (1, 2, 0, 0, 0), 0)


def test_identity_holds_for_arbitrary_unilateral_changes():
    # the identity is algebraic: it holds for any move, improving or not
    rng = random.Random(9)
    for game in GAMES:
        for _ in range(20):
            r = tuple(rng.randrange(k) for k in game.strategy_sizes)
            i = rng.randrange(game.n_players)
            alt = r[:i] + (rng.randrange(game.strategy_sizes[i]),) + r[i + 1:]
            assert verify_lemma1_identity(game, r, alt, i)


# -- full runs -----------------------------------------------------------------

@pytest.mark.parametrize("schedule", ["rr", "gain", "random:1", "random:2"])
def test_fig2_exp_run_converges_to_nash(fig2_5, schedule):
    trace = run_best_response(fig2_5, ALL_ON_E, EXPONENTIAL, schedule)
    assert trace.converged
    assert is_nash(fig2_5, trace.final)
    assert trace.replay() == trace.final
    assert trace.steps <= potential(fig2_5, ALL_ON_E) - fig2_5.n_edges


def test_fig2_exp_rr_run_is_reproducible(fig2_5):
    trace = run_best_response(fig2_5, ALL_ON_E)
    assert trace.final == (1, 2, 0, 0, 0)
    assert [m.potential_after for m in trace.moves] == [41, 38]


def test_linear_run_from_equilibrium_makes_no_move(fig2_5):
    trace = run_best_response(fig2_5, ALL_ON_E, "linear")
    assert trace.converged and trace.steps == 0 and trace.final == ALL_ON_E


def test_run_from_nash_makes_no_move(witness):
    trace = run_best_response(witness, (0, 1, 0))
    assert trace.converged and trace.steps == 0


@pytest.mark.parametrize("schedule", ["rr", "gain", "random:5"])
def test_exp_runs_respect_potential_accounting(schedule):
    rng = random.Random(14)
    for game in GAMES:
        initial = tuple(rng.randrange(k) for k in game.strategy_sizes)
        trace = run_best_response(game, initial, EXPONENTIAL, schedule)
        assert trace.converged and is_nash(game, trace.final)
        assert trace.steps <= potential(game, initial) - game.n_edges
        r = initial
        for m in trace.moves:
            nxt = r[:m.player] + (m.to_choice,) + r[m.player + 1:]
            assert m.pc_after < m.pc_before
            assert potential(game, r) == m.potential_before > m.potential_after == potential(game, nxt)
            assert verify_lemma1_identity(game, r, nxt, m.player)
            r = nxt
        assert r == trace.final


@pytest.mark.parametrize("model", ["max", "linear", "poly:3"])
def test_other_models_never_claim_false_convergence(model):
    rng = random.Random(15)
    for game in GAMES:
        initial = tuple(rng.randrange(k) for k in game.strategy_sizes)
        try:
            trace = run_best_response(game, initial, model)
        except NonConvergenceError as exc:
            trace = exc.trace
            assert not trace.converged
        if trace.converged:
            assert is_nash(game, trace.final, model)


def test_budget_exhausted_under_non_potential_model(fig2_5):
    with pytest.raises(NonConvergenceError) as info:
        run_best_response(fig2_5, (1, 1, 1, 1, 1), "linear", max_steps=1)
    assert info.value.trace.steps == 1 and not info.value.trace.converged


def test_budget_exhausted_under_exp_is_reported_not_raised(fig2_5):
    trace = run_best_response(fig2_5, ALL_ON_E, EXPONENTIAL, max_steps=1)
    assert trace.steps == 1 and not trace.converged


def test_default_budgets(fig2_5):
    assert default_max_steps(fig2_5, ALL_ON_E) == 52 - 21
    assert default_max_steps(fig2_5, ALL_ON_E, "linear") == 10 * 5 * 5


def test_max_steps_must_be_positive(fig2_5):
    with pytest.raises(ValidationError):
        run_best_response(fig2_5, ALL_ON_E, max_steps=0)


def test_exp_k2_all_on_e_is_weakly_stable():
    game = gen_fig2(2)
    assert is_nash(game, (0, 0))
    assert run_best_response(game, (0, 0)).steps == 0

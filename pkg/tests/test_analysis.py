import itertools
from fractions import Fraction

import pytest

from conftest import small_random_games
from routing_arena import (EXPONENTIAL, GameInstance, Graph, Path, Player, analyze, enumerate_nash,
                           gen_fig2, is_nash, optimal_social_cost, poa_bound_check,
                           price_of_anarchy, price_of_stability, run_best_response, social_cost)
from routing_arena.analysis import CAP_ENV, _ratios, congestion_lower_bound, resolve_cap
from routing_arena.errors import InstanceTooLargeError, NoEquilibriumError, ValidationError
from routing_arena.extremal import milp_extremal_nash, milp_optimal_social_cost

GAMES = small_random_games(40, seed=31, max_players=5)


def all_profiles(game):
    return itertools.product(*map(range, game.strategy_sizes))


def oracle_optimum(game):
    return min((social_cost(game, r), r) for r in all_profiles(game))


def bridge_game():
    # two players from 0 to 3 whose every route crosses the bridge edge 3 = (2, 3)
    g = Graph(4, ((0, 1), (1, 2), (0, 2), (2, 3)))
    paths = [Path((2, 3), 0, 3), Path((0, 1, 3), 0, 3)]
    return GameInstance(g, [Player(0, 3, paths)] * 2)


def solo_game():
    game = gen_fig2(3)
    return GameInstance(game.graph, game.players[:1])


# -- optimum -------------------------------------------------------------------

def test_fig2_optimum(fig2_5):
    assert optimal_social_cost(fig2_5) == (1, (0, 1, 2, 3, 4))


def test_single_player_optimum():
    assert optimal_social_cost(solo_game())[0] == 1


def test_shared_bridge_forces_two():
    game = bridge_game()
    assert congestion_lower_bound(game) == 2
    assert optimal_social_cost(game)[0] == 2


@pytest.mark.parametrize("game", GAMES, ids=lambda g: g.name)
def test_pruned_search_equals_plain_scan(game):
    best, witness = oracle_optimum(game)
    assert optimal_social_cost(game, prune=False) == (best, witness)
    assert optimal_social_cost(game, prune=True) == (best, witness)


# -- Nash enumeration ------------------------------------------------------------

@pytest.mark.parametrize("model", ["exp", "max", "linear", "poly:2"])
def test_enumeration_matches_oracle(model):
    for game in GAMES:
        listed = enumerate_nash(game, model)
        expected = [(r, social_cost(game, r)) for r in all_profiles(game) if is_nash(game, r, model)]
        assert listed == expected


def test_exponential_always_has_an_equilibrium():
    for game in GAMES:
        assert enumerate_nash(game, EXPONENTIAL)


def test_converged_dynamics_endpoints_are_listed():
    for game in GAMES:
        listed = {r for r, _ in enumerate_nash(game)}
        for initial in itertools.islice(all_profiles(game), 0, None, max(1, game.profile_count // 5)):
            assert run_best_response(game, initial).final in listed


def test_witness_has_both_certified_equilibria(witness):
    nash = enumerate_nash(witness)
    assert {sc for _, sc in nash} == {1, 2}


def test_fig2_linear_includes_all_on_e(fig2_5):
    assert ((0,) * 5, 5) in enumerate_nash(fig2_5, "linear")


def test_single_player_equilibria_are_its_cheapest_paths():
    game = solo_game()
    assert [r for r, _ in enumerate_nash(game)] == [(0,)]


# -- PoA / PoS -----------------------------------------------------------------

def test_fig2_linear_poa(fig2_5):
    poa = price_of_anarchy(fig2_5, "linear")
    assert isinstance(poa, Fraction) and poa >= 5


def test_witness_ratios(witness):
    report = analyze(witness)
    assert (report.optimal_sc, report.poa, report.pos) == (1, Fraction(2), Fraction(1))
    assert report.worst_nash == ((0, 1, 0), 2)
    assert report.best_nash == ((0, 0, 2), 1)


def test_single_player_ratios_are_one():
    game = solo_game()
    assert price_of_anarchy(game) == price_of_stability(game) == 1


def test_report_invariants():
    for game in GAMES:
        report = analyze(game)
        assert 1 <= report.pos <= report.poa
        assert report.poa.denominator in (1,) or report.optimal_sc % report.poa.denominator == 0
        assert report.profile_count == game.profile_count
        assert all(is_nash(game, r) for r, _ in report.nash_routings)


def test_empty_equilibrium_set_raises():
    with pytest.raises(NoEquilibriumError):
        _ratios([], 1)


# -- caps ------------------------------------------------------------------------

def test_cap_refusal(fig2_5):
    with pytest.raises(InstanceTooLargeError):
        analyze(fig2_5, cap=100, method="exhaustive")


def test_cap_from_environment(monkeypatch, fig2_5):
    monkeypatch.setenv(CAP_ENV, "10")
    assert resolve_cap() == 10
    with pytest.raises(InstanceTooLargeError):
        enumerate_nash(fig2_5)
    assert resolve_cap(50) == 50


def test_bad_cap_environment(monkeypatch):
    monkeypatch.setenv(CAP_ENV, "lots")
    with pytest.raises(ValidationError):
        resolve_cap()


def test_unknown_method(witness):
    with pytest.raises(ValidationError):
        analyze(witness, method="guess")


# -- integer-programming backend ---------------------------------------------------

@pytest.mark.parametrize("model", ["exp", "linear", "poly:2"])
def test_milp_agrees_with_scan(model):
    for game in GAMES[:20]:
        exact = analyze(game, model, method="exhaustive")
        opt, r = milp_optimal_social_cost(game)
        assert opt == exact.optimal_sc and social_cost(game, r) == opt
        worst = milp_extremal_nash(game, model, "max")
        best = milp_extremal_nash(game, model, "min")
        assert worst[1] == exact.worst_nash[1]
        assert best[1] == exact.best_nash[1]
        searched = analyze(game, model, method="milp")
        assert (searched.poa, searched.pos) == (exact.poa, exact.pos)
        assert not searched.exhaustive


def test_milp_on_fig2_linear(fig2_5):
    report = analyze(fig2_5, "linear", method="milp")
    assert (report.optimal_sc, report.poa, report.pos) == (1, 5, 4)


def test_auto_switches_to_milp_above_cap(witness):
    report = analyze(witness, cap=10)
    assert not report.exhaustive and report.poa == 2


def test_milp_rejects_bottleneck(witness):
    with pytest.raises(InstanceTooLargeError):
        analyze(witness, "max", method="milp")


# -- bound check -------------------------------------------------------------------

def test_bound_check_on_witness(witness):
    report = analyze(witness, alpha=10)
    holds, margin = poa_bound_check(witness, report, 10)
    assert holds and margin > 0
    assert report.bound["holds"] and report.bound["alpha"] == "10"


def test_bound_check_is_report_only(witness):
    holds, margin = poa_bound_check(witness, analyze(witness), Fraction(1, 100))
    assert not holds and margin < 0


def test_unit_poa_always_within_bound():
    game = solo_game()
    report = analyze(game)
    assert poa_bound_check(game, report, 1)[0]

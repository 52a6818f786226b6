import random

import pytest

from routing_arena import Graph, gen_fig2, gen_multi_nash_witness, gen_random


@pytest.fixture
def triangle():
    # a=0, b=1, c=2; edges 0:(a,b), 1:(b,c), 2:(a,c)
    return Graph(3, ((0, 1), (1, 2), (0, 2)))


@pytest.fixture(scope="session")
def fig2_5():
    return gen_fig2(5)


@pytest.fixture(scope="session")
def witness():
    return gen_multi_nash_witness()


def small_random_games(count, seed=0, max_players=4):
    """Seeded random games small enough for brute-force oracles."""
    rng = random.Random(seed)
    games = []
    while len(games) < count:
        nodes = rng.randint(3, 6)
        edges = rng.randint(nodes - 1, min(10, nodes * (nodes - 1) // 2))
        game = gen_random(nodes, edges, rng.randint(1, max_players), rng.randint(1, 3),
                          rng.randrange(10**6))
        if game.profile_count <= 5000:
            games.append(game)
    return games

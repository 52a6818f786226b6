"""The acceptance battery behind ``verify-paper``.

Each criterion returns a CriterionResult whose ``detail`` holds only
deterministic facts (counts, exact values), so the manifest is identical from
one run to the next. Wall-clock budgets are checked separately by the caller.
"""

from __future__ import annotations

import itertools
import random
import time
import zlib
from dataclasses import dataclass
from fractions import Fraction

from .analysis import analyze, enumerate_nash, optimal_social_cost, poa_bound_check
from .dynamics import is_nash, run_best_response, verify_lemma1_identity
from .errors import ArenaError
from .game import EXPONENTIAL, GameInstance, player_costs, potential, social_cost
from .generators import (WITNESS_HIGH, WITNESS_LOW, gen_expansion_chain, gen_fig2,
                         gen_multi_nash_witness, gen_random)

ORACLE_PROFILE_LIMIT = 10**5
BOUND_ALPHA = 10
SUITE_SEEDS = range(50)
CHAIN_PARAMS = ((13, 2), (14, 4))
SCHEDULES = ("rr", "gain", "random:{}")

CRITERION_NAMES = {1: "lemma1-identity", 2: "best-response-convergence", 3: "fig2-linear-poa",
                   4: "multi-nash-witness", 5: "nash-oracle-agreement", 6: "poa-log-bound",
                   7: "determinism"}
BUDGETS = {1: 10.0, 2: 30.0, 3: 10.0, 4: 5.0, 5: 60.0, 6: 60.0, 7: 180.0}


@dataclass
class CriterionResult:
    number: int
    name: str
    passed: bool
    detail: str
    seconds: float = 0.0

    def line(self) -> str:
        return f"C{self.number} {self.name}: {'PASS' if self.passed else 'FAIL'} ({self.detail})"


def random_suite() -> list[GameInstance]:
    """Fifty seeded instances: at most 6 nodes, 12 edges, 5 players, paths of length 4."""
    games = []
    for seed in SUITE_SEEDS:
        rng = random.Random(1000 + seed)
        nodes = rng.randint(4, 6)
        edges = rng.randint(nodes - 1, min(12, nodes * (nodes - 1) // 2))
        players = rng.randint(2, 5)
        max_len = rng.randint(2, 4)
        games.append(gen_random(nodes, edges, players, max_len, seed))
    return games


def _random_routing(game: GameInstance, rng: random.Random) -> tuple[int, ...]:
    return tuple(rng.randrange(k) for k in game.strategy_sizes)


class Battery:
    """Runs the criteria, sharing instances and dynamics runs between them."""

    def __init__(self):
        self.suite = random_suite()
        self.runs = {}  # instance name -> list of (initial, trace)
        self.oracle_games: dict[str, GameInstance] = {}

    def _dynamics(self, game: GameInstance, count: int, salt: int):
        key = (game.name, count, salt)
        if key not in self.runs:
            rng = random.Random(salt * 7919 + zlib.crc32(game.name.encode()))
            out = []
            for k in range(count):
                sched = SCHEDULES[k % 3].format(k)
                initial = _random_routing(game, rng)
                out.append((initial, run_best_response(game, initial, EXPONENTIAL, sched)))
            self.runs[key] = out
        return self.runs[key]

    def c1_lemma1(self) -> CriterionResult:
        moves = bad_identity = bad_drop = 0
        for game in self.suite:
            for initial, trace in self._dynamics(game, 12, 1):
                r = list(initial)
                for m in trace.moves:
                    before = tuple(r)
                    r[m.player] = m.to_choice
                    after = tuple(r)
                    moves += 1
                    if not verify_lemma1_identity(game, before, after, m.player):
                        bad_identity += 1
                    drop = m.potential_before - m.potential_after
                    if not (drop >= 1 and potential(game, before) == m.potential_before
                            and potential(game, after) == m.potential_after):
                        bad_drop += 1
            self.oracle_games[game.name] = game
        ok = moves >= 1000 and bad_identity == 0 and bad_drop == 0
        return CriterionResult(1, CRITERION_NAMES[1], ok,
                               f"instances={len(self.suite)} moves={moves} identity_failures={bad_identity} "
                               f"nondecreasing={bad_drop}")

    def c2_convergence(self) -> CriterionResult:
        runs = failures = 0
        for game in self.suite[:25]:
            for initial, trace in self._dynamics(game, 4, 2):
                runs += 1
                bound = potential(game, initial) - game.n_edges
                if not (trace.converged and trace.steps <= bound and is_nash(game, trace.final)):
                    failures += 1
        ok = runs >= 100 and failures == 0
        return CriterionResult(2, CRITERION_NAMES[2], ok,
                               f"instances=25 runs={runs} failures={failures}")

    def c3_fig2(self) -> CriterionResult:
        facts, ok = [], True
        for k in (3, 4, 5):
            game = gen_fig2(k)
            self.oracle_games[game.name] = game
            all_e = (0,) * k
            lin_nash = is_nash(game, all_e, "linear")
            sc = social_cost(game, all_e)
            opt, _ = optimal_social_cost(game)
            poa = analyze(game, "linear").poa
            stay = player_costs(game, all_e, EXPONENTIAL)[0]
            leave = 2 * k  # a free length-k path at congestion 1
            exp_nash = is_nash(game, all_e, EXPONENTIAL)
            good = (lin_nash and sc == k and opt == 1 and poa >= k and stay == 2**k
                    and stay > leave and not exp_nash)
            ok &= good
            facts.append(f"k={k} linear_nash={lin_nash} sc={sc} opt={opt} poa={poa} "
                         f"exp_cost={stay}>{leave} exp_nash={exp_nash}")
        return CriterionResult(3, CRITERION_NAMES[3], ok, "; ".join(facts))

    def c4_witness(self) -> CriterionResult:
        game = gen_multi_nash_witness()
        self.oracle_games[game.name] = game
        nash = dict(enumerate_nash(game, EXPONENTIAL))
        high = nash.get(WITNESS_HIGH) == 2 and player_costs(game, WITNESS_HIGH) == (4, 8, 6)
        low = nash.get(WITNESS_LOW) == 1 and player_costs(game, WITNESS_LOW) == (2, 6, 6)
        report = analyze(game, EXPONENTIAL)
        ok = high and low and report.poa == 2 and report.pos == 1
        return CriterionResult(4, CRITERION_NAMES[4], ok,
                               f"nash={len(nash)} sc2_costs_486={high} sc1_costs_266={low} "
                               f"poa={report.poa} pos={report.pos}")

    def c5_oracle(self) -> CriterionResult:
        checked = mismatches = strays = 0
        for name in sorted(self.oracle_games):
            game = self.oracle_games[name]
            if game.profile_count > ORACLE_PROFILE_LIMIT:
                continue
            listed = {r for r, _ in enumerate_nash(game, EXPONENTIAL)}
            oracle = {r for r in itertools.product(*map(range, game.strategy_sizes))
                      if is_nash(game, r, EXPONENTIAL)}
            checked += 1
            mismatches += listed != oracle
            for key, runs in self.runs.items():
                if key[0] == name:
                    strays += sum(t.final not in listed for _, t in runs if t.converged)
        ok = checked > 0 and mismatches == 0 and strays == 0
        return CriterionResult(5, CRITERION_NAMES[5], ok,
                               f"instances={checked} mismatches={mismatches} endpoints_outside={strays}")

    def c6_bound(self) -> CriterionResult:
        checked = violations = 0
        worst = Fraction(0)
        chain_facts = []
        for game in self.suite:
            report = analyze(game, EXPONENTIAL, method="exhaustive")
            holds, _ = poa_bound_check(game, report, BOUND_ALPHA)
            checked += 1
            violations += not holds
            worst = max(worst, report.poa)
        for c_hat, l_star in CHAIN_PARAMS:
            chain = gen_expansion_chain(c_hat, l_star)
            report = analyze(chain.game, EXPONENTIAL, method="milp")
            holds, _ = poa_bound_check(chain.game, report, BOUND_ALPHA)
            checked += 1
            violations += not holds
            chain_facts.append(f"chain({c_hat},{l_star}) edges={chain.game.n_edges} poa={report.poa} "
                               f"emitted_nash={is_nash(chain.game, chain.routing)}")
        ok = violations == 0
        return CriterionResult(6, CRITERION_NAMES[6], ok,
                               f"instances={checked} violations={violations} random_max_poa={worst}; "
                               + "; ".join(chain_facts))

    def run(self, numbers=(1, 2, 3, 4, 5, 6)) -> list[CriterionResult]:
        steps = {1: self.c1_lemma1, 2: self.c2_convergence, 3: self.c3_fig2,
                 4: self.c4_witness, 5: self.c5_oracle, 6: self.c6_bound}
        out = []
        for n in numbers:
            t0 = time.perf_counter()
            try:
                res = steps[n]()
            except ArenaError as exc:
                # a broken component fails its criterion instead of aborting the battery
                res = CriterionResult(n, CRITERION_NAMES[n], False,
                                      f"error: {type(exc).__name__}: {exc}")
            res.seconds = time.perf_counter() - t0
            out.append(res)
        return out


def manifest(results: list[CriterionResult]) -> str:
    lines = ["# routing-arena verify-paper manifest"]
    lines += [r.line() for r in results]
    verdict = all(r.passed for r in results)
    lines.append(f"overall: {'PASS' if verdict else 'FAIL'}")
    return "\n".join(lines) + "\n"


def run_battery(check_budgets: bool = True) -> list[CriterionResult]:
    """Criteria 1-6, then criterion 7: a second full run must yield the same manifest."""
    first = Battery().run()
    second = Battery().run()
    same = manifest(first) == manifest(second)
    total = sum(r.seconds for r in first + second)
    results = first + [CriterionResult(7, CRITERION_NAMES[7], same, f"identical_manifests={same}", total)]
    if check_budgets:
        for r in results:
            if r.seconds >= BUDGETS[r.number]:
                r.passed = False
                r.detail += "; over time budget"
    return results

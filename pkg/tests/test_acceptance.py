"""Acceptance criteria 1-7, one pass/fail line each.

The battery runs once per session (twice internally, for the determinism
criterion); every criterion is then checked against its own wall-clock budget.
"""

import pytest

from routing_arena import cli
from routing_arena.acceptance import BUDGETS, CRITERION_NAMES, manifest, run_battery


@pytest.fixture(scope="module")
def results():
    return {r.number: r for r in run_battery(check_budgets=False)}


def report(capsys, res):
    status = "PASS" if res.passed and res.seconds < BUDGETS[res.number] else "FAIL"
    with capsys.disabled():
        print(f"\n[acceptance] C{res.number} {res.name}: {status} "
              f"({res.seconds:.2f}s < {BUDGETS[res.number]:.0f}s) {res.detail}")


@pytest.mark.parametrize("number", range(1, 8), ids=lambda n: f"C{n}-{CRITERION_NAMES[n]}")
def test_criterion(results, number, capsys):
    res = results[number]
    report(capsys, res)
    assert res.passed, res.detail
    assert res.seconds < BUDGETS[number], f"{res.seconds:.1f}s over the {BUDGETS[number]}s budget"


def test_verify_paper_manifest_matches_library_run(results, tmp_path, capsys):
    code = cli.main(["verify-paper", "--out", str(tmp_path)])
    capsys.readouterr()
    ordered = [results[n] for n in range(1, 8)]
    assert code == cli.EXIT_OK
    assert (tmp_path / "manifest.txt").read_text() == manifest(ordered)

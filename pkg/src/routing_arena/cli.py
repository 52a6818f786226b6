"""Command-line front end: ``routing-arena {generate,dynamics,analyze,verify-paper}``.

Exit codes are stable so scripted pipelines can branch on them:

    0  success
    1  unexpected error
    2  invalid arguments, configuration, generator spec or instance file
    3  output could not be written
    4  dynamics did not converge
    5  instance too large for the analysis
    6  no pure Nash-routing exists
    7  acceptance battery failed
"""

from __future__ import annotations

import argparse
import dataclasses
import json
import sys
from dataclasses import dataclass
from fractions import Fraction
from pathlib import Path

from .acceptance import manifest, run_battery
from .analysis import analyze
from .dynamics import run_best_response
from .errors import (ArenaError, InstanceTooLargeError, NoEquilibriumError, NonConvergenceError,
                     ValidationError)
from .formats import (atomic_write, dumps_report, dumps_summary, dumps_trace, read_instance,
                      read_routing, write_instance, write_routing)
from .game import potential, social_cost
from .generators import GeneratorSpec
from .validation import check_initial, check_model, check_schedule

EXIT_OK = 0
EXIT_ERROR = 1
EXIT_INVALID = 2
EXIT_WRITE = 3
EXIT_NOT_CONVERGED = 4
EXIT_TOO_LARGE = 5
EXIT_NO_EQUILIBRIUM = 6
EXIT_BATTERY_FAILED = 7


@dataclass
class RunConfig:
    """Settings shared by ``dynamics`` and ``analyze``; loadable from a JSON object.

    model       cost model: exp, max, linear or poly:d            (default exp)
    schedule    rr, gain or random[:seed]                        (default rr)
    seed        seed for a bare ``random`` schedule              (default 0)
    max_steps   move budget; None picks the model's default      (default None)
    initial     path of a routing file; None starts all on 0     (default None)
    out         output directory (dynamics) or file (analyze)    (default None)
    cap         profile-count cap; None uses ARENA_CAP or 10^7   (default None)
    method      auto, exhaustive or milp                         (default auto)
    alpha       constant of the log-product bound, as P/Q        (default 10)
    """

    model: str = "exp"
    schedule: str = "rr"
    seed: int = 0
    max_steps: int | None = None
    initial: str | None = None
    out: str | None = None
    cap: int | None = None
    method: str = "auto"
    alpha: str = "10"

    @classmethod
    def from_dict(cls, data: dict) -> RunConfig:
        if not isinstance(data, dict):
            raise ValidationError("configuration must be a JSON object")
        known = {f.name for f in dataclasses.fields(cls)}
        unknown = sorted(set(data) - known)
        if unknown:
            raise ValidationError(f"unknown configuration keys: {', '.join(unknown)}")
        return cls(**data)

    @classmethod
    def load(cls, path) -> RunConfig:
        try:
            data = json.loads(Path(path).read_text())
        except OSError as exc:
            raise ValidationError(f"cannot read configuration {path}: {exc}") from None
        except json.JSONDecodeError as exc:
            raise ValidationError(f"configuration {path} is not valid JSON: {exc.msg}", exc.lineno) from None
        return cls.from_dict(data)

    def merged(self, args: argparse.Namespace) -> RunConfig:
        """Command-line flags override the configuration file."""
        updates = {f.name: getattr(args, f.name) for f in dataclasses.fields(self)
                   if getattr(args, f.name, None) is not None}
        return dataclasses.replace(self, **updates)

    def schedule_text(self) -> str:
        return f"random:{self.seed}" if self.schedule.strip().lower() == "random" else self.schedule

    def alpha_value(self) -> Fraction:
        try:
            return Fraction(str(self.alpha))
        except (ValueError, ZeroDivisionError):
            raise ValidationError(f"alpha must be a rational P/Q, got {self.alpha!r}") from None


def _config(args) -> RunConfig:
    base = RunConfig.load(args.config) if args.config else RunConfig()
    return base.merged(args)


def _fail(code: int, message: str) -> int:
    print(f"routing-arena: {message}", file=sys.stderr)
    return code


# -- generate ------------------------------------------------------------------

def cmd_generate(args) -> int:
    params = {k: getattr(args, k) for k in ("k", "nodes", "edges", "players", "max_len", "seed",
                                            "c_hat", "l_star") if getattr(args, k, None) is not None}
    try:
        spec = GeneratorSpec.of(args.kind, **params)
        generated = spec.build()
    except ArenaError as exc:
        return _fail(EXIT_INVALID, str(exc))
    metadata = {"name": generated.game.name, "generator": str(spec)}
    if generated.seed is not None:
        metadata["seed"] = generated.seed
    try:
        write_instance(args.out, generated.game, metadata)
        if generated.routing is not None:
            write_routing(_sidecar(args.out), generated.routing, comment=f"intended routing for {spec}")
    except OSError as exc:
        return _fail(EXIT_WRITE, f"cannot write {args.out}: {exc}")
    g = generated.game
    print(f"{args.out}: {g.graph.node_count} nodes, {g.n_edges} edges, {g.n_players} players")
    return EXIT_OK


def _sidecar(out) -> Path:
    out = Path(out)
    return out.with_name(out.stem + ".routing")


# -- dynamics ------------------------------------------------------------------

def cmd_dynamics(args) -> int:
    try:
        cfg = _config(args)
        game, _ = read_instance(args.instance)
        model = check_model(cfg.model)
        schedule = check_schedule(cfg.schedule_text())
        initial = check_initial(game, read_routing(cfg.initial) if cfg.initial else None)
    except ArenaError as exc:
        return _fail(EXIT_INVALID, str(exc))
    except OSError as exc:
        return _fail(EXIT_INVALID, str(exc))

    try:
        trace = run_best_response(game, initial, model, schedule, cfg.max_steps)
    except NonConvergenceError as exc:
        trace = exc.trace
    except ValidationError as exc:
        return _fail(EXIT_INVALID, str(exc))

    summary = {
        "instance": game.name,
        "model": str(model),
        "schedule": str(schedule),
        "converged": trace.converged,
        "steps": trace.steps,
        "initial": trace.initial,
        "final": trace.final,
        "initial_potential": potential(game, trace.initial),
        "final_potential": potential(game, trace.final),
        "final_sc": social_cost(game, trace.final),
    }
    if cfg.out:
        out = Path(cfg.out)
        try:
            atomic_write(out / "trace.csv", dumps_trace(trace))
            atomic_write(out / "summary.txt", dumps_summary(summary))
        except OSError as exc:
            return _fail(EXIT_WRITE, f"cannot write to {out}: {exc}")
    sys.stdout.write(dumps_summary(summary))
    if not trace.converged:
        return _fail(EXIT_NOT_CONVERGED, f"no equilibrium within {trace.steps} moves")
    return EXIT_OK


# -- analyze -------------------------------------------------------------------

def cmd_analyze(args) -> int:
    try:
        cfg = _config(args)
        game, _ = read_instance(args.instance)
        model = check_model(cfg.model)
        alpha = cfg.alpha_value()
    except (ArenaError, OSError) as exc:
        return _fail(EXIT_INVALID, str(exc))
    try:
        report = analyze(game, model, cfg.cap, cfg.method, alpha=alpha)
    except InstanceTooLargeError as exc:
        return _fail(EXIT_TOO_LARGE, str(exc))
    except NoEquilibriumError as exc:
        return _fail(EXIT_NO_EQUILIBRIUM, str(exc))
    except ValidationError as exc:
        return _fail(EXIT_INVALID, str(exc))
    text = dumps_report(report, game.name)
    if cfg.out:
        try:
            atomic_write(cfg.out, text)
        except OSError as exc:
            return _fail(EXIT_WRITE, f"cannot write {cfg.out}: {exc}")
    sys.stdout.write(text)
    return EXIT_OK


# -- verify-paper --------------------------------------------------------------

def cmd_verify_paper(args) -> int:
    results = run_battery()
    text = manifest(results)
    for r in results:
        print(f"{r.line()} [{r.seconds:.2f}s]")
    try:
        atomic_write(Path(args.out) / "manifest.txt", text)
    except OSError as exc:
        return _fail(EXIT_WRITE, f"cannot write manifest: {exc}")
    failed = [f"C{r.number} {r.name}" for r in results if not r.passed]
    if failed:
        return _fail(EXIT_BATTERY_FAILED, "failed criteria: " + ", ".join(failed))
    return EXIT_OK


# -- parser --------------------------------------------------------------------

class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_INVALID, f"{self.prog}: error: {message}\n")


def _run_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--config", help="JSON file with RunConfig keys; flags override it")
    p.add_argument("--model", help="exp | max | linear | poly:d (default exp)")
    p.add_argument("--cap", type=int, help="profile-count cap (env ARENA_CAP, default 10^7)")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="routing-arena", description=__doc__.split("\n\n")[0])
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    gen = sub.add_parser("generate", help="write a generated instance file")
    gen.add_argument("kind", choices=sorted(GeneratorSpec.REQUIRED))
    gen.add_argument("--k", type=int, help="fig2: number of players")
    gen.add_argument("--nodes", type=int)
    gen.add_argument("--edges", type=int)
    gen.add_argument("--players", type=int)
    gen.add_argument("--max-len", dest="max_len", type=int)
    gen.add_argument("--seed", type=int)
    gen.add_argument("--c-hat", dest="c_hat", type=int, help="chain: root congestion")
    gen.add_argument("--l-star", dest="l_star", type=int, help="chain: alternative path length")
    gen.add_argument("--out", required=True, help="instance file to write")
    gen.set_defaults(func=cmd_generate)

    dyn = sub.add_parser("dynamics", help="run best-response dynamics")
    dyn.add_argument("instance")
    _run_flags(dyn)
    dyn.add_argument("--schedule", help="rr | gain | random:seed (default rr)")
    dyn.add_argument("--seed", type=int, help="seed for a bare 'random' schedule")
    dyn.add_argument("--max-steps", dest="max_steps", type=int)
    dyn.add_argument("--initial", help="routing file with the starting choices")
    dyn.add_argument("--out", help="directory for trace.csv and summary.txt")
    dyn.set_defaults(func=cmd_dynamics)

    ana = sub.add_parser("analyze", help="optimum, Nash-routings, PoA and PoS")
    ana.add_argument("instance")
    _run_flags(ana)
    ana.add_argument("--alpha", help="bound constant P/Q (default 10)")
    ana.add_argument("--method", choices=("auto", "exhaustive", "milp"))
    ana.add_argument("--out", help="report file to write")
    ana.set_defaults(func=cmd_analyze)

    ver = sub.add_parser("verify-paper", help="run the acceptance battery")
    ver.add_argument("--out", default=".", help="directory for manifest.txt")
    ver.set_defaults(func=cmd_verify_paper)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except ArenaError as exc:
        return _fail(EXIT_ERROR, str(exc))


if __name__ == "__main__":
    sys.exit(main())

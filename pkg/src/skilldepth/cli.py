"""Command line entry points: evolve, compare, replay, serve."""

from __future__ import annotations

import argparse
import os
import sys

from .config import ExperimentConfig, apply_setting, load_config_file
from .params import Genome


def _add_config_args(p: argparse.ArgumentParser) -> None:
    p.add_argument("--config", help="flat key=value config file")
    p.add_argument("--set", dest="sets", action="append", default=[],
                   metavar="KEY=VALUE", help="override any config key")


def _die(message: str) -> "SystemExit":
    print(message, file=sys.stderr)
    return SystemExit(2)


def _build_config(args: argparse.Namespace,
                  base: ExperimentConfig | None = None) -> ExperimentConfig:
    cfg = base if base is not None else ExperimentConfig()
    if getattr(args, "config", None):
        try:
            load_config_file(args.config, cfg)
        except (KeyError, ValueError) as exc:
            raise _die(f"bad config file {args.config!r}: {exc}") from None
        except OSError as exc:
            raise _die(str(exc)) from None
    for item in getattr(args, "sets", []):
        if "=" not in item:
            raise _die(f"--set expects KEY=VALUE, got {item!r}")
        key, value = item.split("=", 1)
        try:
            apply_setting(cfg, key.strip(), value.strip())
        except (KeyError, ValueError) as exc:
            raise _die(f"bad --set {item!r}: {exc}") from None
    # dedicated flags win over file and --set
    for flag, key in (("algo", "algorithms"), ("trials", "trials"),
                      ("evals", "evals"), ("reeval", "reeval"),
                      ("seed", "seed"), ("out", "out"),
                      ("workers", "workers"), ("side", "sideMode")):
        value = getattr(args, flag, None)
        if value is not None:
            apply_setting(cfg, key, str(value))
    return cfg


def _load_genome(spec: str) -> Genome:
    try:
        if os.path.exists(spec):
            with open(spec, encoding="utf8") as fh:
                for line in fh:
                    line = line.strip()
                    if line and not line.startswith("#"):
                        return Genome.from_line(line)
            raise _die(f"no genome line found in {spec!r}")
        return Genome.from_line(spec)
    except (ValueError, AssertionError) as exc:
        raise _die(f"bad genome {spec!r}: {exc}") from None


def main(argv: list[str] | None = None) -> int:
    parser = argparse.ArgumentParser(
        prog="skilldepth",
        description="Evolve game rule sets that reward stronger play.")
    sub = parser.add_subparsers(dest="command", required=True)

    p_evolve = sub.add_parser("evolve", help="run optimizer trials")
    _add_config_args(p_evolve)
    p_evolve.add_argument("--algo", help="comma list: rmhc,brmhc,ntbea or 'all'")
    p_evolve.add_argument("--trials", type=int)
    p_evolve.add_argument("--evals", type=int)
    p_evolve.add_argument("--reeval", type=int)
    p_evolve.add_argument("--seed", type=int)
    p_evolve.add_argument("--out")
    p_evolve.add_argument("--workers", type=int)
    p_evolve.add_argument("--side", choices=["skill_first", "skill_second", "both"])

    p_compare = sub.add_parser("compare", help="recompute comparison tables")
    p_compare.add_argument("--results", required=True, help="evolve output dir")

    p_replay = sub.add_parser("replay", help="re-run a genome's evaluation games")
    _add_config_args(p_replay)
    p_replay.add_argument("--genome", required=True,
                          help="comma-separated levels, or a file holding them")
    p_replay.add_argument("--seed", type=int, required=True)
    p_replay.add_argument("--workers", type=int, default=1)
    p_replay.add_argument("--out", help="write the log here instead of stdout")

    p_serve = sub.add_parser("serve", help="host the play-test service")
    _add_config_args(p_serve)
    p_serve.add_argument("--results", help="evolve output dir for /games")
    p_serve.add_argument("--host", default="127.0.0.1")
    p_serve.add_argument("--port", type=int, default=8000)
    p_serve.add_argument("--tick-ms", type=float, default=40.0)
    p_serve.add_argument("--ui", help="directory with the built web client")

    args = parser.parse_args(argv)

    if args.command == "evolve":
        from .harness import run_experiment
        cfg = _build_config(args)
        try:
            report = run_experiment(cfg)
        except RuntimeError as exc:
            print(str(exc), file=sys.stderr)
            return 2
        for to in report.outputs:
            print(f"{to.algo} trial {to.trial}: mean={to.summary.mean:.4f} "
                  f"stderr={to.summary.stderr:.4f}")
        if report.failures:
            print(f"{len(report.failures)} trial(s) failed, see failures.txt",
                  file=sys.stderr)
            return 1
        print(f"results in {report.out_dir}")
        return 0

    if args.command == "compare":
        from .harness import recompute_comparisons
        try:
            paths = recompute_comparisons(args.results)
        except FileNotFoundError as exc:
            print(str(exc), file=sys.stderr)
            return 2
        for path in paths:
            print(f"wrote {path}")
        return 0

    if args.command == "replay":
        from .harness import replay_games
        cfg = _build_config(args)
        genome = _load_genome(args.genome)
        text = replay_games(genome, cfg, args.seed, workers=args.workers)
        if args.out:
            with open(args.out, "w", encoding="utf8", newline="") as fh:
                fh.write(text)
        else:
            sys.stdout.write(text)
        return 0

    if args.command == "serve":
        import uvicorn

        from .server import PLAYTEST_BUDGETS, create_app
        cfg = _build_config(args, base=ExperimentConfig(budgets=PLAYTEST_BUDGETS))
        app = create_app(results_dir=args.results, world=cfg.world,
                         budgets=cfg.budgets,
                         tick_interval=args.tick_ms / 1000.0,
                         ui_dir=args.ui)
        uvicorn.run(app, host=args.host, port=args.port)
        return 0

    raise AssertionError("unreachable")


if __name__ == "__main__":
    sys.exit(main())

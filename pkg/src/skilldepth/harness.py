"""Experiment driver: trials, worker pool, CSV outputs, comparisons.

Every trial is a pure function of (baseSeed, algorithm, trialIndex), so runs
reproduce byte for byte whatever the pool size. All files are written by the
parent process in a fixed order with no timestamps.
"""

from __future__ import annotations

import csv
import io
import multiprocessing
import os
import traceback
from dataclasses import dataclass
from itertools import combinations

from .config import ExperimentConfig
from .fitness import (
    SIDE_BOTH, SIDE_SKILL_SECOND, SKILL_LADDER, FitnessEvaluator, _skill_game,
    skill_depth,
)
from .optimizers import (
    EvolutionTrace, NTupleModel, brmhc_preprocess, brmhc_run,
    expected_preprocess_evals, ntbea_run, rmhc_run,
)
from .params import Genome, default_search_space, decode
from .seeds import derive_seed, make_rng
from .stats import ReevaluationSummary, mann_whitney_u, reevaluate, sort_and_tabulate


def games_per_eval(side_mode: str) -> int:
    return 6 if side_mode == SIDE_BOTH else 3


@dataclass
class TrialOutput:
    algo: str
    trial: int
    trace: EvolutionTrace
    summary: ReevaluationSummary
    model_dump: str | None = None


@dataclass
class TrialFailure:
    algo: str
    trial: int
    error: str


def run_single_trial(cfg: ExperimentConfig, algo: str, trial: int) -> TrialOutput:
    space = default_search_space()
    trial_seed = derive_seed(cfg.base_seed, algo, trial)
    evaluator = FitnessEvaluator(space, cfg.world, cfg.budgets, trial_seed,
                                 cfg.side_mode)
    rng = make_rng(trial_seed, "optimizer")
    model_dump = None
    if algo == "rmhc":
        trace = rmhc_run(space, evaluator, cfg.n_evals, rng,
                         resample_parent=cfg.rmhc_resample_parent)
    elif algo == "brmhc":
        probe = FitnessEvaluator(space, cfg.world, cfg.budgets,
                                 derive_seed(trial_seed, "probe"), cfg.side_mode)
        tables = brmhc_preprocess(space, probe, rng)
        assert probe.calls == tables.evals_used == expected_preprocess_evals(space)
        trace = brmhc_run(space, evaluator, tables, cfg.n_evals, rng,
                          tau=cfg.brmhc_tau, cell_weight=cfg.brmhc_cell_weight,
                          resample_parent=cfg.rmhc_resample_parent)
    elif algo == "ntbea":
        trace, model = ntbea_run(space, evaluator, cfg.n_evals, rng,
                                 k=cfg.ntbea_k, c=cfg.ntbea_c)
        model_dump = model.dump()
    else:
        raise ValueError(f"unknown algorithm {algo!r}")

    # the whole point of iteration budgets: they must be spent exactly
    assert evaluator.calls == cfg.n_evals, \
        f"{algo} consumed {evaluator.calls} of {cfg.n_evals} evaluations"
    assert len(trace.records) == cfg.n_evals

    summary = reevaluate(trace.final_genome, evaluator.sample, cfg.reeval_n,
                         derive_seed(trial_seed, "reeval"))
    expected_games = (cfg.n_evals + cfg.reeval_n) * games_per_eval(cfg.side_mode)
    assert evaluator.games == expected_games
    return TrialOutput(algo=algo, trial=trial, trace=trace, summary=summary,
                       model_dump=model_dump)


def _trial_task(payload: tuple[ExperimentConfig, str, int]):
    cfg, algo, trial = payload
    try:
        return run_single_trial(cfg, algo, trial)
    except Exception:
        return TrialFailure(algo=algo, trial=trial, error=traceback.format_exc())


@dataclass
class ExperimentReport:
    out_dir: str
    outputs: list[TrialOutput]
    failures: list[TrialFailure]


def _write_text(path: str, text: str) -> None:
    with open(path, "w", encoding="utf8", newline="") as fh:
        fh.write(text)


def _csv_text(header: list[str], rows: list[list]) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(header)
    writer.writerows(rows)
    return buf.getvalue()


def run_experiment(cfg: ExperimentConfig) -> ExperimentReport:
    from .config import config_to_text

    out = cfg.out_dir
    try:
        os.makedirs(out, exist_ok=True)
        for sub in ("traces", "reeval", "models"):
            os.makedirs(os.path.join(out, sub), exist_ok=True)
        probe_path = os.path.join(out, ".write_probe")
        _write_text(probe_path, "ok\n")
        os.remove(probe_path)
    except OSError as exc:
        raise RuntimeError(f"output directory {out!r} is not writable: {exc}") from exc

    tasks = [(cfg, algo, trial)
             for algo in cfg.algorithms for trial in range(cfg.trials)]
    if cfg.workers > 1 and len(tasks) > 1:
        with multiprocessing.Pool(processes=cfg.workers) as pool:
            results = pool.map(_trial_task, tasks)
    else:
        results = [_trial_task(t) for t in tasks]

    outputs = [r for r in results if isinstance(r, TrialOutput)]
    failures = [r for r in results if isinstance(r, TrialFailure)]

    _write_text(os.path.join(out, "config.txt"), config_to_text(cfg))

    space = default_search_space()
    n_genes = space.n_genes
    gene_cols = [f"g{i}" for i in range(n_genes)]

    for to in outputs:
        rows = [[to.trial, to.algo, rec.eval_index, repr(rec.fitness),
                 repr(rec.best_so_far), *rec.genome.levels]
                for rec in to.trace.records]
        _write_text(
            os.path.join(out, "traces", f"{to.algo}_trial{to.trial:03d}.csv"),
            _csv_text(["trial", "algo", "evalIndex", "fitness", "bestSoFar",
                       *gene_cols], rows))
        sample_rows = [[i, repr(v)] for i, v in enumerate(to.summary.samples)]
        _write_text(
            os.path.join(out, "reeval", f"{to.algo}_trial{to.trial:03d}_samples.csv"),
            _csv_text(["sampleIndex", "fitness"], sample_rows))
        if to.model_dump is not None:
            _write_text(
                os.path.join(out, "models", f"{to.algo}_trial{to.trial:03d}_model.txt"),
                to.model_dump)

    summary_rows = [[to.algo, to.trial, repr(to.summary.mean),
                     repr(to.summary.stderr), to.summary.n,
                     to.trace.final_genome.to_line()]
                    for to in outputs]
    _write_text(os.path.join(out, "summaries.csv"),
                _csv_text(["algo", "trial", "mean", "stderr", "n", "genome"],
                          summary_rows))

    pre_rows = [[to.algo, to.trial, to.trace.preprocess_evals]
                for to in outputs if to.trace.preprocess_evals]
    if pre_rows:
        _write_text(os.path.join(out, "preprocessing.csv"),
                    _csv_text(["algo", "trial", "preprocessEvals"], pre_rows))

    entries = [(to.algo, to.trial, to.summary.mean, to.summary.stderr,
                to.summary.n, to.trace.final_genome.to_line())
               for to in outputs]
    ordered, _series = sort_and_tabulate(entries)
    comparison_rows = [[rank, e[0], e[1], repr(e[2]), repr(e[3]), e[4], e[5]]
                       for rank, e in enumerate(ordered)]
    _write_text(os.path.join(out, "comparison.csv"),
                _csv_text(["rank", "algo", "trial", "mean", "stderr", "n",
                           "genome"], comparison_rows))

    sig_rows = significance_rows(outputs, cfg.algorithms)
    _write_text(os.path.join(out, "significance.csv"),
                _csv_text(["comparison", "u", "p"],
                          [[name, repr(u), repr(p)] for name, u, p in sig_rows]))

    _write_text(os.path.join(out, "best_worst.txt"),
                best_worst_text(outputs, space))

    if failures:
        lines = [f"{f.algo} trial {f.trial}:\n{f.error}" for f in failures]
        _write_text(os.path.join(out, "failures.txt"), "\n".join(lines))

    return ExperimentReport(out_dir=out, outputs=outputs, failures=failures)


def significance_rows(outputs: list[TrialOutput],
                      algo_order: tuple[str, ...]) -> list[tuple[str, float, float]]:
    """Pairwise U tests: per-trial means across all trials, and the samples
    of each algorithm's worst trial."""
    by_algo: dict[str, list[TrialOutput]] = {}
    for to in outputs:
        by_algo.setdefault(to.algo, []).append(to)
    rows = []
    present = [a for a in algo_order if a in by_algo]
    for a, b in combinations(present, 2):
        means_a = [t.summary.mean for t in by_algo[a]]
        means_b = [t.summary.mean for t in by_algo[b]]
        res = mann_whitney_u(means_a, means_b)
        rows.append((f"means:{a}_vs_{b}", res.u, res.p_two_tailed))
        worst_a = min(by_algo[a], key=lambda t: t.summary.mean)
        worst_b = min(by_algo[b], key=lambda t: t.summary.mean)
        res_w = mann_whitney_u(worst_a.summary.samples, worst_b.summary.samples)
        rows.append((f"worstSamples:{a}_vs_{b}", res_w.u, res_w.p_two_tailed))
    return rows


def best_worst_text(outputs: list[TrialOutput], space) -> str:
    """Best and worst final rule set per algorithm, decoded to named values."""
    by_algo: dict[str, list[TrialOutput]] = {}
    for to in outputs:
        by_algo.setdefault(to.algo, []).append(to)
    blocks = []
    for algo in sorted(by_algo):
        group = by_algo[algo]
        for label, pick in (("best", max), ("worst", min)):
            chosen = pick(group, key=lambda t: t.summary.mean)
            params = decode(chosen.trace.final_genome, space)
            blocks.append(
                f"[{algo} {label}] trial={chosen.trial} "
                f"mean={chosen.summary.mean!r} stderr={chosen.summary.stderr!r}\n"
                f"genome={chosen.trace.final_genome.to_line()}\n"
                + params.to_text(space))
    return "\n".join(blocks)


def recompute_comparisons(results_dir: str) -> list[str]:
    """Rebuild comparison.csv and significance.csv from an evolve output dir."""
    summaries_path = os.path.join(results_dir, "summaries.csv")
    if not os.path.exists(summaries_path):
        raise FileNotFoundError(f"no summaries.csv under {results_dir!r}")
    entries = []
    algo_order: list[str] = []
    sample_sets: dict[str, dict[int, tuple[float, ...]]] = {}
    with open(summaries_path, encoding="utf8", newline="") as fh:
        for row in csv.DictReader(fh):
            algo, trial = row["algo"], int(row["trial"])
            entries.append((algo, trial, float(row["mean"]), float(row["stderr"]),
                            int(row["n"]), row["genome"]))
            if algo not in algo_order:
                algo_order.append(algo)
            sample_path = os.path.join(results_dir, "reeval",
                                       f"{algo}_trial{trial:03d}_samples.csv")
            if os.path.exists(sample_path):
                with open(sample_path, encoding="utf8", newline="") as sf:
                    samples = tuple(float(r["fitness"]) for r in csv.DictReader(sf))
                sample_sets.setdefault(algo, {})[trial] = samples

    ordered, _series = sort_and_tabulate(entries)
    comparison_rows = [[rank, e[0], e[1], repr(e[2]), repr(e[3]), e[4], e[5]]
                       for rank, e in enumerate(ordered)]
    comparison_path = os.path.join(results_dir, "comparison.csv")
    _write_text(comparison_path,
                _csv_text(["rank", "algo", "trial", "mean", "stderr", "n",
                           "genome"], comparison_rows))

    by_algo: dict[str, list[tuple[int, float]]] = {}
    for algo, trial, mean, _se, _n, _g in entries:
        by_algo.setdefault(algo, []).append((trial, mean))
    sig_rows: list[tuple[str, float, float]] = []
    for a, b in combinations(algo_order, 2):
        means_a = [m for _, m in by_algo[a]]
        means_b = [m for _, m in by_algo[b]]
        res = mann_whitney_u(means_a, means_b)
        sig_rows.append((f"means:{a}_vs_{b}", res.u, res.p_two_tailed))
        if a in sample_sets and b in sample_sets:
            worst_a = min(by_algo[a], key=lambda tm: tm[1])[0]
            worst_b = min(by_algo[b], key=lambda tm: tm[1])[0]
            if worst_a in sample_sets[a] and worst_b in sample_sets[b]:
                res_w = mann_whitney_u(sample_sets[a][worst_a],
                                       sample_sets[b][worst_b])
                sig_rows.append((f"worstSamples:{a}_vs_{b}", res_w.u,
                                 res_w.p_two_tailed))
    significance_path = os.path.join(results_dir, "significance.csv")
    _write_text(significance_path,
                _csv_text(["comparison", "u", "p"],
                          [[name, repr(u), repr(p)] for name, u, p in sig_rows]))
    return [comparison_path, significance_path]


# --- replay ------------------------------------------------------------------


def _replay_one(payload):
    cfg, genome, seed, skill_agent, side, game_index = payload
    space = default_search_space()
    params = decode(genome, space)
    game_seed = derive_seed(seed, game_index)
    return _skill_game(params, cfg.world, skill_agent, params.enemy_id,
                       cfg.budgets, game_seed, side, game_index)


def replay_games(genome: Genome, cfg: ExperimentConfig, seed: int,
                 workers: int = 1) -> str:
    """Re-run the evaluation games for a genome and format their outcomes.

    Pure function of (genome, config, seed): identical bytes on every run and
    for any worker count.
    """
    if cfg.side_mode == SIDE_BOTH:
        sides: tuple[int, ...] = (1, 2)
    elif cfg.side_mode == SIDE_SKILL_SECOND:
        sides = (2,)
    else:
        sides = (1,)
    specs = []
    game_index = 0
    for skill_agent in SKILL_LADDER:
        for side in sides:
            specs.append((cfg, genome, seed, skill_agent, side, game_index))
            game_index += 1
    if workers > 1:
        with multiprocessing.Pool(processes=workers) as pool:
            played = pool.map(_replay_one, specs)
    else:
        played = [_replay_one(s) for s in specs]

    lines = [f"genome={genome.to_line()}", f"seed={seed}"]
    ts = []
    per_rung = len(sides)
    for rung in range(len(SKILL_LADDER)):
        chunk = played[rung * per_rung:(rung + 1) * per_rung]
        t = sum(t for t, _ in chunk) / per_rung
        ts.append(t)
        for t_one, rec in chunk:
            lines.append(
                f"game {rec.game_index}: p1={rec.agent1} p2={rec.agent2} "
                f"seed={rec.seed} ticks={rec.ticks} "
                f"score1={rec.scores[0]} score2={rec.scores[1]} "
                f"lives1={rec.lives[0]} lives2={rec.lives[1]} "
                f"winner={rec.winner} T={t_one!r}")
    fitness = skill_depth(ts[0], ts[1], ts[2])
    lines.append(f"t_weak={ts[0]!r} t_mid={ts[1]!r} t_strong={ts[2]!r}")
    lines.append(f"fitness={fitness!r}")
    return "\n".join(lines) + "\n"

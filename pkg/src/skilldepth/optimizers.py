"""Three optimizers for noisy discrete landscapes.

RMHC trusts single fitness samples and pays for it under noise. B-RMHC spends
a separately charged probing pass to learn which genes matter, then biases its
mutations toward them. NTBEA never trusts a single sample: every evaluation
feeds an n-tuple bandit model, moves follow model UCB, and the recommendation
is the model's best mean, not the luckiest draw.

All three consume exactly n_evals evaluator calls; B-RMHC's probing budget is
reported separately on the trace.
"""

from __future__ import annotations

import math
import statistics
from dataclasses import dataclass
from random import Random
from typing import Callable, Mapping, Sequence

from .params import (
    CELL_GENES, GRID_GENE, Genome, SearchSpace, mutate, neighbours,
    random_genome,
)

Evaluator = Callable[[Genome], float]


@dataclass(frozen=True)
class TraceRecord:
    eval_index: int
    genome: Genome
    fitness: float
    best_so_far: float


@dataclass
class EvolutionTrace:
    algo: str
    records: list[TraceRecord]
    final_genome: Genome
    preprocess_evals: int = 0


# --- random-mutation hill climber -------------------------------------------


def _hill_climb(space: SearchSpace, evaluator: Evaluator, n_evals: int,
                rng: Random, algo: str,
                pick_gene: Callable[[Genome], int] | None = None,
                resample_parent: bool = False,
                preprocess_evals: int = 0) -> EvolutionTrace:
    """Shared body of RMHC and B-RMHC; only gene selection differs.

    Acceptance on >=: a tie replaces the incumbent with the offspring. The
    first call evaluates the random start, so the loop runs n_evals - 1 times
    (or consumes two calls per iteration when resample_parent is on).
    """
    assert n_evals >= 1
    genome = random_genome(space, rng)
    best = evaluator(genome)
    records = [TraceRecord(0, genome, best, best)]
    used = 1
    while used < n_evals:
        if resample_parent:
            best = evaluator(genome)
            records.append(TraceRecord(used, genome, best, best))
            used += 1
            if used >= n_evals:
                break
        gene = pick_gene(genome) if pick_gene else None
        cand = mutate(genome, space, rng, gene=gene)
        f = evaluator(cand)
        if f >= best:
            genome = cand
            best = f
        records.append(TraceRecord(used, cand, f, best))
        used += 1
    return EvolutionTrace(algo=algo, records=records, final_genome=genome,
                          preprocess_evals=preprocess_evals)


def rmhc_run(space: SearchSpace, evaluator: Evaluator, n_evals: int,
             rng: Random, resample_parent: bool = False) -> EvolutionTrace:
    return _hill_climb(space, evaluator, n_evals, rng, "rmhc",
                       resample_parent=resample_parent)


# --- biased-mutation hill climber -------------------------------------------


@dataclass
class ImportanceTables:
    """Probing results: per-gene spread, and per-grid-size cell deltas."""

    scalar: dict[int, float]
    cells: dict[int, dict[int, float]]   # grid size -> cell offset -> off-minus-on
    evals_used: int = 0


def brmhc_preprocess(space: SearchSpace, evaluator: Evaluator,
                     rng: Random) -> ImportanceTables:
    """Probe every gene's fitness influence.

    Scalar genes: fix a fresh random context, evaluate once per level, record
    the sample SD. Cell genes: per grid size 1..4, evaluate the all-off
    context once, then each cell alone, recording off-minus-on deltas. Costs
    sum(arity) over scalar genes plus sum(1 + g^2) over grid sizes.
    """
    calls = 0
    scalar: dict[int, float] = {}
    cell_genes = set(CELL_GENES)
    for g in range(space.n_genes):
        if g in cell_genes:
            continue
        context = random_genome(space, rng)
        probes = []
        for lvl in range(space.arity(g)):
            probes.append(evaluator(context.replace(g, lvl)))
            calls += 1
        scalar[g] = statistics.stdev(probes) if len(probes) > 1 else 0.0

    cells: dict[int, dict[int, float]] = {}
    grid_values = space.genes[GRID_GENE].values
    for grid_size in grid_values:
        context = random_genome(space, rng).replace(GRID_GENE,
                                                    grid_values.index(grid_size))
        for cg in CELL_GENES:
            context = context.replace(cg, 0)
        fitness_off = evaluator(context)
        calls += 1
        table: dict[int, float] = {}
        for offset in range(grid_size * grid_size):
            f_on = evaluator(context.replace(CELL_GENES[0] + offset, 1))
            calls += 1
            table[offset] = fitness_off - f_on
        cells[grid_size] = table
    return ImportanceTables(scalar=scalar, cells=cells, evals_used=calls)


def expected_preprocess_evals(space: SearchSpace) -> int:
    """Probing cost: sum of scalar-gene arities plus sum(1 + g^2) per grid size."""
    cell_genes = set(CELL_GENES)
    scalar_cost = sum(space.arity(g) for g in range(space.n_genes)
                      if g not in cell_genes)
    grid_cost = sum(1 + g * g for g in space.genes[GRID_GENE].values)
    return scalar_cost + grid_cost


def softmax_select(weights: Mapping[int, float], temperature: float,
                   rng: Random) -> int:
    """Sample a key with probability proportional to exp(weight / temperature)."""
    assert temperature > 0.0
    keys = list(weights.keys())
    vals = [weights[k] for k in keys]
    top = max(vals)
    probs = [math.exp((v - top) / temperature) for v in vals]
    total = sum(probs)
    r = rng.random() * total
    acc = 0.0
    for k, p in zip(keys, probs):
        acc += p
        if r < acc:
            return k
    return keys[-1]


def combined_importances(genome: Genome, space: SearchSpace,
                         tables: ImportanceTables,
                         cell_weight: str = "abs") -> dict[int, float]:
    """One weight per gene for mutation biasing.

    Cell genes read the delta table for the genome's current grid size
    (unexpressed cells weigh 0) and are rescaled so their largest magnitude
    matches the largest scalar importance. cell_weight "abs" folds the delta
    sign away; "raw" keeps it.
    """
    weights = dict(tables.scalar)
    grid_size = space.genes[GRID_GENE].values[genome.levels[GRID_GENE]]
    deltas = tables.cells.get(grid_size, {})
    magnitudes = [abs(d) for d in deltas.values()]
    max_cell = max(magnitudes) if magnitudes else 0.0
    max_scalar = max(weights.values()) if weights else 0.0
    scale = (max_scalar / max_cell) if max_cell > 0 else 0.0
    for offset, cg in enumerate(CELL_GENES):
        d = deltas.get(offset, 0.0)
        w = abs(d) if cell_weight == "abs" else d
        weights[cg] = w * scale
    return weights


def brmhc_run(space: SearchSpace, evaluator: Evaluator,
              tables: ImportanceTables, n_evals: int, rng: Random,
              tau: float | None = None, cell_weight: str = "abs",
              resample_parent: bool = False) -> EvolutionTrace:
    """Hill climb with the mutated gene drawn by softmax over importances.

    tau defaults to a third of the current maximum importance; with a flat or
    all-zero table the draw degrades to uniform.
    """

    def pick_gene(genome: Genome) -> int:
        weights = combined_importances(genome, space, tables, cell_weight)
        t = tau
        if t is None:
            top = max(weights.values())
            t = top / 3.0 if top > 0 else 1.0
        return softmax_select(weights, t, rng)

    return _hill_climb(space, evaluator, n_evals, rng, "brmhc",
                       pick_gene=pick_gene, resample_parent=resample_parent,
                       preprocess_evals=tables.evals_used)


# --- n-tuple bandit EA -------------------------------------------------------


class NTupleModel:
    """Streaming fitness statistics over gene subsets.

    Default shape: every singleton gene plus the full genome tuple. Each table
    entry keeps (n, sum, sum of squares) for one observed pattern, so means,
    SDs and standard errors fall out without storing samples.
    """

    def __init__(self, space: SearchSpace,
                 tuples: Sequence[Sequence[int]] | None = None):
        if tuples is None:
            tuples = [(g,) for g in range(space.n_genes)] + [tuple(range(space.n_genes))]
        self.tuples: tuple[tuple[int, ...], ...] = tuple(tuple(t) for t in tuples)
        for t in self.tuples:
            assert len(t) > 0 and all(0 <= g < space.n_genes for g in t)
        self.tables: list[dict[tuple[int, ...], list[float]]] = [
            {} for _ in self.tuples
        ]
        self.n_genes = space.n_genes
        self.total_samples = 0
        self.value_sum = 0.0

    def _key(self, tup: tuple[int, ...], genome: Genome) -> tuple[int, ...]:
        if len(tup) == self.n_genes:
            return genome.levels
        return tuple(genome.levels[g] for g in tup)

    def add(self, genome: Genome, value: float) -> None:
        value = float(value)
        for tup, table in zip(self.tuples, self.tables):
            key = self._key(tup, genome)
            entry = table.get(key)
            if entry is None:
                table[key] = [1, value, value * value]
            else:
                entry[0] += 1
                entry[1] += value
                entry[2] += value * value
        self.total_samples += 1
        self.value_sum += value

    def entry_stats(self, tuple_index: int,
                    key: tuple[int, ...]) -> tuple[int, float, float]:
        """(n, mean, sample SD) for one pattern; n = 0 when never seen."""
        entry = self.tables[tuple_index].get(key)
        if entry is None:
            return 0, 0.0, 0.0
        n, s, sq = entry
        mean = s / n
        if n < 2:
            return n, mean, 0.0
        var = (sq - s * s / n) / (n - 1)
        return n, mean, math.sqrt(max(var, 0.0))

    def ucb(self, genome: Genome, c: float) -> float:
        """Mean of per-tuple UCB terms; the bandit value of a genome.

        Patterns never seen borrow the global mean and count as half a visit,
        which keeps them attractive without dominating everything.
        """
        assert self.total_samples >= 1
        log_n = math.log(self.total_samples)
        if log_n < 0.0:
            log_n = 0.0
        global_mean = self.value_sum / self.total_samples
        total = 0.0
        for tup, table in zip(self.tuples, self.tables):
            entry = table.get(self._key(tup, genome))
            if entry is None:
                total += global_mean + c * math.sqrt(log_n / 0.5)
            else:
                total += entry[1] / entry[0] + c * math.sqrt(log_n / entry[0])
        return total / len(self.tuples)

    def mean_estimate(self, genome: Genome) -> float:
        return self.ucb(genome, 0.0)

    def dump(self) -> str:
        """Readable table dump for offline inspection."""
        lines = []
        for tup, table in zip(self.tuples, self.tables):
            lines.append(f"tuple {tup}: {len(table)} patterns")
            for key in sorted(table.keys()):
                n, s, sq = table[key]
                lines.append(f"  {key} n={n} mean={s / n!r} sumsq={sq!r}")
        lines.append(f"totalSamples={self.total_samples}")
        return "\n".join(lines) + "\n"


def ntbea_run(space: SearchSpace, evaluator: Evaluator, n_evals: int,
              rng: Random, k: int = 30, c: float = 1.0,
              model: NTupleModel | None = None,
              ) -> tuple[EvolutionTrace, NTupleModel]:
    """N-tuple bandit evolutionary algorithm.

    Loop: evaluate the current genome once, absorb the sample into the model,
    then jump to the model-UCB argmax among k fresh Hamming-1 neighbours (ties
    broken at random). Recommendation: the highest model mean over everything
    evaluated plus the final neighbour set.
    """
    assert n_evals >= 1
    if model is None:
        model = NTupleModel(space)
    current = random_genome(space, rng)
    records: list[TraceRecord] = []
    best_so_far = -math.inf
    seen: dict[Genome, None] = {}
    last_neighbourhood: list[Genome] = []
    for i in range(n_evals):
        f = evaluator(current)
        model.add(current, f)
        seen.setdefault(current)
        if f > best_so_far:
            best_so_far = f
        records.append(TraceRecord(i, current, f, best_so_far))
        last_neighbourhood = neighbours(current, space, k, rng)
        best_v = -math.inf
        best_set: list[Genome] = []
        for cand in last_neighbourhood:
            v = model.ucb(cand, c)
            if v > best_v:
                best_v = v
                best_set = [cand]
            elif v == best_v:
                best_set.append(cand)
        current = best_set[0] if len(best_set) == 1 else rng.choice(best_set)

    candidates = dict(seen)
    for cand in last_neighbourhood:
        candidates.setdefault(cand)
    recommendation = max(candidates, key=model.mean_estimate)
    trace = EvolutionTrace(algo="ntbea", records=records,
                           final_genome=recommendation)
    return trace, model

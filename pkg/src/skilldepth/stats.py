"""Re-evaluation and rank statistics for noisy results.

Final genomes get n fresh seeded evaluations; comparisons between algorithms
use the Mann-Whitney U test, exact by enumeration for small samples and a
tie-corrected normal approximation above that. No distributional assumptions
on fitness anywhere.
"""

from __future__ import annotations

import math
import statistics
from dataclasses import dataclass
from itertools import combinations
from typing import Callable, Iterable, Sequence

from .params import Genome
from .seeds import derive_seed

EXACT_LIMIT = 8   # exact enumeration when both samples are at most this size


@dataclass(frozen=True)
class ReevaluationSummary:
    genome: Genome
    n: int
    mean: float
    stderr: float
    samples: tuple[float, ...]


def reevaluate(genome: Genome, sampler: Callable[[Genome, int], float],
               n: int, seed_base: int) -> ReevaluationSummary:
    """n independent seeded fitness samples; stderr uses the n-1 denominator."""
    assert n >= 1
    samples = tuple(sampler(genome, derive_seed(seed_base, i)) for i in range(n))
    mean = statistics.fmean(samples)
    stderr = statistics.stdev(samples) / math.sqrt(n) if n > 1 else 0.0
    return ReevaluationSummary(genome=genome, n=n, mean=mean, stderr=stderr,
                               samples=samples)


@dataclass(frozen=True)
class MannWhitneyResult:
    u: float
    p_two_tailed: float
    degenerate: bool = False


def _midranks(pooled: Sequence[float]) -> list[float]:
    """Ranks 1..n with ties sharing their average rank."""
    order = sorted(range(len(pooled)), key=lambda i: pooled[i])
    ranks = [0.0] * len(pooled)
    i = 0
    while i < len(order):
        j = i
        while j + 1 < len(order) and pooled[order[j + 1]] == pooled[order[i]]:
            j += 1
        mid = (i + j) / 2.0 + 1.0
        for idx in order[i:j + 1]:
            ranks[idx] = mid
        i = j + 1
    return ranks


def mann_whitney_u(a: Sequence[float], b: Sequence[float]) -> MannWhitneyResult:
    """Two-tailed Mann-Whitney U.

    U is the statistic for sample a (so u(a,b) + u(b,a) = |a|*|b|). Both
    samples identical constants is degenerate: p = 1 with the flag set. Exact
    route enumerates every rank split when both sides have at most
    EXACT_LIMIT observations; otherwise a normal approximation with tie and
    continuity corrections.
    """
    n1, n2 = len(a), len(b)
    assert n1 >= 1 and n2 >= 1
    pooled = list(a) + list(b)
    mu = n1 * n2 / 2.0
    if all(v == pooled[0] for v in pooled):
        return MannWhitneyResult(u=mu, p_two_tailed=1.0, degenerate=True)

    ranks = _midranks(pooled)
    r1 = sum(ranks[:n1])
    u = r1 - n1 * (n1 + 1) / 2.0

    if n1 <= EXACT_LIMIT and n2 <= EXACT_LIMIT:
        # Permutation distribution of U over all rank splits. Midranks are
        # exact binary halves, so the comparisons below are exact.
        observed_dev = abs(u - mu)
        offset = n1 * (n1 + 1) / 2.0
        hits = 0
        total = 0
        for split in combinations(ranks, n1):
            u_split = sum(split) - offset
            if abs(u_split - mu) >= observed_dev:
                hits += 1
            total += 1
        return MannWhitneyResult(u=u, p_two_tailed=hits / total)

    n = n1 + n2
    tie_term = 0.0
    seen: dict[float, int] = {}
    for v in pooled:
        seen[v] = seen.get(v, 0) + 1
    for count in seen.values():
        if count > 1:
            tie_term += count ** 3 - count
    var = n1 * n2 / 12.0 * ((n + 1) - tie_term / (n * (n - 1)))
    if var <= 0.0:
        return MannWhitneyResult(u=u, p_two_tailed=1.0, degenerate=True)
    z = (abs(u - mu) - 0.5) / math.sqrt(var)
    if z < 0.0:
        z = 0.0
    p = math.erfc(z / math.sqrt(2.0))
    return MannWhitneyResult(u=u, p_two_tailed=min(p, 1.0))


def sort_and_tabulate(entries: Iterable[tuple]) -> tuple[list[tuple], dict[str, list[tuple]]]:
    """Order (algo, trial, mean, stderr, n, genome) rows ascending by mean.

    Also groups a per-algorithm series of (rank, mean, stderr) rows, ready for
    an errorbar plot. Sorting is stable, so equal means keep input order.
    """
    ordered = sorted(entries, key=lambda e: e[2])
    series: dict[str, list[tuple]] = {}
    for rank, e in enumerate(ordered):
        series.setdefault(e[0], []).append((rank, e[2], e[3]))
    return ordered, series

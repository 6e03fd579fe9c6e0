"""Discrete search space over the game's rule parameters.

A genome is a vector of 30 level indices, one per gene. Genes own their value
lists, so everything downstream works in index space and only decode() maps
back to game values.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from random import Random
from typing import Iterator, Sequence

N_GENES = 30
GRID_GENE = 4        # index of the grid-size gene
CELL_GENES = range(5, 21)   # the 16 black-hole cell flags, row-major
ENEMY_GENE = 29


@dataclass(frozen=True)
class GeneSpec:
    name: str
    values: tuple[int, ...]

    @property
    def arity(self) -> int:
        return len(self.values)


def _span(lo: int, hi: int, step: int = 1) -> tuple[int, ...]:
    return tuple(range(lo, hi + 1, step))


def default_search_space() -> "SearchSpace":
    genes: list[GeneSpec] = [
        GeneSpec("MISSILE_MAX_SPEED", _span(1, 10)),
        GeneSpec("MISSILE_COOLDOWN", _span(1, 9)),
        GeneSpec("MISSILE_RADIUS", _span(2, 10, 2)),
        GeneSpec("MISSILE_MAX_TTL", _span(40, 160, 20)),
        GeneSpec("GRID_SIZE", _span(1, 4)),
    ]
    for row in range(1, 5):
        for col in range(1, 5):
            genes.append(GeneSpec(f"BLACKHOLE_CELL({row},{col})", (0, 1)))
    genes += [
        GeneSpec("BLACKHOLE_RADIUS", _span(25, 200, 25)),
        GeneSpec("BLACKHOLE_FORCE", _span(0, 3)),
        GeneSpec("BLACKHOLE_PENALTY", _span(0, 9)),
        GeneSpec("SAFE_ZONE", _span(0, 20, 10)),
        GeneSpec("BOMB_RADIUS", _span(10, 50, 10)),
        GeneSpec("MISSILE_TYPE", _span(0, 2)),
        GeneSpec("RESOURCE_TTL", _span(400, 600, 100)),
        GeneSpec("RESOURCE_COOLDOWN", _span(200, 300, 50)),
        GeneSpec("ENEMY_ID", _span(0, 5)),
    ]
    return SearchSpace(tuple(genes))


@dataclass(frozen=True)
class SearchSpace:
    """An ordered list of genes. The default space has 30; tests use smaller ones."""

    genes: tuple[GeneSpec, ...]

    @property
    def n_genes(self) -> int:
        return len(self.genes)

    @property
    def arities(self) -> tuple[int, ...]:
        return tuple(g.arity for g in self.genes)

    def arity(self, gene: int) -> int:
        return self.genes[gene].arity

    def size(self) -> int:
        """Number of distinct genomes in the space."""
        return math.prod(self.arities)

    def neighbourhood_size(self) -> int:
        """How many genomes sit at Hamming distance 1 from any point."""
        return sum(a - 1 for a in self.arities)


@dataclass(frozen=True)
class Genome:
    levels: tuple[int, ...]

    def validate(self, space: SearchSpace) -> None:
        if len(self.levels) != space.n_genes:
            raise ValueError(f"genome has {len(self.levels)} genes, space has {space.n_genes}")
        for g, (lvl, arity) in enumerate(zip(self.levels, space.arities)):
            if not 0 <= lvl < arity:
                raise ValueError(f"gene {g}: level {lvl} outside 0..{arity - 1}")

    def replace(self, gene: int, level: int) -> "Genome":
        lv = list(self.levels)
        lv[gene] = level
        return Genome(tuple(lv))

    def to_line(self) -> str:
        return ",".join(str(v) for v in self.levels)

    @classmethod
    def from_line(cls, line: str) -> "Genome":
        return cls(tuple(int(tok) for tok in line.strip().split(",")))


@dataclass(frozen=True)
class GameParams:
    """Decoded rule set: actual values, not level indices."""

    missile_max_speed: int
    missile_cooldown: int
    missile_radius: int
    missile_max_ttl: int
    grid_size: int
    blackhole_cells: tuple[int, ...]
    blackhole_radius: int
    blackhole_force: int
    blackhole_penalty: int
    safe_zone: int
    bomb_radius: int
    missile_type: int          # 0 normal, 1 twin, 2 bomb
    resource_ttl: int
    resource_cooldown: int
    enemy_id: int

    def expressed_cells(self) -> tuple[int, ...]:
        """Flags for the grid_size^2 cells that actually spawn black holes."""
        return self.blackhole_cells[: self.grid_size * self.grid_size]

    def to_text(self, space: SearchSpace) -> str:
        lines = []
        values = self._value_list()
        for gene, value in zip(space.genes, values):
            lines.append(f"{gene.name}={value}")
        return "\n".join(lines) + "\n"

    def _value_list(self) -> list[int]:
        return (
            [
                self.missile_max_speed,
                self.missile_cooldown,
                self.missile_radius,
                self.missile_max_ttl,
                self.grid_size,
            ]
            + list(self.blackhole_cells)
            + [
                self.blackhole_radius,
                self.blackhole_force,
                self.blackhole_penalty,
                self.safe_zone,
                self.bomb_radius,
                self.missile_type,
                self.resource_ttl,
                self.resource_cooldown,
                self.enemy_id,
            ]
        )


MISSILE_NORMAL, MISSILE_TWIN, MISSILE_BOMB = 0, 1, 2


def decode(genome: Genome, space: SearchSpace) -> GameParams:
    genome.validate(space)
    vals = [space.genes[g].values[lvl] for g, lvl in enumerate(genome.levels)]
    return GameParams(
        missile_max_speed=vals[0],
        missile_cooldown=vals[1],
        missile_radius=vals[2],
        missile_max_ttl=vals[3],
        grid_size=vals[4],
        blackhole_cells=tuple(vals[5:21]),
        blackhole_radius=vals[21],
        blackhole_force=vals[22],
        blackhole_penalty=vals[23],
        safe_zone=vals[24],
        bomb_radius=vals[25],
        missile_type=vals[26],
        resource_ttl=vals[27],
        resource_cooldown=vals[28],
        enemy_id=vals[29],
    )


def encode(params_values: Sequence[int], space: SearchSpace) -> Genome:
    """Inverse of decode for a flat list of game values in gene order."""
    levels = []
    for gene, value in zip(space.genes, params_values):
        try:
            levels.append(gene.values.index(value))
        except ValueError:
            raise ValueError(f"{gene.name}: {value} not a legal value") from None
    return Genome(tuple(levels))


def random_genome(space: SearchSpace, rng: Random) -> Genome:
    return Genome(tuple(rng.randrange(a) for a in space.arities))


def mutate(genome: Genome, space: SearchSpace, rng: Random, gene: int | None = None) -> Genome:
    """Return a copy with one gene set to a different, uniformly chosen level.

    The gene is picked uniformly unless forced via `gene`. The input genome is
    never modified. Unexpressed black-hole cells are legal targets; such a
    mutation is neutral in play but still moves the genome.
    """
    if gene is None:
        gene = rng.randrange(space.n_genes)
    arity = space.arity(gene)
    assert arity > 1, f"gene {gene} has a single level and cannot mutate"
    shift = rng.randrange(arity - 1)
    new_level = (genome.levels[gene] + 1 + shift) % arity
    return genome.replace(gene, new_level)


def iter_neighbourhood(genome: Genome, space: SearchSpace) -> Iterator[Genome]:
    """All genomes at Hamming distance exactly 1, in gene-then-level order."""
    for g, arity in enumerate(space.arities):
        own = genome.levels[g]
        for lvl in range(arity):
            if lvl != own:
                yield genome.replace(g, lvl)


def neighbours(genome: Genome, space: SearchSpace, k: int, rng: Random) -> list[Genome]:
    """Up to k distinct neighbours at Hamming distance 1.

    If k covers the whole 1-neighbourhood the full set is returned; otherwise a
    uniform sample without replacement.
    """
    assert k >= 1
    pool = list(iter_neighbourhood(genome, space))
    if k >= len(pool):
        return pool
    return rng.sample(pool, k)

"""Experiment configuration: one flat key=value namespace.

Every knob lives in a single dotted-key table, settable from a config file
(`key = value` lines, # comments) or from the command line, so any run is
reproducible from its echoed config alone.
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace

from .agents import AgentBudgets
from .fitness import SIDE_BOTH, SIDE_SKILL_FIRST, SIDE_SKILL_SECOND
from .game import WorldConfig

ALL_ALGORITHMS = ("rmhc", "brmhc", "ntbea")


@dataclass
class ExperimentConfig:
    algorithms: tuple[str, ...] = ALL_ALGORITHMS
    trials: int = 50
    n_evals: int = 100
    reeval_n: int = 100
    base_seed: int = 0
    out_dir: str = "results"
    workers: int = 1
    side_mode: str = SIDE_SKILL_FIRST
    world: WorldConfig = field(default_factory=WorldConfig)
    budgets: AgentBudgets = field(default_factory=AgentBudgets)
    ntbea_k: int = 30
    ntbea_c: float = 1.0
    brmhc_tau: float | None = None
    brmhc_cell_weight: str = "abs"
    rmhc_resample_parent: bool = False


def _parse_bool(raw: str) -> bool:
    low = raw.strip().lower()
    if low in ("1", "true", "yes", "on"):
        return True
    if low in ("0", "false", "no", "off"):
        return False
    raise ValueError(f"not a boolean: {raw!r}")


def _parse_algorithms(raw: str) -> tuple[str, ...]:
    names = tuple(tok.strip() for tok in raw.split(",") if tok.strip())
    if raw.strip() == "all":
        return ALL_ALGORITHMS
    for name in names:
        if name not in ALL_ALGORITHMS:
            raise ValueError(f"unknown algorithm {name!r}")
    if not names:
        raise ValueError("empty algorithm list")
    return names


def _parse_side(raw: str) -> str:
    if raw not in (SIDE_SKILL_FIRST, SIDE_SKILL_SECOND, SIDE_BOTH):
        raise ValueError(f"unknown side mode {raw!r}")
    return raw


def _parse_tau(raw: str) -> float | None:
    if raw.strip() in ("", "auto", "none"):
        return None
    return float(raw)


# key -> (config attribute, parser). World and budget keys are nested via the
# "world."/"mcts."/"mea." prefixes below.
_TOP_KEYS = {
    "algorithms": ("algorithms", _parse_algorithms),
    "trials": ("trials", int),
    "evals": ("n_evals", int),
    "reeval": ("reeval_n", int),
    "seed": ("base_seed", int),
    "out": ("out_dir", str),
    "workers": ("workers", int),
    "sideMode": ("side_mode", _parse_side),
    "ntbea.k": ("ntbea_k", int),
    "ntbea.c": ("ntbea_c", float),
    "brmhc.tau": ("brmhc_tau", _parse_tau),
    "brmhc.cellWeight": ("brmhc_cell_weight", str),
    "rmhc.resampleParent": ("rmhc_resample_parent", _parse_bool),
}

_WORLD_KEYS = {
    "world.width": ("width", float),
    "world.height": ("height", float),
    "world.maxTicks": ("max_ticks", int),
    "world.startLives": ("start_lives", int),
    "world.startMissiles": ("start_missiles", int),
    "world.winBonus": ("win_bonus", int),
    "world.scoreDivisor": ("score_divisor", int),
    "world.hitScore": ("hit_score", int),
    "world.rotationRate": ("rotation_rate", float),
    "world.thrustAccel": ("thrust_accel", float),
    "world.friction": ("friction", float),
    "world.shipRadius": ("ship_radius", float),
    "world.resourceRadius": ("resource_radius", float),
    "world.packSize": ("pack_size", int),
    "world.pullScale": ("pull_scale", float),
    "world.safeZoneAtCenter": ("safe_zone_at_center", _parse_bool),
}

_BUDGET_KEYS = {
    "mcts.iterations": ("mcts_iterations", int),
    "mcts.rolloutDepth": ("mcts_rollout_depth", int),
    "mcts.c": ("mcts_c", float),
    "mea.popSize": ("mea_pop_size", int),
    "mea.seqLength": ("mea_seq_length", int),
    "mea.evals": ("mea_evals", int),
}

KNOWN_KEYS = tuple(sorted({**_TOP_KEYS, **_WORLD_KEYS, **_BUDGET_KEYS}))


def apply_setting(cfg: ExperimentConfig, key: str, raw: str) -> None:
    if key in _TOP_KEYS:
        attr, parser = _TOP_KEYS[key]
        setattr(cfg, attr, parser(raw))
    elif key in _WORLD_KEYS:
        attr, parser = _WORLD_KEYS[key]
        cfg.world = replace(cfg.world, **{attr: parser(raw)})
    elif key in _BUDGET_KEYS:
        attr, parser = _BUDGET_KEYS[key]
        cfg.budgets = replace(cfg.budgets, **{attr: parser(raw)})
    else:
        raise KeyError(f"unknown config key {key!r}")


def parse_config_lines(lines) -> list[tuple[str, str]]:
    pairs = []
    for lineno, line in enumerate(lines, start=1):
        body = line.split("#", 1)[0].strip()
        if not body:
            continue
        if "=" not in body:
            raise ValueError(f"line {lineno}: expected key=value, got {line!r}")
        key, value = body.split("=", 1)
        pairs.append((key.strip(), value.strip()))
    return pairs


def load_config_file(path: str, cfg: ExperimentConfig) -> None:
    with open(path, encoding="utf8") as fh:
        for key, value in parse_config_lines(fh):
            apply_setting(cfg, key, value)


def _format_value(value) -> str:
    if isinstance(value, bool):
        return "true" if value else "false"
    if value is None:
        return "auto"
    if isinstance(value, tuple):
        return ",".join(str(v) for v in value)
    return repr(value) if isinstance(value, float) else str(value)


def config_to_text(cfg: ExperimentConfig) -> str:
    """Canonical echo of every key; reapplying it reproduces the config."""
    out = []
    for key in KNOWN_KEYS:
        if key in _TOP_KEYS:
            attr, _ = _TOP_KEYS[key]
            value = getattr(cfg, attr)
        elif key in _WORLD_KEYS:
            attr, _ = _WORLD_KEYS[key]
            value = getattr(cfg.world, attr)
        else:
            attr, _ = _BUDGET_KEYS[key]
            value = getattr(cfg.budgets, attr)
        out.append(f"{key}={_format_value(value)}")
    return "\n".join(out) + "\n"

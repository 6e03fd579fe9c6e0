"""Config parsing, canonical echo, and the flat key table."""

import pytest

from skilldepth.config import (
    ALL_ALGORITHMS, ExperimentConfig, KNOWN_KEYS, apply_setting,
    config_to_text, load_config_file, parse_config_lines,
)


def test_defaults():
    cfg = ExperimentConfig()
    assert cfg.algorithms == ("rmhc", "brmhc", "ntbea")
    assert (cfg.trials, cfg.n_evals, cfg.reeval_n) == (50, 100, 100)
    assert (cfg.base_seed, cfg.workers) == (0, 1)
    assert cfg.out_dir == "results"
    assert cfg.side_mode == "skill_first"
    assert (cfg.ntbea_k, cfg.ntbea_c) == (30, 1.0)
    assert cfg.brmhc_tau is None
    assert cfg.brmhc_cell_weight == "abs"
    assert cfg.rmhc_resample_parent is False


def test_apply_setting_each_namespace():
    cfg = ExperimentConfig()
    apply_setting(cfg, "trials", "7")
    apply_setting(cfg, "world.maxTicks", "123")
    apply_setting(cfg, "mcts.iterations", "44")
    apply_setting(cfg, "mea.popSize", "3")
    assert cfg.trials == 7
    assert cfg.world.max_ticks == 123
    assert cfg.budgets.mcts_iterations == 44
    assert cfg.budgets.mea_pop_size == 3


def test_apply_setting_rejects_unknown_key():
    with pytest.raises(KeyError):
        apply_setting(ExperimentConfig(), "world.gravity", "1")


def test_apply_setting_rejects_bad_value():
    with pytest.raises(ValueError):
        apply_setting(ExperimentConfig(), "trials", "many")
    with pytest.raises(ValueError):
        apply_setting(ExperimentConfig(), "sideMode", "sideways")
    with pytest.raises(ValueError):
        apply_setting(ExperimentConfig(), "world.safeZoneAtCenter", "maybe")


def test_algorithm_list_parsing():
    cfg = ExperimentConfig()
    apply_setting(cfg, "algorithms", "ntbea")
    assert cfg.algorithms == ("ntbea",)
    apply_setting(cfg, "algorithms", "rmhc, ntbea")
    assert cfg.algorithms == ("rmhc", "ntbea")
    apply_setting(cfg, "algorithms", "all")
    assert cfg.algorithms == ALL_ALGORITHMS
    with pytest.raises(ValueError):
        apply_setting(cfg, "algorithms", "cmaes")
    with pytest.raises(ValueError):
        apply_setting(cfg, "algorithms", " , ")


def test_tau_accepts_auto_and_numbers():
    cfg = ExperimentConfig()
    apply_setting(cfg, "brmhc.tau", "0.5")
    assert cfg.brmhc_tau == 0.5
    apply_setting(cfg, "brmhc.tau", "auto")
    assert cfg.brmhc_tau is None
    apply_setting(cfg, "brmhc.tau", "none")
    assert cfg.brmhc_tau is None


def test_bool_spellings():
    cfg = ExperimentConfig()
    for raw, want in (("1", True), ("true", True), ("YES", True), ("on", True),
                      ("0", False), ("False", False), ("no", False),
                      ("off", False)):
        apply_setting(cfg, "rmhc.resampleParent", raw)
        assert cfg.rmhc_resample_parent is want, raw


def test_parse_config_lines():
    pairs = parse_config_lines([
        "# a comment",
        "",
        "trials = 3   # trailing comment",
        "world.width=200",
    ])
    assert pairs == [("trials", "3"), ("world.width", "200")]
    with pytest.raises(ValueError):
        parse_config_lines(["just words"])


def test_load_config_file(tmp_path):
    path = tmp_path / "run.cfg"
    path.write_text("trials=2\nworld.pullScale = 0.0\nmcts.iterations=9\n",
                    encoding="utf8")
    cfg = ExperimentConfig()
    load_config_file(str(path), cfg)
    assert cfg.trials == 2
    assert cfg.world.pull_scale == 0.0
    assert cfg.budgets.mcts_iterations == 9


def test_echo_round_trips_every_key():
    cfg = ExperimentConfig()
    apply_setting(cfg, "algorithms", "ntbea,rmhc")
    apply_setting(cfg, "world.width", "200")
    apply_setting(cfg, "world.safeZoneAtCenter", "false")
    apply_setting(cfg, "brmhc.tau", "1.5")
    apply_setting(cfg, "mea.evals", "40")
    text = config_to_text(cfg)

    rebuilt = ExperimentConfig()
    for key, value in parse_config_lines(text.splitlines()):
        apply_setting(rebuilt, key, value)
    assert rebuilt == cfg
    assert config_to_text(rebuilt) == text


def test_echo_covers_the_whole_key_table():
    text = config_to_text(ExperimentConfig())
    keys = [line.split("=", 1)[0] for line in text.strip().splitlines()]
    assert keys == sorted(keys)
    assert tuple(keys) == KNOWN_KEYS
    assert "brmhc.tau=auto" in text
    assert "world.safeZoneAtCenter=true" in text

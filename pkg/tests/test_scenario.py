import math
import random
from pathlib import Path

import pytest

from mcsim.scenario import (CONFIG_SCHEMA, CellGeometry, ConfigError,
                            ScenarioConfig, drop_ues, load_config, run_scenario,
                            run_single)


# --- configuration ----------------------------------------------------------

def test_defaults_reproduce_headline_parameters(tmp_path):
    empty = tmp_path / "empty.cfg"
    empty.write_text("# nothing but a comment\n\n")
    cfg = load_config(empty)
    v = cfg.values
    assert v["mean_bitrate_mbps"] == 50.0
    assert v["fps"] == 60.0
    assert v["peak_to_average"] == 2.0
    assert v["d_qos_ms"] == 15.0
    assert v["flr_qos"] == 0.01
    assert v["fr1_carrier_ghz"] == 3.6
    assert v["fr1_bandwidth_mhz"] == 100.0
    assert v["fr2_carrier_ghz"] == 28.0
    assert v["fr2_bandwidth_mhz"] == 1000.0
    assert v["fr1_tx_power_dbm"] == 43.0 and v["fr2_tx_power_dbm"] == 43.0
    assert v["gnb_height_m"] == 10.0 and v["ue_height_m"] == 1.6
    assert v["cell_span_m"] == 133.0


def test_override_wins_over_file(tmp_path):
    f = tmp_path / "a.cfg"
    f.write_text("d_qos_ms = 12\n")
    cfg = load_config(f, overrides=["d_qos_ms=10"])
    assert cfg.values["d_qos_ms"] == 10.0


def test_unknown_key_error_names_the_key(tmp_path):
    f = tmp_path / "a.cfg"
    f.write_text("dqos_ms = 10\n")
    with pytest.raises(ConfigError, match="dqos_ms"):
        load_config(f)
    with pytest.raises(ConfigError, match="nope"):
        load_config(overrides=["nope=1"])


def test_out_of_range_values_rejected():
    with pytest.raises(ConfigError):
        load_config(overrides=["flr_qos=1.5"])
    with pytest.raises(ConfigError):
        load_config(overrides=["fps=-3"])
    with pytest.raises(ConfigError):
        load_config(overrides=["policy=schrodinger"])
    with pytest.raises(ConfigError):
        load_config(overrides=["d_retx_ms=20"])  # must stay below d_qos_ms


def test_policy_key_narrows_policy_list():
    cfg = load_config(overrides=["policy=dbtb"])
    assert cfg.active_policies() == ["dbtb"]
    cfg = load_config(overrides=["policies=single_fr1,dbtb"])
    assert cfg.active_policies() == ["single_fr1", "dbtb"]


def test_blockage_loss_accepts_inf():
    cfg = load_config(overrides=["blockage_loss_db=inf"])
    assert math.isinf(cfg.values["blockage_loss_db"])


def test_every_schema_key_round_trips_through_text():
    cfg = load_config()
    for key, value in cfg.items():
        assert key in CONFIG_SCHEMA
        assert value is not None


# --- cell geometry ----------------------------------------------------------

def test_drop_distances_within_span():
    geo = CellGeometry(133.0)
    rng = random.Random(1)
    distances = drop_ues(500, geo, rng)
    assert all(1.0 <= d <= 133.0 + 1e-9 for d in distances)


def test_drop_deterministic_per_seed():
    geo = CellGeometry(133.0)
    a = drop_ues(20, geo, random.Random(7))
    b = drop_ues(20, geo, random.Random(7))
    assert a == b
    c = drop_ues(20, geo, random.Random(8))
    assert a != c


def test_hexagon_contains_vertices_not_outside():
    geo = CellGeometry(133.0)
    a = geo.side
    assert geo.contains(0.0, 0.0)          # the gNB vertex
    assert geo.contains(2 * a - 1e-6, 0.0)  # near the opposite vertex
    assert geo.contains(a, a * math.sqrt(3) / 2 - 1e-6)
    assert not geo.contains(-1.0, 0.0)
    assert not geo.contains(a, a)  # above the top edge


def test_fixed_distance_mode_places_exactly():
    cfg = load_config(overrides=["sim_time_s=1", "warmup_ms=100"])
    res, _ = run_single(cfg, "single_ue_distance_sweep", "single_fr1", 87.0, 1)
    assert res.point == 87.0
    assert len(res.ue_stats) == 1


# --- sweep outputs ----------------------------------------------------------

SMALL = ["sim_time_s=1.5", "warmup_ms=100", "runs=3",
         "distances_m=50,110", "ue_counts=1,2",
         "policies=single_fr1,dbtb"]


def test_raw_csv_row_count_and_completeness(tmp_path):
    cfg = load_config(overrides=SMALL)
    paths = run_scenario(cfg, "single_ue_distance_sweep", tmp_path)
    lines = [l for l in paths["raw"].read_text().splitlines()
             if l and not l.startswith("#")]
    header, rows = lines[0], lines[1:]
    assert header.startswith("scenario,policy,point,seed,ue_id")
    assert len(rows) == 2 * 2 * 3  # policies x distances x seeds, one UE each
    combos = {tuple(r.split(",")[1:5]) for r in rows}
    assert len(combos) == len(rows)  # every (policy, point, seed, ue) once


def test_csv_carries_config_echo(tmp_path):
    cfg = load_config(overrides=SMALL)
    paths = run_scenario(cfg, "single_ue_distance_sweep", tmp_path)
    for kind in ("raw", "aggregate"):
        text = paths[kind].read_text()
        assert text.startswith("# mcsim ")
        assert "# d_qos_ms = 15.0" in text
        assert "# policies = single_fr1,dbtb" in text


def test_identical_invocations_byte_identical(tmp_path):
    cfg = load_config(overrides=SMALL)
    a = run_scenario(cfg, "single_ue_distance_sweep", tmp_path / "a")
    b = run_scenario(cfg, "single_ue_distance_sweep", tmp_path / "b")
    assert a["raw"].read_bytes() == b["raw"].read_bytes()
    assert a["aggregate"].read_bytes() == b["aggregate"].read_bytes()


def test_parallel_output_identical_to_serial(tmp_path):
    cfg = load_config(overrides=SMALL)
    a = run_scenario(cfg, "multi_ue_capacity_sweep", tmp_path / "serial",
                     parallel=1)
    b = run_scenario(cfg, "multi_ue_capacity_sweep", tmp_path / "par",
                     parallel=2)
    assert a["raw"].read_bytes() == b["raw"].read_bytes()
    assert a["aggregate"].read_bytes() == b["aggregate"].read_bytes()


def test_multi_ue_rows_have_one_row_per_ue(tmp_path):
    cfg = load_config(overrides=["sim_time_s=1.5", "warmup_ms=100", "runs=2",
                                 "ue_counts=3", "policies=single_fr1"])
    paths = run_scenario(cfg, "multi_ue_capacity_sweep", tmp_path)
    rows = [l for l in paths["raw"].read_text().splitlines()
            if l and not l.startswith("#")][1:]
    assert len(rows) == 2 * 3  # seeds x UEs
    ue_ids = sorted(int(r.split(",")[4]) for r in rows if r.split(",")[3] == "1")
    assert ue_ids == [0, 1, 2]


def test_same_seed_same_traffic_across_policies():
    # The traffic stream is keyed by (seed, ue), never by policy, so paired
    # policy comparisons see identical frame sequences.
    cfg = load_config(overrides=["sim_time_s=1.5", "warmup_ms=100"])
    a, _ = run_single(cfg, "single_ue_distance_sweep", "single_fr1", 50.0, 4)
    b, _ = run_single(cfg, "single_ue_distance_sweep", "dbtb", 50.0, 4)
    assert a.ue_stats[0].frames_generated == b.ue_stats[0].frames_generated


def test_freeze_drops_reuses_positions():
    cfg = load_config(overrides=["sim_time_s=1", "warmup_ms=100",
                                 "freeze_drops=true"])
    extras = []
    for seed in (1, 2):
        _, ex = run_single(cfg, "multi_ue_capacity_sweep", "single_fr1", 2, seed)
        extras.append(ex["blocked_fraction"].keys())
    # Same UE ids; positions are identical because the drop stream is frozen.
    cfg2 = load_config(overrides=["sim_time_s=1", "warmup_ms=100"])
    # Distances are not exposed directly; compare via a drop probe.
    from mcsim.engine import stream_seed
    g = CellGeometry(133.0)
    frozen = drop_ues(2, g, random.Random(stream_seed(1, ("drop",))))
    assert frozen == drop_ues(2, g, random.Random(stream_seed(1, ("drop",))))

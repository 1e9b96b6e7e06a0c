import csv
import math

import pytest

import swarmfredy as sf


def test_equations():
    assert sf.compute_tdbr(24, 3) == 6
    assert sf.compute_tdbr(320, 63) == 5
    assert sf.clamp_dbr(0) == 1
    assert sf.clamp_dbr(320) == 10
    assert sf.clamp_dbr(7, [2, 4, 8]) == 4
    assert sf.channel_occupancy(18, 6, 30) == 80.0
    assert sf.network_balance(2, [10, 10, 2]) == pytest.approx(64 / 3 / 6)
    assert sf.brac_decide([0, 0, 5, 7, 9, 10, 6, 5, 5, 0], 10) == 6
    assert sf.brac_decide([0] * 10, 4) == 4


def test_sdidi():
    assert sf.sdidi_classify(50, 50, 150) == "voter"
    assert sf.sdidi_classify(10, 50, 150) == "authority"
    assert sf.sdidi_classify(200, 50, 150) == "exile"
    assert sf.sdidi_probability(100, 50, 150) == 0.5


def test_errors_map_to_value_error():
    with pytest.raises(ValueError):
        sf.network_balance(5, [])
    with pytest.raises(sf.AllTies):
        sf.wilcoxon_signed_rank([1] * 6, [1] * 6)
    with pytest.raises(sf.ConfigParseError):
        sf.normalize_config("nope = 1")


def test_stats():
    r = sf.aligned_friedman(["A", "B", "C"], ["1", "2", "3"], [[10, 20, 30], [15, 18, 30], [5, 12, 13]])
    assert r["rank_sums"] == [6, 15, 24]
    assert r["ranking"][0][0] == "C"
    assert r["p_value"] == pytest.approx(math.exp(-r["statistic"] / 2))
    w = sf.wilcoxon_signed_rank(list(range(1, 11)), [0] * 10)
    assert w["p_greater"] == 1 / 1024
    d, p = sf.ks_normality([0.1, 0.4, 0.35, 0.8, 0.9, 0.2, 0.55])
    assert 0 <= d <= 1 and 0 <= p <= 1


def test_config_round_trip():
    text = sf.normalize_config("vehicle_count = 120\nstrategy = fredy(50,100)\n")
    assert "vehicle_count = 120" in text
    assert sf.normalize_config(text) == text
    assert "channel.alpha" in sf.config_keys()
    assert sf.validate_config(text) == []
    problems = sf.validate_config("channel.alpha = 1.2\nstrategy = fredy(100,100)\n")
    assert ("channel.alpha", "must lie in [0,1]") in problems
    assert ("sdidi", "d1 < d2 required") in problems


CFG = "road_length = 1000\nvehicle_count = 80\nsim_duration = 5\nstrategy = difra\n"


def test_run_replication_is_deterministic():
    a = sf.run_replication(CFG, seed=3, records=True)
    b = sf.run_replication(CFG, seed=3, records=True)
    assert a == b
    assert a["strategy"] == "SD"
    assert len(a["records"]) == 80 * 5
    assert 1 <= a["br"]["median"] <= 10
    with pytest.raises(sf.InvalidConfig):
        sf.run_replication("channel.alpha = 2\n")


def test_simulate_writes_outputs(tmp_path):
    cfg = CFG + "replications = 2\nexperiment.strategies = fredy(0,50); difra\n"
    assert sf.simulate(cfg, str(tmp_path), workers=2) == 0
    with open(tmp_path / "summary.csv") as f:
        rows = list(csv.reader(f))
    assert rows[0] == ["strategy", "vehicles", "replication", "median_br", "median_eta", "median_sigma", "adaptations"]
    assert len(rows) == 5
    assert (tmp_path / "manifest.json").exists()
    assert len(list((tmp_path / "records").iterdir())) == 4

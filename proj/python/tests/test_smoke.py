import os
from pathlib import Path

import pytest

import gresilience as g

SCENARIOS = Path(os.environ.get("GRESILIENCE_SCENARIO_DIR", Path(__file__).parents[2] / "scenarios"))


def test_reference_game():
    s = g.solve(0.8, 5, 2, 1, 3)
    assert s["A"] == pytest.approx(8.8)
    assert s["d"] == pytest.approx(1.0)
    assert s["psne"] == [("robot", "robot"), ("human", "human")]
    assert s["sigma_p1_a1"] == pytest.approx(0.5)
    assert s["sigma_p2_a1"] == pytest.approx(0.25)
    assert (s["payoff_p1"], s["payoff_p2"]) == pytest.approx((6.4, 1.6))


def test_bad_confidence_raises_domain_error():
    with pytest.raises(g.DomainError):
        g.solve(1.0, 5, 2, 1, 3)
    with pytest.raises(ValueError):
        g.solve(0.5, 5, 0, 1, 3)


def test_decide_is_seeded():
    a = g.decide(0.5, 0.5, 0.4, 0.3, 0.6, seed=9, n=2000)
    b = g.decide(0.5, 0.5, 0.4, 0.3, 0.6, seed=9, n=2000)
    assert a == b
    assert a["rationale"] == "game_sampled"
    freq = a["actions"].count("robot") / 2000
    assert abs(freq - a["p_robot"]) < 0.05
    assert g.decide(0.9, 0.5, 0.4, 0.3, 0.6)["actions"] == ["robot"]


def test_run_scenario_is_deterministic():
    path = str(SCENARIOS / "reference.json")
    a = g.run_scenario(path)
    b = g.run_scenario(path)
    assert a["events"] == b["events"]
    assert a["report_csv"] == b["report_csv"]
    r = a["report"]
    assert r["seed"] == 42
    assert r["objects_total"] == (
        a["discarded"] + r["robot_placed"] + r["human_placed"] + r["missed"] + a["in_flight"]
    )
    assert list(r) == g.report_csv_columns()


def test_policy_override_and_errors():
    path = str(SCENARIOS / "reference.json")
    r = g.run_scenario(path, seed=3, policy="always-human")["report"]
    assert r["policy"] == "always-human"
    assert r["robot_placed"] == 0
    with pytest.raises(g.ValidationError):
        g.run_scenario(path, policy="coin")
    with pytest.raises(g.ValidationError):
        g.run_scenario(str(SCENARIOS / "missing.json"))


def test_co2_arithmetic():
    assert g.co2e_g(3.6e6, 475.0) == 475.0

import json
import os
import subprocess

import pytest

import mats


def test_universe_roundtrip():
    u = mats.make_universe("centralised", 2)
    assert u["platform"] == "centralised"
    assert {a["id"] for a in u["agents"]} == {"s", "u1", "u2"}


def test_simulate_is_deterministic():
    u = mats.make_universe("grassroots", 3)
    a = mats.simulate(u, seed=7, max_steps=100)
    assert a == mats.simulate(u, seed=7, max_steps=100)
    assert a != mats.simulate(u, seed=8, max_steps=100)
    header = json.loads(a.splitlines()[0])
    assert header["type"] == "header"
    assert header["seed"] == 7


def test_checks_on_a_simulated_trace():
    trace = mats.simulate(mats.make_universe("federated", 2, servers=2), seed=3, max_steps=200)
    assert mats.check("follower-safety", trace)["verdict"] == "holds"
    assert mats.check("fairness", trace, window=10)["verdict"] == "holds"
    assert mats.check("autonomy", trace)["verdict"] == "holds"
    assert mats.check("liveness", trace)["verdict"] in ("holds", "pending")


def test_tampered_trace_is_rejected():
    lines = mats.simulate(mats.make_universe("grassroots", 2), max_steps=30).splitlines()
    del lines[2]
    with pytest.raises(mats.TraceError):
        mats.check("fairness", "\n".join(lines) + "\n")


def test_classify_and_essential_sets():
    assert mats.classify("centralised")["class"] == "Centralised"
    r = mats.essential_sets(mats.make_universe("centralised", 3))
    assert r["minimum_sets"] == [["s"]]
    assert r["min_cardinality"] == 1


def test_delivery_path():
    assert mats.minimal_delivery_path("grassroots") == (5, 2)
    assert mats.minimal_delivery_path("centralised") == (6, 3)


def test_interactive():
    g = mats.make_universe("grassroots", 3)
    assert mats.check_interactive(g, ["a1"], ["a1", "a2"])["interactive"] == "true"


def test_reorg_histogram():
    h = mats.reorg_histogram(mats.make_universe("bitcoin", 3, bootstrap=1), trials=5, p_block=0.3, max_steps=100)
    assert h["blocks_produced"] > 0
    assert h["reorg_events"] >= 0


def test_hitting_sets():
    assert mats.minimal_hitting_sets([["a", "b"], ["b", "c"]]) == [["b"], ["a", "c"]]


def test_errors():
    with pytest.raises(ValueError):
        mats.make_universe("nosuch", 2)
    with pytest.raises(mats.ConfigError):
        mats.simulate({"platform": "centralised", "agents": [{"id": "u", "role": "client"}]})
    with pytest.raises(mats.ConfigError):
        mats.reorg_histogram(mats.make_universe("grassroots", 2), trials=3)


@pytest.mark.skipif(not os.environ.get("MATS_CLI"), reason="CLI path not provided")
def test_cli_exit_codes():
    cli = os.environ["MATS_CLI"]
    ok = subprocess.run([cli, "delivery", "--platform", "grassroots"], capture_output=True, text=True)
    assert ok.returncode == 0
    assert json.loads(ok.stdout)["initial"] == 5
    bad = subprocess.run([cli, "simulate", "--platform", "nosuch"], capture_output=True, text=True)
    assert bad.returncode == 2

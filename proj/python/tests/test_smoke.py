from fractions import Fraction
import math

import pytest

import lipvol


def test_exact_counts():
    assert lipvol.count_lipschitz(lipvol.make_complete(3), 2) == 19
    e = lipvol.ehrhart_c(lipvol.make_cycle(4))
    assert Fraction(e["leading"]) == Fraction(16, 3)
    assert e["counts"][0] == 1
    assert lipvol.kdd_volume_exact(3) == Fraction(48, 5)
    # big integers survive the crossing
    assert lipvol.count_lipschitz(lipvol.make_path(30), 9) == 19 ** 29


def test_resource_error():
    with pytest.raises(lipvol.ResourceError):
        lipvol.count_lipschitz(lipvol.make_hypercube(3), 3, budget=10)


def test_graph_and_hom():
    g = lipvol.Graph(3, [(0, 1), (1, 2)])
    assert g.num_edges == 2
    assert g == lipvol.make_path(3)
    t = lipvol.graph_spec("circ:5,1")
    assert lipvol.count_hom(lipvol.make_complete(2), t) == 15
    assert lipvol.lifting_check(lipvol.make_hypercube(2), 1, 5)
    with pytest.raises(ValueError):
        lipvol.Graph(2, [(0, 5)])


def test_sis_matches_exact():
    est = lipvol.sis_volume(lipvol.make_complete(3), 100000, seed=4)
    assert abs(est["mean"] - 3.0) <= 4 * est["stderr"]
    assert est == lipvol.sis_volume(lipvol.make_complete(3), 100000, seed=4)
    s = lipvol.smc_log_volume(lipvol.make_cycle(6), 4000, seed=2)
    assert math.isfinite(s["log_mean"])


def test_profile_and_qseries():
    g = lipvol.profile_gain(200.0)
    assert abs(200 * g["gain"] - math.pi ** 2 / 6) <= 0.02
    value, err = lipvol.q_pochhammer_inf(0.5)
    assert value == pytest.approx(0.2887880951, rel=1e-9)
    assert abs(lipvol.zeta_integral() - math.pi ** 2 / 6) < 1e-10


def test_flatness_and_census():
    assert lipvol.count_violating_pairs([0, 0.5, 2]) == 2
    assert lipvol.flatness_anchor([0, 0.2, 0.9, 1.5]) == (0, 1)
    assert lipvol.tail_census([0, 0.5, 1.5, -0.3, 2.7], 0) == {"S": 2, "U": 1, "W": 1, "D": 1}


def test_experiment_report():
    rec = lipvol.run_experiment({"kind": "random-graph-sweep", "n": "60", "d_list": "3,5",
                                 "replicas": "3", "samples": "1000", "seed": "5"})
    assert [row["d"] for row in rec["rows"]] == [3.0, 5.0]
    assert rec["config"]["seed"] == 5
    with pytest.raises(ValueError):
        lipvol.run_experiment({"kind": "random-graph-sweep", "d_list": ""})

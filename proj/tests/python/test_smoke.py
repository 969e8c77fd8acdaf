import math

import pytest

import burdenbias as bb


def test_closed_form_matches_printed_prospective_cell():
    # prevalence 0.01, tau 0.6, g = 1..3
    values = [bb.burden_lor_closed_form(0.0, 0.6, 0.01, g) for g in (1, 2, 3)]
    assert [round(v, 2) for v in values] == [0.29, 0.54, 0.74]


def test_phase_two_burden_classes():
    dist = bb.EffectDistribution.gaussian(0.0, 0.6)
    all_ = bb.phase_two_burden(dist, 0.05, 0.005)
    novel = bb.phase_two_burden(dist, 0.05, 0.005, snp_class="novel")
    old = bb.phase_two_burden(dist, 0.05, 0.005, snp_class="old")
    assert abs(all_ - 0.16) < 0.01
    assert novel < all_ < old
    closed = bb.phase_two_burden(dist, 0.05, 0.005, method="closed_form")
    assert math.isfinite(closed)


def test_mixture_of_conditioned_classes():
    dist = bb.EffectDistribution.parse("t(df=3, match=gaussian(0, 0.6), bound=4)")
    p = bb.conditioned_moments(dist, 0.01, 0.005, 100, "old")
    r = bb.conditioned_moments(dist, 0.01, 0.005, 100, "novel")
    assert p["probability"] + r["probability"] == pytest.approx(1.0, abs=1e-12)
    assert p["probability"] * p["mean"] + r["probability"] * r["mean"] == pytest.approx(dist.mean, abs=1e-9)


def test_curve_and_threads():
    dist = bb.EffectDistribution.gaussian(0.0, 0.6)
    grid = [0.01, 0.1, 1.0, 10.0]
    a = bb.curve("ascertainment_ratio", "nf", grid, dist, prevalence=0.01, threads=1)
    b = bb.curve("ascertainment_ratio", "nf", grid, dist, prevalence=0.01, threads="auto")
    assert a == b
    assert all(v >= 1.0 for v in a)


def test_estimators():
    t = bb.allele_count_t_test([0, 1, 0, 2], [0, 1, 0, 2])
    assert t["statistic"] == 0.0 and t["p_value"] == pytest.approx(1.0) and not t["reject"]
    fit = bb.fit_logistic([0, 0, 1, 1, 0, 1], [0, 1, 1, 0, 0, 1])
    assert fit["status"] in ("ok", "undefined")


def test_scenarios_and_reports():
    targets = bb.list_targets()
    assert len(targets) == 22
    assert all(t["citation"] for t in targets)
    s = bb.load_scenario("preset = table-s1\n")
    s.simulate = False
    rep = bb.run_scenario(s)
    assert rep.passed
    assert rep.csv().startswith("target,row_param,row_value,snp_class,g_level")
    assert rep.rows[0]["paper_theory"] == "0.09"
    fig = bb.run_target("figure-s1")
    assert fig.passed and fig.svg().startswith("<svg")
    with pytest.raises(bb.ConfigError):
        bb.load_scenario("bogus = 1\n")
    with pytest.raises(ValueError):
        bb.load_scenario("maf = 0.7\n")

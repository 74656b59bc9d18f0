import cmath
import json
import math

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from spoofrate.scenario import (DesignError, Scenario, ScenarioError, SpoofingDesign,
                                capacity, db_to_linear, evaluate, linear_to_db,
                                scenario_from_dict, load_scenario)

SQRT10 = math.sqrt(10.0)


@pytest.mark.parametrize("h,P,expected", [
    (1.0, 10.0, 3.45943161863729725),
    (1.0, 1e-4, 0.000144262291094554),
    (2.0, 10.0, 5.35755200461808369),
])
def test_capacity(h, P, expected):
    sc = Scenario(h, 1.0, P, min(1e-5, 0.5 * math.log2(1 + h * h * P)), 1.0)
    assert capacity(sc) == pytest.approx(expected, rel=1e-12)


@pytest.mark.parametrize("db,lin", [(10.0, 10.0), (0.0, 1.0), (3.0, 1.99526231496887955)])
def test_db_conversion(db, lin):
    assert db_to_linear(db) == pytest.approx(lin, rel=1e-14)
    assert linear_to_db(lin) == pytest.approx(db, abs=1e-12)


@given(st.floats(-100, 100))
def test_db_round_trip(x):
    assert linear_to_db(db_to_linear(x)) == pytest.approx(x, rel=1e-12, abs=1e-12)


@pytest.mark.parametrize("bad", [0.0, -1.0])
def test_linear_to_db_rejects_nonpositive(bad):
    with pytest.raises(ValueError):
        linear_to_db(bad)


@pytest.mark.parametrize("kwargs,key", [
    (dict(h=0), "h"), (dict(g=0), "g"), (dict(P=0), "P"), (dict(Q=-1), "Q"),
    (dict(delta1=0), "delta1"), (dict(delta2=-1e-3), "delta2"), (dict(R=0), "R"),
    (dict(R=3.5), "R"),
])
def test_scenario_validation(kwargs, key):
    base = dict(h=1.0, g=1.0, P=10.0, R=2.0, Q=10.0)
    base.update(kwargs)
    with pytest.raises(ScenarioError) as err:
        Scenario(**base)
    assert err.value.key == key


def test_rate_at_capacity_is_allowed():
    sc = Scenario(1.0, 1.0, 10.0, math.log2(11.0), 1.0)
    assert sc.R == sc.capacity


def test_evaluate_no_spoofing(ref):
    rep = evaluate(ref, SpoofingDesign(0j, 0j))
    assert rep.gamma == 0.0 and rep.r == 0.0
    assert rep.r_s_II == pytest.approx(math.log2(11.0), rel=1e-14)
    assert not rep.tin_success


def test_evaluate_perfect_cancelation(ref):
    rep = evaluate(ref, SpoofingDesign(complex(-SQRT10), 0j))
    assert rep.gamma == 0.0
    assert rep.r_s_II == pytest.approx(0.0, abs=1e-15)
    assert rep.sic_success


def test_evaluate_optimal_tin_point(ref):
    # design values of the TIN optimum at Q = 10 (see test_tin for their derivation)
    d = SpoofingDesign(complex(-2.30796870661096895), complex(2.16177715070367))
    rep = evaluate(ref, d)
    assert rep.gamma == pytest.approx(2.70156211871642434, rel=1e-12)
    assert rep.r == pytest.approx(1.88813423974644875, rel=1e-12)
    assert rep.r == rep.r_x_II
    assert rep.tin_success and rep.sic_success


def test_evaluate_rejects_over_budget(ref):
    with pytest.raises(DesignError):
        evaluate(ref, SpoofingDesign(3 + 0j, 2 + 0j))
    # saturating within floating-point noise is fine
    evaluate(ref, SpoofingDesign(complex(math.sqrt(6.0)), complex(2.0 * (1 + 1e-12))))


designs = st.builds(
    lambda m, ph, frac, ph_b: (m, ph, frac, ph_b),
    st.floats(0, 1), st.floats(0, 2 * math.pi), st.floats(0, 1), st.floats(0, 2 * math.pi))


@settings(max_examples=200, deadline=None)
@given(designs, st.floats(0.1, 10), st.floats(0.1, 10), st.floats(0.1, 100), st.floats(0, 100))
def test_rate_report_invariants(dz, mh, mg, P, Q):
    frac_a, ph, frac_b, ph_b = dz
    sc = Scenario(mh, cmath.rect(mg, 0.3), P, 0.5 * math.log2(1 + mh * mh * P), Q)
    am = math.sqrt(frac_a * Q)
    bm = math.sqrt(frac_b * max(Q - am * am, 0.0))
    rep = evaluate(sc, SpoofingDesign(cmath.rect(am, ph), complex(bm)))
    assert rep.r == rep.r_x_II
    assert rep.r_x_I >= rep.r
    assert rep.r_s_II >= rep.r_s_I
    rotated = evaluate(sc, SpoofingDesign(cmath.rect(am, ph), cmath.rect(bm, ph_b)))
    for k, v in rep.as_dict().items():
        assert rotated.as_dict()[k] == pytest.approx(v, rel=1e-12, abs=1e-15)
    if bm == 0.0:
        assert rep.gamma == 0.0 and rep.r == 0.0


def test_scenario_from_dict_db_and_linear():
    sc = scenario_from_dict({"h_re": 1, "h_im": 0, "g_re": 0.5, "g_im": 0.5,
                             "P_db": 10, "R": 2, "Q_linear": 4})
    assert sc.P == pytest.approx(10.0) and sc.Q == 4.0 and sc.g == 0.5 + 0.5j
    assert sc.delta1 == 1e-6 and sc.delta2 == 1e-6


@pytest.mark.parametrize("doc,key", [
    ({"h_re": 1, "g_re": 1, "P_db": 10, "Q_db": 10}, "R"),
    ({"h_re": 1, "g_re": 1, "R": 2, "Q_db": 10}, "P_db"),
    ({"h_re": 1, "g_re": 1, "P_db": 10, "P_linear": 10, "R": 2, "Q_db": 10}, "P_db"),
    ({"h_re": 1, "g_re": 1, "P_db": 10, "R": "two", "Q_db": 10}, "R"),
    ({"g_re": 1, "P_db": 10, "R": 2, "Q_db": 10}, "h_re"),
])
def test_scenario_from_dict_errors(doc, key):
    with pytest.raises(ScenarioError) as err:
        scenario_from_dict(doc)
    assert err.value.key == key
    assert key in str(err.value)


def test_load_scenario(tmp_path):
    p = tmp_path / "s.json"
    p.write_text(json.dumps({"h_re": 1, "g_re": 1, "P_db": 10, "R": 2, "Q_db": 10,
                             "delta1": 1e-7}))
    sc = load_scenario(p)
    assert sc.Q == 10.0 and sc.delta1 == 1e-7
    (tmp_path / "bad.json").write_text("{nope")
    with pytest.raises(ScenarioError):
        load_scenario(tmp_path / "bad.json")

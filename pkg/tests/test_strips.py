import math

import pytest

from zsa.gdpoly import DomainError, GeneralizedDirichletPoly
from zsa.realroots import RealExpEquation, solve_unique_root
from zsa.strips import (
    Budgets,
    analytic_upper_bound,
    beta_fixed_point,
    delta_n,
    empirical_bounds,
    projection_interval,
    rn_membership,
    strip_report,
    verify_theorem,
    zero_envelope,
)


def a3_oracle():
    """Unique root of 2^x + 3^x = 1, bracketed in (-0.80, -0.78)."""
    eq = RealExpEquation(
        GeneralizedDirichletPoly.from_terms([(1.0, 2), (1.0, 3)]), 1.0)
    assert eq.residual(-0.80) < 0 < eq.residual(-0.78)
    return solve_unique_root(eq, (-0.80, -0.78))


def test_membership_examples():
    assert rn_membership(3, 0.0)            # m = 0 <= 1 <= 2
    assert not rn_membership(3, -1.0)       # 1 - 1/2 = 0.5 > 1/3
    assert rn_membership(3, 1.0)            # boundary: 1 <= 3 <= 3
    with pytest.raises(DomainError):
        rn_membership(2, 0.0)


def test_projection_interval_n3_oracles():
    proj = projection_interval(3, grid_step=1e-3, tol=1e-8)
    assert abs(proj.x_lo - a3_oracle()) < 1e-6
    assert abs(proj.x_hi - 1.0) < 1e-6
    assert proj.holes == ()


def test_analytic_upper_bounds():
    assert abs(analytic_upper_bound(3) - 1.0) < 1e-12
    au4 = analytic_upper_bound(4)
    assert 1.6 < au4 < 1.8
    assert analytic_upper_bound(10) > 1.0
    with pytest.raises(DomainError):
        analytic_upper_bound(2)


def test_empirical_bounds_n2_degenerate(store):
    e = empirical_bounds(2, "G", 30.0, store=store)
    assert e.zero_count >= 3
    assert abs(e.a_hat) < 1e-12 and abs(e.b_hat) < 1e-12


def test_empirical_bounds_straddle_axis(store):
    for n in (3, 4):
        e = empirical_bounds(n, "G", 200.0, store=store)
        assert e.a_hat < 0 < e.b_hat
        assert e.b_hat <= analytic_upper_bound(n) + 1e-9


def test_zero_envelope_mirror():
    g = zero_envelope("G", 5)
    z = zero_envelope("zeta", 5)
    assert z == (-g[1], -g[0])


def test_delta_positive(store):
    for n in (3, 4):
        assert delta_n(n, store=store) > 0


def test_delta_n3_closed_form(store):
    # b_{3,a3} = log(1 + 3^a3)/log 2 ~ 0.507; empirical b_hat_3 ~ 1
    d = delta_n(3, store=store)
    want = math.log(1.0 + 3.0 ** a3_oracle()) / math.log(2.0)
    assert abs(d - want) < 1e-4


def test_beta4_brackets():
    b4 = beta_fixed_point(4)
    assert 1.0 < b4 < 1.5
    # fixed point of the closed form log(1 + 2*3^(x-1/2))/log 4
    assert abs(4.0 ** b4 - (1.0 + 2.0 * 3.0 ** (b4 - 0.5))) < 1e-6


def test_verify_unknown_id():
    with pytest.raises(DomainError):
        verify_theorem("T99", [3])


def test_verify_t15_c16(store):
    assert verify_theorem("T15", [3, 4], store=store) == {3: "pass", 4: "pass"}
    assert verify_theorem("C16", [3, 4], store=store) == {3: "pass", 4: "pass"}


def test_verify_factorials_fast():
    v = verify_theorem("factorials", [], Budgets(k_max=50, m_max=100))
    assert v["all"] == "pass"


def test_strip_report_shape(store):
    rep = strip_report(3, store=store)
    obj = rep.to_json_dict()
    assert obj["n"] == 3
    assert obj["projection_interval"]["x_lo"] < 0 < obj["projection_interval"]["x_hi"]
    assert obj["delta_n"] > 0
    import json
    json.dumps(obj)   # must be serializable


def test_strip_report_zeta_frame_is_reversed(store):
    g = strip_report(4, family="G", store=store)
    z = strip_report(4, family="zeta", store=store)
    assert abs(z.projection.x_lo + g.projection.x_hi) < 1e-12
    assert abs(z.projection.x_hi + g.projection.x_lo) < 1e-12

import csv
import io
import json
import math

import mpmath
import pytest
from hypothesis import given, strategies as st

from psi_approx import (
    LogLogPower,
    LogPower,
    Power,
    constants_K,
    lemma_tail_check,
    order_table,
    sandwich_check,
    theorem_bounds,
    xi,
)
from psi_approx.bounds_report import check_hypotheses, cos_quarter, parse_n_list, resolve_theorem
from psi_approx.errors import DomainError, HypothesisError

P075 = Power(0.75)


# -- xi and constants --------------------------------------------------------------


def test_xi_values():
    assert xi(2) == pytest.approx(max(4 * math.sqrt(math.pi), 28 * math.sqrt(8 * math.pi)), rel=1e-15)
    assert xi(2) == pytest.approx(140.371183, rel=1e-8)
    assert xi(4) == pytest.approx(14 * (8 * math.pi) ** 0.25 * 4, rel=1e-15)
    assert xi(4) == pytest.approx(125.3857, rel=1e-6)


def test_xi_near_one_first_branch():
    assert xi(1.001) == pytest.approx(4 * (math.pi / 0.001) ** (1 / 1.001), rel=1e-12)
    assert xi(1.0001) > xi(1.001)


def test_xi_domain():
    for bad in (1.0, 0.5, math.inf):
        with pytest.raises(DomainError):
            xi(bad)


def test_constants_power():
    K1, K2 = constants_K(P075, 2)
    x = 28 * math.sqrt(8 * math.pi)
    assert K1 == pytest.approx(1 / (3 * x) * math.sqrt(4 / 6) * 0.5, rel=1e-13)
    assert K2 == pytest.approx(x / math.pi * math.sqrt(6 / 4), rel=1e-13)
    assert K1 == pytest.approx(9.69e-4, abs=5e-7) and K2 == pytest.approx(54.72, abs=5e-3)


def test_constants_hypothesis_violation():
    # alpha_1(g_2) = 1/(r - 1/2) = 2 is not > p' = 2 for r = 1
    with pytest.raises(HypothesisError, match="not >"):
        constants_K(Power(1.0), 2)


def test_constants_degenerate_near_boundary():
    K1a, _ = constants_K(Power(0.99), 2)
    K1b, _ = constants_K(P075, 2)
    assert K1a < 0.05 * K1b


@given(st.floats(0.55, 0.99), st.sampled_from([1.5, 2.0, 3.0]))
def test_K1_below_K2(r, p):
    try:
        K1, K2 = constants_K(Power(r), p)
    except HypothesisError:
        return
    assert 0 < K1 < K2


# -- theorem bounds ----------------------------------------------------------------


def test_t1_bounds():
    T4 = float(mpmath.zeta(1.5, 4))
    K1, K2 = constants_K(P075, 2)
    lo, hi = theorem_bounds("T1", P075, 0, 2, 4)
    assert lo == pytest.approx(K1 * math.sqrt(T4), rel=1e-8)
    assert hi == pytest.approx(K2 * math.sqrt(T4), rel=1e-8)


def test_t2_bounds():
    T = float(mpmath.zeta(1.5, 2))
    K1, K2 = constants_K(P075, 2)
    lo, hi = theorem_bounds("T2", P075, 0.5, 2, 2)
    assert lo == pytest.approx(4 / 3 * K1 * math.sqrt(T), rel=1e-8)
    assert hi == pytest.approx(K2 * math.sqrt(T), rel=1e-8)


def test_t3_upper():
    _, hi = theorem_bounds("T3", Power(2), 0, 1, 3)
    assert hi == pytest.approx((math.pi**2 / 6 - 1 - 0.25) / math.pi, rel=1e-8)
    assert hi == pytest.approx(0.1257, abs=5e-5)


def test_t4_upper():
    lo, hi = theorem_bounds("T4", Power(2), 1, 1, 4)
    assert hi == pytest.approx((1 + 2 / math.pi) / 4, rel=1e-15)
    assert lo == 0  # alpha_1(t^-1) = 1


def test_t3_t4_lower_power():
    psi = Power(1.5)  # g = t^{-1/2}, alpha = 2
    S = float(mpmath.zeta(1.5, 2))
    lo, _ = theorem_bounds("T3", psi, 0.5, 1, 2)
    assert lo == pytest.approx(math.cos(math.pi / 4) / (12 * math.pi) * 0.5 * S, rel=1e-8)
    lo, _ = theorem_bounds("T4", psi, 1, 1, 2)
    assert lo == pytest.approx(0.5 * 2**-1.5 * 2 / (60 * math.pi), rel=1e-14)


def test_t5_dispatch():
    assert resolve_theorem("T5", 1) == "T4"
    assert resolve_theorem("T5", 3) == "T4"
    assert resolve_theorem("T5", 0.5) == "T3"
    assert cos_quarter(1) == 0 and cos_quarter(2) == -1
    assert theorem_bounds("T5", Power(2), 1, 1, 4) == theorem_bounds("T4", Power(2), 1, 1, 4)


@pytest.mark.parametrize("args,match", [
    (("T3", Power(2), 1, 1), "cos"),
    (("T4", Power(2), 0, 1), "cos"),
    (("T1", Power(0.5), 0, 2), "diverges|M0"),
    (("T3", Power(3), 0, 1), "not > 1"),
    (("T1", P075, 0, 1), "1 < p"),
])
def test_hypothesis_diagnostics(args, match):
    with pytest.raises(HypothesisError, match=match):
        check_hypotheses(*args)


@pytest.mark.parametrize("theorem,psi,beta,e", [
    ("T1", P075, 0, 2), ("T1", LogPower(2, 1), 0.5, 2), ("T1", Power(0.6), 0, 4),
    ("T2", P075, 1, 2), ("T2", LogPower(2, 1), 0, 2),
    ("T3", Power(2), 0, 1), ("T3", Power(1.5), 0.5, 1), ("T3", LogPower(1, 2, K=30), 0, 1),
    ("T4", Power(2), 1, 1), ("T4", Power(1.5), 3, 1),
])
@pytest.mark.parametrize("n", [1, 2, 8, 64])
def test_lower_below_upper(theorem, psi, beta, e, n):
    lo, hi = theorem_bounds(theorem, psi, beta, e, n)
    assert 0 <= lo <= hi


# -- sandwich ----------------------------------------------------------------------


def test_sandwich_t1_example():
    r = sandwich_check("T1", P075, 0, 2, 4)
    assert r.verdict == "Pass"
    assert r.lower <= r.measured[0] <= r.measured[1] <= r.upper
    assert r.budgets["membership_ok"]
    # the measured residual is bracketed around the closed-form value
    assert r.measured[0] <= r.budgets["analytic_residual"] * (1 + 1e-9)
    assert r.budgets["analytic_residual"] <= r.measured[1] * (1 + 1e-9)


def test_sandwich_t4_example():
    r = sandwich_check("T4", Power(2), 1, 1, 2)
    assert r.verdict == "Pass"
    assert r.measured[0] >= 1.326e-3


def test_sandwich_hypothesis_violation_reported():
    r = sandwich_check("T3", Power(2), 1, 1, 2)
    assert r.verdict == "Fail"
    assert any("HypothesisError" in note for note in r.notes)


def test_report_json_schema():
    r = sandwich_check("T3", Power(2), 0, 1, 2)
    obj = json.loads(json.dumps(r.to_json()))
    for key in ("theorem", "params", "lower", "upper", "measured", "verdict", "budgets"):
        assert key in obj
    assert obj["params"]["s"] == "inf"
    assert obj["verdict"] in ("Pass", "Fail", "Inconclusive")
    assert len(obj["measured"]) == 2


@pytest.mark.parametrize("theorem", ["T1", "T2"])
@pytest.mark.parametrize("psi", [P075, LogPower(2, 1)], ids=str)
@pytest.mark.parametrize("n", [2, 4, 8])
@pytest.mark.parametrize("beta", [0.0, 0.5, 1.0])
def test_sandwich_grid_first_pair(theorem, psi, n, beta):
    assert sandwich_check(theorem, psi, beta, 2, n).verdict == "Pass"


@pytest.mark.parametrize("n", [2, 4, 8])
@pytest.mark.parametrize("theorem,beta", [("T3", 0.0), ("T4", 1.0), ("T5", 0.0), ("T5", 1.0)])
def test_sandwich_grid_second_pair(theorem, beta, n):
    assert sandwich_check(theorem, Power(2), beta, 1, n).verdict == "Pass"


# -- lemmas ------------------------------------------------------------------------


@pytest.mark.parametrize("r,s", [(0.75, 2.0), (1.0, 2.0), (1.5, 2.0), (0.9, 1.5), (0.8, 3.0)])
def test_lemma_two_sided_power(r, s):
    for n in range(1, 65):
        c = lemma_tail_check(Power(r), s, n, two_sided=True)
        assert c.ok, (r, s, n, c)
        assert c.lower <= c.value <= c.upper + 1e-9


@pytest.mark.parametrize("psi,s", [
    (LogPower(2, 1), 2.0), (LogLogPower(2, 0.5, 1), 2.0),
    (LogPower(1, 2), 1.0), (LogLogPower(1, 1, 2), 1.0),
])
def test_lemma_upper_log_families(psi, s):
    assert all(lemma_tail_check(psi, s, n).ok for n in range(1, 65))


@pytest.mark.parametrize("r", [1.5, 2.0, 3.0])
def test_lemma_two_sum_power(r):
    for n in (1, 2, 7, 64):
        c = lemma_tail_check(Power(r), 1.0, n, two_sided=True)
        S = float(mpmath.zeta(r, n))
        assert c.value == pytest.approx(n ** (1 - r), rel=1e-14)
        assert c.upper == pytest.approx((r - 1) * S, rel=1e-7)
        assert c.ok


# -- order tables ------------------------------------------------------------------


def test_parse_n_list():
    assert parse_n_list("16..128") == [16, 32, 64, 128]
    assert parse_n_list("3,5,9") == [3, 5, 9]
    with pytest.raises(ValueError):
        parse_n_list("8..4")


def test_c2_band():
    t = order_table("C2", LogPower(2, 1), parse_n_list("16..4096"))
    assert t.band < 2 and t.verdict == "Pass" and t.small_o is True
    n, lhs, rhs, ratio = t.rows[0]
    assert ratio == pytest.approx(lhs / rhs, rel=1e-15)
    assert rhs == pytest.approx(LogPower(2, 1)(16.0) * 4 * math.sqrt(math.log(16)), rel=1e-14)


def test_c4_band():
    t = order_table("C4", Power(2), parse_n_list("4..256"))
    assert t.band < 2 and t.verdict == "Pass"
    for n, lhs, rhs, _ in t.rows:
        assert lhs == pytest.approx(float(mpmath.zeta(2, n)), rel=1e-8)
        assert rhs == pytest.approx(1 / n, rel=1e-15)


def test_t5_branches_separate_for_log_weight():
    t = order_table("T5", LogPower(1, 2), parse_n_list("16..4096"))
    assert t.growth >= 2 and t.verdict == "Pass"


def test_t5_power_band():
    t = order_table("T5", Power(2), parse_n_list("16..4096"), beta=1)
    limit = (1 + 2 / math.pi) / (1 / (60 * math.pi))
    assert t.band <= limit and t.verdict == "Pass"


@pytest.mark.parametrize("cor,psi", [
    ("C1a", LogPower(2, 1)), ("C1b", P075), ("C3", LogLogPower(2, 0.5, 1)),
    ("C5", LogPower(1, 2)), ("C6", LogLogPower(1, 1, 2)),
])
def test_other_tables_pass(cor, psi):
    t = order_table(cor, psi, parse_n_list("16..4096"))
    assert t.verdict == "Pass", t.notes


def test_single_point_inconclusive():
    t = order_table("C2", LogPower(2, 1), [64])
    assert t.band == 1 and t.verdict == "Inconclusive"


def test_table_csv():
    t = order_table("C4", Power(2), [4, 8])
    rows = list(csv.reader(io.StringIO(t.to_csv())))
    assert rows[0] == ["n", "lhs_proxy", "rhs_form", "ratio"]
    assert len(rows) == 3
    digits = rows[1][1].replace(".", "").lstrip("0")
    assert len(digits.split("e")[0]) <= 12


def test_table_constraints():
    with pytest.raises(Exception):
        order_table("C2", P075, [16, 32])
    with pytest.raises(Exception):
        order_table("C4", Power(0.75), [16, 32])

import math
import warnings

import mpmath as mp
import pytest

from theta_asym import asymptotics as asy
from theta_asym.errors import DegenerateB, GammaTooShort, OrderTooHigh, RegimeViolation
from theta_asym.exact import a_coeff, b_coeff, n_coeff, quad_sum
from theta_asym.partitions import partition_table
from theta_asym.records import asymptotic_statistic, exact_statistic, sci
from theta_asym.verify import coefficient_identities, sample_profiles

mpf = mp.mpf
P = asy.PARTITION


def rel(x, y):
    return abs(mpf(x) / mpf(y) - 1)


def test_profile_validation():
    with pytest.raises(ValueError):
        asy.GrowthProfile(mpf(-1), 1, (mpf(1),), "bad")
    with pytest.raises(ValueError):
        asy.GrowthProfile(mpf(1), 1, (mpf(0),), "bad")
    assert asy.colored_profile(4, 0, (1,)).beta == 2 * mp.pi * mp.sqrt(mpf(4) / 6)
    assert abs(P.beta - 2 * mp.pi / mp.sqrt(6)) < mpf("1e-55") and P.alpha == 1
    assert abs(P.gamma[0] - 1 / (4 * mp.sqrt(3))) < mpf("1e-55")


def test_short_gamma_is_reported():
    short = asy.colored_profile(2, 1, (mpf(1),))
    with pytest.raises(GammaTooShort):
        asy.lambda_table(short, 6)


@pytest.mark.parametrize("prof", sample_profiles(), ids=lambda p: p.label)
def test_lambda_values_and_parity(prof):
    lam = asy.lambda_table(prof, 8)
    assert lam[0, 0] == 1
    assert abs(lam[1, 1] + prof.alpha) < mpf("1e-50")
    assert abs(lam[0, 2] + prof.beta / 8) < mpf("1e-50")
    assert all(v == 0 for (n, j), v in lam.items() if (n - j) % 2)


def test_shift_ratio_examples(p_table):
    assert asy.shift_ratio(P, 10**4, 0, 3) == 1
    assert rel(asy.shift_ratio(P, 10**4, 1, 4), mpf(p_table(10001)) / p_table(10000)) <= mpf("1e-6")
    assert rel(asy.shift_ratio(P, 10**4, -50, 4), mpf(p_table(9950)) / p_table(10000)) <= mpf("1e-4")
    with pytest.raises(ValueError):
        asy.shift_ratio(P, 10, 10, 2)


def test_profile_value_tracks_partition_numbers(p_table):
    for X in (2000, 10000):
        assert rel(asy.profile_value(P, X), p_table(X)) < mpf("1e-10")


@pytest.mark.parametrize("prof", sample_profiles(), ids=lambda p: p.label)
def test_coefficient_closed_forms(prof):
    for label, x, y in coefficient_identities(prof):
        assert abs(x - y) <= mpf("1e-12") * max(abs(y), 1), label


def test_coefficient_supports():
    for g in range(7):
        cen = asy.coeff_C_central(g, P)
        assert all(2 * s + 2 * l + 3 * r <= 2 * g for r, l, s in cen)
        tail = asy.coeff_C_tail(g, P)
        assert all(l + s <= g for l, s in tail)
    assert asy.coeff_C_central(0, P) == {(0, 0, 0): 1}
    assert asy.coeff_C_tail(0, P) == {(0, 0): 1}


def test_central_leading_term():
    X, b = mpf(900), mpf(7)
    lead = asy.apply_operator(asy.central_operator(0, P, mpf("0.5"), b, 0), b * P.beta / (2 * mp.sqrt(X)))
    assert lead == 1 / (1 + mp.exp(b * P.beta / (2 * mp.sqrt(X))))


def _central_error(p_table, X, p):
    # b = -1/2 is written as b = 0 with the shift mu = -1/2
    exact = mpf(quad_sum(p_table, 1, -1, X)) / p_table(X)
    return rel(asy.sf_ratio_central(P, mpf("0.5"), 0, mpf("-0.5"), X, p), exact)


def test_central_expansion_against_exact(p_table):
    assert _central_error(p_table, 400, 2) <= mpf("5e-2")
    for p in (1, 2, 3):
        assert _central_error(p_table, 1600, p) <= mpf("0.7") * _central_error(p_table, 400, p)


def test_central_expansion_guards():
    with pytest.raises(OrderTooHigh):
        asy.sf_ratio_central(P, 1, 1, 0, 100, 8)
    with pytest.raises(ValueError):
        asy.sf_ratio_central(P, 1, -1, 0, 100, 1)
    with pytest.warns(UserWarning):
        asy.sf_ratio_central(P, 1, 60, 0, 100, 1)


def test_tail_single_term_branch(p_table):
    for X in (100, 357, 1000):
        b = X - 20
        exact = quad_sum(p_table, 3, 2 * b - 1, X)  # a = 3/2, b + mu = X - 20.5
        assert exact == p_table(19)
        got = asy.sf_ratio_tail(P, mpf("1.5"), b, mpf("-0.5"), X, table=p_table)
        assert got == mpf(exact) / p_table(X - b)


def test_tail_regime_violation():
    with pytest.raises(RegimeViolation):
        asy.sf_ratio_tail(P, 1, 10, 0, 10**4)
    with pytest.raises(RegimeViolation):
        asy.sf_ratio_tail(P, 1, 10**4, 0, 10**4)


def test_tail_expansion_against_exact(p_table):
    X = 10**4
    b = 2000
    exact = mpf(quad_sum(p_table, 1, 2 * b + 1, X)) / p_table(X - b)
    assert rel(asy.sf_ratio_tail(P, mpf("0.5"), b, mpf("0.5"), X, order=6), exact) < mpf("1e-3")


def test_central_and_tail_agree_in_overlap():
    X = mpf(10) ** 6
    b = X ** mpf("0.7")
    assert b >= asy.tail_threshold(X)
    a, mu = mpf("0.5"), mpf("0.5")
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        central = asy.sf_ratio_central(P, a, b, mu, X, 7)
    tail = asy.sf_ratio_tail(P, a, b, mu, X, order=8)
    ratio = asy.profile_value(P, X - b) / asy.profile_value(P, X)
    assert rel(central, tail * ratio) <= mpf("1e-2")


def test_delta_examples(p_table):
    n = 2500
    a0 = asy.sf_delta_ratio(1, P, mpf("0.5"), mpf("0.5"), -1, n, allow_degenerate=True)
    assert rel(a0, mpf(a_coeff(0, 1, n, p_table)) / p_table(n)) <= mpf("0.02")
    exact_b = mpf(b_coeff(1, 1, n, p_table)) / p_table(n)
    b1 = asy.sf_delta_ratio(2, P, mpf("0.5"), mpf("2.5"), -1, n)
    assert rel(b1, exact_b) <= mpf("0.05")
    assert rel(b1, exact_b) < rel(asy.closed_ratio("B", 1, 1, n), exact_b)


def test_delta_degenerate_point():
    with pytest.raises(DegenerateB):
        asy.sf_delta_ratio(1, P, mpf("0.5"), mpf("0.5"), -1, 2500)
    with pytest.raises(ValueError):
        asy.sf_delta_ratio(0, P, 1, -1, 0, 100)


def test_delta_zero_is_central_two_orders(p_table):
    X, a, b = 2500, mpf("0.5"), mpf(10)
    two = asy.sf_delta_ratio(0, P, a, b, 0, X)
    assert rel(two, asy.sf_ratio_central(P, a, b, 0, X, 1)) < mpf("1e-3")


def test_operator_m_positive_top_coefficient():
    for J in range(4):
        assert asy.delta_operator_M(J, P, mpf("0.1"), 0)[J + 2] > 0


def test_table_reference_values(store):
    assert sci(asymptotic_statistic("B", 1, 1, 2500, store)) == "9.08059e45"
    assert sci(asymptotic_statistic("NDIFF", 0, 2, 2500, store)) == "3.02819e45"


def test_dyson_crank_law_at_zero():
    for n in (100, 2500):
        assert abs(asy.closed_ratio("A", 0, 1, n) - mp.sqrt(mp.pi**2 / (6 * n)) / 4) < mpf("1e-55")
        assert asy.closed_ratio("CRANK", 0, 1, n) == asy.closed_ratio("N", 0, 1, n)


def test_closed_ratio_validation():
    with pytest.raises(ValueError):
        asy.closed_ratio("Q", 0, 1, 10)
    with pytest.raises(ValueError):
        asy.closed_ratio("B", 0, 1, 10, "nonexistent")
    with pytest.raises(ValueError):
        asy.closed_ratio("B", 0, 1, 0)
    with pytest.raises(ValueError):
        asy.closed_ratio("A", 0, 2, 100, "two-term")


def test_peak_formulas():
    assert abs(asy.peak_prediction(1, 2500) - mpf("25.67")) < mpf("0.01")
    assert abs(asy.min_diff_prediction(2500) - 2 * asy.peak_prediction(1, 2500)) < mpf("1e-50")


@pytest.mark.parametrize("n", [625, 2500, 10000])
def test_closed_b_argmax_sits_at_its_critical_point(n):
    top = math.ceil(4 * math.sqrt(n))
    best = max(range(top), key=lambda m: asy.closed_ratio("B", m, 1, n))
    assert abs(best - asy.b_critical_point(1, n)) <= 1
    # the prediction scales out: p_k(n) does not move the argmax
    best_k = max(range(top), key=lambda m: asy.closed_ratio("B", m, 2, n))
    assert abs(best_k - asy.b_critical_point(2, n)) <= 1


def test_wide_range_law(p_table):
    n = m = 10**4
    d = asy.delta_k(1, n)
    big = partition_table(1, n + m + 1)
    val = (1 + mp.exp(-m * d)) ** 2 * n_coeff(2, m, n + m, big) / (d * p_table(n))
    assert abs(val - 1) <= mpf("0.1")


def test_nkdiff_changes_sign_near_prediction(store):
    # N_3 - N_2 is positive at the centre and turns negative where sech^2 (1 - 3 tanh^2) does
    n = 2500
    vals = [exact_statistic("NKDIFF", m, 2, n, store) for m in range(0, 2 * math.isqrt(n) + 1)]
    assert vals[0] > 0
    crossing = next(m for m, v in enumerate(vals) if v < 0)
    assert abs(crossing - asy.min_diff_prediction(n)) <= 5


@pytest.mark.parametrize("n", [2500, 10000])
def test_exact_b_argmax_near_closed_form_critical_point(n, p_table):
    best = max(range(4 * math.isqrt(n)), key=lambda m: b_coeff(m, 1, n, p_table))
    assert abs(best - asy.b_critical_point(1, n)) <= 3

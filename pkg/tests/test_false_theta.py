import mpmath as mp
import pytest

from theta_asym.errors import NoConvergence, OrderTooHigh
from theta_asym.false_theta import (
    FalseThetaParams,
    LogisticKernel,
    direct_partial_sums,
    euler_polynomial,
    euler_transform_parts,
    hermite_number,
    logistic_deriv,
    p_operator,
    t_direct,
    t_euler,
    t_euler_poly_expansion,
    t_uniform,
    t_z_derivative_asym,
)
from theta_asym.verify import kernel_fd_check, uniform_error_law

F = FalseThetaParams
mpf = mp.mpf


def test_params_validation():
    with pytest.raises(ValueError):
        F(0, 1, 1)
    with pytest.raises(ValueError):
        F(1, 1, -1)
    assert F(1, 0, mp.mpc(1, 1)).in_sector()
    assert not F(1, 0, mp.mpc(1, 2)).in_sector()


def test_direct_examples():
    v = t_direct(F(1, 0, 5), tol=mpf("1e-30"))
    assert abs(v - (mp.exp(-5) - mp.exp(-20) + mp.exp(-45))) < mpf("1e-30")
    assert mp.nstr(v, 5) == "0.0067379"
    big = t_direct(F(1, 1000, 1))
    # the next term is e^{-2002}, far below working precision relative to e^{-1001}
    assert abs(big / mp.exp(-1001) - 1) < mpf(10) ** (5 - mp.mp.dps)
    assert abs(t_direct(F(1, 0, mpf("0.01"))) - mpf("0.5")) < mpf("1e-3")


def test_direct_term_ceiling():
    with pytest.raises(NoConvergence):
        t_direct(F(1, 0, mpf("1e-6")), max_terms=100)


def test_partial_sums_bracket_the_limit():
    pr = F(1, mpf("0.3"), mpf("0.05"))
    limit = t_direct(pr)
    s = direct_partial_sums(pr, 30)
    for lo, hi in zip(s, s[1:]):
        assert min(lo, hi) <= limit <= max(lo, hi)


def test_euler_transform_examples():
    head, rem = euler_transform_parts(lambda n: mpf(1), mpf("0.5"), 1)
    assert head == 2 and rem == 0
    head, rem = euler_transform_parts(lambda n: mpf(n), mpf("0.5"), 2)
    assert head == 2 and rem == 0


def test_euler_route_agrees_with_direct():
    tol = mpf(10) ** (-(mp.mp.dps - 5))
    for a in (mpf("0.5"), 1, mpf("1.5")):
        for b in (0, 1, 10, 100):
            for z in (1, mpf("0.1"), mpf("0.01")):
                pr = F(a, b, z)
                assert abs(t_direct(pr) - t_euler(pr)) <= tol


def test_complex_z_routes_agree():
    pr = F(1, 2, mp.mpc("0.05", "0.03"))
    assert abs(t_direct(pr) - t_euler(pr)) < mpf("1e-50")
    assert abs(t_uniform(0, pr, 4) - t_direct(pr)) < mpf("1e-4")


def test_kernel_values():
    assert logistic_deriv(0, 0) == mpf("0.5")
    assert logistic_deriv(1, 0) == mpf("-0.25")
    # third derivative is +(1/8) sech^4(a/2) (1 - 2 sinh^2(a/2)), so +1/8 at the origin
    assert logistic_deriv(3, 0) == mpf("0.125")
    assert abs(logistic_deriv(3, 0) - mp.diff(lambda t: 1 / (1 + mp.exp(t)), 0, 3)) < mpf("1e-40")
    for a in (mpf("-1.3"), mpf("0.4"), mpf(2)):
        closed = mp.sech(a / 2) ** 4 * (1 - 2 * mp.sinh(a / 2) ** 2) / 8
        assert abs(logistic_deriv(3, a) - closed) < mpf("1e-55")
    for J in range(2, 41, 2):
        assert logistic_deriv(J, 0) == 0
    a = mpf("0.7")
    assert abs(logistic_deriv(1, a) + mp.sech(a / 2) ** 2 / 4) < mpf("1e-55")


def test_kernel_symmetry_and_limit():
    for J in range(1, 9):
        for a in (mpf("0.3"), mpf(2), mpf(7)):
            assert abs(logistic_deriv(J, -a) - (-1) ** (J + 1) * logistic_deriv(J, a)) < mpf("1e-50")
    assert abs(logistic_deriv(4, mpf(200))) < mpf("1e-80")


def test_kernel_matches_finite_differences():
    assert kernel_fd_check()


def test_kernel_order_limit():
    k = LogisticKernel(6)
    with pytest.raises(OrderTooHigh):
        k(7, 0)
    with pytest.raises(OrderTooHigh):
        t_uniform(0, F(1, 0, mpf("0.01")), 4, kernel=k)


def test_uniform_examples():
    pr = F(1, 0, mpf("1e-4"))
    assert abs(t_uniform(0, pr, 3) - t_direct(pr)) <= mpf("1e-12")
    far = [abs(t_uniform(0, F(1, b, mpf("0.1")), 3)) for b in (10, 100, 1000)]
    assert far[0] > far[1] > far[2] and far[2] < mpf("1e-40")
    pr = F(1, 0, mpf("1e-3"))
    exact = t_direct(pr, ell=1)
    assert abs(t_uniform(1, pr, 2) / exact - 1) <= mpf("1e-5")


def test_uniform_rejects_out_of_sector():
    with pytest.raises(ValueError):
        t_uniform(0, F(1, 0, mp.mpc("0.01", "0.05")), 2)


def test_uniform_error_law_holds():
    law = uniform_error_law()
    assert all(ok for ok, _ in law.values()), law


def test_p_operator_spot_check():
    mu, a, b = mpf(2), mpf(3), mpf(5)
    assert p_operator(0, 1, mu, a, b) == {1: mu + b, 2: -a}
    assert p_operator(0, 0, mu, a, b) == {0: 1}


def test_z_derivative_leading_term():
    pr = F(1, 2, mpf("0.01"))
    assert t_z_derivative_asym(0, 0, pr, 1) == t_uniform(0, pr, 1)


@pytest.mark.parametrize("b,mu", [(0, 0), (mpf(3), 0), (mpf(1), mpf("0.5"))])
def test_z_derivative_matches_finite_difference(b, mu):
    z, h = mpf("1e-3"), mpf("1e-6")

    def T(zz):
        return t_direct(F(1, b + mu, zz))

    fd = (T(z + h) - T(z - h)) / (2 * h)
    val = t_z_derivative_asym(1, mu, F(1, b, z), 2)
    # at b = mu = 0 the derivative itself is O(z), so the comparison is against the scale of T'
    assert abs(val - fd) <= mpf("1e-3") * max(abs(fd), mpf("0.25"))


def test_hermite_and_euler_polynomials():
    assert hermite_number(0) == 1
    assert hermite_number(1) == 0
    assert hermite_number(2) == -2
    assert hermite_number(4) == 12
    x = mpf("0.3")
    assert euler_polynomial(1, x) == x - mpf("0.5")
    assert euler_polynomial(1, 0) == mpf("-0.5")
    assert abs(euler_polynomial(2, x) - (x * x - x)) < mpf("1e-55")
    assert abs(euler_polynomial(3, x) - (x**3 - mpf("1.5") * x**2 + mpf("0.25"))) < mpf("1e-55")


def test_euler_polynomial_expansion():
    assert abs(t_euler_poly_expansion(1, 0, mpf("1e-12"), 2) - 1) < mpf("1e-10")
    z = mpf("1e-4")
    target = 2 * mp.exp(-z / 4) * (1 - t_direct(F(1, 1, z)))
    assert abs(t_euler_poly_expansion(1, 1, z, 6) - target) <= mpf("1e-8")
    # odd-order terms vanish, so N = 2r + 1 and N = 2r + 2 give the same sum
    for r in range(4):
        assert t_euler_poly_expansion(2, 1, z, 2 * r + 1) == t_euler_poly_expansion(2, 1, z, 2 * r + 2)

"""Asymptotic expansions for alternating quadratic sums of a growth function f.

f is described by a growth profile (beta, alpha, gamma):

    f(X) ~ exp(beta sqrt X) X^(-alpha) sum_n gamma_n X^(-n/2).

From the profile we build the shift coefficients lambda_{n,j}, the operator
coefficients of the central (b small) and tail (b large) expansions, and the
hyperbolic closed forms used for the partition statistics.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass
from functools import lru_cache
from math import comb, factorial

import mpmath as mp

from .errors import DegenerateB, GammaTooShort, OrderTooHigh, RegimeViolation
from .false_theta import KERNEL, apply_operator, logistic_deriv


@dataclass(frozen=True)
class GrowthProfile:
    beta: object
    alpha: object
    gamma: tuple
    label: str = ""

    def __post_init__(self):
        if not self.beta > 0:
            raise ValueError("beta must be positive")
        if not self.gamma or not self.gamma[0] > 0:
            raise ValueError("gamma[0] must be positive")


# ---------------------------------------------------------------------------
# truncated power series with mpmath coefficients
# ---------------------------------------------------------------------------

def _ser_mul(a, b, N):
    out = [mp.mpf(0)] * (N + 1)
    for i, ai in enumerate(a[: N + 1]):
        if ai:
            for j, bj in enumerate(b[: N + 1 - i]):
                out[i + j] += ai * bj
    return out


def _ser_inv(a, N):
    out = [1 / a[0]]
    for n in range(1, N + 1):
        acc = mp.fsum(a[j] * out[n - j] for j in range(1, min(n, len(a) - 1) + 1))
        out.append(-acc / a[0])
    return out


def _ser_exp(a, N):
    """exp of a series with zero constant term, via n e_n = sum_j j a_j e_{n-j}."""
    a = list(a) + [mp.mpf(0)] * (N + 1 - len(a))
    out = [mp.mpf(1)]
    for n in range(1, N + 1):
        out.append(mp.fsum(j * a[j] * out[n - j] for j in range(1, n + 1)) / n)
    return out


def _ser_binom_pow(c, e, N):
    """(1 + c w^2)^e as a series in w."""
    out = [mp.mpf(0)] * (N + 1)
    for i in range(N // 2 + 1):
        out[2 * i] = mp.binomial(e, i) * c**i
    return out


# ---------------------------------------------------------------------------
# built-in profiles
# ---------------------------------------------------------------------------

def partition_gamma(count: int = 40) -> tuple:
    """gamma_n for p(n), read off the leading Rademacher term.

    With lam = sqrt(X - 1/24) and C = pi sqrt(2/3),
        p(X) ~ exp(C lam) / (4 sqrt 3 lam^2) * (1 - 1/(C lam)),
    which up to exponentially small terms is a power series in w = X^(-1/2)
    times exp(C sqrt X) / X.
    """
    N = count - 1
    C = mp.pi * mp.sqrt(mp.mpf(2) / 3)
    eps = mp.mpf(1) / 24
    # C sqrt X (sqrt(1 - eps w^2) - 1) = sum_{j>=1} C binom(1/2, j) (-eps)^j w^(2j-1)
    expo = [mp.mpf(0)] * (N + 1)
    for j in range(1, N // 2 + 2):
        if 2 * j - 1 <= N:
            expo[2 * j - 1] = C * mp.binomial(mp.mpf(1) / 2, j) * (-eps) ** j
    series = _ser_exp(expo, N)
    series = _ser_mul(series, _ser_binom_pow(-eps, -1, N), N)
    # 1 - 1/(C lam) = 1 - (w/C)(1 - eps w^2)^(-1/2)
    inv_sqrt = _ser_binom_pow(-eps, -mp.mpf(1) / 2, N)
    corr = [mp.mpf(1)] + [-inv_sqrt[i - 1] / C for i in range(1, N + 1)]
    series = _ser_mul(series, corr, N)
    g0 = 1 / (4 * mp.sqrt(3))
    return tuple(g0 * s for s in series)


def _make_partition_profile() -> GrowthProfile:
    return GrowthProfile(2 * mp.pi / mp.sqrt(6), mp.mpf(1), partition_gamma(), "p")


PARTITION = _make_partition_profile()


def partition_profile() -> GrowthProfile:
    """PARTITION rebuilt at the current working precision."""
    return _make_partition_profile()


def colored_profile(k: int, alpha, gamma) -> GrowthProfile:
    """Profile for p_k with beta = 2 pi sqrt(k/6); alpha and gamma come from the caller."""
    if k < 1:
        raise ValueError("k must be a positive integer")
    return GrowthProfile(2 * mp.pi * mp.sqrt(mp.mpf(k) / 6), mp.mpf(alpha),
                         tuple(mp.mpf(g) for g in gamma), f"p_{k}")


COLORED = colored_profile


def profile_value(profile: GrowthProfile, X, terms: int | None = None):
    """exp(beta sqrt X) X^(-alpha) sum_n gamma_n X^(-n/2)."""
    X = mp.mpf(X)
    g = profile.gamma if terms is None else profile.gamma[:terms]
    w = 1 / mp.sqrt(X)
    return mp.exp(profile.beta * mp.sqrt(X)) * X ** (-profile.alpha) * mp.polyval(list(reversed(g)), w)


# ---------------------------------------------------------------------------
# shift coefficients lambda_{n,j}
# ---------------------------------------------------------------------------

def d_coeffs(profile: GrowthProfile, k_max: int, l_max: int) -> dict:
    """d_{k,l} = beta^l / l! [t^k] phi(t)^l with phi(t) = sum_h binom(1/2, h+2) t^h."""
    phi = [mp.binomial(mp.mpf(1) / 2, h + 2) for h in range(k_max + 1)]
    out = {}
    power = [mp.mpf(1)] + [mp.mpf(0)] * k_max
    for l in range(l_max + 1):
        scale = profile.beta**l / factorial(l)
        for k in range(k_max + 1):
            out[k, l] = scale * power[k]
        power = _ser_mul(power, phi, k_max)
    return out


def c_coeffs(profile: GrowthProfile, g_max: int, h_max: int) -> dict:
    """c_{g,h}: coefficients of (sum gamma_n w^n)^(-1) sum binom(-n/2-alpha, g) gamma_n w^n."""
    if len(profile.gamma) <= h_max:
        raise GammaTooShort(f"need gamma_0..gamma_{h_max}, profile has {len(profile.gamma)}")
    gam = [mp.mpf(x) for x in profile.gamma[: h_max + 1]]
    inv = _ser_inv(gam, h_max)
    out = {}
    for g in range(g_max + 1):
        row = [mp.binomial(-mp.mpf(n) / 2 - profile.alpha, g) * gam[n] for n in range(h_max + 1)]
        prod = _ser_mul(inv, row, h_max)
        for h in range(h_max + 1):
            out[g, h] = prod[h]
    return out


@lru_cache(maxsize=64)
def _lambda_cached(profile: GrowthProfile, max_index: int, dps: int) -> dict:
    N = max_index
    d = d_coeffs(profile, N, N // 2)
    c = c_coeffs(profile, N, N // 2)
    lam = {}
    for n in range(N + 1):
        for j in range(N + 1):
            if (n - j) % 2:
                lam[n, j] = mp.mpf(0)
                continue
            total = mp.mpf(0)
            for l in range(j // 2 + 1):
                h = l + (n - j) // 2
                if h < 0:
                    continue
                for g in range(j - 2 * l + 1):
                    k = j - 2 * l - g
                    total += c[g, h] * d[k, l]
            lam[n, j] = total
    return lam


def lambda_table(profile: GrowthProfile, max_index: int) -> dict:
    """{(n, j): lambda_{n,j}} for 0 <= n, j <= max_index.

    f(X+r)/f(X) ~ exp(beta r / 2 sqrt X) sum_j (r X^(-3/4))^j sum_n lambda_{n,j} X^(-n/4).
    """
    if max_index < 0:
        raise ValueError("max_index must be nonnegative")
    return _lambda_cached(profile, max_index, mp.mp.dps)


def shift_ratio(profile: GrowthProfile, X, r, p: int):
    """f(X+r)/f(X) from the lambda expansion, keeping terms with n + 3j < 3p and j < p."""
    X, r = mp.mpf(X), mp.mpf(r)
    if abs(r) >= X:
        raise ValueError("need |r| < X")
    if r == 0:
        return mp.mpf(1)
    lam = lambda_table(profile, 3 * p)
    q = X ** (-mp.mpf(1) / 4)
    total = mp.mpf(0)
    for j in range(p):
        inner = mp.fsum(lam[n, j] * q**n for n in range(3 * (p - j)))
        total += (r * q**3) ** j * inner
    return mp.exp(profile.beta * r / (2 * mp.sqrt(X))) * total


# ---------------------------------------------------------------------------
# operator coefficients
# ---------------------------------------------------------------------------

@lru_cache(maxsize=64)
def _central_cached(g: int, profile: GrowthProfile, dps: int) -> dict:
    lam = lambda_table(profile, max(2 * g, 1))
    half = profile.beta / 2
    out = {}
    for r in range(2 * g // 3 + 1):
        for l in range((2 * g - 3 * r) // 2 + 1):
            for s in range((2 * g - 3 * r - 2 * l) // 2 + 1):
                sl = s + l
                total = mp.mpf(0)
                for j in range(sl + 1):
                    n = 2 * g - j - 2 * sl - 3 * r
                    if n < 0:
                        continue
                    total += half ** (sl - j) / factorial(sl - j) * comb(j + r, r) * lam[n, j + r]
                out[r, l, s] = (-1) ** s * comb(sl, s) * total
    return out


def coeff_C_central(g: int, profile: GrowthProfile) -> dict:
    """{(r, l, s): C_{r,l,s}(g)} for 3r + 2l + 2s <= 2g (the others vanish)."""
    if g < 0:
        raise ValueError("g must be nonnegative")
    return _central_cached(g, profile, mp.mp.dps)


@lru_cache(maxsize=64)
def _tail_cached(g: int, profile: GrowthProfile, dps: int) -> dict:
    lam = lambda_table(profile, max(2 * g, 1))
    half = profile.beta / 2
    out = {}
    for l in range(g + 1):
        for s in range(g - l + 1):
            ls = l + s
            total = mp.mpf(0)
            for j in range(ls + 1):
                n = 2 * g - j - 2 * ls
                if n < 0:
                    continue
                total += half ** (ls - j) / factorial(ls - j) * lam[n, j]
            out[l, s] = (-1) ** ls * comb(ls, s) * total
    return out


def coeff_C_tail(g: int, profile: GrowthProfile) -> dict:
    """{(l, s): C_{l,s}(g)} for l + s <= g (the others vanish)."""
    if g < 0:
        raise ValueError("g must be nonnegative")
    return _tail_cached(g, profile, mp.mp.dps)


# ---------------------------------------------------------------------------
# expansions of S_f(a, b + mu; X)
# ---------------------------------------------------------------------------

def central_operator(g: int, profile: GrowthProfile, a, b, mu) -> dict:
    """L_{f,g}(mu, a, b, d) as {derivative order: coefficient}."""
    op: dict = {}
    for (r, l, s), c in coeff_C_central(g, profile).items():
        order = r + l + 2 * s
        op[order] = op.get(order, 0) + c * a**s * b**r * mu**l
    return op


def sf_ratio_central(profile: GrowthProfile, a, b, mu, X, p: int):
    """S_f(a, b+mu; X) / f(X) for b small against X^(3/4)."""
    a, b, mu, X = mp.mpf(a), mp.mpf(b), mp.mpf(mu), mp.mpf(X)
    if b < 0:
        raise ValueError("b must be nonnegative")
    if 6 * p - 2 > KERNEL.max_order:
        raise OrderTooHigh(f"p = {p} needs D_{6 * p - 2}, kernel stops at {KERNEL.max_order}")
    if b > X ** mp.mpf("0.74"):
        warnings.warn("b is beyond X^0.74; the central expansion may be inaccurate", stacklevel=2)
    alpha = b * profile.beta / (2 * mp.sqrt(X))
    total = mp.mpf(0)
    for g in range(3 * p):
        total += X ** (-mp.mpf(g) / 2) * apply_operator(central_operator(g, profile, a, b, mu), alpha)
    return total


def tail_threshold(X) -> object:
    """Smallest b for which the tail expansion is used: sqrt(X) log X."""
    X = mp.mpf(X)
    return mp.sqrt(X) * mp.log(X)


def sf_ratio_tail(profile: GrowthProfile, a, b, mu, X, order: int = 4, table=None):
    """S_f(a, b+mu; X) / f(X-b) for b large.

    With an exact table and b > X/3 the single surviving term f(X-a-b-mu) is
    used.  Otherwise b must satisfy sqrt(X) log X <= b < X and the expansion
    in (X-b)^(-1/2) is summed over g < order.
    """
    if table is not None and 3 * b > X:
        e = X - a - b - mu
        if e != int(e) or X - b != int(X - b):
            raise ValueError("exact branch needs integral arguments")
        return mp.mpf(table(int(e))) / table(int(X - b))
    a, b, mu, X = mp.mpf(a), mp.mpf(b), mp.mpf(mu), mp.mpf(X)
    if not tail_threshold(X) <= b < X:
        raise RegimeViolation("b is outside the tail regime sqrt(X) log X <= b < X")
    Y = X - b
    total = mp.mpf(0)
    for g in range(order):
        inner = mp.fsum(c * mu**l * a**s for (l, s), c in coeff_C_tail(g, profile).items())
        total += Y ** (-mp.mpf(g) / 2) * inner
    return total


def delta_operator_M(J: int, profile: GrowthProfile, a, alpha) -> dict:
    """M_{f,J}(a, d) = (4 alpha_f - 1 + J) J d^J + 2 (J + 2 alpha_f) alpha d^(J+1) + (a beta^2 + alpha^2) d^(J+2)."""
    af, beta = profile.alpha, profile.beta
    return {
        J: (4 * af - 1 + J) * J,
        J + 1: 2 * (J + 2 * af) * alpha,
        J + 2: a * beta**2 + alpha**2,
    }


def sf_delta_ratio(J: int, profile: GrowthProfile, a, b, mu, X, allow_degenerate: bool = False):
    """Delta_u^J S_f(a, b + u mu; X) at u = 0, divided by f(X); two leading orders.

    The expansion point alpha = (2b + mu J) beta / (4 sqrt X) vanishes when
    2b = -mu J.  That case is rejected unless allow_degenerate is set; the
    formula itself stays finite there (the m = 0 crank/rank value uses it).
    """
    a, b, mu, X = mp.mpf(a), mp.mpf(b), mp.mpf(mu), mp.mpf(X)
    if J < 0:
        raise ValueError("J must be nonnegative")
    if J > 0 and 2 * b == -mu * J and not allow_degenerate:
        raise DegenerateB("2b = -mu J makes the expansion point degenerate")
    if b < 0:
        raise ValueError("b must be nonnegative")
    beta = profile.beta
    sx = mp.sqrt(X)
    alpha = (2 * b + mu * J) * beta / (4 * sx)
    main = logistic_deriv(J, alpha)
    corr = apply_operator(delta_operator_M(J, profile, a, alpha), alpha)
    return X ** (-mp.mpf(J) / 2) * (mu * beta / 2) ** J * (main - corr / (2 * beta * sx))


def sf_delta_a_ratio(J: int, profile: GrowthProfile, a0, a1, b, mu, X):
    """Difference in a of the J-th b-difference: (S(a1) - S(a0)) part, leading order, over f(X)."""
    a0, a1, b, mu, X = (mp.mpf(v) for v in (a0, a1, b, mu, X))
    beta = profile.beta
    sx = mp.sqrt(X)
    alpha = (2 * b + mu * J) * beta / (4 * sx)
    lead = (a0 - a1) * beta / (2 * sx) * logistic_deriv(J + 2, alpha)
    return X ** (-mp.mpf(J) / 2) * (mu * beta / 2) ** J * lead


# ---------------------------------------------------------------------------
# closed hyperbolic forms
# ---------------------------------------------------------------------------

COLORED_FAMILIES = ("J", "A", "B")
RANK_FAMILIES = ("I", "N", "NDIFF", "IKDIFF", "NKDIFF")
ALIASES = {"CRANK": ("N", 1), "RANK": ("N", 2)}

# hyperbolic: leading sech/tanh law for m small against n^(3/4)
# uniform: law uniform in m, with the statistic read at n + |m|
# two-term: finite-difference expansion with its first correction
SELECTORS = {
    "J": ("hyperbolic", "uniform", "two-term"),
    "A": ("hyperbolic", "uniform", "two-term"),
    "B": ("hyperbolic", "uniform", "two-term"),
    "I": ("hyperbolic", "uniform", "two-term"),
    "N": ("hyperbolic", "uniform", "two-term"),
    "NDIFF": ("hyperbolic", "uniform", "two-term"),
    "IKDIFF": ("hyperbolic",),
    "NKDIFF": ("hyperbolic",),
}


def default_selector(family: str) -> str:
    return SELECTORS[family][0]


def delta_k(k: int, n):
    """sqrt(k pi^2 / 6n)."""
    return mp.sqrt(k * mp.pi**2 / (6 * mp.mpf(n)))


def _sech2(x):
    return mp.sech(x) ** 2


def closed_ratio(family: str, m: int, k: int, n: int, selector: str | None = None):
    """Closed-form prediction of a statistic divided by p_k(n) (J, A, B) or p(n) (the rest).

    For the uniform selector the statistic is read at the shifted argument
    n + |m| (J: j_{m,k}(n + |m|) as well), while the normaliser stays p_k(n).
    """
    family = family.upper()
    if family in ALIASES:
        family, k = ALIASES[family]
    if family not in SELECTORS:
        raise ValueError(f"unknown family {family!r}")
    selector = selector or default_selector(family)
    if selector not in SELECTORS[family]:
        raise ValueError(f"selector {selector!r} does not apply to family {family}")
    if n < 1:
        raise ValueError("n must be positive")
    if selector == "two-term":
        return two_term_ratio(family, m, k, n)
    kk = k if family in COLORED_FAMILIES else 1
    d = delta_k(kk, n)
    M = abs(m)
    if selector == "hyperbolic":
        if family in ("J", "I"):
            return (1 - mp.tanh((2 * M - 1) * d / 4)) / 2
        if family in ("A", "N"):
            return d / 4 * _sech2(m * d / 2)
        if family in ("B", "NDIFF"):
            x = (2 * m + 1) * d / 4
            return d**2 / 4 * _sech2(x) * mp.tanh(x)
    if selector == "uniform":
        w = 1 + mp.exp(-M * d)
        if family in ("J", "I"):
            return 1 / w
        if family in ("A", "N"):
            return d / w**2
        if family in ("B", "NDIFF"):
            return d**2 * mp.tanh((2 * m + 1) * d / 4) / w**2
    if family == "IKDIFF":
        x = (2 * M - 1) * d / 4
        return d / 4 * _sech2(x) * mp.tanh(x)
    if family == "NKDIFF":
        y = m * d / 2
        return d**2 / 8 * _sech2(y) * (1 - 3 * mp.tanh(y) ** 2)
    raise AssertionError("unreachable")


def two_term_ratio(family: str, m: int, k: int, n: int):
    """Two-term finite-difference expansion for the statistic over its normaliser."""
    if family in COLORED_FAMILIES:
        if k != 1:
            raise ValueError("the two-term expansion for J, A, B needs alpha_f, only built in for k = 1")
        a = mp.mpf(1) / 2
        M = abs(m)
        if family == "J":
            if m == 0:
                # j_0 = a_0 + j_{-1}
                return two_term_ratio("A", 0, 1, n) + sf_delta_ratio(0, PARTITION, a, mp.mpf(1) / 2, 0, n)
            return sf_delta_ratio(0, PARTITION, a, M - mp.mpf(1) / 2, 0, n)
        if family == "A":
            return sf_delta_ratio(1, PARTITION, a, M + mp.mpf(1) / 2, -1, n, allow_degenerate=True)
        if m < 0:
            raise ValueError("b_{m,k} needs m >= 0")
        return sf_delta_ratio(2, PARTITION, a, m + mp.mpf(3) / 2, -1, n)
    a = k - mp.mpf(1) / 2
    M = abs(m)
    if family == "I":
        if m == 0:
            # I_k(0) = N_k(0) + I_k(1)
            return two_term_ratio("N", 0, k, n) + two_term_ratio("I", 1, k, n)
        return sf_delta_ratio(0, PARTITION, a, M - mp.mpf(1) / 2, 0, n)
    if family == "N":
        return sf_delta_ratio(1, PARTITION, a, M + mp.mpf(1) / 2, -1, n, allow_degenerate=True)
    if family == "NDIFF":
        if m < 0:
            return -two_term_ratio("NDIFF", -m - 1, k, n)
        return sf_delta_ratio(2, PARTITION, a, m + mp.mpf(3) / 2, -1, n)
    raise ValueError(f"no two-term expansion for {family}")


def peak_prediction(k: int, n) -> object:
    """(1/2pi) sqrt(6n/k) log(2 + sqrt 3)."""
    return mp.sqrt(6 * mp.mpf(n) / k) * mp.log(2 + mp.sqrt(3)) / (2 * mp.pi)


def min_diff_prediction(n) -> object:
    """(sqrt(6n)/pi) log(2 + sqrt 3)."""
    return mp.sqrt(6 * mp.mpf(n)) * mp.log(2 + mp.sqrt(3)) / mp.pi


def b_critical_point(k: int, n) -> object:
    """m at which sech^2(x) tanh(x), x = (2m+1) delta_k / 4, is largest: tanh^2 x = 1/3."""
    return mp.log(2 + mp.sqrt(3)) / delta_k(k, n) - mp.mpf(1) / 2

"""The false theta function T_{a,b}(z) = sum_{n>=1} (-1)^(n-1) exp(-(a n^2 + b n) z).

Three evaluation routes are provided: direct summation, the Euler transform
of the alternating series, and the small-z expansion in derivatives of the
logistic function 1/(1+e^alpha).  All return mpmath numbers at the current
working precision.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import comb, factorial
from typing import Callable

import mpmath as mp

from .errors import NoConvergence, OrderTooHigh
from .precision import default_tol

DEFAULT_J_MAX = 40


@dataclass(frozen=True)
class FalseThetaParams:
    a: object
    b: object
    z: object

    def __post_init__(self):
        if not self.a > 0:
            raise ValueError("a must be positive")
        if mp.re(mp.mpmathify(self.z)) <= 0:
            raise ValueError("Re(z) must be positive")

    def in_sector(self) -> bool:
        z = mp.mpmathify(self.z)
        return abs(mp.im(z)) <= mp.re(z)


# ---------------------------------------------------------------------------
# logistic derivative kernel
# ---------------------------------------------------------------------------

class LogisticKernel:
    """D_J(alpha) = d^J/dalpha^J [1/(1+e^alpha)] as integer polynomials in g.

    With g = 1/(1+e^alpha) one has g' = g^2 - g, so each D_J is a polynomial of
    degree J+1 in g with integer coefficients.
    """

    def __init__(self, max_order: int = DEFAULT_J_MAX):
        self.max_order = max_order
        polys = [[0, 1]]
        for _ in range(max_order):
            prev = polys[-1]
            nxt = [0] * (len(prev) + 1)
            for i, c in enumerate(prev):
                if c and i:
                    nxt[i + 1] += i * c
                    nxt[i] -= i * c
            polys.append(nxt)
        self.polys = tuple(tuple(p) for p in polys)

    def poly(self, J: int) -> tuple:
        self._check(J)
        return self.polys[J]

    def _check(self, J: int) -> None:
        if J < 0:
            raise ValueError("derivative order must be nonnegative")
        if J > self.max_order:
            raise OrderTooHigh(f"D_{J} requested, kernel built to J_max = {self.max_order}")

    def __call__(self, J: int, alpha):
        self._check(J)
        alpha = mp.mpmathify(alpha)
        if isinstance(alpha, mp.mpf) and alpha < 0:
            # D_0(-a) = 1 - D_0(a), D_J(-a) = (-1)^(J+1) D_J(a); avoids cancellation near g = 1
            val = self(J, -alpha)
            if J == 0:
                return 1 - val
            return val if J % 2 else -val
        g = 1 / (1 + mp.exp(alpha))
        acc = mp.mpf(0)
        for c in reversed(self.polys[J]):
            acc = acc * g + c
        return acc


KERNEL = LogisticKernel()


def logistic_deriv(J: int, alpha, kernel: LogisticKernel | None = None):
    return (kernel or KERNEL)(J, alpha)


def apply_operator(op: dict, alpha, kernel: LogisticKernel | None = None):
    """Evaluate sum_J op[J] * D_J(alpha) for an operator given as {order: coefficient}."""
    kernel = kernel or KERNEL
    return mp.fsum(c * kernel(J, alpha) for J, c in op.items() if c)


# ---------------------------------------------------------------------------
# direct summation
# ---------------------------------------------------------------------------

def t_direct(params: FalseThetaParams, tol=None, ell: int = 0, max_terms: int = 10**6):
    """sum_{n>=1} (-1)^(n-1) n^ell exp(-(a n^2 + b n) z), summed until the next term < tol.

    Without an explicit tol the cut-off is relative to the first term, so values
    far below 1 (large b z) keep full relative precision.
    """
    a, b, z = mp.mpf(params.a), mp.mpf(params.b), mp.mpmathify(params.z)
    if tol is None:
        tol = default_tol() * abs(mp.exp(-(a + b) * z))
    tol = mp.mpf(tol)
    total = mp.mpf(0)
    n = 1
    while True:
        term = mp.mpf(n) ** ell * mp.exp(-(a * n * n + b * n) * z)
        if abs(term) < tol and (ell == 0 or n * n * a * mp.re(z) > ell):
            return total
        total += term if n % 2 else -term
        n += 1
        if n > max_terms:
            raise NoConvergence(f"no convergence after {max_terms} terms")


def direct_partial_sums(params: FalseThetaParams, count: int) -> list:
    a, b, z = mp.mpf(params.a), mp.mpf(params.b), mp.mpmathify(params.z)
    out, total = [], mp.mpf(0)
    for n in range(1, count + 1):
        term = mp.exp(-(a * n * n + b * n) * z)
        total += term if n % 2 else -term
        out.append(total)
    return out


# ---------------------------------------------------------------------------
# Euler transform
# ---------------------------------------------------------------------------

def _differences(h: Callable[[int], object], start: int, K: int) -> list:
    """[Delta^r h(start) for r = 0..K]."""
    row = [h(start + i) for i in range(K + 1)]
    out = [row[0]]
    for _ in range(K):
        row = [row[i + 1] - row[i] for i in range(len(row) - 1)]
        out.append(row[0])
    return out


def euler_transform_parts(h: Callable[[int], object], x, K: int, tol=None, max_terms: int = 10**6):
    """(head, remainder) of sum_{n>=0} x^n h(n) after K Euler-transform steps.

    head = sum_{r<K} x^r Delta^r h(0) / (1-x)^(r+1)
    remainder = (x/(1-x))^K sum_{n>=0} x^n Delta^K h(n)
    """
    if K < 1:
        raise ValueError("K must be a positive integer")
    tol = default_tol() if tol is None else mp.mpf(tol)
    x = mp.mpmathify(x)
    one_minus = 1 - x
    diffs = _differences(h, 0, K - 1)
    head = mp.fsum(x**r * diffs[r] / one_minus ** (r + 1) for r in range(K))
    bound = 2**K
    acc = mp.mpf(0)
    xn = mp.mpf(1)
    window = [h(i) for i in range(K + 1)]
    for n in range(max_terms):
        dk = window
        for _ in range(K):
            dk = [dk[i + 1] - dk[i] for i in range(len(dk) - 1)]
        acc += xn * dk[0]
        if abs(xn) * bound * max(abs(v) for v in window) < tol:
            break
        window = window[1:] + [h(n + K + 1)]
        xn *= x
    else:
        raise NoConvergence("Euler-transform remainder did not converge")
    remainder = (x / one_minus) ** K * acc
    return head, remainder


def euler_transform_sum(h: Callable[[int], object], x, K: int, tol=None):
    head, rem = euler_transform_parts(h, x, K, tol)
    return head + rem


def t_euler(params: FalseThetaParams, K: int = 8, tol=None):
    """T_{a,b}(z) = 1 - sum_{n>=0} x^n h(n) with x = -e^{-bz}, h(n) = e^{-a z n^2}."""
    a, b, z = mp.mpf(params.a), mp.mpf(params.b), mp.mpmathify(params.z)
    u = a * z

    def h(n):
        return mp.exp(-u * n * n)

    return 1 - euler_transform_sum(h, -mp.exp(-b * z), K, tol)


# ---------------------------------------------------------------------------
# uniform small-z expansion
# ---------------------------------------------------------------------------

def t_uniform(ell: int, params: FalseThetaParams, p: int, kernel: LogisticKernel | None = None):
    """(-1)^ell sum_{k<p} (-a z)^k / k! D_{2k+ell}(b z).

    Approximates sum (-1)^(n-1) n^ell e^{-(a n^2 + b n) z} with an O(|z|^p) error
    uniform in b >= 0, inside the sector |Im z| <= Re z.
    """
    kernel = kernel or KERNEL
    if 2 * p + ell > kernel.max_order:
        raise OrderTooHigh(f"2p + ell = {2 * p + ell} exceeds J_max = {kernel.max_order}")
    if not params.in_sector():
        raise ValueError("uniform expansion needs |Im z| <= Re z")
    a, b, z = mp.mpf(params.a), mp.mpf(params.b), mp.mpmathify(params.z)
    zz = a * z
    alpha = b * z
    total = mp.fsum((-zz) ** k / factorial(k) * kernel(2 * k + ell, alpha) for k in range(p))
    return -total if ell % 2 else total


def p_operator(k: int, J: int, mu, a, b) -> dict:
    """P_{k,J}(mu, a, b, d/dalpha) as {derivative order: coefficient}.

    P_{k,J} = 1/k! sum_{r<=J, s<=k+J-r} C(J,r) C(J-r+k,s) mu^(k+J-s-r) (-a)^s b^r d^(s+k+J).
    """
    op: dict = {}
    for r in range(J + 1):
        for s in range(k + J - r + 1):
            c = comb(J, r) * comb(J - r + k, s) * mu ** (k + J - s - r) * (-a) ** s * b**r
            order = s + k + J
            op[order] = op.get(order, 0) + c
    kf = factorial(k)
    return {o: c / kf if kf > 1 else c for o, c in op.items()}


def t_z_derivative_asym(J: int, mu, params: FalseThetaParams, p: int, kernel: LogisticKernel | None = None):
    """sum_{k<p} z^k P_{k,J}(mu, a, b, d) D(alpha) at alpha = b z; approximates d^J/dz^J T_{a,b+mu}(z)."""
    kernel = kernel or KERNEL
    if 2 * (p - 1) + 2 * J > kernel.max_order:
        raise OrderTooHigh("operator order exceeds the kernel's J_max")
    a, b, z = mp.mpf(params.a), mp.mpf(params.b), mp.mpf(params.z)
    mu = mp.mpf(mu)
    alpha = b * z
    return mp.fsum(z**k * apply_operator(p_operator(k, J, mu, a, b), alpha, kernel) for k in range(p))


# ---------------------------------------------------------------------------
# Euler-polynomial expansion
# ---------------------------------------------------------------------------

def hermite_number(n: int) -> int:
    """H_n(0) = d^n/dt^n e^{-t^2} at t = 0."""
    if n < 0:
        raise ValueError("n must be nonnegative")
    if n % 2:
        return 0
    h = n // 2
    return (-1) ** h * factorial(n) // factorial(h)


def euler_polynomials(n_max: int, x) -> list:
    """[E_0(x), ..., E_{n_max}(x)] from E_n(x) = x^n - 1/2 sum_{k<n} C(n,k) E_k(x)."""
    x = mp.mpmathify(x)
    out = []
    for n in range(n_max + 1):
        acc = mp.fsum(comb(n, k) * out[k] for k in range(n))
        out.append(x**n - acc / 2)
    return out


def euler_polynomial(n: int, x):
    return euler_polynomials(n, x)[n]


def t_euler_poly_expansion(a, b, z, N: int):
    """sum_{n<N} E_n(b/2a) H_n(0)/n! (a z)^(n/2), an approximation of 2 e^{-b^2 z/4a} (1 - T_{a,b}(z))."""
    a, b, z = mp.mpf(a), mp.mpf(b), mp.mpf(z)
    E = euler_polynomials(max(N - 1, 0), b / (2 * a))
    az = a * z
    total = mp.mpf(0)
    for n in range(0, N, 2):  # odd Hermite numbers vanish
        total += E[n] * hermite_number(n) / factorial(n) * az ** (n // 2)
    return total

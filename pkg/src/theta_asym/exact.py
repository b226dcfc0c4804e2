"""Exact alternating quadratic sums and the partition statistics built on them.

Every statistic here reduces to

    S_f(a, b; X) = sum_{l >= 1, a l^2 + b l <= X} (-1)^(l-1) f(X - (a l^2 + b l))

with half-integral a, b.  They are stored doubled (a2 = 2a, b2 = 2b) so that
all exponent arithmetic stays in the integers.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, field
from math import comb
from typing import Sequence

from .errors import NegativeM, TableTooShort
from .partitions import PartitionTable, brute_force_partitions, eta_power_series


@dataclass(frozen=True)
class QuadSumSpec:
    a2: int
    b2: int
    X: int

    def __post_init__(self):
        if self.a2 < 1:
            raise ValueError("a2 = 2a must be a positive integer")
        if (self.a2 + self.b2) % 2:
            raise ValueError("a*l^2 + b*l must be integral: a2 + b2 has to be even")
        if self.a2 + self.b2 < 0:
            # keeps every exponent a l^2 + b l >= 0, so f is never read past X
            raise ValueError("a + b must be nonnegative")
        if self.X < 0:
            raise ValueError("X must be nonnegative")

    def exponent(self, l: int) -> int:
        return (self.a2 * l * l + self.b2 * l) // 2


def alt_quad_sum(f: PartitionTable, spec: QuadSumSpec) -> int:
    X = spec.X
    if f.max_n < X:
        raise TableTooShort(f"S_f needs f up to {X}, table stops at {f.max_n}")
    vals = f.values
    total = 0
    l = 1
    while True:
        e = spec.exponent(l)
        if e > X:
            return total
        if l % 2:
            total += vals[X - e]
        else:
            total -= vals[X - e]
        l += 1


def quad_sum(f: PartitionTable, a2: int, b2: int, X: int) -> int:
    return alt_quad_sum(f, QuadSumSpec(a2, b2, X))


def forward_difference(J: int, g: Sequence[int]) -> int:
    """Delta^J g(0) = sum_j (-1)^(J-j) C(J, j) g(j)."""
    if len(g) < J + 1:
        raise ValueError(f"need {J + 1} samples, got {len(g)}")
    return sum((-1) ** (J - j) * comb(J, j) * g[j] for j in range(J + 1))


def delta_quad_sum(f: PartitionTable, a2: int, b2: int, J: int, X: int) -> int:
    """Delta_u^J at u=0 of S_f(a, b - u; X), i.e. finite differences with mu = -1."""
    return forward_difference(J, [quad_sum(f, a2, b2 - 2 * u, X) for u in range(J + 1)])


def _check_colors(f: PartitionTable, k: int) -> None:
    if f.k != k:
        raise ValueError(f"table holds p_{f.k}, statistic needs p_{k}")


def j_coeff(m: int, k: int, n: int, f: PartitionTable) -> int:
    """j_{m,k}(n - m*[m > 0]) = S_{p_k}(1/2, |m| - 1/2; n)."""
    _check_colors(f, k)
    return quad_sum(f, 1, 2 * abs(m) - 1, n)


def a_coeff(m: int, k: int, n: int, f: PartitionTable) -> int:
    _check_colors(f, k)
    return delta_quad_sum(f, 1, 2 * abs(m) + 1, 1, n)


def b_coeff(m: int, k: int, n: int, f: PartitionTable) -> int:
    if m < 0:
        raise NegativeM("b_{m,k}(n) is only defined for m >= 0")
    _check_colors(f, k)
    return delta_quad_sum(f, 1, 2 * m + 3, 2, n)


def _check_p(p_table: PartitionTable) -> None:
    if p_table.k != 1:
        raise ValueError("rank-type statistics are sums over the ordinary p(n) table")


def i_coeff(k: int, m: int, n: int, p_table: PartitionTable) -> int:
    """I_k(m, n) = S_p(k - 1/2, m - 1/2; n)."""
    if m < 0:
        raise ValueError("I_k(m, n) needs m >= 0")
    _check_p(p_table)
    return quad_sum(p_table, 2 * k - 1, 2 * m - 1, n)


def n_coeff(k: int, m: int, n: int, p_table: PartitionTable) -> int:
    """N_k(m, n) = I_k(|m|, n) - I_k(|m| + 1, n).

    k = 1 is the crank M(m, n) (including M(0,1) = -1, M(+-1,1) = 1) and
    k = 2 is Dyson's rank N(m, n).
    """
    _check_p(p_table)
    return delta_quad_sum(p_table, 2 * k - 1, 2 * abs(m) + 1, 1, n)


def ndiff_coeff(k: int, m: int, n: int, p_table: PartitionTable) -> int:
    """N_k(m, n) - N_k(m + 1, n)."""
    _check_p(p_table)
    if m < 0:
        return -ndiff_coeff(k, -m - 1, n, p_table)
    return delta_quad_sum(p_table, 2 * k - 1, 2 * m + 3, 2, n)


def crank_count(m: int, n: int, p_table: PartitionTable) -> int:
    return n_coeff(1, m, n, p_table)


def rank_count(m: int, n: int, p_table: PartitionTable) -> int:
    return n_coeff(2, m, n, p_table)


# ---------------------------------------------------------------------------
# independent oracles
# ---------------------------------------------------------------------------

@dataclass
class BiSeriesOracle:
    """Truncated expansion sum_m sum_n j_{m,k}(n) zeta^m q^n.

    rows[m] holds j_{m,k}(0..N) for -M_max-1 <= m <= M_max.
    """

    k: int
    M_max: int
    N: int
    rows: dict = field(repr=False)

    def j(self, m: int, n: int) -> int:
        if n < 0:
            return 0
        if not -self.M_max - 1 <= m <= self.M_max or n > self.N:
            raise TableTooShort(f"oracle truncated at |m| <= {self.M_max}, n <= {self.N}")
        return self.rows[m][n]

    def a(self, m: int, n: int) -> int:
        # C_k = (1 - zeta) J_k
        return self.j(m, n) - self.j(m - 1, n)

    def b(self, m: int, n: int) -> int:
        return self.a(m, n) - self.a(m + 1, n)


def lerch_oracle(k: int, M_max: int, N: int) -> BiSeriesOracle:
    """Expand q^{k/24} eta^{-k} sum_n (-1)^n q^{n(n+1)/2} / (1 - zeta q^n) for |q| < |zeta| < 1."""
    if k < 1 or M_max < 1 or N < 0:
        raise ValueError("need k >= 1, M_max >= 1, N >= 0")
    pk = eta_power_series(-k, N).coeffs
    rows = {}
    for m in range(-M_max - 1, M_max + 1):
        lerch = [0] * (N + 1)
        if m >= 0:
            # n >= 0 terms: (-1)^n q^{n(n+1)/2 + n m}
            t = 0
            while True:
                e = t * (t + 1) // 2 + t * m
                if e > N:
                    break
                lerch[e] += -1 if t % 2 else 1
                t += 1
        else:
            # n = -t <= -1 terms: -(-1)^t q^{t(t-1)/2 + t|m|}
            M = -m
            t = 1
            while True:
                e = t * (t - 1) // 2 + t * M
                if e > N:
                    break
                lerch[e] += 1 if t % 2 else -1
                t += 1
        row = [0] * (N + 1)
        for e, c in enumerate(lerch):
            if c:
                for i in range(N + 1 - e):
                    row[e + i] += c * pk[i]
        rows[m] = tuple(row)
    return BiSeriesOracle(k, M_max, N, rows)


def theta_product_oracle(k: int, N: int) -> dict:
    """a_{m,k}(n) for n <= N straight from the triple product.

    C_k(z, tau) = prod (1-q^n)^{2-k} / prod (1 - zeta q^n)(1 - zeta^{-1} q^n).
    Returns {m: [a_{m,k}(0..N)]} for |m| <= N.
    """
    width = 2 * N + 1
    A = [[0] * (N + 1) for _ in range(width)]  # A[m + N][d]
    A[N][0] = 1
    for step in range(1, N + 1):
        # 1/(1 - zeta q^step)
        for mi in range(1, width):
            src, dst = A[mi - 1], A[mi]
            for d in range(step, N + 1):
                dst[d] += src[d - step]
        # 1/(1 - zeta^{-1} q^step)
        for mi in range(width - 2, -1, -1):
            src, dst = A[mi + 1], A[mi]
            for d in range(step, N + 1):
                dst[d] += src[d - step]
    e = 2 - k
    for step in range(1, N + 1):
        for _ in range(abs(e)):
            for row in A:
                if e > 0:
                    for d in range(N, step - 1, -1):
                        row[d] -= row[d - step]
                else:
                    for d in range(step, N + 1):
                        row[d] += row[d - step]
    return {m: A[m + N] for m in range(-N, N + 1)}


def crank_of(parts: Sequence[int]) -> int:
    """Andrews-Garvan crank of a partition of n >= 2."""
    ones = sum(1 for x in parts if x == 1)
    if ones == 0:
        return parts[0]
    return sum(1 for x in parts if x > ones) - ones


def rank_of(parts: Sequence[int]) -> int:
    return parts[0] - len(parts)


def enumerate_statistic(n: int, statistic: str) -> Counter:
    """Histogram of crank or rank over all partitions of n (brute force)."""
    fn = {"crank": crank_of, "rank": rank_of}[statistic]
    return Counter(fn(lam) for lam in brute_force_partitions(n))


def unimodal_check(seq: Sequence[int]) -> tuple[bool, int]:
    """(is_unimodal, leftmost index of the maximum)."""
    if not seq:
        raise ValueError("sequence must be nonempty")
    top = max(seq)
    peak = next(i for i, v in enumerate(seq) if v == top)
    rising = all(seq[i] <= seq[i + 1] for i in range(peak))
    falling = all(seq[i] >= seq[i + 1] for i in range(peak, len(seq) - 1))
    return rising and falling, peak

"""Exact partition numbers p_k(n) and integer power series in q.

All series are stored with the fractional q-prefactors (q^{k/24}, q^{1/24})
dropped, so index i of a coefficient list is the exponent of q^i.
"""

from __future__ import annotations

import hashlib
import os
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable

from .errors import CorruptCache, InvalidInvert, TableTooShort

CACHE_MAGIC = "THETA-ASYM-PTABLE v1"


@dataclass(frozen=True)
class PartitionTable:
    """Exact values p_k(0..max_n); k = 1 gives the ordinary p(n)."""

    k: int
    values: tuple

    @property
    def max_n(self) -> int:
        return len(self.values) - 1

    def __call__(self, n: int) -> int:
        # f(x) = 0 for x < 0
        if n < 0:
            return 0
        if n > self.max_n:
            raise TableTooShort(f"p_{self.k}({n}) requested but table stops at {self.max_n}")
        return self.values[n]

    def __len__(self) -> int:
        return len(self.values)

    def require(self, n: int) -> None:
        if n > self.max_n:
            raise TableTooShort(f"need p_{self.k} up to {n}, table stops at {self.max_n}")

    def truncate(self, N: int) -> "PartitionTable":
        self.require(N)
        return PartitionTable(self.k, self.values[: N + 1])


@dataclass(frozen=True)
class IntSeries:
    """Power series in q with integer coefficients, exact modulo q^{N+1}."""

    coeffs: tuple

    def __init__(self, coeffs: Iterable[int], N: int | None = None):
        c = [int(x) for x in coeffs]
        if N is not None:
            c = (c + [0] * (N + 1 - len(c)))[: N + 1]
        if not c:
            raise ValueError("series needs at least one coefficient")
        object.__setattr__(self, "coeffs", tuple(c))

    @property
    def N(self) -> int:
        return len(self.coeffs) - 1

    def __getitem__(self, i):
        return self.coeffs[i]

    def __len__(self) -> int:
        return len(self.coeffs)

    def __iter__(self):
        return iter(self.coeffs)

    def __eq__(self, other) -> bool:
        if isinstance(other, IntSeries):
            return self.coeffs == other.coeffs
        return list(self.coeffs) == list(other)

    def __hash__(self) -> int:
        return hash(self.coeffs)

    def __repr__(self) -> str:
        return f"IntSeries({list(self.coeffs)})"

    def __add__(self, other: "IntSeries") -> "IntSeries":
        N = min(self.N, other.N)
        return IntSeries(a + b for a, b in zip(self.coeffs[: N + 1], other.coeffs[: N + 1]))

    def __neg__(self) -> "IntSeries":
        return IntSeries(-a for a in self.coeffs)

    def __sub__(self, other: "IntSeries") -> "IntSeries":
        return self + (-other)

    def __mul__(self, other: "IntSeries") -> "IntSeries":
        N = min(self.N, other.N)
        a, b = self.coeffs, other.coeffs
        nz = [(j, bj) for j, bj in enumerate(b[: N + 1]) if bj]
        out = [0] * (N + 1)
        for i in range(N + 1):
            ai = a[i]
            if not ai:
                continue
            for j, bj in nz:
                if i + j > N:
                    break
                out[i + j] += ai * bj
        return IntSeries(out)

    def __pow__(self, e: int) -> "IntSeries":
        return series_pow(self, e)

    def invert(self) -> "IntSeries":
        return series_invert(self)


def series_invert(s: IntSeries) -> IntSeries:
    c0 = s[0]
    if c0 not in (1, -1):
        raise InvalidInvert(f"constant term {c0} is not a unit")
    N = s.N
    nz = [(j, s[j]) for j in range(1, N + 1) if s[j]]
    out = [0] * (N + 1)
    out[0] = c0
    for n in range(1, N + 1):
        acc = 0
        for j, cj in nz:
            if j > n:
                break
            acc += cj * out[n - j]
        out[n] = -acc * c0  # c0 == 1/c0 for units
    return IntSeries(out)


def series_pow(s: IntSeries, e: int) -> IntSeries:
    """s**e for any integer e via the J.C.P. Miller recurrence.

    n*g0*f_n = sum_{j=1}^n ((e+1)j - n) g_j f_{n-j}; the division is exact
    because f_n is an integer whenever g0^e is.
    """
    g0 = s[0]
    N = s.N
    if e < 0 and g0 not in (1, -1):
        raise InvalidInvert(f"negative power needs a unit constant term, got {g0}")
    if e == 0:
        return IntSeries([1], N)
    if g0 == 0:
        # factor out q^v and recurse
        v = next((i for i, c in enumerate(s.coeffs) if c), None)
        if v is None or v * e > N:
            return IntSeries([0], N)
        shifted = series_pow(IntSeries(s.coeffs[v:], N - v), e)
        return IntSeries([0] * (v * e) + list(shifted.coeffs), N)
    nz = [(j, s[j]) for j in range(1, N + 1) if s[j]]
    out = [0] * (N + 1)
    out[0] = g0**e if e > 0 else g0 ** (-e)  # unit: g0^e == g0^{-e}
    for n in range(1, N + 1):
        acc = 0
        for j, gj in nz:
            if j > n:
                break
            acc += ((e + 1) * j - n) * gj * out[n - j]
        q, r = divmod(acc, n * g0)
        if r:
            raise ArithmeticError("non-integral power series coefficient")
        out[n] = q
    return IntSeries(out)


def series_arith(op: str, *operands) -> IntSeries:
    """Dispatch helper: op in {add, mul, pow, invert}."""
    if op == "add":
        out = operands[0]
        for s in operands[1:]:
            out = out + s
        return out
    if op == "mul":
        out = operands[0]
        for s in operands[1:]:
            out = out * s
        return out
    if op == "pow":
        s, e = operands
        return series_pow(s, e)
    if op == "invert":
        (s,) = operands
        return series_invert(s)
    raise ValueError(f"unknown series op {op!r}")


def pentagonal_terms(N: int):
    """Yield (exponent, sign) of prod(1-q^n) up to q^N, by Euler's theorem."""
    yield 0, 1
    j = 1
    while True:
        g1 = j * (3 * j - 1) // 2
        if g1 > N:
            return
        sign = -1 if j % 2 else 1
        yield g1, sign
        g2 = g1 + j
        if g2 <= N:
            yield g2, sign
        j += 1


def euler_series(N: int) -> IntSeries:
    c = [0] * (N + 1)
    for e, s in pentagonal_terms(N):
        c[e] = s
    return IntSeries(c)


def eta_power_series(e: int, N: int) -> IntSeries:
    """prod_{n>=1} (1-q^n)^e through q^N; e = -k gives sum p_k(n) q^n."""
    if N < 0:
        raise ValueError("N must be nonnegative")
    return series_pow(euler_series(N), e)


def _pentagonal_p(N: int) -> list[int]:
    p = [0] * (N + 1)
    p[0] = 1
    offsets = []
    j = 1
    while True:
        g1 = j * (3 * j - 1) // 2
        if g1 > N:
            break
        offsets.append((g1, g1 + j, j % 2 == 1))
        j += 1
    for n in range(1, N + 1):
        s = 0
        for g1, g2, plus in offsets:
            if g1 > n:
                break
            t = p[n - g1]
            if g2 <= n:
                t += p[n - g2]
            if plus:
                s += t
            else:
                s -= t
        p[n] = s
    return p


def divisor_sigma_table(N: int) -> list[int]:
    sigma = [0] * (N + 1)
    for d in range(1, N + 1):
        for m in range(d, N + 1, d):
            sigma[m] += d
    return sigma


def _divisor_sum_pk(k: int, N: int) -> list[int]:
    # n p_k(n) = k sum_{j=1}^n sigma(j) p_k(n-j)
    sigma = divisor_sigma_table(N)
    p = [0] * (N + 1)
    p[0] = 1
    for n in range(1, N + 1):
        acc = 0
        for j in range(1, n + 1):
            acc += sigma[j] * p[n - j]
        p[n] = k * acc // n
    return p


def partition_table(k: int, N: int) -> PartitionTable:
    """Exact p_k(n) for 0 <= n <= N.

    k = 1 uses Euler's pentagonal recurrence; k >= 2 raises the sparse Euler
    series to the power -k.  Both cost O(N^1.5) big-integer operations.
    """
    if k < 1:
        raise ValueError("k must be a positive integer")
    if N < 0:
        raise ValueError("N must be nonnegative")
    values = _pentagonal_p(N) if k == 1 else eta_power_series(-k, N).coeffs
    return PartitionTable(k, tuple(values))


def divisor_sum_table(k: int, N: int) -> PartitionTable:
    """p_k(0..N) from n p_k(n) = k sum_j sigma(j) p_k(n-j); O(N^2), kept as a cross-check."""
    if k < 1 or N < 0:
        raise ValueError("need k >= 1 and N >= 0")
    return PartitionTable(k, tuple(_divisor_sum_pk(k, N)))


# ---------------------------------------------------------------------------
# disk cache
# ---------------------------------------------------------------------------

def _encode(table: PartitionTable) -> str:
    lines = [CACHE_MAGIC, f"k={table.k} N={table.max_n}"]
    lines.extend(f"{n}\t{v}" for n, v in enumerate(table.values))
    body = "".join(line + "\n" for line in lines)
    digest = hashlib.sha256(body.encode("ascii")).hexdigest()
    return body + f"sha256={digest}\n"


def save_table(table: PartitionTable, path: str | os.PathLike) -> None:
    path = Path(path)
    tmp = path.with_suffix(path.suffix + ".tmp")
    tmp.write_text(_encode(table), encoding="ascii", newline="\n")
    os.replace(tmp, path)


def load_table(path: str | os.PathLike, k: int | None = None) -> PartitionTable:
    try:
        raw = Path(path).read_bytes().decode("ascii")
    except (UnicodeDecodeError, OSError) as exc:
        raise CorruptCache(f"cannot read {path}: {exc}") from exc
    if not raw.endswith("\n"):
        raise CorruptCache("file does not end with a newline (truncated?)")
    lines = raw[:-1].split("\n")
    if len(lines) < 4 or lines[0] != CACHE_MAGIC:
        raise CorruptCache("bad header")
    last = lines[-1]
    if not last.startswith("sha256="):
        raise CorruptCache("missing checksum line")
    body = "".join(line + "\n" for line in lines[:-1])
    if hashlib.sha256(body.encode("ascii")).hexdigest() != last[len("sha256="):]:
        raise CorruptCache("checksum mismatch")
    try:
        kk, NN = lines[1].split(" ")
        if not (kk.startswith("k=") and NN.startswith("N=")):
            raise ValueError
        file_k, file_N = int(kk[2:]), int(NN[2:])
    except ValueError as exc:
        raise CorruptCache("bad k/N line") from exc
    rows = lines[2:-1]
    if len(rows) != file_N + 1:
        raise CorruptCache(f"expected {file_N + 1} rows, found {len(rows)}")
    values = []
    for n, row in enumerate(rows):
        idx, _, val = row.partition("\t")
        if idx != str(n) or not val:
            raise CorruptCache(f"malformed row {n}")
        values.append(int(val))
    if k is not None and file_k != k:
        raise CorruptCache(f"cache holds k={file_k}, requested k={k}")
    return PartitionTable(file_k, tuple(values))


def cache_io(mode: str, path, table: PartitionTable | None = None, k: int | None = None):
    if mode == "save":
        if table is None:
            raise ValueError("save needs a table")
        save_table(table, path)
        return None
    if mode == "load":
        return load_table(path, k=k)
    raise ValueError(f"unknown cache mode {mode!r}")


def cached_partition_table(k: int, N: int, cache_dir: str | os.PathLike | None = None) -> PartitionTable:
    """partition_table with an optional on-disk cache (one file per k)."""
    if cache_dir is None:
        return partition_table(k, N)
    path = Path(cache_dir) / f"ptable_k{k}.txt"
    if path.exists():
        try:
            table = load_table(path, k=k)
            if table.max_n >= N:
                return table.truncate(N)
        except CorruptCache:
            pass
    table = partition_table(k, N)
    Path(cache_dir).mkdir(parents=True, exist_ok=True)
    save_table(table, path)
    return table


def brute_force_partitions(n: int, max_part: int | None = None):
    """Yield all partitions of n as non-increasing tuples (small n only)."""
    if max_part is None:
        max_part = n
    if n == 0:
        yield ()
        return
    for first in range(min(n, max_part), 0, -1):
        for rest in brute_force_partitions(n - first, first):
            yield (first,) + rest

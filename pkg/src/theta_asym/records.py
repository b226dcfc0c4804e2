"""Pair each exact statistic with its closed-form prediction, and format the results."""

from __future__ import annotations

import os
from dataclasses import dataclass
from decimal import ROUND_HALF_EVEN, Decimal, localcontext

import mpmath as mp

from . import exact
from .asymptotics import ALIASES, COLORED_FAMILIES, SELECTORS, closed_ratio, default_selector
from .errors import TableTooShort
from .partitions import PartitionTable, cached_partition_table

UNIFORM_SELECTORS = ("uniform",)


class TableStore:
    """Lazily built p_k tables, grown on demand and optionally cached on disk."""

    def __init__(self, cache_dir: str | os.PathLike | None = None, limit: int | None = None):
        if limit is not None and limit < 0:
            raise ValueError("table limit must be nonnegative")
        self.cache_dir = cache_dir
        self.limit = limit
        self._tables: dict[int, PartitionTable] = {}

    def get(self, k: int, N: int) -> PartitionTable:
        if self.limit is not None and N > self.limit:
            raise TableTooShort(f"p_{k}({N}) needed but the table limit is {self.limit}")
        t = self._tables.get(k)
        if t is None or t.max_n < N:
            t = cached_partition_table(k, max(N, 0), self.cache_dir)
            self._tables[k] = t
        return t


def normalise_family(family: str, k: int) -> tuple[str, int]:
    family = family.upper()
    if family in ALIASES:
        return ALIASES[family]
    if family not in SELECTORS:
        raise ValueError(f"unknown family {family!r}; expected one of {sorted(SELECTORS) + sorted(ALIASES)}")
    return family, k


def statistic_argument(family: str, m: int, n: int, selector: str) -> int:
    """n at which the exact statistic is read: n + |m| for the uniform selectors."""
    return n + abs(m) if selector in UNIFORM_SELECTORS else n


def exact_statistic(family: str, m: int, k: int, n: int, store: TableStore, selector: str | None = None) -> int:
    family, k = normalise_family(family, k)
    selector = selector or default_selector(family)
    N = statistic_argument(family, m, n, selector)
    if family in COLORED_FAMILIES:
        f = store.get(k, N)
        if family == "J":
            return exact.j_coeff(m, k, N, f)
        if family == "A":
            return exact.a_coeff(m, k, N, f)
        return exact.b_coeff(m, k, N, f)
    p = store.get(1, N)
    if family == "I":
        return exact.i_coeff(k, abs(m), N, p)
    if family == "N":
        return exact.n_coeff(k, m, N, p)
    if family == "NDIFF":
        return exact.ndiff_coeff(k, m, N, p)
    if family == "IKDIFF":
        return exact.i_coeff(k, abs(m), N, p) - exact.i_coeff(k + 1, abs(m), N, p)
    return exact.n_coeff(k + 1, m, N, p) - exact.n_coeff(k, m, N, p)


def asymptotic_statistic(family: str, m: int, k: int, n: int, store: TableStore, selector: str | None = None):
    """closed_ratio times the exact normaliser p_k(n) (J, A, B) or p(n)."""
    family, k = normalise_family(family, k)
    selector = selector or default_selector(family)
    norm = store.get(k, n)(n) if family in COLORED_FAMILIES else store.get(1, n)(n)
    return closed_ratio(family, m, k, n, selector) * norm


@dataclass(frozen=True)
class ScanRecord:
    family: str
    k: int
    m: int
    n: int
    selector: str
    exact: int
    asym: object
    ratio: object

    def as_dict(self, digits: int = 6) -> dict:
        return {
            "family": self.family,
            "k": self.k,
            "m": self.m,
            "n": self.n,
            "selector": self.selector,
            "exact": str(self.exact),
            "asym": sci(self.asym, digits),
            "ratio": fixed(self.ratio, 10),
        }


def make_record(family: str, m: int, k: int, n: int, store: TableStore, selector: str | None = None) -> ScanRecord:
    family, k = normalise_family(family, k)
    selector = selector or default_selector(family)
    ex = exact_statistic(family, m, k, n, store, selector)
    asym = asymptotic_statistic(family, m, k, n, store, selector)
    ratio = mp.mpf(ex) / asym if asym else mp.nan
    return ScanRecord(family, k, m, n, selector, ex, asym, ratio)


# ---------------------------------------------------------------------------
# exact decimal formatting
# ---------------------------------------------------------------------------

def _to_decimal(x) -> Decimal:
    if isinstance(x, int):
        return Decimal(x)
    return Decimal(mp.nstr(mp.mpf(x), mp.mp.dps, min_fixed=1, max_fixed=0))


def sci(x, digits: int = 6) -> str:
    """Scientific notation with `digits` significant digits, round-half-even, e.g. 8.67687e45."""
    d = _to_decimal(x)
    if d == 0:
        return "0." + "0" * (digits - 1) + "e0"
    with localcontext() as ctx:
        ctx.rounding = ROUND_HALF_EVEN
        ctx.prec = digits
        d = +d  # rounds to `digits` significant digits
    sign, digs, exp = d.as_tuple()
    digs = "".join(map(str, digs)).ljust(digits, "0")
    e10 = exp + len(d.as_tuple().digits) - 1
    mant = digs[0] + ("." + digs[1:digits] if digits > 1 else "")
    return ("-" if sign else "") + f"{mant}e{e10}"


def fixed(x, places: int = 4) -> str:
    """Fixed-point with `places` decimals, round-half-even."""
    d = _to_decimal(x)
    with localcontext() as ctx:
        ctx.rounding = ROUND_HALF_EVEN
        ctx.prec = max(50, len(str(abs(int(d)))) + places + 5)
        return str(d.quantize(Decimal(1).scaleb(-places)))


# ---------------------------------------------------------------------------
# reference tables of b_{m,1} and N_2 differences
# ---------------------------------------------------------------------------

TABLE_ROWS = (50, 100, 200, 400)
SLOW_ROWS = (200, 400)


def table_groups(which: int, row: int) -> list[tuple[str, int, int, int]]:
    """[(family, k, m, n)] for the two column groups of a table row (n = row^2)."""
    n = row * row
    if which == 1:
        return [("B", 1, 1, n), ("B", 1, row, n)]
    if which == 2:
        return [("NDIFF", 2, 0, n), ("NDIFF", 2, row + 1, n)]
    raise ValueError("table must be 1 or 2")


def table_row(which: int, row: int, store: TableStore) -> list[ScanRecord]:
    return [make_record(fam, m, k, n, store) for fam, k, m, n in table_groups(which, row)]

"""Command-line entry point: theta-asym compute|table|verify|scan|cache."""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys
from dataclasses import dataclass
from pathlib import Path

from . import verify as verify_mod
from .asymptotics import SELECTORS
from .errors import CorruptCache, ThetaAsymError
from .partitions import cached_partition_table, load_table
from .precision import DEFAULT_DPS, set_precision
from .records import SLOW_ROWS, TABLE_ROWS, ScanRecord, TableStore, fixed, make_record, sci, table_row

SCAN_HEADER = ("family", "k", "m", "n", "exact", "asym", "ratio")
EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2


class UsageError(Exception):
    pass


@dataclass(frozen=True)
class RunConfig:
    precision: int = DEFAULT_DPS
    cache_dir: str | None = None
    output: str = "tty"
    slow: bool = False
    table_limit: int | None = None

    def __post_init__(self):
        if self.precision < 20:
            raise UsageError("--precision must be at least 20")
        if self.table_limit is not None and self.table_limit < 0:
            raise UsageError("--table-limit must be nonnegative")

    def store(self) -> TableStore:
        return TableStore(self.cache_dir, self.table_limit)


# ---------------------------------------------------------------------------
# commands
# ---------------------------------------------------------------------------

def cmd_compute(family: str, m: int, k: int, n: int, config: RunConfig, selector: str | None = None,
                store: TableStore | None = None) -> ScanRecord:
    store = store or config.store()
    return make_record(family, m, k, n, store, selector)


def cmd_table(which: int, rows, config: RunConfig, store: TableStore | None = None, progress=None) -> list[dict]:
    rows = list(rows)
    if not rows:
        raise UsageError("at least one row is needed")
    for r in rows:
        if r not in TABLE_ROWS:
            raise UsageError(f"row {r} is not one of {TABLE_ROWS}")
        if r in SLOW_ROWS and not config.slow:
            raise UsageError(f"row {r} needs p(n) up to {r * r}; pass --slow")
    store = store or config.store()
    out = []
    for r in rows:
        if progress:
            progress(f"table {which}: row {r} (n = {r * r})")
        recs = table_row(which, r, store)
        entry = {"row": r, "n": r * r}
        for i, rec in enumerate(recs, 1):
            entry[f"m{i}"] = rec.m
            entry[f"exact{i}"] = sci(rec.exact, 6)
            entry[f"asym{i}"] = sci(rec.asym, 6)
            entry[f"ratio{i}"] = fixed(rec.ratio, 4)
        out.append(entry)
    return out


def cmd_verify(suites, config: RunConfig, store: TableStore | None = None) -> dict:
    store = store or config.store()
    names = list(verify_mod.SUITES) if "all" in suites else list(suites)
    report = {"passed": True, "suites": {}}
    for name in names:
        if name not in verify_mod.SUITES:
            raise UsageError(f"unknown suite {name!r}")
        checks = verify_mod.run_suite(name, store)
        ok = all(c.passed for c in checks)
        report["passed"] &= ok
        report["suites"][name] = {
            "passed": ok,
            "checks": [{"name": c.name, "passed": c.passed, "detail": c.detail} for c in checks],
        }
    return report


def cmd_scan(family: str, k: int, n_list, m_range, config: RunConfig, selector: str | None = None,
             store: TableStore | None = None):
    """Yield one ScanRecord per (n, m), n outer, m inner, both ascending."""
    store = store or config.store()
    for n in n_list:
        for m in m_range:
            yield make_record(family, m, k, n, store, selector)


def scan_csv(records, stream) -> None:
    w = csv.writer(stream, lineterminator="\n")
    w.writerow(SCAN_HEADER)
    for r in records:
        w.writerow([r.family, r.k, r.m, r.n, r.exact, sci(r.asym, 12), fixed(r.ratio, 10)])


def cmd_cache(action: str, config: RunConfig, k: int | None = None, N: int | None = None) -> list[dict]:
    if not config.cache_dir:
        raise UsageError("cache commands need --cache-dir")
    root = Path(config.cache_dir)
    if action == "build":
        if k is None or N is None:
            raise UsageError("cache build needs K and N")
        t = cached_partition_table(k, N, root)
        return [{"file": str(root / f"ptable_k{k}.txt"), "k": t.k, "N": t.max_n, "status": "ok"}]
    if action == "check":
        out = []
        for path in sorted(root.glob("ptable_k*.txt")):
            try:
                t = load_table(path)
                out.append({"file": str(path), "k": t.k, "N": t.max_n, "status": "ok"})
            except CorruptCache as exc:
                out.append({"file": str(path), "k": None, "N": None, "status": f"corrupt: {exc}"})
        return out
    raise UsageError(f"unknown cache action {action!r}")


# ---------------------------------------------------------------------------
# argument parsing and rendering
# ---------------------------------------------------------------------------

def _parse_m_range(text: str) -> range:
    """A:B (inclusive) or a single integer; A:B with B < A is empty."""
    try:
        if ":" in text:
            lo, hi = text.split(":", 1)
            return range(int(lo), int(hi) + 1)
        v = int(text)
        return range(v, v + 1)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"bad m range {text!r}") from exc


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--precision", type=int, default=argparse.SUPPRESS, help="working precision in decimal digits")
    common.add_argument("--cache-dir", default=argparse.SUPPRESS, help="directory for cached p_k tables")
    common.add_argument("--output", choices=("csv", "json", "tty"), default=argparse.SUPPRESS)
    common.add_argument("--slow", action="store_true", default=argparse.SUPPRESS, help="allow table rows 200 and 400")
    common.add_argument("--table-limit", type=int, default=argparse.SUPPRESS, help="largest n for which p_k(n) may be built")

    parser = argparse.ArgumentParser(prog="theta-asym", parents=[common],
                                     description="Exact and asymptotic values of theta-coefficient statistics.")
    sub = parser.add_subparsers(dest="command", required=True)

    families = sorted(SELECTORS) + ["CRANK", "RANK"]
    p = sub.add_parser("compute", parents=[common], help="one exact value with its closed-form prediction")
    p.add_argument("family", type=str.upper, choices=families)
    p.add_argument("m", type=int)
    p.add_argument("k", type=int)
    p.add_argument("n", type=int)
    p.add_argument("--selector", choices=("hyperbolic", "uniform", "two-term"), default=None)

    p = sub.add_parser("table", parents=[common], help="reproduce the b_{m,1} (1) or N_2-difference (2) table")
    p.add_argument("which", type=int, choices=(1, 2))
    p.add_argument("--rows", type=int, nargs="+", default=None)

    p = sub.add_parser("verify", parents=[common], help="run verification suites")
    p.add_argument("suites", nargs="+", choices=sorted(verify_mod.SUITES) + ["all"])

    p = sub.add_parser("scan", parents=[common], help="exact vs asymptotic over a grid of (m, n)")
    p.add_argument("family", type=str.upper, choices=families)
    p.add_argument("--k", type=int, default=1)
    p.add_argument("--n", type=int, nargs="+", required=True)
    p.add_argument("--m-range", type=_parse_m_range, required=True, help="A:B inclusive")
    p.add_argument("--selector", choices=("hyperbolic", "uniform", "two-term"), default=None)

    p = sub.add_parser("cache", parents=[common], help="build or check cached p_k tables")
    p.add_argument("action", choices=("build", "check"))
    p.add_argument("k", type=int, nargs="?")
    p.add_argument("N", type=int, nargs="?")
    return parser


def _config(ns) -> RunConfig:
    return RunConfig(
        precision=getattr(ns, "precision", DEFAULT_DPS),
        cache_dir=getattr(ns, "cache_dir", None),
        output=getattr(ns, "output", "tty"),
        slow=getattr(ns, "slow", False),
        table_limit=getattr(ns, "table_limit", None),
    )


def _emit_rows(rows: list[dict], fmt: str, out) -> None:
    if fmt == "json":
        json.dump(rows, out, indent=2)
        out.write("\n")
        return
    if not rows:
        return
    cols = list(rows[0])
    if fmt == "csv":
        w = csv.DictWriter(out, fieldnames=cols, lineterminator="\n")
        w.writeheader()
        w.writerows(rows)
        return
    widths = {c: max(len(c), *(len(str(r[c])) for r in rows)) for c in cols}
    out.write("  ".join(c.ljust(widths[c]) for c in cols).rstrip() + "\n")
    for r in rows:
        out.write("  ".join(str(r[c]).ljust(widths[c]) for c in cols).rstrip() + "\n")


def main(argv=None, out=None, err=None) -> int:
    out = out or sys.stdout
    err = err or sys.stderr
    parser = build_parser()
    try:
        ns = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code else EXIT_OK
    try:
        config = _config(ns)
        set_precision(config.precision)
        if ns.command == "compute":
            rec = cmd_compute(ns.family, ns.m, ns.k, ns.n, config, ns.selector)
            _emit_rows([rec.as_dict()], config.output, out)
        elif ns.command == "table":
            rows = ns.rows or ([50, 100, 200, 400] if config.slow else [50, 100])
            _emit_rows(cmd_table(ns.which, rows, config, progress=lambda s: print(s, file=err, flush=True)),
                       config.output, out)
        elif ns.command == "verify":
            report = cmd_verify(ns.suites, config)
            if config.output == "json":
                json.dump(report, out, indent=2)
                out.write("\n")
            else:
                for name, res in report["suites"].items():
                    for c in res["checks"]:
                        status = "PASS" if c["passed"] else "FAIL"
                        out.write(f"{status}  {name}: {c['name']}" + (f"  [{c['detail']}]" if c["detail"] and not c["passed"] else "") + "\n")
            return EXIT_OK if report["passed"] else EXIT_FAIL
        elif ns.command == "scan":
            recs = cmd_scan(ns.family, ns.k, ns.n, ns.m_range, config, ns.selector)
            fmt = getattr(ns, "output", "csv")
            if fmt == "csv":
                scan_csv(recs, out)
            else:
                _emit_rows([r.as_dict() for r in recs], fmt, out)
        elif ns.command == "cache":
            _emit_rows(cmd_cache(ns.action, config, ns.k, ns.N), config.output, out)
    except (UsageError, ThetaAsymError, ValueError) as exc:
        print(f"theta-asym: error: {exc}", file=err)
        return EXIT_USAGE
    return EXIT_OK


def scan_to_string(family, k, n_list, m_range, config=RunConfig(), selector=None) -> str:
    buf = io.StringIO()
    scan_csv(cmd_scan(family, k, n_list, m_range, config, selector), buf)
    return buf.getvalue()


if __name__ == "__main__":
    sys.exit(main())

"""Self-check suites run by `theta-asym verify`.

Each suite returns a list of Check results; a suite passes when all of them do.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from math import factorial

import mpmath as mp

from . import asymptotics as asy
from . import exact
from . import false_theta as ft
from .records import TableStore


@dataclass(frozen=True)
class Check:
    name: str
    passed: bool
    detail: str = ""


def suite_mass(store: TableStore, n_max: int = 200) -> list[Check]:
    p = store.get(1, n_max)
    out = []
    for k in (1, 2):
        bad = [n for n in range(1, n_max + 1)
               if sum(exact.n_coeff(k, m, n, p) for m in range(-n - 1, n + 2)) != p(n)]
        out.append(Check(f"sum_m N_{k}(m,n) = p(n), 1 <= n <= {n_max}", not bad, f"failures at n={bad[:5]}" if bad else ""))
    return out


def suite_symmetry(store: TableStore, n_max: int = 200, enum_max: int = 25) -> list[Check]:
    p = store.get(1, n_max)
    out = []
    for k in (1, 2, 3):
        bad = [(m, n) for n in range(0, n_max + 1, 7) for m in range(1, n + 2)
               if exact.n_coeff(k, m, n, p) != exact.n_coeff(k, -m, n, p)]
        out.append(Check(f"N_{k}(m,n) = N_{k}(-m,n)", not bad, str(bad[:5]) if bad else ""))
    # independent: histograms from enumeration are symmetric
    bad = []
    for n in range(2, enum_max + 1):
        for stat in ("crank", "rank"):
            h = exact.enumerate_statistic(n, stat)
            if any(h[m] != h[-m] for m in h):
                bad.append((stat, n))
    out.append(Check(f"crank/rank histograms symmetric, n <= {enum_max}", not bad, str(bad[:5]) if bad else ""))
    oracle = exact.theta_product_oracle(2, 40)
    bad = [m for m in range(1, 41) if oracle[m] != oracle[-m]]
    out.append(Check("triple-product a_{m,2} symmetric in m", not bad))
    return out


def suite_oracle(store: TableStore, m_max: int = 10, n_max: int = 100, enum_max: int = 40) -> list[Check]:
    out = []
    for k in (1, 2, 3):
        f = store.get(k, n_max + m_max + 2)
        o = exact.lerch_oracle(k, m_max + 1, n_max)
        bad = []
        for m in range(-m_max, m_max + 1):
            for n in range(n_max + 1):
                # j_coeff(m, k, N) is j_{m,k}(N - m [m > 0])
                nj = n + (m if m > 0 else 0)
                if exact.j_coeff(m, k, nj, f) != o.j(m, n):
                    bad.append(("j", m, n))
                if exact.a_coeff(m, k, n, f) != o.a(m, n):
                    bad.append(("a", m, n))
                if m >= 0 and exact.b_coeff(m, k, n, f) != o.b(m, n):
                    bad.append(("b", m, n))
        out.append(Check(f"alternating sums = Lerch-sum expansion, k={k}, |m|<={m_max}, n<={n_max}", not bad, str(bad[:5]) if bad else ""))
    p = store.get(1, enum_max)
    bad = []
    for n in range(2, enum_max + 1):
        for stat, k in (("crank", 1), ("rank", 2)):
            h = exact.enumerate_statistic(n, stat)
            for m in range(-n - 1, n + 2):
                if h.get(m, 0) != exact.n_coeff(k, m, n, p):
                    bad.append((stat, m, n))
    out.append(Check(f"crank/rank = enumeration, 2 <= n <= {enum_max}", not bad, str(bad[:5]) if bad else ""))
    return out


def suite_unimodal(store: TableStore, n_lo: int = 50, n_hi: int = 300) -> list[Check]:
    p = store.get(1, n_hi)
    bad = []
    for n in range(n_lo, n_hi + 1):
        seq = [exact.n_coeff(2, m, n, p) for m in range(3 - n, n - 2)]
        ok, _ = exact.unimodal_check(seq)
        if not ok:
            bad.append(n)
    return [Check(f"N_2(., n) unimodal, {n_lo} <= n <= {n_hi}", not bad, str(bad[:5]) if bad else "")]


def coefficient_identities(profile: asy.GrowthProfile, J_max: int = 4) -> list[tuple[str, object, object]]:
    """(label, computed, closed form) for the first exact coefficient values."""
    b, al = profile.beta, profile.alpha
    rg = mp.rgamma
    rows = []
    for J in range(J_max + 1):
        cen = asy.coeff_C_central
        tail = asy.coeff_C_tail
        fJ = factorial(J)
        second = -b ** (J - 1) * al / 2 ** (J - 1) * rg(J) - b ** (J - 1) / 2 ** (J + 1) * rg(J - 1)
        rows += [
            (f"C_0,{J},0({J})", cen(J, profile)[0, J, 0], b**J / (2**J * fJ)),
            (f"C_0,{J},0({J + 1})", cen(J + 1, profile)[0, J, 0], second),
            (f"C_0,{J},1({J + 1})", cen(J + 1, profile)[0, J, 1], -(b ** (J + 1)) / (2 ** (J + 1) * fJ)),
            (f"C_1,{J},0({J + 2})", cen(J + 2, profile)[1, J, 0], -(b**J) / 2 ** (J + 1) * rg(J) - al * b**J / (2**J * fJ)),
            (f"C_2,{J},0({J + 3})", cen(J + 3, profile)[2, J, 0], -(b ** (J + 1)) / (2 ** (J + 3) * fJ)),
            (f"C_{J},0({J})", tail(J, profile)[J, 0], (-1) ** J * b**J / (2**J * fJ)),
            (f"C_{J},0({J + 1})", tail(J + 1, profile)[J, 0], (-1) ** J * second),
            (f"C_{J},1({J + 1})", tail(J + 1, profile)[J, 1], (-1) ** (J + 1) * b ** (J + 1) / (2 ** (J + 1) * fJ)),
        ]
    return rows


def _rel(x, y):
    if y == 0:
        return abs(x)
    return abs(x - y) / abs(y)


def sample_profiles() -> list[asy.GrowthProfile]:
    # gamma for the colored profile is arbitrary test data; only its length matters here
    gamma = [mp.mpf(3) / 10 * (-mp.mpf(1) / 3) ** i for i in range(12)]
    return [asy.PARTITION, asy.colored_profile(3, mp.mpf("1.7"), gamma)]


def suite_coeffs(store: TableStore | None = None, tol=mp.mpf("1e-12")) -> list[Check]:
    out = []
    for prof in sample_profiles():
        rows = coefficient_identities(prof)
        bad = [label for label, x, y in rows if _rel(x, y) > tol]
        out.append(Check(f"closed-form coefficients, profile {prof.label}", not bad, ", ".join(bad[:5])))
        lam = asy.lambda_table(prof, 6)
        ok = (lam[0, 0] == 1 and _rel(lam[1, 1], -prof.alpha) < tol and _rel(lam[0, 2], -prof.beta / 8) < tol
              and all(lam[n, j] == 0 for (n, j) in lam if (n - j) % 2)
              and all(abs(lam[n, 0]) < tol for n in range(1, 7)))
        out.append(Check(f"lambda values and parity, profile {prof.label}", ok))
    return out


def suite_falsetheta(store: TableStore | None = None) -> list[Check]:
    P = mp.mp.dps
    P_ = ft.FalseThetaParams
    out = []
    tol = mp.mpf(10) ** (-(P - 5))
    bad = []
    for a in (mp.mpf("0.5"), mp.mpf(1), mp.mpf("1.5")):
        for b in (0, 1, 10, 100):
            for z in (mp.mpf(1), mp.mpf("0.1"), mp.mpf("0.01")):
                pr = P_(a, b, z)
                if abs(ft.t_direct(pr) - ft.t_euler(pr)) > tol:
                    bad.append((a, b, z))
    out.append(Check("direct = Euler transform on the (a, b, z) grid", not bad, str(bad[:3]) if bad else ""))
    law = uniform_error_law()
    out.append(Check("uniform expansion error is O(z^p) uniformly in b", all(ok for ok, _ in law.values()),
                     "; ".join(f"{k}: {d}" for k, (ok, d) in law.items() if not ok)))
    out.append(Check("D_J matches finite differences of D_(J-1)", kernel_fd_check()))
    return out


def uniform_error_law(p: int = 3, a=1) -> dict:
    """Fit C at z = 1e-2 and check err <= C z^p at 1e-3 and 1e-4 for b in {0, z^-1/2, z^-1}."""
    floor = mp.mpf(10) ** (-(mp.mp.dps - 5))
    out = {}
    for label, bfun in (("b=0", lambda z: 0), ("b=z^-1/2", lambda z: z ** mp.mpf(-0.5)), ("b=1/z", lambda z: 1 / z)):
        def err(z):
            pr = ft.FalseThetaParams(a, bfun(z), z)
            return abs(ft.t_uniform(0, pr, p) - ft.t_direct(pr)) * mp.exp(bfun(z) * z)

        z0 = mp.mpf("1e-2")
        C = err(z0) / z0**p
        ok = True
        detail = []
        for z in (mp.mpf("1e-3"), mp.mpf("1e-4")):
            e = err(z)
            bound = max(C * z**p, floor) * (1 + mp.mpf("1e-6"))
            ok &= e <= bound
            detail.append(f"z={mp.nstr(z, 2)} err={mp.nstr(e, 3)} bound={mp.nstr(bound, 3)}")
        out[label] = (ok, ", ".join(detail))
    return out


def kernel_fd_check(J_max: int = 8, h=mp.mpf("1e-8"), rtol=mp.mpf("1e-6")) -> bool:
    for J in range(1, J_max + 1):
        for alpha in mp.linspace(-5, 5, 21):
            fd = (ft.logistic_deriv(J - 1, alpha + h) - ft.logistic_deriv(J - 1, alpha - h)) / (2 * h)
            val = ft.logistic_deriv(J, alpha)
            if abs(fd - val) > rtol * max(abs(val), mp.mpf("1e-3")):
                return False
    return True


def contraction_errors(store: TableStore, family: str, k: int, m_rule: str, ns=(625, 2500, 10000)) -> list:
    from .records import exact_statistic

    errs = []
    for n in ns:
        m = 0 if m_rule == "0" else math.isqrt(n)
        ex = exact_statistic(family, m, k, n, store)
        norm = store.get(k if family in asy.COLORED_FAMILIES else 1, n)(n)
        errs.append(abs(mp.mpf(ex) / norm / asy.closed_ratio(family, m, k, n) - 1))
    return errs


CONTRACTION_CASES = (("J", 1), ("A", 1), ("B", 1), ("N", 1), ("N", 2), ("NDIFF", 1), ("NDIFF", 2))


def suite_contraction(store: TableStore) -> list[Check]:
    out = []
    for family, k in CONTRACTION_CASES:
        for rule in ("0", "sqrt"):
            errs = contraction_errors(store, family, k, rule)
            ok = all(errs[i + 1] <= mp.mpf("0.7") * errs[i] for i in range(len(errs) - 1))
            out.append(Check(f"err(4n) <= 0.7 err(n): {family} k={k} m={'0' if rule == '0' else 'floor(sqrt n)'}", ok,
                             " ".join(mp.nstr(e, 4) for e in errs)))
    return out


SUITES = {
    "mass": suite_mass,
    "symmetry": suite_symmetry,
    "oracle": suite_oracle,
    "unimodal": suite_unimodal,
    "coeffs": suite_coeffs,
    "falsetheta": suite_falsetheta,
    "contraction": suite_contraction,
}


def run_suite(name: str, store: TableStore) -> list[Check]:
    if name not in SUITES:
        raise ValueError(f"unknown suite {name!r}; expected one of {sorted(SUITES)}")
    return SUITES[name](store)

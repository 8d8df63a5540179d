"""Acceptance criteria, one test each; every test records a PASS/FAIL line.

Run with pytest (lines appear in the terminal summary) or directly with
``python3 tests/test_acceptance.py``.
"""

import time

import numpy as np

from swquad.algebra import build_matrix_rep, verify_closure
from swquad.errors import NonUnitaryError
from swquad.oracle import PotentialSpec, harmonic_grid, observed_order, solve_1d
from swquad.relativistic import (
    nonrelativistic_limit,
    relativistic_residual,
    solve_relativistic,
    verify_dirac_equivalence,
)
from swquad.systems import (
    PhysicalParams,
    TildeParams,
    enumerate_levels,
    quasi_spectrum,
    realize_level,
    sign_choices,
    structure_constants,
)
from swquad.verification import oracle_comparison

RESULTS = []


def _record(number, title, ok, detail):
    line = f"[{'PASS' if ok else 'FAIL'}] {number}. {title}: {detail}"
    RESULTS.append(line)
    print(line)
    return ok


# 1 ---------------------------------------------------------------------------------

def test_closure_suite():
    rng = np.random.default_rng(2024)
    t0 = time.perf_counter()
    checked, worst, failures = 0, 0.0, []
    for case in (1, 2, 3, 4):
        for _ in range(10):
            s, m1, m2 = rng.uniform(0.5, 2.0), rng.uniform(0, 2), rng.uniform(0, 2)
            if case == 1:
                tp = TildeParams(omega=s, mu1=m1, mu2=m2)
            elif case == 2:
                tp = TildeParams(omega=s, mu=m1)
            else:
                tp = TildeParams(k=s, mu1=m1, mu2=m2)
            for lv in enumerate_levels(case, tp, 4):
                if not (lv.positive and np.isfinite(lv.E_tilde)):
                    continue
                tpe = TildeParams(**{**tp.__dict__, "E_tilde": lv.E_tilde})
                try:
                    rep = build_matrix_rep(realize_level(case, tpe, lv.signs), lv.p)
                except NonUnitaryError as exc:
                    failures.append((case, lv.p, lv.signs, str(exc)))
                    continue
                report = verify_closure(rep, structure_constants(case, tpe), lv.E_tilde, 1e-9)
                checked += 1
                worst = max(worst, report.max_deviation)
                if not report.passed:
                    failures.append((case, lv.p, lv.signs, report.deviations))
    elapsed = time.perf_counter() - t0
    ok = not failures and checked > 0 and elapsed < 10
    assert _record(1, "closure suite", ok,
                   f"{checked} positive levels, max deviation {worst:.2e} (tol 1e-9), "
                   f"{len(failures)} failures, {elapsed:.2f} s (limit 10 s)"), failures[:3]


# 2 ---------------------------------------------------------------------------------

def test_case1_isotropic_reduction():
    tp = TildeParams()
    values = [E for p in range(4) for s in sign_choices(1) for E in quasi_spectrum(1, tp, p, s)]
    missing = [n for n in range(1, 10) if min(abs(v - n) for v in values) > 1e-12]
    assert _record(2, "case 1 isotropic reduction", not missing,
                   f"{len(values)} branch values; missing from {{1..9}}: {missing or 'none'} (tol 1e-12)")


# 3 ---------------------------------------------------------------------------------

def test_oracle_agreement():
    t0 = time.perf_counter()
    runs = [(1, TildeParams(mu1=0.75, mu2=0.75), 5e-3), (2, TildeParams(mu=0.75), 5e-3),
            (3, TildeParams(k=-1.0), 1e-2)]
    parts, ok = [], True
    for case, tp, tol in runs:
        cmp = oracle_comparison(case, tp, n_levels=4, points=300, tol=tol)
        ok &= cmp.passed
        parts.append(f"case {case} max rel err {cmp.match.max_error:.1e} (tol {tol:g})")
    elapsed = time.perf_counter() - t0
    ok &= elapsed < 120
    assert _record(3, "oracle agreement, 300x300", ok, "; ".join(parts) + f"; {elapsed:.1f} s (limit 120 s)")


# 4 ---------------------------------------------------------------------------------

def test_relativistic_roots_case1():
    worst_res, worst_two, n_roots, bad = 0.0, 0.0, 0, []
    for mu1 in (0.0, 0.5, 1.5):
        P = PhysicalParams(mu1=mu1, mu2=0.0)
        for p in range(5):
            for s in sign_choices(1):
                for lv in solve_relativistic(1, P, p, s).levels:
                    n_roots += 1
                    res = abs(relativistic_residual(1, P, p, s, lv.E))
                    two = lv.two_path_discrepancy
                    worst_res, worst_two = max(worst_res, res), max(worst_two, two)
                    if not (res <= 1e-12 and two <= 1e-8):
                        bad.append((mu1, p, s, lv.E, res, two))
    ok = n_roots > 0 and not bad
    assert _record(4, "case 1 relativistic roots", ok,
                   f"{n_roots} roots, max |residual| {worst_res:.1e} (tol 1e-12), "
                   f"max two-path {worst_two:.1e} (tol 1e-8)"), bad[:3]


# 5 ---------------------------------------------------------------------------------

NR_RUNS = {
    1: (PhysicalParams(mu1=0.3, mu2=0.5), [(1, 1), (-1, -1), (1, -1)]),
    2: (PhysicalParams(mu=0.4), [(1,), (-1,)]),
    3: (PhysicalParams(k=-1.0, mu1=0.2, mu2=0.1), [(1, 1), (-1, -1)]),
    4: (PhysicalParams(k=-1.0, mu1=0.3, mu2=0.2), [(-1,)]),
}


def test_nonrelativistic_limit():
    orders, per_case = [], []
    for case, (P, signs) in NR_RUNS.items():
        found = [o for s in signs for p in range(3)
                 for o in nonrelativistic_limit(case, P, p, s)["orders"]]
        orders += found
        per_case.append(f"case {case} orders {min(found):.3f}..{max(found):.3f}")
    ok = all(abs(o - 2.0) <= 0.3 for o in orders)
    assert _record(5, "nonrelativistic limit order", ok,
                   "; ".join(per_case) + " (required 2.0 +- 0.3, c = 10, 100, 1000)")


# 6 ---------------------------------------------------------------------------------

def test_dirac_equivalence():
    rng = np.random.default_rng(7)
    worst, bad = 0.0, []
    for case in (1, 2, 3, 4):
        for _ in range(20):
            P = PhysicalParams(m=rng.uniform(0.5, 2), c=rng.uniform(0.5, 3), hbar=rng.uniform(0.5, 1.5),
                               omega=rng.uniform(0.5, 2), k=rng.choice([-1, 1]) * rng.uniform(0.5, 2),
                               mu=rng.uniform(0, 2), mu1=rng.uniform(0, 2), mu2=rng.uniform(0, 2))
            E = P.m * P.c**2 * rng.uniform(-0.9, 3.0)
            rep = verify_dirac_equivalence(case, P, [E], 1e-10)
            worst = max(worst, rep.max_deviation)
            if not rep.passed:
                bad.append((case, P, E, rep.max_deviation))
    assert _record(6, "Dirac equivalence", not bad,
                   f"80 draws, max deviation {worst:.1e} (tol 1e-10), {len(bad)} failures"), bad[:3]


# 7 ---------------------------------------------------------------------------------

def test_oracle_calibration():
    pot = PotentialSpec(V=lambda x: 0.5 * x**2)
    grid = harmonic_grid()
    vals = solve_1d(pot, grid, 4).values
    err = float(np.max(np.abs(vals - (np.arange(4) + 0.5))))
    e = [solve_1d(pot, grid.with_points(n), 4).values for n in (499, 999, 1999)]
    order = float(np.min(observed_order(*e)))
    ok = err <= 1e-4 and order >= 1.8
    assert _record(7, "1D oscillator calibration", ok,
                   f"max |E_n - (n + 1/2)|, n <= 3: {err:.1e} (tol 1e-4); "
                   f"min observed order {order:.3f} (>= 1.8)")


if __name__ == "__main__":
    import sys

    failed = 0
    for name, fn in list(globals().items()):
        if name.startswith("test_"):
            try:
                fn()
            except AssertionError:
                failed += 1
    sys.exit(1 if failed else 0)

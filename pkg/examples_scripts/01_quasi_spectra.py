"""
Quasi-spectra from the deformed oscillator
==========================================

Each sign branch of each case gives one level per representation
dimension p + 1. Here we list them and see familiar spectra appear.
"""

import numpy as np

from swquad.systems import TildeParams, enumerate_levels, quasi_spectrum

# Case 1 with no centrifugal terms is the isotropic oscillator, E = N + 1
levels = enumerate_levels(1, TildeParams(), p_max=3)
values = sorted({round(lv.E_tilde, 12) for lv in levels})
print("case 1, mu = 0, distinct levels:", values)

# every level carries its branch, u-value and positivity flag
for lv in levels[:6]:
    print(f"  p={lv.p} signs={lv.signs} u={lv.u:.3f} E~={lv.E_tilde:.3f} positive={lv.positive}")

# the 2:1 anisotropic oscillator (case 2) at mu = 0.75; the eps = +1 branch
# is the regular one on the half-plane, eps = -1 the singular partner
tp = TildeParams(mu=0.75)
for p in range(3):
    print(f"case 2, p={p}:", [quasi_spectrum(2, tp, p, s)[0] for s in [(1,), (-1,)]])

# case 3 at zero couplings is the plane Coulomb problem: equal-sign branches
# at p and p + 1 share E = -k^2 / (8 (N + 1/2)^2); weighting each by p + 1
# gives the 2N + 1 degeneracy
tp = TildeParams(k=-1.0)
shells = {}
for lv in enumerate_levels(3, tp, 4, [(1, 1), (-1, -1)]):
    if lv.positive or lv.degenerate:
        key = round(lv.E_tilde, 12)
        shells[key] = shells.get(key, 0) + lv.p + 1
for E, count in sorted(shells.items())[:4]:
    N = np.sqrt(1 / (8 * abs(E))) - 0.5
    print(f"case 3 shell E={E:.5f}  N={N:.0f}  states={count}")

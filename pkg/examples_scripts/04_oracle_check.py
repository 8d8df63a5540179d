"""
Checking algebraic levels against finite differences
====================================================

A Dirichlet finite-difference solve of the quasi-Hamiltonian on two grids,
Richardson-extrapolated, reproduces the algebraic levels. The 1D oscillator
calibrates the solver first.
"""

import numpy as np

from swquad.oracle import PotentialSpec, harmonic_grid, observed_order, solve_1d
from swquad.systems import TildeParams
from swquad.verification import oracle_comparison

ho = PotentialSpec(V=lambda x: 0.5 * x**2)
grid = harmonic_grid()
runs = [solve_1d(ho, grid.with_points(n), 4).values for n in (499, 999, 1999)]
print("1D oscillator:", runs[-1], " observed order:", observed_order(*runs))

for case, tp in [(1, TildeParams(mu1=0.75, mu2=0.75)), (2, TildeParams(mu=0.75)), (3, TildeParams(k=-1.0))]:
    cmp = oracle_comparison(case, tp, n_levels=4, points=300)
    print(f"case {case}: algebraic {np.round(cmp.algebraic, 6)}")
    print(f"        numeric   {np.round(cmp.numeric[:4], 6)}  max rel err {cmp.match.max_error:.1e}")

"""
The Dirac algebra and the quasi-Hamiltonian algebra
===================================================

The symmetry algebra of the relativistic problem, with the Hamiltonian
replaced by its energy, coincides with the rescaled quasi-Hamiltonian
algebra. Compare the two coefficient by coefficient.
"""

import numpy as np

from swquad.relativistic import dirac_structure_constants, verify_dirac_equivalence
from swquad.systems import PhysicalParams

P = PhysicalParams(m=1.3, c=1.7, hbar=0.9, omega=1.1, mu=0.2)
d = dirac_structure_constants(2, P)
print("case 2, [A,C] coefficients as polynomials in E:")
for name, poly in d.ac.items():
    if not poly.is_zero():
        print(f"  {name}: {poly.coefficients}")

rng = np.random.default_rng(1)
for case in (1, 2, 3, 4):
    P = PhysicalParams(k=-0.8, mu=0.3, mu1=0.4, mu2=0.7)
    rep = verify_dirac_equivalence(case, P, rng.uniform(-0.5, 3.0, 10))
    print(f"case {case}: max deviation {rep.max_deviation:.1e}  passed={rep.passed}")

# with the literal typeset case 4 constants the two algebras differ
rep = verify_dirac_equivalence(4, PhysicalParams(k=-0.5, mu1=0.3, mu2=0.6), [0.5, 2.0], printed=True)
print("case 4, printed constants: max deviation", f"{rep.max_deviation:.2e}")

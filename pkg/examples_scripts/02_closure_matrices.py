"""
Matrix representations and closure
==================================

Build the (p + 1)-dimensional matrices A, B, C on the Fock states and check
the three commutation relations and the Casimir. Off the quantized energy
the truncated ladder no longer closes.
"""

import numpy as np

from swquad.algebra import build_matrix_rep, verify_closure
from swquad.systems import TildeParams, quasi_spectrum, realize_level, structure_constants

np.set_printoptions(precision=4, suppress=True)

tp = TildeParams(omega=1.2, mu1=0.3, mu2=0.8)
p, signs = 3, (1, 1)
E = quasi_spectrum(1, tp, p, signs)[0]
tpe = TildeParams(**{**tp.__dict__, "E_tilde": E})
real = realize_level(1, tpe, signs)
rep = build_matrix_rep(real, p)
print("E~ =", E, " u =", real.u)
print("structure function phi(0..p+1):", rep.phi)
print("A =\n", rep.A)
print("B =\n", rep.B)

report = verify_closure(rep, structure_constants(1, tpe), E)
print("on shell:", {k: f"{v:.1e}" for k, v in report.deviations.items()})

# move off the quantized energy: phi(p + 1) no longer vanishes
E_off = E + 0.3
tpo = TildeParams(**{**tp.__dict__, "E_tilde": E_off})
rep_off = build_matrix_rep(realize_level(1, tpo, signs), p)
report = verify_closure(rep_off, structure_constants(1, tpo), E_off)
print("off shell:", {k: f"{v:.1e}" for k, v in report.deviations.items()})

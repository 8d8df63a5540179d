"""
Relativistic levels and their nonrelativistic limit
===================================================

The relativistic problem maps onto the quasi-Hamiltonian with energy
dependent parameters. Roots of the implicit equation give E; as c grows,
E - m c^2 approaches the quasi-spectrum value with error O(1/c^2).
"""

from swquad.relativistic import nonrelativistic_limit, solve_relativistic
from swquad.systems import PhysicalParams, quasi_spectrum, tilde_map

P = PhysicalParams(mu1=0.5, mu2=0.0)   # m = c = hbar = omega = 1
for p in range(3):
    for lv in solve_relativistic(1, P, p, (-1, -1)).levels:
        print(f"p={p}: E={lv.E:.12f}  E~={lv.E_tilde:.12f}  residual={lv.residual:.1e}"
              f"  two-path={lv.two_path_discrepancy:.1e}")

# self-consistency: E~ is the quasi-spectrum at the tilde parameters of E
lv = solve_relativistic(1, P, 1, (-1, -1)).levels[0]
print("quasi-spectrum at tilde(E):", float(quasi_spectrum(1, tilde_map(P, lv.E, 1), 1, (-1, -1))[0]),
      " E~ of the root:", lv.E_tilde)

# the printed form of the case 1 equation gives a different root
lv = solve_relativistic(1, PhysicalParams(), 0, (1, 1), form="printed").levels[0]
print("printed form, (+,+), p=0: E =", lv.E)

for case, params, signs in [(1, PhysicalParams(mu1=0.3), (1, 1)), (2, PhysicalParams(mu=0.4), (-1,)),
                            (3, PhysicalParams(k=-1.0), (1, 1)), (4, PhysicalParams(k=-1.0), (-1,))]:
    out = nonrelativistic_limit(case, params, 0, signs)
    errors = ", ".join(f"{e:.2e}" for e in out["errors"])
    orders = ", ".join(f"{o:.3f}" for o in out["orders"])
    print(f"case {case}: errors {errors}  orders {orders}")

import numpy as np
import pytest

from swquad.errors import DomainError
from swquad.relativistic import (
    dirac_structure_constants,
    nonrelativistic_limit,
    relativistic_residual,
    relativistic_residual_tilde,
    solve_relativistic,
    two_path_energy,
    verify_dirac_equivalence,
)
from swquad.systems import PhysicalParams, quasi_spectrum, tilde_map


# --- residuals ---------------------------------------------------------------------

@pytest.mark.parametrize("p,signs", [(0, (1, 1)), (1, (-1, 1)), (2, (-1, -1))])
def test_case1_residual_at_rest_energy(p, signs):
    # the left side carries E~ and vanishes at E = m c^2
    P = PhysicalParams(omega=1.3)
    bracket = p + 1 + (signs[0] + signs[1]) / 2
    assert relativistic_residual(1, P, p, signs, 1.0, form="printed") == pytest.approx(
        -4 * 1.3**2 * bracket**2)
    composed = p + 1 + (signs[0] + signs[1]) / 4
    assert relativistic_residual(1, P, p, signs, 1.0) == pytest.approx(-2 * 1.3 * composed)


def test_case3_residual_at_rest_energy():
    P = PhysicalParams(k=0.7)
    assert relativistic_residual(3, P, 0, (1, 1), 1.0, form="printed") == pytest.approx(0.7)
    assert relativistic_residual(3, P, 0, (1, 1), 1.0) == pytest.approx(0.49)


def test_case1_printed_root():
    res = solve_relativistic(1, PhysicalParams(), 0, (1, 1), form="printed")
    (lv,) = res.levels
    assert 1 < lv.E < 5
    assert (lv.E - 1) ** 2 * (lv.E + 1) / 2 == pytest.approx(16, abs=1e-11)


def test_case4_printed_reduces_to_coulomb_branch():
    P = PhysicalParams(k=-0.8)
    for E in (0.3, 0.6, 0.9):
        M = E / 2 + 0.5
        expected = 2**2.5 * 1 * (-(E - 1) * M) ** 1.5 + 4 * -1 * -0.8 * M**2 * (E - 1)
        assert relativistic_residual(4, P, 0, (-1,), E, form="printed") == pytest.approx(expected)


def test_residual_rejects_energy_below_minus_mc2():
    with pytest.raises(DomainError):
        relativistic_residual_tilde(1, PhysicalParams(), 0, (1, 1), -2.5)


# --- roots ----------------------------------------------------------------------

@pytest.mark.parametrize("case,params,signs", [
    (1, PhysicalParams(mu1=0.3), (1, -1)),
    (2, PhysicalParams(mu=0.4, omega=0.7), (-1,)),
    (3, PhysicalParams(k=-0.9, mu1=0.2, mu2=0.1), (1, 1)),
    (4, PhysicalParams(k=-1.1, mu1=0.3, mu2=0.2), (-1,)),
])
def test_roots_are_self_consistent(case, params, signs):
    for p in range(3):
        res = solve_relativistic(case, params, p, signs)
        assert res.levels, res.diagnostic
        for lv in res.levels:
            assert lv.converged
            assert lv.two_path_discrepancy < 1e-8
            # E~ = Q(tilde_map(E)) directly
            tp = tilde_map(params, lv.E, case)
            assert min(abs(q - lv.E_tilde) for q in quasi_spectrum(case, tp, p, signs)) < 1e-9


def test_two_path_energy_matches_root():
    P = PhysicalParams(mu2=0.5)
    lv = solve_relativistic(1, P, 1, (1, 1)).levels[0]
    assert two_path_energy(1, P, 1, (1, 1), lv.E_tilde * 1.1) == pytest.approx(lv.E_tilde, rel=1e-12)


def test_window_in_E():
    P = PhysicalParams()
    lv = solve_relativistic(1, P, 0, (-1, -1)).levels[0]
    res = solve_relativistic(1, P, 0, (-1, -1), window=(lv.E - 0.1, lv.E + 0.1), window_in_E=True)
    assert [x.E for x in res.levels] == pytest.approx([lv.E])
    empty = solve_relativistic(1, P, 0, (-1, -1), window=(lv.E + 1, lv.E + 2), window_in_E=True)
    assert not empty.levels and empty.diagnostic


# --- nonrelativistic limit ------------------------------------------------------

def test_case1_nonrelativistic_ground_state():
    res = solve_relativistic(1, PhysicalParams(c=1000.0), 0, (-1, -1))
    assert res.levels[0].E_tilde == pytest.approx(1.0, abs=1e-5)


def test_case2_nonrelativistic_lower_branch():
    res = solve_relativistic(2, PhysicalParams(c=1000.0), 0, (-1,))
    assert res.levels[0].E_tilde == pytest.approx(1.5, abs=1e-5)


def test_nonrelativistic_order_case1():
    out = nonrelativistic_limit(1, PhysicalParams(mu1=0.3, mu2=0.2), 1, (1, 1))
    assert all(abs(o - 2) < 0.3 for o in out["orders"])
    assert out["errors"][-1] < 1e-5


# --- Dirac side -----------------------------------------------------------------

def test_dirac_read_offs():
    m, c, h, w = 1.3, 1.7, 0.9, 1.1
    d2 = dirac_structure_constants(2, PhysicalParams(m=m, c=c, hbar=h, omega=w, mu=0.2))
    assert d2.ac["B"].coefficients == pytest.approx((32 * c**2 * h**2 * m**4 * w**2,
                                                      32 * h**2 * m**3 * w**2))
    d1 = dirac_structure_constants(1, PhysicalParams(m=m, c=c, hbar=h, omega=w, mu1=0.2, mu2=0.5))
    assert d1.bc["1"].coefficients[0] == pytest.approx(32 * c**5 * h**2 * m**5 * (2 * h**2 + 0.3))


def test_dirac_case4_equal_couplings_kill_antisymmetric_terms():
    d4 = dirac_structure_constants(4, PhysicalParams(k=-1.0, mu1=0.4, mu2=0.4))
    assert d4.bc["1"].is_zero()
    d4 = dirac_structure_constants(4, PhysicalParams(k=1.0))
    nonzero = {k for k, v in d4.ac.items() if not v.is_zero()} | {
        "bc:" + k for k, v in d4.bc.items() if not v.is_zero()}
    assert nonzero == {"B", "bc:A"}
    assert verify_dirac_equivalence(4, PhysicalParams(k=1.0), [0.2, 1.0, 3.0]).passed


def test_dirac_case2_random_energies():
    rng = np.random.default_rng(7)
    rep = verify_dirac_equivalence(2, PhysicalParams(mu=0.3), rng.uniform(1, 5, 20))
    assert rep.passed, rep.deviations


@pytest.mark.parametrize("case", [1, 2, 3, 4])
def test_dirac_at_rest_energy(case):
    assert verify_dirac_equivalence(case, PhysicalParams(k=-0.5, mu=0.2, mu1=0.1, mu2=0.3), [1.0]).passed


def test_dirac_printed_case4_differs():
    P = PhysicalParams(k=-0.5, mu1=0.3, mu2=0.6)
    assert not verify_dirac_equivalence(4, P, [0.5, 2.0], printed=True).passed

import numpy as np
import pytest

from swquad.algebra import (
    StructureConstants,
    bisect_root,
    build_matrix_rep,
    casimir_expression,
    find_quantized_energies,
    realize,
    realize_gamma_nonzero,
    realize_gamma_zero,
    verify_closure,
)
from swquad.errors import BranchError, DomainError, NonUnitaryError
from swquad.polynomial import EnergyPolynomial
from swquad.systems import (
    TildeParams,
    enumerate_levels,
    pole_limit,
    quasi_spectrum,
    realize_level,
    structure_constants,
    structure_function_factored,
    u_value,
)


# --- polynomials ---------------------------------------------------------------

def test_polynomial_arithmetic_and_trimming():
    x = EnergyPolynomial.variable()
    p = 3 * x**2 - 2 * x + 1
    assert p.coefficients == (1.0, -2.0, 3.0)
    assert p.degree == 2
    assert p(2.0) == 9.0
    assert (p - p).is_zero()
    assert (1 - x).coefficients == (1.0, -1.0)
    q = p.compose(x + 1)
    assert np.isclose(q(0.5), p(1.5))


def test_polynomial_name_mismatch_and_bad_input():
    with pytest.raises(ValueError):
        EnergyPolynomial.variable("E") + EnergyPolynomial.variable("Etilde")
    with pytest.raises(ValueError):
        EnergyPolynomial((1.0, np.inf))
    with pytest.raises(ValueError):
        EnergyPolynomial.variable() ** -1


def test_structure_constants_reject_mixed_names():
    with pytest.raises(ValueError):
        StructureConstants.from_values("Etilde", alpha=EnergyPolynomial.variable("E"))
    with pytest.raises(TypeError):
        StructureConstants.from_values(omega=1.0)


# --- Casimir ---------------------------------------------------------------------

def test_casimir_reduces_when_only_epsilon_zeta_z():
    rng = np.random.default_rng(1)
    A, B, C = (rng.standard_normal((3, 3)) for _ in range(3))
    sc = StructureConstants.from_values(epsilon=0.7, zeta=-1.3, z=0.4)
    K = casimir_expression(sc, A, B, C, energy=0.0)
    assert np.allclose(K, C @ C - 0.7 * B @ B + 2.6 * B + 0.8 * A)


def test_casimir_scalar_in_dimension_one():
    sc = StructureConstants.from_values(alpha=1.0, gamma=0.5, delta=2.0, epsilon=0.3,
                                        zeta=0.1, a=0.2, d=1.1, z=-0.4)
    a0, b0 = 0.7, -1.2
    K = casimir_expression(sc, [[a0]], [[b0]], [[0.0]], energy=0.0)
    k = sc.at(0.0)
    expected = (-2 * k.alpha * a0**2 * b0 - 2 * k.gamma * a0 * b0**2
                + 2 * (k.alpha * k.gamma - k.delta) * a0 * b0 + (k.gamma**2 - k.epsilon) * b0**2
                + (k.gamma * k.delta - 2 * k.zeta) * b0 + 2 * k.a / 3 * a0**3
                + (k.d + k.a * k.gamma / 3 + k.alpha**2) * a0**2
                + (k.a * k.epsilon / 3 + k.alpha * k.delta + 2 * k.z) * a0)
    assert np.isclose(K[0, 0], expected)


def test_casimir_shape_check():
    with pytest.raises(ValueError):
        casimir_expression(StructureConstants.from_values(), np.eye(2), np.eye(3), np.eye(2), 0.0)


# --- realizations ------------------------------------------------------------------

def _case(case, p, signs, **kw):
    tp = TildeParams(**kw)
    E = quasi_spectrum(case, tp, p, signs)[0]
    tpe = TildeParams(**{**tp.__dict__, "E_tilde": E})
    sc = structure_constants(case, tpe)
    return tpe, sc, E, realize(sc, E, u_value(case, tpe, signs))


def test_case1_phi_matches_factorized_form():
    tp, sc, E, real = _case(1, 3, (1, -1), mu1=0.4, mu2=0.9, omega=1.3)
    for x in range(5):
        exact = structure_function_factored(1, tp, 3, (1, -1), x)
        assert np.isclose(real.phi(x), exact, rtol=1e-12, atol=1e-9)


def test_case2_phi_matches_factorized_form():
    tp, sc, E, real = _case(2, 2, (1,), mu=0.75, omega=0.8, m=1.4)
    vals = [structure_function_factored(2, tp, 2, (1,), x) for x in range(4)]
    assert np.allclose([real.phi(x) for x in range(4)], vals, rtol=1e-12, atol=1e-9)


def test_case3_phi_positive_inside_and_zero_at_ends():
    tp, sc, E, real = _case(3, 1, (1, 1), k=1.0)
    assert np.isclose(E, -1 / 50)  # S = 2(p+1) + 1
    assert abs(real.phi_relative(0)) < 1e-12 and abs(real.phi_relative(2)) < 1e-12
    assert real.phi(1) > 0
    assert real.branch == "gamma-nonzero"


def test_case4_phi_vanishes_at_root():
    tp, sc, E, real = _case(4, 2, (-1,), k=-1.0, mu1=0.3, mu2=0.5)
    assert abs(real.phi_relative(0)) < 1e-10 and abs(real.phi_relative(3)) < 1e-10
    assert real.phi(1) > 0 and real.phi(2) > 0


def test_all_zero_constants_give_zero_phi():
    real = realize_gamma_zero(StructureConstants.from_values(epsilon=1.0), 0.0, 0.3)
    assert all(real.phi(n) == 0.0 for n in range(4))


def test_branch_errors():
    with pytest.raises(BranchError):
        realize_gamma_zero(StructureConstants.from_values(gamma=1.0, epsilon=1.0), 0.0, 0.5)
    with pytest.raises(BranchError):
        realize_gamma_zero(StructureConstants.from_values(epsilon=-1.0), 0.0, 0.5)
    with pytest.raises(BranchError):
        realize_gamma_nonzero(StructureConstants.from_values(epsilon=1.0), 0.0, 0.5)


# --- matrices and closure ------------------------------------------------------------

def test_matrix_rep_small_dimensions():
    _, _, _, real = _case(1, 0, (1, 1))
    rep = build_matrix_rep(real, 0)
    assert rep.dimension == 1 and rep.b[0, 0] == 0.0 and rep.B[0, 0] == real.b(0)
    _, _, _, real = _case(1, 1, (1, 1))
    rep = build_matrix_rep(real, 1)
    assert rep.bdag[1, 0] == pytest.approx(np.sqrt(real.phi(1)))
    assert np.array_equal(rep.b, rep.bdag.T)


def test_case1_pipeline_closure():
    tp, sc, E, real = _case(1, 2, (1, 1), mu1=0.0, mu2=0.0)
    rep = build_matrix_rep(real, 2)
    report = verify_closure(rep, sc, E, 1e-9)
    assert report.passed, report.deviations
    assert set(report.deviations) == {"[A,B]=C", "[A,C]", "[B,C]", "casimir"}


def test_case2_casimir_matrix_is_scalar():
    tp, sc, E, real = _case(2, 2, (1,), mu=0.3)
    rep = build_matrix_rep(real, 2)
    K = casimir_expression(sc, rep.A, rep.B, rep.C, E)
    Kr = 64 * tp.m**3 * tp.omega**2 * E
    assert np.allclose(K, Kr * np.eye(3), rtol=1e-9, atol=1e-9 * abs(Kr))


def test_closure_of_trivial_rep_is_exact():
    sc = StructureConstants.from_values(epsilon=1.0)
    rep = build_matrix_rep(realize(sc, 0.0, 0.5), 0)
    report = verify_closure(rep, sc, 0.0)
    assert all(v == 0.0 for v in report.deviations.values())


def test_off_shell_energy_breaks_bc_and_casimir():
    # at a non-quantized E~ phi(p+1) != 0, so truncating the ladder at p spoils
    # the relations that involve b b† at the top state; [A,B]=C and [A,C] survive
    tp = TildeParams(mu1=0.3, mu2=0.5)
    E = quasi_spectrum(1, tp, 2, (1, 1))[0] + 0.37
    tpe = TildeParams(**{**tp.__dict__, "E_tilde": E})
    sc = structure_constants(1, tpe)
    real = realize(sc, E, u_value(1, tpe, (1, 1)))
    rep = build_matrix_rep(real, 2)
    report = verify_closure(rep, sc, E)
    assert abs(real.phi_relative(3)) > 1e-3
    assert report.deviations["[A,B]=C"] < 1e-12 and report.deviations["[A,C]"] < 1e-12
    assert report.deviations["[B,C]"] > 1e-3 and report.deviations["casimir"] > 1e-3


def test_non_unitary_rep_raises():
    tp, sc, E, real = _case(1, 1, (-1, -1), mu1=2.0, mu2=0.1)
    assert real.phi(1) < 0
    with pytest.raises(NonUnitaryError):
        build_matrix_rep(real, 1)


# --- root finding ------------------------------------------------------------------

def test_bisect_root():
    r, fr = bisect_root(lambda x: x**3 - 2, 0.0, 2.0)
    assert r == pytest.approx(2 ** (1 / 3), abs=1e-14)
    with pytest.raises(ValueError):
        bisect_root(lambda x: x**2 + 1, -1.0, 1.0)


# u depends on eps1 only, so both eps2 roots of phi(p+1) appear
@pytest.mark.parametrize("signs,expected", [((1, 1), [2.0, 3.0]), ((-1, -1), [1.0, 2.0])])
def test_find_quantized_energies_case1(signs, expected):
    tp = TildeParams()

    def family(E):
        return structure_constants(1, TildeParams(**{**tp.__dict__, "E_tilde": E}))

    res = find_quantized_energies(family, lambda E, s: u_value(1, tp, s), 0, signs, (0.1, 6.0))
    assert [r.energy for r in res.roots] == pytest.approx(expected, abs=1e-12)
    assert all(r.converged and r.positive for r in res.roots)


def test_find_quantized_energies_case3():
    tp = TildeParams(k=1.0)

    def family(E):
        return structure_constants(3, TildeParams(**{**tp.__dict__, "E_tilde": E}))

    res = find_quantized_energies(family, lambda E, s: u_value(3, tp, s), 0, (1, 1), (-0.2, -0.01))
    assert [r.energy for r in res.roots] == pytest.approx([-1 / 18], abs=1e-12)


def test_find_quantized_energies_reports_empty_bracket():
    tp = TildeParams()

    def family(E):
        return structure_constants(1, TildeParams(**{**tp.__dict__, "E_tilde": E}))

    res = find_quantized_energies(family, lambda E, s: u_value(1, tp, s), 0, (1, 1), (3.5, 4.5))
    assert res.roots == [] and "no sign change" in res.diagnostic


# --- removable points and near-cancelling constants -----------------------------------

@pytest.mark.parametrize("mu", [0.0, 0.1, 0.7])
@pytest.mark.parametrize("signs", [(1, -1), (-1, 1)])
def test_case3_mixed_branch_at_equal_couplings(mu, signs):
    # u = 1/2 puts X^2 - 1/4 = 0 at N = 0 together with coef ~ (mu1 - mu2)
    tp = TildeParams(k=1.2, m=1.3, hbar=0.9, mu1=mu, mu2=mu)
    assert pole_limit(3, tp, signs) == pytest.approx(
        -signs[0] * 1.2 * np.sqrt(1.3) * np.sqrt(0.25 + 2 * mu / 0.81) / 2)
    levels = [lv for lv in enumerate_levels(3, tp, 2, [signs]) if lv.positive]
    assert levels
    for lv in levels:
        E, p = lv.E_tilde, lv.p
        tpe = TildeParams(**{**tp.__dict__, "E_tilde": E})
        real = realize_level(3, tpe, signs)
        assert real.u == 0.5
        report = verify_closure(build_matrix_rep(real, p), structure_constants(3, tpe), E)
        assert report.passed, report.deviations


def test_case3_pole_limit_is_continuous():
    def b0(mu2):
        tp = TildeParams(k=1.2, mu1=0.3, mu2=mu2)
        E = quasi_spectrum(3, tp, 1, (1, -1))[0]
        return realize_level(3, TildeParams(**{**tp.__dict__, "E_tilde": E}), (1, -1)).b(0)

    assert b0(0.3) == pytest.approx(b0(0.3 + 1e-7), abs=1e-6)


def test_closure_scale_sees_inside_cancelling_constants():
    # at tiny couplings z(E) is a difference of O(1) monomials; the residual
    # is rounding of those, not a failure
    tp = TildeParams(k=1.0, mu1=1e-6, mu2=1.3e-6)
    E = quasi_spectrum(3, tp, 0, (-1, -1))[0]
    tpe = TildeParams(**{**tp.__dict__, "E_tilde": E})
    sc = structure_constants(3, tpe)
    assert abs(sc.z(E)) < 1e-9 < sc.z.magnitude(E)
    report = verify_closure(build_matrix_rep(realize_level(3, tpe, (-1, -1)), 0), sc, E)
    assert report.passed, report.deviations


def test_one_dimensional_rep_needs_no_rho():
    # plane Coulomb ground state: u = 0, where rho(0) is singular
    tp = TildeParams(k=-1.0, E_tilde=-0.5)
    real = realize_level(3, tp, (-1, -1))
    with pytest.raises(DomainError):
        real.rho(0)
    report = verify_closure(build_matrix_rep(real, 0), structure_constants(3, tp), -0.5)
    assert report.passed, report.deviations

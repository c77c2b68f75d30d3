import numpy as np
import pytest
from hypothesis import given, strategies as st
from scipy import integrate

from twbeam import cases
from twbeam.assembly import QuadratureSpec, assemble, coupling_vector, force_vector, quadrature_nodes
from twbeam.basis import ModalBasis
from twbeam.profiles import PowerLawProfile
from twbeam.solver import natural_frequencies

RHO_A = 2700 * 30e-3 * 10e-3
EI = 71e9 * 30e-3 * (10e-3) ** 3 / 12


def test_uniform_mass_is_scaled_identity(system100):
    assert RHO_A * 2.0 == pytest.approx(1.62)
    np.testing.assert_allclose(system100.mass, 1.62 * np.eye(100), rtol=0, atol=1e-6 * 1.62)


def test_uniform_stiffness_is_diagonal(system100, basis100):
    assert EI == pytest.approx(177.5)
    diag = EI * basis100.roots**4 / 2.0**3
    np.testing.assert_allclose(np.diag(system100.stiffness), diag, rtol=1e-8)
    off = system100.stiffness - np.diag(np.diag(system100.stiffness))
    assert np.max(np.abs(off) / np.sqrt(np.outer(diag, diag))) < 1e-8


def test_uniform_frequencies_closed_form(system100, basis100):
    omega = natural_frequencies(system100, count=10)
    exact = basis100.roots[:10] ** 2 * np.sqrt(EI / (RHO_A * 2.0**4))
    np.testing.assert_allclose(omega, exact, rtol=1e-8)


def test_symmetric_positive_definite(ref_beam):
    beam = cases.linear_taper_beam(2.0)
    sys = assemble(beam, ModalBasis(40, beam.length))
    for a in (sys.mass, sys.stiffness):
        assert np.array_equal(a, a.T)
        assert np.linalg.eigvalsh(a).min() > 0


@pytest.mark.parametrize("make", [cases.linear_taper_beam, cases.modulus_graded_beam, cases.density_graded_beam])
def test_doubling_panels_is_converged(make):
    beam = make(3.0)
    basis = ModalBasis(30, beam.length)
    a = assemble(beam, basis, QuadratureSpec(120))
    b = assemble(beam, basis, QuadratureSpec(240))
    for x, y in ((a.mass, b.mass), (a.stiffness, b.stiffness)):
        assert np.max(np.abs(x - y)) < 1e-8 * np.max(np.abs(y))


@pytest.mark.parametrize("i, j", [(0, 0), (2, 5), (9, 9)])
def test_graded_entries_against_adaptive_quadrature(i, j):
    beam = cases.linear_taper_beam(2.0)
    basis = ModalBasis(10, beam.length)
    sys = assemble(beam, basis)
    L = beam.length

    def m(x):
        return beam.mass_per_length(x) * basis.phi(i + 1, x) * basis.phi(j + 1, x)

    def k(x):
        return beam.bending_stiffness(x) * basis.phi_xx(i + 1, x) * basis.phi_xx(j + 1, x)

    m_ref = integrate.quad(m, 0, L, limit=400, epsabs=0, epsrel=1e-12)[0]
    k_ref = integrate.quad(k, 0, L, limit=400, epsabs=0, epsrel=1e-12)[0]
    assert sys.mass[i, j] == pytest.approx(m_ref, rel=1e-9, abs=1e-12 * abs(sys.mass[i, i]))
    assert sys.stiffness[i, j] == pytest.approx(k_ref, rel=1e-9, abs=1e-12 * abs(sys.stiffness[i, i]))


def test_constant_profiles_match_uniform_beam(ref_beam):
    # a graded profile with equal endpoints is the uniform beam for any index
    basis = ModalBasis(20, 2.0)
    ref = assemble(ref_beam, basis)
    same = assemble(ref_beam.with_profiles(width=PowerLawProfile(30e-3, 30e-3, 5.0)), basis)
    np.testing.assert_allclose(same.mass, ref.mass, rtol=1e-14)
    np.testing.assert_allclose(same.stiffness, ref.stiffness, rtol=1e-14)


@given(st.floats(1.0, 3.0), st.floats(0.5, 2.0))
def test_scaling_with_density_and_modulus(s_rho, s_e):
    beam = cases.reference_beam()
    basis = ModalBasis(6, 2.0)
    ref = assemble(beam, basis)
    scaled = beam.with_profiles(density=PowerLawProfile.constant(2700 * s_rho),
                                modulus=PowerLawProfile.constant(71e9 * s_e))
    got = assemble(scaled, basis)
    np.testing.assert_allclose(got.mass, s_rho * ref.mass, rtol=1e-12, atol=1e-15)
    np.testing.assert_allclose(got.stiffness, s_e * ref.stiffness, rtol=1e-12, atol=1e-6)


def test_quadrature_integrates_polynomials_exactly():
    x, w = quadrature_nodes(2.0, QuadratureSpec(3, 5))
    assert w.sum() == pytest.approx(2.0, rel=1e-14)
    assert np.sum(w * x**9) == pytest.approx(2.0**10 / 10, rel=1e-13)


def test_coupling_and_force_vectors(basis100):
    u = coupling_vector(basis100, 0.8)
    np.testing.assert_array_equal(u, basis100.evaluate([0.8], 0)[:, 0])
    q = force_vector(basis100, 3.0)
    np.testing.assert_allclose(np.abs(q), 6.0, atol=1e-9)
    np.testing.assert_array_equal(coupling_vector(basis100, 2.0), force_vector(basis100))
    for bad in (0.0, -0.1, 2.0001):
        with pytest.raises(ValueError):
            coupling_vector(basis100, bad)


def test_length_mismatch_and_bad_quadrature(ref_beam):
    with pytest.raises(ValueError):
        assemble(ref_beam, ModalBasis(5, 1.0))
    with pytest.raises(ValueError):
        QuadratureSpec(0)
    with pytest.raises(ValueError):
        QuadratureSpec(4, 1)
    assert QuadratureSpec.default_for(100) == QuadratureSpec(400, 10)

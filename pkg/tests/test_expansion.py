import numpy as np
import pytest

from twoscale.expansion import (EpsLadder, SmallDivisorError,
                                extract_reduced_coefficients, fit_power_series,
                                nls_carrier_field, nls_correction_closed_form,
                                nls_correction_spectral,
                                nls_reduced_hamiltonian, poly_coefficient_fit,
                                second_harmonic_divisor, twi_carrier_field,
                                verify_cancellation,
                                verify_reduced_hamiltonian_equation)
from twoscale.fields import MacroField, deriv_y, integrate, random_band_limited
from twoscale.functionals import kdv_functionals
from twoscale.potentials import (PotentialSpec, group_velocity,
                                 nls_frame_speed, omega)
from twoscale.resonance import find_resonant_triads

L = 40.0
LADDER = EpsLadder(0.2, 8)


# --- fitting ------------------------------------------------------------------

def test_fit_exact_power_law():
    eps = LADDER.values
    fit = fit_power_series(list(zip(eps, eps**3)))
    assert abs(fit.exponent - 3.0) < 1e-10
    assert fit.order == 3
    assert fit.coefficient == pytest.approx(1.0, rel=1e-10)


def test_fit_two_term_law():
    eps = LADDER.values
    fit = fit_power_series(list(zip(eps, 2.0 * eps**3 + eps**5)))
    assert abs(fit.exponent - 3.0) < 0.05
    assert fit.coefficient == pytest.approx(2.0, rel=1e-6)
    assert abs(fit.remainder_exponent - 5.0) < 0.05


def test_fit_identically_zero():
    eps = LADDER.values
    fit = fit_power_series(list(zip(eps, np.zeros_like(eps))))
    assert fit.zero


def test_fit_requires_five_distinct_samples():
    with pytest.raises(ValueError):
        fit_power_series([(0.1, 1.0), (0.05, 0.5), (0.025, 0.25), (0.1, 1.0)])


@pytest.mark.parametrize("ratio", [1.0, 10.0, 100.0, 1000.0])
def test_fit_two_term_recovery_up_to_ratio_1e3(ratio):
    eps = LADDER.values
    vals = (1.0 / ratio) * eps**3 + eps**5
    fit = fit_power_series(list(zip(eps, vals)))
    assert fit.order == 3
    assert abs(fit.exponent_tail - 3.0) < 0.05
    assert fit.coefficient == pytest.approx(1.0 / ratio, rel=1e-3)


def test_fit_negative_coefficient():
    eps = LADDER.values
    fit = fit_power_series(list(zip(eps, -3.0 * eps**2)))
    assert fit.order == 2
    assert fit.coefficient == pytest.approx(-3.0, rel=1e-10)


def test_fit_claims_no_order_for_non_power_data():
    rng = np.random.default_rng(0)
    eps = LADDER.values
    vals = np.exp(rng.uniform(-3.0, 3.0, size=eps.size))   # scrambled
    fit = fit_power_series(list(zip(eps, vals)))
    assert fit.order is None
    assert fit.r_squared < 0.9999


def test_poly_coefficient_fit_separates_orders():
    eps = LADDER.values
    vals = 1.0 * eps**3 + 0.4 * eps**4 + 0.41 * eps**5 + 0.16 * eps**6
    c = poly_coefficient_fit(eps, vals)
    assert abs(c[1]) < 1e-8
    assert abs(c[2]) < 1e-6
    assert c[3] == pytest.approx(1.0, rel=1e-4)


# --- cancellation -------------------------------------------------------------

def gaussian_field(Ny=512, width=3.0, seed=0):
    y = np.arange(Ny) * (L / Ny)
    x = np.exp(-((y - 0.5 * L) / width) ** 2)
    x -= x.mean()
    rng = np.random.default_rng(seed)
    return MacroField(x, L, companion=random_band_limited(rng, Ny, L, kmax=8))


def test_kdv_cancellation_at_sound_speed():
    spec = PotentialSpec.fpu(1.0, 1.0)
    rep = verify_cancellation("kdv", gaussian_field(), spec, LADDER, c=1.0)
    assert abs(rep.fits["K"].exponent - 3.0) < 0.05
    assert abs(rep.fits["V"].exponent - 3.0) < 0.05
    assert abs(rep.fits["L"].exponent - 5.0) < 0.1
    assert rep.cancellation
    assert rep.legendre_max < 1e-6
    # K0 = V0 = -I0/2 at the sound speed
    K0, V0, I0 = (rep.fits[n].coefficient for n in ("K", "V", "I"))
    assert K0 == pytest.approx(V0, rel=1e-3)
    assert K0 == pytest.approx(-0.5 * I0, rel=1e-3)


def test_kdv_no_cancellation_off_sound_speed():
    spec = PotentialSpec.fpu(1.0, 1.0)
    rep = verify_cancellation("kdv", gaussian_field(), spec, LADDER, c=2.0)
    assert abs(rep.fits["L"].exponent - 3.0) < 0.05
    assert not rep.cancellation


def test_kdv_reduced_integral_matches_2k():
    # eps^3 int X_y^2 - 2 K(eps) decays at least two orders faster
    spec = PotentialSpec.fpu(1.0, 1.0)
    X = gaussian_field()
    Ired = integrate(deriv_y(X.values, L) ** 2, L)
    eps = LADDER.values
    vals = [eps_k**3 * Ired - 2.0 * kdv_functionals(eps_k, X, spec=spec, c=1.0).K
            for eps_k in eps]
    fit = fit_power_series(list(zip(eps, vals)))
    assert fit.exponent >= 4.9


def test_cancellation_amplitude_invariance():
    spec = PotentialSpec.fpu(1.0, 1.0)
    X = gaussian_field()
    X2 = MacroField(3.0 * X.values, L, companion=3.0 * X.companion)
    r1 = verify_cancellation("kdv", X, spec, LADDER, check_legendre=False, c=1.0)
    r2 = verify_cancellation("kdv", X2, spec, LADDER, check_legendre=False, c=1.0)
    for name in ("K", "V", "L"):
        assert r1.fits[name].exponent == pytest.approx(r2.fits[name].exponent, abs=1e-6)


def nls_setup(theta=np.pi / 2.0):
    spec = PotentialSpec.kg(1.0, 1.0, 1.0, 1.0)
    w = float(omega(theta, spec))
    c = nls_frame_speed(theta, spec)
    return spec, w, c


def nls_p0(seed=3, Ny=128, Nphi=16):
    rng = np.random.default_rng(seed)
    A = random_band_limited(rng, Ny, L, kmax=6, complex_valued=True, amplitude=0.8)
    return nls_carrier_field(A, L, Nphi=Nphi)


def test_nls_leading_orders_vanish_on_carrier_manifold():
    spec, w, c = nls_setup()
    rep = verify_cancellation("nls", nls_p0(), spec, LADDER,
                              check_legendre=False, c=c, omega=w, theta=np.pi / 2)
    for name in ("L", "H"):
        co = rep.coefficients[name]
        scale = max(abs(co[3]), 1e-12)
        assert abs(co[1]) < 1e-8 * scale
    assert rep.cancellation  # eps^2 coefficient of L vanishes for c = -Omega'


def test_nls_eps2_nonzero_for_wrong_frame_speed():
    spec, w, _ = nls_setup()
    rep = verify_cancellation("nls", nls_p0(), spec, LADDER,
                              check_legendre=False, c=0.0, omega=w, theta=np.pi / 2)
    co = rep.coefficients["L"]
    assert abs(co[2]) > 1e-3 * max(abs(co[3]), 1e-12)
    assert not rep.cancellation


def test_twi_leading_exponents_and_equipartition():
    spec = PotentialSpec.kg(-0.22, 1.0, 1.0)
    fam = find_resonant_triads(spec, n_samples=25)
    tri = fam.triads[len(fam.triads) // 2]
    rng = np.random.default_rng(5)
    A = [random_band_limited(rng, 64, L, kmax=4, complex_valued=True, amplitude=0.5)
         for _ in range(3)]
    X = twi_carrier_field(A, L, Nphi=16)
    rep = verify_cancellation("twi", X, spec, LADDER, check_legendre=False,
                              omega=tuple(tri.omegas[:2]), theta=tuple(tri.thetas[:2]))
    for name in ("K", "V", "I"):
        assert abs(rep.fits[name].exponent - 1.0) < 0.05
    K0, V0, I0, E0 = (rep.fits[n].coefficient for n in ("K", "V", "I", "E"))
    assert K0 == pytest.approx(V0, rel=1e-3)
    assert K0 == pytest.approx(-0.5 * I0, rel=1e-3)
    assert K0 == pytest.approx(0.5 * E0, rel=1e-3)
    assert rep.cancellation


# --- reduced coefficients -------------------------------------------------------

def test_kdv_coefficients():
    spec = PotentialSpec.fpu(1.0, 1.0)
    co = extract_reduced_coefficients("kdv", spec, c=1.0)
    assert co.dispersive == pytest.approx(1.0 / 12.0, rel=1e-15)
    assert co.nonlinear == 1.0


def test_kdv_requires_sound_speed():
    spec = PotentialSpec.fpu(1.0, 1.0)
    with pytest.raises(ValueError, match="sound velocity"):
        extract_reduced_coefficients("kdv", spec, c=2.0)


def test_nls_worked_point():
    # theta = pi/2, alpha = v2 = v3 = v4 = 1: omega = sqrt(3), c = -1/sqrt(3),
    # rho1 = -1/3, divisor = 7, rho2 = 1/4 - 1/2 + 1/28 = -3/14
    spec = PotentialSpec.kg(1.0, 1.0, 1.0, 1.0)
    co = extract_reduced_coefficients("nls", spec, theta=np.pi / 2.0)
    assert co.omega == pytest.approx(np.sqrt(3.0), rel=1e-14)
    assert co.c == pytest.approx(-1.0 / np.sqrt(3.0), rel=1e-14)
    assert co.rho1 == pytest.approx(-1.0 / 3.0, rel=1e-12)
    assert second_harmonic_divisor(np.pi / 2.0, spec) == pytest.approx(7.0, rel=1e-14)
    assert co.rho2 == pytest.approx(-3.0 / 14.0, rel=1e-12)
    assert co.C1 == pytest.approx(1.0 / 14.0, rel=1e-12)
    assert co.C_quartic == pytest.approx((1.0 / (8 * np.pi)) * (1.0 / 28.0 - 0.5), rel=1e-12)


def test_nls_cubic_free_case():
    spec = PotentialSpec.kg(1.0, 1.0, 0.0, 1.0)
    co = extract_reduced_coefficients("nls", spec, theta=np.pi / 2.0)
    assert co.rho2 == pytest.approx(0.25, rel=1e-14)
    assert co.C1 == 0.0
    assert co.C2_factor == 0.0
    assert co.C_quartic == 0.0


def test_rho1_double_entry_random_thetas():
    rng = np.random.default_rng(17)
    spec = PotentialSpec.kg(1.0, 1.3, 0.5, 0.5)
    count = 0
    for theta in rng.uniform(0.2, np.pi - 0.2, size=50):
        try:
            co = extract_reduced_coefficients("nls", spec, theta=float(theta),
                                              cross_check_tol=1e-8)
        except SmallDivisorError:
            continue
        count += 1
        assert co.rho1 == pytest.approx(
            spec.alpha * np.cos(theta) - co.c**2, abs=1e-12)
    assert count > 40


def test_small_divisor_error():
    alpha, theta = -0.3, 2.9
    v2 = -(4.0 * alpha / 3.0) * (1.0 - np.cos(theta)) ** 2
    spec = PotentialSpec.kg(alpha, v2, 1.0, 1.0)
    with pytest.raises(SmallDivisorError):
        extract_reduced_coefficients("nls", spec, theta=theta)


def test_twi_coefficients_from_triad():
    spec = PotentialSpec.kg(-0.22, 1.0, 1.0)
    tri = find_resonant_triads(spec, n_samples=15).triads[0]
    co = extract_reduced_coefficients("twi", spec, triad=tri)
    assert np.allclose(np.array(co.transport),
                       spec.alpha * np.sin(np.array(co.thetas)), atol=1e-14)
    assert sum(co.omegas) == pytest.approx(0.0, abs=1e-10)
    # the signed identity omega_n omega_n' = alpha sin(theta_n) relates the
    # transport speed to the dispersion-curve slope on either branch
    for wn, thn, tr in zip(co.omegas, co.thetas, co.transport):
        gv = float(group_velocity(thn, spec))
        assert tr / wn == pytest.approx(gv * abs(wn) / wn, rel=1e-10)


# --- first-order correction -----------------------------------------------------

def test_nls_correction_double_entry():
    spec, w, c = nls_setup()
    co = extract_reduced_coefficients("nls", spec, theta=np.pi / 2.0)
    rng = np.random.default_rng(23)
    A = random_band_limited(rng, 128, L, kmax=6, complex_valued=True)
    closed = nls_correction_closed_form(A, co, spec, Nphi=16)
    spectral = nls_correction_spectral(A, spec, np.pi / 2.0, Nphi=16)
    assert np.max(np.abs(closed - spectral)) < 1e-8 * max(1.0, np.max(np.abs(closed)))


# --- reduced Hamiltonian equation ------------------------------------------------

def test_reduced_hamiltonian_equation_kdv():
    spec = PotentialSpec.fpu(1.0, 1.0)
    co = extract_reduced_coefficients("kdv", spec, c=1.0)
    rep = verify_reduced_hamiltonian_equation("kdv", co, L=L, n_fields=10, seed=1)
    assert rep.ok
    assert rep.max_rel_mismatch < 1e-6


def test_reduced_hamiltonian_equation_nls():
    spec = PotentialSpec.kg(1.0, 1.0, 1.0, 1.0)
    co = extract_reduced_coefficients("nls", spec, theta=np.pi / 2.0)
    rep = verify_reduced_hamiltonian_equation("nls", co, L=L, n_fields=10, seed=2)
    assert rep.ok
    assert rep.max_rel_mismatch < 1e-6
    assert rep.sigma_form_ok


def test_reduced_hamiltonian_equation_twi():
    spec = PotentialSpec.kg(-0.22, 1.0, 1.0)
    tri = find_resonant_triads(spec, n_samples=15).triads[5]
    co = extract_reduced_coefficients("twi", spec, triad=tri)
    rep = verify_reduced_hamiltonian_equation("twi", co, L=L, n_fields=10, seed=3)
    assert rep.ok
    assert rep.sigma_form_ok


def test_nls_quartic_gradient_at_constant_amplitude():
    # d/dB1 of the quartic part reproduces (rho2 / 2 pi)(B1^2+B2^2) B1
    spec = PotentialSpec.kg(1.0, 1.0, 1.0, 1.0)
    co = extract_reduced_coefficients("nls", spec, theta=np.pi / 2.0)
    Ny = 64
    a = 0.7 + 0.2j
    A = np.full(Ny, a)
    h = 1e-5
    delta = np.full(Ny, 0.5)        # perturb B1: dA = delta/(2 sqrt(pi))
    dA = delta / (2.0 * np.sqrt(np.pi))
    num = (nls_reduced_hamiltonian(A + h * dA, L, co)
           - nls_reduced_hamiltonian(A - h * dA, L, co)) / (2.0 * h)
    B1, B2 = 2.0 * np.sqrt(np.pi) * a.real, -2.0 * np.sqrt(np.pi) * a.imag
    grad = (co.rho2 / (2.0 * np.pi)) * (B1**2 + B2**2) * B1
    expected = float(grad * 0.5 * L)   # <grad, delta> with delta = 0.5
    assert num == pytest.approx(expected, rel=1e-6)

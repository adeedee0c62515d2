import numpy as np
import pytest

from twoscale.fields import MacroField, deriv_y, integrate, random_band_limited
from twoscale.functionals import (apply_sigma, kdv_functionals,
                                  legendre_residual, nls_functionals,
                                  sigma_expansion, threewave_functionals,
                                  we_functionals)
from twoscale.potentials import PotentialSpec

L = 40.0
FPU = PotentialSpec.fpu(1.0, 1.0)
KG = PotentialSpec.kg(1.0, 1.0, 1.0, 1.0)


def gaussian_field(Ny=256, width=3.0, amp=1.0, with_tau=True, seed=0):
    y = np.arange(Ny) * (L / Ny)
    x = amp * np.exp(-((y - 0.5 * L) / width) ** 2)
    x -= x.mean()
    tau = None
    if with_tau:
        rng = np.random.default_rng(seed)
        tau = random_band_limited(rng, Ny, L, kmax=8, amplitude=amp)
    return MacroField(x, L, companion=tau)


def nls_p0_field(A, Ny=128, Nphi=16, Atau=None):
    """X0 = 2 Re(A(y) e^{i phi}) on the (y, phi) grid."""
    phi = np.arange(Nphi) * (2 * np.pi / Nphi)
    X = 2.0 * np.real(A[:, None] * np.exp(1j * phi[None, :]))
    Xt = None
    if Atau is not None:
        Xt = 2.0 * np.real(Atau[:, None] * np.exp(1j * phi[None, :]))
    return MacroField(X, L, companion=Xt)


def twi_p0_field(A1, A2, A3, Nphi=16, Atau=None):
    p = np.arange(Nphi) * (2 * np.pi / Nphi)
    P1, P2 = np.meshgrid(p, p, indexing="ij")
    e1, e2 = np.exp(1j * P1), np.exp(1j * P2)
    e3 = np.exp(-1j * (P1 + P2))
    X = 2.0 * np.real(A1[:, None, None] * e1 + A2[:, None, None] * e2
                      + A3[:, None, None] * e3)
    Xt = None
    if Atau is not None:
        Xt = 2.0 * np.real(Atau[0][:, None, None] * e1 + Atau[1][:, None, None] * e2
                           + Atau[2][:, None, None] * e3)
    return MacroField(X, L, companion=Xt)


# --- zero fields ------------------------------------------------------------

def test_zero_fields_give_zero_reports():
    X = MacroField(np.zeros(64), L, companion=np.zeros(64))
    for rep in (we_functionals(0.1, X, spec=FPU),
                kdv_functionals(0.1, X, spec=FPU, c=1.0)):
        assert rep.K == rep.V == rep.I == rep.L == rep.E == rep.H == 0.0
    Xn = MacroField(np.zeros((64, 8)), L, companion=np.zeros((64, 8)))
    rep = nls_functionals(0.1, Xn, spec=KG, c=0.3, omega=1.0, theta=np.pi / 2)
    assert rep.K == rep.V == rep.H == 0.0
    Xt = MacroField(np.zeros((32, 8, 8)), L, companion=np.zeros((32, 8, 8)))
    rep = threewave_functionals(0.1, Xt, spec=KG, omega=(1.0, 0.5), theta=(1.0, 2.0))
    assert rep.K == rep.V == rep.H == 0.0


def test_eps_must_be_positive():
    X = gaussian_field()
    with pytest.raises(ValueError):
        we_functionals(-0.1, X, spec=FPU)
    with pytest.raises(ValueError):
        kdv_functionals(0.0, X, spec=FPU, c=1.0)


# --- wave equation ----------------------------------------------------------

def test_we_h_equals_e():
    X = gaussian_field()
    for eps in (0.2, 0.1, 0.05):
        rep = we_functionals(eps, X, spec=FPU)
        assert rep.H == rep.E
        assert rep.I == 0.0


def test_we_v_leading_order():
    # V(eps) - eps^{-1} V0 stays bounded over the ladder (V0 = int Phi1(X_y))
    X = gaussian_field(with_tau=False)
    Xy = deriv_y(X.values, L)
    phi1, _ = FPU.pair(Xy)
    V0 = integrate(phi1, L)
    rems = []
    for k in range(8):
        eps = 0.2 * 0.5**k
        rep = we_functionals(eps, X, spec=FPU)
        rems.append(abs(rep.V - V0 / eps))
    assert max(rems) < 10.0 * abs(V0)
    assert rems[-1] <= rems[0] + 1e-9  # remainder does not grow as eps -> 0


# --- KdV --------------------------------------------------------------------

def test_kdv_kinetic_term_closed_form():
    X = gaussian_field(with_tau=False)
    Xy = deriv_y(X.values, L)
    for eps in (0.2, 0.05):
        rep = kdv_functionals(eps, X, Xtau=np.zeros_like(X.values), spec=FPU, c=1.0)
        assert rep.K == pytest.approx(eps**3 * 0.5 * integrate(Xy**2, L), rel=1e-12)


def test_kdv_identities_and_legendre():
    X = gaussian_field()
    for eps in (0.2, 0.1, 0.025):
        rep = kdv_functionals(eps, X, spec=FPU, c=1.0)
        assert rep.L == rep.K - rep.V
        assert rep.H == rep.E + rep.I
        res = legendre_residual(
            lambda xt: kdv_functionals(eps, X, Xtau=xt, spec=FPU, c=1.0),
            X.companion)
        assert res < 1e-6


def test_nls_legendre():
    rng = np.random.default_rng(1)
    A = random_band_limited(rng, 128, L, kmax=8, complex_valued=True)
    At = random_band_limited(rng, 128, L, kmax=8, complex_valued=True)
    X = nls_p0_field(A, Atau=At)
    for eps in (0.2, 0.05):
        res = legendre_residual(
            lambda xt: nls_functionals(eps, X, Xtau=xt, spec=KG, c=-0.5,
                                       omega=np.sqrt(3.0), theta=np.pi / 2),
            X.companion)
        assert res < 1e-6


def test_twi_legendre():
    rng = np.random.default_rng(2)
    As = [random_band_limited(rng, 64, L, kmax=5, complex_valued=True) for _ in range(3)]
    Ats = [random_band_limited(rng, 64, L, kmax=5, complex_valued=True) for _ in range(3)]
    X = twi_p0_field(*As, Nphi=16, Atau=Ats)
    for eps in (0.2, 0.05):
        res = legendre_residual(
            lambda xt: threewave_functionals(eps, X, Xtau=xt, spec=KG,
                                             omega=(0.9, 0.7), theta=(1.1, 2.3)),
            X.companion)
        assert res < 1e-6


def test_we_legendre():
    X = gaussian_field()
    res = legendre_residual(
        lambda xt: we_functionals(0.1, X, Xtau=xt, spec=FPU), X.companion)
    assert res < 1e-6


# --- symplectic form --------------------------------------------------------

def tangent_pair(rng, shape):
    def rand():
        f = rng.standard_normal(shape)
        # band-limit by smoothing twice over neighbors along each axis
        for ax in range(f.ndim):
            f = 0.25 * (np.roll(f, 1, ax) + np.roll(f, -1, ax)) + 0.5 * f
        return f
    return (rand(), rand())


@pytest.mark.parametrize("reduction,shape,kw", [
    ("we", (64,), {}),
    ("kdv", (64,), {"c": 1.0}),
    ("nls", (64, 8), {"c": -0.5, "omega": 1.7}),
    ("twi", (32, 8, 8), {"omega": (0.9, 0.4)}),
])
def test_sigma_skew_and_bilinear(reduction, shape, kw):
    rng = np.random.default_rng(11)
    Z = tangent_pair(rng, shape)
    Zt = tangent_pair(rng, shape)
    for eps in (0.3, 0.04):
        a = apply_sigma(reduction, eps, Z, Zt, L, **kw)
        b = apply_sigma(reduction, eps, Zt, Z, L, **kw)
        scale = max(abs(a), abs(b), 1e-30)
        assert abs(a + b) / scale < 1e-10
        # bilinearity in the first slot
        Z2 = (2.5 * Z[0], 2.5 * Z[1])
        assert apply_sigma(reduction, eps, Z2, Zt, L, **kw) == pytest.approx(2.5 * a, rel=1e-12)


def test_sigma_kdv_leading_block():
    rng = np.random.default_rng(12)
    Z = tangent_pair(rng, (64,))
    Zt = tangent_pair(rng, (64,))
    c = 1.3
    blocks = sigma_expansion("kdv", Z, Zt, L, c=c)
    direct = integrate(-2.0 * c * deriv_y(Z[0], L) * Zt[0], L)
    assert blocks[5] == pytest.approx(direct, rel=1e-12)
    # velocity components do not enter the leading block
    Z_novel = (Z[0], np.zeros_like(Z[1]))
    blocks2 = sigma_expansion("kdv", Z_novel, Zt, L, c=c)
    assert blocks2[5] == pytest.approx(blocks[5], rel=1e-12)


def test_sigma_nls_metric_block():
    rng = np.random.default_rng(13)
    Z = tangent_pair(rng, (64, 8))
    Zt = tangent_pair(rng, (64, 8))
    blocks = sigma_expansion("nls", Z, Zt, L, c=0.4, omega=1.1)
    metric = integrate(Z[0] * Zt[1] - Z[1] * Zt[0], L)
    assert blocks[5] == pytest.approx(metric, rel=1e-12)


def test_sigma_shape_mismatch():
    rng = np.random.default_rng(14)
    Z = tangent_pair(rng, (64,))
    Zt = tangent_pair(rng, (32,))
    with pytest.raises(ValueError):
        apply_sigma("kdv", 0.1, Z, Zt, L, c=1.0)


# --- quadrature consistency ---------------------------------------------------

def test_doubling_ny_is_invisible_for_band_limited():
    def field_on(Ny):
        y = np.arange(Ny) * (L / Ny)
        x = np.exp(-((y - 0.5 * L) / 3.0) ** 2)
        return MacroField(x - x.mean(), L, companion=np.cos(2 * np.pi * 2 * y / L))
    r1 = kdv_functionals(0.1, field_on(256), spec=FPU, c=1.0)
    r2 = kdv_functionals(0.1, field_on(512), spec=FPU, c=1.0)
    for name in ("K", "V", "I", "L", "E", "H"):
        a, b = r1.value(name), r2.value(name)
        assert abs(a - b) <= 1e-10 * max(1.0, abs(a))

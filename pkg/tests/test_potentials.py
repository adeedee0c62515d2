import numpy as np
import pytest

from twoscale.potentials import (DegenerateDispersionError,
                                 PotentialSpec, StabilityError, eval_potential,
                                 group_velocity, nls_frame_speed,
                                 nls_nonresonance, omega, omega_sq)


def test_normalization_enforced():
    with pytest.raises(ValueError):
        PotentialSpec(alpha=1.0, v=(1.0, 0.0, 1.0, 0.0, 0.0), kind="kg")
    with pytest.raises(ValueError):
        PotentialSpec(alpha=1.0, v=(0.0, 0.5, 1.0, 0.0, 0.0), kind="kg")


def test_eval_at_zero_is_zero():
    for spec in (PotentialSpec.fpu(1.0, 1.0, 1.0), PotentialSpec.kg(1.0, 1.0, 1.0, 1.0)):
        for which in ("onsite", "pair"):
            val, der = eval_potential(spec, which, 0.0)
            assert val == 0.0 and der == 0.0


def test_fpu_pair_taylor_value():
    spec = PotentialSpec.fpu(1.0, 1.0)
    val, der = eval_potential(spec, "pair", 1.0)
    assert val == pytest.approx(0.5 + 1.0 / 6.0, abs=1e-15)
    assert der == pytest.approx(1.5, abs=1e-15)


def test_unknown_selector_rejected():
    with pytest.raises(ValueError):
        eval_potential(PotentialSpec.fpu(1.0), "bogus", 0.1)


def test_derivative_matches_finite_difference():
    rng = np.random.default_rng(7)
    spec = PotentialSpec.kg(0.8, 1.0, 0.7, -0.4)
    r = rng.uniform(-1.0, 1.0, size=100)
    h = 1e-6
    val_p, _ = eval_potential(spec, "onsite", r + h)
    val_m, _ = eval_potential(spec, "onsite", r - h)
    _, der = eval_potential(spec, "onsite", r)
    fd = (val_p - val_m) / (2.0 * h)
    assert np.max(np.abs(fd - der) / (1.0 + np.abs(der))) < 1e-8


def test_omega_closed_form_points():
    spec = PotentialSpec.kg(123.0, 1.0)
    assert omega(0.0, spec) == pytest.approx(1.0, abs=1e-15)
    spec = PotentialSpec.kg(1.0, 1.0)
    assert omega(np.pi, spec) == pytest.approx(np.sqrt(5.0), rel=1e-14)


def test_omega_even_and_periodic():
    spec = PotentialSpec.kg(0.7, 1.3)
    th = np.linspace(0.0, 2.0 * np.pi, 37)
    assert np.allclose(omega(-th, spec), omega(th, spec), rtol=1e-14)
    assert np.allclose(omega(2.0 * np.pi - th, spec), omega(th, spec), rtol=1e-14)


def test_omega_instability_raises():
    spec = PotentialSpec.kg(-0.4, 1.0)  # 4a + v2 = -0.6 < 0
    with pytest.raises(StabilityError):
        omega(np.pi, spec)


def test_group_velocity_points():
    spec = PotentialSpec.kg(1.0, 1.0)
    assert group_velocity(0.0, spec) == pytest.approx(0.0, abs=1e-15)
    assert group_velocity(np.pi, spec) == pytest.approx(0.0, abs=1e-14)
    assert group_velocity(np.pi / 2.0, spec) == pytest.approx(1.0 / np.sqrt(3.0), rel=1e-14)


def test_group_velocity_matches_finite_difference():
    rng = np.random.default_rng(3)
    spec = PotentialSpec.kg(0.9, 1.1)
    th = rng.uniform(0.05, 2.0 * np.pi - 0.05, size=100)
    h = 1e-6
    fd = (omega(th + h, spec) - omega(th - h, spec)) / (2.0 * h)
    gv = group_velocity(th, spec)
    assert np.max(np.abs(fd - gv) / (1.0 + np.abs(gv))) < 1e-6


def test_group_velocity_degenerate():
    spec = PotentialSpec.fpu(1.0)
    with pytest.raises(DegenerateDispersionError):
        group_velocity(0.0, spec)


def test_nls_frame_speed_points():
    spec = PotentialSpec.kg(1.0, 1.0)
    assert nls_frame_speed(np.pi / 2.0, spec) == pytest.approx(-1.0 / np.sqrt(3.0), rel=1e-14)
    assert nls_frame_speed(np.pi, spec) == pytest.approx(0.0, abs=1e-14)


def test_frame_speed_identity_alpha_one():
    # c omega = -Omega' Omega = -sin(theta) for alpha = 1
    rng = np.random.default_rng(11)
    spec = PotentialSpec.kg(1.0, 1.4)
    for th in rng.uniform(0.01, np.pi - 0.01, size=50):
        c = nls_frame_speed(th, spec)
        assert c * omega(th, spec) + np.sin(th) == pytest.approx(0.0, abs=1e-12)


def test_closed_form_evaluator_overrides_taylor():
    spec = PotentialSpec(alpha=1.0, v=(0.0, 0.0, 1.0, 0.0, 0.0), kind="fpu",
                         phi=lambda r: np.cosh(r) - 1.0,
                         dphi=lambda r: np.sinh(r))
    val, der = eval_potential(spec, "pair", 0.5)
    assert val == pytest.approx(np.cosh(0.5) - 1.0, rel=1e-15)
    assert der == pytest.approx(np.sinh(0.5), rel=1e-15)


def test_nonresonance_clean_point():
    spec = PotentialSpec.kg(1.0, 1.0)
    rep = nls_nonresonance(np.pi / 2.0, spec, M=8)
    assert rep.ok
    assert rep.worst_m == 2
    assert rep.gap == pytest.approx(7.0, rel=1e-14)


def test_nonresonance_detects_second_harmonic():
    # for alpha < 0 one can place 4 omega^2 = Omega^2(2 theta) exactly:
    # v2 = -(4 alpha / 3)(1 - cos theta)^2, stable when (1-cos theta)^2 > 3
    alpha, theta = -0.3, 2.9
    v2 = -(4.0 * alpha / 3.0) * (1.0 - np.cos(theta)) ** 2
    spec = PotentialSpec.kg(alpha, v2)
    spec.require_stability()
    assert abs(4.0 * omega_sq(theta, spec) - omega_sq(2.0 * theta, spec)) < 1e-12
    rep = nls_nonresonance(theta, spec, M=8)
    assert not rep.ok
    assert rep.worst_m == 2

import numpy as np
import pytest

from twoscale.potentials import PotentialSpec, StabilityError, omega
from twoscale.resonance import (PlaneWave, angle_distance, build_zset,
                                find_resonant_triads, retune_alpha_for_grid)


def kg(alpha, v2=1.0, v3=1.0):
    return PotentialSpec.kg(alpha, v2, v3)


def test_attractive_chain_has_no_triads():
    fam = find_resonant_triads(kg(0.5), n_samples=10)
    assert fam.triads == []
    assert "alpha" in fam.status


def test_attractive_grid_always_empty():
    for alpha in np.linspace(0.05, 2.0, 20):
        fam = find_resonant_triads(kg(alpha), n_samples=6)
        assert fam.triads == []


def test_stability_violation_raises():
    with pytest.raises(StabilityError):
        find_resonant_triads(kg(-0.3))


def test_repulsive_family_exists_and_closes():
    fam = find_resonant_triads(kg(-0.22), n_samples=25, tol=1e-10)
    assert len(fam.triads) > 10
    for tri in fam.triads:
        assert tri.residual < 1e-10
        # both components of the sum condition
        assert abs(np.sin(tri.thetas.sum())) < 1e-9
        assert abs(tri.omegas.sum()) < 1e-10


def test_triad_waves_on_dispersion_set():
    spec = kg(-0.22)
    fam = find_resonant_triads(spec, n_samples=12)
    for tri in fam.triads:
        for w in tri.p:
            assert abs(w.omega**2 - omega(w.theta, spec) ** 2) < 1e-10 * (1 + w.omega**2)


def test_zset_contains_generators_and_triad_pairs():
    spec = kg(-0.22)
    tri = find_resonant_triads(spec, n_samples=20).triads[7]
    z = build_zset(tri.p[0], tri.p[1], spec, K=5, tol=1e-8)
    for pair in ((1, 0), (-1, 0), (0, 1), (0, -1), (1, 1), (-1, -1)):
        assert pair in z.members
    assert frozenset(m for m in z.members) == frozenset((-a, -b) for a, b in z.members)


def test_zset_assumption_for_clean_triad():
    spec = kg(-0.22)
    fam = find_resonant_triads(spec, n_samples=20)
    clean = [build_zset(t.p[0], t.p[1], spec, K=5).assumption_holds for t in fam.triads]
    assert any(clean)


def test_zset_degenerate_when_waves_coincide():
    spec = kg(-0.22)
    tri = find_resonant_triads(spec, n_samples=20).triads[7]
    z = build_zset(tri.p[0], tri.p[0], spec, K=5, tol=1e-8)
    assert not z.assumption_holds
    assert len(z.degenerate) > 0
    assert not z.weak_ok


def test_zset_rejects_off_set_wave():
    spec = kg(-0.22)
    bad = PlaneWave(theta=1.0, omega=5.0)
    good = PlaneWave.on_branch(1.0, spec)
    with pytest.raises(ValueError):
        build_zset(bad, good, spec)


def test_retune_alpha_to_ring_grid():
    spec = kg(-0.22)
    fam = find_resonant_triads(spec, n_samples=25)
    # pick a well-separated member of the family
    tri = max(fam.triads, key=lambda t: min(
        np.min(np.abs(np.subtract.outer(
            np.mod(np.concatenate([t.thetas, -t.thetas]), 2 * np.pi),
            np.mod(np.concatenate([t.thetas, -t.thetas]), 2 * np.pi),
        ))[np.triu_indices(6, 1)]), 1.0))
    new_spec, new_tri, (m1, m2) = retune_alpha_for_grid(tri, spec, N=400)
    assert new_tri.residual < 1e-11
    assert abs(new_spec.alpha - spec.alpha) < 0.02
    new_spec.require_stability()
    assert angle_distance(new_tri.p[0].theta * 400) == pytest.approx(0.0, abs=1e-9)

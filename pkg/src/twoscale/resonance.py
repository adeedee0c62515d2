"""Resonant triads of lattice plane waves and the finite-radius resonance set.

A plane wave is a point (theta, omega) on the dispersion set; three waves
form a resonant triad when theta_1 + theta_2 + theta_3 = 0 on the torus and
omega_1 + omega_2 + omega_3 = 0.  For a one-parameter family of repulsive KG
chains such triads exist and are located here by root-finding the resonance
equation in the variables mu_i = (1 - cos theta_i)/2.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional

import numpy as np
from scipy.optimize import brentq

from .potentials import PotentialSpec, StabilityError, omega, omega_sq

TWO_PI = 2.0 * np.pi

# the six index pairs that a clean triad must reproduce within Z
CLEAN_ZSET = frozenset({(1, 0), (-1, 0), (0, 1), (0, -1), (1, 1), (-1, -1)})


def wrap_angle(theta):
    """Representative of theta in [0, 2 pi)."""
    return np.mod(theta, TWO_PI)


def angle_distance(a, b=0.0):
    """Distance on the circle between angles a and b."""
    d = np.mod(a - b, TWO_PI)
    return np.minimum(d, TWO_PI - d)


@dataclass(frozen=True)
class PlaneWave:
    """Point (theta, omega) on the dispersion set; sign marks the branch."""

    theta: float
    omega: float
    sign: int = 1

    def validate(self, spec: PotentialSpec, tol: float = 1e-12) -> None:
        w2 = float(omega_sq(self.theta, spec))
        if abs(self.omega**2 - w2) > tol * (1.0 + self.omega**2):
            raise ValueError(
                f"({self.theta}, {self.omega}) is not on the dispersion set: "
                f"omega^2 - Omega^2 = {self.omega ** 2 - w2:.3e}"
            )

    @classmethod
    def on_branch(cls, theta: float, spec: PotentialSpec, sign: int = 1) -> "PlaneWave":
        theta = float(wrap_angle(theta))
        return cls(theta=theta, omega=sign * float(omega(theta, spec)), sign=sign)


@dataclass(frozen=True)
class Triad:
    """Three plane waves with p1 + p2 + p3 = 0 in T^1 x R."""

    p: tuple[PlaneWave, PlaneWave, PlaneWave]
    residual: float

    @property
    def thetas(self) -> np.ndarray:
        return np.array([w.theta for w in self.p])

    @property
    def omegas(self) -> np.ndarray:
        return np.array([w.omega for w in self.p])

    @classmethod
    def closed(cls, thetas, omegas) -> "Triad":
        """Build a triad, computing the residual of the sum condition."""
        thetas = wrap_angle(np.asarray(thetas, dtype=float))
        omegas = np.asarray(omegas, dtype=float)
        res = float(np.hypot(angle_distance(thetas.sum()), omegas.sum()))
        waves = tuple(
            PlaneWave(theta=float(t), omega=float(w), sign=int(np.sign(w)) or 1)
            for t, w in zip(thetas, omegas)
        )
        return cls(p=waves, residual=res)


def resonance_function(mu1, mu2, spec: PotentialSpec):
    """Residual of the triad resonance equation in (mu1, mu2).

    Zero iff the waves with mu_i = (1 - cos theta_i)/2 admit a sign
    assignment closing the triad; delta = v2/4.
    """
    a = spec.alpha
    d = spec.v[2] / 4.0
    mu1 = np.asarray(mu1, dtype=float)
    mu2 = np.asarray(mu2, dtype=float)
    rad = (a * mu1 + d) * (a * mu2 + d)
    return (
        a**2 * mu1 * mu2 * (mu1 + mu2)
        + (2.0 * a * mu1 * mu2 + d) * np.sqrt(np.maximum(rad, 0.0))
        + d * a * (mu1 * mu2 + mu1 + mu2)
        + 1.25 * d**2
    )


def _close_triad(th1: float, th2: float, spec: PotentialSpec,
                 tol: float) -> Optional[Triad]:
    """Normalize signs so that p1 + p2 + p3 = 0, if possible."""
    w1 = float(omega(th1, spec))
    w2 = float(omega(th2, spec))
    for s2 in (1, -1):
        t2 = s2 * th2
        t3 = -(th1 + t2)
        if abs(float(omega(t3, spec)) - (w1 + w2)) < 10.0 * tol:
            tri = Triad.closed([th1, t2, t3], [w1, w2, -(w1 + w2)])
            if tri.residual <= tol:
                return tri
    return None


@dataclass
class TriadFamily:
    triads: list[Triad]
    status: str = "ok"


def find_resonant_triads(spec: PotentialSpec, n_samples: int = 40,
                         tol: float = 1e-10) -> TriadFamily:
    """Sample the one-parameter family of resonant triads of a KG chain.

    mu1 runs over a uniform grid; for each value the resonance equation is
    bisected in mu2.  Attractive chains (alpha > 0) carry no triads and
    yield an empty family with an explanatory status.
    """
    spec.require_stability()
    if spec.alpha >= 0.0:
        return TriadFamily(triads=[], status="no resonant triads: alpha >= 0 (attractive regime)")
    triads = []
    grid = np.linspace(1e-6, 1.0 - 1e-6, 2001)
    for mu1 in np.linspace(1e-3, 1.0 - 1e-3, n_samples):
        vals = resonance_function(mu1, grid, spec)
        roots = []
        for a, b, fa, fb in zip(grid[:-1], grid[1:], vals[:-1], vals[1:]):
            if np.isfinite(fa) and np.isfinite(fb) and fa * fb < 0.0:
                roots.append(brentq(lambda m: float(resonance_function(mu1, m, spec)),
                                    a, b, xtol=1e-14))
        for mu2 in roots:
            th1 = float(np.arccos(1.0 - 2.0 * mu1))
            th2 = float(np.arccos(1.0 - 2.0 * mu2))
            tri = _close_triad(th1, th2, spec, tol)
            if tri is not None:
                triads.append(tri)
    status = "ok" if triads else "no resonant triads found"
    return TriadFamily(triads=triads, status=status)


@dataclass
class ZSet:
    """Finite-radius resonance set of two plane waves.

    ``members`` are the integer pairs (k1, k2) with |k_i| <= radius whose
    combination k . (theta, omega) lands back on the dispersion set.  The
    assumption flag records whether the set equals the six pairs of a clean
    triad; anything beyond them is listed as a degenerate resonance.
    """

    members: frozenset[tuple[int, int]]
    radius: int
    assumption_holds: bool
    degenerate: frozenset[tuple[int, int]] = field(default_factory=frozenset)
    weak_ok: bool = True


def build_zset(p1: PlaneWave, p2: PlaneWave, spec: PotentialSpec,
               K: int = 5, tol: float = 1e-8) -> ZSet:
    """Enumerate the resonance set of (p1, p2) within radius K."""
    p1.validate(spec)
    p2.validate(spec)
    ks = np.arange(-K, K + 1)
    k1, k2 = np.meshgrid(ks, ks, indexing="ij")
    th = k1 * p1.theta + k2 * p2.theta
    w = k1 * p1.omega + k2 * p2.omega
    hit = np.abs(w**2 - omega_sq(th, spec)) <= tol
    members = frozenset(
        (int(a), int(b)) for a, b in zip(k1[hit].ravel(), k2[hit].ravel())
    )
    degenerate = frozenset(m for m in members if m not in CLEAN_ZSET)
    # weaker sufficient condition: the coupling pairs present, low-order
    # self/difference resonances absent
    required = {(1, 0), (0, 1), (1, 1)}
    forbidden = {(0, 2), (2, 0), (1, -1), (2, 1), (1, 2), (2, 2)}
    weak_ok = required <= members and not (forbidden & members)
    return ZSet(
        members=members,
        radius=K,
        assumption_holds=members == CLEAN_ZSET,
        degenerate=degenerate,
        weak_ok=weak_ok,
    )


def carrier_separation(triad: Triad) -> float:
    """Smallest circular distance between the six carriers +-theta_n."""
    th = wrap_angle(np.concatenate([triad.thetas, -triad.thetas]))
    d = angle_distance(th[:, None], th[None, :])
    return float(np.min(d[np.triu_indices(6, 1)]))


def best_separated_triad(spec: PotentialSpec, n_samples: int = 25,
                         tol: float = 1e-10) -> Triad:
    """The family member whose carriers are farthest apart on the circle.

    Well-separated carriers keep the demodulation bands of the three waves
    (and their conjugates) disjoint.
    """
    fam = find_resonant_triads(spec, n_samples=n_samples, tol=tol)
    if not fam.triads:
        raise ValueError(fam.status)
    return max(fam.triads, key=carrier_separation)


def retune_alpha_for_grid(triad: Triad, spec: PotentialSpec, N: int,
                          tol: float = 1e-12):
    """Snap a triad to the momentum grid of an N-site ring, adjusting alpha.

    Snapping theta_1, theta_2 to multiples of 2 pi / N breaks the frequency
    sum condition; the harmonic pair constant is re-tuned (v2 fixed) so the
    snapped triad is exactly resonant again.  Returns the new spec and
    triad.
    """
    m1 = int(np.round(triad.p[0].theta * N / TWO_PI))
    m2 = int(np.round(_signed_angle(triad.p[1].theta) * N / TWO_PI))
    th1 = TWO_PI * m1 / N
    th2 = TWO_PI * m2 / N
    th3 = -(th1 + th2)

    def defect(alpha: float) -> float:
        s = PotentialSpec.kg(alpha, *spec.v[2:])
        return float(omega(th1, s) + omega(th2, s) - omega(th3, s))

    a0 = spec.alpha
    lo, hi = None, None
    for step in np.linspace(1e-4, 0.2 * abs(a0) + 1e-3, 200):
        for cand in (a0 - step, a0 + step):
            s = PotentialSpec.kg(cand, *spec.v[2:])
            try:
                s.require_stability()
            except StabilityError:
                continue
            if defect(a0) * defect(cand) < 0.0:
                lo, hi = sorted((a0, cand))
                break
        if lo is not None:
            break
    if lo is None:
        raise ValueError("could not re-tune alpha to the snapped momentum grid")
    alpha = brentq(defect, lo, hi, xtol=tol)
    new_spec = PotentialSpec.kg(alpha, *spec.v[2:])
    w1 = float(omega(th1, new_spec))
    w2 = float(omega(th2, new_spec))
    new_triad = Triad.closed([th1, th2, th3], [w1, w2, -(w1 + w2)])
    return new_spec, new_triad, (m1, m2)


def _signed_angle(theta: float) -> float:
    """Representative of theta in (-pi, pi]."""
    t = np.mod(theta, TWO_PI)
    return t - TWO_PI if t > np.pi else t

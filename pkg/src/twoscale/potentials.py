"""Chain potentials, the dispersion relation, and frame-speed helpers."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Literal, Optional

import numpy as np


class StabilityError(ValueError):
    """The linearized chain is unstable for the requested parameters."""


class DegenerateDispersionError(ValueError):
    """Omega(theta) = 0, so a frame/group velocity is undefined."""


@dataclass(frozen=True)
class PotentialSpec:
    """On-site and pair potentials of a chain, given by Taylor data.

    ``v`` holds the Taylor coefficients v0..v4 of the anharmonic potential:
    the pair potential for an FPU chain, the on-site potential for a KG
    chain.  A KG chain couples neighbors harmonically with constant
    ``alpha``; for FPU, ``alpha`` is the pair harmonic constant v2.
    Optionally a closed-form evaluator ``(phi, dphi)`` overrides the Taylor
    series of the anharmonic potential.
    """

    alpha: float
    v: tuple[float, float, float, float, float]
    kind: Literal["fpu", "kg"]
    phi: Optional[Callable[[np.ndarray], np.ndarray]] = None
    dphi: Optional[Callable[[np.ndarray], np.ndarray]] = None

    def __post_init__(self):
        if len(self.v) != 5:
            raise ValueError("v must hold the five Taylor coefficients v0..v4")
        if self.v[0] != 0.0 or self.v[1] != 0.0:
            raise ValueError("normalization requires v0 = v1 = 0")
        if self.kind not in ("fpu", "kg"):
            raise ValueError(f"unknown chain kind {self.kind!r}")

    @classmethod
    def fpu(cls, v2: float, v3: float = 0.0, v4: float = 0.0) -> "PotentialSpec":
        return cls(alpha=v2, v=(0.0, 0.0, v2, v3, v4), kind="fpu")

    @classmethod
    def kg(cls, alpha: float, v2: float, v3: float = 0.0, v4: float = 0.0) -> "PotentialSpec":
        return cls(alpha=alpha, v=(0.0, 0.0, v2, v3, v4), kind="kg")

    @property
    def v2_onsite(self) -> float:
        """Second derivative of the on-site potential at 0 (0 for FPU)."""
        return self.v[2] if self.kind == "kg" else 0.0

    def require_stability(self) -> None:
        """Check min{4 alpha + v2, v2} > 0 for the KG chain."""
        if self.kind != "kg":
            return
        v2 = self.v[2]
        if min(4.0 * self.alpha + v2, v2) <= 0.0:
            raise StabilityError(
                f"stability condition violated: min(4*alpha+v2, v2) = "
                f"{min(4.0 * self.alpha + v2, v2):g} <= 0"
            )

    # potential evaluation ------------------------------------------------

    def _taylor(self, r):
        r = np.asarray(r, dtype=float)
        v0, v1, v2, v3, v4 = self.v
        val = r * r * (v2 / 2.0 + r * (v3 / 6.0 + r * (v4 / 24.0)))
        der = r * (v2 + r * (v3 / 2.0 + r * (v4 / 6.0)))
        return val, der

    def onsite(self, r):
        """Phi_0 and Phi_0' at r."""
        r = np.asarray(r, dtype=float)
        if self.kind == "fpu":
            return np.zeros_like(r), np.zeros_like(r)
        if self.phi is not None:
            return self.phi(r), self.dphi(r)
        return self._taylor(r)

    def pair(self, r):
        """Phi_1 and Phi_1' at r."""
        r = np.asarray(r, dtype=float)
        if self.kind == "kg":
            return 0.5 * self.alpha * r * r, self.alpha * r
        if self.phi is not None:
            return self.phi(r), self.dphi(r)
        return self._taylor(r)


def eval_potential(spec: PotentialSpec, which: str, r):
    """Evaluate a potential and its derivative; ``which`` is 'onsite' or 'pair'."""
    if which == "onsite":
        return spec.onsite(r)
    if which == "pair":
        return spec.pair(r)
    raise ValueError(f"unknown potential selector {which!r}")


def omega_sq(theta, spec: PotentialSpec):
    """Squared dispersion relation v2 + 2 alpha (1 - cos theta)."""
    theta = np.asarray(theta, dtype=float)
    return spec.v2_onsite + 2.0 * spec.alpha * (1.0 - np.cos(theta))


def omega(theta, spec: PotentialSpec):
    """Nonnegative branch Omega(theta) of the dispersion relation."""
    w2 = omega_sq(theta, spec)
    if np.any(w2 < 0.0):
        raise StabilityError(
            "negative squared frequency: the stability condition is violated"
        )
    return np.sqrt(w2)


def group_velocity(theta, spec: PotentialSpec):
    """Omega'(theta) = alpha sin(theta) / Omega(theta)."""
    w = omega(theta, spec)
    if np.any(w == 0.0):
        raise DegenerateDispersionError("Omega(theta) = 0: group velocity undefined")
    return spec.alpha * np.sin(np.asarray(theta, dtype=float)) / w


def nls_frame_speed(theta: float, spec: PotentialSpec) -> float:
    """Frame speed c with c*omega = -Omega'(theta)*Omega(theta).

    On the positive frequency branch this is just the negative group
    velocity.
    """
    return -float(group_velocity(theta, spec))


@dataclass(frozen=True)
class NonResonanceReport:
    ok: bool
    worst_m: int
    gap: float


def nls_nonresonance(theta: float, spec: PotentialSpec, M: int = 8,
                     tol: float = 1e-8) -> NonResonanceReport:
    """Check m^2 omega^2 != Omega^2(m theta) for 2 <= |m| <= M.

    Returns the minimizing m and the gap; ``ok`` is True when the smallest
    gap exceeds ``tol``.  m = 0 is harmless whenever v2 > 0, and the gap is
    even in m, so only positive m are scanned.  The m = 2 divisor is the one
    appearing in the quartic coefficient of the reduced model.
    """
    w2 = float(omega_sq(theta, spec))
    if w2 <= 0.0:
        raise StabilityError("theta off the stable dispersion set")
    ms = np.arange(2, M + 1)
    gaps = np.abs(ms**2 * w2 - omega_sq(ms * theta, spec))
    i = int(np.argmin(gaps))
    return NonResonanceReport(ok=bool(gaps[i] > tol), worst_m=int(ms[i]), gap=float(gaps[i]))

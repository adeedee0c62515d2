"""Periodic macroscopic fields and the spectral operators acting on them.

Fields live on uniform periodic grids: an axis of Ny points covering a box
of length L in y, plus zero, one, or two phase axes of Nphi points covering
[0, 2 pi).  All derivatives and shifts are realized through FFT phase
factors, so they are exact for band-limited data, including shifts by
arbitrary real offsets.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np

TWO_PI = 2.0 * np.pi


def _is_pow2(n: int) -> bool:
    return n >= 2 and (n & (n - 1)) == 0


@dataclass
class MacroField:
    """Grid function X(y, phi) with optional companion time derivative."""

    values: np.ndarray
    L: float
    companion: Optional[np.ndarray] = None

    def __post_init__(self):
        self.values = np.asarray(self.values, dtype=float)
        for n in self.values.shape:
            if not _is_pow2(n):
                raise ValueError("grid sizes must be powers of two")
        if self.companion is not None:
            self.companion = np.asarray(self.companion, dtype=float)
            if self.companion.shape != self.values.shape:
                raise ValueError("companion shape must match values")

    @property
    def phase_dims(self) -> int:
        return self.values.ndim - 1

    @property
    def Ny(self) -> int:
        return self.values.shape[0]

    def tau_derivative(self) -> np.ndarray:
        return self.companion if self.companion is not None else np.zeros_like(self.values)


@dataclass(frozen=True)
class ShiftSpec:
    """Spatial shift delta plus a phase shift theta (one entry per phase axis)."""

    delta: float
    theta: tuple[float, ...] = ()


def wavenumbers(shape: Sequence[int], L: float):
    """FFT wavenumbers per axis: 2 pi m / L in y, integer m in each phi."""
    ks = [TWO_PI * np.fft.fftfreq(shape[0], d=L / shape[0])]
    for n in shape[1:]:
        ks.append(np.fft.fftfreq(n, d=1.0 / n))
    return np.meshgrid(*ks, indexing="ij")


def grid_coords(shape: Sequence[int], L: float):
    """Grid coordinates: y in [0, L), each phi in [0, 2 pi)."""
    axes = [np.arange(shape[0]) * (L / shape[0])]
    for n in shape[1:]:
        axes.append(np.arange(n) * (TWO_PI / n))
    return np.meshgrid(*axes, indexing="ij")


def integrate(values: np.ndarray, L: float) -> float:
    """Rectangle-rule integral over [0,L) x [0,2pi)^k (spectrally accurate)."""
    cell = (L / values.shape[0]) * np.prod(
        [TWO_PI / n for n in values.shape[1:]], initial=1.0
    )
    return float(values.sum() * cell)


def inner(f: np.ndarray, g: np.ndarray, L: float) -> float:
    return integrate(f * g, L)


def _apply_multiplier(values: np.ndarray, mult: np.ndarray) -> np.ndarray:
    return np.fft.ifftn(np.fft.fftn(values) * mult).real


def deriv_y(values: np.ndarray, L: float, order: int = 1) -> np.ndarray:
    ks = wavenumbers(values.shape, L)
    return _apply_multiplier(values, (1j * ks[0]) ** order)


def deriv_phi(values: np.ndarray, L: float, axis: int = 1, order: int = 1) -> np.ndarray:
    ks = wavenumbers(values.shape, L)
    return _apply_multiplier(values, (1j * ks[axis]) ** order)


def phase_gradient(values: np.ndarray, L: float, weights: Sequence[float]) -> np.ndarray:
    """weights . grad_phi for a field with len(weights) phase axes."""
    ks = wavenumbers(values.shape, L)
    mult = sum(w * 1j * ks[1 + i] for i, w in enumerate(weights))
    return _apply_multiplier(values, mult)


def shift(values: np.ndarray, L: float, delta: float,
          theta: Sequence[float] = ()) -> np.ndarray:
    """f(y + delta, phi + theta), spectrally exact for any real offsets."""
    ks = wavenumbers(values.shape, L)
    phase = ks[0] * delta
    for i, t in enumerate(theta):
        phase = phase + ks[1 + i] * t
    return _apply_multiplier(values, np.exp(1j * phase))


def shift_op(f: np.ndarray, L: float, s: ShiftSpec, which: str) -> np.ndarray:
    """Discrete difference operators built from shifts.

    fwd:     f(y+d, phi+t) - f(y, phi)
    bwd:     f(y, phi) - f(y-d, phi-t)
    laplace: fwd - bwd
    """
    ks = wavenumbers(f.shape, L)
    phase = ks[0] * s.delta
    for i, t in enumerate(s.theta):
        phase = phase + ks[1 + i] * t
    if which == "fwd":
        mult = np.exp(1j * phase) - 1.0
    elif which == "bwd":
        mult = 1.0 - np.exp(-1j * phase)
    elif which == "laplace":
        mult = 2.0 * (np.cos(phase) - 1.0)
    else:
        raise ValueError(f"unknown shift operator {which!r}")
    return _apply_multiplier(f, mult)


def lowpass(values: np.ndarray, keep: int, axis: int = 0) -> np.ndarray:
    """Zero all Fourier modes with |m| > keep along one axis."""
    spec = np.fft.fft(values, axis=axis)
    m = np.abs(np.fft.fftfreq(values.shape[axis], d=1.0 / values.shape[axis]))
    sl = [None] * values.ndim
    sl[axis] = slice(None)
    spec = spec * (m <= keep)[tuple(sl)]
    out = np.fft.ifft(spec, axis=axis)
    return out.real if np.isrealobj(values) else out


def dealias_23(values: np.ndarray) -> np.ndarray:
    """2/3-rule truncation along every axis."""
    out = np.fft.fftn(values)
    for ax, n in enumerate(values.shape):
        m = np.abs(np.fft.fftfreq(n, d=1.0 / n))
        sl = [None] * values.ndim
        sl[ax] = slice(None)
        out = out * (m <= n // 3)[tuple(sl)]
    res = np.fft.ifftn(out)
    return res.real if np.isrealobj(values) else res


def trig_interp(values: np.ndarray, L: float, points: np.ndarray) -> np.ndarray:
    """Evaluate the trigonometric interpolant of 1d samples at arbitrary y."""
    values = np.asarray(values)
    n = values.shape[0]
    coef = np.fft.fft(values, axis=0) / n
    m = np.fft.fftfreq(n, d=1.0 / n)
    if n % 2 == 0:  # split the Nyquist mode symmetrically
        coef = np.concatenate([coef, coef[n // 2: n // 2 + 1]], axis=0)
        coef[n // 2] *= 0.5
        coef[-1] *= 0.5
        m = np.concatenate([m, [-m[n // 2]]])
    phase = np.exp(1j * TWO_PI / L * np.outer(points, m))
    out = phase @ coef
    return out.real if np.isrealobj(values) else out


def random_band_limited(rng: np.random.Generator, n: int, L: float,
                        kmax: int, amplitude: float = 1.0,
                        complex_valued: bool = False) -> np.ndarray:
    """Random smooth periodic 1d field with modes |m| <= kmax."""
    spec = np.zeros(n, dtype=complex)
    idx = np.arange(1, kmax + 1)
    c = rng.standard_normal(kmax) + 1j * rng.standard_normal(kmax)
    spec[idx] = c
    if complex_valued:
        spec[-idx] = rng.standard_normal(kmax) + 1j * rng.standard_normal(kmax)
        spec[0] = rng.standard_normal() + 1j * rng.standard_normal()
    else:
        spec[-idx] = np.conj(c)
        spec[0] = rng.standard_normal()
    f = np.fft.ifft(spec) * n
    f = f if complex_valued else f.real
    peak = np.max(np.abs(f))
    return f * (amplitude / peak) if peak > 0 else f

"""Microscopic chain dynamics on a periodic ring of N sites.

Newton's equations x_j'' = Phi_1'(x_{j+1}-x_j) - Phi_1'(x_j-x_{j-1})
- Phi_0'(x_j) are integrated with the Stoermer-Verlet scheme
(kick-drift-kick), which is symplectic and time-reversible.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Optional

import numpy as np

from .potentials import PotentialSpec, omega


class DivergenceError(RuntimeError):
    def __init__(self, step: int):
        super().__init__(f"non-finite chain state detected after step {step}")
        self.step = step


@dataclass
class ChainState:
    """Displacements and velocities on a ring; neighbor of N-1 is 0."""

    x: np.ndarray
    v: np.ndarray
    t: float
    spec: PotentialSpec

    def __post_init__(self):
        self.x = np.asarray(self.x, dtype=float)
        self.v = np.asarray(self.v, dtype=float)
        if self.x.shape != self.v.shape or self.x.ndim != 1 or self.x.size < 2:
            raise ValueError("x and v must be equal-length 1d arrays, N >= 2")

    @property
    def N(self) -> int:
        return self.x.size

    def copy(self) -> "ChainState":
        return ChainState(self.x.copy(), self.v.copy(), self.t, self.spec)


def force(state: ChainState) -> np.ndarray:
    """Right-hand side of Newton's equations at the current state."""
    return _force(state.x, state.spec)


def _force(x: np.ndarray, spec: PotentialSpec) -> np.ndarray:
    if spec.kind == "kg":
        f = spec.alpha * (np.roll(x, -1) + np.roll(x, 1) - 2.0 * x)
        _, dphi0 = spec.onsite(x)
        return f - dphi0
    r = np.roll(x, -1) - x          # r_j = x_{j+1} - x_j
    _, dphi1 = spec.pair(r)
    return dphi1 - np.roll(dphi1, 1)


def total_energy(state: ChainState) -> float:
    """Kinetic plus potential energy with periodic wrap."""
    r = np.roll(state.x, -1) - state.x
    phi1, _ = state.spec.pair(r)
    phi0, _ = state.spec.onsite(state.x)
    return float(0.5 * np.dot(state.v, state.v) + phi1.sum() + phi0.sum())


def total_momentum(state: ChainState) -> float:
    return float(state.v.sum())


def step_verlet(state: ChainState, dt: float, n_steps: int,
                observer: Optional[Callable[[int, ChainState], None]] = None,
                observe_stride: int = 0) -> ChainState:
    """Advance n_steps of size dt (dt < 0 runs backwards in time).

    The observer, when given, is called with (step_index, state) every
    ``observe_stride`` steps and once more at the end.  Raises
    DivergenceError naming the step at which the state left float range.
    """
    if dt == 0.0:
        raise ValueError("dt must be nonzero")
    st = state.copy()
    f = _force(st.x, st.spec)
    check = observe_stride if observe_stride else 1024
    for k in range(1, n_steps + 1):
        st.v += 0.5 * dt * f
        st.x += dt * st.v
        f = _force(st.x, st.spec)
        st.v += 0.5 * dt * f
        st.t += dt
        if k % check == 0 or k == n_steps:
            if not np.all(np.isfinite(st.x)) or not np.all(np.isfinite(st.v)):
                raise DivergenceError(k)
            if observer is not None and observe_stride:
                observer(k, st)
    return st


def default_dt(spec: PotentialSpec) -> float:
    """min(0.05, 0.2/Omega_max), Omega_max at the band edge theta = pi."""
    w_max = float(omega(np.pi, spec))
    return min(0.05, 0.2 / w_max) if w_max > 0 else 0.05


def snap_theta(theta: float, N: int) -> tuple[float, int]:
    """Nearest ring momentum 2 pi m / N; returns (snapped theta, m)."""
    m = int(np.round(theta * N / (2.0 * np.pi)))
    return 2.0 * np.pi * m / N, m


def plane_wave_state(spec: PotentialSpec, N: int, m: int,
                     amplitude: float) -> ChainState:
    """Exact plane wave of the linearized chain at momentum 2 pi m / N."""
    theta = 2.0 * np.pi * m / N
    w = float(omega(theta, spec))
    j = np.arange(N)
    x = 2.0 * amplitude * np.cos(theta * j)
    v = -2.0 * amplitude * w * np.sin(theta * j)
    return ChainState(x=x, v=v, t=0.0, spec=spec)


@dataclass
class CellDemoResult:
    max_deviation: float
    N: int
    cells: int


def case_c1_demo(n_cells: int, cell_x: np.ndarray, cell_v: np.ndarray,
                 T: float = 10.0, dt: float = 0.05) -> CellDemoResult:
    """Ballistic evolution of cell-periodic data under the discrete wave equation.

    The ring carries n_cells copies of a unit cell sampled at s sub-sites;
    the wave operator shifts by one full cell, so cell-periodic data sees
    zero force and must travel ballistically, x(t) = x(0) + t v(0).
    Returns the largest deviation from that line over [0, T].
    """
    cell_x = np.asarray(cell_x, dtype=float)
    cell_v = np.asarray(cell_v, dtype=float)
    if cell_x.shape != cell_v.shape or cell_x.ndim != 1:
        raise ValueError("cell profiles must be equal-length 1d arrays")
    s = cell_x.size
    x = np.tile(cell_x, n_cells)
    v = np.tile(cell_v, n_cells)
    x0, v0 = x.copy(), v.copy()

    def wave_force(x):
        return np.roll(x, -s) + np.roll(x, s) - 2.0 * x

    n_steps = int(np.ceil(T / dt))
    f = wave_force(x)
    t = 0.0
    dev = 0.0
    for _ in range(n_steps):
        v += 0.5 * dt * f
        x += dt * v
        f = wave_force(x)
        v += 0.5 * dt * f
        t += dt
        dev = max(dev, float(np.max(np.abs(x - (x0 + t * v0)))))
    return CellDemoResult(max_deviation=dev, N=x.size, cells=n_cells)

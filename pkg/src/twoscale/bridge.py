"""Seeding, demodulation, and micro-macro comparison.

The bridge realizes the coarse-graining loop: macroscopic fields seed a
microscopic ring through the two-scale representation of each reduction,
the chain is advanced in microscopic time t = tau / eps^beta, and lattice
states are demodulated back to macroscopic fields for comparison with the
reduced model solved on its own.

Seeding evaluates the macroscopic fields at lattice positions through
their trigonometric interpolants, so band-limited data round-trips through
demodulation at t = 0 to near machine precision.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

import numpy as np

from .chain import ChainState, default_dt, snap_theta, step_verlet, total_energy
from .expansion import (ReducedCoefficients, fit_power_series,
                        kdv_rhs_strain, nls_rhs, twi_rhs)
from .fields import lowpass, trig_interp
from .macro_pde import (PSystemState, solve_kdv, solve_nls, solve_psystem,
                        solve_threewave)
from .potentials import PotentialSpec, group_velocity, omega
from .resonance import Triad, angle_distance, retune_alpha_for_grid

TWO_PI = 2.0 * np.pi

# ansatz exponents (amplitude alpha, time beta); the space scaling is eps
ANSATZ_EXPONENTS = {"we": (-1, 1), "kdv": (1, 3), "nls": (1, 2), "twi": (1, 1)}


@dataclass
class ScalingSpec:
    """Commensurate realization of a two-scale ansatz on an N-site ring."""

    reduction: str
    L: float
    eps_requested: float
    N: int
    eps: float
    spec: PotentialSpec
    c: float = 0.0
    omega: float | tuple = 0.0
    theta: float | tuple = 0.0
    carrier_m: tuple = ()
    n_macro: int = 64
    keep_modes: int = 32

    @property
    def exponents(self) -> tuple[int, int]:
        return ANSATZ_EXPONENTS[self.reduction]

    @property
    def micro_time(self):
        beta = self.exponents[1]
        return lambda tau: tau / self.eps**beta

    @classmethod
    def _ring(cls, L: float, eps: float) -> tuple[int, float]:
        N = int(round(L / eps))
        return N, L / N

    @classmethod
    def we(cls, L: float, eps: float, spec: PotentialSpec,
           n_macro: int = 64) -> "ScalingSpec":
        N, eps_a = cls._ring(L, eps)
        return cls("we", L, eps, N, eps_a, spec, n_macro=n_macro,
                   keep_modes=n_macro // 2)

    @classmethod
    def kdv(cls, L: float, eps: float, spec: PotentialSpec,
            c: Optional[float] = None, n_macro: int = 64) -> "ScalingSpec":
        N, eps_a = cls._ring(L, eps)
        v2 = spec.v[2]
        if c is None:
            c = float(np.sqrt(v2))
        if abs(c * c - v2) > 1e-12 * max(1.0, v2):
            raise ValueError("KdV seeding requires c^2 = v2 (sound velocity)")
        return cls("kdv", L, eps, N, eps_a, spec, c=c, n_macro=n_macro,
                   keep_modes=n_macro // 2)

    @classmethod
    def nls(cls, L: float, eps: float, spec: PotentialSpec, theta: float,
            n_macro: int = 64) -> "ScalingSpec":
        N, eps_a = cls._ring(L, eps)
        th, m = snap_theta(theta, N)
        w = float(omega(th, spec))
        c = -float(group_velocity(th, spec))
        return cls("nls", L, eps, N, eps_a, spec, c=c, omega=w, theta=th,
                   carrier_m=(m,), n_macro=n_macro, keep_modes=n_macro // 2)

    @classmethod
    def twi(cls, L: float, eps: float, spec: PotentialSpec, triad: Triad,
            n_macro: int = 64, keep_modes: Optional[int] = None) -> "ScalingSpec":
        """Snap the triad to the ring momenta, re-tuning alpha for exact resonance."""
        N, eps_a = cls._ring(L, eps)
        new_spec, tri, (m1, m2) = retune_alpha_for_grid(triad, spec, N)
        ths = tuple(w.theta for w in tri.p)
        ws = tuple(w.omega for w in tri.p)
        if keep_modes is None:
            # keep the demodulation band clear of every carrier separation
            carriers = np.array([*ths, *(-np.array(ths))])
            sep = np.min(angle_distance(carriers[:, None], carriers[None, :])
                         [np.triu_indices(6, 1)])
            keep_modes = int(min(n_macro // 2, 0.45 * sep * N / TWO_PI))
        return cls("twi", L, eps, N, eps_a, new_spec, omega=ws, theta=ths,
                   carrier_m=(m1, m2, -m1 - m2), n_macro=n_macro,
                   keep_modes=max(keep_modes, 4))


@dataclass
class BridgeReport:
    tau_grid: np.ndarray
    error: np.ndarray
    eps_used: float
    residual_slope: float = np.nan
    aliasing: bool = False
    refused_past_shock: bool = False
    shock_time: Optional[float] = None


# --- seeding -----------------------------------------------------------------


def _interp(values: np.ndarray, L: float, pts: np.ndarray) -> np.ndarray:
    return trig_interp(values, L, pts)


def seed_chain(scaling: ScalingSpec, macro, macro_tau=None, t: float = 0.0,
               correction: bool = False,
               coeffs: Optional[ReducedCoefficients] = None) -> ChainState:
    """Microscopic state of the two-scale representation at time t.

    ``macro`` is the reduction's primary field on the macroscopic grid:
    X for we/kdv (with ``macro_tau`` its time derivative), the complex
    amplitude A for nls, the amplitude triple for twi.  For nls,
    ``correction=True`` adds the first-order microstructure correction.
    """
    eps, N, L = scaling.eps, scaling.N, scaling.L
    j = np.arange(N)
    red = scaling.reduction

    if red == "we":
        y = np.mod(eps * j, L)
        X = _interp(macro, L, y).real
        Xt = _interp(macro_tau, L, y).real if macro_tau is not None else 0.0 * y
        return ChainState(x=X / eps, v=Xt, t=t, spec=scaling.spec)

    if red == "kdv":
        c = scaling.c
        y = np.mod(eps * j + eps * c * t, L)
        X = _interp(macro, L, y).real
        Xy = _interp(_deriv(macro, L), L, y).real
        Xt = _interp(macro_tau, L, y).real if macro_tau is not None else 0.0 * y
        return ChainState(x=eps * X, v=eps**4 * Xt + eps**2 * c * Xy, t=t,
                          spec=scaling.spec)

    if red == "nls":
        c, w, th = scaling.c, scaling.omega, scaling.theta
        y = np.mod(eps * j - eps * c * t, L)
        phase = np.exp(1j * (w * t + th * j))
        A = _interp(macro, L, y)
        Ay = _interp(_deriv(macro, L), L, y)
        At = _interp(macro_tau, L, y) if macro_tau is not None else 0.0 * A
        X = 2.0 * np.real(A * phase)
        Xy = 2.0 * np.real(Ay * phase)
        Xphi = 2.0 * np.real(1j * A * phase)
        Xt = 2.0 * np.real(At * phase)
        x = eps * X
        v = eps**3 * Xt - eps**2 * c * Xy + eps * w * Xphi
        if correction:
            if coeffs is None:
                raise ValueError("the correction needs the reduced coefficients")
            v3, v2 = scaling.spec.v[3], scaling.spec.v[2]
            A2 = _interp(macro**2, L, y)
            A2y = _interp(_deriv(macro**2, L), L, y)
            absA2 = _interp(np.abs(macro) ** 2, L, y).real
            absA2y = _interp(_deriv(np.abs(macro) ** 2, L), L, y).real
            X1 = 2.0 * np.real(coeffs.C1 * A2 * phase**2) - (v3 / v2) * absA2
            X1y = 2.0 * np.real(coeffs.C1 * A2y * phase**2) - (v3 / v2) * absA2y
            X1phi = 2.0 * np.real(2j * coeffs.C1 * A2 * phase**2)
            x = x + eps**2 * X1
            v = v + eps**2 * (w * X1phi) - eps**3 * c * X1y
        return ChainState(x=x, v=v, t=t, spec=scaling.spec)

    if red == "twi":
        ws, ths = scaling.omega, scaling.theta
        y = np.mod(eps * j, L)
        x = np.zeros(N)
        v = np.zeros(N)
        for n in range(3):
            phase = np.exp(1j * (ws[n] * t + ths[n] * j))
            A = _interp(macro[n], L, y)
            At = (_interp(macro_tau[n], L, y) if macro_tau is not None
                  else 0.0 * A)
            x += 2.0 * np.real(A * phase)
            v += eps * 2.0 * np.real(At * phase) \
                + 2.0 * np.real(1j * ws[n] * A * phase)
        return ChainState(x=eps * x, v=eps * v, t=t, spec=scaling.spec)

    raise ValueError(f"unknown reduction {red!r}")


def _deriv(f: np.ndarray, L: float, order: int = 1) -> np.ndarray:
    n = f.shape[0]
    k = TWO_PI * np.fft.fftfreq(n, d=L / n)
    return np.fft.ifft(np.fft.fft(f) * (1j * k) ** order)


# --- demodulation ---------------------------------------------------------------


@dataclass
class Demodulated:
    """Macroscopic fields read off a chain state."""

    fields: tuple              # (X, W) for we, (X, U) for kdv, A / A-triple
    aliasing: bool


def _ring_shift(f: np.ndarray, sites: float) -> np.ndarray:
    """f(j + sites) for real ring offsets, spectrally."""
    N = f.shape[0]
    k = np.fft.fftfreq(N, d=1.0 / N)
    return np.fft.ifft(np.fft.fft(f) * np.exp(1j * TWO_PI * k * sites / N))


def _to_macro_grid(f: np.ndarray, n_macro: int, keep: int) -> tuple[np.ndarray, bool]:
    """Low-pass to |k| <= keep and resample on the macroscopic grid.

    The macroscopic Nyquist mode is always dropped so that the restriction
    is exactly invertible on band-limited data.
    """
    N = f.shape[0]
    keep = min(keep, n_macro // 2 - 1)
    spec = np.fft.fft(f) / N
    k = np.fft.fftfreq(N, d=1.0 / N)
    spec = np.where(np.abs(k) <= keep, spec, 0.0)
    kept = spec[np.abs(k) <= keep]
    peak = np.max(np.abs(kept))
    band = np.abs(k[np.abs(k) <= keep])
    tail = np.max(np.abs(kept[band > 0.75 * keep])) if keep >= 4 else 0.0
    aliasing = bool(peak > 0 and tail > 1e-2 * peak)
    out = np.zeros(n_macro, dtype=complex)
    km = np.fft.fftfreq(n_macro, d=1.0 / n_macro)
    for i, kk in enumerate(km):
        if abs(kk) <= keep:
            out[i] = spec[int(kk) % N]
    return np.fft.ifft(out) * n_macro, aliasing


def demodulate(state: ChainState, scaling: ScalingSpec, t: Optional[float] = None) -> Demodulated:
    """Extract the slow macroscopic fields from a chain state at time t."""
    if t is None:
        t = state.t
    eps, N = scaling.eps, scaling.N
    j = np.arange(N)
    red = scaling.reduction
    keep = scaling.keep_modes
    nm = scaling.n_macro

    if red == "we":
        X, a1 = _to_macro_grid(eps * state.x, nm, keep)
        W, a2 = _to_macro_grid(state.v, nm, keep)
        return Demodulated(fields=(X.real, W.real), aliasing=a1 or a2)

    if red == "kdv":
        g = _ring_shift(state.x / eps, -scaling.c * t)
        X, a1 = _to_macro_grid(g.real, nm, keep)
        U = _deriv(X.real, scaling.L).real
        return Demodulated(fields=(X.real, U), aliasing=a1)

    if red == "nls":
        # the conjugate-carrier part sits 2 theta away in momentum and is
        # removed by the band filter, so displacements alone suffice
        w, th = scaling.omega, scaling.theta
        carrier = np.exp(-1j * (w * t + th * j))
        d = state.x * carrier
        d = _ring_shift(d, scaling.c * t)
        A, al = _to_macro_grid(d, nm, keep)
        return Demodulated(fields=(A / eps,), aliasing=al)

    if red == "twi":
        ws, ths = scaling.omega, scaling.theta
        out = []
        alias = False
        for n in range(3):
            carrier = np.exp(-1j * (ws[n] * t + ths[n] * j))
            A, al = _to_macro_grid(state.x * carrier, nm, keep)
            out.append(A / eps)
            alias = alias or al
        return Demodulated(fields=tuple(out), aliasing=alias)

    raise ValueError(f"unknown reduction {red!r}")


# --- micro-macro comparison -------------------------------------------------------


def _l2(f: np.ndarray) -> float:
    return float(np.sqrt(np.mean(np.abs(f) ** 2)))


def micro_macro_error(scaling: ScalingSpec, macro0, coeffs: ReducedCoefficients,
                      tau_end: float, n_samples: int = 5,
                      correction: bool = False,
                      dt: Optional[float] = None) -> BridgeReport:
    """Run chain and reduced model side by side; report demodulation errors.

    The error at each sampled tau is the discrete L2 distance of the
    demodulated primary field from the reduced-model solution, normalized
    by the initial macroscopic norm.  For the wave-equation reduction the
    comparison refuses to report past the p-system shock time.
    """
    red = scaling.reduction
    eps = scaling.eps
    beta = scaling.exponents[1]
    taus = np.linspace(0.0, tau_end, n_samples + 1)
    shock_time = None
    refused = False

    if red == "we":
        R0, W0 = macro0
        traj = solve_psystem(PSystemState(R=R0, W=W0, L=scaling.L), scaling.spec,
                             tau_end=tau_end, n_out=n_samples)
        shock_time = traj.shock_time
        if shock_time is not None and tau_end >= shock_time:
            refused = True
            taus = taus[taus < shock_time]
        macro_at = lambda i: (traj.R[i], traj.W[i])
        y = np.arange(R0.size) * (scaling.L / R0.size)
        k = TWO_PI * np.fft.fftfreq(R0.size, d=scaling.L / R0.size)
        Xspec = np.fft.fft(R0)
        X0 = np.fft.ifft(np.where(k != 0, Xspec / np.where(k != 0, 1j * k, 1.0), 0.0)).real
        st = seed_chain(scaling, X0, W0)
        norm0 = np.sqrt(_l2(R0) ** 2 + _l2(W0) ** 2)
    elif red == "kdv":
        X0 = macro0
        traj = solve_kdv(X0, coeffs, scaling.L, tau_end=tau_end, n_out=n_samples)
        U0 = traj.U[0]
        Xt0 = _antideriv_real(kdv_rhs_strain(U0, scaling.L, coeffs), scaling.L)
        st = seed_chain(scaling, X0, Xt0)
        norm0 = _l2(traj.U[0])
    elif red == "nls":
        A0 = macro0
        traj = solve_nls(A0, coeffs, scaling.L, tau_end=tau_end, n_out=n_samples)
        At0 = nls_rhs(A0, scaling.L, coeffs)
        st = seed_chain(scaling, A0, At0, correction=correction, coeffs=coeffs)
        norm0 = _l2(A0)
    elif red == "twi":
        A0 = macro0
        traj = solve_threewave(A0, coeffs, scaling.L, tau_end=tau_end, n_out=n_samples)
        At0 = twi_rhs(list(A0), scaling.L, coeffs)
        st = seed_chain(scaling, list(A0), At0)
        norm0 = float(np.sqrt(sum(_l2(a) ** 2 for a in A0)))
    else:
        raise ValueError(f"unknown reduction {red!r}")

    if dt is None:
        # shrink dt with eps so the integrator's phase error (eps-independent
        # at fixed dt over t = tau/eps^beta) stays below the modulation error
        dt = default_dt(scaling.spec) * min(1.0, eps / 0.2)
    norm0 = max(norm0, 1e-300)

    errors = []
    aliasing = False
    t_now = 0.0
    for i, tau in enumerate(taus):
        t_target = tau / eps**beta
        if t_target > t_now:
            span = t_target - t_now
            n = max(1, int(np.ceil(span / dt)))
            st = step_verlet(st, span / n, n)
            t_now = t_target
        dem = demodulate(st, scaling, t=t_now)
        aliasing = aliasing or dem.aliasing

        def restrict(f):
            # compare inside the demodulation band on the macroscopic grid
            return lowpass(_downsample(f, scaling.n_macro), scaling.keep_modes)

        if red == "we":
            R, W = (restrict(f) for f in macro_at(i))
            Xd, Wd = dem.fields
            Ud = _deriv(Xd, scaling.L).real
            err = np.sqrt(_l2(Ud - R) ** 2 + _l2(Wd - W) ** 2) / norm0
        elif red == "kdv":
            err = _l2(dem.fields[1] - restrict(traj.U[i])) / norm0
        elif red == "nls":
            err = _l2(dem.fields[0] - restrict(traj.A[i])) / norm0
        else:
            err = np.sqrt(sum(
                _l2(dem.fields[n] - restrict(traj.A[i][n])) ** 2
                for n in range(3))) / norm0
        errors.append(float(err))

    return BridgeReport(tau_grid=taus, error=np.array(errors), eps_used=eps,
                        aliasing=aliasing, refused_past_shock=refused,
                        shock_time=shock_time)


def _downsample(f: np.ndarray, n_macro: int) -> np.ndarray:
    """Spectral restriction of a periodic grid function to n_macro points."""
    N = f.shape[0]
    spec = np.fft.fft(f) / N
    out = np.zeros(n_macro, dtype=complex)
    km = np.fft.fftfreq(n_macro, d=1.0 / n_macro)
    for i, kk in enumerate(km):
        if abs(kk) < n_macro // 2:
            out[i] = spec[int(kk) % N]
    res = np.fft.ifft(out) * n_macro
    return res.real if np.isrealobj(f) else res


def _downsample_pair(pair, n_macro: int):
    return tuple(_downsample(p, n_macro) for p in pair)


def _antideriv_real(f: np.ndarray, L: float) -> np.ndarray:
    n = f.shape[0]
    k = TWO_PI * np.fft.fftfreq(n, d=L / n)
    spec = np.fft.fft(f)
    out = np.zeros_like(spec)
    out[1:] = spec[1:] / (1j * k[1:])
    return np.fft.ifft(out).real


# --- ansatz residual ----------------------------------------------------------------


def ansatz_residual(scaling: ScalingSpec, macro, coeffs: Optional[ReducedCoefficients],
                    t: float = 0.0, correction: bool = False) -> float:
    """l2-in-j norm of x_j'' - force_j for the reconstructed trajectory.

    Time derivatives of the macroscopic fields come from the reduced model
    itself, so the residual measures how well the two-scale representation
    satisfies the microscopic law of motion.  For nls, ``correction=True``
    adds the first-order microstructure correction, which removes the
    second-harmonic forcing of the quadratic nonlinearity.
    """
    eps, N, L = scaling.eps, scaling.N, scaling.L
    j = np.arange(N)
    red = scaling.reduction

    if red == "nls":
        A = macro
        c, w, th = scaling.c, scaling.omega, scaling.theta
        At = nls_rhs(A, L, coeffs)
        # A_tautau by linearizing the right-hand side along A_tau
        r1, r2, wred = coeffs.rho1, coeffs.rho2, coeffs.omega
        Att = (r1 * _deriv(At, L, 2)
               - 2.0 * r2 * (2.0 * np.abs(A) ** 2 * At + A**2 * np.conj(At))) / (2j * wred)
        y = np.mod(eps * j - eps * c * t, L)
        phase = np.exp(1j * (w * t + th * j))

        def ev(f):
            return _interp(f, L, y)

        X = 2 * np.real(ev(A) * phase)
        ddx = eps * (eps**4 * 2 * np.real(ev(Att) * phase)
                     - 2 * eps**3 * c * 2 * np.real(ev(_deriv(At, L)) * phase)
                     + 2 * eps**2 * w * 2 * np.real(1j * ev(At) * phase)
                     + eps**2 * c**2 * 2 * np.real(ev(_deriv(A, L, 2)) * phase)
                     - 2 * eps * c * w * 2 * np.real(1j * ev(_deriv(A, L)) * phase)
                     - w**2 * X)
        x = eps * X
        if correction:
            v3, v2 = scaling.spec.v[3], scaling.spec.v[2]
            C1 = coeffs.C1
            A2, absA2 = A * A, np.abs(A) ** 2
            A2t = 2.0 * A * At
            absA2t = 2.0 * np.real(np.conj(A) * At)
            ph2 = phase * phase

            def h2(f):
                return 2.0 * np.real(C1 * ev(f) * ph2)

            X1 = h2(A2) - (v3 / v2) * ev(absA2).real
            X1_pp = -4.0 * h2(A2)
            X1_yp = 2.0 * np.real(2j * C1 * ev(_deriv(A2, L)) * ph2)
            X1_yy = (2.0 * np.real(C1 * ev(_deriv(A2, L, 2)) * ph2)
                     - (v3 / v2) * ev(_deriv(absA2, L, 2)).real)
            X1_tp = 2.0 * np.real(2j * C1 * ev(A2t) * ph2)
            x = x + eps**2 * X1
            ddx = ddx + eps**2 * (w**2 * X1_pp
                                  - 2 * eps * c * w * X1_yp
                                  + eps**2 * c**2 * X1_yy
                                  + 2 * eps**2 * w * X1_tp)
        f = _chain_force_from_x(x, scaling.spec)
        return _l2(ddx - f) * np.sqrt(N)

    if red == "kdv":
        X = macro
        U = _deriv(X, L).real
        Ut = kdv_rhs_strain(U, L, coeffs)
        a = coeffs.dispersive / (2.0 * coeffs.c)
        b = coeffs.nonlinear / (2.0 * coeffs.c)
        Utt = (a * _deriv(Ut, L, 3).real
               + b * (Ut * _deriv(U, L).real + U * _deriv(Ut, L).real))
        Xt = _antideriv_real(Ut, L)
        Xtt = _antideriv_real(Utt, L)
        c = scaling.c
        y = np.mod(eps * j + eps * c * t, L)

        def ev(f):
            return _interp(f, L, y).real

        ddx = eps * (eps**6 * ev(Xtt) + 2 * eps**4 * c * ev(_deriv(Xt, L).real)
                     + eps**2 * c**2 * ev(_deriv(X, L, 2).real))
        x = eps * ev(X)
        f = _chain_force_from_x(x, scaling.spec)
        return _l2(ddx - f) * np.sqrt(N)

    if red == "we":
        R, W = macro
        _, dphi = scaling.spec.pair(R)
        Xtt = _deriv(dphi, L).real
        k = TWO_PI * np.fft.fftfreq(R.size, d=L / R.size)
        X = np.fft.ifft(np.where(k != 0, np.fft.fft(R) / np.where(k != 0, 1j * k, 1.0), 0.0)).real
        y = np.mod(eps * j, L)
        ddx = eps * _interp(Xtt, L, y).real
        x = _interp(X, L, y).real / eps
        f = _chain_force_from_x(x, scaling.spec)
        return _l2(ddx - f) * np.sqrt(N)

    if red == "twi":
        A = list(macro)
        ws, ths = scaling.omega, scaling.theta
        At = twi_rhs(A, L, coeffs)
        # linearize the rhs along A_tau
        conj = lambda B, m, l: np.conj(B[m]) * np.conj(B[l])
        Att = []
        pairs = [(1, 2), (0, 2), (0, 1)]
        for n in range(3):
            m, l = pairs[n]
            wn = ws[n]
            wwp = coeffs.transport[n]
            Att.append((wwp / wn) * _deriv(At[n], L)
                       - coeffs.nonlinear * (np.conj(At[m]) * np.conj(A[l])
                                             + np.conj(A[m]) * np.conj(At[l])) / (2j * wn))
        y = np.mod(eps * j, L)
        x = np.zeros(N)
        ddx = np.zeros(N)
        for n in range(3):
            phase = np.exp(1j * (ws[n] * t + ths[n] * j))
            x += 2 * np.real(_interp(A[n], L, y) * phase)
            ddx += (eps**2 * 2 * np.real(_interp(Att[n], L, y) * phase)
                    + 2 * eps * 2 * np.real(1j * ws[n] * _interp(At[n], L, y) * phase)
                    - ws[n] ** 2 * 2 * np.real(_interp(A[n], L, y) * phase))
        x *= eps
        ddx *= eps
        f = _chain_force_from_x(x, scaling.spec)
        return _l2(ddx - f) * np.sqrt(N)

    raise ValueError(f"unknown reduction {red!r}")


def _chain_force_from_x(x: np.ndarray, spec: PotentialSpec) -> np.ndarray:
    from .chain import _force
    return _force(x, spec)


def residual_ladder(reduction_builder, macro, coeffs, eps_values) -> tuple[np.ndarray, float]:
    """Residual norms over an eps ladder plus the fitted decay exponent."""
    res = []
    for e in eps_values:
        scaling = reduction_builder(e)
        res.append(ansatz_residual(scaling, macro, coeffs))
    fit = fit_power_series(list(zip(np.asarray(eps_values, dtype=float), res)))
    return np.array(res), fit.exponent


def seeded_energy_slope(scaling_builder, macro, eps_values) -> float:
    """Fitted eps-exponent of the chain energy of freshly seeded states."""
    samples = []
    for e in eps_values:
        scaling = scaling_builder(e)
        st = seed_chain(scaling, macro)
        samples.append((scaling.eps, total_energy(st)))
    return fit_power_series(samples).exponent

"""Approximation schemes for the reduced dynamics away from exact solvability.

Two complementary approximations:

* small oscillations of kappa about the potential minimum (harmonic model,
  angular frequency omega_s = sqrt(2 V''(kappa0)) in s), valid near the
  bottom;
* the piecewise single-exponential potential Vt(kappa), which keeps the
  dominant exponential on each side of the continuity point kappa1 and is
  exactly solvable region by region with hyperbolic closed forms, improving
  the farther kappa strays from the bottom.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field

import numpy as np

from .errors import ParameterError, RegimeError
from .taudelta import (
    PotentialSpec,
    TauDeltaSeries,
    TauDeltaState,
    integrate,
    oscillation_period,
    potential,
    potential_min,
)


# ---------------------------------------------------------------------------
# small oscillations
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class HarmonicModel:
    """Small-oscillation model kappa(s) = kappa0 + A cos(omega_s s + phi0)."""

    kappa0: float
    omega_s: float
    amplitude: float
    phi0: float = 0.0

    @property
    def energy_above_min(self) -> float:
        """h - V0 = A^2 omega_s^2 / 4 for the harmonic orbit."""
        return 0.25 * (self.amplitude * self.omega_s) ** 2

    @property
    def period(self) -> float:
        return 2.0 * math.pi / self.omega_s

    def kappa(self, s):
        return self.kappa0 + self.amplitude * np.cos(self.omega_s * np.asarray(s) + self.phi0)

    def tau(self, s):
        """tau = (1/2) dkappa/ds of the harmonic orbit."""
        return -0.5 * self.amplitude * self.omega_s * np.sin(
            self.omega_s * np.asarray(s) + self.phi0
        )

    def sample(self, s_grid, pot: PotentialSpec) -> TauDeltaSeries:
        s_grid = np.asarray(s_grid, dtype=float)
        return TauDeltaSeries(
            s=s_grid, kappa=self.kappa(s_grid), tau=self.tau(s_grid), pot=pot
        )


def harmonic_approx(pot: PotentialSpec, amplitude: float, phi0: float = 0.0) -> HarmonicModel:
    """Small-oscillation model about the minimum of V (requires p < 0).

    omega_s = sqrt(2 V''(kappa0)) with V''(kappa0) = 4 e^{kappa0} (1 - p).
    Warns when the amplitude exceeds a tenth of the distance from the
    minimum to the continuity point kappa1 of the piecewise potential,
    where 'lowest order in the displacement' stops being credible.
    """
    kappa0, _ = potential_min(pot)  # raises RegimeError when p >= 0
    v_second = 4.0 * math.exp(kappa0) * (1.0 - pot.p)
    omega_s = math.sqrt(2.0 * v_second)
    if amplitude < 0.0:
        raise ParameterError("amplitude must be nonnegative")
    kappa1 = continuity_point(pot.c, pot.p)
    gap = abs(kappa0 - kappa1)
    if gap > 0.0 and amplitude > 0.1 * gap:
        warnings.warn(
            f"amplitude {amplitude:.3g} exceeds 0.1 |kappa0 - kappa1| = {0.1 * gap:.3g}; "
            "the harmonic model is a leading-order approximation only",
            stacklevel=2,
        )
    return HarmonicModel(kappa0=kappa0, omega_s=omega_s, amplitude=amplitude, phi0=phi0)


# ---------------------------------------------------------------------------
# piecewise single-exponential potential
# ---------------------------------------------------------------------------


def continuity_point(c: float, p: float) -> float:
    """kappa1 = ln(c/4)/(1-p), where 4 e^kappa = c e^(p kappa).

    Coincides with the true potential minimum only for p = -1.
    """
    if c <= 0.0:
        raise ParameterError(f"c must be positive, got {c!r}")
    if p == 1.0:
        raise ParameterError("p = 1 leaves no continuity point")
    return math.log(c / 4.0) / (1.0 - p)


@dataclass(frozen=True)
class PiecewisePotential:
    """Vt(kappa) = 4 e^kappa for kappa > kappa1, c e^(p kappa) below.

    Continuous at kappa1 by construction.
    """

    c: float
    p: float
    kappa1: float = field(init=False)

    def __post_init__(self):
        if self.p >= 0.0:
            raise RegimeError(f"piecewise approximation needs p < 0, got {self.p!r}")
        object.__setattr__(self, "kappa1", continuity_point(self.c, self.p))

    def value(self, kappa):
        kappa = np.asarray(kappa, dtype=float)
        upper = 4.0 * np.exp(kappa)
        lower = self.c * np.exp(self.p * kappa)
        v = np.where(kappa > self.kappa1, upper, lower)
        return v if v.ndim else float(v)

    def region(self, kappa: float, tau: float) -> tuple:
        """Active region (coefficient C, exponent a) at a phase-space point.

        Exactly at kappa1 the region is chosen by the direction of motion;
        tau = 0 there is ambiguous (zero-measure) and raises.
        """
        if kappa > self.kappa1:
            return 4.0, 1.0
        if kappa < self.kappa1:
            return self.c, self.p
        if tau > 0.0:
            return 4.0, 1.0
        if tau < 0.0:
            return self.c, self.p
        raise RegimeError(
            "state sits exactly at the continuity point with tau = 0; "
            "perturb the initial condition"
        )


@dataclass
class PiecewiseTrajectory:
    """Region-wise exact trajectory under the piecewise potential.

    crossings holds one (s, tau_left, tau_right) triple per kappa1 crossing,
    with the two one-sided closed-form limits of tau.
    """

    s: np.ndarray
    kappa: np.ndarray
    tau: np.ndarray
    pp: PiecewisePotential
    crossings: list
    htilde0: float

    @property
    def htilde(self) -> np.ndarray:
        return self.tau**2 + self.pp.value(self.kappa)

    @property
    def energy_drift(self) -> float:
        return float(np.max(np.abs(self.htilde - self.htilde0)))


def _segment_from_state(pp: PiecewisePotential, kappa: float, tau: float, s: float):
    """Closed-form data for the region segment containing (kappa, tau, s).

    Inside one region, e^(a kappa) = (E/C) sech^2(X), X = |a| sqrt(E) (s - s0),
    tau = -sign(a) sqrt(E) tanh(X); the segment ends where kappa = kappa1.
    """
    big_c, a = pp.region(kappa, tau)
    energy = tau**2 + big_c * math.exp(a * kappa)
    root_e = math.sqrt(energy)
    x_now = math.atanh(max(-1.0, min(1.0, -math.copysign(1.0, a) * tau / root_e)))
    rate = abs(a) * root_e
    s0 = s - x_now / rate
    arg = (energy / big_c) * math.exp(-a * pp.kappa1)
    x_cross = math.acosh(math.sqrt(arg)) if arg >= 1.0 else math.inf
    s_exit = s0 + x_cross / rate
    return {
        "C": big_c,
        "a": a,
        "E": energy,
        "s0": s0,
        "rate": rate,
        "s_exit": s_exit,
        "sign": math.copysign(1.0, a),
    }


def _segment_eval(seg, s):
    x = seg["rate"] * (np.asarray(s) - seg["s0"])
    # overflow-safe ln cosh X
    log_cosh = np.abs(x) + np.log1p(np.exp(-2.0 * np.abs(x))) - math.log(2.0)
    kappa = (math.log(seg["E"] / seg["C"]) - 2.0 * log_cosh) / seg["a"]
    tau = -seg["sign"] * math.sqrt(seg["E"]) * np.tanh(x)
    return kappa, tau


def piecewise_solve(
    pp: PiecewisePotential,
    n_norm: float,
    init: TauDeltaState,
    s_span,
    n_samples: int = 513,
) -> PiecewiseTrajectory:
    """Evolve init under the piecewise potential over s_span = (s_start, s_end).

    Region segments are exact hyperbolic closed forms; crossings of kappa1
    are located by the analytic inverse of each segment and matched
    continuously in (kappa, tau), which conserves the piecewise energy
    htilde = tau^2 + Vt(kappa) across the whole span.
    """
    s_start, s_end = float(s_span[0]), float(s_span[1])
    if s_end <= s_start:
        raise ParameterError("s_span must be increasing")
    if abs(init.s - s_start) > 1e-12 * max(1.0, abs(s_start)):
        raise ParameterError("init.s must equal s_span[0]")
    s_grid = np.linspace(s_start, s_end, n_samples)
    kappa_out = np.empty(n_samples)
    tau_out = np.empty(n_samples)
    crossings = []
    htilde0 = init.tau**2 + float(pp.value(init.kappa))

    kappa, tau, s_here = float(init.kappa), float(init.tau), s_start
    seg = _segment_from_state(pp, kappa, tau, s_here)
    idx = 0
    guard = 0
    while idx < n_samples:
        stop = idx
        while stop < n_samples and s_grid[stop] <= seg["s_exit"] + 1e-14:
            stop += 1
        if stop > idx:
            k_vals, t_vals = _segment_eval(seg, s_grid[idx:stop])
            kappa_out[idx:stop] = k_vals
            tau_out[idx:stop] = t_vals
            idx = stop
        if seg["s_exit"] >= s_end:
            break
        # continuous matching at the crossing: same (kappa, tau), new region
        s_here = seg["s_exit"]
        x_c = seg["rate"] * (s_here - seg["s0"])
        tau = -seg["sign"] * math.sqrt(seg["E"]) * math.tanh(x_c)
        seg = _segment_from_state(pp, pp.kappa1, tau, s_here)
        if not seg["s_exit"] > s_here:
            raise RegimeError("crossing matching failed to advance; degenerate orbit")
        _, tau_right = _segment_eval(seg, s_here)
        crossings.append((s_here, tau, float(tau_right)))
        guard += 1
        if guard > 10_000:
            raise RegimeError("crossing count exceeded 10000; span too long for this orbit")
    return PiecewiseTrajectory(
        s=s_grid,
        kappa=kappa_out,
        tau=tau_out,
        pp=pp,
        crossings=crossings,
        htilde0=htilde0,
    )


def piecewise_period(pp: PiecewisePotential, htilde: float) -> float:
    """Analytic oscillation period under Vt at piecewise energy htilde."""
    v_min = float(pp.value(pp.kappa1))
    if htilde <= v_min:
        raise RegimeError(
            f"htilde = {htilde:.6g} does not exceed the potential floor {v_min:.6g}"
        )
    root_e = math.sqrt(htilde)
    total = 0.0
    for big_c, a in ((4.0, 1.0), (pp.c, pp.p)):
        arg = (htilde / big_c) * math.exp(-a * pp.kappa1)
        total += 2.0 * math.acosh(math.sqrt(arg)) / (abs(a) * root_e)
    return total


def approx_report(
    pp: PiecewisePotential,
    pot: PotentialSpec,
    init: TauDeltaState,
    s_span,
    n_samples: int = 1025,
    substep: float = 1e-3,
) -> dict:
    """Quality report of the piecewise approximation against the true potential.

    Returns kappa1, the largest potential gap max |V - Vt| over the visited
    kappa-range, the largest pointwise kappa error over the span
    (phase-aligned: both trajectories start from init), and the two
    oscillation periods.
    """
    approx_traj = piecewise_solve(pp, pot.n_norm, init, s_span, n_samples=n_samples)
    s_grid = approx_traj.s
    true_traj = integrate(init, pot, s_grid, substep=substep)
    kappa_lo = float(min(approx_traj.kappa.min(), true_traj.kappa.min()))
    kappa_hi = float(max(approx_traj.kappa.max(), true_traj.kappa.max()))
    kappa_scan = np.linspace(kappa_lo, kappa_hi, 2001)
    if kappa_lo <= pp.kappa1 <= kappa_hi:
        # the omitted exponential peaks exactly at the continuity point
        kappa_scan = np.append(kappa_scan, pp.kappa1)
    gap = float(np.max(np.abs(potential(kappa_scan, pot) - pp.value(kappa_scan))))
    kappa_err = float(np.max(np.abs(true_traj.kappa - approx_traj.kappa)))
    period_true = oscillation_period(true_traj)
    period_approx = piecewise_period(pp, approx_traj.htilde0)
    return {
        "kappa1": pp.kappa1,
        "max_potential_gap": gap,
        "max_kappa_error": kappa_err,
        "period_true": period_true,
        "period_approx": period_approx,
    }

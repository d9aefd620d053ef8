"""The reduced (tau, delta) dynamics.

tau = <psi|psi> - <phi|phi> and delta = |<phi|psi>|^2 close on themselves:

    dtau/dt   = mu (N^2 - tau^2) + 4 b delta
    ddelta/dt = -2 (b + mu) tau delta

In kappa = ln(delta) and s = -(b + mu) t this is a one-dimensional
Hamiltonian system,

    h = tau^2 + 4 e^kappa + c e^(p kappa) = N^2,     p = mu/(b + mu),

with kappa the coordinate, tau the momentum and c >= 0 a constant of
integration fixed by the initial data.  This module provides the
hyperbolic closed forms of the three integrable special cases, the tanh
ansatz valid for all parameters, the exact oscillatory solution for
p = -1 (Jacobi elliptic), a symplectic integrator for general p, and the
first-integral / Schwarz-parameter algebra.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .elliptic import am_imag, am_imag_deriv, am_imag_period
from .errors import AccuracyError, ParameterError, RegimeError
from .params import DerivedParams, ModelParams, derive

_KAPPA_LIMIT = 700.0  # exp overflow guard


@dataclass(frozen=True)
class PotentialSpec:
    """Reduced potential V(kappa) = 4 e^kappa + c e^(p kappa).

    c must be nonnegative: c e^(p kappa) = 4 S with S the Schwarz
    parameter, which the Cauchy-Schwarz inequality keeps >= 0.
    """

    c: float
    p: float
    n_norm: float

    def __post_init__(self):
        if not (math.isfinite(self.c) and math.isfinite(self.p) and math.isfinite(self.n_norm)):
            raise ParameterError("PotentialSpec fields must be finite")
        if self.c < 0.0:
            raise ParameterError(f"integration constant c must be >= 0, got {self.c!r}")
        if self.n_norm <= 0.0:
            raise ParameterError(f"norm must be positive, got {self.n_norm!r}")


@dataclass(frozen=True)
class TauDeltaState:
    """Phase-space point of the reduced system at evolution parameter s."""

    kappa: float
    tau: float
    s: float = 0.0

    @property
    def delta(self) -> float:
        return math.exp(self.kappa)

    def energy(self, pot: PotentialSpec) -> float:
        return self.tau**2 + potential(self.kappa, pot)


@dataclass
class TauDeltaSeries:
    """Trajectory samples of the reduced system on an s-grid."""

    s: np.ndarray
    kappa: np.ndarray
    tau: np.ndarray
    pot: PotentialSpec
    energy_drift: float = 0.0
    t: np.ndarray | None = field(default=None, repr=False)

    @property
    def delta(self) -> np.ndarray:
        return np.exp(self.kappa)

    @property
    def energy(self) -> np.ndarray:
        return self.tau**2 + 4.0 * np.exp(self.kappa) + self.pot.c * np.exp(self.pot.p * self.kappa)

    @property
    def c_recovered(self) -> np.ndarray:
        return (self.pot.n_norm**2 - self.tau**2 - 4.0 * self.delta) * self.delta ** (-self.pot.p)

    def with_time(self, derived: DerivedParams) -> "TauDeltaSeries":
        self.t = derived.t_of_s(self.s)
        return self

    def state(self, i: int) -> TauDeltaState:
        return TauDeltaState(kappa=float(self.kappa[i]), tau=float(self.tau[i]), s=float(self.s[i]))


# ---------------------------------------------------------------------------
# closed forms of the integrable special cases
# ---------------------------------------------------------------------------


def closed_mu_zero(omega0: float, b: float, t):
    """mu = 0 (original model): tau = 2 w0 tanh(2 w0 b t), delta = w0^2 sech^2."""
    t = np.asarray(t, dtype=float)
    x = 2.0 * omega0 * b * t
    tau = 2.0 * omega0 * np.tanh(x)
    delta = omega0**2 / np.cosh(x) ** 2
    return tau, delta


def closed_b_plus_mu_zero(omega0: float, b: float, n_norm: float, t):
    """b + mu = 0: tau = -2 w0 tanh(2 w0 b t), delta = N^2/4 - w0^2 (constant)."""
    if omega0**2 > 0.25 * n_norm**2:
        raise RegimeError(
            f"delta = N^2/4 - w0^2 would be negative (w0^2 = {omega0**2:.6g} > N^2/4)"
        )
    t = np.asarray(t, dtype=float)
    x = 2.0 * omega0 * b * t
    tau = -2.0 * omega0 * np.tanh(x)
    delta = np.full_like(t, 0.25 * n_norm**2 - omega0**2)
    return tau, delta


def closed_b_zero(delta0: float, mu: float, n_norm: float, t):
    """b = 0: tau = N tanh(mu N t), delta = delta0 sech^2(mu N t).

    The integration constant delta0 enters only the normalization of
    delta, never the argument of the tanh.
    """
    t = np.asarray(t, dtype=float)
    x = mu * n_norm * t
    tau = n_norm * np.tanh(x)
    delta = delta0 / np.cosh(x) ** 2
    return tau, delta


def tanh_ansatz(n_norm: float, b: float, mu: float, t):
    """The particular solution tau = N tanh((b+mu) N t), delta = (N^2/4) sech^2.

    Solves the full coupled equations for every (b, mu) but carries no free
    constant of integration, so it is a single orbit, not the general
    solution; it saturates the Schwarz inequality (c = 0).
    """
    t = np.asarray(t, dtype=float)
    x = (b + mu) * n_norm * t
    tau = n_norm * np.tanh(x)
    delta = 0.25 * n_norm**2 / np.cosh(x) ** 2
    return tau, delta


def tdeqs_rhs(tau, delta, params: ModelParams):
    """Right-hand side (dtau/dt, ddelta/dt) of the coupled reduced equations."""
    dtau = params.mu * (params.n_norm**2 - np.asarray(tau) ** 2) + 4.0 * params.b * np.asarray(delta)
    ddelta = -2.0 * (params.b + params.mu) * np.asarray(tau) * np.asarray(delta)
    return dtau, ddelta


# ---------------------------------------------------------------------------
# first integral, Schwarz parameter, potential
# ---------------------------------------------------------------------------


def first_integral(tau, delta, n_norm: float, p: float):
    """Integration constant c = (N^2 - tau^2 - 4 delta) delta^(-p).

    Constant along trajectories.  Clearly negative values violate the
    Schwarz positivity c e^(p kappa) = 4 S >= 0 and indicate off-manifold
    input; roundoff-level negatives (orbits with c = 0) pass through.
    """
    tau = np.asarray(tau, dtype=float)
    delta = np.asarray(delta, dtype=float)
    if np.any(delta <= 0.0):
        raise ParameterError("delta must be positive")
    c = (n_norm**2 - tau**2 - 4.0 * delta) * delta ** (-p)
    scale = (n_norm**2 + tau**2 + 4.0 * delta) * delta ** (-p)
    if np.any(c < -1e-10 * scale):
        raise RegimeError(
            "recovered c is negative beyond roundoff: (tau, delta) violates Schwarz positivity"
        )
    return c if c.ndim else float(c)


def schwarz_param(delta, c: float, p: float):
    """Schwarz parameter S = <psi|psi><phi|phi> - |<phi|psi>|^2 = (c/4) delta^p."""
    if c < 0.0:
        raise ParameterError(f"c must be >= 0, got {c!r}")
    delta = np.asarray(delta, dtype=float)
    s = 0.25 * c * delta**p
    return s if s.ndim else float(s)


def potential(kappa, pot: PotentialSpec):
    """V(kappa) = 4 e^kappa + c e^(p kappa)."""
    kappa = np.asarray(kappa, dtype=float)
    v = 4.0 * np.exp(kappa) + pot.c * np.exp(pot.p * kappa)
    return v if v.ndim else float(v)


def potential_min(pot: PotentialSpec):
    """Interior minimum (kappa0, V0) of V; exists only for p < 0 (and c > 0).

    kappa0 = ln(-p c / 4) / (1 - p) solves 4 e^kappa = -p c e^(p kappa).
    """
    if pot.p >= 0.0 or pot.c <= 0.0:
        raise RegimeError(
            f"V has no interior minimum for p = {pot.p!r}, c = {pot.c!r} (needs p < 0, c > 0)"
        )
    kappa0 = math.log(-pot.p * pot.c / 4.0) / (1.0 - pot.p)
    return kappa0, float(potential(kappa0, pot))


def eta_shift(c: float) -> float:
    """Coordinate shift 0.5 ln(c/4) centering the p = -1 potential.

    In eta = kappa - eta_shift the p = -1 potential is the symmetric well
    4 sqrt(c) cosh(eta).
    """
    if c <= 0.0:
        raise ParameterError(f"c must be positive, got {c!r}")
    return 0.5 * math.log(c / 4.0)


# ---------------------------------------------------------------------------
# exact oscillatory solution for p = -1
# ---------------------------------------------------------------------------


def _symmetric_setup(n_norm: float, c: float):
    n2 = n_norm**2
    root_c = math.sqrt(c)
    if c <= 0.0:
        raise ParameterError(f"c must be positive, got {c!r}")
    if n2 <= 4.0 * root_c:
        raise RegimeError(
            f"oscillatory closed form needs N^2 > 4 sqrt(c); got N^2 = {n2:.6g}, "
            f"4 sqrt(c) = {4.0 * root_c:.6g}"
        )
    amp = math.sqrt(n2 - 4.0 * root_c)
    m = 8.0 * root_c / (4.0 * root_c - n2)
    return amp, m, eta_shift(c)


def closed_symmetric(n_norm: float, c: float, s):
    """Exact p = -1 solution on shell (h = N^2), branch with tau(0) > 0.

    kappa(s) = eta0 + y(amp * s),  y = -2i am(i u | m) evaluated real,
    tau(s)   = (amp / 2) y'(amp * s),
    amp = sqrt(N^2 - 4 sqrt(c)),  m = 8 sqrt(c) / (4 sqrt(c) - N^2) < 0,
    eta0 = 0.5 ln(c/4).

    At s = 0 the orbit passes the potential minimum with maximal momentum.
    Returns a TauDeltaSeries for array s, a TauDeltaState for scalar s.
    """
    amp, m, eta0 = _symmetric_setup(n_norm, c)
    scalar = np.isscalar(s) or np.ndim(s) == 0
    s_arr = np.atleast_1d(np.asarray(s, dtype=float))
    kappa = np.empty_like(s_arr)
    tau = np.empty_like(s_arr)
    for i, si in enumerate(s_arr):
        u = amp * si
        kappa[i] = eta0 + am_imag(u, m)
        tau[i] = 0.5 * amp * am_imag_deriv(u, m)
    if scalar:
        return TauDeltaState(kappa=float(kappa[0]), tau=float(tau[0]), s=float(s_arr[0]))
    pot = PotentialSpec(c=c, p=-1.0, n_norm=n_norm)
    return TauDeltaSeries(s=s_arr, kappa=kappa, tau=tau, pot=pot)


def symmetric_period(n_norm: float, c: float) -> float:
    """Oscillation period in s of the p = -1 closed form."""
    amp, m, _ = _symmetric_setup(n_norm, c)
    return am_imag_period(m) / amp


# ---------------------------------------------------------------------------
# symplectic integration for general p
# ---------------------------------------------------------------------------

_Y4_W1 = 1.0 / (2.0 - 2.0 ** (1.0 / 3.0))
_Y4_W0 = 1.0 - 2.0 * _Y4_W1
# Yoshida's sixth-order symmetric composition (solution A)
_Y6_W1 = -1.17767998417887
_Y6_W2 = 0.235573213359357
_Y6_W3 = 0.784513610477560
_Y6_W0 = 1.0 - 2.0 * (_Y6_W1 + _Y6_W2 + _Y6_W3)
_COMPOSITIONS = {
    2: (1.0,),
    4: (_Y4_W1, _Y4_W0, _Y4_W1),
    6: (_Y6_W3, _Y6_W2, _Y6_W1, _Y6_W0, _Y6_W1, _Y6_W2, _Y6_W3),
}


def _verlet_step(kappa: float, v: float, h: float, c: float, p: float):
    """One position-Verlet (drift-kick-drift) step of kappa'' = -2 V'(kappa)."""
    kappa += 0.5 * h * v
    v += h * (-8.0 * math.exp(kappa) - 2.0 * p * c * math.exp(p * kappa))
    kappa += 0.5 * h * v
    return kappa, v


def integrate(
    init: TauDeltaState,
    pot: PotentialSpec,
    s_grid,
    substep: float = 1e-3,
    order: int = 6,
) -> TauDeltaSeries:
    """Symplectic integration of the reduced Hamiltonian system on s_grid.

    The base scheme is fixed-substep position-Verlet in (kappa, v = 2 tau),
    composed into the symmetric fourth- or sixth-order (default) schemes.
    All orders are symplectic and time-reversible; order=2 selects the bare
    Verlet stepper.

    Integration begins at init; the first grid point must equal init.s and
    the grid must be strictly increasing.
    """
    s_grid = np.asarray(s_grid, dtype=float)
    if s_grid.ndim != 1 or len(s_grid) < 1:
        raise ParameterError("s_grid must be a 1-D array of sample points")
    if np.any(np.diff(s_grid) <= 0.0):
        raise ParameterError("s_grid must be strictly increasing")
    if abs(s_grid[0] - init.s) > 1e-12 * max(1.0, abs(init.s)):
        raise ParameterError("s_grid must start at init.s")
    if order not in _COMPOSITIONS:
        raise ParameterError(f"order must be one of {sorted(_COMPOSITIONS)}, got {order!r}")
    if substep <= 0.0:
        raise ParameterError("substep must be positive")
    weights = _COMPOSITIONS[order]

    c, p = pot.c, pot.p
    kappa = float(init.kappa)
    v = 2.0 * float(init.tau)
    kappas = np.empty(len(s_grid))
    vs = np.empty(len(s_grid))
    kappas[0], vs[0] = kappa, v

    for j in range(1, len(s_grid)):
        span = s_grid[j] - s_grid[j - 1]
        n_sub = max(1, math.ceil(span / substep))
        h = span / n_sub
        for _ in range(n_sub):
            for w in weights:
                kappa, v = _verlet_step(kappa, v, w * h, c, p)
        if abs(kappa) > _KAPPA_LIMIT:
            raise AccuracyError(
                f"kappa diverged beyond |kappa| = {_KAPPA_LIMIT} at s = {s_grid[j]:.6g} "
                "(unbounded regime)"
            )
        kappas[j], vs[j] = kappa, v

    series = TauDeltaSeries(s=s_grid.copy(), kappa=kappas, tau=0.5 * vs, pot=pot)
    energies = series.energy
    series.energy_drift = float(np.max(np.abs(energies - energies[0])))
    return series


def oscillation_period(series: TauDeltaSeries) -> float:
    """Period of a librating trajectory, from zero crossings of tau.

    Turning points are the zeros of tau; a full period spans every second
    crossing.  Uses linear interpolation at sign changes and needs at
    least three crossings (one full period) in the series.
    """
    from .errors import SolveError

    tau, s = series.tau, series.s
    crossings = []
    for i in range(len(tau) - 1):
        if tau[i] == 0.0:
            # count an exact zero only as an isolated sign change
            if 0 < i and tau[i - 1] * tau[i + 1] < 0.0:
                crossings.append(s[i])
        elif tau[i] * tau[i + 1] < 0.0:
            frac = tau[i] / (tau[i] - tau[i + 1])
            crossings.append(s[i] + frac * (s[i + 1] - s[i]))
    if len(crossings) < 3:
        raise SolveError(f"need >= 3 tau zero crossings to measure a period, found {len(crossings)}")
    spans = [crossings[i + 2] - crossings[i] for i in range(len(crossings) - 2)]
    return float(np.mean(spans))

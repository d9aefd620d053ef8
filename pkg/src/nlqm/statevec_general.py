"""State-vector evolution over an arbitrary (kappa(t), tau(t)) background.

Given any solution of the reduced dynamics, the overlap gamma(t) is known
in closed form, and a change of dependent variables reduces the coupled
state-vector equations to one scalar second-order linear ODE for the
envelope F(t),

    F'' - f'(t) F' + (g + lam)(g* - lam) e^kappa F = 0,
    f = kappa/2 - mu N t - i (lam N t + a kappa / (2 (b + mu))),

whose Wronskian is c0 e^f (an online accuracy monitor).  The physical
vectors are rebuilt from two fundamental envelope solutions, two constant
vectors psi1, psi2, and explicit kappa-dependent prefactors; the three
inner-product constraints (norm sum, norm difference, overlap) are imposed
at one time by root-finding.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field

import numpy as np
from scipy.integrate import solve_ivp
from scipy.interpolate import CubicSpline
from scipy.optimize import least_squares

from .errors import AccuracyError, DomainError, ParameterError, SolveError
from .params import DerivedParams, ModelParams, derive
from .statevec_simple import EnergyBasis, StateVectorPair
from .taudelta import TauDeltaSeries, closed_symmetric


# ---------------------------------------------------------------------------
# background paths
# ---------------------------------------------------------------------------


@dataclass
class BackgroundPath:
    """Reduced-dynamics background (kappa(t), tau(t)) in physical time.

    kappa_fn / tau_fn are scalar callables of t, valid on [t_min, t_max]
    (infinite for closed forms).  Consistency dkappa/dt = -2 (b + mu) tau
    is checked at construction for sampled sources.
    """

    kappa_fn: object
    tau_fn: object
    params: ModelParams
    source: str = "closed-form"
    t_min: float = -math.inf
    t_max: float = math.inf

    def _check(self, t: float):
        if not (self.t_min <= t <= self.t_max):
            raise DomainError(
                f"t = {t:.6g} outside background domain [{self.t_min:.6g}, {self.t_max:.6g}]"
            )

    def kappa(self, t: float) -> float:
        self._check(t)
        return float(self.kappa_fn(t))

    def tau(self, t: float) -> float:
        self._check(t)
        return float(self.tau_fn(t))

    @classmethod
    def constant(cls, params: ModelParams, kappa0: float) -> "BackgroundPath":
        """Fixed-point background: kappa frozen, tau = 0."""
        return cls(
            kappa_fn=lambda t: kappa0,
            tau_fn=lambda t: 0.0,
            params=params,
            source="closed-form",
        )

    @classmethod
    def from_s_domain(
        cls, params: ModelParams, kappa_of_s, tau_of_s, source: str = "closed-form"
    ) -> "BackgroundPath":
        """Wrap s-domain callables via s = -(b + mu) t.

        Any s-domain solution with tau = (1/2) dkappa/ds automatically
        satisfies the t-domain consistency dkappa/dt = -2 (b + mu) tau.
        """
        der = derive(params)
        return cls(
            kappa_fn=lambda t: kappa_of_s(der.s_of_t(t)),
            tau_fn=lambda t: tau_of_s(der.s_of_t(t)),
            params=params,
            source=source,
        )

    @classmethod
    def symmetric(cls, params: ModelParams, c: float) -> "BackgroundPath":
        """Exact p = -1 oscillating background (requires mu = -b/2 regime)."""
        der = derive(params)
        if abs(der.p + 1.0) > 1e-12:
            raise ParameterError(f"symmetric background needs p = -1, got p = {der.p!r}")
        n = params.n_norm
        return cls.from_s_domain(
            params,
            lambda s: closed_symmetric(n, c, s).kappa,
            lambda s: closed_symmetric(n, c, s).tau,
            source="closed-form",
        )

    @classmethod
    def from_series(cls, series: TauDeltaSeries, params: ModelParams) -> "BackgroundPath":
        """Cubic-spline interpolation of an integrated s-domain trajectory.

        Consistency dkappa/dt = -2 (b + mu) tau is enforced in integral form
        per sample interval (kappa increments against the antiderivative of
        the tau spline), which stays at interpolation accuracy for valid
        data and at O(1) for mismatched samples.
        """
        der = derive(params)
        t = der.t_of_s(series.s)
        kappa = series.kappa
        tau = series.tau
        if t[0] > t[-1]:
            t, kappa, tau = t[::-1], kappa[::-1], tau[::-1]
        kappa_sp = CubicSpline(t, kappa)
        tau_sp = CubicSpline(t, tau)
        slope = -2.0 * (params.b + params.mu)
        tau_int = tau_sp.antiderivative()(t)
        resid = np.max(np.abs(np.diff(kappa) - slope * np.diff(tau_int)))
        if resid > 1e-8:
            raise AccuracyError(
                f"background samples inconsistent with dkappa/dt = -2(b+mu) tau: "
                f"per-interval residual {resid:.3e}"
            )
        return cls(
            kappa_fn=kappa_sp,
            tau_fn=tau_sp,
            params=params,
            source="integrated",
            t_min=float(t[0]),
            t_max=float(t[-1]),
        )


# ---------------------------------------------------------------------------
# exact phases
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Phases:
    """Closed-form phase bookkeeping for a background and parameter set.

    All members are functions of t (theta_psi / theta_phi additionally of
    the mode energy).  They satisfy theta_phi - theta_psi - theta_f + Lam = 0
    pointwise.
    """

    params: ModelParams
    der: DerivedParams
    path: BackgroundPath

    def lam_upper(self, t: float) -> float:
        """Overlap phase Lam(t) = N[lam + (alpha-beta)/2] t + kappa/(2(b+mu)) [a - (alpha'-beta')/2]."""
        p, d = self.params, self.der
        kappa = self.path.kappa(t)
        return (
            p.n_norm * (p.lam + 0.5 * (d.alpha - d.beta)) * t
            + kappa / (2.0 * (p.b + p.mu)) * (p.a - 0.5 * (d.alpha_p - d.beta_p))
        )

    def theta_f(self, t: float) -> float:
        p = self.params
        kappa = self.path.kappa(t)
        return p.lam * p.n_norm * t + p.a * kappa / (2.0 * (p.b + p.mu))

    def f(self, t: float) -> complex:
        p = self.params
        kappa = self.path.kappa(t)
        return complex(0.5 * kappa - p.mu * p.n_norm * t, -self.theta_f(t))

    def f_dot(self, t: float) -> complex:
        p = self.params
        tau = self.path.tau(t)
        return complex(
            -(p.b + p.mu) * tau - p.mu * p.n_norm,
            -(p.lam * p.n_norm - p.a * tau),
        )

    def theta_psi(self, t: float, energy: float) -> float:
        p, d = self.params, self.der
        kappa = self.path.kappa(t)
        return (energy + 0.5 * p.n_norm * d.alpha) * t - kappa * d.alpha_p / (4.0 * (p.b + p.mu))

    def theta_phi(self, t: float, energy: float) -> float:
        p, d = self.params, self.der
        kappa = self.path.kappa(t)
        return (energy + 0.5 * p.n_norm * d.beta) * t - kappa * d.beta_p / (4.0 * (p.b + p.mu))


def overlap(path: BackgroundPath, params: ModelParams, t: float, theta0: float = 0.0) -> complex:
    """Exact overlap gamma(t) = e^{kappa/2} e^{-i (Lam + theta0)} on the background."""
    phases = Phases(params, derive(params), path)
    kappa = path.kappa(t)
    return math.exp(0.5 * kappa) * cmath.exp(-1j * (phases.lam_upper(t) + theta0))


# ---------------------------------------------------------------------------
# envelope integration
# ---------------------------------------------------------------------------


@dataclass
class EnvelopePair:
    """Two fundamental solutions of the envelope ODE on [t0, t1].

    F1(t0) = 1, F1'(t0) = 0 and F2(t0) = 0, F2'(t0) = 1.  wronskian_c0 is
    the constant (F1' F2 - F1 F2') e^{-f}; its drift over the window is the
    integration-accuracy monitor.
    """

    t0: float
    t1: float
    phases: Phases
    _sol: object = field(repr=False)
    wronskian_c0: complex = 0j
    wronskian_drift: float = 0.0

    def _eval(self, t):
        if not (min(self.t0, self.t1) - 1e-12 <= t <= max(self.t0, self.t1) + 1e-12):
            raise DomainError(f"t = {t:.6g} outside envelope window [{self.t0:.6g}, {self.t1:.6g}]")
        return self._sol(t)

    def values(self, t: float):
        """(F1, F1', F2, F2') at t."""
        y = self._eval(t)
        return y[0], y[1], y[2], y[3]

    def wronskian_residual(self, t: float) -> float:
        f1, d1, f2, d2 = self.values(t)
        w = (d1 * f2 - f1 * d2) * cmath.exp(-self.phases.f(t))
        return abs(w - self.wronskian_c0)


def integrate_envelope(
    path: BackgroundPath,
    params: ModelParams,
    window,
    rtol: float = 1e-11,
    atol: float = 1e-12,
    max_wronskian_drift: float = 1e-6,
) -> EnvelopePair:
    """Integrate the decoupled envelope ODE over window = (t0, t1).

    Uses an adaptive eighth-order Runge-Kutta scheme with dense output;
    the conserved combination (F1' F2 - F1 F2') e^{-f} is checked on a
    dense grid and drift beyond max_wronskian_drift raises AccuracyError.
    """
    t0, t1 = float(window[0]), float(window[1])
    if t0 == t1:
        raise ParameterError("envelope window must have nonzero length")
    der = derive(params)
    phases = Phases(params, der, path)
    g = der.g
    coupling_const = (g + params.lam) * (g.conjugate() - params.lam)

    def rhs(t, y):
        fdot = phases.f_dot(t)
        coup = coupling_const * math.exp(path.kappa(t))
        return [y[1], fdot * y[1] - coup * y[0], y[3], fdot * y[3] - coup * y[2]]

    y0 = np.array([1.0 + 0j, 0.0 + 0j, 0.0 + 0j, 1.0 + 0j])
    sol = solve_ivp(
        rhs, (t0, t1), y0, method="DOP853", rtol=rtol, atol=atol, dense_output=True
    )
    if not sol.success:  # pragma: no cover - defensive
        raise SolveError(f"envelope integration failed: {sol.message}")
    env = EnvelopePair(
        t0=t0,
        t1=t1,
        phases=phases,
        _sol=sol.sol,
        wronskian_c0=-cmath.exp(-phases.f(t0)),
    )
    ts = np.linspace(t0, t1, 65)
    drift = max(env.wronskian_residual(t) for t in ts)
    env.wronskian_drift = drift
    if drift > max_wronskian_drift:
        raise AccuracyError(
            f"Wronskian drift {drift:.3e} exceeds {max_wronskian_drift:.1e}; "
            "reduce rtol/atol or shorten the window"
        )
    return env


# ---------------------------------------------------------------------------
# reconstruction and constraints
# ---------------------------------------------------------------------------


def _prefactors(phases: Phases, t: float, theta0: float = 0.0):
    """Scalar prefactors multiplying the envelope combinations at time t.

    theta0 is the constant phase of the overlap convention
    gamma = e^{kappa/2} e^{-i(Lam + theta0)}; it enters the phi-side
    prefactor only (the envelope ODE itself is theta0-free).
    """
    p, d = phases.params, phases.der
    kappa = phases.path.kappa(t)
    pre_psi = cmath.exp(-0.5j * p.n_norm * complex(d.alpha, p.mu) * t) * cmath.exp(
        0.25j * kappa * complex(d.alpha_p, -p.mu) / (p.b + p.mu)
    )
    pre_phi = (
        cmath.exp(-0.5j * p.n_norm * complex(d.beta, -p.mu) * t)
        * cmath.exp(0.25j * kappa * complex(d.beta_p, -p.mu) / (p.b + p.mu))
        * 1j
        * cmath.exp(-phases.f(t) + 1j * theta0)
        / (d.g + p.lam)
    )
    return pre_psi, pre_phi


def reconstruct(
    env: EnvelopePair,
    psi1,
    psi2,
    params: ModelParams,
    basis: EnergyBasis,
    path: BackgroundPath,
    t: float,
    theta0: float = 0.0,
) -> StateVectorPair:
    """Physical state vectors at time t from envelopes and constant vectors.

    psi_n = pre_psi(t) e^{-i E_n t} [F1 psi1_n + F2 psi2_n]
    phi_n = pre_phi(t) e^{-i E_n t} [F1' psi1_n + F2' psi2_n]

    theta0 must match the overlap convention used when the constraints
    were imposed.
    """
    der = derive(params)
    if der.g + params.lam == 0:
        raise ParameterError("g + lam must be nonzero")
    psi1 = np.asarray(psi1, dtype=complex)
    psi2 = np.asarray(psi2, dtype=complex)
    f1, d1, f2, d2 = env.values(t)
    pre_psi, pre_phi = _prefactors(env.phases, t, theta0)
    base = np.exp(-1j * basis.as_array() * t)
    psi = pre_psi * base * (f1 * psi1 + f2 * psi2)
    phi = pre_phi * base * (d1 * psi1 + d2 * psi2)
    return StateVectorPair(psi=psi, phi=phi, t=float(t))


def solve_constraints(
    env: EnvelopePair,
    params: ModelParams,
    basis: EnergyBasis,
    path: BackgroundPath,
    t0: float,
    seed: int,
    theta0: float = 0.0,
    tol: float = 1e-10,
):
    """Constant vectors (psi1, psi2) satisfying the inner-product constraints at t0.

    Solves the four real conditions

        <psi|psi> + <phi|phi> = N,   <psi|psi> - <phi|phi> = tau(t0),
        <phi|psi> = gamma(t0)

    with psi1 = r1 e1 and psi2 = rho e^{i chi} e1 + r2 e2 over seeded
    orthonormal directions e1, e2 (two real scales r1, r2, a mixing
    magnitude rho and one relative phase chi).  A closed-form evaluation
    supplies the starting point and damped least-squares polishes it;
    SolveError reports the residual if the target tolerance is not met.
    """
    if abs(t0 - env.t0) > 1e-12 * max(1.0, abs(env.t0)):
        raise ParameterError("constraints must be imposed at the envelope anchor t0")
    n = params.n_norm
    tau0 = path.tau(t0)
    gamma0 = overlap(path, params, t0, theta0)

    rng = np.random.default_rng(seed)
    raw = rng.standard_normal((2, basis.dim)) + 1j * rng.standard_normal((2, basis.dim))
    e1 = raw[0] / np.linalg.norm(raw[0])
    w = raw[1] - np.vdot(e1, raw[1]) * e1
    e2 = w / np.linalg.norm(w)

    def assemble(x):
        r1, r2, rho, chi = x
        psi1 = r1 * e1
        psi2 = rho * cmath.exp(1j * chi) * e1 + r2 * e2
        return psi1, psi2

    def residuals(x):
        psi1, psi2 = assemble(x)
        pair = reconstruct(env, psi1, psi2, params, basis, path, t0, theta0)
        dgamma = pair.gamma - gamma0
        return [
            pair.norm_psi + pair.norm_phi - n,
            pair.norm_psi - pair.norm_phi - tau0,
            dgamma.real,
            dgamma.imag,
        ]

    # closed-form starting point: probe the linear scalings of the map
    probe_psi = reconstruct(env, e1, np.zeros_like(e2), params, basis, path, t0, theta0)
    probe_phi = reconstruct(env, np.zeros_like(e1), e2, params, basis, path, t0, theta0)
    probe_cross = reconstruct(env, e1, e1, params, basis, path, t0, theta0)
    a_psi = probe_psi.norm_psi
    a_phi = probe_phi.norm_phi
    cross = probe_cross.gamma  # D such that <phi|psi> = D rho e^{-i chi} r1
    norm_psi_target = 0.5 * (n + tau0)
    norm_phi_target = 0.5 * (n - tau0)
    if norm_psi_target <= 0.0 or norm_phi_target <= 0.0:
        raise SolveError(f"targets out of range: |tau(t0)| = {abs(tau0):.6g} >= N")
    r1 = math.sqrt(norm_psi_target / a_psi)
    z = gamma0 / (cross * r1)
    rho = abs(z)
    chi = -cmath.phase(z) if rho > 0 else 0.0
    r2_sq = norm_phi_target / a_phi - rho**2
    if r2_sq < -tol:
        raise SolveError(
            "no solution in this parameterization: the overlap constraint demands "
            f"more phi-norm than available (deficit {-r2_sq:.3e})"
        )
    x0 = [r1, math.sqrt(max(r2_sq, 0.0)), rho, chi]

    result = least_squares(residuals, x0, method="lm", xtol=1e-15, ftol=1e-15, gtol=1e-15)
    resid = float(np.max(np.abs(residuals(result.x))))
    if resid > tol:
        raise SolveError(f"constraint residual {resid:.3e} above tolerance {tol:.1e}")
    return assemble(result.x)


def constraint_residuals(
    env: EnvelopePair,
    psi1,
    psi2,
    params: ModelParams,
    basis: EnergyBasis,
    path: BackgroundPath,
    t_grid,
    theta0: float = 0.0,
):
    """Monitor the three constraints along the window.

    Returns an array of rows (t, norm_sum_resid, tau_resid, gamma_resid).
    The constraints are imposed at one time only; whether they propagate
    is checked here, not assumed.
    """
    rows = np.empty((len(t_grid), 4))
    for i, t in enumerate(t_grid):
        pair = reconstruct(env, psi1, psi2, params, basis, path, t, theta0)
        gamma_exact = overlap(path, params, t, theta0)
        rows[i] = (
            t,
            pair.norm_psi + pair.norm_phi - params.n_norm,
            (pair.norm_psi - pair.norm_phi) - path.tau(t),
            abs(pair.gamma - gamma_exact),
        )
    return rows

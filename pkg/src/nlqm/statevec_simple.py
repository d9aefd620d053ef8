"""Exact state-vector evolution at the fixed point of the reduced dynamics.

When (kappa, tau) sits at the bottom of the reduced potential with tau = 0,
the overlap gamma = <phi|psi> rotates rigidly, both norms equal N/2, and
the coupled state-vector equations close into a constant-coefficient
linear system.  Each energy mode splits into two frequencies
chi_pm = -lam*N/2 +- sigma; the vectors carrying the two frequencies
evolve freely under H and fix all inner products through their norms
S_plus, S_minus and mutual orthogonality.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

import numpy as np

from .errors import AccuracyError, ParameterError, RegimeError
from .params import DerivedParams, ModelParams, derive, validate


@dataclass(frozen=True)
class EnergyBasis:
    """Finite set of energy eigenvalues E_n of the underlying Hamiltonian."""

    energies: tuple

    def __post_init__(self):
        energies = tuple(float(e) for e in self.energies)
        if len(energies) < 2:
            raise ParameterError(f"basis needs dim >= 2, got {len(energies)}")
        if not all(math.isfinite(e) for e in energies):
            raise ParameterError("basis energies must be finite")
        object.__setattr__(self, "energies", energies)

    @property
    def dim(self) -> int:
        return len(self.energies)

    def as_array(self) -> np.ndarray:
        return np.asarray(self.energies, dtype=float)


@dataclass(frozen=True)
class StateVectorPair:
    """Coefficient vectors of |psi> and |phi> over an EnergyBasis at time t."""

    psi: np.ndarray
    phi: np.ndarray
    t: float

    @property
    def norm_psi(self) -> float:
        return float(np.vdot(self.psi, self.psi).real)

    @property
    def norm_phi(self) -> float:
        return float(np.vdot(self.phi, self.phi).real)

    @property
    def gamma(self) -> complex:
        """Overlap <phi|psi>."""
        return complex(np.vdot(self.phi, self.psi))

    @property
    def tau(self) -> float:
        return self.norm_psi - self.norm_phi

    def to_json_dict(self) -> dict:
        return {
            "t": self.t,
            "psi": [[z.real, z.imag] for z in self.psi],
            "phi": [[z.real, z.imag] for z in self.phi],
        }


@dataclass(frozen=True)
class FixedPointData:
    """Location of the reduced-dynamics fixed point and its overlap radius."""

    kappa0: float
    delta0: float
    c: float
    gamma0: float


@dataclass(frozen=True)
class ModalConstants:
    """Mode frequencies and norm split of the fixed-point solution."""

    nu_plus: complex
    nu_minus: complex
    sigma: float
    chi_plus: float
    chi_minus: float
    s_plus: float
    s_minus: float
    theta: float
    theta_prime: complex


def fixed_point(params: ModelParams) -> FixedPointData:
    """Fixed point of the reduced dynamics: tau = 0, delta0 = (-mu/4b) N^2.

    Requires the bounded regime (b > 0, -b < mu < 0).  The integration
    constant follows from stationarity: c = -(4/p) delta0^(1-p), and the
    energy constraint h = N^2 holds automatically.
    """
    validate(params)
    if not params.bounded:
        raise RegimeError(
            "fixed point exists only in the bounded regime b > 0, -b < mu < 0; "
            f"got b = {params.b!r}, mu = {params.mu!r}"
        )
    der = derive(params)
    delta0 = (-params.mu / (4.0 * params.b)) * params.n_norm**2
    c = -(4.0 / der.p) * delta0 ** (1.0 - der.p)
    return FixedPointData(
        kappa0=math.log(delta0), delta0=delta0, c=c, gamma0=math.sqrt(delta0)
    )


def sigma_squared(params: ModelParams) -> float:
    """(N^2/4) [ -(mu/b) a^2 - mu^2 (1 + b/mu) + lam^2 (1 + mu/b) ].

    Positive throughout the bounded regime: each bracket term is >= 0 there.
    """
    a, b, mu, lam, n = params.a, params.b, params.mu, params.lam, params.n_norm
    return 0.25 * n**2 * (
        -(mu / b) * a**2 - mu**2 * (1.0 + b / mu) + lam**2 * (1.0 + mu / b)
    )


def modal_constants(params: ModelParams, fp: FixedPointData) -> ModalConstants:
    """Solve the fixed-point mode algebra and verify its consistency.

    nu_pm are the roots of nu^2 + i N (lam - i mu) nu + (g+lam)(g*-lam) delta0 = 0;
    S_pm follow from S_+ + S_- = N/2 together with the imaginary part of the
    overlap condition.  Three checks are enforced before returning:

      * the real part of the overlap condition holds identically,
      * the norm condition <phi|phi> = N/2 gives the same S_+ - S_-,
      * |S_+ - S_-| < N/2, equivalent to the manifestly positive
        combination -(mu/b)(1 + mu/b)(a + lam)^2 - mu(mu + b) > 0.
    """
    a, b, mu, lam, n = params.a, params.b, params.mu, params.lam, params.n_norm
    der = derive(params)
    g = der.g
    sig2 = sigma_squared(params)
    if sig2 <= 0.0:
        raise RegimeError(f"degenerate mode frequencies: sigma^2 = {sig2!r} <= 0")
    sigma = math.sqrt(sig2)
    chi_plus = -0.5 * lam * n + sigma
    chi_minus = -0.5 * lam * n - sigma
    nu_plus = complex(-0.5 * mu * n, chi_plus)
    nu_minus = complex(-0.5 * mu * n, chi_minus)

    # quadratic-root residual (scale-free)
    coeff_b = 1j * n * complex(lam, -mu)
    coeff_c = (g + lam) * (g.conjugate() - lam) * fp.delta0
    scale = max(1.0, abs(coeff_b) ** 2, abs(coeff_c))
    for nu in (nu_plus, nu_minus):
        resid = abs(nu * nu + coeff_b * nu + coeff_c)
        if resid > 1e-10 * scale:
            raise AccuracyError(f"mode-frequency root residual {resid:.3e}")

    gamma0_sq = fp.delta0
    # overlap condition: nu_+^* S_+ + nu_-^* S_- = i gamma0^2 (g^* + lam)
    rhs = 1j * gamma0_sq * (g.conjugate() + lam)
    # real part holds identically; verify
    re_lhs = -0.5 * mu * n * (0.5 * n)
    if abs(re_lhs - rhs.real) > 1e-12 * max(1.0, abs(rhs)):
        raise AccuracyError(
            f"real part of the overlap condition violated: {re_lhs - rhs.real:.3e}"
        )
    # imaginary part fixes the norm split
    s_diff = (n**2 / (4.0 * sigma)) * (lam * (1.0 + mu / b) + a * mu / b)
    # cross-check against the <phi|phi> = N/2 condition
    x = 0.25 * n**2 * (mu**2 + lam**2) + sig2
    rhs_norm = 0.5 * n * abs(g + lam) ** 2 * gamma0_sq
    if lam != 0.0:
        s_diff_alt = (0.5 * n * x - rhs_norm) / (lam * n * sigma)
        if abs(s_diff - s_diff_alt) > 1e-11 * max(1.0, abs(s_diff)):
            raise AccuracyError(
                f"the two norm-split expressions disagree: {s_diff - s_diff_alt:.3e}"
            )
    else:
        # with lam = 0 the norm condition is S-independent; check the identity
        if abs(0.5 * n * x - rhs_norm) > 1e-11 * max(1.0, rhs_norm):
            raise AccuracyError("norm condition identity violated at lam = 0")
    positivity = -(mu / b) * (1.0 + mu / b) * (a + lam) ** 2 - mu * (mu + b)
    if positivity <= 0.0:
        raise AccuracyError(
            f"norm-split positivity bound violated: {positivity!r} <= 0"
        )
    s_plus = 0.25 * n + 0.5 * s_diff
    s_minus = 0.25 * n - 0.5 * s_diff
    if s_plus <= 0.0 or s_minus <= 0.0:
        raise AccuracyError(
            f"mode norms must be positive: S+ = {s_plus!r}, S- = {s_minus!r}"
        )
    return ModalConstants(
        nu_plus=nu_plus,
        nu_minus=nu_minus,
        sigma=sigma,
        chi_plus=chi_plus,
        chi_minus=chi_minus,
        s_plus=s_plus,
        s_minus=s_minus,
        theta=der.theta,
        theta_prime=der.theta_prime,
    )


def build_mode_vectors(mc: ModalConstants, basis: EnergyBasis, seed: int):
    """Seeded construction of the two free-evolving mode vectors.

    Returns complex vectors (v_plus, v_minus) with <v+|v-> = 0,
    <v+|v+> = S_plus, <v-|v-> = S_minus.  Deterministic for fixed seed.
    """
    dim = basis.dim
    if dim < 2:
        raise ParameterError("basis too small: need dim >= 2 for two orthogonal modes")
    rng = np.random.default_rng(seed)
    raw = rng.standard_normal((2, dim)) + 1j * rng.standard_normal((2, dim))
    v_plus = raw[0] / np.linalg.norm(raw[0])
    w = raw[1] - np.vdot(v_plus, raw[1]) * v_plus
    norm_w = np.linalg.norm(w)
    if norm_w < 1e-12:  # pragma: no cover - measure-zero draw
        raise AccuracyError("degenerate random draw; retry with another seed")
    v_minus = w / norm_w
    return (
        v_plus * math.sqrt(mc.s_plus),
        v_minus * math.sqrt(mc.s_minus),
    )


def validate_mode_vectors(mc: ModalConstants, v_plus, v_minus, tol: float = 1e-10):
    """Check user-supplied mode vectors against the three contract conditions."""
    v_plus = np.asarray(v_plus, dtype=complex)
    v_minus = np.asarray(v_minus, dtype=complex)
    cross = abs(np.vdot(v_plus, v_minus))
    n_plus = float(np.vdot(v_plus, v_plus).real)
    n_minus = float(np.vdot(v_minus, v_minus).real)
    if cross > tol or abs(n_plus - mc.s_plus) > tol or abs(n_minus - mc.s_minus) > tol:
        raise ParameterError(
            "mode vectors violate the orthogonality/normalization contract: "
            f"|<+|->| = {cross:.3e}, <+|+> - S+ = {n_plus - mc.s_plus:.3e}, "
            f"<-|-> - S- = {n_minus - mc.s_minus:.3e}"
        )


def evolve_fixed_point(
    v_plus,
    v_minus,
    mc: ModalConstants,
    params: ModelParams,
    basis: EnergyBasis,
    t: float,
    overlap_phase: float = 0.0,
) -> StateVectorPair:
    """Coefficients of |psi(t)>, |phi(t)> for the fixed-point solution.

    psi_n(t) = e^{-i (E_n + (N/2)(alpha + lam)) t} [v+_n e^{i sigma t} + v-_n e^{-i sigma t}]
    phi_n(t) = i / ((g + lam) gamma0c) e^{-i (E_n + (N/2)(beta - lam)) t}
               [nu_+ v+_n e^{i sigma t} + nu_- v-_n e^{-i sigma t}]

    where gamma0c = gamma0 e^{-i overlap_phase} carries the otherwise
    arbitrary constant phase of the overlap.
    """
    der = derive(params)
    fp = fixed_point(params)
    g = der.g
    if g + params.lam == 0:
        raise ParameterError("g + lam must be nonzero (b != 0 guarantees this)")
    gamma0c = fp.gamma0 * cmath.exp(-1j * overlap_phase)
    v_plus = np.asarray(v_plus, dtype=complex)
    v_minus = np.asarray(v_minus, dtype=complex)
    energies = basis.as_array()
    n = params.n_norm

    mode_plus = v_plus * cmath.exp(1j * mc.sigma * t)
    mode_minus = v_minus * cmath.exp(-1j * mc.sigma * t)
    base = np.exp(-1j * energies * t)
    psi = base * cmath.exp(-0.5j * n * (der.alpha + params.lam) * t) * (mode_plus + mode_minus)
    phi = (
        base
        * (1j / ((g + params.lam) * gamma0c))
        * cmath.exp(-0.5j * n * (der.beta - params.lam) * t)
        * (mc.nu_plus * mode_plus + mc.nu_minus * mode_minus)
    )
    return StateVectorPair(psi=psi, phi=phi, t=float(t))

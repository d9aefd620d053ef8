"""Extended-Born-rule density matrix, its evolution audit, and orbits.

rho = (|psi><psi| + |phi><phi|) / N carries the nonlinear dynamics (unlike
the mu = lam = 0 model, where everything nonlinear cancels from rho).  Its
purity obeys Tr rho^2 = 1 - 2 S / N^2 with S the Schwarz parameter, and
expectation values <X> = Tr(rho X) of constant position matrix elements
trace a closed planar ellipse at angular frequency 2 sigma for the
fixed-point solution.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field

import numpy as np

from .errors import ParameterError, SolveError
from .params import ModelParams, derive
from .statevec_simple import ModalConstants, StateVectorPair, fixed_point

_HERM_TOL = 1e-12


@dataclass(frozen=True)
class DensityMatrix:
    """Hermitian density matrix over an energy basis at time t."""

    rho: np.ndarray
    t: float

    @property
    def dim(self) -> int:
        return self.rho.shape[0]

    def trace(self) -> float:
        return float(np.trace(self.rho).real)


def density_matrix(pair: StateVectorPair, n_norm: float) -> DensityMatrix:
    """rho = (|psi><psi| + |phi><phi|) / N; Hermitian by construction."""
    if n_norm <= 0:
        raise ParameterError(f"norm must be positive, got {n_norm!r}")
    psi, phi = pair.psi, pair.phi
    rho = (np.outer(psi, psi.conj()) + np.outer(phi, phi.conj())) / n_norm
    return DensityMatrix(rho=rho, t=pair.t)


def purity(dm: DensityMatrix) -> float:
    """Tr rho^2, evaluated from the matrix."""
    return float(np.trace(dm.rho @ dm.rho).real)


def purity_predicted(delta: float, c: float, p: float, n_norm: float) -> float:
    """Closed-form purity 1 - (c / 2 N^2) delta^p on an on-shell background."""
    return 1.0 - 0.5 * c * delta**p / n_norm**2


def expectation(dm: DensityMatrix, x_matrix) -> float:
    """<X> = Tr(rho X) for Hermitian X; the imaginary residual is checked.

    Raises ParameterError if X is not Hermitian (or the imaginary residual
    of the trace exceeds 1e-12 relative scale).
    """
    x_matrix = np.asarray(x_matrix, dtype=complex)
    herm_resid = np.max(np.abs(x_matrix - x_matrix.conj().T))
    scale = max(1.0, float(np.max(np.abs(x_matrix))))
    if herm_resid > _HERM_TOL * scale:
        raise ParameterError(f"operator is not Hermitian: residual {herm_resid:.3e}")
    value = complex(np.trace(dm.rho @ x_matrix))
    if abs(value.imag) > _HERM_TOL * max(1.0, abs(value)):
        raise ParameterError(f"expectation has imaginary residual {value.imag:.3e}")
    return value.real


# ---------------------------------------------------------------------------
# evolution-equation audit
# ---------------------------------------------------------------------------


def rho_rhs_general(pair: StateVectorPair, params: ModelParams, h_diag) -> np.ndarray:
    """Right-hand side of i d(rho)/dt for the full nonlinear model.

        [H, rho] + (2 i mu / N) (<phi|phi> P_psi - <psi|psi> P_phi)
                 + (2 lam / N) (gamma |phi><psi| - gamma* |psi><phi|)

    with P_v = |v><v| the bare dyads and gamma = <phi|psi>.
    """
    h_diag = np.asarray(h_diag, dtype=float)
    n = params.n_norm
    psi, phi = pair.psi, pair.phi
    rho = (np.outer(psi, psi.conj()) + np.outer(phi, phi.conj())) / n
    comm = h_diag[:, None] * rho - rho * h_diag[None, :]
    p_psi = np.outer(psi, psi.conj())
    p_phi = np.outer(phi, phi.conj())
    gamma = pair.gamma
    term_mu = (2j * params.mu / n) * (pair.norm_phi * p_psi - pair.norm_psi * p_phi)
    term_lam = (2.0 * params.lam / n) * (
        gamma * np.outer(phi, psi.conj()) - gamma.conjugate() * np.outer(psi, phi.conj())
    )
    return comm + term_mu + term_lam


def rho_rhs_fixed_point(pair: StateVectorPair, params: ModelParams, h_diag) -> np.ndarray:
    """tau = 0 specialization of rho_rhs_general (both norms equal N/2):

        [H, rho] + i mu (P_psi - P_phi) + (2 lam / N) (gamma |phi><psi| - h.c.)
    """
    h_diag = np.asarray(h_diag, dtype=float)
    n = params.n_norm
    psi, phi = pair.psi, pair.phi
    rho = (np.outer(psi, psi.conj()) + np.outer(phi, phi.conj())) / n
    comm = h_diag[:, None] * rho - rho * h_diag[None, :]
    gamma = pair.gamma
    term_mu = 1j * params.mu * (np.outer(psi, psi.conj()) - np.outer(phi, phi.conj()))
    term_lam = (2.0 * params.lam / n) * (
        gamma * np.outer(phi, psi.conj()) - gamma.conjugate() * np.outer(psi, phi.conj())
    )
    return comm + term_mu + term_lam


def rho_dot_residual(pairs, params: ModelParams, h_diag, form: str = "general") -> np.ndarray:
    """Audit of the density-matrix evolution equation on a state series.

    pairs must be uniformly spaced in t; i d(rho)/dt is estimated by central
    differences and compared elementwise against the chosen right-hand side
    evaluated from the states (the states are the ground truth; the
    evolution equation is the claim under test).  Returns one row (t,
    max elementwise residual) per interior sample.
    """
    if len(pairs) < 3:
        raise ParameterError(f"need at least 3 samples for a central difference, got {len(pairs)}")
    ts = np.array([p.t for p in pairs])
    steps = np.diff(ts)
    h = steps[0]
    if h <= 0 or np.max(np.abs(steps - h)) > 1e-9 * abs(h):
        raise ParameterError("state series must be uniformly spaced in t")
    rhs_fn = {"general": rho_rhs_general, "fixed_point": rho_rhs_fixed_point}.get(form)
    if rhs_fn is None:
        raise ParameterError(f"unknown form {form!r}; use 'general' or 'fixed_point'")
    n = params.n_norm
    rhos = [
        (np.outer(p.psi, p.psi.conj()) + np.outer(p.phi, p.phi.conj())) / n for p in pairs
    ]
    out = np.empty((len(pairs) - 2, 2))
    for i in range(1, len(pairs) - 1):
        lhs = 1j * (rhos[i + 1] - rhos[i - 1]) / (2.0 * h)
        rhs = rhs_fn(pairs[i], params, h_diag)
        out[i - 1] = (ts[i], float(np.max(np.abs(lhs - rhs))))
    return out


# ---------------------------------------------------------------------------
# fixed-point trajectory and ellipse geometry
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class PositionModel:
    """Constant position matrix elements between the two free modes.

    diag_plus / diag_minus are <v+|X_i|v+> and <v-|X_i|v-> (real 3-vectors),
    cross is <v+|X_i|v-> (complex 3-vector); the conjugate cross element is
    implied by Hermiticity.  Optional linear drift terms (velocities of the
    matrix elements) default to zero, isolating the closed orbit from the
    overall motion of the system through space.
    """

    diag_plus: np.ndarray
    diag_minus: np.ndarray
    cross: np.ndarray
    drift_plus: np.ndarray = field(default=None)
    drift_minus: np.ndarray = field(default=None)
    drift_cross: np.ndarray = field(default=None)

    def __post_init__(self):
        object.__setattr__(self, "diag_plus", np.asarray(self.diag_plus, dtype=float))
        object.__setattr__(self, "diag_minus", np.asarray(self.diag_minus, dtype=float))
        object.__setattr__(self, "cross", np.asarray(self.cross, dtype=complex))
        for name in ("drift_plus", "drift_minus", "drift_cross"):
            value = getattr(self, name)
            if value is None:
                value = np.zeros(3, dtype=complex if name == "drift_cross" else float)
            else:
                value = np.asarray(value, dtype=complex if name == "drift_cross" else float)
            object.__setattr__(self, name, value)
        for vec in (self.diag_plus, self.diag_minus, self.cross):
            if vec.shape != (3,):
                raise ParameterError("position matrix elements must be 3-vectors")

    @classmethod
    def from_operators(cls, x_matrices, v_plus, v_minus) -> "PositionModel":
        """Matrix elements of three Hermitian operators between mode vectors."""
        v_plus = np.asarray(v_plus, dtype=complex)
        v_minus = np.asarray(v_minus, dtype=complex)
        diag_plus, diag_minus, cross = [], [], []
        for x in x_matrices:
            x = np.asarray(x, dtype=complex)
            diag_plus.append(np.vdot(v_plus, x @ v_plus).real)
            diag_minus.append(np.vdot(v_minus, x @ v_minus).real)
            cross.append(complex(np.vdot(v_plus, x @ v_minus)))
        return cls(diag_plus=diag_plus, diag_minus=diag_minus, cross=cross)


@dataclass
class TrajectorySamples:
    """Sampled expectation trajectory <X(t)> with its orbit constants."""

    t: np.ndarray
    x: np.ndarray  # shape (n, 3)
    sigma: float
    center: np.ndarray | None = None
    v_cos: np.ndarray | None = None
    w_sin: np.ndarray | None = None


def trajectory_fixed_point(
    pm: PositionModel, mc: ModalConstants, params: ModelParams, t_grid
) -> TrajectorySamples:
    """Closed-orbit trajectory of the fixed-point solution.

    <X(t)> = X0 + V cos(2 sigma t) + W sin(2 sigma t), where the psi branch
    weights the cross element by 1 and the phi branch by
    nu_+^* nu_- / (|g + lam|^2 gamma0^2); drift terms add the documented
    secular pieces when present.
    """
    if mc.sigma <= 0:
        raise ParameterError("trajectory needs sigma > 0")
    der = derive(params)
    fp = fixed_point(params)
    n = params.n_norm
    denom = abs(der.g + params.lam) ** 2 * fp.gamma0**2
    q_plus = abs(mc.nu_plus) ** 2 / denom
    q_minus = abs(mc.nu_minus) ** 2 / denom
    w_cross = (mc.nu_plus.conjugate() * mc.nu_minus) / denom

    center = (pm.diag_plus * (1.0 + q_plus) + pm.diag_minus * (1.0 + q_minus)) / n
    z = (1.0 + w_cross) * pm.cross
    v_cos = 2.0 * z.real / n
    w_sin = 2.0 * z.imag / n

    t_grid = np.asarray(t_grid, dtype=float)
    phase = 2.0 * mc.sigma * t_grid
    x = (
        center[None, :]
        + np.cos(phase)[:, None] * v_cos[None, :]
        + np.sin(phase)[:, None] * w_sin[None, :]
    )
    if np.any(pm.drift_plus) or np.any(pm.drift_minus) or np.any(pm.drift_cross):
        d_center = (pm.drift_plus * (1.0 + q_plus) + pm.drift_minus * (1.0 + q_minus)) / n
        dz = (1.0 + w_cross) * pm.drift_cross
        x = x + t_grid[:, None] * (
            d_center[None, :]
            + np.cos(phase)[:, None] * (2.0 * dz.real / n)[None, :]
            + np.sin(phase)[:, None] * (2.0 * dz.imag / n)[None, :]
        )
    return TrajectorySamples(
        t=t_grid, x=x, sigma=mc.sigma, center=center, v_cos=v_cos, w_sin=w_sin
    )


@dataclass
class EllipseFit:
    """Geometry of a fitted closed orbit."""

    center: np.ndarray
    axis_major: np.ndarray
    axis_minor: np.ndarray
    r1: float
    r2: float
    omega: float  # angular frequency of the harmonic motion (= 2 sigma)
    harmonic_residual: float
    planarity_residual: float
    conic_residual: float
    focal_rate_min: float
    focal_rate_max: float
    degenerate: bool = False

    def to_json_dict(self) -> dict:
        return {
            "center": list(self.center),
            "axis_major": list(self.axis_major),
            "axis_minor": list(self.axis_minor),
            "R1": self.r1,
            "R2": self.r2,
            "omega": self.omega,
            "period": 2.0 * math.pi / self.omega,
            "harmonic_residual": self.harmonic_residual,
            "planarity_residual": self.planarity_residual,
            "conic_residual": self.conic_residual,
            "focal_rate_min": self.focal_rate_min,
            "focal_rate_max": self.focal_rate_max,
            "degenerate": self.degenerate,
        }


def ellipse_fit(samples: TrajectorySamples) -> EllipseFit:
    """Fit the closed orbit: plane, center, semi-axes, focal areal rates.

    Harmonic regression at the known frequency 2 sigma recovers the center
    and the cos/sin vectors; the semi-axes follow from the eigenvalues of
    the second-moment matrix (V V^T + W W^T)/2 in the orbit plane.  The
    motion is verified harmonic about the center; the areal rate about a
    focus is reported and (for R1 != R2) varies, so the orbit is not
    Kepler-like.  Collinear V, W degenerate to a line segment (warning).
    """
    t, x, sigma = samples.t, samples.x, samples.sigma
    if len(t) < 8:
        raise ParameterError(f"need at least 8 samples, got {len(t)}")
    if sigma <= 0:
        raise ParameterError("samples must carry sigma > 0")
    span = t[-1] - t[0]
    half_period = 0.5 * math.pi / sigma
    if span < half_period * (1.0 - 1e-9):
        raise ParameterError(
            f"samples span {span:.6g} < half an orbital period {half_period:.6g}"
        )
    phase = 2.0 * sigma * t
    design = np.column_stack([np.ones_like(t), np.cos(phase), np.sin(phase)])
    coef, *_ = np.linalg.lstsq(design, x, rcond=None)
    center, v_cos, w_sin = coef[0], coef[1], coef[2]
    harmonic_residual = float(np.max(np.abs(design @ coef - x)))

    moment = 0.5 * (np.outer(v_cos, v_cos) + np.outer(w_sin, w_sin))
    eigvals, eigvecs = np.linalg.eigh(moment)
    order = np.argsort(eigvals)[::-1]
    eigvals, eigvecs = eigvals[order], eigvecs[:, order]
    r1 = math.sqrt(max(0.0, 2.0 * eigvals[0]))
    r2 = math.sqrt(max(0.0, 2.0 * eigvals[1]))
    e1, e2, normal = eigvecs[:, 0], eigvecs[:, 1], eigvecs[:, 2]
    rel = x - center[None, :]
    planarity_residual = float(np.max(np.abs(rel @ normal)))

    degenerate = r2 <= 1e-10 * max(r1, 1e-30)
    u1 = rel @ e1
    u2 = rel @ e2
    if degenerate:
        warnings.warn(
            "collinear cos/sin vectors: orbit degenerates to a line segment",
            stacklevel=2,
        )
        conic_residual = math.nan
        focal_min = focal_max = 0.0
    else:
        conic_residual = float(np.max(np.abs((u1 / r1) ** 2 + (u2 / r2) ** 2 - 1.0)))
        # areal rate about the focus (+f, 0) over one dense period
        focus = math.sqrt(max(0.0, r1**2 - r2**2))
        a1, b1 = float(v_cos @ e1), float(w_sin @ e1)
        a2, b2 = float(v_cos @ e2), float(w_sin @ e2)
        theta = np.linspace(0.0, 2.0 * math.pi, 721)
        cu, su = np.cos(theta), np.sin(theta)
        p1 = a1 * cu + b1 * su - focus
        p2 = a2 * cu + b2 * su
        d1 = 2.0 * sigma * (-a1 * su + b1 * cu)
        d2 = 2.0 * sigma * (-a2 * su + b2 * cu)
        rate = 0.5 * np.abs(p1 * d2 - p2 * d1)
        focal_min, focal_max = float(np.min(rate)), float(np.max(rate))

    return EllipseFit(
        center=center,
        axis_major=e1,
        axis_minor=e2,
        r1=r1,
        r2=r2,
        omega=2.0 * sigma,
        harmonic_residual=harmonic_residual,
        planarity_residual=planarity_residual,
        conic_residual=conic_residual,
        focal_rate_min=focal_min,
        focal_rate_max=focal_max,
        degenerate=degenerate,
    )

"""Model parameters, regime classification and derived constants.

The model couples two state vectors through eight real constants: the
complex coupling g = a + ib, the anti-Hermitian couplings mu and lam, and
the diagonal couplings alpha1, alpha2, beta1, beta2.  The conserved total
norm N completes the parameter set.

Everything downstream works either in physical time t or in the rescaled
evolution parameter s = -(b + mu) t; the latter requires b + mu != 0.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass

from .errors import ParameterError, RegimeError

#: JSON keys accepted by :func:`params_from_json`, in canonical order.
PARAM_KEYS = ("a", "b", "mu", "lambda", "alpha1", "alpha2", "beta1", "beta2", "N")


@dataclass(frozen=True)
class ModelParams:
    """The eight real couplings plus the conserved norm N.

    Immutable value type; regime flags are derived properties.
    """

    a: float = 0.0
    b: float = 0.0
    mu: float = 0.0
    lam: float = 0.0
    alpha1: float = 0.0
    alpha2: float = 0.0
    beta1: float = 0.0
    beta2: float = 0.0
    n_norm: float = 1.0

    @property
    def bounded(self) -> bool:
        """True iff the confining regime b > 0, -b < mu < 0 holds."""
        return self.b > 0.0 and -self.b < self.mu < 0.0

    @property
    def original_model(self) -> bool:
        """True iff mu = 0 (the fully integrable two-parameter model)."""
        return self.mu == 0.0

    @property
    def case2(self) -> bool:
        """True iff b + mu = 0, where the s-reparameterization degenerates."""
        return self.b + self.mu == 0.0

    def as_dict(self) -> dict:
        return {
            "a": self.a,
            "b": self.b,
            "mu": self.mu,
            "lambda": self.lam,
            "alpha1": self.alpha1,
            "alpha2": self.alpha2,
            "beta1": self.beta1,
            "beta2": self.beta2,
            "N": self.n_norm,
        }


def validate(params: ModelParams) -> ModelParams:
    """Check finiteness and N > 0; return the parameters unchanged.

    Raises ParameterError for non-finite entries or a non-positive norm.
    The regime flags (bounded / original_model / case2) are available as
    properties of the returned object.  b < 0 is accepted but none of the
    bounded-regime machinery will engage for it.
    """
    for name, value in params.as_dict().items():
        if not math.isfinite(value):
            raise ParameterError(f"parameter {name!r} is not finite: {value!r}")
    if params.n_norm <= 0.0:
        raise ParameterError(f"norm N must be positive, got {params.n_norm!r}")
    return params


def params_from_json(text_or_dict) -> ModelParams:
    """Build validated ModelParams from a JSON object (text or dict).

    The schema is exactly the nine keys in PARAM_KEYS; unknown keys are
    rejected, missing keys default (a..beta2 -> 0, N -> 1).
    """
    if isinstance(text_or_dict, str):
        data = json.loads(text_or_dict)
    else:
        data = dict(text_or_dict)
    if not isinstance(data, dict):
        raise ParameterError("parameter JSON must be an object")
    unknown = sorted(set(data) - set(PARAM_KEYS))
    if unknown:
        raise ParameterError(f"unknown parameter keys: {unknown}")
    for key, value in data.items():
        if isinstance(value, bool) or not isinstance(value, (int, float)):
            raise ParameterError(f"parameter {key!r} must be a number, got {value!r}")
    return validate(
        ModelParams(
            a=float(data.get("a", 0.0)),
            b=float(data.get("b", 0.0)),
            mu=float(data.get("mu", 0.0)),
            lam=float(data.get("lambda", 0.0)),
            alpha1=float(data.get("alpha1", 0.0)),
            alpha2=float(data.get("alpha2", 0.0)),
            beta1=float(data.get("beta1", 0.0)),
            beta2=float(data.get("beta2", 0.0)),
            n_norm=float(data.get("N", 1.0)),
        )
    )


@dataclass(frozen=True)
class DerivedParams:
    """Constants derived from ModelParams, defined only when b + mu != 0.

    p is the exponent of the second term of the reduced potential,
    s_slope the (exact, linear) rate of the evolution parameter s(t).
    """

    g: complex
    p: float
    s_slope: float
    alpha: float
    beta: float
    alpha_p: float
    beta_p: float
    theta: float
    theta_prime: complex
    q: complex
    q_prime: complex

    def s_of_t(self, t):
        """Evolution parameter s = -(b + mu) t; exactly linear, s(0) = 0."""
        return self.s_slope * t

    def t_of_s(self, s):
        """Inverse of s_of_t."""
        return s / self.s_slope


def derive(params: ModelParams) -> DerivedParams:
    """Compute the derived constants; refuses the b + mu = 0 case."""
    validate(params)
    if params.case2:
        raise RegimeError(
            "b + mu = 0: the s = -(b + mu) t reparameterization is degenerate; "
            "only the dedicated closed form covers this case"
        )
    a, b, mu, lam, n = params.a, params.b, params.mu, params.lam, params.n_norm
    alpha = params.alpha1 + params.alpha2
    beta = params.beta1 + params.beta2
    return DerivedParams(
        g=complex(a, b),
        p=mu / (b + mu),
        s_slope=-(b + mu),
        alpha=alpha,
        beta=beta,
        alpha_p=params.alpha1 - params.alpha2,
        beta_p=params.beta1 - params.beta2,
        theta=0.5 * n * (2.0 * lam + alpha - beta),
        theta_prime=n * complex(lam, -mu),
        q=0.5 * n * complex(alpha, mu),
        q_prime=0.5 * n * complex(beta, -mu),
    )

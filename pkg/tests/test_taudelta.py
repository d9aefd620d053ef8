import math

import numpy as np
import pytest

from nlqm import AccuracyError, ModelParams, ParameterError, RegimeError, SolveError, derive
from nlqm.taudelta import (
    PotentialSpec,
    TauDeltaState,
    closed_b_plus_mu_zero,
    closed_b_zero,
    closed_mu_zero,
    closed_symmetric,
    eta_shift,
    first_integral,
    integrate,
    oscillation_period,
    potential,
    potential_min,
    schwarz_param,
    symmetric_period,
    tanh_ansatz,
    tdeqs_rhs,
)

PRESET_N = 5.0
PRESET_C = 4.0
PRESET_POT = PotentialSpec(c=PRESET_C, p=-1.0, n_norm=PRESET_N)


# ---------------------------------------------------------------------------
# hyperbolic closed forms
# ---------------------------------------------------------------------------


def test_closed_forms_at_t_zero():
    tau, delta = closed_mu_zero(0.8, 1.3, 0.0)
    assert (tau, delta) == (0.0, 0.8**2)
    tau, delta = closed_b_plus_mu_zero(0.4, 1.1, 2.0, 0.0)
    assert (tau, delta) == (0.0, 1.0 - 0.16)
    tau, delta = closed_b_zero(0.7, -0.5, 2.0, 0.0)
    assert (tau, delta) == (0.0, 0.7)
    tau, delta = tanh_ansatz(2.0, 1.0, -0.4, 0.0)
    assert (tau, delta) == (0.0, 1.0)


def test_case1_asymptotics():
    # tau -> 2 w0 and delta -> 0 at large times: the overlap dies out
    w0, b = 0.9, 1.2
    t = 50.0 / (2.0 * w0 * b)
    tau, delta = closed_mu_zero(w0, b, t)
    assert abs(tau - 2.0 * w0) < 1e-10
    assert abs(delta) < 1e-10


def test_case2_delta_constant_and_negative_delta_error():
    t = np.linspace(-4.0, 4.0, 50)
    _, delta = closed_b_plus_mu_zero(0.3, 0.9, 2.0, t)
    assert np.all(delta == delta[0])
    with pytest.raises(RegimeError):
        closed_b_plus_mu_zero(1.5, 0.9, 2.0, 0.0)


def test_case3_tanh_argument_free_of_integration_constant():
    t = np.linspace(-2.0, 2.0, 30)
    tau_a, _ = closed_b_zero(0.5, -0.7, 1.5, t)
    tau_b, _ = closed_b_zero(2.5, -0.7, 1.5, t)
    assert np.max(np.abs(tau_a - tau_b)) == 0.0


def test_tanh_ansatz_reduces_to_case1():
    # mu = 0 with w0 = N/2 reproduces the original-model orbit
    n, b = 2.0, 1.3
    t = np.linspace(-2.0, 2.0, 41)
    tau_a, delta_a = tanh_ansatz(n, b, 0.0, t)
    tau_1, delta_1 = closed_mu_zero(n / 2.0, b, t)
    assert np.max(np.abs(tau_a - tau_1)) < 1e-14
    assert np.max(np.abs(delta_a - delta_1)) < 1e-14


def closed_form_residual_mu_zero(w0, b, n, t):
    x = 2.0 * w0 * b * t
    tau, delta = closed_mu_zero(w0, b, t)
    dtau = 4.0 * w0**2 * b * (1.0 - np.tanh(x) ** 2)
    ddelta = -4.0 * w0**3 * b * np.tanh(x) / np.cosh(x) ** 2
    rt, rd = tdeqs_rhs(tau, delta, ModelParams(b=b, mu=0.0, n_norm=n))
    return max(np.max(np.abs(dtau - rt)), np.max(np.abs(ddelta - rd)))


def test_closed_form_ode_residuals():
    """Substitute the closed forms into the coupled equations (analytic derivatives)."""
    rng = np.random.default_rng(11)
    t = np.linspace(-3.0, 3.0, 100)
    for _ in range(50):
        n = rng.uniform(0.5, 3.0)
        b = rng.uniform(0.2, 2.0)
        w0 = rng.uniform(0.1, 0.45) * n
        assert closed_form_residual_mu_zero(w0, b, n, t) < 1e-12

        x = 2.0 * w0 * b * t
        tau, delta = closed_b_plus_mu_zero(w0, b, n, t)
        dtau = -4.0 * w0**2 * b * (1.0 - np.tanh(x) ** 2)
        rt, rd = tdeqs_rhs(tau, delta, ModelParams(b=b, mu=-b, n_norm=n))
        assert np.max(np.abs(dtau - rt)) < 1e-12 and np.max(np.abs(rd)) < 1e-12

        mu = rng.uniform(-1.5, -0.1)
        d0 = rng.uniform(0.1, 2.0)
        y = mu * n * t
        tau, delta = closed_b_zero(d0, mu, n, t)
        dtau = mu * n**2 * (1.0 - np.tanh(y) ** 2)
        ddelta = -2.0 * d0 * mu * n * np.tanh(y) / np.cosh(y) ** 2
        rt, rd = tdeqs_rhs(tau, delta, ModelParams(b=0.0, mu=mu, n_norm=n))
        assert np.max(np.abs(dtau - rt)) < 1e-12 and np.max(np.abs(ddelta - rd)) < 1e-12

        mu_b = rng.uniform(-0.9, -0.1) * b
        z = (b + mu_b) * n * t
        tau, delta = tanh_ansatz(n, b, mu_b, t)
        dtau = (b + mu_b) * n**2 * (1.0 - np.tanh(z) ** 2)
        ddelta = -0.5 * n**3 * (b + mu_b) * np.tanh(z) / np.cosh(z) ** 2
        rt, rd = tdeqs_rhs(tau, delta, ModelParams(b=b, mu=mu_b, n_norm=n))
        assert np.max(np.abs(dtau - rt)) < 1e-12 and np.max(np.abs(ddelta - rd)) < 1e-12


# ---------------------------------------------------------------------------
# first integral and Schwarz parameter
# ---------------------------------------------------------------------------


def test_first_integral_original_model():
    # mu = 0 orbits: c = N^2 - 4 w0^2
    n, b, w0 = 2.0, 1.1, 0.6
    t = np.linspace(-2.0, 2.0, 25)
    tau, delta = closed_mu_zero(w0, b, t)
    c = first_integral(tau, delta, n, 0.0)
    assert np.max(np.abs(c - (n**2 - 4.0 * w0**2))) < 1e-12


def test_first_integral_vanishes_on_tanh_ansatz():
    n, b, mu = 2.0, 1.0, -0.4
    t = np.linspace(-2.0, 2.0, 25)
    tau, delta = tanh_ansatz(n, b, mu, t)
    c = first_integral(tau, delta, n, mu / (b + mu))
    assert np.max(np.abs(c)) < 1e-12


def test_first_integral_worked_value():
    # tau = 0, delta = N^2/8, p = -1, N^2 = 4  =>  c = 1
    assert first_integral(0.0, 0.5, 2.0, -1.0) == pytest.approx(1.0, abs=1e-15)


def test_first_integral_off_manifold_error():
    with pytest.raises(RegimeError):
        first_integral(0.0, 10.0, 1.0, 0.0)  # N^2 - 4 delta strongly negative
    with pytest.raises(ParameterError):
        first_integral(0.0, -1.0, 1.0, 0.0)


def test_schwarz_parameter():
    assert schwarz_param(0.7, 0.0, -1.0) == 0.0
    # p = 0: constant in delta
    values = schwarz_param(np.linspace(0.1, 3.0, 7), 2.0, 0.0)
    assert np.max(np.abs(values - 0.5)) == 0.0
    with pytest.raises(ParameterError):
        schwarz_param(1.0, -0.5, 0.0)


def test_schwarz_matches_state_vector_inner_products():
    from nlqm.statevec_simple import EnergyBasis, build_mode_vectors, evolve_fixed_point, fixed_point, modal_constants

    params = ModelParams(a=0.5, b=1.0, mu=-0.5, lam=0.2, n_norm=2.0)
    fp = fixed_point(params)
    mc = modal_constants(params, fp)
    basis = EnergyBasis((0.1, 0.9, 1.7, 2.2))
    vp, vm = build_mode_vectors(mc, basis, seed=8)
    der = derive(params)
    for t in (0.0, 0.7, 2.3):
        pair = evolve_fixed_point(vp, vm, mc, params, basis, t)
        s_states = pair.norm_psi * pair.norm_phi - abs(pair.gamma) ** 2
        s_formula = schwarz_param(fp.delta0, fp.c, der.p)
        assert abs(s_states - s_formula) < 1e-9


# ---------------------------------------------------------------------------
# potential
# ---------------------------------------------------------------------------


def test_potential_minimum_p_neg1():
    kappa0, v0 = potential_min(PRESET_POT)
    assert kappa0 == 0.0
    assert v0 == 8.0  # 4 sqrt(c)
    assert eta_shift(PRESET_C) == kappa0


def test_potential_confines_for_negative_p():
    for kappa in (-30.0, 30.0):
        assert potential(kappa, PRESET_POT) > 1e12


def test_potential_min_requires_negative_p():
    with pytest.raises(RegimeError):
        potential_min(PotentialSpec(c=1.0, p=0.0, n_norm=1.0))
    with pytest.raises(RegimeError):
        potential_min(PotentialSpec(c=1.0, p=0.5, n_norm=1.0))


def test_potential_spec_validation():
    with pytest.raises(ParameterError):
        PotentialSpec(c=-1.0, p=-1.0, n_norm=1.0)
    with pytest.raises(ParameterError):
        PotentialSpec(c=1.0, p=-1.0, n_norm=0.0)


# ---------------------------------------------------------------------------
# p = -1 closed form
# ---------------------------------------------------------------------------


def test_symmetric_boundary_values():
    st0 = closed_symmetric(PRESET_N, PRESET_C, 0.0)
    assert st0.kappa == 0.0
    assert st0.delta == 1.0
    assert st0.tau == pytest.approx(math.sqrt(17.0), abs=1e-14)
    assert st0.energy(PRESET_POT) == pytest.approx(25.0, abs=1e-12)


def test_symmetric_energy_on_shell():
    series = closed_symmetric(PRESET_N, PRESET_C, np.linspace(-2.0, 2.0, 200))
    assert np.max(np.abs(series.energy - 25.0)) < 1e-10


def test_symmetric_tau_is_half_kappa_derivative():
    h = 1e-5
    for s in np.linspace(-2.0, 2.0, 21):
        fd = (closed_symmetric(PRESET_N, PRESET_C, s + h).kappa
              - closed_symmetric(PRESET_N, PRESET_C, s - h).kappa) / (2.0 * h)
        assert abs(0.5 * fd - closed_symmetric(PRESET_N, PRESET_C, s).tau) < 1e-8


def test_symmetric_nontrivial_shift_for_general_c():
    # c != 4 shifts the center of oscillation to eta0 = ln(c/4)/2
    c = 9.0
    st0 = closed_symmetric(6.0, c, 0.0)
    assert st0.kappa == pytest.approx(eta_shift(c))
    series = closed_symmetric(6.0, c, np.linspace(-1.0, 1.0, 100))
    assert np.max(np.abs(series.energy - 36.0)) < 1e-10


def test_symmetric_below_barrier_error():
    with pytest.raises(RegimeError):
        closed_symmetric(1.0, 4.0, 0.0)  # N^2 = 1 < 4 sqrt(c) = 8


# ---------------------------------------------------------------------------
# symplectic integration
# ---------------------------------------------------------------------------


def test_integrate_stationary_at_minimum():
    kappa0, _ = potential_min(PRESET_POT)
    series = integrate(TauDeltaState(kappa0, 0.0, 0.0), PRESET_POT,
                       np.linspace(0.0, 10.0, 101), substep=1e-3)
    assert np.max(np.abs(series.kappa - kappa0)) <= 1e-12


def test_integrate_matches_closed_form():
    s = np.linspace(-2.0, 2.0, 201)
    closed = closed_symmetric(PRESET_N, PRESET_C, s)
    numeric = integrate(closed.state(0), PRESET_POT, s, substep=1e-4)
    gap = max(
        np.max(np.abs(closed.kappa - numeric.kappa)),
        np.max(np.abs(closed.tau - numeric.tau)),
        np.max(np.abs(closed.delta - numeric.delta)),
    )
    assert gap < 1e-6
    assert numeric.energy_drift < 1e-10


def test_integrate_reversibility():
    init = closed_symmetric(PRESET_N, PRESET_C, 0.0)
    grid = np.linspace(0.0, 5.0, 51)
    fwd = integrate(init, PRESET_POT, grid, substep=1e-3).state(50)
    back = integrate(TauDeltaState(fwd.kappa, -fwd.tau, 0.0), PRESET_POT, grid,
                     substep=1e-3).state(50)
    assert abs(back.kappa - init.kappa) < 1e-9
    assert abs(-back.tau - init.tau) < 1e-9


def test_integrate_first_integral_and_drift():
    init = closed_symmetric(PRESET_N, PRESET_C, 0.0)
    series = integrate(init, PRESET_POT, np.linspace(0.0, 10.0, 101), substep=1e-3)
    assert series.energy_drift < 1e-8
    c = series.c_recovered
    assert np.max(np.abs(c - c[0])) < 1e-8
    assert np.min(series.delta) > 0.0


def test_integrate_divergence_error():
    # p = 0 potential with energy above the plateau: kappa escapes to -inf
    pot = PotentialSpec(c=0.0, p=0.0, n_norm=5.0)
    init = TauDeltaState(kappa=0.0, tau=-math.sqrt(25.0 - 4.0), s=0.0)
    with pytest.raises(AccuracyError):
        integrate(init, pot, np.linspace(0.0, 400.0, 41), substep=1e-2)


def test_integrate_grid_validation():
    init = TauDeltaState(0.0, 1.0, 0.0)
    with pytest.raises(ParameterError):
        integrate(init, PRESET_POT, np.array([0.0, 0.0, 1.0]))
    with pytest.raises(ParameterError):
        integrate(init, PRESET_POT, np.array([1.0, 2.0]))  # must start at init.s
    with pytest.raises(ParameterError):
        integrate(init, PRESET_POT, np.array([0.0, 1.0]), order=3)
    with pytest.raises(ParameterError):
        integrate(init, PRESET_POT, np.array([0.0, 1.0]), substep=-1.0)


def test_period_match_closed_vs_integrated():
    period = symmetric_period(PRESET_N, PRESET_C)
    init = closed_symmetric(PRESET_N, PRESET_C, 0.0)
    series = integrate(init, PRESET_POT, np.linspace(0.0, 3.0 * period, 1501), substep=1e-3)
    assert abs(oscillation_period(series) - period) / period < 1e-6


def test_oscillation_period_needs_crossings():
    kappa0, _ = potential_min(PRESET_POT)
    series = integrate(TauDeltaState(kappa0, 0.0, 0.0), PRESET_POT,
                       np.linspace(0.0, 1.0, 11), substep=1e-3)
    with pytest.raises(SolveError):
        oscillation_period(series)


def test_series_time_column():
    params = ModelParams(b=1.0, mu=-0.5, n_norm=PRESET_N)
    der = derive(params)
    series = closed_symmetric(PRESET_N, PRESET_C, np.linspace(-1.0, 1.0, 11))
    series.with_time(der)
    assert np.allclose(series.t, series.s / der.s_slope, rtol=0, atol=0)

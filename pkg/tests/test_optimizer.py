import math

import numpy as np
import pytest
from hypothesis import assume, given, settings, strategies as st

import securesr.optimizer as opt
from securesr.channel import SystemParams, sample_channels
from securesr.errors import DegenerateBeamError
from securesr.model import (build_an_precoder, power_split, rate_vs_phi, secrecy_rate,
                            snr_primary)
from securesr.optimizer import (PHI_FLOOR, alternating_optimize, combination_grid,
                                feasibility_check, iterations_to_tolerance, min_feasible_phi,
                                optimal_phi_ab, w_snr_max, w_unconstrained_secrecy,
                                w_weighted_search)
from securesr.validation import grid_search_phi_ab

from conftest import basis, make_channel, unit_sphere


def instance(nt=4, ne=1, trial=0, **kw):
    params = SystemParams(nt=nt, ne=ne, **kw)
    ch = sample_channels(params, trial)
    return params, ch, build_an_precoder(ch)


# -- w-step pieces ---------------------------------------------------------------

def test_w_snr_max_matched_filter_without_backscatter():
    params, ch, an = instance(alpha=0.0)
    w, _ = w_snr_max(0.5, ch, an, params)
    assert abs(np.vdot(ch.h1 / np.linalg.norm(ch.h1), w)) == pytest.approx(1.0, abs=1e-12)


def test_w_snr_max_orthogonal_channels(rng):
    params = SystemParams(nt=4, ne=1)
    h1 = np.array([1.0, 2.0j, 0, 0])
    h2 = np.array([0, 0, 1.0 - 1j, 0.5])
    ch = make_channel(h1, h2, rng.standard_normal((1, 4)), g1=0.8 + 0.3j, g2=0.4)
    an = build_an_precoder(ch)
    w, gmax = w_snr_max(0.5, ch, an, params)
    assert abs(np.vdot(h1 / np.linalg.norm(h1), w)) == pytest.approx(1.0, abs=1e-12)
    samples = snr_primary(unit_sphere(rng, 10_000, 4), power_split(0.5, params), ch, params)
    assert gmax >= samples.max()


def test_w_snr_max_beats_sampling(rng):
    params, ch, an = instance()
    w, gmax = w_snr_max(0.3, ch, an, params)
    split = power_split(0.3, params)
    assert gmax == pytest.approx(snr_primary(w, split, ch, params), rel=1e-10)
    assert gmax >= snr_primary(unit_sphere(rng, 10_000, 4), split, ch, params).max()


def test_feasibility_check():
    assert feasibility_check(2.0, SystemParams(gamma_s_th_db=3.0))
    assert not feasibility_check(1.9, SystemParams(gamma_s_th_db=3.0))
    assert feasibility_check(0.0, SystemParams(gamma_s_th_db=float('-inf')))


def test_w_e2_without_eavesdropper_signal():
    params, ch, an = instance()
    ch = make_channel(ch.h1, ch.h2, ch.he, g1=ch.g1, g2=0.0)
    w = w_unconstrained_secrecy(0.5, ch, an, params)
    assert abs(np.vdot(ch.h2 / np.linalg.norm(ch.h2), w)) == pytest.approx(1.0, abs=1e-12)


def test_w_e2_beats_sampling(rng):
    params, ch, an = instance()
    w_e2 = w_unconstrained_secrecy(0.5, ch, an, params)
    split = power_split(0.5, params)
    best = secrecy_rate(unit_sphere(rng, 10_000, 4), split, ch, an, params, clamp=False).max()
    assert secrecy_rate(w_e2, split, ch, an, params, clamp=False) >= best
    w_e1, _ = w_snr_max(0.5, ch, an, params)
    assert secrecy_rate(w_e2, split, ch, an, params) >= secrecy_rate(w_e1, split, ch, an, params)


def test_combination_endpoints(rng):
    u, v = unit_sphere(rng, 2, 5)
    lams, ws = combination_grid(u, v, 10)
    assert lams.size == 11
    assert np.array_equal(ws[0], v) and np.array_equal(ws[-1], u)
    np.testing.assert_allclose(np.linalg.norm(ws, axis=1), 1.0, rtol=1e-14)


def test_combination_skips_cancelling_point():
    u = np.array([1.0, 0.0], dtype=complex)
    lams, ws = combination_grid(u, -u, 2)
    assert list(lams) == [0.0, 1.0]


def test_weighted_search_low_threshold_picks_w_e2():
    params, ch, an = instance(gamma_s_th_db=-40.0)
    w, lam, r = w_weighted_search(0.5, ch, an, params)
    assert lam == 0.0
    w_e2 = w_unconstrained_secrecy(0.5, ch, an, params)
    assert r == pytest.approx(float(secrecy_rate(w_e2, power_split(0.5, params), ch, an, params)),
                              rel=1e-12)


def test_weighted_search_matches_grid_evaluation():
    params, ch, an = instance(nt=10, ne=4, trial=4)
    w, lam, r = w_weighted_search(0.5, ch, an, params)
    w_e1, _ = w_snr_max(0.5, ch, an, params)
    w_e2 = w_unconstrained_secrecy(0.5, ch, an, params)
    w_e2 = w_e2 * np.vdot(w_e2, w_e1) / abs(np.vdot(w_e2, w_e1))
    split = power_split(0.5, params)
    best = -1.0
    for i in range(params.d + 1):
        t = i / params.d
        c = t * w_e1 + (1 - t) * w_e2
        c /= np.linalg.norm(c)
        if snr_primary(c, split, ch, params) >= params.gamma_s_th:
            best = max(best, float(secrecy_rate(c, split, ch, an, params)))
    assert r == pytest.approx(best, rel=1e-12)
    assert snr_primary(w, split, ch, params) >= params.gamma_s_th


# -- closed-form phi -------------------------------------------------------------

def test_optimal_phi_worked_examples():
    phi = optimal_phi_ab(3.0, 0.3)
    assert phi.positive_rate
    assert phi.phi == pytest.approx((3 - math.sqrt(0.9 * 3.7)) / 2.1, rel=1e-12)
    assert phi.phi == pytest.approx(0.5596053528, abs=1e-9)
    assert abs(phi.phi - grid_search_phi_ab(3.0, 0.3, 1e-5)[0]) <= 1e-5

    phi = optimal_phi_ab(3.0, 2.0).phi
    assert phi == pytest.approx((math.sqrt(12) - 3) / 3, rel=1e-12)
    assert abs(phi - grid_search_phi_ab(3.0, 2.0, 1e-5)[0]) <= 1e-5
    assert rate_vs_phi(phi, 3.0, 2.0, clamp=False) == pytest.approx(0.10003137, abs=1e-7)


def test_optimal_phi_no_positive_rate():
    res = optimal_phi_ab(2.0, 2.0)
    assert not res.positive_rate
    assert res.phi == PHI_FLOOR
    res = optimal_phi_ab(1.0, 5.0)          # a - b + 1 < 0: no real critical point
    assert not res.positive_rate and PHI_FLOOR <= res.phi <= 1 - PHI_FLOOR


def test_optimal_phi_degenerate_beam():
    with pytest.raises(DegenerateBeamError):
        optimal_phi_ab(0.0, 0.0)


def test_optimal_phi_b_equals_one_branch():
    a = 7.0
    assert optimal_phi_ab(a, 1.0).phi == pytest.approx((a - 1) / (2 * a), rel=1e-14)
    # continuous across the branch
    assert optimal_phi_ab(a, 1.0 + 1e-7).phi == pytest.approx((a - 1) / (2 * a), rel=1e-6)
    assert abs(optimal_phi_ab(a, 1.0).phi - grid_search_phi_ab(a, 1.0, 1e-5)[0]) <= 1e-5


def test_optimal_phi_matches_textbook_form():
    for a, b in [(3.0, 0.3), (50.0, 4.0), (1e3, 0.01), (0.5, 0.2)]:
        textbook = (a - math.sqrt(a * b * (a - b + 1))) / (a - a * b)
        assert optimal_phi_ab(a, b).phi == pytest.approx(textbook, rel=1e-10)


log_uniform = st.floats(-2, 3).map(lambda e: 10.0 ** e)


@settings(max_examples=200, deadline=None)
@given(a=log_uniform, b=log_uniform)
def test_optimal_phi_grid_consistency(a, b):
    assume(a > b * (1 + 1e-6))
    phi = optimal_phi_ab(a, b).phi
    assert 0 < phi < 1
    grid_phi, grid_r = grid_search_phi_ab(a, b, 1e-4, clamp=False)
    assert abs(phi - grid_phi) <= 1e-4
    assert rate_vs_phi(phi, a, b, clamp=False) >= grid_r - 1e-9


@settings(max_examples=500, deadline=None)
@given(a=log_uniform, b=log_uniform)
def test_second_critical_point_outside_unit_interval(a, b):
    assume(abs(b - 1.0) > 1e-12)
    disc = a * b * (a - b + 1)
    assume(disc >= 0)
    phi2 = (a + math.sqrt(disc)) / (a - a * b)
    assert not 0 < phi2 < 1


# -- Algorithm -------------------------------------------------------------------

def test_defaults_converge_quickly():
    params = SystemParams()
    iters = []
    for k in range(40):
        sol = alternating_optimize(sample_channels(params, k), params)
        assert sol.status == 'converged'
        iters.append(iterations_to_tolerance(sol.trace, 1e-4))
    assert np.median(iters) <= 4


def test_infeasible_threshold():
    params = SystemParams(gamma_s_th_db=60.0)
    sol = alternating_optimize(sample_channels(params, 0), params)
    assert sol.status == 'infeasible'
    assert sol.w_opt is None and sol.r_sec == 0.0
    assert not sol.trace[-1].feasible


def test_qos_and_best_iterate():
    params = SystemParams(gamma_s_th_db=9.0)
    for k in range(30):
        ch = sample_channels(params, k)
        sol = alternating_optimize(ch, params)
        if not sol.feasible:
            continue
        split = power_split(sol.phi_opt, params)
        assert snr_primary(sol.w_opt, split, ch, params) >= params.gamma_s_th * (1 - 1e-9)
        assert sol.r_sec == max(t.r_sec for t in sol.trace) >= 0
        assert sol.r_sec == pytest.approx(
            float(secrecy_rate(sol.w_opt, split, ch, build_an_precoder(ch), params)), rel=1e-12)
        for t in sol.trace:
            assert not t.feasible or t.gamma_s >= params.gamma_s_th * (1 - 1e-9)


def test_call_budget_per_iteration(monkeypatch):
    calls = {'eig': 0, 'grid': []}
    real_eig, real_grid = opt.generalized_principal_eigenvector, opt.combination_grid

    def eig(pair):
        calls['eig'] += 1
        return real_eig(pair)

    def grid(u, v, d):
        out = real_grid(u, v, d)
        calls['grid'].append(out[0].size)
        return out

    monkeypatch.setattr(opt, 'generalized_principal_eigenvector', eig)
    monkeypatch.setattr(opt, 'combination_grid', grid)
    params = SystemParams()
    sol = alternating_optimize(sample_channels(params, 0), params)
    assert calls['eig'] == 2 * sol.iterations
    assert calls['grid'] == [params.d + 1] * sol.iterations


def test_project_phi_mode_keeps_qos():
    params = SystemParams(gamma_s_th_db=12.0)
    for k in range(20):
        ch = sample_channels(params, k)
        sol = alternating_optimize(ch, params, project_phi=True)
        if not sol.feasible:
            continue
        assert sol.gamma_s >= params.gamma_s_th * (1 - 1e-9)
        plain = alternating_optimize(ch, params)
        assert sol.r_sec >= plain.trace[0].r_sec


def test_min_feasible_phi_boundary(rng):
    params = SystemParams(gamma_s_th_db=3.0)
    ch = sample_channels(params, 0)
    w = ch.h1 / np.linalg.norm(ch.h1)
    phi = min_feasible_phi(w, ch, params)
    assert phi is not None
    assert snr_primary(w, power_split(phi, params), ch, params) == \
        pytest.approx(params.gamma_s_th, rel=1e-10)
    # a beam orthogonal to h1 never reaches the threshold
    w_perp = basis(params.nt, 0) - ch.h1.conj()[0] * ch.h1 / np.linalg.norm(ch.h1) ** 2
    w_perp /= np.linalg.norm(w_perp)
    assert min_feasible_phi(w_perp, ch, params) is None


def test_tighter_tolerance_needs_more_iterations():
    params = SystemParams()
    for k in range(20):
        sol = alternating_optimize(sample_channels(params, k), params)
        counts = [iterations_to_tolerance(sol.trace, t) for t in
                  (1e-2, 1e-4, 1e-6, 1e-8, 1e-10)]
        assert counts == sorted(counts)


def test_deterministic():
    params = SystemParams()
    ch = sample_channels(params, 9)
    s1, s2 = alternating_optimize(ch, params), alternating_optimize(ch, params)
    assert np.array_equal(s1.w_opt, s2.w_opt) and s1.phi_opt == s2.phi_opt
    assert s1.trace == s2.trace


def test_iterates_in_span_of_channels():
    """w_e1 and w_e2 lie in span{h1, h2} at every phi."""
    params, ch, an = instance(nt=6, ne=2, trial=3)
    q, _ = np.linalg.qr(np.stack([ch.h1, ch.h2], axis=1))
    for phi in (0.1, 0.5, 0.9):
        for w in (w_snr_max(phi, ch, an, params)[0], w_unconstrained_secrecy(phi, ch, an, params)):
            assert np.linalg.norm(w - q @ (q.conj().T @ w)) < 1e-10

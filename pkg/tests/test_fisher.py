import math

import numpy as np
import pytest

from wmetro import fisher
from wmetro.dephasing import dephased_qubit
from wmetro.errors import DeterministicOutcome, NotAState, StepTooLarge
from wmetro.fisher import FisherReport, Method
from wmetro.meters import gaussian_joint_state, position_grid
from wmetro.states import EQUATOR, make_initial_joint


def generator_variance_qfi(N):
    """4 Var(sigma_z n) on the initial product state, computed in the Fock basis."""
    psi0 = make_initial_joint(EQUATOR, math.sqrt(N)).amps
    n = np.arange(psi0.shape[1])
    gen = np.stack([-n, n]).astype(float)  # sigma_z = diag(-1 on |->, +1 on |+>) up to sign
    w = np.abs(psi0) ** 2
    return 4 * (np.sum(w * gen**2) - np.sum(w * gen) ** 2)


def test_report_crb_consistency():
    r = FisherReport.from_fisher(400.0, Method.SLD)
    assert r.crb * math.sqrt(r.fisher) == pytest.approx(1.0, abs=1e-10)
    assert FisherReport.from_fisher(0.0, "sld").crb == math.inf


def test_constant_family_has_no_information():
    psi = make_initial_joint(EQUATOR, 2.0)
    assert fisher.qfi_pure(lambda g: psi, 0.3, 1e-3).fisher == 0.0


def test_cat_family_against_generator_variance():
    N = 20.0
    oracle = generator_variance_qfi(N)
    assert oracle == pytest.approx(4 * (N**2 + N), rel=1e-10)
    for g in (0.0, 0.01, 0.2):
        F = fisher.qfi_pure(fisher.cat_family(N), g, fisher.default_step(N)).fisher
        assert F == pytest.approx(oracle, rel=5e-3)


def test_coherent_only_family():
    F = fisher.qfi_pure(fisher.coherent_family(25.0), 0.0, fisher.default_step(25.0))
    assert F.fisher == pytest.approx(100.0, rel=5e-3)
    assert F.method is Method.PURE_FD


def test_step_too_large_detected():
    with pytest.raises(StepTooLarge):
        fisher.qfi_pure(fisher.coherent_family(25.0), 0.0, 0.5)


def test_family_must_be_normalized():
    with pytest.raises(ValueError):
        fisher.qfi_pure(lambda g: 2 * make_initial_joint(EQUATOR, 1.0).amps, 0.0, 1e-3)


def test_gaussian_meter_closed_form():
    assert fisher.qfi_gaussian_meter(1, 1.0).fisher == 0.25
    assert fisher.qfi_gaussian_meter(4, 1.0).crb == pytest.approx(1.0, rel=1e-15)
    with pytest.raises(ValueError):
        fisher.qfi_gaussian_meter(0, 1.0)


def test_gaussian_meter_grid_oracle():
    N, sigma = 100, 0.5
    x = position_grid(sigma)
    single = fisher.qfi_pure(lambda d: gaussian_joint_state(sigma, d, x), 0.0, 1e-3 * sigma).fisher
    # independent photons: information adds
    assert N * single == pytest.approx(fisher.qfi_gaussian_meter(N, sigma).fisher, rel=1e-2)


def test_gaussian_grid_information_is_additive():
    sigma = 1.0
    x = position_grid(sigma, points=200, half_width=8.0)

    def pair(d):
        one = gaussian_joint_state(sigma, d, x).ravel()
        return np.kron(one, one)

    single = fisher.qfi_pure(lambda d: gaussian_joint_state(sigma, d, x), 0.1, 1e-3).fisher
    assert fisher.qfi_pure(pair, 0.1, 1e-3).fisher == pytest.approx(2 * single, rel=1e-8)


def test_sld_maximally_mixed():
    rho = np.eye(2) / 2
    assert fisher.qfi_mixed_sld(lambda g: rho, 0.0, 1e-3).fisher == 0.0


@pytest.mark.parametrize("phi2,expected", [(0.0, 400.0), (0.01, 400.0 * math.exp(-4.0))])
def test_sld_dephased(phi2, expected):
    N = 10.0
    F = fisher.qfi_mixed_sld(lambda g: dephased_qubit(N, g, phi2), 0.0, fisher.default_step(N)).fisher
    assert F == pytest.approx(expected, rel=5e-3)


def test_sld_pure_state_matches_pure_formula():
    # for a pure family, SLD QFI and the state-derivative form coincide
    def ket(g):
        return np.array([math.cos(g), math.sin(g) * np.exp(0.3j)])

    def rho(g):
        k = ket(g)
        return np.outer(k, k.conj())

    sld = fisher.qfi_mixed_sld(rho, 0.4, 1e-4).fisher
    pure = fisher.qfi_pure(ket, 0.4, 1e-4).fisher
    assert sld == pytest.approx(pure, rel=1e-8)
    assert pure == pytest.approx(4.0, rel=1e-8)


def test_sld_rejects_non_states():
    with pytest.raises(NotAState):
        fisher.qfi_mixed_sld(lambda g: np.eye(2), 0.0, 1e-3)
    with pytest.raises(NotAState):
        fisher.qfi_mixed_sld(lambda g: np.array([[1.2, 0], [0, -0.2]]), 0.0, 1e-3)
    with pytest.raises(NotAState):
        fisher.qfi_mixed_sld(lambda g: np.array([[0.5, 0.1], [0.3, 0.5]]), 0.0, 1e-3)


def test_cfi_smallg_is_exactly_heisenberg():
    N = 50.0
    for g in np.linspace(0.05, 1.5, 7) / N:
        assert fisher.cfi_postselection(N, g, model="smallg").fisher == pytest.approx(4 * N**2, rel=1e-10)


def test_cfi_exact_analytic_derivative_matches_finite_difference():
    from wmetro.analytic import postselect_probs

    N, g, h = 80.0, 0.006, 1e-7
    p, q = postselect_probs(N, g)
    dp = (postselect_probs(N, g + h)[0] - postselect_probs(N, g - h)[0]) / (2 * h)
    assert fisher.cfi_postselection(N, g).fisher == pytest.approx(dp**2 / (p * q), rel=1e-6)


def test_cfi_deterministic_at_zero():
    with pytest.raises(DeterministicOutcome):
        fisher.cfi_postselection(100.0, 0.0)


def test_cfi_desk_scale_value():
    assert fisher.cfi_postselection(120.0, 0.005).fisher == pytest.approx(57600.0, rel=2e-2)


@pytest.mark.parametrize("N", [10.0, 50.0, 120.0])
def test_cfi_bounded_by_qfi(N):
    g = 0.5 / N
    cfi = fisher.cfi_postselection(N, g).fisher
    qfi = fisher.qfi_pure(fisher.cat_family(N), g, fisher.default_step(N)).fisher
    assert cfi <= qfi * 1.01


def test_sld_noiseless_matches_cfi_smallg():
    N = 30.0
    sld = fisher.qfi_mixed_sld(lambda g: dephased_qubit(N, g, 0.0), 0.01, fisher.default_step(N)).fisher
    assert sld == pytest.approx(fisher.cfi_postselection(N, 0.01, model="smallg").fisher, rel=1e-2)


def test_scaling_slopes():
    Ns = np.array([25.0, 50.0, 100.0, 200.0, 400.0])
    cfi = [fisher.cfi_postselection(N, math.pi / (4 * N)).fisher for N in Ns]
    qfi = [fisher.qfi_pure(fisher.coherent_family(N), 0.0, fisher.default_step(N)).fisher for N in Ns]
    assert np.polyfit(np.log(Ns), np.log(cfi), 1)[0] == pytest.approx(2.0, abs=0.05)
    assert np.polyfit(np.log(Ns), np.log(qfi), 1)[0] == pytest.approx(1.0, abs=0.05)


@pytest.mark.parametrize("outcome", [+1, -1])
def test_meter_state_information_scales_linearly(outcome):
    Ns = np.array([25.0, 50.0, 100.0, 200.0, 400.0])
    F = [fisher.meter_state_qfi(N, math.pi / (4 * N), outcome).fisher for N in Ns]
    slope = np.polyfit(np.log(Ns), np.log(F), 1)[0]
    assert 0.85 < slope < 1.15

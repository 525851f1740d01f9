import cmath
import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st
from scipy.optimize import brentq, minimize_scalar

from wmetro import analytic
from wmetro.dephasing import dephased_overlap_sq
from wmetro.states import make_coherent, postselect_oracle, overlap_oracle

photons = st.floats(0.0, 500.0)
couplings = st.floats(-4.0, 4.0)


def test_overlap_at_zero_coupling():
    assert analytic.overlap_exact(37.0, 0.0) == 1.0
    assert analytic.overlap_leading(37.0, 0.0) == 1.0


def test_overlap_near_quarter_period():
    N, g = 100.0, math.pi / 200
    value = analytic.overlap_exact(N, g)
    assert value == pytest.approx(math.exp(N * (math.cos(g) - 1)) * math.cos(N * math.sin(g)), rel=1e-12)
    assert value == pytest.approx(6.4e-5, rel=0.01)
    assert value == pytest.approx(overlap_oracle(N, g).real, abs=1e-10)


def test_overlap_matches_oracle():
    assert analytic.overlap_exact(10.0, 0.05) == pytest.approx(overlap_oracle(10.0, 0.05).real, abs=1e-10)


def test_leading_order_zero():
    assert abs(analytic.overlap_leading(100.0, math.pi / 200)) < 1e-15


def test_leading_order_error_bound():
    # measured max on this window is 1.5e-4
    N = 100.0
    g = np.linspace(0, 3 / N, 5001)
    assert np.max(np.abs(analytic.overlap_leading(N, g) - analytic.overlap_exact(N, g))) < 5e-3


def test_overlap_result_wrapper():
    r = analytic.overlap(20.0, 0.1, "leading_order")
    assert r.regime is analytic.Regime.LEADING_ORDER
    assert r.value == analytic.overlap_leading(20.0, 0.1)


def test_postselect_at_zero():
    assert analytic.postselect_probs(120.0, 0.0) == (1.0, 0.0)


def test_postselect_matches_oracle():
    p_plus, p_minus = analytic.postselect_probs(50.0, 0.02)
    q_plus, q_minus = postselect_oracle(50.0, 0.02)
    assert p_plus == pytest.approx(q_plus, abs=1e-10)
    assert p_minus == pytest.approx(q_minus, abs=1e-10)


def test_postselect_literal_form():
    N, g = 33.0, 0.07
    literal = 0.5 + 0.25 * (cmath.exp(N * (cmath.exp(2j * g) - 1)) + cmath.exp(N * (cmath.exp(-2j * g) - 1))).real
    assert analytic.postselect_probs(N, g)[0] == pytest.approx(literal, abs=1e-14)


def test_smallg_tracks_exact_for_fig3():
    # |exact - cos^2| grows like N g^2; measured 3.5e-3 on g <= 1/N and 0.067 on g <= 3/N
    N = 120.0
    g = np.linspace(0, 1 / N, 2001)
    assert np.max(np.abs(analytic.postselect_prob_smallg(N, g) - analytic.postselect_probs(N, g)[0])) < 5e-3
    g = np.linspace(0, 3 / N, 2001)
    assert np.max(np.abs(analytic.postselect_prob_smallg(N, g) - analytic.postselect_probs(N, g)[0])) < 0.07


def test_smallg_values():
    assert analytic.postselect_prob_smallg(40.0, 0.0) == 1.0
    assert analytic.postselect_prob_smallg(40.0, math.pi / 80) < 1e-30


def test_coherent_self_overlap():
    assert analytic.coherent_self_overlap(5.0, 0.0) == 1.0
    assert abs(analytic.coherent_self_overlap(3.0, math.pi)) == pytest.approx(math.exp(-6.0), rel=1e-12)
    a = make_coherent(5.0)
    b = make_coherent(5.0 * cmath.exp(0.1j), a.dim)
    assert analytic.coherent_self_overlap(25.0, 0.1) == pytest.approx(np.vdot(a.amps, b.amps), abs=1e-10)


@given(photons, couplings)
def test_overlap_even_and_bounded(N, g):
    v = analytic.overlap_exact(N, g)
    assert v == analytic.overlap_exact(N, -g)
    assert abs(v) <= math.exp(N * (math.cos(g) - 1)) + 1e-15


@given(photons, couplings)
def test_postselect_is_distribution(N, g):
    p_plus, p_minus = analytic.postselect_probs(N, g)
    assert 0 <= p_plus <= 1 and 0 <= p_minus <= 1
    assert p_plus + p_minus == pytest.approx(1.0, abs=1e-15)


@given(st.floats(0.1, 50.0), st.floats(-2.0, 2.0))
def test_half_angle_identity_with_dephasing(N, g):
    assert dephased_overlap_sq(N, g, 0.0) == pytest.approx(float(analytic.postselect_prob_smallg(N, g)), abs=1e-12)


@pytest.mark.parametrize("N", [50.0, 100.0, 200.0])
def test_first_overlap_zero(N):
    lo, hi = 0.5 * math.pi / (2 * N), 1.5 * math.pi / (2 * N)
    root = brentq(lambda g: analytic.overlap_exact(N, g), lo, hi, xtol=1e-16)
    assert analytic.first_overlap_zero(N) == pytest.approx(root, abs=1e-14)
    assert abs(root - math.pi / (2 * N)) < 1 / N**2


@pytest.mark.parametrize("N", [50.0, 100.0, 200.0])
def test_postselect_dip_near_quarter_period(N):
    # exact p_+ only dips (minimum ~ 1 - e^{-2N g^2}) and the dip sits ~1.5/N^2 below pi/(2N)
    target = math.pi / (2 * N)
    res = minimize_scalar(
        lambda g: analytic.postselect_probs(N, g)[0], bracket=(0.8 * target, target, 1.2 * target), tol=1e-12
    )
    assert 0 < res.fun < 0.05
    assert abs(res.x - target) < 2 / N**2

import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from dsi1d import angular as ang
from dsi1d.exceptions import ChannelMismatchError, OverflowRangeError, ValidationError
from dsi1d.oracles import fd_angular_eigenvalues

NEUMANN = ang.CouplingPair(math.inf, math.inf)
DIRICHLET = ang.CouplingPair(0.0, 0.0)

# |g| below ~1e-150 with g < 0 puts the deep root beyond -1e300.
couplings = st.one_of(
    st.floats(-3.0, 3.0).filter(lambda g: g == 0 or abs(g) > 1e-140),
    st.just(0.0),
    st.just(math.inf),
)


def lams(c, count):
    return [ch.lam for ch in ang.angular_eigenvalues(c, count)]


def test_neumann_limit_is_nine_m_squared_from_zero():
    assert lams(NEUMANN, 6) == pytest.approx([9.0 * m * m for m in range(6)], abs=1e-10)


def test_dirichlet_limit_is_nine_m_squared_from_one():
    assert lams(DIRICHLET, 6) == pytest.approx([9.0 * m * m for m in range(1, 7)], abs=1e-10)


def test_negative_infinity_is_neumann():
    assert ang.CouplingPair(-math.inf, 0.0) == ang.CouplingPair(math.inf, 0.0)


def test_nan_coupling_rejected():
    with pytest.raises(ValidationError):
        ang.CouplingPair(math.nan, 1.0)


def test_count_must_be_positive():
    with pytest.raises(ValidationError):
        ang.angular_eigenvalues(NEUMANN, 0)


def test_mixed_dirichlet_neumann_is_quarter_wave():
    # Theta(0) = 0, Theta'(pi/3) = 0 gives sqrt(lam) = 3(m + 1/2).
    got = lams(ang.CouplingPair(0.0, math.inf), 4)
    assert got == pytest.approx([9.0 * (m + 0.5) ** 2 for m in range(4)], abs=1e-10)


@pytest.mark.parametrize("g", [-0.1, -0.3, -0.5, -0.52, -0.01, -1e-4])
def test_symmetric_roots_match_closed_forms(g):
    nu0, nu1 = ang.symmetric_channel_roots(g)
    chans = ang.angular_eigenvalues(ang.CouplingPair(g, g), 3)
    assert chans[0].lam == pytest.approx(-nu0 * nu0, rel=1e-10)
    assert chans[1].lam == pytest.approx(-nu1 * nu1, rel=1e-10)
    assert chans[2].lam > 0


@pytest.mark.parametrize("g", [-0.1, -0.3, -0.5])
def test_symmetric_roots_solve_coth_and_tanh(g):
    nu0, nu1 = ang.symmetric_channel_roots(g)
    h = math.pi / 6
    assert g == pytest.approx(-1.0 / (nu0 * math.tanh(h * nu0)), rel=1e-13)
    assert g == pytest.approx(-math.tanh(h * nu1) / nu1, rel=1e-13)
    assert nu0 > nu1 > 0


@pytest.mark.parametrize("g", [0.0, 0.1, -math.pi / 6, -1.0])
def test_symmetric_roots_outside_window_rejected(g):
    with pytest.raises(ValidationError):
        ang.symmetric_channel_roots(g)


def test_minus_one_pair_has_a_single_negative_channel():
    # Outside (-pi/6, 0) only the even coth branch survives.
    c = ang.CouplingPair(-1.0, -1.0)
    got = lams(c, 3)
    assert sum(lam < 0 for lam in got) == 1
    h = math.pi / 6
    nu0 = math.sqrt(-got[0])
    assert 1.0 * nu0 * math.tanh(h * nu0) == pytest.approx(1.0, rel=1e-12)
    assert got == pytest.approx(fd_angular_eigenvalues(c, count=3), abs=1e-6)


@pytest.mark.parametrize(
    "g1, g2, negatives, region",
    [
        (1.0, 1.0, 0, ang.PhaseRegion.UNBROKEN),
        (2.0, 2.0, 0, ang.PhaseRegion.UNBROKEN),
        (1.0, -2.0, 1, ang.PhaseRegion.D1_ONLY),
        (-1.0, -1.0, 1, ang.PhaseRegion.D0_ONLY),
        (-0.1, -0.1, 2, ang.PhaseRegion.D0_AND_D1),
        (math.inf, -0.3, 1, ang.PhaseRegion.D1_ONLY),
    ],
)
def test_phase_classification(g1, g2, negatives, region):
    verdict = ang.classify_phase(ang.CouplingPair(g1, g2))
    assert verdict.region is region
    assert len(verdict.channels) == negatives
    assert verdict.broken is (negatives > 0)
    assert verdict.consistent


@settings(max_examples=40)
@given(st.floats(-3.0, 3.0), st.floats(-3.0, 3.0))
def test_region_membership_predicts_negative_count(g1, g2):
    c = ang.CouplingPair(g1, g2)
    # Stay off the region boundaries where a root sits at lambda = 0.
    if min(abs(g1), abs(g2), abs(g1 + g2 + math.pi / 3), abs(abs(g1 - g2) - g1 - g2)) < 1e-3:
        return
    assert ang.classify_phase(c).consistent


@settings(max_examples=40)
@given(couplings, couplings)
def test_swap_invariance(g1, g2):
    a = lams(ang.CouplingPair(g1, g2), 4)
    b = lams(ang.CouplingPair(g2, g1), 4)
    assert a == pytest.approx(b, rel=1e-10, abs=1e-10)


@settings(max_examples=40)
@given(couplings, couplings)
def test_at_most_two_negative_and_third_positive(g1, g2):
    got = lams(ang.CouplingPair(g1, g2), 3)
    # Equal tiny couplings give a pair degenerate to the last ulp.
    assert all(a <= b + 1e-14 * abs(b) for a, b in zip(got, got[1:]))
    assert got[2] > 0


@settings(max_examples=30)
@given(couplings, couplings)
def test_count_below_matches_index(g1, g2):
    c = ang.CouplingPair(g1, g2)
    got = lams(c, 4)
    for m in range(3):
        if got[m + 1] - got[m] <= 1e-9 * abs(got[m]):
            continue
        mid = 0.5 * (got[m] + got[m + 1])
        assert ang.count_below(mid, c) == m + 1


@settings(max_examples=30)
@given(couplings, couplings)
def test_eigenvalues_solve_quantization_and_boundaries(g1, g2):
    c = ang.CouplingPair(g1, g2)
    for ch in ang.angular_eigenvalues(c, 4):
        assert abs(ang.quantization_residual(ch.lam, c)) < 1e-10
        r0, r1 = ang.boundary_residuals(ch)
        # Unit-norm Theta' scales like |lambda|^(3/4) for deep channels.
        scale = (1.0 + abs(ch.lam)) ** 0.75
        assert abs(r0) < 1e-9 * scale and abs(r1) < 1e-9 * scale


@pytest.mark.parametrize("g1, g2", [(-0.3, 0.4), (1.0, -2.0), (-1.0, -1.0), (0.5, 0.5), (-0.05, -0.07)])
def test_eigenfunctions_are_orthonormal(g1, g2):
    c = ang.CouplingPair(g1, g2)
    nodes, weights = np.polynomial.legendre.leggauss(200)
    th = 0.5 * ang.ANGLE_SPAN * (nodes + 1.0)
    w = 0.5 * ang.ANGLE_SPAN * weights
    vals = np.array([ang.eigenfunction(ch, c, th).real for ch in ang.angular_eigenvalues(c, 5)])
    assert np.abs((vals * w) @ vals.T - np.eye(5)).max() < 1e-10


def test_symmetric_channels_alternate_even_and_odd():
    c = ang.CouplingPair(-0.3, -0.3)
    th = np.linspace(0.0, ang.ANGLE_SPAN, 31)
    for m, ch in enumerate(ang.angular_eigenvalues(c, 4)):
        f = ang.eigenfunction(ch, c, th).real
        sign = 1 if m % 2 == 0 else -1
        np.testing.assert_allclose(f[::-1], sign * f, atol=1e-12)


def test_neumann_second_channel_is_cos_three_theta():
    ch = ang.angular_eigenvalues(NEUMANN, 2)[1]
    th = np.linspace(0.0, ang.ANGLE_SPAN, 17)
    f = ang.eigenfunction(ch, NEUMANN, th).real
    expected = math.sqrt(6.0 / math.pi) * np.cos(3.0 * th)
    np.testing.assert_allclose(np.abs(f), np.abs(expected), atol=1e-12)


def test_deep_channel_is_boundary_localized():
    c = ang.CouplingPair(-0.02, 5.0)
    ch = ang.angular_eigenvalues(c, 1)[0]
    assert ch.nu > 40
    f0 = abs(ang.eigenfunction(ch, c, 0.0))
    mid = abs(ang.eigenfunction(ch, c, ang.ANGLE_SPAN / 2))
    assert mid < 1e-10 * f0


@pytest.mark.parametrize("g", [-1e-3, -5.8e-29, -1e-140])
def test_tiny_attractive_coupling_gives_deep_root(g):
    # One end alone binds at nu = -1/g; the other end's correction is exponentially small.
    lam = ang.angular_eigenvalues(ang.CouplingPair(g, 0.0), 1)[0].lam
    assert lam == pytest.approx(-1.0 / g**2, rel=1e-12)


def test_unrepresentable_root_raises_range_error():
    with pytest.raises(OverflowRangeError):
        ang.angular_eigenvalues(ang.CouplingPair(-1e-200, 0.0), 1)


def test_eigenfunction_rejects_foreign_channel():
    ch = ang.angular_eigenvalues(ang.CouplingPair(-0.3, -0.3), 1)[0]
    with pytest.raises(ChannelMismatchError):
        ang.eigenfunction(ch, NEUMANN, 0.1)


@pytest.mark.parametrize("g1, g2", [(-2.0, -2.0), (-0.4, 1.7), (0.0, -0.9), (math.inf, 2.0)])
def test_root_finder_matches_finite_differences(g1, g2):
    c = ang.CouplingPair(g1, g2)
    assert lams(c, 5) == pytest.approx(fd_angular_eigenvalues(c, count=5), abs=1e-6)


@pytest.mark.parametrize("d", [-2.0, -0.7, 0.0, 1.3, 2.0])
def test_first_sheet_vanishes_on_phase_line(d):
    g1, g2 = -math.pi / 6 + d / 2, -math.pi / 6 - d / 2
    assert abs(ang.sheet_eigenvalue(ang.CouplingPair(g1, g2), 1)) < 1e-10
    up = ang.sheet_eigenvalue(ang.CouplingPair(g1 + 1e-3, g2 + 1e-3), 1)
    down = ang.sheet_eigenvalue(ang.CouplingPair(g1 - 1e-3, g2 - 1e-3), 1)
    # Sheet 1 is negative on the g1 + g2 > -pi/3 side of the line.
    assert down > 0 > up


def test_sheet_zero_absent_outside_d0():
    assert ang.sheet_eigenvalue(ang.CouplingPair(1.0, -2.0), 0) is None
    assert ang.sheet_eigenvalue(ang.CouplingPair(-0.1, -0.1), 0) < 0


def test_extension_window_flag():
    ch = ang.angular_eigenvalues(ang.CouplingPair(3.0, 3.0), 1)[0]
    assert 0 < ch.lam < 1
    assert ch.in_extension_window and not ch.subcritical


def test_dimer_extent():
    assert ang.dimer_extent(2.0, 3.0) == pytest.approx(math.sqrt(2) * 3.0 * math.sin(0.5), rel=1e-15)
    with pytest.raises(ValidationError):
        ang.dimer_extent(0.0, 1.0)

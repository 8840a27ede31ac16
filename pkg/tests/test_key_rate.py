import math

import numpy as np
import pytest

from qkdgain.channel_model import ClickModel, LinkBudget, click_model, db_to_efficiency
from qkdgain.exceptions import NoClicksError, ParameterDomainError
from qkdgain.key_rate import (
    BRASSARD_SALVAIL,
    BRASSARD_SALVAIL_TABLE,
    SHANNON,
    EcModel,
    binary_entropy,
    collision_prob_single,
    ec_factor,
    ec_model,
    gain_from_counts,
    gain_multi,
    gain_single,
    hoeffding_delta,
    shannon_ec_cost,
    single_photon_threshold,
    tau1,
    tau1_multiphoton,
)
from qkdgain.photon_sources import PhotonStats, WcpSource, photon_stats


def test_shannon_ec_cost_values():
    """Test the binary entropy at zero, maximum and a typical error rate"""
    assert shannon_ec_cost(0.0) == 0.0
    assert shannon_ec_cost(1.0) == 0.0
    assert shannon_ec_cost(0.5) == 1.0
    assert shannon_ec_cost(0.01) == pytest.approx(0.080793, abs=1e-6)


def test_shannon_ec_cost_rejects_invalid_error_rate():
    """Test that error rates outside [0, 1] are rejected"""
    with pytest.raises(ParameterDomainError):
        shannon_ec_cost(-0.01)


def test_binary_entropy_symmetric():
    """Test h(e) = h(1 - e)"""
    for e in (0.01, 0.1, 0.3):
        assert binary_entropy(e) == pytest.approx(binary_entropy(1.0 - e), abs=1e-15)


def test_ec_factor_reproduces_table_exactly():
    """Test that tabulated error rates return the tabulated factors"""
    for e, factor in BRASSARD_SALVAIL_TABLE:
        assert ec_factor(BRASSARD_SALVAIL, e) == factor

    assert BRASSARD_SALVAIL_TABLE == ((0.01, 1.16), (0.05, 1.16), (0.1, 1.22), (0.15, 1.35))


def test_ec_factor_interpolates_linearly():
    """Test interpolation between (0.1, 1.22) and (0.15, 1.35)"""
    assert ec_factor(BRASSARD_SALVAIL, 0.125) == pytest.approx(1.285, abs=1e-12)
    assert ec_factor(BRASSARD_SALVAIL, 0.03) == pytest.approx(1.16, abs=1e-12)


def test_ec_factor_clamps_outside_table():
    """Test endpoint values below 0.01 and above 0.15"""
    assert ec_factor(BRASSARD_SALVAIL, 0.0) == 1.16
    assert ec_factor(BRASSARD_SALVAIL, 0.001) == 1.16
    assert ec_factor(BRASSARD_SALVAIL, 0.3) == 1.35


def test_ec_factor_shannon_is_one():
    """Test the ideal error correction"""
    for e in (0.0, 0.05, 0.2, 0.5):
        assert ec_factor(SHANNON, e) == 1.0


def test_ec_model_lookup_and_validation():
    """Test mode lookup and table checks"""
    assert ec_model("shannon") is SHANNON
    assert ec_model("table") is BRASSARD_SALVAIL

    with pytest.raises(ParameterDomainError):
        ec_model("ldpc")
    with pytest.raises(ParameterDomainError):
        EcModel(table=((0.05, 1.2), (0.01, 1.1)))
    with pytest.raises(ParameterDomainError):
        EcModel(table=((0.01, 0.9),))


def test_ec_model_errors_name_the_offending_value():
    """Test that invalid modes and tables are reported by value"""
    with pytest.raises(ParameterDomainError) as exc_info:
        ec_model("fast")
    assert exc_info.value.value == "fast"
    assert "nan" not in str(exc_info.value)

    with pytest.raises(ParameterDomainError) as exc_info:
        EcModel(table=((0.05, 1.2), (0.01, 1.1)))
    assert exc_info.value.value == "0.05, 0.01"

    with pytest.raises(ParameterDomainError, match="at least one"):
        EcModel(table=())


def test_collision_prob_single_values():
    """Test p_c at zero error, saturation and e = 0.1"""
    assert collision_prob_single(0.0) == 0.5
    assert collision_prob_single(0.5) == 1.0
    assert collision_prob_single(0.8) == 1.0
    assert collision_prob_single(0.1) == pytest.approx(0.68, abs=1e-15)


def test_tau1_closed_form_spot_checks():
    """Test tau1 at zero error, saturation and e = 0.05"""
    assert tau1(0.0) == 0.0
    assert tau1(0.5) == 1.0
    assert tau1(0.7) == 1.0
    assert tau1(0.05) == pytest.approx(math.log2(1.19), abs=1e-12)
    assert tau1(0.05) == pytest.approx(0.25105, abs=1e-5)


def test_tau1_monotone():
    """Test that tau1 is nondecreasing on [0, 1/2] and constant above"""
    values = [tau1(float(e)) for e in np.linspace(0.0, 1.0, 201)]

    assert all(b >= a for a, b in zip(values, values[1:]))
    assert all(v == 1.0 for v in values[100:])


def test_tau1_multiphoton_limits():
    """Test reduction to tau1 and the fully tagged key"""
    for e in (0.0, 0.01, 0.08, 0.3):
        assert tau1_multiphoton(e, 0.0) == pytest.approx(tau1(e), abs=1e-12)
        assert tau1_multiphoton(e, 1.0) == 1.0


def test_tau1_multiphoton_spot_value():
    """Test e = 0.01 with half of the bits tagged"""
    expected = 1.0 + 0.5 * math.log2(0.5 + 0.04 - 0.0008)

    assert tau1_multiphoton(0.01, 0.5) == pytest.approx(expected, abs=1e-12)
    assert tau1_multiphoton(0.01, 0.5) == pytest.approx(0.55767, abs=1e-5)


def test_tau1_multiphoton_monotone_in_fraction():
    """Test that more tagged bits never shrink less"""
    fractions = np.linspace(0.0, 1.0, 101)
    for e in (0.0, 0.02, 0.1):
        values = [tau1_multiphoton(e, float(q)) for q in fractions]
        assert all(b >= a - 1e-15 for a, b in zip(values, values[1:]))


def test_gain_single_perfect_channel():
    """Test G = 1/2 for e = 0 and p_exp = 1"""
    point = gain_single(0.0, 1.0, BRASSARD_SALVAIL)

    assert point.gain_raw == 0.5
    assert point.secure


def test_gain_single_zero_error_is_half_p_exp():
    """Test G = p_exp / 2 exactly at zero error"""
    for p_exp in (1e-6, 0.01, 0.37):
        assert gain_single(0.0, p_exp, SHANNON).gain_raw == 0.5 * p_exp


def test_gain_single_insecure_at_fifteen_percent():
    """Test that 15% errors leave no key even with ideal error correction"""
    point = gain_single(0.15, 1.0, SHANNON)

    assert point.gain_raw < 0
    assert point.gain == 0.0
    assert not point.secure


def test_single_photon_threshold_near_eleven_percent():
    """Test the maximal tolerated error rate with ideal error correction"""
    threshold = single_photon_threshold(SHANNON)

    assert 0.10 <= threshold <= 0.12
    assert abs(gain_single(threshold, 1.0, SHANNON).gain_raw) < 1e-9


def test_single_photon_threshold_lower_with_real_error_correction():
    """Test that redundancy above the Shannon limit lowers the threshold"""
    assert single_photon_threshold(BRASSARD_SALVAIL) < single_photon_threshold(SHANNON)


def test_gain_multi_reduces_to_gain_single():
    """Test gain_multi with Sm = 0 against gain_single on random inputs"""
    rng = np.random.default_rng(7)
    for _ in range(1000):
        e = float(rng.uniform(0.0, 0.5))
        p_exp = float(10 ** rng.uniform(-8, 0))
        ec = SHANNON if rng.random() < 0.5 else BRASSARD_SALVAIL

        stats = PhotonStats(s0=0.0, s1=1.0, sm=0.0, p_post=1.0)
        click = ClickModel(p_signal=p_exp, p_dark=0.0, p_exp=p_exp, e=e)

        multi = gain_multi(stats, click, ec)
        single = gain_single(e, p_exp, ec)
        assert multi.gain_raw == pytest.approx(single.gain_raw, abs=1e-12)


def test_gain_multi_below_envelope():
    """Test gain_raw <= 1/2 p_post (p_exp - Sm) on random WCP operating points"""
    rng = np.random.default_rng(11)
    for _ in range(1000):
        source = WcpSource(mu=float(10 ** rng.uniform(-4, np.log10(2.0))))
        eta = float(10 ** rng.uniform(-6, 0))
        link = LinkBudget(
            alpha=0.0,
            receiver_loss=-10.0 * math.log10(eta),
            dark_b=float(rng.uniform(0.0, 1e-3)),
            c_align=float(rng.uniform(0.0, 0.1)),
        )
        ec = SHANNON if rng.random() < 0.5 else BRASSARD_SALVAIL

        stats = photon_stats(source)
        click = click_model(source, link)
        point = gain_multi(stats, click, ec)
        envelope = max(0.5 * stats.p_post * (click.p_exp - stats.sm), 0.0)

        assert point.gain_raw <= envelope + 1e-12
        assert 0.0 <= point.tau1 <= 1.0
        assert point.ec_cost >= 0.0
        assert point.gain <= 0.5 * point.p_post * point.p_exp


def test_gain_multi_wcp_spot_value():
    """Test G = (p_exp - Sm)/2 for WCP mu = 0.1 at eta = 0.05 without errors"""
    source = WcpSource(mu=0.1)
    link = LinkBudget(alpha=0.0, receiver_loss=-10.0 * math.log10(0.05))
    stats = photon_stats(source)
    click = click_model(source, link)

    point = gain_multi(stats, click, SHANNON)

    assert point.gain_raw == pytest.approx(0.5 * (click.p_exp - stats.sm), rel=1e-10)
    assert point.gain_raw == pytest.approx(1.54e-4, rel=1e-2)
    assert point.e == 0.0
    assert point.secure


def test_gain_multi_insecure_when_multiphotons_exceed_clicks():
    """Test that Sm >= p_exp leaves only the error-correction cost"""
    stats = PhotonStats(s0=0.5, s1=0.3, sm=0.2, p_post=1.0)
    leak = ec_factor(BRASSARD_SALVAIL, 0.01) * binary_entropy(0.01)
    for p_exp in (0.2, 0.1, 1e-3):
        click = ClickModel(p_signal=p_exp, p_dark=0.0, p_exp=p_exp, e=0.01)
        point = gain_multi(stats, click, BRASSARD_SALVAIL)

        assert point.gain_raw == pytest.approx(-0.5 * p_exp * leak, rel=1e-12)
        assert not point.secure
        assert point.tau1 == 1.0

    click = ClickModel(p_signal=1e-3, p_dark=0.0, p_exp=1e-3, e=0.01)
    point = gain_multi(stats, click, BRASSARD_SALVAIL)
    assert point.gain_raw == pytest.approx(-4.686e-05, rel=1e-3)


def test_gain_from_counts_multiphotons_cover_all_clicks():
    """Test that m >= n_sif gives zero surviving bits"""
    leak = ec_factor(SHANNON, 0.02) * binary_entropy(0.02)

    for m in (1e3, 5e3):
        point = gain_from_counts(1e6, 1e3, m, 0.02, SHANNON, p_post=0.5)

        assert point.gain_raw == pytest.approx(-0.5 * 0.5 * 1e-3 * leak, rel=1e-12)
        assert point.tau1 == 1.0
        assert not point.secure


def test_gain_multi_no_clicks():
    """Test that p_exp = 0 leaves the gain undefined"""
    stats = PhotonStats(s0=1.0, s1=0.0, sm=0.0, p_post=1.0)
    click = ClickModel(p_signal=0.0, p_dark=0.0, p_exp=0.0, e=0.0)

    with pytest.raises(NoClicksError):
        gain_multi(stats, click, SHANNON)


def test_gain_from_counts_matches_gain_multi():
    """Test the count-based prediction against the probability form"""
    rng = np.random.default_rng(3)
    n_tot = 1e8
    for _ in range(500):
        p_exp = float(10 ** rng.uniform(-5, -0.5))
        sm = float(rng.uniform(0.0, 1.2) * p_exp)
        e = float(rng.uniform(0.0, 0.2))
        p_post = float(rng.uniform(0.01, 1.0))

        stats = PhotonStats(s0=0.0, s1=1.0 - sm, sm=sm, p_post=p_post)
        click = ClickModel(p_signal=p_exp, p_dark=0.0, p_exp=p_exp, e=e)
        expected = gain_multi(stats, click, BRASSARD_SALVAIL)

        counted = gain_from_counts(
            n_tot, p_exp * n_tot, sm * n_tot, e, BRASSARD_SALVAIL, p_post=p_post
        )
        assert counted.gain_raw == pytest.approx(expected.gain_raw, abs=1e-12)


def test_gain_from_counts_rejects_inconsistent_counts():
    """Test that more clicks than signals are rejected"""
    with pytest.raises(ParameterDomainError):
        gain_from_counts(100, 200, 0, 0.01, SHANNON)
    with pytest.raises(ParameterDomainError):
        gain_from_counts(100, 50, -1, 0.01, SHANNON)


def test_hoeffding_delta_inverts_confidence_bound():
    """Test delta for n_tot = 1e6 at confidence 1 - e^-2"""
    delta = hoeffding_delta(1e6, -math.expm1(-2.0))

    assert delta == pytest.approx(1e-3, rel=1e-12)
    assert -math.expm1(-2.0) == pytest.approx(0.86466, abs=1e-5)


def test_hoeffding_delta_square_root_law():
    """Test that doubling n_tot scales delta by 1/sqrt(2)"""
    ratio = hoeffding_delta(2e4, 0.95) / hoeffding_delta(1e4, 0.95)

    assert ratio == pytest.approx(1.0 / math.sqrt(2.0), rel=1e-12)


def test_hoeffding_delta_vanishes_with_confidence():
    """Test delta -> 0 as P -> 0"""
    assert hoeffding_delta(1e4, 1e-12) < 1e-7


def test_hoeffding_delta_rejects_invalid_inputs():
    """Test P >= 1 and n_tot < 1"""
    with pytest.raises(ParameterDomainError):
        hoeffding_delta(1e4, 1.0)
    with pytest.raises(ParameterDomainError):
        hoeffding_delta(1e4, 0.0)
    with pytest.raises(ParameterDomainError):
        hoeffding_delta(0.5, 0.9)


def test_rate_point_fields_are_consistent():
    """Test gain = max(gain_raw, 0) and the reported observables"""
    link = LinkBudget(alpha=0.2, length=20.0, receiver_loss=1.0, eta_b=0.18, dark_b=2e-4)
    source = WcpSource(mu=0.1)
    point = gain_multi(photon_stats(source), click_model(source, link), BRASSARD_SALVAIL)

    assert point.gain == max(point.gain_raw, 0.0)
    assert point.secure == (point.gain_raw > 0)
    assert point.p_post == 1.0
    assert point.sm == pytest.approx(1.0 - 1.1 * math.exp(-0.1), abs=1e-12)
    assert point.p_signal == pytest.approx(
        -math.expm1(-0.1 * 0.18 * db_to_efficiency(5.0)), rel=1e-12
    )

import numpy as np
import pytest

from csifb.codec.schemes import FeedbackCodec
from csifb.covariance.klt import KltOperator
from csifb.errors import DimensionError
from csifb.linksim.config import LinkConfig
from csifb.linksim.drop import drop_users
from csifb.linksim.modem import (
    BitTally,
    awgn_16qam,
    beamforming_ber,
    demodulate,
    modulate,
    random_bits,
    transmit_16qam,
)
from csifb.linksim.precoding import (
    PrecodedFrame,
    aggregate_channels,
    effective_gains,
    measure_sinr,
    zf_precoder,
)
from csifb.linksim.runner import LinkContext, RowSpec, run_drop, run_drops
from csifb.metrics.ber import ber_16qam
from csifb.utils.helpers import complex_normal

from .conftest import make_model


def test_link_defaults():
    link = LinkConfig()
    assert link.noise_power_dbm == pytest.approx(-104.0)
    assert link.pathloss_db(1.0) == pytest.approx(-123.0)
    assert link.pathloss_db(0.1) == pytest.approx(-85.4)
    assert link.power_per_subcarrier_mw(16) == pytest.approx(
        10**4.3 / 16
    )
    with pytest.raises(DimensionError):
        LinkConfig(min_distance_km=0.6)
    with pytest.raises(DimensionError):
        LinkConfig(users=0)


def test_drop_is_deterministic_and_inside():
    link = LinkConfig(users=50)
    first = drop_users(link, np.random.default_rng(3))
    second = drop_users(link, np.random.default_rng(3))
    np.testing.assert_array_equal(first.positions, second.positions)
    assert first.users == 50
    assert np.all(np.abs(first.positions) <= 0.5)
    assert np.all(first.distances >= link.min_distance_km)
    np.testing.assert_allclose(
        first.sigma_h2, 10 ** (first.pathloss_db / 10)
    )


def test_zf_perfect_csi_is_orthogonal(rng):
    h = complex_normal(rng, (4, 3, 6))
    frame = zf_precoder(h, power=2.0)
    gains = effective_gains(h, frame)
    for n in range(4):
        off = gains[n] - np.diag(np.diag(gains[n]))
        assert np.max(np.abs(off)) <= 1e-10 * np.max(np.abs(gains[n]))
    np.testing.assert_allclose(
        np.linalg.norm(frame.precoders, axis=1), 1.0, rtol=1e-12
    )
    assert np.all(frame.transmit_power() <= 2.0 * (1 + 1e-10))
    assert frame.regularized == 0


def test_zf_sinr_without_interference(rng):
    h = complex_normal(rng, (1, 2, 4))
    frame = zf_precoder(h, power=1.0)
    sinr = measure_sinr(h, frame, noise_power=0.1)
    expected = 0.5 * np.abs(np.diag(effective_gains(h, frame)[0])) ** 2 / 0.1
    np.testing.assert_allclose(sinr[0], expected, rtol=1e-9)


def test_zf_single_row_is_matched_filter(rng):
    h = complex_normal(rng, (1, 1, 4))
    w = zf_precoder(h, power=1.0).precoders[0, :, 0]
    direction = h[0, 0].conj() / np.linalg.norm(h[0, 0])
    assert abs(np.vdot(direction, w)) == pytest.approx(1.0)


def test_zf_zero_power(rng):
    h = complex_normal(rng, (2, 2, 4))
    sinr = measure_sinr(h, zf_precoder(h, power=0.0), noise_power=1.0)
    np.testing.assert_array_equal(sinr, 0.0)


def test_zf_regularizes_rank_deficient(rng):
    row = complex_normal(rng, (1, 1, 4))
    h = np.concatenate([row, row], axis=1)
    frame = zf_precoder(h, power=1.0)
    assert frame.regularized == 1
    assert np.all(np.isfinite(frame.precoders))


def test_zf_too_many_streams(rng):
    with pytest.raises(DimensionError):
        zf_precoder(complex_normal(rng, (1, 5, 4)), power=1.0)


def test_imperfect_csi_leaks(rng):
    h = complex_normal(rng, (1, 2, 4))
    estimate = h + 0.3 * complex_normal(rng, h.shape)
    gains = effective_gains(h, zf_precoder(estimate, power=1.0))
    assert abs(gains[0, 0, 1]) > 0.0
    assert abs(gains[0, 1, 0]) > 0.0


def test_hand_computed_sinr():
    frame = PrecodedFrame(
        precoders=np.eye(2)[None, :, :].astype(complex),
        powers=np.ones((1, 2)),
    )
    h = np.array([[[1.0, 0.5], [0.2, 1.0]]], dtype=complex)
    sinr = measure_sinr(h, frame, noise_power=0.1)
    np.testing.assert_allclose(sinr[0], [1 / 0.35, 1 / 0.14])


def test_aggregate_channels():
    first = np.zeros((3, 2, 4))
    second = np.ones((3, 1, 4))
    assert aggregate_channels([first, second]).shape == (3, 3, 4)


def test_modulation_round_trip(rng):
    bits = random_bits(rng, (3, 400))
    symbols = modulate(bits)
    assert symbols.shape == (3, 100)
    assert np.mean(np.abs(symbols) ** 2) == pytest.approx(1.0, rel=0.2)
    np.testing.assert_array_equal(demodulate(symbols), bits)


def test_gray_mapping():
    symbols = modulate(np.array([0, 0, 1, 0, 0, 1, 1, 1]))
    scale = np.sqrt(10)
    np.testing.assert_allclose(symbols * scale, [-3 + 3j, -1 + 1j])


def test_noiseless_transmission(rng):
    h = complex_normal(rng, (2, 2, 4))
    frame = zf_precoder(h, power=1.0)
    tally = transmit_16qam(frame, h, 0.0, 50, rng)
    assert tally.errors == 0
    assert tally.bits == 2 * 2 * 50 * 4


def test_zero_power_transmission_guesses(rng):
    h = complex_normal(rng, (1, 2, 4))
    frame = zf_precoder(h, power=0.0)
    tally = transmit_16qam(frame, h, 1.0, 5000, rng)
    stderr = np.sqrt(0.25 / tally.bits)
    assert abs(tally.ber - 0.5) <= 4 * stderr


@pytest.mark.parametrize("mu", [5.0, 10.0, 20.0])
def test_awgn_matches_closed_form(mu):
    rng = np.random.default_rng(int(mu))
    tally = awgn_16qam(np.sqrt(mu), 1.0, 250_000, rng)
    expected = ber_16qam(mu)
    stderr = np.sqrt(expected * (1 - expected) / tally.bits)
    assert tally.bits == 1_000_000
    assert abs(tally.ber - expected) <= 3 * stderr


def test_bit_tally_sum():
    total = BitTally(1, 10) + BitTally(2, 30)
    assert (total.errors, total.bits) == (3, 40)
    assert total.ber == pytest.approx(0.075)
    assert BitTally(0, 0).ber == 0.0


def test_jensen_bound_holds():
    model, generator = make_model(4, 2, (2, 1, 0.5), (1, 1, 0.5))
    codec = FeedbackCodec("SCF-f", model.n_f, model.n_s, KltOperator(model))
    rng = np.random.default_rng(12)
    channels = generator.draw_batch(rng, 400)
    for m in (1, 2, model.n):
        for sigma2 in (1.0, 2.0):
            report = beamforming_ber(
                channels, codec, m, sigma2, 100, rng, bound_source=model
            )
            assert report.trials == 400
            assert (
                report.ber_bound
                <= report.ber_empirical + 2 * report.standard_error
            )


def tiny_context(rows, q=8, seed=5):
    model, generator = make_model(4, 2, (2, 2, 0.8), (1, 1, 0.5))
    klt = KltOperator(model)
    codecs = {
        name: FeedbackCodec(
            name, 4, 4, klt if name.startswith("SCF") else None
        )
        for name in {row.scheme for row in rows}
    }
    context = LinkContext(
        generator=generator,
        link=LinkConfig(users=2),
        codecs=codecs,
        q=q,
        symbols_per_drop=4,
        seed=seed,
        rows=rows,
    )
    return context, model


def test_run_drops_thread_count_does_not_matter():
    rows = [RowSpec("FULL", 16), RowSpec("SCF-f", 4), RowSpec("TCF-v1", 4)]
    context, _ = tiny_context(rows)
    serial = run_drops(context, 4, threads=1)
    pooled = run_drops(context, 4, threads=3)
    for a, b in zip(serial, pooled):
        assert a == b
        assert a.drops == 4


def test_full_feedback_has_quantizer_floor():
    context, model = tiny_context([RowSpec("FULL", 16)], q=12)
    (tally,) = run_drops(context, 3)
    assert tally.nmse_quantized < 1e-4
    assert tally.nmse_unquantized < 1e-20
    assert tally.se > 0


def test_scf_below_threshold_is_lossless():
    context, model = tiny_context([RowSpec("SCF-f", 8)])
    assert model.rank() == 8
    (tally,) = run_drops(context, 3)
    assert tally.nmse_unquantized < 1e-6


def test_failing_row_is_recorded():
    # FCF-f2 needs m to be a multiple of N_r * N_t = 4
    context, _ = tiny_context([RowSpec("FCF-f2", 3), RowSpec("FULL", 16)])
    failed, ok = run_drop(context, 0)
    assert failed.error is not None
    assert failed.drops == 0
    assert ok.error is None
    assert ok.drops == 1

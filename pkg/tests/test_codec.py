import numpy as np
import pytest

from csifb.codec.bits import (
    admissible_m,
    budget_for_bits,
    budget_for_target,
    feedback_bits,
    index_bits,
)
from csifb.codec.frame import (
    HEADER,
    SCALE,
    decode_frame,
    encode_frame,
    index_width,
    pack_uints,
    unpack_uints,
)
from csifb.codec.permutation import check_permutation, permute_model
from csifb.codec.quantizer import Quantizer, quantize_feedback
from csifb.codec.registry import SCHEMES, get_scheme
from csifb.codec.schemes import FeedbackCodec, desparsify, sparsify
from csifb.codec.selection import (
    FCF_EQUIDISTANT,
    PCA_FIXED,
    TCF_FIXED_BOUNDARY,
    VARIABLE_MAGNITUDE,
    CompressedFeedback,
    SelectionPolicy,
    equidistant_grid,
    fixed_positions,
    select,
)
from csifb.covariance.klt import KltOperator
from csifb.errors import (
    BudgetError,
    ConfigError,
    DimensionError,
    FrameError,
    UnboundModelError,
)
from csifb.metrics.nmse import nmse_analytic, nmse_empirical
from csifb.utils.helpers import complex_normal

from .conftest import make_model


def codec_for(name, model):
    klt = KltOperator(model) if get_scheme(name).needs_model else None
    return FeedbackCodec(name, model.n_f, model.n_s, klt)


def relative_error(h, h_tilde):
    return np.linalg.norm(h - h_tilde) / np.linalg.norm(h)


# sparsify / desparsify


def test_fcf_representation_is_identity(rng):
    h = complex_normal(rng, (16,))
    np.testing.assert_array_equal(sparsify(h, "fcf"), h)


def test_tcf_representation_is_unitary(rng):
    h = complex_normal(rng, (16,))
    s = sparsify(h, "tcf")
    assert np.linalg.norm(s) == pytest.approx(np.linalg.norm(h))
    assert relative_error(h, desparsify(s, "tcf")) < 1e-10


def test_scf_preserves_norm(toy, rng):
    model, generator = toy
    h = generator.draw(rng).h
    s = sparsify(h, "scf", KltOperator(model))
    assert np.linalg.norm(s) == pytest.approx(
        np.linalg.norm(h), rel=1e-10
    )


def test_scf_without_model():
    with pytest.raises(UnboundModelError):
        sparsify(np.zeros(4), "scf")
    with pytest.raises(UnboundModelError):
        FeedbackCodec("SCF-f", 2, 2)


# selection


def test_variable_magnitude_example():
    fb = select(
        np.array([0, 5, 0, -3]), SelectionPolicy(VARIABLE_MAGNITUDE, 2)
    )
    np.testing.assert_array_equal(fb.coefficients, [5, -3])
    # 0-based positions of the 1-based [2, 4]
    np.testing.assert_array_equal(fb.indices, [1, 3])


def test_tcf_boundary_positions():
    even = fixed_positions(SelectionPolicy(TCF_FIXED_BOUNDARY, 4), 8)
    np.testing.assert_array_equal(even, [0, 1, 6, 7])
    odd = fixed_positions(SelectionPolicy(TCF_FIXED_BOUNDARY, 3), 8)
    np.testing.assert_array_equal(odd, [0, 1, 7])


def test_pca_positions():
    positions = fixed_positions(SelectionPolicy(PCA_FIXED, 3), 8)
    np.testing.assert_array_equal(positions, [0, 1, 2])


def test_equidistant_grid_includes_endpoints():
    np.testing.assert_array_equal(equidistant_grid(2, 16), [0, 15])
    np.testing.assert_array_equal(equidistant_grid(4, 16), [0, 5, 10, 15])
    np.testing.assert_array_equal(equidistant_grid(1, 16), [7])
    np.testing.assert_array_equal(equidistant_grid(16, 16), np.arange(16))


def test_fcf_positions_cover_every_track():
    # N_f = 4, two spatial entries, two kept subcarriers per track
    positions = fixed_positions(SelectionPolicy(FCF_EQUIDISTANT, 4), 8, 4)
    np.testing.assert_array_equal(positions, [0, 3, 4, 7])
    with pytest.raises(DimensionError):
        fixed_positions(SelectionPolicy(FCF_EQUIDISTANT, 3), 8, 4)


def test_full_selection_omits_indices():
    s = np.arange(6)
    for kind in (PCA_FIXED, TCF_FIXED_BOUNDARY):
        fb = select(s, SelectionPolicy(kind, 6))
        assert fb.indices is None
        np.testing.assert_array_equal(np.sort(fb.coefficients.real), s)


def test_selection_rejects_large_m():
    with pytest.raises(DimensionError):
        select(np.zeros(4), SelectionPolicy(PCA_FIXED, 5))
    with pytest.raises(DimensionError):
        SelectionPolicy(PCA_FIXED, 0)


def test_feedback_indices_validated():
    with pytest.raises(DimensionError):
        CompressedFeedback("TCF-v1", VARIABLE_MAGNITUDE, 4, [1, 2], [2, 1])
    with pytest.raises(DimensionError):
        CompressedFeedback("TCF-v1", VARIABLE_MAGNITUDE, 4, [1, 2], [1, 4])


# quantizer


def test_quantizer_step_bound(rng):
    values = np.exp(1j * rng.uniform(0, 2 * np.pi, 200))
    quantizer = Quantizer(16)
    codes, scale = quantizer.encode(values)
    decoded = quantizer.decode(codes, scale)
    assert np.max(np.abs(decoded.real - values.real)) <= 2.0**-15
    assert np.max(np.abs(decoded.imag - values.imag)) <= 2.0**-15


def test_quantizer_error_within_half_step(rng):
    values = complex_normal(rng, (1000,))
    fb = quantize_feedback(
        CompressedFeedback("SCF-f", PCA_FIXED, 1000, values), 12
    )
    bound = fb.scale / (2**12 - 1) * (1 + 1e-9)
    assert np.max(np.abs(fb.coefficients.real - values.real)) <= bound
    assert np.max(np.abs(fb.coefficients.imag - values.imag)) <= bound
    assert fb.codes.shape == (1000, 2)
    assert fb.codes.max() <= 2**12 - 2
    assert fb.quantized


def test_quantizer_keeps_exact_zero():
    quantizer = Quantizer(12)
    codes, scale = quantizer.encode(np.array([1 + 1j, 0, 0.5j]))
    decoded = quantizer.decode(codes, scale)
    assert decoded[1] == 0
    assert decoded[2].real == 0
    assert abs(decoded[0] - (1 + 1j)) <= np.sqrt(2) / 4095 * (1 + 1e-9)


def test_quantizer_rounds_tiny_values_to_zero():
    values = np.array([3.0 - 2.0j, 1e-12, -1e-12j])
    fb = quantize_feedback(
        CompressedFeedback("SCF-f", PCA_FIXED, 3, values), 12
    )
    np.testing.assert_array_equal(fb.coefficients[1:], [0, 0])


def test_quantizer_one_bit_sends_zero():
    quantizer = Quantizer(1)
    codes, scale = quantizer.encode(np.array([1 - 1j, 0.2]))
    np.testing.assert_array_equal(codes, 0)
    np.testing.assert_array_equal(quantizer.decode(codes, scale), [0, 0])


def test_quantizer_rejects_all_ones_code():
    quantizer = Quantizer(4)
    with pytest.raises(DimensionError):
        quantizer.decode(np.array([[15, 0]]), 1.0)


def test_quantizer_zero_vector():
    fb = quantize_feedback(
        CompressedFeedback("SCF-f", PCA_FIXED, 3, np.zeros(3)), 8
    )
    assert fb.scale == 0.0
    np.testing.assert_array_equal(fb.coefficients, np.zeros(3))


def test_quantizer_limits():
    with pytest.raises(DimensionError):
        Quantizer(0)
    with pytest.raises(DimensionError):
        Quantizer(33)


# bit accounting


def test_fixed_bits():
    budget = feedback_bits("SCF-f", 64, 12, 512)
    assert budget.total_bits == 1536
    assert budget.index_bits == 0
    assert budget.gamma == 8.0
    assert budget.gamma_fb == 8.0
    assert budget.feedback_reduction_pct == pytest.approx(87.5)


def test_full_bits():
    budget = feedback_bits("FULL", 1, 12, 4096)
    assert budget.m == 4096
    assert budget.total_bits == 98304
    assert budget.uncompressed_bits == budget.total_bits
    assert budget.gamma_fb == 1.0
    assert budget.feedback_reduction_pct == 0.0


def test_variable_bits():
    assert index_bits(4, 2) == 8
    budget = feedback_bits("TCF-v1", 2, 1, 4)
    assert budget.total_bits == 12
    assert budget.gamma_fb == pytest.approx(8 / 12)
    assert index_bits(4, 0) == 0


def test_gamma_fb_increases_as_m_decreases():
    for name in ("SCF-f", "TCF-f2", "TCF-v1"):
        ratios = [feedback_bits(name, m, 12, 64).gamma_fb for m in (64, 32, 8)]
        assert ratios[0] < ratios[1] < ratios[2]


def test_budget_for_bits():
    budget = budget_for_bits("SCF-f", 100, 64, 12)
    assert budget.m == 4
    assert budget.total_bits == 96
    with pytest.raises(BudgetError):
        budget_for_bits("SCF-f", 10, 64, 12)


def test_budget_for_target():
    assert budget_for_target("SCF-f", 4, 512, 12, 32).m == 128
    fcf = budget_for_target("FCF-f2", 4, 512, 12, 32)
    assert fcf.m % 32 == 0
    assert fcf.gamma_fb >= 4
    variable = budget_for_target("TCF-v1", 4, 512, 12, 32)
    assert variable.gamma_fb >= 4
    assert variable.m < 128
    assert admissible_m(get_scheme("FCF-f2"), 16, 4) == [4, 8, 12, 16]


def test_unknown_scheme():
    with pytest.raises(ConfigError):
        get_scheme("XYZ")


# compress / recover


@pytest.mark.parametrize("name", list(SCHEMES))
def test_full_size_round_trip(name, toy, rng):
    model, generator = toy
    codec = codec_for(name, model)
    h = generator.draw(rng).h
    h_tilde = codec.recover(codec.compress(h, model.n))
    assert relative_error(h, h_tilde) < 1e-10


def test_scf_exact_at_rank(desk):
    model, generator = desk
    codec = codec_for("SCF-f", model)
    rng = np.random.default_rng(1)
    rank = model.rank()
    assert rank == 96
    worst = 0.0
    for _ in range(1000):
        h = generator.draw(rng).h
        h_tilde = codec.recover(codec.compress(h, rank))
        worst = max(worst, relative_error(h, h_tilde))
    assert worst <= 1e-8


def test_scf_monotone_in_m(toy):
    model, generator = toy
    codec = codec_for("SCF-f", model)
    rng = np.random.default_rng(2)
    batch = generator.draw_batch(rng, 50)
    errors = []
    for m in (1, 4, 8, 16, 24, 48):
        recovered = np.stack(
            [codec.recover(codec.compress(h, m)) for h in batch]
        )
        errors.append(nmse_empirical(batch, recovered))
    assert all(b <= a + 1e-12 for a, b in zip(errors, errors[1:]))
    assert errors[-2] < 1e-20


def test_analytic_nmse_agrees_with_empirical(small):
    model, generator = small
    klt = KltOperator(model)
    rng = np.random.default_rng(4)
    batch = generator.draw_batch(rng, 10_000)
    s = klt.forward(batch)
    for m in (model.n // 16, model.n // 8, model.n // 4):
        analytic = nmse_analytic(model, m)
        assert analytic >= 1e-3
        kept = s.copy()
        kept[:, m:] = 0.0
        empirical = nmse_empirical(batch, klt.inverse(kept))
        assert abs(empirical - analytic) / analytic <= 0.03


def test_variable_beats_fixed_tcf(toy, rng):
    model, generator = toy
    fixed = codec_for("TCF-f1", model)
    variable = codec_for("TCF-v1", model)
    for _ in range(10):
        h = generator.draw(rng).h
        for m in (4, 12):
            fixed_error = relative_error(
                h, fixed.recover(fixed.compress(h, m))
            )
            variable_error = relative_error(
                h, variable.recover(variable.compress(h, m))
            )
            assert variable_error <= fixed_error + 1e-12


def test_fcf_recovers_flat_channel():
    model, generator = make_model(8, 1, (2, 1, 0.5), (1, 1, 0.5))
    h = generator.draw(np.random.default_rng(9)).h
    codec = codec_for("FCF-f2", model)
    for m in (4, 6):
        assert relative_error(h, codec.recover(codec.compress(h, m))) < 1e-8


def test_quantized_round_trip_is_close(toy, rng):
    model, generator = toy
    codec = codec_for("SCF-f", model)
    h = generator.draw(rng).h
    fb = codec.compress(h, model.n, q=12)
    assert relative_error(h, codec.recover(fb)) < 1e-2


def test_recover_rejects_foreign_feedback(toy, rng):
    model, generator = toy
    scf = codec_for("SCF-f", model)
    tcf = codec_for("TCF-f1", model)
    fb = scf.compress(generator.draw(rng).h, 4)
    with pytest.raises(DimensionError):
        tcf.recover(fb)


# binary frame


def test_pack_uints_lsb_first():
    assert pack_uints(np.array([1, 2]), 2) == bytes([0b1001])
    np.testing.assert_array_equal(
        unpack_uints(bytes([0b1001]), 2, 2), [1, 2]
    )


def test_index_width():
    assert index_width(1) == 1
    assert index_width(2) == 1
    assert index_width(512) == 9
    assert index_width(513) == 10


def test_frame_layout_quantized_variable(toy, rng):
    model, generator = toy
    codec = codec_for("TCF-v1", model)
    fb = codec.compress(generator.draw(rng).h, 5, q=12)
    frame = encode_frame(fb)
    payload = (2 * 5 * 12 + 7) // 8
    indices = (5 * index_width(model.n) + 7) // 8
    assert len(frame) == HEADER.size + SCALE.size + payload + indices
    code, m, q, flags = HEADER.unpack_from(frame, 0)
    assert (code, m, q) == (SCHEMES["TCF-v1"].code, 5, 12)
    assert flags & 0x03 == 0x03

    decoded = decode_frame(frame, model.n)
    assert decoded.scheme == "TCF-v1"
    np.testing.assert_array_equal(decoded.indices, fb.indices)
    np.testing.assert_array_equal(decoded.codes, fb.codes)
    np.testing.assert_allclose(decoded.coefficients, fb.coefficients)
    np.testing.assert_allclose(
        codec.recover(decoded), codec.recover(fb), atol=1e-12
    )


def test_frame_unquantized_fixed(toy, rng):
    model, generator = toy
    codec = codec_for("SCF-f", model)
    fb = codec.compress(generator.draw(rng).h, 3)
    frame = encode_frame(fb)
    assert len(frame) == HEADER.size + SCALE.size + 16 * 3
    decoded = decode_frame(frame, model.n)
    assert decoded.indices is None
    assert not decoded.quantized
    np.testing.assert_array_equal(decoded.coefficients, fb.coefficients)


def test_frame_errors(toy, rng):
    model, generator = toy
    fb = codec_for("TCF-v1", model).compress(generator.draw(rng).h, 5, q=8)
    frame = encode_frame(fb)
    with pytest.raises(FrameError):
        decode_frame(frame[:-1], model.n)
    with pytest.raises(FrameError):
        decode_frame(frame + b"\x00", model.n)
    with pytest.raises(FrameError):
        decode_frame(frame[:5], model.n)
    with pytest.raises(FrameError):
        decode_frame(bytes([200]) + frame[1:], model.n)


# permutation invariance


def test_identity_permutation(toy, rng):
    model, generator = toy
    h = generator.draw(rng).h
    permuted, klt = permute_model(h, np.arange(model.n), model)
    np.testing.assert_array_equal(permuted, h)
    np.testing.assert_allclose(klt.eigenvalues, model.eigenvalues, atol=1e-9)


def test_permutation_keeps_recovery_error(toy):
    model, generator = toy
    rng = np.random.default_rng(8)
    original = codec_for("SCF-f", model)
    values = model.eigenvalues
    # cut points where the kept subspace is unambiguous
    cuts = [
        m
        for m in (2, 6, 12, 18, model.rank())
        if values[m - 1] > values[m] * (1 + 1e-6)
    ]
    assert cuts
    for _ in range(20):
        perm = rng.permutation(model.n)
        h = generator.draw(rng).h
        h_perm, klt = permute_model(h, perm, model)
        permuted = FeedbackCodec("SCF-f", model.n_f, model.n_s, klt)
        for m in cuts:
            base = relative_error(h, original.recover(original.compress(h, m)))
            moved = relative_error(
                h_perm, permuted.recover(permuted.compress(h_perm, m))
            )
            assert abs(base**2 - moved**2) <= 1e-10


def test_invalid_permutation(toy):
    model, _ = toy
    with pytest.raises(DimensionError):
        check_permutation(np.zeros(model.n, dtype=int), model.n)
    with pytest.raises(DimensionError):
        permute_model(np.zeros(model.n), np.arange(3), model)

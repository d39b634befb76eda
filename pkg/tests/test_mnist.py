import os

import numpy as np
import pytest

from equivarifier.actions import block_shift_action
from equivarifier.errors import (
    ConfigError,
    DataConsistencyError,
    DataFormatError,
    DataIOError,
    LabelError,
    ShapeError,
    TrainingError,
)
from equivarifier.groups import cyclic_group
from equivarifier.mnist import (
    LabeledDataset,
    MnistSamples,
    ModelConfig,
    build_model,
    build_reference_model,
    compare_training_policies,
    decode_label,
    digit_marginal,
    encode_label,
    encode_labels,
    equivarify_reference,
    evaluate,
    load_idx,
    load_split,
    parameter_counts,
    predict_logits,
    prepare_dataset,
    probabilities,
    synthetic_images,
    train,
    verify_equivariance_report,
    write_idx,
)
from equivarifier.mnist.evaluation import summarize_predictions
from equivarifier.nn import Dense, Flatten, Model, Sequential, grad_check

C4 = cyclic_group(4)
SMALL = ModelConfig(c1=2, c2=2, c3=4, kernel=3, pool=4)


def _samples(n, seed=0):
    rng = np.random.default_rng(seed)
    return MnistSamples(synthetic_images(n, seed=seed), rng.integers(0, 10, size=n))


def _write_split(directory, split, n, seed=0, gz=False):
    rng = np.random.default_rng(seed)
    images = rng.integers(0, 256, size=(n, 28, 28), dtype=np.uint8)
    labels = rng.integers(0, 10, size=n).astype(np.uint8)
    stems = {
        "train": ("train-images-idx3-ubyte", "train-labels-idx1-ubyte"),
        "test": ("t10k-images-idx3-ubyte", "t10k-labels-idx1-ubyte"),
    }[split]
    suffix = ".gz" if gz else ""
    write_idx(directory / (stems[0] + suffix), images)
    write_idx(directory / (stems[1] + suffix), labels)
    return images, labels


# --- labels ------------------------------------------------------------------

def test_encode_label_examples():
    assert np.flatnonzero(encode_label(7, 0)).tolist() == [7]
    assert np.flatnonzero(encode_label(4, 1)).tolist() == [14]
    assert np.flatnonzero(encode_label(3, 3)).tolist() == [33]
    assert encode_label(0, 0).shape == (40,)


def test_encode_label_out_of_range():
    with pytest.raises(LabelError):
        encode_label(10, 0)
    with pytest.raises(LabelError):
        encode_label(3, 4)
    with pytest.raises(LabelError):
        encode_label(-1, 0)


def test_label_encoding_commutes_with_block_shift():
    shift = block_shift_action(C4, 10)
    for digit in range(10):
        for angle in range(4):
            for k in range(4):
                np.testing.assert_array_equal(
                    shift.apply(k, encode_label(digit, angle)),
                    encode_label(digit, (angle + k) % 4),
                )


def test_encode_labels_matches_single():
    digits = np.array([0, 5, 9])
    angles = np.array([3, 0, 2])
    batch = encode_labels(digits, angles)
    for row, d, a in zip(batch, digits, angles):
        np.testing.assert_array_equal(row, encode_label(d, a))
    with pytest.raises(LabelError):
        encode_labels(np.array([1]), np.array([7]))


def test_decode_label():
    assert decode_label(0) == (0, 0)
    assert decode_label(27) == (7, 2)
    with pytest.raises(LabelError):
        decode_label(40)


def test_digit_marginal():
    np.testing.assert_array_equal(digit_marginal(encode_label(7, 2)), np.eye(10)[7])
    np.testing.assert_allclose(digit_marginal(np.full(40, 1 / 40)), np.full(10, 0.1))
    marginal = digit_marginal(np.zeros(40), from_logits=True)
    assert marginal.sum() == pytest.approx(1.0)
    with pytest.raises(LabelError):
        digit_marginal(np.zeros(30))


def test_digit_marginal_is_shift_invariant_bitwise():
    shift = block_shift_action(C4, 10)
    p = probabilities(np.random.default_rng(2).standard_normal(40))
    for k in range(4):
        assert np.array_equal(digit_marginal(shift.apply(k, p)), digit_marginal(p))


# --- IDX files ---------------------------------------------------------------

def test_idx_round_trip(tmp_path):
    images, labels = _write_split(tmp_path, "train", 2)
    samples = load_split(tmp_path, "train")
    assert len(samples) == 2
    assert samples.images.shape == (2, 28, 28, 1)
    assert samples.images.dtype == np.float32
    np.testing.assert_array_equal(np.rint(samples.images[..., 0] * 255).astype(np.uint8), images)
    np.testing.assert_array_equal(samples.digits, labels)


def test_idx_gzip_and_count(tmp_path):
    _write_split(tmp_path, "test", 5, gz=True)
    assert len(load_split(tmp_path, "test", count=3)) == 3


def test_idx_wrong_magic(tmp_path):
    _write_split(tmp_path, "train", 2)
    images = tmp_path / "train-images-idx3-ubyte"
    with pytest.raises(DataFormatError):
        load_idx(images, images)


def test_idx_count_mismatch(tmp_path):
    write_idx(tmp_path / "img", np.zeros((3, 28, 28), dtype=np.uint8))
    write_idx(tmp_path / "lbl", np.zeros(2, dtype=np.uint8))
    with pytest.raises(DataConsistencyError):
        load_idx(tmp_path / "img", tmp_path / "lbl")


def test_idx_truncated(tmp_path):
    path = write_idx(tmp_path / "img", np.zeros((3, 28, 28), dtype=np.uint8))
    path.write_bytes(path.read_bytes()[:100])
    with pytest.raises(DataIOError):
        load_idx(path, tmp_path / "img")


def test_idx_missing_files(tmp_path):
    with pytest.raises(DataIOError):
        load_split(tmp_path, "train")


# --- datasets ----------------------------------------------------------------

def test_prepare_dataset_none_keeps_images_upright():
    samples = _samples(6)
    data = prepare_dataset(samples, rotate="none")
    assert data.angles.tolist() == [0] * 6
    assert all(np.flatnonzero(s.joint_label)[0] < 10 for s in data)
    np.testing.assert_array_equal(data.images, samples.images)


def test_prepare_dataset_random_is_seeded():
    samples = _samples(50)
    first = prepare_dataset(samples, rotate="random", seed=9)
    second = prepare_dataset(samples, rotate="random", seed=9)
    np.testing.assert_array_equal(first.angles, second.angles)
    np.testing.assert_array_equal(first.images, second.images)
    for i in range(5):
        np.testing.assert_array_equal(first.images[i], np.rot90(samples.images[i], first.angles[i], axes=(0, 1)))


def test_prepare_dataset_angle_balance():
    data = prepare_dataset(_samples(2000), rotate="random", seed=0)
    counts = np.bincount(data.angles, minlength=4)
    assert all(abs(int(c) - 500) <= 60 for c in counts)


def test_prepare_dataset_unknown_policy():
    with pytest.raises(ConfigError):
        prepare_dataset(_samples(2), rotate="sideways")


# --- network -----------------------------------------------------------------

def test_build_model_shapes():
    model = build_model()
    assert model.input_shape == (28, 28, 1)
    assert model.output_shape == (40,)
    first_stage = model.network.children()[0]
    assert first_stage.output_shape((28, 28, 1)) == (28, 28, 32)
    assert build_model(SMALL).output_shape == (40,)


def test_build_model_rejects_bad_config():
    with pytest.raises(ConfigError):
        build_model({"c1": 0})
    with pytest.raises(ConfigError):
        build_model({"pool": 5})


def test_random_model_is_exactly_equivariant():
    model = build_model()
    table = verify_equivariance_report(model, synthetic_images(100, seed=1))
    assert table.images == 100
    assert table.checks == 400
    assert table.exact_matches == 400
    assert table.max_deviation == 0.0
    assert table.max_marginal_deviation == 0.0
    assert table.passed
    assert table.violations == []


def test_zero_image_gives_four_equal_blocks():
    model = build_model(SMALL)
    out = model.predict(np.zeros((28, 28, 1)))
    blocks = out.reshape(4, 10)
    for block in blocks[1:]:
        np.testing.assert_array_equal(block, blocks[0])
    assert verify_equivariance_report(model, np.zeros((28, 28, 1))).passed


def test_non_equivariant_model_is_flagged():
    reference = build_model(SMALL)
    rng = np.random.default_rng(0)
    plain = Model(
        Sequential([Flatten(), Dense(28 * 28, 40, rng, name="plain")]),
        (28, 28, 1),
        domain_action=reference.domain_action,
        codomain_action=reference.codomain_action,
    )
    table = verify_equivariance_report(plain, synthetic_images(2, seed=3))
    assert not table.passed
    # rotation 0 always matches
    assert table.exact_matches == 2
    assert len(table.violations) == 6


def test_verify_rejects_wrong_image_shape():
    with pytest.raises(ShapeError):
        verify_equivariance_report(build_model(SMALL), np.zeros((2, 14, 14, 1)))


def test_parameter_neutrality():
    counts = parameter_counts()
    assert counts["reference"] == counts["layerwise"] == counts["monolithic"]
    small = parameter_counts(SMALL)
    assert small["reference"] == small["layerwise"] == small["monolithic"]


def test_layerwise_and_monolithic_lifts_agree():
    reference = build_reference_model(SMALL)
    layerwise = equivarify_reference(reference, "layerwise")
    monolithic = equivarify_reference(reference, "monolithic")
    x = synthetic_images(100, seed=5).astype(np.float64)
    np.testing.assert_allclose(layerwise.predict(x), monolithic.predict(x), rtol=0, atol=1e-12)
    with pytest.raises(ConfigError):
        equivarify_reference(reference, "sideways")


def test_full_model_gradients():
    model = build_model(dtype=np.float64)
    rng = np.random.default_rng(0)
    x = synthetic_images(2, seed=0).astype(np.float64)
    target = encode_labels(rng.integers(0, 10, size=2), rng.integers(0, 4, size=2))
    report = grad_check(model, x, target, samples=200, seed=0)
    assert report.checked == 200
    assert report.max_relative_error < 1e-5


# --- training ----------------------------------------------------------------

def _small_dataset(n=32, seed=0):
    samples = _samples(n, seed)
    # two digits only, so even the output bias can lower the loss
    return prepare_dataset(MnistSamples(samples.images, samples.digits % 2), rotate="none", seed=seed)


def test_train_lowers_loss(tmp_path):
    model = build_model(SMALL)
    result = train(model, _small_dataset(), learning_rate=0.1, batch_size=8, epochs=3, seed=0, checkpoint_dir=tmp_path)
    assert result.final_loss < result.initial_loss
    assert len(result.epoch_losses) == 3
    assert len(result.batch_losses) == 12
    assert [os.path.basename(p) for p in result.checkpoints] == [f"epoch_00{i}.ckpt" for i in range(4)]


def test_train_zero_learning_rate_keeps_parameters():
    model = build_model(SMALL)
    before = {k: v.copy() for k, v in model.parameters().items()}
    train(model, _small_dataset(16), learning_rate=0.0, batch_size=8, epochs=1)
    for key, value in model.parameters().items():
        np.testing.assert_array_equal(value, before[key])


def test_train_is_deterministic(tmp_path):
    for run in ("a", "b"):
        train(build_model(SMALL), _small_dataset(16), learning_rate=0.1, batch_size=4, epochs=2, seed=3,
              checkpoint_dir=tmp_path / run)
    assert (tmp_path / "a" / "epoch_002.ckpt").read_bytes() == (tmp_path / "b" / "epoch_002.ckpt").read_bytes()


def test_train_divergence_points_at_last_checkpoint(tmp_path):
    model = build_model(SMALL)
    first = next(iter(model.parameters().values()))
    first[...] = np.nan
    with pytest.raises(TrainingError) as excinfo:
        train(model, _small_dataset(8), epochs=1, checkpoint_dir=tmp_path)
    assert str(excinfo.value.last_checkpoint).endswith("epoch_000.ckpt")


def test_train_empty_dataset():
    empty = LabeledDataset(np.zeros((0, 28, 28, 1)), np.zeros(0, dtype=np.int64), np.zeros(0, dtype=np.int64), 0, "none")
    with pytest.raises(TrainingError):
        train(build_model(SMALL), empty)


def test_trained_model_stays_exactly_equivariant():
    model = build_model(SMALL)
    train(model, _small_dataset(16), learning_rate=0.1, batch_size=8, epochs=1)
    table = verify_equivariance_report(model, synthetic_images(100, seed=7))
    assert table.exact_matches == table.checks == 400
    assert table.max_deviation == 0.0
    assert table.max_marginal_deviation == 0.0
    assert table.passed


# --- evaluation --------------------------------------------------------------

def test_uniform_logits_give_chance_accuracy():
    digits = np.tile(np.arange(10), 4)
    angles = np.repeat(np.arange(4), 10)
    report = summarize_predictions(np.zeros((40, 40)), digits, angles)
    assert report.joint_accuracy == pytest.approx(1 / 40)
    assert report.digit_accuracy == pytest.approx(0.1)
    assert report.angle_accuracy == pytest.approx(0.25)
    assert report.angle_confusion[3] == [[1, 0, 0, 0]] * 4
    assert report.count == 40


def test_report_accuracies_are_consistent():
    rng = np.random.default_rng(0)
    digits = rng.integers(0, 10, size=100)
    angles = rng.integers(0, 4, size=100)
    report = summarize_predictions(rng.standard_normal((100, 40)), digits, angles)
    assert 0 <= report.joint_accuracy <= min(report.digit_accuracy, report.angle_accuracy) <= 1
    assert sum(sum(map(sum, m)) for m in report.angle_confusion.values()) == 100


def test_perfect_logits():
    digits = np.array([1, 2, 3])
    angles = np.array([0, 3, 1])
    report = summarize_predictions(encode_labels(digits, angles) * 10, digits, angles)
    assert report.joint_accuracy == 1.0
    assert report.marginal_digit_accuracy == 1.0


def test_threaded_prediction_matches_serial():
    model = build_model(SMALL)
    images = synthetic_images(10, seed=2)
    np.testing.assert_array_equal(
        predict_logits(model, images, batch_size=3, threads=3),
        predict_logits(model, images, batch_size=3, threads=1),
    )


def test_evaluate_and_compare_policies():
    samples = _samples(12)
    test_set = prepare_dataset(_samples(8, seed=1), rotate="random", seed=1)
    report = evaluate(build_model(SMALL), test_set)
    assert report.count == 8
    comparison = compare_training_policies(
        lambda: build_model(SMALL), samples, test_set, learning_rate=0.05, batch_size=4, epochs=1, seed=0
    )
    assert comparison.unrotated.count == comparison.rotated.count == 8
    assert 0.0 <= comparison.joint_gap <= 1.0


# --- real MNIST (opt-in) -----------------------------------------------------

def _mnist_dir():
    path = os.environ.get("EQUIV_DATA_DIR")
    if not path or not os.path.isdir(path):
        pytest.skip("EQUIV_DATA_DIR does not point at the MNIST files")
    return path


@pytest.mark.slow
def test_desk_scale_accuracy():
    data_dir = _mnist_dir()
    train_set = prepare_dataset(load_split(data_dir, "train", 10000), rotate="none", seed=0)
    test_set = prepare_dataset(load_split(data_dir, "test", 2000), rotate="random", seed=0)
    model = build_model(dtype=np.float32)
    train(model, train_set, learning_rate=0.05, batch_size=32, epochs=5, seed=0)
    assert evaluate(model, test_set).joint_accuracy >= 0.85
    table = verify_equivariance_report(model, test_set.images[:100])
    assert table.passed
    assert table.max_marginal_deviation <= 1e-9


@pytest.mark.slow
def test_full_scale_accuracy():
    if os.environ.get("EQUIV_FULL_SCALE") != "1":
        pytest.skip("set EQUIV_FULL_SCALE=1 for the full-scale run")
    data_dir = _mnist_dir()
    train_set = prepare_dataset(load_split(data_dir, "train"), rotate="none", seed=0)
    test_set = prepare_dataset(load_split(data_dir, "test"), rotate="random", seed=0)
    model = build_model(dtype=np.float32)
    train(model, train_set, learning_rate=0.05, batch_size=32, epochs=15, seed=0)
    assert abs(evaluate(model, test_set).joint_accuracy - 0.968) <= 0.02

"""
Unit tests for layer forward passes and backward bookkeeping.
"""

import math

import numpy as np
import pytest
from eegnet.layers import (
    ContextReuseError,
    Mode,
    avgpool_forward,
    batchnorm_forward,
    conv2d_forward,
    dense_forward,
    depthwise_conv2d_forward,
    dropout_forward,
    elu,
    layer_backward,
    relu,
    separable_conv2d_forward,
    softmax_xent,
)
from numerics import Rng, ShapeError


class TestConv2d:
    """Test cases for conv2d_forward."""

    def test_hand_cross_correlation(self):
        """Test a valid cross-correlation against hand-computed values."""
        x = np.array([[1, 2, 3, 4], [5, 6, 7, 8]], dtype=np.float32).reshape(1, 1, 2, 4)
        kernel = np.array([1, 0, -1], dtype=np.float32).reshape(1, 1, 1, 3)

        y, _ = conv2d_forward(x, kernel, padding="valid")

        np.testing.assert_array_equal(y, np.full((1, 1, 2, 2), -2.0))

    def test_identity_kernel(self):
        """Test that a 1x1 unit kernel returns the input."""
        x = Rng(0).normal([2, 3, 4, 5])
        kernel = np.zeros((3, 3, 1, 1), dtype=np.float32)
        kernel[np.arange(3), np.arange(3)] = 1.0

        y, _ = conv2d_forward(x, kernel, padding="same")

        np.testing.assert_array_equal(y, x)

    def test_same_padding_keeps_temporal_geometry(self):
        """Test that same padding keeps the default 128 x 875 geometry."""
        x = np.zeros((1, 1, 128, 875), dtype=np.float32)
        kernel = np.zeros((8, 1, 1, 64), dtype=np.float32)

        y, _ = conv2d_forward(x, kernel, padding="same")

        assert y.shape == (1, 8, 128, 875)

    def test_same_padding_extra_cell_trails(self):
        """An even kernel sees one more sample after the centre than before it."""
        x = np.zeros((1, 1, 1, 6), dtype=np.float32)
        x[0, 0, 0, 0] = 1.0
        kernel = np.arange(1, 5, dtype=np.float32).reshape(1, 1, 1, 4)

        y, _ = conv2d_forward(x, kernel, padding="same")

        # left pad 1, right pad 2: output 0 sees [0, x0, x1, x2]
        assert y[0, 0, 0].tolist() == [2.0, 1.0, 0.0, 0.0, 0.0, 0.0]

    def test_kernel_larger_than_input(self):
        """Test that a valid kernel larger than the input is rejected."""
        with pytest.raises(ShapeError, match="larger than the padded input"):
            conv2d_forward(np.zeros((1, 1, 2, 2)), np.zeros((1, 1, 3, 1)), padding="valid")

    def test_channel_mismatch(self):
        """Test that a kernel with the wrong input channel count is rejected."""
        with pytest.raises(ShapeError, match="input channels"):
            conv2d_forward(np.zeros((1, 2, 2, 2)), np.zeros((1, 3, 1, 1)))


class TestDepthwiseConv2d:
    """Test cases for depthwise_conv2d_forward."""

    def test_electrode_axis_collapses(self):
        """Test that a full-height kernel collapses the electrode axis."""
        y, _ = depthwise_conv2d_forward(
            np.zeros((1, 8, 128, 875), dtype=np.float32),
            np.zeros((8, 2, 128, 1), dtype=np.float32),
        )

        assert y.shape == (1, 16, 1, 875)

    def test_identity_kernel(self):
        """Test that all-ones 1x1 kernels with D = 1 return the input."""
        x = Rng(1).normal([2, 3, 4, 5])

        y, _ = depthwise_conv2d_forward(x, np.ones((3, 1, 1, 1), dtype=np.float32))

        np.testing.assert_array_equal(y, x)

    def test_no_channel_mixing(self):
        """Test that each channel is convolved only with its own kernels."""
        x = np.stack([np.ones((2, 2)), 2 * np.ones((2, 2))])[None].astype(np.float32)

        y, _ = depthwise_conv2d_forward(x, np.ones((2, 1, 2, 1), dtype=np.float32))

        np.testing.assert_array_equal(y[0, 0], np.full((1, 2), 2.0))
        np.testing.assert_array_equal(y[0, 1], np.full((1, 2), 4.0))

    def test_output_channel_depends_only_on_its_input(self):
        """Output channel c*D + d is unchanged when other input channels move."""
        rng = Rng(2)
        x = rng.normal([2, 3, 4, 6])
        kernel = rng.normal([3, 2, 4, 2])
        perturbed = x.copy()
        perturbed[:, [0, 2]] += rng.normal([2, 2, 4, 6])

        y, _ = depthwise_conv2d_forward(x, kernel)
        y_perturbed, _ = depthwise_conv2d_forward(perturbed, kernel)

        np.testing.assert_array_equal(y[:, 2:4], y_perturbed[:, 2:4])
        assert not np.array_equal(y[:, 0:2], y_perturbed[:, 0:2])

    def test_kernel_taller_than_input(self):
        """Test that a kernel taller than the input is rejected."""
        with pytest.raises(ShapeError):
            depthwise_conv2d_forward(np.zeros((1, 2, 3, 4)), np.zeros((2, 1, 4, 1)))


class TestSeparableConv2d:
    """Test cases for separable_conv2d_forward."""

    def test_double_identity(self):
        """Test that unit impulses in both stages return the input."""
        x = Rng(3).normal([2, 4, 1, 10])
        depth = np.zeros((4, 1, 1, 3), dtype=np.float32)
        depth[..., 1] = 1.0
        point = np.eye(4, dtype=np.float32).reshape(4, 4, 1, 1)

        y, _ = separable_conv2d_forward(x, depth, point)

        np.testing.assert_array_equal(y, x)

    def test_shape(self):
        """Test the output shape at the pooled default geometry."""
        y, _ = separable_conv2d_forward(
            np.zeros((1, 16, 1, 218), dtype=np.float32),
            np.zeros((16, 1, 1, 16), dtype=np.float32),
            np.zeros((16, 16, 1, 1), dtype=np.float32),
        )

        assert y.shape == (1, 16, 1, 218)

    def test_equals_composition_bit_exactly(self):
        """Test that the layer equals depthwise then 1x1 conv2d bit for bit."""
        rng = Rng(4)
        x = rng.normal([3, 5, 1, 20])
        depth, point = rng.normal([5, 1, 1, 16]), rng.normal([7, 5, 1, 1])

        y, _ = separable_conv2d_forward(x, depth, point)
        hidden, _ = depthwise_conv2d_forward(x, depth, padding="same")
        composed, _ = conv2d_forward(hidden, point, padding="valid")

        assert y.tobytes() == composed.tobytes()

    def test_stage_mismatch(self):
        """Test that disagreeing stage channel counts are rejected."""
        with pytest.raises(ShapeError, match="separable stages disagree"):
            separable_conv2d_forward(
                np.zeros((1, 4, 1, 8)), np.zeros((4, 1, 1, 3)), np.zeros((2, 3, 1, 1))
            )


class TestBatchnorm:
    """Test cases for batchnorm_forward."""

    @staticmethod
    def _run(x, mode=Mode.TRAIN, mean=None, var=None):
        c = x.shape[1]
        return batchnorm_forward(
            x,
            np.ones(c, dtype=np.float32),
            np.zeros(c, dtype=np.float32),
            np.zeros(c, dtype=np.float32) if mean is None else mean,
            np.ones(c, dtype=np.float32) if var is None else var,
            mode=mode,
        )

    def test_two_values(self):
        """Test that values {1, 3} normalize to {-1, +1}."""
        x = np.array([1.0, 3.0], dtype=np.float32).reshape(2, 1, 1, 1)

        y, _, _ = self._run(x)

        np.testing.assert_allclose(y.ravel(), [-1.0, 1.0], atol=1e-3)

    def test_constant_input_is_zero(self):
        """Test that a constant channel normalizes to zero."""
        y, _, _ = self._run(np.full((4, 2, 1, 3), 7.0, dtype=np.float32))

        np.testing.assert_array_equal(y, 0.0)

    def test_infer_with_identity_statistics(self):
        """Test that infer mode with mean 0 and variance 1 is an identity."""
        x = Rng(5).normal([3, 2, 2, 4])

        y, _, _ = self._run(x, mode=Mode.INFER)

        np.testing.assert_allclose(y, x, rtol=1e-3, atol=1e-6)

    def test_batch_statistics(self):
        """Train-mode output has zero mean and unit variance per channel."""
        x = Rng(6).normal([8, 3, 2, 5], mean=4.0, std=5.0)

        y, _, _ = self._run(x)

        assert np.all(np.abs(y.mean(axis=(0, 2, 3))) < 1e-5)
        assert np.all(np.abs(y.var(axis=(0, 2, 3)) - 1.0) < 1e-3)

    def test_running_statistics_update(self):
        """Test the momentum update of the running statistics."""
        x = np.array([1.0, 3.0], dtype=np.float32).reshape(2, 1, 1, 1)

        _, _, (mean, var) = self._run(x)

        np.testing.assert_allclose(mean, [0.01 * 2.0], rtol=1e-6)
        np.testing.assert_allclose(var, [0.99 + 0.01 * 1.0], rtol=1e-6)

    def test_infer_keeps_running_statistics(self):
        """Test that infer mode returns the running statistics unchanged."""
        mean, var = np.full(2, 0.5, dtype=np.float32), np.full(2, 2.0, dtype=np.float32)

        _, _, (new_mean, new_var) = self._run(
            np.ones((1, 2, 1, 1), dtype=np.float32), Mode.INFER, mean, var
        )

        assert new_mean is mean and new_var is var

    def test_single_element_batch(self):
        """Test that a single value per channel is rejected in train mode."""
        with pytest.raises(ShapeError, match="at least 2"):
            self._run(np.ones((1, 1, 1, 1), dtype=np.float32))


class TestAvgpool:
    """Test cases for avgpool_forward."""

    def test_hand_averages(self):
        """Test averages of [1..8] in windows of four."""
        x = np.arange(1, 9, dtype=np.float32).reshape(1, 1, 1, 8)

        y, _ = avgpool_forward(x, 4)

        assert y.ravel().tolist() == [2.5, 6.5]

    def test_constant(self):
        """Test that pooling a constant returns the constant."""
        y, _ = avgpool_forward(np.full((2, 3, 1, 9), 1.5, dtype=np.float32), 3)

        np.testing.assert_array_equal(y, 1.5)

    def test_remainder_dropped(self):
        """Test that trailing samples outside a full window are dropped."""
        y, _ = avgpool_forward(np.zeros((1, 16, 1, 875), dtype=np.float32), 4)
        z, _ = avgpool_forward(y, 8)

        assert y.shape[-1] == 218
        assert z.shape[-1] == 27

    def test_adjoint_spreads_evenly(self):
        """Test that the backward spreads each gradient evenly over its window."""
        _, ctx = avgpool_forward(np.zeros((1, 1, 1, 4), dtype=np.float32), 4)

        grads = layer_backward(ctx, np.ones((1, 1, 1, 1), dtype=np.float32))

        assert grads["x"].ravel().tolist() == [0.25] * 4

    def test_pool_wider_than_input(self):
        """Test that a window wider than the input is rejected."""
        with pytest.raises(ShapeError, match="exceeds input width"):
            avgpool_forward(np.zeros((1, 1, 1, 3)), 4)


class TestDropout:
    """Test cases for dropout_forward."""

    def test_zero_rate_is_identity(self):
        """Test that p = 0 passes the input through in train mode."""
        x = Rng(7).normal([4, 5])

        y, _ = dropout_forward(x, 0.0, Mode.TRAIN, Rng(0))

        np.testing.assert_array_equal(y, x)

    def test_infer_is_identity(self):
        """Test that infer mode passes the input through."""
        x = Rng(8).normal([4, 5])

        y, _ = dropout_forward(x, 0.7, Mode.INFER)

        np.testing.assert_array_equal(y, x)

    def test_survivors_doubled(self):
        """Test that surviving activations are scaled by 1 / (1 - p)."""
        x = np.full((50, 40), 3.0, dtype=np.float32)

        y, _ = dropout_forward(x, 0.5, Mode.TRAIN, Rng(9))

        assert set(np.unique(y).tolist()) == {0.0, 6.0}

    def test_backward_uses_the_forward_mask(self):
        """Test that the backward zeroes the same entries as the forward."""
        x = np.ones((10, 10), dtype=np.float32)
        y, ctx = dropout_forward(x, 0.5, Mode.TRAIN, Rng(10))

        grads = layer_backward(ctx, np.ones_like(y))

        np.testing.assert_array_equal(grads["x"], y)

    def test_expectation_preserved(self):
        """Mean output over 10^4 seeded trials stays within 2% of the input."""
        x = np.full((10_000, 64), 2.0, dtype=np.float32)

        y, _ = dropout_forward(x, 0.5, Mode.TRAIN, Rng(11))

        assert abs(float(y.mean()) - 2.0) < 0.02 * 2.0

    @pytest.mark.parametrize("p", [-0.1, 1.0])
    def test_rate_out_of_range(self, p: float):
        """Test that rates outside [0, 1) are rejected."""
        with pytest.raises(ValueError, match=r"\[0, 1\)"):
            dropout_forward(np.ones(3), p, Mode.TRAIN, Rng(0))


class TestDense:
    """Test cases for dense_forward."""

    def test_identity(self):
        """Test that identity weights and zero bias return the input."""
        x = Rng(12).normal([3, 4])

        y, _ = dense_forward(x, np.eye(4, dtype=np.float32), np.zeros(4, dtype=np.float32))

        np.testing.assert_array_equal(y, x)

    def test_hand_computation(self):
        """Test a dense layer against a hand computation."""
        y, _ = dense_forward(np.array([[1.0, 2.0]]), np.array([[1.0], [1.0]]), np.array([3.0]))

        assert y.tolist() == [[6.0]]

    def test_flattened_geometry(self):
        """Test the output shape on flattened features."""
        y, _ = dense_forward(np.zeros((16, 432)), np.zeros((432, 64)), np.zeros(64))

        assert y.shape == (16, 64)

    def test_identity_backward(self):
        """Test that the backward of identity weights passes the gradient through."""
        _, ctx = dense_forward(np.zeros((2, 3)), np.eye(3), np.zeros(3))
        g = Rng(13).normal([2, 3], dtype=np.float64)

        grads = layer_backward(ctx, g)

        np.testing.assert_array_equal(grads["x"], g)

    def test_mismatch(self):
        """Test that an inner dimension mismatch is rejected."""
        with pytest.raises(ShapeError):
            dense_forward(np.zeros((2, 3)), np.zeros((4, 5)), np.zeros(5))


class TestActivations:
    """Test cases for elu and relu."""

    def test_zero(self):
        """Test that ELU and ReLU map zero to zero."""
        assert elu(np.array(0.0)) == 0.0
        assert relu(np.array(0.0)) == 0.0

    def test_piecewise(self):
        """Test ELU on a positive input and ReLU on a negative one."""
        assert elu(np.array(2.0)) == 2.0
        assert relu(np.array(-3.0)) == 0.0

    def test_elu_negative(self):
        """Test ELU at -1 against exp(-1) - 1."""
        assert float(elu(np.array(-1.0))) == pytest.approx(math.exp(-1) - 1, abs=1e-12)


class TestSoftmaxXent:
    """Test cases for softmax_xent."""

    def test_symmetric_logits(self):
        """Test that equal logits give a loss of log 2."""
        loss, grad, _ = softmax_xent(np.zeros((1, 2)), np.array([0]))

        assert loss == pytest.approx(math.log(2), abs=1e-12)
        np.testing.assert_allclose(grad, [[-0.5, 0.5]])

    def test_saturated(self):
        """Test that a saturated correct logit gives almost zero loss."""
        loss, _, _ = softmax_xent(np.array([[100.0, 0.0]]), np.array([0]))

        assert loss < 1e-8

    def test_closed_form(self):
        """Test the loss of a two-class row against its closed form."""
        loss, _, _ = softmax_xent(np.array([[1.0, 2.0]]), np.array([1]))

        assert loss == pytest.approx(math.log1p(math.exp(-1)), abs=1e-12)

    def test_rows_sum_to_one_and_shift_invariant(self):
        """Test that probabilities sum to one and ignore a per-row shift."""
        logits = Rng(14).normal([6, 3], std=4.0, dtype=np.float64)
        labels = np.zeros(6, dtype=np.int64)

        _, _, probs = softmax_xent(logits, labels)
        _, _, shifted = softmax_xent(logits + np.arange(6)[:, None] * 10.0, labels)

        np.testing.assert_allclose(probs.sum(axis=1), 1.0, atol=1e-6)
        np.testing.assert_allclose(shifted, probs, atol=1e-6)

    def test_label_out_of_range_names_row(self):
        """Test that a label outside [0, k) is reported with its row."""
        with pytest.raises(ValueError, match="at row 1"):
            softmax_xent(np.zeros((3, 2)), np.array([0, 2, 1]))


class TestLayerBackward:
    """Test cases for layer_backward preconditions."""

    def test_context_reuse(self):
        """Test that a context cannot be used twice."""
        _, ctx = dense_forward(np.ones((2, 2)), np.eye(2), np.zeros(2))
        layer_backward(ctx, np.ones((2, 2)))

        with pytest.raises(ContextReuseError):
            layer_backward(ctx, np.ones((2, 2)))

    def test_cotangent_shape_mismatch(self):
        """Test that a cotangent of the wrong shape is rejected."""
        _, ctx = dense_forward(np.ones((2, 2)), np.eye(2), np.zeros(2))

        with pytest.raises(ShapeError, match="cotangent of shape"):
            layer_backward(ctx, np.ones((2, 3)))

    def test_failed_call_does_not_consume_context(self):
        """Test that a rejected cotangent leaves the context usable."""
        _, ctx = dense_forward(np.ones((2, 2)), np.eye(2), np.zeros(2))
        with pytest.raises(ShapeError):
            layer_backward(ctx, np.ones((3, 2)))

        grads = layer_backward(ctx, np.ones((2, 2)))

        assert set(grads) == {"x", "w", "b"}

import copy

import numpy as np
import pytest

from dcqaoa.optim import ADAGRAD, ADAM, adagrad_step, adam_step, make_optimizer, step


class TestAdam:
    def test_zero_gradient_no_update(self):
        state = make_optimizer(ADAM, 0.1, 3)
        _, params = adam_step(state, np.ones(3), np.zeros(3))
        np.testing.assert_array_equal(params, np.ones(3))

    def test_first_step_is_signed_lr(self):
        state = make_optimizer(ADAM, 0.1, 3)
        g = np.array([5.0, -0.2, 3e3])
        _, params = adam_step(state, np.zeros(3), g)
        np.testing.assert_allclose(params, -0.1 * np.sign(g), atol=1e-6 * 0.1)

    def test_deterministic_from_snapshot(self):
        state = make_optimizer(ADAM, 0.05, 2)
        params = np.array([0.3, -0.4])
        g = np.array([1.0, 2.0])
        s1, p1 = adam_step(copy.deepcopy(state), params.copy(), g)
        s2, p2 = adam_step(copy.deepcopy(state), params.copy(), g)
        np.testing.assert_array_equal(p1, p2)
        np.testing.assert_array_equal(s1.first_moment, s2.first_moment)


class TestAdagrad:
    def test_zero_gradient_no_update(self):
        state = make_optimizer(ADAGRAD, 0.1, 3)
        _, params = adagrad_step(state, np.ones(3), np.zeros(3))
        np.testing.assert_array_equal(params, np.ones(3))

    def test_first_step_is_signed_lr(self):
        state = make_optimizer(ADAGRAD, 0.1, 3)
        g = np.array([2.0, -7.0, 0.5])
        _, params = adagrad_step(state, np.zeros(3), g)
        np.testing.assert_allclose(params, -0.1 * np.sign(g), atol=1e-4 * 0.1)

    def test_constant_gradient_shrinks_as_inverse_sqrt(self):
        state = make_optimizer(ADAGRAD, 0.1, 1)
        params = np.zeros(1)
        g = np.array([3.0])
        prev = params.copy()
        for t in range(1, 11):
            state, params = adagrad_step(state, params, g)
            update = abs(params[0] - prev[0])
            assert abs(update - 0.1 / np.sqrt(t)) < 1e-6
            prev = params.copy()

    def test_accumulator_nondecreasing(self):
        state = make_optimizer(ADAGRAD, 0.1, 2)
        params = np.zeros(2)
        last = state.accumulated_square.copy()
        rng = np.random.default_rng(0)
        for _ in range(20):
            state, params = adagrad_step(state, params, rng.normal(size=2))
            assert np.all(state.accumulated_square >= last)
            last = state.accumulated_square.copy()


class TestSharedBehaviour:
    @pytest.mark.parametrize("kind", [ADAM, ADAGRAD])
    def test_quadratic_convergence(self, kind):
        state = make_optimizer(kind, 0.1, 4)
        x = np.ones(4)
        values = []
        for _ in range(200):
            state, x = step(state, x, 2 * x)  # gradient of ||x||^2
            values.append(float(np.dot(x, x)))
        assert values[-1] < 1e-5
        assert max(values[150:]) < values[4]

    @pytest.mark.parametrize("kind", [ADAM, ADAGRAD])
    def test_block_concatenation_invariance(self, kind):
        rng = np.random.default_rng(3)
        xa, xb = rng.normal(size=2), rng.normal(size=3)
        ga, gb = rng.normal(size=(4, 2)), rng.normal(size=(4, 3))
        joint_state = make_optimizer(kind, 0.1, 5)
        sa = make_optimizer(kind, 0.1, 2)
        sb = make_optimizer(kind, 0.1, 3)
        xj = np.concatenate([xa, xb])
        for t in range(4):
            joint_state, xj = step(joint_state, xj, np.concatenate([ga[t], gb[t]]))
            sa, xa = step(sa, xa, ga[t])
            sb, xb = step(sb, xb, gb[t])
        np.testing.assert_array_equal(xj, np.concatenate([xa, xb]))

    @pytest.mark.parametrize("kind", [ADAM, ADAGRAD])
    def test_errors(self, kind):
        state = make_optimizer(kind, 0.1, 2)
        with pytest.raises(ValueError):
            step(state, np.zeros(3), np.zeros(3))
        with pytest.raises(ValueError):
            step(state, np.zeros(2), np.array([1.0, np.nan]))

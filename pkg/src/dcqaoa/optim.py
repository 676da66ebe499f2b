"""First-order optimizers: Adam (canonical defaults) and Adagrad."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

ADAM = "adam"
ADAGRAD = "adagrad"


@dataclass
class OptimizerState:
    kind: str
    learning_rate: float
    dim: int
    step_count: int = 0
    # Adam moments / Adagrad accumulator, allocated on first use.
    first_moment: np.ndarray = field(default=None, repr=False)
    second_moment: np.ndarray = field(default=None, repr=False)
    accumulated_square: np.ndarray = field(default=None, repr=False)
    beta1: float = 0.9
    beta2: float = 0.999
    eps_adam: float = 1e-8
    eps_adagrad: float = 1e-10

    def __post_init__(self):
        if self.kind == ADAM:
            self.first_moment = np.zeros(self.dim)
            self.second_moment = np.zeros(self.dim)
        elif self.kind == ADAGRAD:
            self.accumulated_square = np.zeros(self.dim)
        else:
            raise ValueError(f"unknown optimizer kind {self.kind!r}")


def _check(state: OptimizerState, params: np.ndarray, grad: np.ndarray):
    if params.shape != (state.dim,) or grad.shape != (state.dim,):
        raise ValueError("dimension mismatch")
    if not np.all(np.isfinite(grad)):
        raise ValueError("non-finite gradient")


def adam_step(
    state: OptimizerState, params: np.ndarray, grad: np.ndarray
) -> tuple[OptimizerState, np.ndarray]:
    """Bias-corrected Adam update; returns (state, new params)."""
    _check(state, params, grad)
    state.step_count += 1
    t = state.step_count
    state.first_moment = state.beta1 * state.first_moment + (1 - state.beta1) * grad
    state.second_moment = (
        state.beta2 * state.second_moment + (1 - state.beta2) * grad**2
    )
    m_hat = state.first_moment / (1 - state.beta1**t)
    v_hat = state.second_moment / (1 - state.beta2**t)
    new = params - state.learning_rate * m_hat / (np.sqrt(v_hat) + state.eps_adam)
    return state, new


def adagrad_step(
    state: OptimizerState, params: np.ndarray, grad: np.ndarray
) -> tuple[OptimizerState, np.ndarray]:
    """Adagrad update with epsilon inside the square root."""
    _check(state, params, grad)
    state.step_count += 1
    state.accumulated_square = state.accumulated_square + grad**2
    new = params - state.learning_rate * grad / np.sqrt(
        state.accumulated_square + state.eps_adagrad
    )
    return state, new


def make_optimizer(kind: str, learning_rate: float, dim: int) -> OptimizerState:
    return OptimizerState(kind=kind, learning_rate=learning_rate, dim=dim)


def step(
    state: OptimizerState, params: np.ndarray, grad: np.ndarray
) -> tuple[OptimizerState, np.ndarray]:
    if state.kind == ADAM:
        return adam_step(state, params, grad)
    return adagrad_step(state, params, grad)

"""QAOA / DC-QAOA circuit assembly, cost evaluation, and gradients.

Parameter layout is layer-major: (gamma_1, beta_1[, alpha_1], gamma_2, ...).
Each layer applies the cost phase, then the transverse-field mixer, then
(DC-QAOA only) the digitized counterdiabatic unitary built from one pool
class.  The CD unitary is a single first-order product over edges in
canonical (i < j, lexicographic) order.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from . import simulator as sim
from .problems import ProblemInstance, cost_hamiltonian, exact_ground_energy

QAOA = "qaoa"
DCQAOA = "dcqaoa"
CD_CLASSES = ("Y", "ZY", "YZ", "XY", "YX")

FD_STEP = 1e-4


@dataclass(frozen=True)
class AnsatzConfig:
    algorithm: str  # 'qaoa' | 'dcqaoa'
    p: int
    cd_class: str | None = None
    cd_prefactor: float = 0.5

    def __post_init__(self):
        if self.algorithm not in (QAOA, DCQAOA):
            raise ValueError(f"unknown algorithm {self.algorithm!r}")
        if self.p < 1:
            raise ValueError("p must be >= 1")
        if self.algorithm == DCQAOA and self.cd_class not in CD_CLASSES:
            raise ValueError(f"cd_class must be one of {CD_CLASSES}")

    @property
    def params_per_layer(self) -> int:
        return 3 if self.algorithm == DCQAOA else 2

    @property
    def n_params(self) -> int:
        return self.p * self.params_per_layer


def config_for(
    instance: ProblemInstance,
    algorithm: str,
    p: int,
    cd_class: str | None = "ZY",
) -> AnsatzConfig:
    """Ansatz for an instance; CD prefactor 1/2 for MaxCut, 1 for SK."""
    if algorithm == QAOA:
        return AnsatzConfig(QAOA, p)
    return AnsatzConfig(
        DCQAOA, p, cd_class, 0.5 if instance.is_maxcut else 1.0
    )


@lru_cache(maxsize=128)
def cached_diagonal(instance: ProblemInstance) -> sim.DiagonalOperator:
    return cost_hamiltonian(instance)


@lru_cache(maxsize=1024)
def cached_ground_energy(instance: ProblemInstance) -> float:
    return exact_ground_energy(cached_diagonal(instance))[0]


def _apply_cd_layer(
    state: sim.StateVector,
    instance: ProblemInstance,
    config: AnsatzConfig,
    alpha: float,
) -> None:
    cls = config.cd_class
    if cls == "Y":
        for q in range(instance.n):
            sim.apply_single_pauli_rotation(state, "Y", q, alpha)
        return
    la, lb = cls[0], cls[1]
    pref = config.cd_prefactor
    for i, j, w in instance.edges:
        sim.apply_two_local_pauli_rotation(
            state, (la, lb), (i, j), alpha * pref * w
        )


def prepare_final_state(
    instance: ProblemInstance, config: AnsatzConfig, params: np.ndarray
) -> sim.StateVector:
    """Run the layered circuit on |+>^n and return the final state."""
    params = np.asarray(params, dtype=np.float64)
    if params.shape != (config.n_params,):
        raise ValueError(
            f"expected {config.n_params} parameters, got {params.shape}"
        )
    diag = cached_diagonal(instance)
    state = sim.init_plus_state(instance.n)
    ppl = config.params_per_layer
    for layer in range(config.p):
        gamma, beta = params[layer * ppl], params[layer * ppl + 1]
        sim.apply_diagonal_phase(state, diag, gamma)
        sim.apply_rx_all(state, beta)
        if config.algorithm == DCQAOA:
            _apply_cd_layer(state, instance, config, params[layer * ppl + 2])
    return state


def evaluate_cost(
    instance: ProblemInstance, config: AnsatzConfig, params: np.ndarray
) -> float:
    state = prepare_final_state(instance, config, params)
    return sim.expectation_diagonal(state, cached_diagonal(instance))


def gradient(
    instance: ProblemInstance,
    config: AnsatzConfig,
    params: np.ndarray,
    h: float = FD_STEP,
) -> np.ndarray:
    """Central finite-difference gradient of the cost."""
    params = np.asarray(params, dtype=np.float64)
    grad = np.empty_like(params)
    for k in range(params.size):
        shifted = params.copy()
        shifted[k] = params[k] + h
        f_plus = evaluate_cost(instance, config, shifted)
        shifted[k] = params[k] - h
        f_minus = evaluate_cost(instance, config, shifted)
        grad[k] = (f_plus - f_minus) / (2 * h)
    return grad

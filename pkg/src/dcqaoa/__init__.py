"""Digitized-counterdiabatic QAOA with RNN meta-learned initialization."""

from .circuits import AnsatzConfig, DCQAOA, QAOA, config_for, evaluate_cost, gradient, prepare_final_state
from .metalearn import GRU, LSTM, TrainConfig, propose_init, train, trainable_param_count
from .pauli import PauliSum, PauliTerm, commutator, default_cd_pool, multiply, nested_commutator_pool
from .problems import (
    ProblemInstance,
    cost_hamiltonian,
    exact_ground_energy,
    gen_3regular,
    gen_complete_weighted,
    gen_sk,
    relative_error,
)
from .simulator import (
    DiagonalOperator,
    StateVector,
    apply_diagonal_phase,
    apply_rx_all,
    apply_two_local_pauli_rotation,
    expectation_diagonal,
    init_plus_state,
)

__version__ = "0.1.0"

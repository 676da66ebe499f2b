"""RNN meta-learning of circuit initializations.

LSTM and GRU cells are implemented from scratch on numpy with hidden
dimension equal to the circuit parameter count, so the output map
theta = pi * h assigns one hidden unit per angle.  The unrolled loop feeds
each proposal back as the next input; the meta-loss is a weighted sum of the
circuit cost along the trajectory, differentiated by hand-written
backpropagation through time.  The circuit gradient enters as an exact leaf
(finite differences, see circuits.gradient).
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field

import numpy as np

from . import optim
from .circuits import AnsatzConfig, DCQAOA, config_for, evaluate_cost, gradient
from .problems import ProblemInstance, derive_seed, generate

LSTM = "lstm"
GRU = "gru"

LSTM_KEYS = (
    "W_f", "W_i", "W_c", "W_o",
    "R_f", "R_i", "R_c", "R_o",
    "b_f", "b_i", "b_c", "b_o",
)
GRU_KEYS = (
    "W_z", "W_r", "W_h",
    "R_z", "R_r", "R_h",
    "b_z", "b_r", "b_h",
    "d_z", "d_r", "d_h",
)

WEIGHT_INIT_SCALE = 0.1
THETA0_SCALE = 0.01


def _sigmoid(x: np.ndarray) -> np.ndarray:
    return 1.0 / (1.0 + np.exp(-x))


@dataclass
class CellWeights:
    kind: str  # 'lstm' | 'gru'
    d: int
    arrays: dict[str, np.ndarray]

    @property
    def keys(self) -> tuple[str, ...]:
        return LSTM_KEYS if self.kind == LSTM else GRU_KEYS

    def flatten(self) -> np.ndarray:
        return np.concatenate([self.arrays[k].ravel() for k in self.keys])

    def with_flat(self, flat: np.ndarray) -> "CellWeights":
        arrays = {}
        pos = 0
        for k in self.keys:
            shape = self.arrays[k].shape
            size = self.arrays[k].size
            arrays[k] = flat[pos : pos + size].reshape(shape).copy()
            pos += size
        return CellWeights(self.kind, self.d, arrays)


@dataclass
class CellState:
    h: np.ndarray
    c: np.ndarray | None = None  # LSTM only


def zero_state(kind: str, d: int) -> CellState:
    h = np.zeros(d)
    return CellState(h, np.zeros(d) if kind == LSTM else None)


def init_weights(kind: str, d: int, seed: int) -> CellWeights:
    """Uniform(-0.1, 0.1) init for every matrix and bias."""
    rng = np.random.Generator(np.random.Philox(seed))
    keys = LSTM_KEYS if kind == LSTM else GRU_KEYS
    arrays = {}
    for k in keys:
        shape = (d, d) if k.startswith(("W", "R")) else (d,)
        arrays[k] = rng.uniform(-WEIGHT_INIT_SCALE, WEIGHT_INIT_SCALE, shape)
    return CellWeights(kind, d, arrays)


def trainable_param_count(kind: str, algorithm: str, p: int) -> int:
    """Scalar entries in the cell: 8d^2+4d (LSTM) or 6d^2+6d (GRU)."""
    if p < 1:
        raise ValueError("p must be >= 1")
    d = (3 if algorithm == DCQAOA else 2) * p
    if kind == LSTM:
        return 8 * d * d + 4 * d
    if kind == GRU:
        return 6 * d * d + 6 * d
    raise ValueError(f"unknown cell kind {kind!r}")


def output_map(h: np.ndarray) -> np.ndarray:
    """theta = pi * h, covering [-pi, pi] per angle."""
    return np.pi * h


# --- forward passes ---------------------------------------------------------

def _lstm_step(w: dict[str, np.ndarray], x, h0, c0):
    f = _sigmoid(w["W_f"] @ x + w["R_f"] @ h0 + w["b_f"])
    i = _sigmoid(w["W_i"] @ x + w["R_i"] @ h0 + w["b_i"])
    g = np.tanh(w["W_c"] @ x + w["R_c"] @ h0 + w["b_c"])
    c = f * c0 + i * g
    o = _sigmoid(w["W_o"] @ x + w["R_o"] @ h0 + w["b_o"])
    tc = np.tanh(c)
    h = o * tc
    cache = (x, h0, c0, f, i, g, c, o, tc)
    return h, c, cache


def _gru_step(w: dict[str, np.ndarray], x, h0):
    z = _sigmoid(w["W_z"] @ x + w["R_z"] @ h0 + w["b_z"] + w["d_z"])
    r = _sigmoid(w["W_r"] @ x + w["R_r"] @ h0 + w["b_r"] + w["d_r"])
    u = w["R_h"] @ h0 + w["d_h"]
    g = np.tanh(w["W_h"] @ x + r * u + w["b_h"])
    h = z * h0 + (1.0 - z) * g
    cache = (x, h0, z, r, u, g)
    return h, cache


def _check_forward_inputs(weights: CellWeights, theta_in, state: CellState):
    if theta_in.shape != (weights.d,) or state.h.shape != (weights.d,):
        raise ValueError("dimension mismatch")
    if not (np.all(np.isfinite(theta_in)) and np.all(np.isfinite(state.h))):
        raise ValueError("non-finite inputs")


def lstm_forward(
    weights: CellWeights, theta_in: np.ndarray, state: CellState
) -> tuple[np.ndarray, CellState]:
    """One LSTM step; returns (pi * h, new state)."""
    _check_forward_inputs(weights, theta_in, state)
    h, c, _ = _lstm_step(weights.arrays, theta_in, state.h, state.c)
    return output_map(h), CellState(h, c)


def gru_forward(
    weights: CellWeights, theta_in: np.ndarray, state: CellState
) -> tuple[np.ndarray, CellState]:
    """One GRU step; returns (pi * h, new state)."""
    _check_forward_inputs(weights, theta_in, state)
    h, _ = _gru_step(weights.arrays, theta_in, state.h)
    return output_map(h), CellState(h, None)


def cell_forward(weights, theta_in, state):
    if weights.kind == LSTM:
        return lstm_forward(weights, theta_in, state)
    return gru_forward(weights, theta_in, state)


# --- unrolled meta-optimization ---------------------------------------------

@dataclass
class Trajectory:
    thetas: list[np.ndarray]  # theta_1 .. theta_T
    costs: list[float]        # F(theta_1) .. F(theta_T)
    theta0: np.ndarray
    caches: list = field(repr=False, default_factory=list)


@dataclass
class TrainConfig:
    horizon: int = 6
    max_epochs: int = 10
    tolerance: float = 0.01
    omega: tuple[float, ...] | None = None  # default: all ones
    optimizer_kind: str = optim.ADAM
    learning_rate: float = 0.1
    train_set_size: int = 100
    seed: int = 0
    propose_argmin: bool = False

    def loss_weights(self) -> np.ndarray:
        if self.omega is None:
            return np.ones(self.horizon)
        w = np.asarray(self.omega, dtype=np.float64)
        if w.shape != (self.horizon,):
            raise ValueError("omega length must equal the horizon")
        return w


def _theta0(d: int, instance: ProblemInstance, seed: int) -> np.ndarray:
    rng = np.random.Generator(
        np.random.Philox(derive_seed("theta0", seed, instance.kind, instance.seed))
    )
    return rng.uniform(-THETA0_SCALE, THETA0_SCALE, d)


def unroll(
    weights: CellWeights,
    instance: ProblemInstance,
    config: AnsatzConfig,
    train_cfg: TrainConfig,
    seed: int | None = None,
) -> Trajectory:
    """Run the cell for T steps against one instance, recording costs.

    The cell state starts at zero and theta_0 is drawn uniform(-0.01, 0.01)
    componentwise; the result is deterministic given (weights, instance,
    seed).
    """
    if weights.d != config.n_params:
        raise ValueError("cell dimension must equal the parameter count")
    seed = train_cfg.seed if seed is None else seed
    theta = _theta0(weights.d, instance, seed)
    theta0 = theta
    h = np.zeros(weights.d)
    c = np.zeros(weights.d)
    thetas, costs, caches = [], [], []
    for _ in range(train_cfg.horizon):
        if weights.kind == LSTM:
            h, c, cache = _lstm_step(weights.arrays, theta, h, c)
        else:
            h, cache = _gru_step(weights.arrays, theta, h)
        theta = output_map(h)
        thetas.append(theta)
        costs.append(evaluate_cost(instance, config, theta))
        caches.append(cache)
    return Trajectory(thetas, costs, theta0, caches)


def meta_loss(trajectory: Trajectory, omega: np.ndarray) -> float:
    """Weighted sum of the costs along the trajectory."""
    costs = np.asarray(trajectory.costs)
    omega = np.asarray(omega, dtype=np.float64)
    if omega.shape != costs.shape:
        raise ValueError("omega length must match the trajectory")
    return float(np.dot(omega, costs))


# --- backpropagation through time -------------------------------------------

def _zero_grads(weights: CellWeights) -> dict[str, np.ndarray]:
    return {k: np.zeros_like(v) for k, v in weights.arrays.items()}


def _lstm_backward(w, grads, cache, dh, dc_in):
    x, h0, c0, f, i, g, c, o, tc = cache
    do = dh * tc
    dc = dc_in + dh * o * (1.0 - tc * tc)
    df, di, dg = dc * c0, dc * g, dc * i
    dc0 = dc * f
    da_f = df * f * (1.0 - f)
    da_i = di * i * (1.0 - i)
    da_g = dg * (1.0 - g * g)
    da_o = do * o * (1.0 - o)
    for name, da in (("f", da_f), ("i", da_i), ("c", da_g), ("o", da_o)):
        grads[f"W_{name}"] += np.outer(da, x)
        grads[f"R_{name}"] += np.outer(da, h0)
        grads[f"b_{name}"] += da
    warr = w
    dx = (
        warr["W_f"].T @ da_f + warr["W_i"].T @ da_i
        + warr["W_c"].T @ da_g + warr["W_o"].T @ da_o
    )
    dh0 = (
        warr["R_f"].T @ da_f + warr["R_i"].T @ da_i
        + warr["R_c"].T @ da_g + warr["R_o"].T @ da_o
    )
    return dx, dh0, dc0


def _gru_backward(w, grads, cache, dh):
    x, h0, z, r, u, g = cache
    dz = dh * (h0 - g)
    dh0 = dh * z
    dg = dh * (1.0 - z)
    da_g = dg * (1.0 - g * g)
    dr = da_g * u
    du = da_g * r
    da_z = dz * z * (1.0 - z)
    da_r = dr * r * (1.0 - r)
    grads["W_h"] += np.outer(da_g, x)
    grads["b_h"] += da_g
    grads["R_h"] += np.outer(du, h0)
    grads["d_h"] += du
    for name, da in (("z", da_z), ("r", da_r)):
        grads[f"W_{name}"] += np.outer(da, x)
        grads[f"R_{name}"] += np.outer(da, h0)
        grads[f"b_{name}"] += da
        grads[f"d_{name}"] += da
    dh0 += w["R_h"].T @ du + w["R_z"].T @ da_z + w["R_r"].T @ da_r
    dx = w["W_z"].T @ da_z + w["W_r"].T @ da_r + w["W_h"].T @ da_g
    return dx, dh0


def bptt_gradient(
    weights: CellWeights,
    instance: ProblemInstance,
    config: AnsatzConfig,
    train_cfg: TrainConfig,
    seed: int | None = None,
) -> tuple[dict[str, np.ndarray], float]:
    """Meta-loss gradient w.r.t. every cell weight, plus the loss itself.

    The circuit cost derivative dF/dtheta_t is the finite-difference circuit
    gradient, treated as an exact leaf; the cell equations and the output map
    are differentiated analytically through time.
    """
    omega = train_cfg.loss_weights()
    traj = unroll(weights, instance, config, train_cfg, seed=seed)
    loss = meta_loss(traj, omega)
    grads = _zero_grads(weights)
    w = weights.arrays
    d = weights.d
    T = train_cfg.horizon
    dtheta_next = np.zeros(d)  # dL/dtheta_t flowing from step t+1's input
    dh_next = np.zeros(d)
    dc_next = np.zeros(d)
    for t in range(T - 1, -1, -1):
        dtheta = dtheta_next
        if omega[t] != 0.0:
            dtheta = dtheta + omega[t] * gradient(instance, config, traj.thetas[t])
        dh = np.pi * dtheta + dh_next
        if weights.kind == LSTM:
            dx, dh_next, dc_next = _lstm_backward(
                w, grads, traj.caches[t], dh, dc_next
            )
        else:
            dx, dh_next = _gru_backward(w, grads, traj.caches[t], dh)
        dtheta_next = dx  # gradient w.r.t. theta_{t-1} via the cell input
    return grads, loss


# --- training loop -----------------------------------------------------------

@dataclass
class TrainResult:
    weights: CellWeights
    epoch_losses: list[float]
    algorithm: str
    problem_kind: str
    p: int
    cd_class: str | None


def train(
    cell_kind: str,
    problem_kind: str,
    n: int,
    p: int,
    algorithm: str,
    train_cfg: TrainConfig,
    cd_class: str | None = "ZY",
) -> TrainResult:
    """Train one initializer network for a (problem, algorithm) pair.

    One optimizer step per training instance, instances visited in a fixed
    order each epoch; stops when successive epoch losses differ by at most
    the tolerance, or at max_epochs.
    """
    d = (3 if algorithm == DCQAOA else 2) * p
    weights = init_weights(
        cell_kind,
        d,
        derive_seed("winit", train_cfg.seed, cell_kind, algorithm, p, problem_kind),
    )
    instances = [
        generate(problem_kind, n, derive_seed("train", train_cfg.seed, problem_kind, i))
        for i in range(train_cfg.train_set_size)
    ]
    configs = [config_for(inst, algorithm, p, cd_class) for inst in instances]
    state = optim.make_optimizer(train_cfg.optimizer_kind, train_cfg.learning_rate, weights.flatten().size)
    epoch_losses: list[float] = []
    for _epoch in range(train_cfg.max_epochs):
        total = 0.0
        for inst, config in zip(instances, configs):
            grads, loss = bptt_gradient(weights, inst, config, train_cfg)
            if not np.isfinite(loss):
                raise FloatingPointError(
                    f"non-finite meta-loss while training {cell_kind} on "
                    f"{problem_kind} (instance seed {inst.seed})"
                )
            total += loss
            flat_grad = np.concatenate(
                [grads[k].ravel() for k in weights.keys]
            )
            state, new_flat = optim.step(state, weights.flatten(), flat_grad)
            weights = weights.with_flat(new_flat)
        epoch_losses.append(total / len(instances))
        if (
            len(epoch_losses) >= 2
            and abs(epoch_losses[-1] - epoch_losses[-2]) <= train_cfg.tolerance
        ):
            break
    return TrainResult(weights, epoch_losses, algorithm, problem_kind, p, cd_class)


def propose_init(
    weights: CellWeights,
    instance: ProblemInstance,
    config: AnsatzConfig,
    seed: int,
    train_cfg: TrainConfig | None = None,
    argmin: bool = False,
) -> np.ndarray:
    """One unroll; returns the final proposal (or the trajectory argmin)."""
    cfg = train_cfg if train_cfg is not None else TrainConfig(seed=seed)
    traj = unroll(weights, instance, config, cfg, seed=seed)
    if argmin or cfg.propose_argmin:
        return traj.thetas[int(np.argmin(traj.costs))]
    return traj.thetas[-1]


# --- weights serialization ----------------------------------------------------

def weights_to_json(result: TrainResult) -> str:
    """Trained-weights JSON; floats keep 17 significant digits."""
    w = result.weights

    def arr(a: np.ndarray) -> str:
        return "[" + ", ".join(f"{x:.17g}" for x in a.ravel()) + "]"

    fields = [
        f'"kind": "{w.kind}"',
        f'"d": {w.d}',
        f'"algorithm": "{result.algorithm}"',
        f'"problem_kind": "{result.problem_kind}"',
        f'"p": {result.p}',
        f'"cd_class": {json.dumps(result.cd_class)}',
        '"arrays": {'
        + ", ".join(f'"{k}": {arr(w.arrays[k])}' for k in w.keys)
        + "}",
        '"epoch_losses": '
        + "[" + ", ".join(f"{x:.17g}" for x in result.epoch_losses) + "]",
    ]
    return "{" + ", ".join(fields) + "}"


def weights_from_json(text: str) -> TrainResult:
    obj = json.loads(text)
    kind, d = obj["kind"], int(obj["d"])
    keys = LSTM_KEYS if kind == LSTM else GRU_KEYS
    arrays = {}
    for k in keys:
        flat = np.asarray(obj["arrays"][k], dtype=np.float64)
        shape = (d, d) if k.startswith(("W", "R")) else (d,)
        arrays[k] = flat.reshape(shape)
    weights = CellWeights(kind, d, arrays)
    return TrainResult(
        weights,
        [float(x) for x in obj["epoch_losses"]],
        obj["algorithm"],
        obj["problem_kind"],
        int(obj["p"]),
        obj["cd_class"],
    )

"""Risk-averse empirical minimization.

The chain rule for a spectral objective R(losses) is a reweighted sum: each
datum's gradient is scaled by the rank-based weight of its current loss. The
loop here is deliberately plain full-batch gradient descent — deterministic
for a given seed, no adaptive moments — with the reweighting recomputed every
step. Built-in objectives: a rank-k linear autoencoder (tail-aware principal
subspaces), a scalar quadratic, and grouped regression where the risk acts on
per-group mean losses.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from ._backend import rank_weights
from .distortion import Distortion
from .empirical_core import LossSample
from .errors import DomainError, InvalidInputError, NumericalError
from .evaluation import cvar_breakpoint_grid, cvar_curve, lorenz_breakpoint_grid, lorenz_curve
from .risk_measures import RiskSpec, evaluate
from . import synthetic


def spectral_weights(losses, phi: Distortion) -> np.ndarray:
    """Per-observation weights n * (phi(i/n) - phi((i-1)/n)) by descending rank.

    Tied observations share the average of their block's raw weights, so the
    result is a valid subgradient scaling of the sorted objective and
    dot(weights, losses) / n reproduces the spectral value of the uniform
    empirical law.
    """
    x = np.ascontiguousarray(np.asarray(losses, dtype=np.float64))
    if x.ndim != 1 or x.size == 0:
        raise InvalidInputError("losses must be a non-empty 1-d array")
    grid = np.linspace(0.0, 1.0, x.size + 1)
    return rank_weights(x, np.asarray(phi(grid), dtype=np.float64))


@dataclass(frozen=True)
class Objective:
    """Per-datum loss model: init(data, rng) -> params; loss(params, data) ->
    per-datum losses; grad(params, data, datum_weights) -> gradient."""

    name: str
    init: callable
    loss: callable
    grad: callable


@dataclass(frozen=True)
class ModelState:
    params: np.ndarray
    rng_seed: int
    step_count: int


def _risk_distortion(risk: RiskSpec) -> Distortion:
    if risk.variant == "mean":
        return Distortion.identity()
    if risk.variant == "cvar":
        return Distortion.cvar(risk.alpha)
    if risk.variant == "rim":
        return Distortion.rim(risk.alpha, risk.beta)
    if risk.variant == "spectral":
        return risk.phi
    raise DomainError("training risk must be one of mean | cvar | rim | spectral")


def minimize(objective: Objective, data, risk: RiskSpec, steps: int, lr: float, seed: int):
    """Full-batch subgradient descent on R(per-datum losses).

    Each step reweights the per-datum gradients by spectral_weights of the
    current losses and takes one plain descent step. Returns the final
    ModelState and a trace of the risk value at every step (length steps + 1,
    the last entry being the final value). Non-finite losses or gradients
    abort with the offending step index attached.
    """
    if steps < 0:
        raise DomainError("steps must be non-negative")
    phi = _risk_distortion(risk)
    rng = np.random.default_rng(seed)
    params = np.array(objective.init(data, rng), dtype=np.float64)
    n_trace = steps + 1
    trace = np.empty(n_trace)
    for k in range(steps):
        losses = np.asarray(objective.loss(params, data), dtype=np.float64)
        if not np.all(np.isfinite(losses)):
            raise NumericalError("non-finite loss", step=k)
        w = spectral_weights(losses, phi)
        trace[k] = float(np.dot(w, losses)) / losses.size
        g = np.asarray(objective.grad(params, data, w / losses.size), dtype=np.float64)
        if not np.all(np.isfinite(g)):
            raise NumericalError("non-finite gradient", step=k)
        params = params - lr * g
    losses = np.asarray(objective.loss(params, data), dtype=np.float64)
    if not np.all(np.isfinite(losses)):
        raise NumericalError("non-finite loss", step=steps)
    w = spectral_weights(losses, phi)
    trace[steps] = float(np.dot(w, losses)) / losses.size
    return ModelState(params, seed, steps), trace


# -- rank-k linear autoencoder ------------------------------------------------


def pca_init(data: np.ndarray, k: int) -> np.ndarray:
    """Top-k eigenvectors of the uncentered second-moment matrix, rows ordered
    by descending eigenvalue, each row's first nonzero component positive.

    The reconstruction objective has no intercept, so the uncentered moment
    matrix is the one whose eigenbasis minimizes the mean loss.
    """
    n, m = data.shape
    moment = data.T @ data / n
    eigvals, eigvecs = np.linalg.eigh(moment)
    v = eigvecs[:, ::-1][:, :k].T.copy()
    for row in v:
        nz = np.flatnonzero(np.abs(row) > 1e-12)
        if nz.size and row[nz[0]] < 0.0:
            row *= -1.0
    return v


def pca_losses(params: np.ndarray, data: np.ndarray) -> np.ndarray:
    """Squared reconstruction residuals of the rank-k projection V^T V x."""
    coeffs = data @ params.T
    resid = data - coeffs @ params
    return np.einsum("ij,ij->i", resid, resid)


def _pca_grad(params: np.ndarray, data: np.ndarray, datum_weights: np.ndarray) -> np.ndarray:
    resid = data - (data @ params.T) @ params
    a = data.T @ (datum_weights[:, None] * resid)
    return -2.0 * params @ (a + a.T)


def pca_objective(k: int) -> Objective:
    return Objective(
        name="pca_star",
        init=lambda data, rng: pca_init(data, k),
        loss=pca_losses,
        grad=_pca_grad,
    )


def pca_star(data: np.ndarray, k: int, risk: RiskSpec, steps: int, lr: float, seed: int):
    """Train the rank-k linear autoencoder under the given risk.

    Starts from the classical principal subspace and reweights per-datum
    gradients by the risk's rank weights. Returns the final ModelState, the
    per-datum final losses as a LossSample, and the risk trace.
    """
    data = np.asarray(data, dtype=np.float64)
    if data.ndim != 2:
        raise InvalidInputError("data must be an (n, m) matrix")
    if not np.all(np.isfinite(data)):
        raise InvalidInputError("data must be finite")
    if not 1 <= k <= data.shape[1]:
        raise DomainError("k must lie in 1..m")
    state, trace = minimize(pca_objective(k), data, risk, steps, lr, seed)
    return state, LossSample(pca_losses(state.params, data)), trace


# -- scalar quadratic ----------------------------------------------------------


def quadratic_objective() -> Objective:
    """One-parameter quadratics: loss_i(theta) = (theta - a_i)^2 on targets a."""

    def loss(params, data):
        return (params[0] - np.ravel(data)) ** 2

    def grad(params, data, datum_weights):
        return np.array([2.0 * float(np.dot(datum_weights, params[0] - np.ravel(data)))])

    return Objective(
        name="quadratic",
        init=lambda data, rng: np.zeros(1),
        loss=loss,
        grad=grad,
    )


# -- grouped regression --------------------------------------------------------


def _split_groups(groups: np.ndarray) -> np.ndarray:
    g = np.asarray(groups)
    if g.ndim != 1 or g.size == 0:
        raise InvalidInputError("groups must be a non-empty 1-d array")
    gi = g.astype(np.int64)
    if np.any(gi != g) or gi.min() < 0:
        raise InvalidInputError("group ids must be non-negative integers")
    counts = np.bincount(gi)
    if np.any(counts == 0):
        raise InvalidInputError("every group id up to the maximum must be non-empty")
    return gi


def subgroup_risk(losses, groups, risk: RiskSpec) -> float:
    """Risk of the per-group mean losses, groups weighted uniformly."""
    x = np.asarray(losses, dtype=np.float64)
    gi = _split_groups(groups)
    if gi.shape != x.shape:
        raise InvalidInputError("losses and groups must align")
    counts = np.bincount(gi)
    means = np.bincount(gi, weights=x) / counts
    return evaluate(risk, LossSample(means))


def subgroup_regression_objective() -> Objective:
    """Linear regression on rows (features..., y, group); the per-"datum"
    losses handed to the risk are the per-group mean squared errors."""

    def unpack(data):
        x = data[:, :-2]
        y = data[:, -2]
        gi = _split_groups(data[:, -1])
        return x, y, gi

    def loss(params, data):
        x, y, gi = unpack(data)
        resid = x @ params[:-1] + params[-1] - y
        counts = np.bincount(gi)
        return np.bincount(gi, weights=resid**2) / counts

    def grad(params, data, group_weights):
        x, y, gi = unpack(data)
        resid = x @ params[:-1] + params[-1] - y
        counts = np.bincount(gi)
        per_datum = group_weights[gi] / counts[gi] * 2.0 * resid
        return np.concatenate([x.T @ per_datum, [per_datum.sum()]])

    def init(data, rng):
        return np.zeros(data.shape[1] - 1)

    return Objective(name="subgroup_regression", init=init, loss=loss, grad=grad)


# -- experiment driver ---------------------------------------------------------


def load_matrix(path) -> np.ndarray:
    """CSV matrix loader with the same header auto-detection as load_csv."""
    with open(path, "r", encoding="utf-8") as fh:
        first = fh.readline()
    skip = 0
    try:
        [float(tok) for tok in first.strip().split(",") if tok != ""]
    except ValueError:
        skip = 1
    out = np.loadtxt(path, delimiter=",", skiprows=skip, ndmin=2)
    if not np.all(np.isfinite(out)):
        raise InvalidInputError("data matrix must be finite")
    return out


_REQUIRED_CONFIG = ("objective", "risk", "steps", "lr", "seed", "data")


def run_experiment(config: dict, out_dir) -> dict:
    """Run one training experiment from a JSON-style config and write products.

    Config: {objective: pca_star|quadratic|subgroup_regression, risk: spec,
    steps, lr, seed, data: {"path": csv} | generator spec, k?: for pca_star}.
    Writes params.json, trace.csv, losses.csv, cvar_curve.csv and
    lorenz_curve.csv into out_dir; returns {name: path}.
    """
    if not isinstance(config, dict):
        raise InvalidInputError("config must be an object")
    missing = [key for key in _REQUIRED_CONFIG if key not in config]
    if missing:
        raise InvalidInputError(f"config missing fields: {', '.join(missing)}")
    risk = RiskSpec.from_json(config["risk"])
    steps = int(config["steps"])
    lr = float(config["lr"])
    seed = int(config["seed"])

    data_spec = config["data"]
    if isinstance(data_spec, dict) and "path" in data_spec:
        data = load_matrix(data_spec["path"])
    else:
        data = synthetic.generate(data_spec, seed)

    name = config["objective"]
    if name == "pca_star":
        k = int(config.get("k", 1))
        state, losses, trace = pca_star(data, k, risk, steps, lr, seed)
        final = losses
    elif name == "quadratic":
        state, trace = minimize(quadratic_objective(), data, risk, steps, lr, seed)
        final = LossSample(quadratic_objective().loss(state.params, data))
    elif name == "subgroup_regression":
        objective = subgroup_regression_objective()
        state, trace = minimize(objective, data, risk, steps, lr, seed)
        final = LossSample(objective.loss(state.params, data))
    else:
        raise InvalidInputError(f"unknown objective {name!r}")

    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    paths = {}

    params_path = out / "params.json"
    payload = {
        "objective": name,
        "params": state.params.tolist(),
        "risk": risk.to_json(),
        "seed": seed,
        "steps": state.step_count,
    }
    params_path.write_text(json.dumps(payload, sort_keys=True) + "\n", encoding="utf-8")
    paths["params"] = str(params_path)

    trace_path = out / "trace.csv"
    trace_path.write_text("".join(f"{k},{v!r}\n" for k, v in enumerate(trace.tolist())), encoding="utf-8")
    paths["trace"] = str(trace_path)

    losses_path = out / "losses.csv"
    losses_path.write_text("".join(f"{v!r}\n" for v in final.values.tolist()), encoding="utf-8")
    paths["losses"] = str(losses_path)

    curve_path = out / "cvar_curve.csv"
    curve_path.write_text(cvar_curve(final, cvar_breakpoint_grid(final)).to_csv_text(), encoding="utf-8")
    paths["cvar_curve"] = str(curve_path)

    if np.all(final.values >= 0.0) and final.mean() > 0.0:
        lorenz_path = out / "lorenz_curve.csv"
        lorenz_path.write_text(lorenz_curve(final, lorenz_breakpoint_grid(final)).to_csv_text(), encoding="utf-8")
        paths["lorenz_curve"] = str(lorenz_path)

    return paths

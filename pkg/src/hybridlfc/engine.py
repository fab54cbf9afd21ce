"""Fixed-step simulation of the linear models, analytic steady states and
the scalar performance index.

The integrator is classical fourth-order Runge-Kutta. Because the models
are linear and the inputs are held constant across each step, the four
stage evaluations collapse into two constant matrices,

    x+ = P x + Q c,   P = I + M + M^2/2 + M^3/6 + M^4/24,
                      Q = dt (I + M/2 + M^2/6 + M^3/24),  M = dt A,

where c = B u + G p is the forcing over the step. This is algebraically
identical to running the four stages and keeps the hot loop at one
matrix-vector product per step.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field
from typing import Mapping, Union

import numpy as np

from .assembly import AugmentedModel
from .errors import (
    DimensionMismatch,
    InvariantViolation,
    NonFiniteState,
    SingularSystem,
    UnstableStepSize,
)
from .lti import StateSpaceModel, eigenvalues

__all__ = ["Step", "Scenario", "SimulationTrace", "integrate", "steady_state", "ise"]

# RK4 damps modes only while |lambda|*dt stays inside its stability
# interval on the negative real axis (about 2.785); warn near the edge.
STEP_WARN = 2.5
STEP_HARD = 2.785

Model = Union[StateSpaceModel, AugmentedModel]


@dataclass(frozen=True)
class Step:
    """Step input: zero before onset, magnitude from onset onward."""

    magnitude: float
    onset: float = 0.0


@dataclass(frozen=True)
class Scenario:
    t_end: float
    dt: float
    disturbances: Mapping[str, Step] = field(default_factory=dict)
    controls: Mapping[str, float] = field(default_factory=dict)
    x0: np.ndarray | None = None

    def __post_init__(self):
        # allow bare numbers as shorthand for steps applied at t = 0
        normalized = {
            lbl: s if isinstance(s, Step) else Step(float(s))
            for lbl, s in self.disturbances.items()
        }
        object.__setattr__(self, "disturbances", normalized)

    def validate(self) -> None:
        if not self.dt > 0:
            raise InvariantViolation("scenario.dt must be > 0")
        if self.dt > self.t_end:
            raise InvariantViolation("scenario.dt must not exceed scenario.t_end")
        for lbl, step in self.disturbances.items():
            if not 0.0 <= step.onset <= self.t_end:
                raise InvariantViolation(
                    f"onset of '{lbl}' must lie within [0, t_end]"
                )


@dataclass(frozen=True)
class SimulationTrace:
    times: np.ndarray
    states: np.ndarray
    state_labels: tuple[str, ...]
    outputs: dict[str, np.ndarray] = field(default_factory=dict)

    def column(self, label: str) -> np.ndarray:
        """State or derived-output column by name."""
        if label in self.state_labels:
            return self.states[:, self.state_labels.index(label)]
        if label in self.outputs:
            return self.outputs[label]
        raise KeyError(label)


def _model_matrices(model: Model):
    if isinstance(model, AugmentedModel):
        # constant control offsets enter through the plant's own control
        # columns; the integrator rows take no direct input
        n_open = model.open_loop.n_states
        b = np.zeros((model.n_states, len(model.control_labels)))
        b[:n_open, :] = model.open_loop.b
        return (
            model.ahat,
            b,
            model.ghat,
            model.state_labels,
            model.control_labels,
            model.disturbance_labels,
        )
    return (
        model.a,
        model.b,
        model.g,
        model.state_labels,
        model.control_labels,
        model.disturbance_labels,
    )


def _input_vector(values: Mapping[str, float], labels: tuple[str, ...], kind: str):
    vec = np.zeros(len(labels))
    for lbl, val in values.items():
        if lbl not in labels:
            raise ValueError(f"unknown {kind} input '{lbl}'; model has {labels}")
        vec[labels.index(lbl)] += float(val)
    return vec


def _propagators(a: np.ndarray, dt: float) -> tuple[np.ndarray, np.ndarray]:
    n = a.shape[0]
    eye = np.eye(n)
    m1 = dt * a
    m2 = m1 @ m1
    m3 = m2 @ m1
    m4 = m3 @ m1
    p = eye + m1 + m2 / 2.0 + m3 / 6.0 + m4 / 24.0
    q = dt * (eye + m1 / 2.0 + m2 / 6.0 + m3 / 24.0)
    return p, q


def integrate(model: Model, scenario: Scenario, outputs=None) -> SimulationTrace:
    """Simulate the model under the scenario's step inputs.

    Inputs are piecewise constant: each disturbance switches from zero to
    its magnitude at the sample on (or just before) its onset time and is
    held across every step. Rows run t = 0, dt, ..., floor(t_end/dt)*dt.

    When an OutputMap is supplied its derived signals are evaluated along
    the trace, with controller outputs u = H x reconstructed for
    closed-loop models.
    """
    scenario.validate()
    a, b, g, labels, clabels, dlabels = _model_matrices(model)
    n = a.shape[0]
    dt = scenario.dt

    lam = eigenvalues(a)
    scale = float(np.max(np.abs(lam))) * dt if n else 0.0
    if scale > STEP_HARD:
        raise UnstableStepSize(
            f"|lambda|max*dt = {scale:.3f} exceeds the RK4 stability bound {STEP_HARD}"
        )
    if scale >= STEP_WARN:
        warnings.warn(
            f"|lambda|max*dt = {scale:.3f} is at the RK4 stability margin",
            RuntimeWarning,
            stacklevel=2,
        )

    rows = int(math.floor(scenario.t_end / dt + 1e-9)) + 1
    times = np.arange(rows) * dt

    u_const = _input_vector(scenario.controls, clabels, "control")
    p_rows = np.zeros((rows, len(dlabels)))
    for lbl, step in scenario.disturbances.items():
        if lbl not in dlabels:
            raise ValueError(f"unknown disturbance input '{lbl}'; model has {dlabels}")
        onset_idx = int(math.floor(step.onset / dt + 1e-9))
        p_rows[onset_idx:, dlabels.index(lbl)] += step.magnitude

    if scenario.x0 is None:
        x = np.zeros(n)
    else:
        x = np.asarray(scenario.x0, dtype=float).reshape(-1)
        if x.shape != (n,):
            raise DimensionMismatch(f"initial state has length {x.size}, model has {n} states")

    p_mat, q_mat = _propagators(a, dt)
    # per-row forcing, already pushed through Q
    qc = (p_rows @ g.T + b @ u_const) @ q_mat.T

    states = np.empty((rows, n))
    states[0] = x
    with np.errstate(over="ignore", invalid="ignore"):
        for k in range(rows - 1):
            x = p_mat @ x + qc[k]
            states[k + 1] = x
    if not np.all(np.isfinite(states)):
        raise NonFiniteState("simulation produced non-finite state values")

    out_cols: dict[str, np.ndarray] = {}
    if outputs is not None:
        n_open = outputs.wx.shape[1]
        if n < n_open:
            raise DimensionMismatch(
                f"output map expects at least {n_open} states, model has {n}"
            )
        if isinstance(model, AugmentedModel):
            u_rows = states @ model.h.T + u_const
        else:
            u_rows = np.broadcast_to(u_const, (rows, len(clabels)))
        y = states[:, :n_open] @ outputs.wx.T + u_rows @ outputs.wu.T + p_rows @ outputs.wp.T
        out_cols = {lbl: y[:, j] for j, lbl in enumerate(outputs.labels)}

    return SimulationTrace(
        times=times,
        states=states,
        state_labels=tuple(labels),
        outputs=out_cols,
    )


def steady_state(
    model: Model,
    disturbances: Mapping[str, float] | None = None,
    controls: Mapping[str, float] | None = None,
) -> np.ndarray:
    """Equilibrium state under constant inputs: solve A x = -(B u + G p).

    Uses a partial-pivoting direct solve after rejecting systems whose
    smallest singular value falls below 1e-12 of the largest (free
    integrators, for instance, make the equilibrium non-unique).
    """
    a, b, g, _, clabels, dlabels = _model_matrices(model)
    u = _input_vector(controls or {}, clabels, "control")
    p = _input_vector(disturbances or {}, dlabels, "disturbance")

    svals = np.linalg.svd(a, compute_uv=False)
    if svals[-1] <= 1e-12 * svals[0]:
        raise SingularSystem(
            "state matrix is rank deficient; no unique equilibrium exists"
        )
    return np.linalg.solve(a, -(b @ u + g @ p))


def ise(trace: SimulationTrace, include_ft: bool = False) -> float:
    """Performance index: integral of squared frequency deviation.

    Trapezoidal integral of dFs(t)^2 over the trace; include_ft adds the
    dFt(t)^2 term for tuning studies that weight both frequencies.
    """
    if trace.times.size == 0:
        raise InvariantViolation("cannot integrate an empty trace")
    y = trace.column("dFs") ** 2
    if include_ft:
        y = y + trace.column("dFt") ** 2
    return float(np.trapezoid(y, trace.times))

"""Wires the diesel, wind and solar subsystems into the open-loop plant,
builds the PI feedback matrix over an integrator-augmented state vector
and closes the loop.

The augmentation trick: appending the integrals of dFs and dFt as states
iFs and iFt turns every PI control law into pure state feedback u = H x,
so the closed loop is just Ahat = Abar + Bbar H with unchanged
disturbance topology.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .diesel import DieselParams, build_diesel_subsystem
from .errors import (
    DimensionMismatch,
    InvariantViolation,
    MissingFrequencyState,
    OrderingMismatch,
)
from .lti import StateSpaceModel
from .solar import SolarChannelParams, build_solar_subsystem, solar_feedthrough
from .wind import WindParams, build_pitch_subsystem, build_turbine_subsystem

__all__ = [
    "SystemParams",
    "ControllerGains",
    "OutputMap",
    "AugmentedModel",
    "PLANT_STATE_ORDER",
    "PLANT_CONTROL_ORDER",
    "PLANT_DISTURBANCE_ORDER",
    "INTEGRATOR_LABELS",
    "assemble_plant",
    "output_map",
    "build_feedback_matrix",
    "augment_with_integrators",
    "close_loop",
    "build_closed_loop",
]

PLANT_STATE_ORDER = (
    "dFs",
    "dFt",
    "dPgd",
    "dXED11",
    "dXED21",
    "dPcw",
    "dPC1",
    "dPC2",
    "xs1",
    "xs2",
)
PLANT_CONTROL_ORDER = ("dPcd", "dPcu", "us")
PLANT_DISTURBANCE_ORDER = ("dPl", "dPiw", "dPis")
INTEGRATOR_LABELS = ("iFs", "iFt")


@dataclass(frozen=True)
class SystemParams:
    """Power-balance constants plus the three subsystem parameter sets."""

    Kp: float = 72.0  # power system gain, 1/D (Hz / pu kW)
    Tp: float = 14.4  # power system time constant (s)
    Fs_nominal: float = 60.0  # nominal system frequency (Hz)
    diesel: DieselParams = field(default_factory=DieselParams)
    wind: WindParams = field(default_factory=WindParams)
    solar: SolarChannelParams = field(default_factory=SolarChannelParams)
    # when false the PV channel still exists but its power is kept out of
    # the balance, which reproduces the plain wind-diesel configuration
    include_solar: bool = True

    def validate(self) -> None:
        if self.Kp <= 0:
            raise InvariantViolation("system.Kp must be > 0")
        if self.Tp <= 0:
            raise InvariantViolation("system.Tp must be > 0")
        if self.Fs_nominal <= 0:
            raise InvariantViolation("system.F must be > 0")
        self.diesel.validate()
        self.wind.validate()
        self.solar.validate()


@dataclass(frozen=True)
class ControllerGains:
    Kdp: float = 0.0  # diesel proportional (pu kW/Hz)
    Kdi: float = 0.0  # diesel integral (pu kW/(Hz s))
    Kpp: float = 0.0  # blade pitch proportional
    Kpi: float = 0.0  # blade pitch integral
    Ksp: float = 0.0  # solar proportional
    Ksi: float = 0.0  # solar integral

    def as_tuple(self) -> tuple[float, ...]:
        return (self.Kdp, self.Kdi, self.Kpp, self.Kpi, self.Ksp, self.Ksi)

    def validate(self) -> None:
        for name, value in zip(("Kdp", "Kdi", "Kpp", "Kpi", "Ksp", "Ksi"), self.as_tuple()):
            if not np.isfinite(value):
                raise InvariantViolation(f"gains.{name} must be finite")


@dataclass(frozen=True)
class OutputMap:
    """Linear read-outs y = Wx x + Wu u + Wp p over the open-loop ordering.

    Carries the derived signals dPgw (wind generation), dPgs (solar
    generation) and dP1 (surplus power). For augmented models the state
    weights apply to the leading plant states; integrator states carry
    zero weight.
    """

    labels: tuple[str, ...]
    wx: np.ndarray
    wu: np.ndarray
    wp: np.ndarray


def _wire_subsystem(sub: StateSpaceModel, a, b, g, spos, cpos, dpos) -> None:
    rows = [spos[lbl] for lbl in sub.state_labels]
    for i, ri in enumerate(rows):
        for j, rj in enumerate(rows):
            a[ri, rj] += sub.a[i, j]
        for j, lbl in enumerate(sub.control_labels):
            b[ri, cpos[lbl]] += sub.b[i, j]
        for j, lbl in enumerate(sub.disturbance_labels):
            # couplings that name another plant state land in A, true
            # exogenous inputs land in the disturbance matrix
            if lbl in spos:
                a[ri, spos[lbl]] += sub.g[i, j]
            else:
                g[ri, dpos[lbl]] += sub.g[i, j]


def assemble_plant(p: SystemParams) -> StateSpaceModel:
    """Ten-state open-loop hybrid system model.

    State order is fixed: [dFs, dFt, dPgd, dXED11, dXED21, dPcw, dPC1,
    dPC2, xs1, xs2]; controls [dPcd, dPcu, us]; disturbances
    [dPl, dPiw, dPis]. The dFs row balances generation against load,

        d/dt dFs = [-dFs + Kp*(dPgd + Kig*(dFt - dFs) + dPgs - dPl)] / Tp

    with the dPgs term present only when include_solar is set.
    """
    n = len(PLANT_STATE_ORDER)
    spos = {lbl: i for i, lbl in enumerate(PLANT_STATE_ORDER)}
    cpos = {lbl: i for i, lbl in enumerate(PLANT_CONTROL_ORDER)}
    dpos = {lbl: i for i, lbl in enumerate(PLANT_DISTURBANCE_ORDER)}

    a = np.zeros((n, n))
    b = np.zeros((n, len(PLANT_CONTROL_ORDER)))
    g = np.zeros((n, len(PLANT_DISTURBANCE_ORDER)))

    for sub in (
        build_diesel_subsystem(p.diesel),
        build_turbine_subsystem(p.wind),
        build_pitch_subsystem(p.wind),
        build_solar_subsystem(p.solar),
    ):
        _wire_subsystem(sub, a, b, g, spos, cpos, dpos)

    # frequency balance row
    kp_tp = p.Kp / p.Tp
    kig = p.wind.Kig
    a[0, spos["dFs"]] = -(1.0 + kig * p.Kp) / p.Tp
    a[0, spos["dFt"]] = kig * kp_tp
    a[0, spos["dPgd"]] = kp_tp
    g[0, dpos["dPl"]] = -kp_tp
    if p.include_solar:
        kgs = p.solar.Kgs
        d = solar_feedthrough(p.solar)
        a[0, spos["xs2"]] += kp_tp * kgs
        b[0, cpos["us"]] += kp_tp * kgs * d
        g[0, dpos["dPis"]] += kp_tp * kgs * d

    return StateSpaceModel(
        a=a,
        b=b,
        g=g,
        state_labels=PLANT_STATE_ORDER,
        control_labels=PLANT_CONTROL_ORDER,
        disturbance_labels=PLANT_DISTURBANCE_ORDER,
    )


def output_map(p: SystemParams) -> OutputMap:
    """Derived-signal weights for [dPgw, dPgs, dP1] over the plant ordering."""
    n = len(PLANT_STATE_ORDER)
    spos = {lbl: i for i, lbl in enumerate(PLANT_STATE_ORDER)}
    cpos = {lbl: i for i, lbl in enumerate(PLANT_CONTROL_ORDER)}
    dpos = {lbl: i for i, lbl in enumerate(PLANT_DISTURBANCE_ORDER)}

    wx = np.zeros((3, n))
    wu = np.zeros((3, len(PLANT_CONTROL_ORDER)))
    wp = np.zeros((3, len(PLANT_DISTURBANCE_ORDER)))

    kig = p.wind.Kig
    wx[0, spos["dFt"]] = kig
    wx[0, spos["dFs"]] = -kig

    kgs = p.solar.Kgs
    d = solar_feedthrough(p.solar)
    wx[1, spos["xs2"]] = kgs
    wu[1, cpos["us"]] = kgs * d
    wp[1, dpos["dPis"]] = kgs * d

    wx[2] = wx[0]
    wx[2, spos["dPgd"]] += 1.0
    if p.include_solar:
        wx[2] += wx[1]
        wu[2] += wu[1]
        wp[2] += wp[1]
    wp[2, dpos["dPl"]] += -1.0

    return OutputMap(labels=("dPgw", "dPgs", "dP1"), wx=wx, wu=wu, wp=wp)


def build_feedback_matrix(g: ControllerGains, ordering, kig: float) -> np.ndarray:
    """PI feedback matrix H mapping the augmented state to [dPcd, dPcu, us].

    Rows, by named column lookup in the supplied ordering:
        diesel  u1 = -Kdp*dFs - Kdi*iFs
        pitch   u2 =  Kig*Kpp*(dFs - dFt) + Kig*Kpi*(iFs - iFt)
        solar   u3 = -Ksp*dFs - Ksi*iFs
    The pitch controller acts on the wind generation deviation, which is
    why its gains appear scaled by Kig.
    """
    expected = PLANT_STATE_ORDER + INTEGRATOR_LABELS
    ordering = tuple(ordering)
    if ordering != expected:
        raise OrderingMismatch(
            f"state ordering {ordering} does not match the assembled order {expected}"
        )
    col = {lbl: i for i, lbl in enumerate(ordering)}
    h = np.zeros((3, len(ordering)))
    h[0, col["dFs"]] = -g.Kdp
    h[0, col["iFs"]] = -g.Kdi
    h[1, col["dFs"]] = kig * g.Kpp
    h[1, col["dFt"]] = -kig * g.Kpp
    h[1, col["iFs"]] = kig * g.Kpi
    h[1, col["iFt"]] = -kig * g.Kpi
    h[2, col["dFs"]] = -g.Ksp
    h[2, col["iFs"]] = -g.Ksi
    return h


def augment_with_integrators(
    plant: StateSpaceModel,
) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Append integrator states iFs = int dFs dt and iFt = int dFt dt.

    Returns (Abar, Bbar, Gbar) where the two extra rows are pure
    selectors on dFs and dFt and receive no control or disturbance input.
    """
    labels = plant.state_labels
    if "dFs" not in labels or "dFt" not in labels:
        raise MissingFrequencyState(
            "plant must carry dFs and dFt states to be augmented"
        )
    n = plant.n_states
    m = plant.b.shape[1]
    k = plant.g.shape[1]

    abar = np.zeros((n + 2, n + 2))
    abar[:n, :n] = plant.a
    abar[n, labels.index("dFs")] = 1.0
    abar[n + 1, labels.index("dFt")] = 1.0

    bbar = np.zeros((n + 2, m))
    bbar[:n, :] = plant.b
    gbar = np.zeros((n + 2, k))
    gbar[:n, :] = plant.g
    return abar, bbar, gbar


@dataclass(frozen=True)
class AugmentedModel:
    """Closed-loop model over the integrator-augmented state vector."""

    open_loop: StateSpaceModel
    ahat: np.ndarray
    ghat: np.ndarray
    h: np.ndarray

    def __post_init__(self):
        n = self.open_loop.n_states
        k = self.open_loop.g.shape[1]
        m = self.open_loop.b.shape[1]
        ahat = np.asarray(self.ahat, dtype=float)
        ghat = np.asarray(self.ghat, dtype=float)
        h = np.asarray(self.h, dtype=float)
        if ahat.shape != (n + 2, n + 2):
            raise DimensionMismatch(f"closed-loop A has shape {ahat.shape}, want {(n + 2, n + 2)}")
        if ghat.shape != (n + 2, k):
            raise DimensionMismatch(f"closed-loop G has shape {ghat.shape}, want {(n + 2, k)}")
        if h.shape != (m, n + 2):
            raise DimensionMismatch(f"feedback matrix has shape {h.shape}, want {(m, n + 2)}")
        # integrator rows must stay pure selectors no matter the feedback
        labels = self.open_loop.state_labels
        sel = np.zeros((2, n + 2))
        sel[0, labels.index("dFs")] = 1.0
        sel[1, labels.index("dFt")] = 1.0
        if not np.array_equal(ahat[n:, :], sel):
            raise ValueError("integrator rows of the closed-loop A are not selectors")
        if np.any(ghat[n:, :] != 0.0):
            raise ValueError("integrator rows of the disturbance matrix must be zero")
        for mtx in (ahat, ghat, h):
            mtx.flags.writeable = False
        object.__setattr__(self, "ahat", ahat)
        object.__setattr__(self, "ghat", ghat)
        object.__setattr__(self, "h", h)

    @property
    def state_labels(self) -> tuple[str, ...]:
        return self.open_loop.state_labels + INTEGRATOR_LABELS

    @property
    def control_labels(self) -> tuple[str, ...]:
        return self.open_loop.control_labels

    @property
    def disturbance_labels(self) -> tuple[str, ...]:
        return self.open_loop.disturbance_labels

    @property
    def n_states(self) -> int:
        return self.open_loop.n_states + 2


def close_loop(abar, bbar, gbar, h, open_loop: StateSpaceModel) -> AugmentedModel:
    """Apply state feedback u = H x to the augmented matrices.

    Ahat = Abar + Bbar H; the disturbance matrix passes through untouched.
    """
    abar = np.asarray(abar, dtype=float)
    bbar = np.asarray(bbar, dtype=float)
    gbar = np.asarray(gbar, dtype=float)
    h = np.asarray(h, dtype=float)
    n2 = abar.shape[0]
    if abar.shape != (n2, n2):
        raise DimensionMismatch(f"augmented A has shape {abar.shape}")
    if bbar.shape[0] != n2 or gbar.shape[0] != n2:
        raise DimensionMismatch("augmented B and G must have as many rows as A")
    if h.shape != (bbar.shape[1], n2):
        raise DimensionMismatch(
            f"feedback matrix shape {h.shape} incompatible with B {bbar.shape}"
        )
    ahat = abar + bbar @ h
    return AugmentedModel(open_loop=open_loop, ahat=ahat, ghat=gbar, h=h)


def build_closed_loop(p: SystemParams, gains: ControllerGains) -> AugmentedModel:
    """Convenience chain: assemble, augment, build H, close the loop."""
    plant = assemble_plant(p)
    abar, bbar, gbar = augment_with_integrators(plant)
    h = build_feedback_matrix(
        gains, plant.state_labels + INTEGRATOR_LABELS, p.wind.Kig
    )
    return close_loop(abar, bbar, gbar, h, plant)

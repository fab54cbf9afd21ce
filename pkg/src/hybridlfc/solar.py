"""Photovoltaic cell model, boost converter micro-dynamics and the
small-signal solar generation channel.

The cell follows the implicit single-diode law; the operating point is
found by a safeguarded Newton iteration and the maximum power point by a
grid scan refined with golden-section search. The boost converter is kept
at the switched-ODE level for the converter studies, while the
small-signal channel uses a fixed second-order transfer function realized
as two states that feed the frequency balance through the gain Kgs.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import InvariantViolation, NoConvergence
from .lti import StateSpaceModel, TransferFunction, tf_to_ss

__all__ = [
    "PvCellParams",
    "BoostParams",
    "SolarChannelParams",
    "photocurrent",
    "open_circuit_voltage",
    "solve_pv_current",
    "mppt_operating_point",
    "boost_switched_step",
    "build_solar_subsystem",
    "solar_feedthrough",
]

NEWTON_CAP = 100
# exp() overflows past ~709; clamp the diode exponent well inside that.
EXP_CLAMP = 700.0


@dataclass(frozen=True)
class PvCellParams:
    Isc: float = 3.8  # short-circuit current (A)
    KI: float = 0.0024  # short-circuit temperature coefficient (A/degC)
    Isat: float = 3.6e-9  # diode saturation current (A)
    Rs: float = 0.05  # series resistance (ohm)
    Aq: float = 1.3  # diode quality factor
    T: float = 25.0  # cell temperature (degC)
    lam: float = 1000.0  # irradiance (W/m^2)
    q: float = 1.602e-19  # electron charge (C)
    k: float = 1.380649e-23  # Boltzmann constant (J/K)

    def validate(self) -> None:
        if self.Isc <= 0:
            raise InvariantViolation("pv.Isc must be > 0")
        if self.Isat <= 0:
            raise InvariantViolation("pv.Isat must be > 0")
        if self.lam < 0:
            raise InvariantViolation("pv.lambda must be >= 0")
        if self.Aq <= 0:
            raise InvariantViolation("pv.Aq must be > 0")
        if self.Rs < 0:
            raise InvariantViolation("pv.Rs must be >= 0")

    @property
    def thermal_voltage(self) -> float:
        """Aq*k*TK/q with TK the cell temperature in kelvin."""
        return self.Aq * self.k * (self.T + 273.15) / self.q


@dataclass(frozen=True)
class BoostParams:
    L: float  # inductance (H)
    C: float  # capacitance (F)
    R: float  # load resistance (ohm)
    Ts: float  # switching period (s)
    duty: float  # duty ratio in [0, 1)

    def validate(self) -> None:
        if self.L <= 0 or self.C <= 0 or self.R <= 0 or self.Ts <= 0:
            raise InvariantViolation("boost L, C, R, Ts must all be > 0")
        if not 0.0 <= self.duty < 1.0:
            raise InvariantViolation("boost duty must lie in [0, 1)")


def _default_gbc() -> TransferFunction:
    # Converter small-signal block (-18s + 900)/(s^2 + 100s + 50),
    # coefficients ascending in s.
    return TransferFunction([900.0, -18.0], [50.0, 100.0, 1.0])


@dataclass(frozen=True)
class SolarChannelParams:
    Kgs: float = 0.20  # PV share of load (pu kW/Hz)
    gbc: TransferFunction = field(default_factory=_default_gbc)

    def validate(self) -> None:
        if not self.gbc.is_proper:
            raise InvariantViolation("solar.gbc must be a proper transfer function")


def photocurrent(p: PvCellParams) -> float:
    """Light-generated current (lam/1000)*(Isc + KI*(T - 25))."""
    return (p.lam / 1000.0) * (p.Isc + p.KI * (p.T - 25.0))


def open_circuit_voltage(p: PvCellParams) -> float:
    """Voltage where the terminal current crosses zero; 0 in darkness."""
    iph = photocurrent(p)
    if iph <= 0.0:
        return 0.0
    return p.thermal_voltage * math.log1p(iph / p.Isat)


def _diode_residual(p: PvCellParams, vpv: float, ipv: float, iph: float) -> float:
    arg = min((vpv + ipv * p.Rs) / p.thermal_voltage, EXP_CLAMP)
    return iph - p.Isat * math.expm1(arg) - ipv


def solve_pv_current(p: PvCellParams, vpv: float) -> float:
    """Terminal current at voltage vpv from the implicit single-diode law.

        Ipv = Iph - Isat*(exp((vpv + Ipv*Rs)/Vt) - 1),  Vt = Aq*k*TK/q

    Newton iteration safeguarded by bisection on a sign-changing bracket;
    the residual of the returned current is below 1e-10*Iph.
    """
    iph = photocurrent(p)
    if p.Rs == 0.0:
        arg = min(vpv / p.thermal_voltage, EXP_CLAMP)
        return iph - p.Isat * math.expm1(arg)

    f = lambda i: _diode_residual(p, vpv, i, iph)
    # The residual is strictly decreasing in the current, so a single sign
    # change brackets the root. Above the open-circuit voltage the root
    # sits below -Isat; walk the lower bound out until the sign flips.
    hi = iph
    lo = -p.Isat
    for _ in range(200):
        if f(lo) >= 0.0:
            break
        lo = 2.0 * lo - iph - 1.0
    else:
        raise NoConvergence(f"could not bracket the diode current at vpv = {vpv}")

    tol = max(1e-10 * iph, 1e-16)
    vt = p.thermal_voltage
    x = 0.5 * (lo + hi)
    for _ in range(NEWTON_CAP):
        fx = f(x)
        if abs(fx) <= tol:
            return x
        if fx > 0.0:
            lo = x
        else:
            hi = x
        arg = min((vpv + x * p.Rs) / vt, EXP_CLAMP)
        dfx = -p.Isat * math.exp(arg) * (p.Rs / vt) - 1.0
        step = x - fx / dfx
        # fall back to bisection whenever Newton leaves the bracket
        x = step if lo < step < hi else 0.5 * (lo + hi)
    raise NoConvergence(f"diode current solve stalled at vpv = {vpv}")


_INV_PHI = (math.sqrt(5.0) - 1.0) / 2.0


def _golden_max(fn, lo: float, hi: float, tol: float) -> float:
    """Abscissa of the maximum of a unimodal fn on [lo, hi]."""
    a, b = lo, hi
    c = b - _INV_PHI * (b - a)
    d = a + _INV_PHI * (b - a)
    fc, fd = fn(c), fn(d)
    while b - a > tol:
        if fc >= fd:
            b, d, fd = d, c, fc
            c = b - _INV_PHI * (b - a)
            fc = fn(c)
        else:
            a, c, fc = c, d, fd
            d = a + _INV_PHI * (b - a)
            fd = fn(d)
    return 0.5 * (a + b)


def mppt_operating_point(p: PvCellParams, v_step: float) -> tuple[float, float, float]:
    """Maximum power point (V, I, P) of the cell curve.

    Scans the grid {0, v_step, 2*v_step, ...} up to the open-circuit
    voltage, then refines around the best grid sample by golden-section
    search to 1e-6 V. Zero irradiance short-circuits to (0, 0, 0).
    """
    if v_step <= 0:
        raise InvariantViolation("v_step must be > 0")
    voc = open_circuit_voltage(p)
    if voc <= 0.0:
        return 0.0, 0.0, 0.0

    power = lambda v: v * solve_pv_current(p, v)
    n = int(math.floor(voc / v_step))
    grid = [i * v_step for i in range(n + 1)]
    best = max(grid, key=power)

    lo = max(best - v_step, 0.0)
    hi = min(best + v_step, voc)
    v = _golden_max(power, lo, hi, 1e-6)
    if power(v) < power(best):
        v = best
    i = solve_pv_current(p, v)
    return v, i, v * i


def boost_switched_step(
    p: BoostParams,
    state: tuple[float, float],
    vpv: float,
    u: int,
    dt: float,
) -> tuple[float, float]:
    """Advance the converter (iL, vo) one RK4 step in the given switch mode.

    Switch closed (u = 1): the inductor charges from the source while the
    capacitor discharges into the load,
        L diL/dt = vpv,          C dvo/dt = -vo/R.
    Switch open (u = 0): the inductor feeds the output,
        L diL/dt = vpv - vo,     C dvo/dt = iL - vo/R.
    """
    if dt <= 0 or dt > p.Ts:
        raise InvariantViolation("boost step requires 0 < dt <= Ts")

    if u:
        deriv = lambda il, vo: (vpv / p.L, -vo / (p.R * p.C))
    else:
        deriv = lambda il, vo: ((vpv - vo) / p.L, (il - vo / p.R) / p.C)

    il, vo = state
    k1i, k1v = deriv(il, vo)
    k2i, k2v = deriv(il + 0.5 * dt * k1i, vo + 0.5 * dt * k1v)
    k3i, k3v = deriv(il + 0.5 * dt * k2i, vo + 0.5 * dt * k2v)
    k4i, k4v = deriv(il + dt * k3i, vo + dt * k3v)
    return (
        il + dt / 6.0 * (k1i + 2.0 * k2i + 2.0 * k3i + k4i),
        vo + dt / 6.0 * (k1v + 2.0 * k2v + 2.0 * k3v + k4v),
    )


def build_solar_subsystem(p: SolarChannelParams) -> StateSpaceModel:
    """Two-state realization of the converter block for the channel.

    The control us (solar PI output) and the disturbance dPis sum at the
    block input, so both columns carry the same realization vector. The
    channel output is dPgs = Kgs*(last state + feedthrough*(us + dPis));
    the assembly applies the Kgs scaling when it forms the power balance.
    """
    realization, _ = tf_to_ss(p.gbc, state_prefix="xs", input_label="us")
    return StateSpaceModel(
        a=realization.a,
        b=realization.b,
        g=realization.b.copy(),
        state_labels=realization.state_labels,
        control_labels=("us",),
        disturbance_labels=("dPis",),
    )


def solar_feedthrough(p: SolarChannelParams) -> float:
    """Direct input-to-output term of the converter block (0 when the
    block is strictly proper, as the default is)."""
    _, d = tf_to_ss(p.gbc)
    return d

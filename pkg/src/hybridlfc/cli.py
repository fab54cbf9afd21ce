"""Command-line front end: configuration loading, the five study
commands and CSV/report serialization.

Exit codes: 0 success, 2 configuration errors, 4 step-size rejection,
3 any other numeric failure. Errors print one machine-parsable line to
stderr, `error: <Class>: <message>`.
"""

from __future__ import annotations

import argparse
import math
import sys
from dataclasses import replace

import numpy as np

from .assembly import assemble_plant, build_closed_loop, output_map
from .config import Config, parse_config
from .engine import integrate, steady_state
from .errors import ConfigError, ToolkitError, UnstableStepSize
from .lti import eigenvalues
from .solar import mppt_operating_point, open_circuit_voltage, solve_pv_current
from .tuning import GAIN_ORDER, STABILITY_MARGIN, tune_gains

__all__ = ["main"]


def _cmd_simulate(cfg: Config) -> list[str]:
    model = build_closed_loop(cfg.system, cfg.gains)
    outs = output_map(cfg.system)
    trace = integrate(model, cfg.scenario, outputs=outs)
    header = "t," + ",".join(model.state_labels) + "," + ",".join(outs.labels)
    data = np.column_stack(
        [trace.times, trace.states] + [trace.outputs[lbl] for lbl in outs.labels]
    )
    lines = [header]
    lines.extend(",".join(f"{x:.8e}" for x in row) for row in data)
    return lines


def _cmd_steady(cfg: Config) -> list[str]:
    plant = assemble_plant(cfg.system)
    dist = {lbl: s.magnitude for lbl, s in cfg.scenario.disturbances.items()}
    x = steady_state(plant, dist, dict(cfg.scenario.controls))
    return [f"{lbl} = {val:.6f}" for lbl, val in zip(plant.state_labels, x)]


def _cmd_eigen(cfg: Config) -> list[str]:
    model = build_closed_loop(cfg.system, cfg.gains)
    lam = eigenvalues(model.ahat)
    lines = ["re,im"]
    lines.extend(f"{z.real:.8e},{z.imag:.8e}" for z in lam)
    verdict = "STABLE" if float(np.max(lam.real)) < STABILITY_MARGIN else "UNSTABLE"
    lines.append(f"verdict,{verdict}")
    return lines


def _cmd_tune(cfg: Config) -> list[str]:
    gains, eta = tune_gains(cfg.system, cfg.tune)
    # full-precision reprs so the fragment parses back to identical gains
    lines = [f"gains.{name} = {getattr(gains, name)!r}" for name in GAIN_ORDER]
    lines.append(f"# eta = {eta!r}")
    return lines


def _cmd_pvcurve(cfg: Config) -> list[str]:
    p = cfg.pv
    v_step = cfg.pv_v_step
    voc = open_circuit_voltage(p)
    rows = []
    for i in range(int(math.floor(voc / v_step)) + 1):
        v = i * v_step
        amps = solve_pv_current(p, v)
        rows.append([v, amps, v * amps, 0])

    vm, im, pm = mppt_operating_point(p, v_step)
    for row in rows:
        if abs(row[0] - vm) < 1e-12:
            row[3] = 1
            break
    else:
        at = next((j for j, row in enumerate(rows) if row[0] > vm), len(rows))
        rows.insert(at, [vm, im, pm, 1])

    lines = ["V,I,P,mpp"]
    lines.extend(f"{v:.8e},{amps:.8e},{watts:.8e},{flag}" for v, amps, watts, flag in rows)
    return lines


_COMMANDS = {
    "simulate": _cmd_simulate,
    "steady": _cmd_steady,
    "eigen": _cmd_eigen,
    "tune": _cmd_tune,
    "pvcurve": _cmd_pvcurve,
}


def _report(exc: BaseException) -> None:
    print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(
        prog="hybridlfc",
        description=(
            "Frequency-deviation studies of an isolated wind-diesel-solar "
            "hybrid power system"
        ),
    )
    parser.add_argument(
        "--command",
        required=True,
        choices=sorted(_COMMANDS),
        help="study to run",
    )
    parser.add_argument("--config", metavar="PATH", help="key = value configuration file")
    parser.add_argument("--out", metavar="PATH", help="output file (stdout when omitted)")
    parser.add_argument(
        "--include-solar",
        choices=("true", "false"),
        help="override system.include_solar",
    )
    parser.add_argument("--seed", type=int, help="override tune.seed")
    args = parser.parse_args(argv)

    try:
        text = ""
        if args.config is not None:
            with open(args.config, "r", encoding="utf-8") as fh:
                text = fh.read()
        cfg = parse_config(text)
        if args.include_solar is not None:
            cfg = replace(
                cfg, system=replace(cfg.system, include_solar=args.include_solar == "true")
            )
        if args.seed is not None:
            cfg = replace(cfg, tune=replace(cfg.tune, seed=args.seed))

        lines = _COMMANDS[args.command](cfg)
        payload = "\n".join(lines) + "\n"
        if args.out is None:
            sys.stdout.write(payload)
        else:
            with open(args.out, "w", encoding="utf-8") as fh:
                fh.write(payload)
        return 0
    except ConfigError as exc:
        _report(exc)
        return 2
    except UnstableStepSize as exc:
        _report(exc)
        return 4
    except ToolkitError as exc:
        _report(exc)
        return 3
    except OSError as exc:
        _report(exc)
        return 3


if __name__ == "__main__":
    sys.exit(main())

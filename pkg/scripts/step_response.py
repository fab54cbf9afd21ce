"""Closed-loop frequency response study.

Builds the hybrid system with a chosen gain set (from a config file, the
built-in demo set, or a fresh tuner run), applies step disturbances and
writes the frequency deviations and power shares to CSV. With --plot the
traces are also rendered to a PNG next to the CSV.

    python3 scripts/step_response.py --dpl 0.01 --out step.csv
    python3 scripts/step_response.py --tune --dpl 0.01 --dpiw 0.01 --plot
"""

import argparse
import sys

import numpy as np

from hybridlfc.assembly import ControllerGains, build_closed_loop, output_map
from hybridlfc.config import parse_config
from hybridlfc.engine import Scenario, Step, integrate, ise
from hybridlfc.tuning import GAIN_ORDER, TuneSpec, tune_gains

# demo gains: stable everywhere, nothing optimized about them
DEMO_GAINS = ControllerGains(Kdp=10.0, Kdi=5.0, Kpp=10.0, Kpi=5.0, Ksp=10.0, Ksi=5.0)

COLUMNS = ("dFs", "dFt", "dPgd", "dPgw", "dPgs", "dP1")


def build_scenario(args) -> Scenario:
    steps = {}
    if args.dpl:
        steps["dPl"] = Step(args.dpl, args.onset)
    if args.dpiw:
        steps["dPiw"] = Step(args.dpiw, args.onset)
    if args.dpis:
        steps["dPis"] = Step(args.dpis, args.onset)
    return Scenario(t_end=args.t_end, dt=args.dt, disturbances=steps)


def run(args):
    if args.config:
        with open(args.config, "r", encoding="utf-8") as fh:
            cfg = parse_config(fh.read())
        system, gains = cfg.system, cfg.gains
    else:
        system, gains = parse_config("").system, DEMO_GAINS

    if args.tune:
        spec = TuneSpec(dpiw=args.dpiw, dpis=args.dpis, eta_include_ft=True)
        gains, eta = tune_gains(system, spec)
        print(f"tuned gains (eta = {eta:.6e}):")
        for name in GAIN_ORDER:
            print(f"  {name} = {getattr(gains, name)}")

    model = build_closed_loop(system, gains)
    scenario = build_scenario(args)
    trace = integrate(model, scenario, outputs=output_map(system))

    dfs = trace.column("dFs")
    print(f"peak |dFs| = {np.max(np.abs(dfs)):.6e} Hz (pu system)")
    print(f"final dFs  = {dfs[-1]:.6e}, final dFt = {trace.column('dFt')[-1]:.6e}")
    print(f"ise(dFs)   = {ise(trace):.6e}")

    data = np.column_stack([trace.times] + [trace.column(c) for c in COLUMNS])
    header = "t," + ",".join(COLUMNS)
    np.savetxt(args.out, data, delimiter=",", header=header, comments="")
    print(f"wrote {data.shape[0]} rows to {args.out}")

    if args.plot:
        plot(trace, args.out.rsplit(".", 1)[0] + ".png")


def plot(trace, path):
    try:
        import matplotlib

        matplotlib.use("Agg")
        import matplotlib.pyplot as plt
    except ImportError:
        print("matplotlib not available; skipping the plot", file=sys.stderr)
        return
    fig, (top, bottom) = plt.subplots(2, 1, sharex=True, figsize=(8, 6))
    top.plot(trace.times, trace.column("dFs"), label="dFs")
    top.plot(trace.times, trace.column("dFt"), label="dFt")
    top.set_ylabel("frequency deviation (Hz)")
    top.legend()
    top.grid(alpha=0.3)
    for lbl in ("dPgd", "dPgw", "dPgs", "dP1"):
        bottom.plot(trace.times, trace.column(lbl), label=lbl)
    bottom.set_xlabel("time (s)")
    bottom.set_ylabel("power deviation (pu kW)")
    bottom.legend()
    bottom.grid(alpha=0.3)
    fig.tight_layout()
    fig.savefig(path, dpi=120)
    print(f"wrote {path}")


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--config", help="key = value configuration file")
    ap.add_argument("--tune", action="store_true", help="run the gain search first")
    ap.add_argument("--dpl", type=float, default=0.01, help="load step (pu kW)")
    ap.add_argument("--dpiw", type=float, default=0.0, help="wind input step (pu kW)")
    ap.add_argument("--dpis", type=float, default=0.0, help="solar input step (pu kW)")
    ap.add_argument("--onset", type=float, default=1.0, help="step onset (s)")
    ap.add_argument("--t-end", type=float, default=60.0)
    ap.add_argument("--dt", type=float, default=0.005)
    ap.add_argument("--out", default="step_response.csv")
    ap.add_argument("--plot", action="store_true")
    run(ap.parse_args())


if __name__ == "__main__":
    main()

"""Witness value of the four prepared states as they relax toward thermal equilibrium.

Writes one CSV row per time step with a column per state. ``--plot`` also
saves a figure (needs matplotlib).
"""

import argparse
import csv
import sys
from dataclasses import dataclass

import numpy as np

from qutrit_contextuality.contextuality import evaluate_witness, standard_witness_set
from qutrit_contextuality.nmr import STATE_NAMES, RelaxationEvent, SpinSystem, apply_relaxation, prepare


@dataclass(frozen=True)
class Config:
    t1: float = 1.0
    t2: float = 1.0
    t_max: float = 5.0
    steps: int = 201


def trajectories(cfg: Config) -> tuple[np.ndarray, dict[str, np.ndarray]]:
    sys_ = SpinSystem()
    w = standard_witness_set()
    times = np.linspace(0.0, cfg.t_max, cfg.steps)
    out = {}
    for name in STATE_NAMES:
        s0 = prepare(name, sys_)
        out[name] = np.array(
            [evaluate_witness(apply_relaxation(s0, RelaxationEvent(t, cfg.t1, cfg.t2), sys_), w) for t in times]
        )
    return times, out


def plot(times, series, path):
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    fig, ax = plt.subplots(figsize=(6, 4))
    for name, ys in series.items():
        ax.plot(times, ys, label=name)
    ax.axhline(0.0, color="k", lw=0.8, ls="--")
    ax.set_xlabel("t (s)")
    ax.set_ylabel("witness")
    ax.legend()
    fig.tight_layout()
    fig.savefig(path, dpi=150)


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__, formatter_class=argparse.RawDescriptionHelpFormatter)
    ap.add_argument("--t1", type=float, default=Config.t1)
    ap.add_argument("--t2", type=float, default=Config.t2)
    ap.add_argument("--t-max", type=float, default=Config.t_max)
    ap.add_argument("--steps", type=int, default=Config.steps)
    ap.add_argument("--plot", metavar="PNG", help="also save a figure to this path")
    args = ap.parse_args()

    cfg = Config(args.t1, args.t2, args.t_max, args.steps)
    times, series = trajectories(cfg)
    w = csv.writer(sys.stdout, lineterminator="\n")
    w.writerow(["time_s", *series])
    for k, t in enumerate(times):
        w.writerow([repr(float(t)), *(repr(float(series[n][k])) for n in series)])
    if args.plot:
        plot(times, series, args.plot)


if __name__ == "__main__":
    main()

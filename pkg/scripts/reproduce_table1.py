"""Recompute the five diagonal-state single-shot rows under both population conventions."""

import argparse
import csv
import sys

from qutrit_contextuality.readout import table1_reproduction

COLUMNS = (
    "row", "theta_p_deg", "theta_q_deg", "i_th",
    "score_printed", "score_scaled", "score_unscaled",
    "delta_printed", "delta_scaled", "delta_unscaled", "matched_convention",
)


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--output", help="CSV path (default: stdout)")
    args = ap.parse_args()

    out = open(args.output, "w", newline="") if args.output else sys.stdout
    try:
        w = csv.DictWriter(out, fieldnames=COLUMNS, lineterminator="\n", extrasaction="ignore")
        w.writeheader()
        for row in table1_reproduction():
            w.writerow(row.as_dict())
    finally:
        if args.output:
            out.close()


if __name__ == "__main__":
    main()

"""Compare hand-written Gell-Mann expansions of the witness observables with computed ones.

Prints the classical bounds, the fitted correlation-to-witness map and every
mismatching coefficient as JSON.
"""

import json

from qutrit_contextuality.contextuality import (
    fit_correlation_scale,
    noncontextual_bounds_bruteforce,
    standard_witness_set,
    verify_printed_expansions,
)


def main() -> None:
    w = standard_witness_set()
    b = noncontextual_bounds_bruteforce(w)
    offset, slope = fit_correlation_scale(w)
    report = {
        "bounds": {
            "projector_max": b.projector_max,
            "dichotomous_min": b.dichotomous_min,
            "correlation_min": b.correlation_min,
            "correlation_min_unconstrained": b.correlation_min_unconstrained,
        },
        "correlation_vs_witness": {"offset": offset, "slope": slope},
        "discrepancies": [d.as_dict() for d in verify_printed_expansions(w)],
    }
    print(json.dumps(report, indent=2))


if __name__ == "__main__":
    main()

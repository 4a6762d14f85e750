"""Command-line front end.

Subcommands: ``witness``, ``protocol``, ``single-shot``, ``table1``,
``evolve`` and ``verify``. Exit codes: 0 success, 2 usage or parse error,
3 physically invalid state. Whether a state is contextual is reported as
data and never changes the exit code.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import math
import sys
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from . import contextuality as ctx
from .core import DomainError, QutritState, ValidationError, as_matrix3, expectation, gell_mann, random_state
from .nmr import (
    STATE_NAMES,
    RelaxationEvent,
    SpinSystem,
    apply_relaxation,
    diagonal_populations,
    prepare,
    prepare_diagonal,
    thermal_state,
)
from .readout import run_protocol, single_shot_score, table1_reproduction, witness_from_protocol

EXIT_OK = 0
EXIT_USAGE = 2
EXIT_INVALID_STATE = 3

NAMED_STATES = STATE_NAMES + ("THERMAL", "MIXED")


class UsageError(Exception):
    pass


@dataclass(frozen=True)
class RunConfig:
    t1: float = 1.0
    t2: float = 1.0
    t_max: float = 5.0
    steps: int = 101
    seed: int = 0
    output: str | None = None
    format: str = "csv"

    def __post_init__(self):
        if self.steps < 2:
            raise UsageError(f"steps must be >= 2, got {self.steps}")
        if not self.t_max > 0:
            raise UsageError(f"t_max must be > 0, got {self.t_max}")
        if not (self.t1 > 0 and self.t2 > 0):
            raise UsageError("t1 and t2 must be positive")
        if self.format not in ("csv", "json"):
            raise UsageError(f"unknown format {self.format!r}")


# ---------------------------------------------------------------- state specs


def named_state(name: str, sys: SpinSystem) -> QutritState:
    name = name.upper()
    if name == "MIXED":
        return QutritState.maximally_mixed()
    if name == "THERMAL":
        return thermal_state(sys)
    if name in STATE_NAMES:
        return prepare(name, sys)
    raise UsageError(f"unknown state {name!r}; choose from {', '.join(NAMED_STATES)}")


def _check_degrees(label: str, value) -> float:
    try:
        value = float(value)
    except (TypeError, ValueError):
        raise UsageError(f"{label} must be a number, got {value!r}") from None
    if not 0.0 <= value <= 180.0:
        raise UsageError(f"{label} must lie in [0, 180] degrees, got {value}")
    return value


def diagonal_state(theta_p_deg, theta_q_deg, sys: SpinSystem) -> QutritState:
    tp = _check_degrees("theta_p", theta_p_deg)
    tq = _check_degrees("theta_q", theta_q_deg)
    return prepare_diagonal(math.radians(tp), math.radians(tq), sys)


def state_from_json(obj, sys: SpinSystem) -> QutritState:
    """Parse ``{"name"} | {"diagonal": {...}} | {"matrix": [[re, im] x 9], "deviation": bool}``."""
    if not isinstance(obj, dict):
        raise UsageError("state JSON must be an object")
    if "name" in obj:
        return named_state(str(obj["name"]), sys)
    if "diagonal" in obj:
        d = obj["diagonal"]
        if not isinstance(d, dict) or "theta_p_deg" not in d or "theta_q_deg" not in d:
            raise UsageError("diagonal state needs theta_p_deg and theta_q_deg")
        return diagonal_state(d["theta_p_deg"], d["theta_q_deg"], sys)
    if "matrix" in obj:
        entries = obj["matrix"]
        try:
            arr = np.array(entries, dtype=float)
        except (TypeError, ValueError):
            raise UsageError("matrix entries must be [re, im] number pairs") from None
        if arr.shape != (9, 2):
            raise UsageError(f"matrix must hold 9 [re, im] pairs, got shape {arr.shape}")
        m = (arr[:, 0] + 1j * arr[:, 1]).reshape(3, 3)
        m = as_matrix3(m)
        if obj.get("deviation", False):
            return QutritState.from_deviation(m)
        return QutritState(m)
    raise UsageError("state JSON needs one of 'name', 'diagonal', 'matrix'")


def state_to_json(state: QutritState) -> dict:
    flat = state.rho.reshape(-1)
    return {"matrix": [[float(z.real), float(z.imag)] for z in flat], "deviation": False}


def _load_json_arg(text: str):
    src = text
    if not text.lstrip().startswith("{"):
        path = Path(text)
        if not path.exists():
            raise UsageError(f"state JSON file {text!r} not found")
        src = path.read_text(encoding="utf-8")
    try:
        return json.loads(src)
    except json.JSONDecodeError as exc:
        raise UsageError(f"malformed state JSON: {exc}") from None


def spin_system(polarization: float) -> SpinSystem:
    try:
        return SpinSystem(polarization=polarization)
    except ValidationError as exc:
        raise UsageError(str(exc)) from None


def resolve_state(args) -> QutritState:
    sys_ = spin_system(args.polarization)
    if args.state is not None:
        return named_state(args.state, sys_)
    if args.diagonal is not None:
        return diagonal_state(args.diagonal[0], args.diagonal[1], sys_)
    if args.state_json is not None:
        return state_from_json(_load_json_arg(args.state_json), sys_)
    if args.random is not None:
        return random_state(args.random)
    raise UsageError("no state given; use --state, --diagonal, --state-json or --random")


# ------------------------------------------------------------------- output


def _fmt(x) -> str:
    if isinstance(x, (bool, np.bool_)):
        return "true" if x else "false"
    if isinstance(x, (float, np.floating)):
        return format(float(x), ".17g")
    return str(x)


def write_csv(records: list[dict], out) -> None:
    if not records:
        return
    writer = csv.writer(out, lineterminator="\n")
    writer.writerow(list(records[0]))
    for rec in records:
        writer.writerow([_fmt(v) for v in rec.values()])


def _emit(text: str, output: str | None) -> None:
    if output:
        Path(output).write_text(text, encoding="utf-8", newline="\n")
    else:
        sys.stdout.write(text)


def _json_text(obj) -> str:
    return json.dumps(obj, indent=2) + "\n"


def _kv_table(pairs, digits: int = 6) -> str:
    width = max(len(k) for k, _ in pairs)
    lines = []
    for k, v in pairs:
        if isinstance(v, (float, np.floating)) and not isinstance(v, bool):
            v = f"{v:.{digits}f}"
        else:
            v = _fmt(v)
        lines.append(f"{k:<{width}}  {v}")
    return "\n".join(lines) + "\n"


# ----------------------------------------------------------------- commands


def cmd_witness(args) -> int:
    state = resolve_state(args)
    report = ctx.evaluate(state, ctx.standard_witness_set())
    if args.dump_state:
        _emit(_json_text(state_to_json(state)), args.output)
        return EXIT_OK
    if args.format == "json":
        _emit(_json_text(report.as_dict()), args.output)
    else:
        _emit(_kv_table(list(report.as_dict().items())), args.output)
    return EXIT_OK


def cmd_protocol(args) -> int:
    state = resolve_state(args)
    e = run_protocol(state)
    direct = {f"l{k}": expectation(state, gell_mann(k)) for k in (1, 3, 4, 6, 8)}
    w_protocol = witness_from_protocol(e)
    w_direct = ctx.evaluate_witness(state, ctx.standard_witness_set())
    record = dict(e.as_dict())
    record["witness"] = w_protocol
    record["contextual"] = ctx.is_contextual(w_protocol)
    deltas = {f"delta_{k}": abs(record[k] - v) for k, v in direct.items()}
    deltas["delta_witness"] = abs(w_protocol - w_direct)
    record.update(deltas)
    if args.format == "json":
        _emit(_json_text(record), args.output)
    else:
        _emit(_kv_table(list(record.items())), args.output)
    return EXIT_OK


def cmd_single_shot(args) -> int:
    tp = _check_degrees("theta_p", args.theta_p)
    tq = _check_degrees("theta_q", args.theta_q)
    sys_ = spin_system(args.polarization)
    state = prepare_diagonal(math.radians(tp), math.radians(tq), sys_)
    score = single_shot_score(state)
    ps = diagonal_populations(math.radians(tp), math.radians(tq), scaled=True)
    pu = diagonal_populations(math.radians(tp), math.radians(tq), scaled=False)
    record = {
        "theta_p_deg": tp,
        "theta_q_deg": tq,
        "p_scaled": ps[0],
        "q_scaled": ps[1],
        "r_scaled": ps[2],
        "p_unscaled": pu[0],
        "q_unscaled": pu[1],
        "r_unscaled": pu[2],
        "score": score,
        "score_unscaled": -6.0 * pu[0],
        "contextual": ctx.is_contextual(score),
    }
    if args.format == "json":
        _emit(_json_text(record), args.output)
    else:
        _emit(_kv_table(list(record.items()), digits=2), args.output)
    return EXIT_OK


def cmd_table1(args) -> int:
    rows = [r.as_dict() for r in table1_reproduction()]
    if args.format == "json":
        _emit(_json_text(rows), args.output)
    elif args.format == "table":
        cols = ("row", "theta_p_deg", "theta_q_deg", "p", "q", "r", "i_th", "score_printed",
                "score_scaled", "score_unscaled", "matched_convention")
        lines = ["  ".join(f"{c:>14}" for c in cols)]
        for r in rows:
            cells = [f"{r[c]:>14.2f}" if isinstance(r[c], float) else f"{r[c]!s:>14}" for c in cols]
            lines.append("  ".join(cells))
        _emit("\n".join(lines) + "\n", args.output)
    else:
        buf = io.StringIO()
        write_csv(rows, buf)
        _emit(buf.getvalue(), args.output)
    return EXIT_OK


def evolve_records(state: QutritState, cfg: RunConfig, sys: SpinSystem) -> list[dict]:
    w = ctx.standard_witness_set()
    out = []
    for t in np.linspace(0.0, cfg.t_max, cfg.steps):
        s = apply_relaxation(state, RelaxationEvent(float(t), cfg.t1, cfg.t2), sys)
        wv = ctx.evaluate_witness(s, w)
        out.append({"time_s": float(t), "witness": wv, "contextual": ctx.is_contextual(wv)})
    return out


def cmd_evolve(args) -> int:
    cfg = RunConfig(
        t1=args.t1, t2=args.t2, t_max=args.t_max, steps=args.steps,
        seed=args.random if args.random is not None else 0,
        output=args.output, format=args.format,
    )
    state = resolve_state(args)
    records = evolve_records(state, cfg, spin_system(args.polarization))
    if cfg.format == "json":
        _emit(_json_text(records), cfg.output)
    else:
        buf = io.StringIO()
        write_csv(records, buf)
        _emit(buf.getvalue(), cfg.output)
    return EXIT_OK


def cmd_verify(args) -> int:
    w = ctx.standard_witness_set()
    bounds = ctx.noncontextual_bounds_bruteforce(w)
    discrepancies = ctx.verify_printed_expansions(w)
    offset, slope = ctx.fit_correlation_scale(w)
    payload = {
        "bounds": {
            "projector_max": bounds.projector_max,
            "dichotomous_min": bounds.dichotomous_min,
            "correlation_min": bounds.correlation_min,
            "correlation_min_unconstrained": bounds.correlation_min_unconstrained,
        },
        "correlation_vs_witness": {"offset": offset, "slope": slope},
        "discrepancies": [d.as_dict() for d in discrepancies],
    }
    if args.format == "json":
        _emit(_json_text(payload), args.output)
        return EXIT_OK
    lines = ["classical bounds (2^9 enumeration):"]
    lines += [f"  {k:<30} {v}" for k, v in payload["bounds"].items()]
    lines.append(f"correlation form = {offset:.6f} + {slope:.6f} * <W>")
    lines.append(f"printed-expansion discrepancies: {len(discrepancies)}")
    for d in discrepancies:
        lines.append(
            f"  {d.term:<26} {d.component:<3} printed {d.printed:+.6f}  computed {d.computed:+.6f}  delta {d.delta:+.6f}"
        )
    _emit("\n".join(lines) + "\n", args.output)
    return EXIT_OK


# ------------------------------------------------------------------- parser


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _add_state_args(p: argparse.ArgumentParser) -> None:
    g = p.add_mutually_exclusive_group()
    g.add_argument("--state", help=f"named state: {', '.join(NAMED_STATES)}")
    g.add_argument("--diagonal", nargs=2, type=float, metavar=("THETA_P", "THETA_Q"),
                   help="diagonal state from the two pulse angles, degrees")
    g.add_argument("--state-json", help="state JSON text or path to a JSON file")
    g.add_argument("--random", type=int, metavar="SEED", help="seeded random state")
    p.add_argument("--polarization", type=float, default=1.0)


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="qutrit-ctx", description="Single-qutrit contextuality simulator")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("witness", help="evaluate every inequality form on a state")
    _add_state_args(p)
    p.add_argument("--format", choices=("table", "json"), default="table")
    p.add_argument("--dump-state", action="store_true", help="print the resolved state as JSON instead")
    p.add_argument("--output")
    p.set_defaults(func=cmd_witness)

    p = sub.add_parser("protocol", help="simulate the four-experiment readout")
    _add_state_args(p)
    p.add_argument("--format", choices=("table", "json"), default="table")
    p.add_argument("--output")
    p.set_defaults(func=cmd_protocol)

    p = sub.add_parser("single-shot", help="prepare a diagonal state and run the single-shot test")
    p.add_argument("--theta-p", type=float, required=True, help="degrees")
    p.add_argument("--theta-q", type=float, required=True, help="degrees")
    p.add_argument("--polarization", type=float, default=1.0)
    p.add_argument("--format", choices=("table", "json"), default="table")
    p.add_argument("--output")
    p.set_defaults(func=cmd_single_shot)

    p = sub.add_parser("table1", help="reproduce the diagonal-state table")
    p.add_argument("--format", choices=("csv", "json", "table"), default="csv")
    p.add_argument("--output")
    p.set_defaults(func=cmd_table1)

    p = sub.add_parser("evolve", help="witness time series under relaxation")
    _add_state_args(p)
    p.add_argument("--t1", type=float, default=1.0)
    p.add_argument("--t2", type=float, default=1.0)
    p.add_argument("--t-max", type=float, default=5.0)
    p.add_argument("--steps", type=int, default=101)
    p.add_argument("--format", choices=("csv", "json"), default="csv")
    p.add_argument("--output")
    p.set_defaults(func=cmd_evolve)

    p = sub.add_parser("verify", help="classical bounds and printed-expansion audit")
    p.add_argument("--format", choices=("table", "json"), default="table")
    p.add_argument("--output")
    p.set_defaults(func=cmd_verify)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except DomainError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except ValidationError as exc:
        print(f"invalid state: {exc}", file=sys.stderr)
        return EXIT_INVALID_STATE


if __name__ == "__main__":
    sys.exit(main())

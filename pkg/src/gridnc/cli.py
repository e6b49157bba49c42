"""Experiment runner: simulate, verify, count, sweep, and report.

Exit status contract: 0 when every verification passed, 1 when a run logged
invariant violations, 2 for usage errors.  Single runs emit JSON with a
stable key order; sweeps emit CSV with the fixed header
d,K,routing_tx,nc_tx,ratio,limit and LF line endings.  Identical invocations
produce byte-identical output.
"""

from __future__ import annotations

import argparse
import io
import json
import sys

from . import analysis, baseline, engine, fastsim
from .symbols import BIT, COEFF
from .theta import build_theta
from .topology import build_grid

USAGE_ERROR = 2


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="gridnc",
        description="Grid relay-coding simulator, verifier, and energy accounting",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_theta = sub.add_parser("theta", help="print the delay-offset sets as JSON")
    p_theta.add_argument("--dim", type=int, required=True)
    p_theta.add_argument("--out")

    p_sim = sub.add_parser("simulate", help="run the slot loop and verify it")
    p_sim.add_argument("--dim", type=int, required=True)
    p_sim.add_argument("--k", type=int, required=True)
    p_sim.add_argument("--slots", type=int, required=True)
    p_sim.add_argument("--payload", choices=("bits", "coeffs"), default="coeffs")
    p_sim.add_argument("--seed", type=int, default=0)
    p_sim.add_argument("--permissive", action="store_true",
                       help="log verification failures instead of aborting")
    p_sim.add_argument("--out")

    p_counts = sub.add_parser("counts", help="closed-form size and cost counts")
    p_counts.add_argument("--dim", type=int, required=True)
    p_counts.add_argument("--k", type=int, required=True)
    p_counts.add_argument("--out")

    p_benefit = sub.add_parser("benefit", help="routing/coding ratio and its limit")
    p_benefit.add_argument("--dim", type=int, required=True)
    p_benefit.add_argument("--k", type=int)
    p_benefit.add_argument("--model", choices=("fixed", "optimized"), default="fixed")
    p_benefit.add_argument("--alpha", type=float)
    p_benefit.add_argument("--out")

    p_sweep = sub.add_parser("sweep", help="CSV of ratios over a range of K")
    p_sweep.add_argument("--dim", type=int, required=True)
    p_sweep.add_argument("--k-min", type=int, required=True)
    p_sweep.add_argument("--k-max", type=int, required=True)
    p_sweep.add_argument("--k-step", type=int, default=1)
    p_sweep.add_argument("--out")

    return parser


def _validate(parser: argparse.ArgumentParser, args) -> None:
    if getattr(args, "dim", 1) < 1:
        parser.error("--dim must be >= 1")
    if getattr(args, "k", 2) is not None and getattr(args, "k", 2) < 2:
        parser.error("--k must be >= 2")
    if getattr(args, "slots", 1) < 1:
        parser.error("--slots must be >= 1")
    if args.command == "sweep":
        if args.k_min < 2 or args.k_max < args.k_min or args.k_step < 1:
            parser.error("need 2 <= k-min <= k-max and k-step >= 1")
    if args.command == "benefit":
        if args.model == "optimized" and args.alpha is None:
            parser.error("--alpha is required when --model optimized")
        if args.alpha is not None and args.alpha < 2:
            parser.error("--alpha must be >= 2")


def _json(obj) -> str:
    return json.dumps(obj, indent=2) + "\n"


def cmd_theta(args) -> tuple[int, str]:
    table = build_theta(args.dim)
    payload = {"d": table.d, "theta": [sorted(s) for s in table.sets]}
    return 0, _json(payload)


def cmd_simulate(args) -> tuple[int, str]:
    cfg = build_grid(args.dim, args.k)
    if args.payload == "bits":
        result = fastsim.simulate_bits(cfg, args.slots, seed=args.seed)
        delivered = (
            [result.delivered_first, result.delivered_last]
            if result.delivered_last else []
        )
        payload = {
            "d": cfg.d,
            "K": cfg.K,
            "slots": args.slots,
            "total_tx": result.total_tx,
            "per_slot_tx": result.per_slot_tx,
            "sessions": cfg.session_count,
            "delivered_generations": delivered,
            "violations": result.violations,
        }
        return (1 if result.violations else 0), _json(payload)

    state = engine.init(cfg, mode=COEFF, seed=args.seed, strict=not args.permissive)
    aborted = None
    try:
        summary = engine.run(state, args.slots)
    except engine.InvariantViolation:
        aborted = state.clock
        summary = None

    if summary is not None:
        ranges = sorted(set(summary.delivered.values()))
        delivered = [ranges[0][0], ranges[0][1]] if ranges else []
        payload = {
            "d": cfg.d,
            "K": cfg.K,
            "slots": args.slots,
            "total_tx": summary.total_tx,
            "per_slot_tx": summary.per_slot_tx,
            "sessions": summary.session_count,
            "delivered_generations": delivered,
            "violations": summary.violations,
        }
        return (1 if summary.violations else 0), _json(payload)

    violations = sum(len(log.violations) for log in state.logs)
    payload = {
        "d": cfg.d,
        "K": cfg.K,
        "slots": args.slots,
        "total_tx": sum(log.total_tx for log in state.logs),
        "per_slot_tx": state.logs[-1].total_tx if state.logs else 0,
        "sessions": cfg.session_count,
        "delivered_generations": [],
        "violations": violations,
        "aborted_at_slot": aborted,
    }
    return 1, _json(payload)


def cmd_counts(args) -> tuple[int, str]:
    cfg = build_grid(args.dim, args.k)
    payload = {
        "d": cfg.d,
        "K": cfg.K,
        "nodes": cfg.node_count,
        "internal": cfg.internal_count,
        "border": cfg.border_count,
        "sessions": cfg.session_count,
        "nc_tx": analysis.nc_tx_per_slot(cfg.d, cfg.K),
        "routing_tx": baseline.routing_total(cfg),
    }
    return 0, _json(payload)


def cmd_benefit(args) -> tuple[int, str]:
    d = args.dim
    if args.model == "fixed":
        model = analysis.FIXED_RANGE
        ratio = float(analysis.benefit_at(d, args.k)) if args.k is not None else None
        limit = float(analysis.benefit_limit(d))
    else:
        model = analysis.OPTIMIZED_RANGE
        ratio = (
            analysis.alt_model_benefit_at(d, args.k, args.alpha)
            if args.k is not None else None
        )
        limit = analysis.alt_model_benefit(d, args.alpha)
    payload = {
        "model": model,
        "d": d,
        "K": args.k,
        "alpha": args.alpha,
        "ratio": ratio,
        "limit": limit,
    }
    return 0, _json(payload)


def cmd_sweep(args) -> tuple[int, str]:
    d = args.dim
    limit = float(analysis.benefit_limit(d))
    buf = io.StringIO()
    buf.write("d,K,routing_tx,nc_tx,ratio,limit\n")
    for k in range(args.k_min, args.k_max + 1, args.k_step):
        routing = baseline.routing_total(build_grid(d, k))
        nc = analysis.nc_tx_per_slot(d, k)
        buf.write(f"{d},{k},{routing},{nc},{routing / nc:.6f},{limit:.6f}\n")
    return 0, buf.getvalue()


_COMMANDS = {
    "theta": cmd_theta,
    "simulate": cmd_simulate,
    "counts": cmd_counts,
    "benefit": cmd_benefit,
    "sweep": cmd_sweep,
}


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    _validate(parser, args)
    code, text = _COMMANDS[args.command](args)
    if args.out:
        with open(args.out, "w", newline="") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return code


if __name__ == "__main__":
    sys.exit(main())

"""Command-line entry point.

Exit status: 0 when every check holds, 1 on a mathematical violation or
trace failure, 2 on usage, parse or configuration errors.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import logging
import sys
from dataclasses import dataclass, field
from pathlib import Path

from . import groups as groups_mod
from .engine import compute_profile
from .errors import (ConditionOneError, LiteralParseError, StaleCheckpointError,
                     TraceFailure, ZeroSumError)
from .groups import enumerate_groups_of_order
from .lemmas import LemmaId, run_lemma
from .literals import element_json, parse_group_literal, parse_sequence_literal
from .theorem import SweepCheckpoint, groups_in_orders, search_counterexample, sweep
from .tracer import trace, trace_corpus

log = logging.getLogger("zerosum")

EXIT_OK, EXIT_VIOLATION, EXIT_USAGE = 0, 1, 2


class UsageError(Exception):
    pass


@dataclass
class RunConfig:
    max_order: int = groups_mod.MAX_ORDER
    workers: int = 1
    checkpoint_interval: int = 50_000
    output_format: str = "json"
    seed: int = 0
    paths: dict = field(default_factory=dict)

    def validate(self):
        if self.workers < 1:
            raise UsageError("--workers must be >= 1")
        if not 1 <= self.max_order <= groups_mod.MAX_ORDER:
            raise UsageError(f"--max-order must lie in [1, {groups_mod.MAX_ORDER}]")
        if self.checkpoint_interval < 1:
            raise UsageError("--checkpoint-interval must be >= 1")
        if self.output_format not in ("json", "csv"):
            raise UsageError("--format must be json or csv")


def parse_range(text: str) -> range:
    """'3' or '1..8' (inclusive)."""
    try:
        if ".." in text:
            lo, hi = text.split("..", 1)
            return range(int(lo), int(hi) + 1)
        v = int(text)
        return range(v, v + 1)
    except ValueError:
        raise UsageError(f"malformed range {text!r}, expected N or A..B") from None


def _emit(payload, path=None):
    text = payload if isinstance(payload, str) else json.dumps(payload, sort_keys=True)
    if not text.endswith("\n"):
        text += "\n"
    if path:
        Path(path).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)


def _csv(rows, header) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    for r in rows:
        w.writerow([r[h] for h in header])
    return buf.getvalue()


def _check_order(cfg: RunConfig, order: int):
    if order > cfg.max_order:
        raise UsageError(f"group order {order} exceeds --max-order {cfg.max_order}")


# -- subcommands -----------------------------------------------------------------

def cmd_groups(args, cfg):
    orders = parse_range(args.order)
    out = []
    for n in orders:
        _check_order(cfg, n)
        out.extend((n, g.literal) for g in enumerate_groups_of_order(n))
    if cfg.output_format == "csv":
        _emit(_csv([{"order": n, "group": lit} for n, lit in out], ["order", "group"]))
    else:
        _emit([lit for _, lit in out])
    return EXIT_OK


def cmd_compute(args, cfg):
    if cfg.output_format == "csv":
        raise UsageError("compute output is JSON only")
    s = parse_sequence_literal(args.sequence)
    _check_order(cfg, s.group.order)
    prof = compute_profile(s)
    rows = args.row or list(range(1, len(s) + 1))
    out = {}
    for r in rows:
        if not 1 <= r <= len(s):
            raise UsageError(f"row {r} outside [1, {len(s)}]")
        out[str(r)] = [element_json(s.group, e) for e in prof.row(r).elements]
    _emit({"sequence": str(s), "rows": out})
    return EXIT_OK


class _CheckpointFile:
    """All per-run checkpoints of one invocation, in a single JSON file."""

    def __init__(self, path, resume: bool, planned: set):
        self.path = Path(path) if path else None
        self.entries: dict[tuple[str, int], SweepCheckpoint] = {}
        if resume:
            if self.path is None or not self.path.exists():
                raise UsageError("--resume needs an existing --checkpoint file")
            data = json.loads(self.path.read_text(encoding="utf-8"))
            for d in data.get("checkpoints", []):
                cp = SweepCheckpoint.from_dict(d)
                key = (cp.group, cp.length)
                if key not in planned:
                    raise StaleCheckpointError(
                        f"checkpoint entry {cp.group} length {cp.length} is not part of this run")
                self.entries[key] = cp

    def get(self, key):
        return self.entries.get(key)

    def update(self, cp: SweepCheckpoint):
        self.entries[(cp.group, cp.length)] = SweepCheckpoint.from_dict(cp.to_dict())
        if self.path is None:
            return
        data = {"checkpoints": [c.to_dict() for _, c in sorted(self.entries.items())]}
        tmp = self.path.with_suffix(self.path.suffix + ".tmp")
        tmp.write_text(json.dumps(data, sort_keys=True) + "\n", encoding="utf-8")
        tmp.replace(self.path)


def cmd_verify_theorem(args, cfg):
    if bool(args.group) == bool(args.all_orders):
        raise UsageError("give exactly one of --group or --all-orders")
    if args.group:
        grps = [parse_group_literal(args.group)]
    else:
        r = parse_range(args.all_orders)
        grps = groups_in_orders(r.start, r.stop - 1)
    ks = parse_range(args.k)
    if ks.start < 1:
        raise UsageError("--k must be >= 1")
    for g in grps:
        _check_order(cfg, g.order)
    offset = 1 if args.self_test else 0
    planned = {(g.literal, g.order + k) for g in grps for k in ks}
    cpf = _CheckpointFile(args.checkpoint, args.resume, planned)
    runs = []
    found = 0
    for g in grps:
        for k in ks:
            rep = sweep(g, k, resume=cpf.get((g.literal, g.order + k)),
                        checkpoint_interval=cfg.checkpoint_interval, tight_cap=args.tight_cap,
                        workers=cfg.workers, bound_offset=offset,
                        automorphism_filter=args.automorphism_filter,
                        on_checkpoint=cpf.update)
            d = rep.to_dict()
            d["counterexample_count"] = rep.counterexample_count
            runs.append(d)
            found += rep.counterexample_count
    if cfg.output_format == "csv":
        header = ["group", "n", "k", "total", "condition1", "condition2", "tight_count",
                  "counterexample_count"]
        _emit(_csv(runs, header), args.report)
    else:
        _emit({"runs": runs, "counterexamples_total": found, "self_test": args.self_test},
              args.report)
    if args.self_test:
        return EXIT_OK if found else EXIT_VIOLATION
    return EXIT_VIOLATION if found else EXIT_OK


def cmd_verify_lemmas(args, cfg):
    lemmas = args.lemma or [lem.value for lem in LemmaId]
    reports = []
    for lem in lemmas:
        rep = run_lemma(lem, max_order=args.max_order_lemma, samples=args.samples, seed=cfg.seed)
        reports.append(rep.to_dict())
    if cfg.output_format == "csv":
        _emit(_csv(reports, ["lemma", "checked", "held", "violated"]), args.report)
    else:
        _emit({"lemmas": reports}, args.report)
    return EXIT_VIOLATION if any(r["violated"] for r in reports) else EXIT_OK


def cmd_trace(args, cfg):
    if cfg.output_format == "csv":
        raise UsageError("traces are JSON only")
    s = parse_sequence_literal(args.sequence)
    _check_order(cfg, s.group.order)
    rep = trace(s, exhaustive_choices=args.exhaustive_choices)
    _emit(rep.to_json(), args.json)
    return EXIT_OK


def cmd_trace_corpus(args, cfg):
    if cfg.output_format == "csv":
        raise UsageError("corpus statistics are JSON only")
    r = parse_range(args.all_orders)
    out = []
    failures = 0
    for g in groups_in_orders(r.start, r.stop - 1):
        _check_order(cfg, g.order)
        for k in parse_range(args.k):
            rep = sweep(g, k, keep_condition2=True, workers=cfg.workers, tight_cap=0)
            stats = trace_corpus(rep, exhaustive_choices=args.exhaustive_choices,
                                 workers=cfg.workers, fail_fast=False)
            failures += stats.failures
            out.append({"group": g.literal, "k": k, **stats.to_dict()})
    _emit({"corpus": out, "failures": failures}, args.report)
    return EXIT_VIOLATION if failures else EXIT_OK


def cmd_search(args, cfg):
    if cfg.output_format == "csv":
        raise UsageError("search output is JSON only")
    orders = parse_range(args.orders)
    for n in orders:
        _check_order(cfg, n)
    offset = 1 if args.self_test else 0
    hit = search_counterexample(orders, args.k_max, bound_offset=offset, workers=cfg.workers)
    _emit({"counterexample": hit.to_dict() if hit else None, "self_test": args.self_test})
    if args.self_test:
        return EXIT_OK if hit else EXIT_VIOLATION
    return EXIT_VIOLATION if hit else EXIT_OK


# -- parser ----------------------------------------------------------------------

def _global_options(p: argparse.ArgumentParser, suppress: bool, max_order: bool = True):
    d = (lambda v: argparse.SUPPRESS) if suppress else (lambda v: v)
    p.add_argument("--workers", type=int, default=d(1), help="worker processes")
    p.add_argument("--seed", type=int, default=d(0), help="seed for randomized suites")
    p.add_argument("--format", dest="output_format", choices=["json", "csv"], default=d("json"))
    if max_order:
        p.add_argument("--max-order", type=int, default=d(groups_mod.MAX_ORDER),
                       help="largest group order accepted")
    p.add_argument("--checkpoint-interval", type=int, default=d(50_000))
    p.add_argument("-v", "--verbose", action="store_true", default=d(False))


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="zerosum", description=__doc__.splitlines()[0])
    _global_options(p, suppress=False)
    sub = p.add_subparsers(dest="command", required=True)
    common = argparse.ArgumentParser(add_help=False)
    _global_options(common, suppress=True)

    s = sub.add_parser("groups", parents=[common], help="list abelian groups of an order")
    s.add_argument("--order", required=True, help="N or A..B")
    s.set_defaults(func=cmd_groups)

    s = sub.add_parser("compute", parents=[common], help="print Sigma_r rows of a sequence")
    s.add_argument("--sequence", required=True)
    s.add_argument("--row", type=int, action="append")
    s.set_defaults(func=cmd_compute)

    s = sub.add_parser("verify-theorem", parents=[common], help="exhaustive theorem sweep")
    s.add_argument("--group")
    s.add_argument("--all-orders")
    s.add_argument("--k", default="1")
    s.add_argument("--checkpoint")
    s.add_argument("--resume", action="store_true")
    s.add_argument("--report")
    s.add_argument("--tight-cap", type=int, default=100)
    s.add_argument("--self-test", action="store_true", help="inflate the bound by one")
    s.add_argument("--automorphism-filter", action="store_true")
    s.set_defaults(func=cmd_verify_theorem)

    lemma_common = argparse.ArgumentParser(add_help=False)
    _global_options(lemma_common, suppress=True, max_order=False)
    s = sub.add_parser("verify-lemmas", parents=[lemma_common], help="run the lemma checkers")
    s.add_argument("--lemma", action="append", choices=[lem.value for lem in LemmaId])
    # after the subcommand, --max-order sizes the lemma sweep instead of limiting groups
    s.add_argument("--max-order", dest="max_order_lemma", type=int)
    s.add_argument("--samples", type=int)
    s.add_argument("--report")
    s.set_defaults(func=cmd_verify_lemmas)

    s = sub.add_parser("trace", parents=[common], help="trace the proof construction")
    s.add_argument("--sequence", required=True)
    s.add_argument("--exhaustive-choices", action="store_true")
    s.add_argument("--json")
    s.set_defaults(func=cmd_trace)

    s = sub.add_parser("trace-corpus", parents=[common], help="trace every CONDITION_2 instance")
    s.add_argument("--all-orders", required=True)
    s.add_argument("--k", default="1")
    s.add_argument("--exhaustive-choices", action="store_true")
    s.add_argument("--report")
    s.set_defaults(func=cmd_trace_corpus)

    s = sub.add_parser("search", parents=[common], help="hunt for a counterexample")
    s.add_argument("--orders", required=True)
    s.add_argument("--k-max", type=int, default=3)
    s.add_argument("--self-test", action="store_true")
    s.set_defaults(func=cmd_search)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        # argparse exits 2 on bad usage and 0 after --help
        return EXIT_USAGE if e.code else EXIT_OK
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    cfg = RunConfig(max_order=args.max_order, workers=args.workers,
                    checkpoint_interval=args.checkpoint_interval,
                    output_format=args.output_format, seed=args.seed)
    try:
        cfg.validate()
        return args.func(args, cfg)
    except TraceFailure as e:
        print(f"trace failure: {e} {e.objects}", file=sys.stderr)
        return EXIT_VIOLATION
    except (UsageError, LiteralParseError, StaleCheckpointError, ConditionOneError) as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_USAGE
    except ZeroSumError as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_USAGE


run = main

if __name__ == "__main__":
    sys.exit(main())

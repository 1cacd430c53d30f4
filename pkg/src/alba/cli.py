"""Command-line front end: ``alba classify|run|verify|corpus``.

Exit status: 0 when every input succeeds, 1 on parse or configuration
errors, 2 when the oracle finds a discrepancy, 3 when a run or corpus item
fails.
"""

from __future__ import annotations

import argparse
import os
import sys
from dataclasses import dataclass, field
from pathlib import Path

from alba.classify import find_inductive_certificate, is_inductive
from alba.corpus import generate_corpus
from alba.engine import (
    Mode,
    check_compact_appropriate,
    check_pivotality,
    check_safety,
    check_topological_adequacy,
    run,
)
from alba.errors import AlbaError
from alba.models import equivalence_oracle, model_pool, parse_model
from alba.syntax import expand_signature, parse_inequality, parse_signature
from alba.syntax.parser import format_atom
from alba.syntax.terms import atom_key
from alba.trees import dump_tree, inequality_trees

EXIT_OK, EXIT_CONFIG, EXIT_DISCREPANT, EXIT_FAILURE = 0, 1, 2, 3

_COLORS = {"INDUCTIVE": 32, "EQUIVALENT": 32, "NONE": 33, "DISCREPANT": 31, "FAILURE": 31}


@dataclass
class RunConfig:
    sig_path: str
    command: str
    mode: Mode = Mode.STRATEGIC
    pivotal: bool = True
    trace_path: str | None = None
    model_paths: list[str] = field(default_factory=list)
    max_size: int | None = None
    depth: int = 64
    seed: int = 0
    dump_trees: bool = False


def _paint(line: str) -> str:
    if os.environ.get("ALBA_COLOR") != "1":
        return line
    head, _, rest = line.partition(" ")
    code = _COLORS.get(head)
    if code is None:
        return line
    return f"\x1b[{code}m{head}\x1b[0m" + (f" {rest}" if rest else "")


def _classify(cfg, sig, ineqs, out) -> int:
    for ineq in ineqs:
        if cfg.dump_trees:
            for tree in inequality_trees(ineq, sig):
                out.append(dump_tree(tree))
        cert = find_inductive_certificate(ineq, sig)
        if cert is not None and is_inductive(ineq, cert, sig):
            out.append(f"INDUCTIVE {cert.describe()}")
        else:
            out.append("NONE")
    return EXIT_OK


def _run(cfg, sig, ineqs, out) -> int:
    status = EXIT_OK
    traces = []
    for k, ineq in enumerate(ineqs):
        res = run(ineq, sig, cfg.mode, pivotal=cfg.pivotal, max_depth=cfg.depth)
        out.append(res.render())
        traces.append(f"input {k}\n{res.trace.render()}")
        if not res.ok:
            status = EXIT_FAILURE
    if cfg.trace_path:
        Path(cfg.trace_path).write_text("\n".join(traces) + "\n", encoding="utf-8")
    return status


def _format_assignment(assignment) -> str:
    return ",".join(f"{format_atom(a)}={v}" for a, v in sorted(assignment.items(), key=lambda kv: atom_key(kv[0])))


def _verify(cfg, sig, ineqs, out) -> int:
    if cfg.model_paths:
        models = [parse_model(Path(p).read_text(encoding="utf-8"), sig, Path(p).name) for p in cfg.model_paths]
    else:
        models = model_pool(sig, max_size=cfg.max_size or 5, seed=cfg.seed)
    status = EXIT_OK
    for ineq in ineqs:
        res = run(ineq, sig, cfg.mode, pivotal=cfg.pivotal, max_depth=cfg.depth)
        if not res.ok:
            out.append(res.render())
            status = max(status, EXIT_FAILURE)
            continue
        total, bad = 0, None
        for m in models:
            v = equivalence_oracle(ineq, res.outputs, m)
            total += v.assignments
            if not v:
                bad = v
                break
        if bad is None:
            noun = "model" if len(models) == 1 else "models"
            out.append(f"EQUIVALENT ({total} assignments, {len(models)} {noun})")
        else:
            out.append(
                f"DISCREPANT model={bad.model.name} assignment={_format_assignment(bad.counterexample)}"
                f" witness={bad.witness_side}"
            )
            status = EXIT_DISCREPANT
    return status


def _trace_invariants(res, sig) -> bool:
    systems = [s for s in res.trace.initial] + [step.after for step in res.trace.steps]
    return all(check_topological_adequacy(s, sig) and check_compact_appropriate(s, sig) for s in systems)


def _corpus(cfg, sig, out) -> int:
    items = generate_corpus(cfg.seed)
    counts = dict(success=0, safe=0, pivotal=0, adequate=0, equivalent=0)
    pools = {}
    oracle = cfg.max_size is not None
    for it in items:
        res = run(it.ineq, it.sig, Mode.STRATEGIC, certificate=it.certificate, pivotal=cfg.pivotal)
        if not res.ok:
            continue
        counts["success"] += 1
        counts["safe"] += check_safety(res.trace)
        counts["pivotal"] += check_pivotality(res.trace)
        counts["adequate"] += _trace_invariants(res, expand_signature(it.sig))
        if oracle:
            key = id(it.sig)
            if key not in pools:
                pools[key] = model_pool(it.sig, max_size=cfg.max_size, per_lattice=4, seed=cfg.seed)
            counts["equivalent"] += all(equivalence_oracle(it.ineq, res.outputs, m) for m in pools[key])
    n = len(items)
    out.append(f"corpus seed={cfg.seed} inputs={n}")
    for name, c in counts.items():
        if name == "equivalent" and not oracle:
            continue
        out.append(f"{name} {c}/{n}")
    if counts["equivalent"] < n and oracle:
        return EXIT_DISCREPANT
    checked = [c for k, c in counts.items() if k != "equivalent"]
    return EXIT_OK if all(c == n for c in checked) else EXIT_FAILURE


def dispatch(cfg: RunConfig, inputs: list[str]) -> tuple[int, list[str]]:
    """Run one command; returns ``(exit status, report lines)``."""
    sig = parse_signature(Path(cfg.sig_path).read_text(encoding="utf-8"))
    out: list[str] = []
    if cfg.command == "corpus":
        return _corpus(cfg, sig, out), out
    ineqs = [parse_inequality(s, sig) for s in inputs]
    handler = {"classify": _classify, "run": _run, "verify": _verify}[cfg.command]
    return handler(cfg, sig, ineqs, out), out


class _Parser(argparse.ArgumentParser):
    def error(self, message):  # usage errors are configuration errors
        self.print_usage(sys.stderr)
        self.exit(EXIT_CONFIG, f"{self.prog}: error: {message}\n")


def build_parser() -> argparse.ArgumentParser:
    common = _Parser(add_help=False)
    common.add_argument("--sig", required=True, metavar="PATH", help="signature file")
    common.add_argument("--model", action="append", default=[], metavar="PATH", help="model file (repeatable)")
    common.add_argument("--mode", choices=[m.value for m in Mode], default=Mode.STRATEGIC.value)
    common.add_argument("--no-pivotal", action="store_true", help="allow non-pivotal approximation")
    common.add_argument("--trace", metavar="PATH", help="write the rule trace to PATH")
    common.add_argument("--max-size", type=int, metavar="N", help="largest enumerated lattice")
    common.add_argument("--depth", type=int, default=64, metavar="N", help="search depth cap")
    common.add_argument("--seed", type=int, default=0, metavar="N", help="random seed")

    parser = _Parser(prog="alba", description="Constructive ALBA workbench for lattice expansions.")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)
    for name, text in (
        ("classify", "print an inductive certificate or NONE"),
        ("run", "run ALBA and print pure quasi-inequalities"),
        ("verify", "check ALBA output against the input on finite models"),
    ):
        p = sub.add_parser(name, parents=[common], help=text)
        p.add_argument("inequalities", nargs="+", metavar="INEQ")
        if name == "classify":
            p.add_argument("--dump-trees", action="store_true", help="print the signed generation trees")
    sub.add_parser("corpus", parents=[common], help="generate and run a random inductive corpus")
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    cfg = RunConfig(
        sig_path=args.sig,
        command=args.command,
        mode=Mode(args.mode),
        pivotal=not args.no_pivotal,
        trace_path=args.trace,
        model_paths=args.model,
        max_size=args.max_size,
        depth=args.depth,
        seed=args.seed,
        dump_trees=getattr(args, "dump_trees", False),
    )
    try:
        status, lines = dispatch(cfg, getattr(args, "inequalities", []))
    except (AlbaError, OSError) as exc:
        print(f"alba: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    for line in lines:
        for part in line.split("\n"):
            print(_paint(part))
    return status


if __name__ == "__main__":
    sys.exit(main())

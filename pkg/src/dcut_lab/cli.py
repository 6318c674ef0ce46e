"""``dcut-lab`` command line: solve, check, reduce, verify, gen.

Exit codes: 0 decided / passed, 1 battery failure, inconclusive battery or
solver timeout, 2 usage or input error.
"""

from __future__ import annotations

import argparse
import json
import sys
import time
from fractions import Fraction
from pathlib import Path
from typing import Callable, Optional, Sequence

from .errors import DcutLabError, SearchTimeout
from .gadgets import DInstance, build_compactor, build_d_graph, build_semi_compactor
from .graph import TWO_K2, TWO_S2, Graph, format_graph, parse_graph
from .harness import BATTERIES, DEFAULT_CASE_TIMEOUT, GeneratorConfig, gen_dinstance, gen_graph, run_battery
from .problems import (
    DEFAULT_CONTRACTION_BOUND,
    BicliqueCoverWitness,
    ContractionWitness,
    CutWitness,
    PartitionWitness,
    check_biclique_cover,
    check_compaction,
    check_contraction,
    check_cut,
    check_partition,
    check_retraction,
    check_surjective,
    find_2_biclique_vertex_cover,
    find_2k2_partition,
    find_2s2_partition,
    find_compaction_c4r,
    find_disconnected_cut,
    find_proper_biclique_contraction,
    find_retraction_c4r,
    find_surjective_hom_c4r,
)
from .relational import SearchStats

PROBLEMS = (
    "disconnected-cut",
    "2k2-partition",
    "2s2-partition",
    "biclique-cover-2",
    "surjective-c4r",
    "retract-c4r",
    "compact-c4r",
    "biclique-contract",
)


class UsageError(Exception):
    pass


def _read(path: str) -> str:
    try:
        return Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise UsageError(f"cannot read {path}: {exc.strerror}") from None


def _parse_emb(text: Optional[str]) -> tuple[int, ...]:
    if not text:
        raise UsageError("retract-c4r needs --emb h0,h1,h2,h3")
    try:
        emb = tuple(int(x) for x in text.split(","))
    except ValueError:
        raise UsageError(f"--emb must be four comma-separated vertex ids, got {text!r}") from None
    if len(emb) != 4:
        raise UsageError(f"--emb must name exactly four vertices, got {len(emb)}")
    return emb


def _labels_json(f) -> dict:
    return {"labels": list(f)}


def _solver(problem: str, args) -> Callable[[Graph, SearchStats], Optional[dict]]:
    def wrap(fn, *extra):
        def run(g, stats):
            w = fn(g, *extra, stats=stats)
            if w is None:
                return None
            return w.to_json() if hasattr(w, "to_json") else _labels_json(w)
        return run

    if problem == "retract-c4r":
        return wrap(find_retraction_c4r, _parse_emb(args.emb))
    if problem == "biclique-contract":
        bound = args.bound if args.bound is not None else DEFAULT_CONTRACTION_BOUND

        def contract(g, stats):
            w = find_proper_biclique_contraction(g, bound=bound, stats=stats)
            return None if w is None else w.to_json()
        return contract
    table = {
        "disconnected-cut": find_disconnected_cut,
        "2k2-partition": find_2k2_partition,
        "2s2-partition": find_2s2_partition,
        "biclique-cover-2": find_2_biclique_vertex_cover,
        "surjective-c4r": find_surjective_hom_c4r,
        "compact-c4r": find_compaction_c4r,
    }
    return wrap(table[problem])


def cmd_solve(args) -> int:
    g = parse_graph(_read(args.graph))
    solve = _solver(args.problem, args)
    start = time.monotonic()
    stats = SearchStats(deadline=None if args.timeout is None else start + args.timeout)
    out: dict = {"problem": args.problem}
    code = 0
    try:
        witness = solve(g, stats)
        out["answer"] = witness is not None
        out["witness"] = witness
    except SearchTimeout:
        out["answer"] = None
        out["witness"] = None
        out["timeout"] = True
        code = 1
    out["nodes_explored"] = stats.nodes
    out["millis"] = int((time.monotonic() - start) * 1000)
    print(json.dumps(out, sort_keys=True))
    return code


def _frozen(seq) -> frozenset:
    return frozenset(int(v) for v in seq)


def check_witness(problem: str, g: Graph, w: dict, emb: Optional[Sequence[int]] = None) -> bool:
    """Re-validate a witness object as printed by ``solve``."""
    try:
        if problem == "disconnected-cut":
            return check_cut(g, CutWitness(_frozen(w["u"])))
        if problem in ("2k2-partition", "2s2-partition"):
            m = TWO_K2 if problem == "2k2-partition" else TWO_S2
            return check_partition(g, m, PartitionWitness(tuple(_frozen(b) for b in w["blocks"])))
        if problem == "biclique-cover-2":
            x = tuple(_frozen(s) for s in w["x"])
            y = tuple(_frozen(s) for s in w["y"])
            return check_biclique_cover(g, BicliqueCoverWitness(x, y))
        if problem == "biclique-contract":
            blocks = tuple(_frozen(b) for b in w["blocks"])
            return check_contraction(g, ContractionWitness(blocks, tuple(w["sides"])))
        f = [int(x) for x in w["labels"]]
        if problem == "surjective-c4r":
            return check_surjective(g, f)
        if problem == "compact-c4r":
            return check_compaction(g, f)
        if problem == "retract-c4r":
            return check_retraction(g, emb, f)
    except (KeyError, TypeError, ValueError):
        return False
    raise UsageError(f"unknown problem {problem!r}")


def cmd_check(args) -> int:
    g = parse_graph(_read(args.graph))
    try:
        obj = json.loads(_read(args.witness))
    except json.JSONDecodeError as exc:
        raise UsageError(f"witness is not JSON: {exc}") from None
    if isinstance(obj, dict) and "witness" in obj:
        obj = obj["witness"]
    if not isinstance(obj, dict):
        raise UsageError("witness must be a JSON object")
    emb = _parse_emb(args.emb) if args.problem == "retract-c4r" else None
    ok = check_witness(args.problem, g, obj, emb)
    print(json.dumps({"problem": args.problem, "valid": ok}))
    return 0 if ok else 1


def cmd_reduce(args) -> int:
    inst = DInstance.from_json(_read(args.instance))
    d = build_d_graph(inst)
    if args.stage == "dgraph":
        g, labels = d.graph, d.labels_json()
    elif args.stage == "semicompactor":
        sc = build_semi_compactor(d)
        g, labels = sc.graph, sc.labels_json()
    else:
        g = build_compactor(d.graph, d.h)
        labels = d.labels_json() + [{"id": v, "type": "compactor"} for v in range(d.graph.n, g.n)]
    out = Path(args.output)
    out.write_text(format_graph(g, comment=f"{args.stage} of {Path(args.instance).name}"), encoding="utf-8")
    sidecar = out.with_name(out.name + ".labels.json")
    sidecar.write_text(json.dumps({"stage": args.stage, "h": list(d.h), "vertices": labels}, indent=1),
                       encoding="utf-8")
    print(json.dumps({"stage": args.stage, "n": g.n, "m": len(g.edges), "graph": str(out),
                      "labels": str(sidecar)}))
    return 0


def cmd_verify(args) -> int:
    opts = {k: v for k, v in (("count", args.count), ("exhaustive_n", args.exhaustive_n),
                              ("random_count", args.random_count), ("max_elements", args.max_elements),
                              ("max_tuples", args.max_tuples), ("extra_count", args.extra_count),
                              ("max_n", args.max_n)) if v is not None}
    report = run_battery(args.battery, seed=args.seed, timeout=args.timeout, threads=args.threads, **opts)
    path = Path(args.report or f"{args.battery}-report.json")
    path.write_text(report.to_json() + "\n", encoding="utf-8")
    print(report.summary)
    return report.exit_code


def _tuples(text: str):
    parts = [int(x) for x in text.split(",")]
    return parts[0] if len(parts) == 1 else tuple(parts)


def cmd_gen(args) -> int:
    if args.kind == "graph":
        cfg = GeneratorConfig(seed=args.seed, graph_n=args.n, edge_probability=Fraction(args.p))
        text = format_graph(gen_graph(cfg))
    else:
        cfg = GeneratorConfig(seed=args.seed, num_elements=args.elements, tuples_per_relation=_tuples(args.tuples))
        text = gen_dinstance(cfg).to_json() + "\n"
    if args.output:
        Path(args.output).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)
    return 0


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="dcut-lab", description="Disconnected cuts, C4 homomorphisms and reduction gadgets.")
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("solve", help="decide one problem on a graph file")
    s.add_argument("problem", choices=PROBLEMS)
    s.add_argument("graph")
    s.add_argument("--emb", help="h0,h1,h2,h3 vertex ids for retract-c4r")
    s.add_argument("--bound", type=int, help="vertex limit for biclique-contract")
    s.add_argument("--timeout", type=float, help="seconds before giving up (exit 1)")
    s.set_defaults(func=cmd_solve)

    c = sub.add_parser("check", help="re-validate a witness printed by solve")
    c.add_argument("problem", choices=PROBLEMS)
    c.add_argument("graph")
    c.add_argument("witness", help="JSON file: solve output or a bare witness object")
    c.add_argument("--emb")
    c.set_defaults(func=cmd_check)

    r = sub.add_parser("reduce", help="build a gadget graph from a D-instance JSON file")
    r.add_argument("instance")
    r.add_argument("--stage", choices=("dgraph", "semicompactor", "compactor"), default="dgraph")
    r.add_argument("-o", "--output", required=True)
    r.set_defaults(func=cmd_reduce)

    v = sub.add_parser("verify", help="run a verification battery")
    v.add_argument("battery", choices=BATTERIES)
    v.add_argument("--seed", type=int, default=0)
    v.add_argument("--count", type=int)
    v.add_argument("--exhaustive-n", type=int)
    v.add_argument("--random-count", type=int)
    v.add_argument("--max-elements", type=int)
    v.add_argument("--max-tuples", type=int)
    v.add_argument("--extra-count", type=int, help="lemma4: extra random instances (3 elements, 3 tuples)")
    v.add_argument("--max-n", type=int, help="oracle: largest graph order")
    v.add_argument("--timeout", type=float, default=DEFAULT_CASE_TIMEOUT, help="seconds per case")
    v.add_argument("--threads", type=int)
    v.add_argument("--report", help="report path (default BATTERY-report.json)")
    v.set_defaults(func=cmd_verify)

    g = sub.add_parser("gen", help="generate a random graph or D-instance")
    g.add_argument("kind", choices=("graph", "dinstance"))
    g.add_argument("--seed", type=int, default=0)
    g.add_argument("--n", type=int, default=6)
    g.add_argument("--p", default="1/2", help="edge probability as a fraction")
    g.add_argument("--elements", type=int, default=2)
    g.add_argument("--tuples", default="1", help="per relation: one int or four comma-separated ints")
    g.add_argument("-o", "--output")
    g.set_defaults(func=cmd_gen)
    return p


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return 0 if exc.code == 0 else 2
    try:
        return args.func(args)
    except (UsageError, DcutLabError, ValueError) as exc:
        print(f"dcut-lab: error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())

"""Command-line entry points: run, preprocess, serve, report.

Exit codes: 0 success, 2 usage error, 1 runtime failure.  Every subcommand is
idempotent on re-run with unchanged inputs.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from . import benchmarks
from .evolution import EvolutionConfig, run_nsga2, run_sms_emoa
from .ingest import save_run_log
from .measures import MeasureConfig, default_anchor, measure_run
from .store import WorkspaceStore

PROBLEMS = ("dtlz1", "dtlz2", "dtlz3")
ALGORITHMS = ("nsga2", "sms-emoa")


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="emoscope", description="EMO run comparison workbench")
    sub = parser.add_subparsers(dest="command", required=True)

    p_run = sub.add_parser("run", help="execute a built-in engine and write its run log")
    p_run.add_argument("--problem", required=True, choices=PROBLEMS)
    p_run.add_argument("--algorithm", required=True, choices=ALGORITHMS)
    p_run.add_argument("--pop", type=int, default=100, help="population size (even, >= 4)")
    p_run.add_argument("--gens", type=int, default=500, help="number of generation records")
    p_run.add_argument("--seed", type=int, default=0)
    p_run.add_argument("--out", required=True, help="output directory for the JSONL log")
    p_run.add_argument("--m", type=int, default=3, help="number of objectives")
    p_run.add_argument("--id", default=None, help="algorithm id for the log (default: engine name)")

    p_pre = sub.add_parser("preprocess", help="down-sample runs and fill measure/similarity caches")
    p_pre.add_argument("workspace", help="workspace directory (reference.csv + runs/)")
    p_pre.add_argument("--sample", type=int, default=None, help="down-sampling target (>= 2)")
    p_pre.add_argument("--pairs", default="", help="run pairs for generation EMD, e.g. a:b,c:d")
    p_pre.add_argument("--all", action="store_true", help="generation EMD across all runs (expensive)")
    p_pre.add_argument("--workers", type=int, default=None, help="similarity workers (EMOSCOPE_WORKERS overrides)")

    p_srv = sub.add_parser("serve", help="serve the workspace API")
    p_srv.add_argument("workspace")
    p_srv.add_argument("--port", type=int, default=8765)
    p_srv.add_argument("--host", default="127.0.0.1")
    p_srv.add_argument("--ui", default=None, help="directory of built UI assets to serve at /")

    p_rep = sub.add_parser("report", help="print the quality-measure table and write report.csv")
    p_rep.add_argument("workspace")
    p_rep.add_argument("--csv", default=None, help="CSV path (default: <workspace>/report.csv)")
    return parser


def cmd_run(args) -> int:
    problem = benchmarks.dtlz(int(args.problem[-1]), args.m)
    cfg = EvolutionConfig(population_size=args.pop, generations=args.gens, seed=args.seed)
    engine = run_nsga2 if args.algorithm == "nsga2" else run_sms_emoa
    algorithm_id = args.id or args.algorithm
    run = engine(problem, cfg, algorithm_id=algorithm_id)

    out_dir = Path(args.out)
    out_dir.mkdir(parents=True, exist_ok=True)
    out_path = out_dir / f"{algorithm_id}.jsonl"
    save_run_log(run, out_path)

    reference = benchmarks.reference_set(problem)
    series = measure_run(run, reference, MeasureConfig(hv_anchor=default_anchor(reference)))
    print(f"wrote {out_path} ({len(run)} generations)")
    print(f"best IGD {series.igd.min():.6f} @ gen {series.best_igd_gen}; best HV {series.hv.max():.6f} @ gen {series.best_hv_gen}")
    return 0


def cmd_preprocess(args) -> int:
    pairs = []
    for chunk in args.pairs.split(","):
        if not chunk:
            continue
        a, sep, b = chunk.partition(":")
        if not sep or not a or not b:
            print(f"error: malformed pair {chunk!r}; expected a:b", file=sys.stderr)
            return 2
        pairs.append((a, b))
    if args.sample is not None and args.sample < 2:
        print(f"error: --sample must be >= 2, got {args.sample}", file=sys.stderr)
        return 2
    store = WorkspaceStore(args.workspace)
    store.preprocess(sample_target=args.sample, pairs=pairs, all_pairs=args.all, workers=args.workers)
    return 0


def cmd_serve(args) -> int:
    import uvicorn

    from .service import create_app

    if args.ui is not None and not Path(args.ui).is_dir():
        print(f"error: UI directory {args.ui!r} does not exist", file=sys.stderr)
        return 2
    store = WorkspaceStore(args.workspace)
    app = create_app(store, ui_dir=args.ui)
    uvicorn.run(app, host=args.host, port=args.port, log_level="info")
    return 0


def _format_report(rows: list[dict]) -> tuple[str, str]:
    header = ["algorithm", "best_igd", "best_igd_gen", "last_igd", "best_hv", "best_hv_gen", "last_hv"]
    table_rows = [
        [
            r["id"],
            f"{r['best_igd']:.6f}",
            str(r["best_igd_gen"]),
            f"{r['last_igd']:.6f}",
            f"{r['best_hv']:.6f}",
            str(r["best_hv_gen"]),
            f"{r['last_hv']:.6f}",
        ]
        for r in rows
    ]
    widths = [max(len(h), *(len(row[i]) for row in table_rows)) if table_rows else len(h) for i, h in enumerate(header)]
    lines = ["  ".join(h.ljust(w) for h, w in zip(header, widths))]
    for row in table_rows:
        lines.append("  ".join(c.ljust(w) for c, w in zip(row, widths)))
    text = "\n".join(lines) + "\n"

    csv_lines = [",".join(header)]
    for r in rows:
        csv_lines.append(
            ",".join(
                [
                    r["id"],
                    repr(r["best_igd"]),
                    str(r["best_igd_gen"]),
                    repr(r["last_igd"]),
                    repr(r["best_hv"]),
                    str(r["best_hv_gen"]),
                    repr(r["last_hv"]),
                ]
            )
        )
    return text, "\n".join(csv_lines) + "\n"


def cmd_report(args) -> int:
    store = WorkspaceStore(args.workspace)
    missing = [p for p in store.run_files() if not (store.measures_dir / f"{p.stem}.json").exists()]
    if not store.run_files():
        print(f"error: no run logs under {store.runs_dir}", file=sys.stderr)
        return 1
    if missing:
        print(f"error: measure caches missing for {[p.stem for p in missing]}; run preprocess first", file=sys.stderr)
        return 1
    workspace = store.load(log=lambda s: print(s, file=sys.stderr))
    rows = []
    for rid in workspace.run_ids:
        s = workspace.measures[rid]
        rows.append(
            {
                "id": rid,
                "best_igd": float(s.igd.min()),
                "best_igd_gen": s.best_igd_gen,
                "last_igd": float(s.igd[-1]),
                "best_hv": float(s.hv.max()),
                "best_hv_gen": s.best_hv_gen,
                "last_hv": float(s.hv[-1]),
            }
        )
    rows.sort(key=lambda r: (r["best_igd"], r["id"]))  # ascending best IGD
    text, csv_text = _format_report(rows)
    print(text, end="")
    csv_path = Path(args.csv) if args.csv else Path(args.workspace) / "report.csv"
    existing = csv_path.read_text(encoding="utf-8") if csv_path.exists() else None
    if existing != csv_text:
        csv_path.write_text(csv_text, encoding="utf-8")
    return 0


def main(argv=None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    if args.command in ("preprocess", "serve", "report") and not Path(args.workspace).is_dir():
        print(f"error: workspace directory {args.workspace!r} does not exist", file=sys.stderr)
        return 2
    handlers = {"run": cmd_run, "preprocess": cmd_preprocess, "serve": cmd_serve, "report": cmd_report}
    try:
        return handlers[args.command](args)
    except (FileNotFoundError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except KeyboardInterrupt:
        return 1


if __name__ == "__main__":
    sys.exit(main())

"""Read-only HTTP API over a preprocessed workspace.

All selection state lives in the client; every endpoint is a pure function of
the workspace plus its query parameters, memoized with single-flight
deduplication so identical concurrent requests compute once.  Non-2xx
responses carry exactly one error object: {"code": ..., "message": ...}.
"""

from __future__ import annotations

import threading
from typing import Callable, Optional

from fastapi import FastAPI, Request
from fastapi.exceptions import RequestValidationError
from fastapi.middleware.cors import CORSMiddleware
from fastapi.responses import JSONResponse

from .analytics import (
    ViewConfig,
    build_generation_graph,
    embed_algorithms,
    project_reference_pca,
    sample_solution_view,
)
from .ingest import Workspace
from .measures import igd
from .similarity import SIMILARITY_KINDS
from .store import WorkspaceStore

__all__ = ["create_app", "ApiFault"]

MAX_GRAPH_NODES = 2000
SIZE_MEASURES = ("igd", "hv", "sp", "ms")
REF_MODES = ("scatter", "density", "hull")

_STATUS = {"not_found": 404, "bad_param": 400, "dimension_mismatch": 400, "too_large": 413}


class ApiFault(Exception):
    def __init__(self, code: str, message: str) -> None:
        assert code in _STATUS
        self.code = code
        self.message = message
        super().__init__(message)


class _SingleFlight:
    """Memo cache where two identical concurrent requests compute once."""

    def __init__(self) -> None:
        self._guard = threading.Lock()
        self._entries: dict = {}

    def get(self, key, compute: Callable):
        with self._guard:
            entry = self._entries.get(key)
            if entry is None:
                entry = {"lock": threading.Lock(), "done": False, "value": None, "error": None}
                self._entries[key] = entry
        with entry["lock"]:
            if not entry["done"]:
                try:
                    entry["value"] = compute()
                except Exception as exc:  # cache faults too: identical requests get identical answers
                    entry["error"] = exc
                entry["done"] = True
            if entry["error"] is not None:
                raise entry["error"]
            return entry["value"]


def _series_summary(workspace: Workspace, run_id: str) -> dict:
    s = workspace.measures[run_id]
    return {
        "id": run_id,
        "generations": len(s),
        "best_igd": float(s.igd.min()),
        "best_igd_gen": s.best_igd_gen,
        "last_igd": float(s.igd[-1]),
        "best_hv": float(s.hv.max()),
        "best_hv_gen": s.best_hv_gen,
        "last_hv": float(s.hv[-1]),
        "best_sp": float(s.sp.min()),
        "best_sp_gen": s.best_sp_gen,
        "best_ms": float(s.ms.max()),
        "best_ms_gen": s.best_ms_gen,
    }


def create_app(
    store: WorkspaceStore,
    workspace: Optional[Workspace] = None,
    ui_dir: Optional[str] = None,
) -> FastAPI:
    """Build the API over a loaded workspace (loaded from the store if absent).

    When ui_dir points at a built frontend, its static assets are mounted at
    the root path.
    """
    if workspace is None:
        workspace = store.load()
    for run in workspace.runs:
        if run.algorithm_id not in workspace.measures:
            raise ValueError(f"workspace measures missing for {run.algorithm_id!r}")
    projection = project_reference_pca(workspace.reference)
    memo = _SingleFlight()

    app = FastAPI(title="emoscope", docs_url=None, redoc_url=None)
    app.add_middleware(
        CORSMiddleware, allow_origins=["*"], allow_methods=["GET"], allow_headers=["*"]
    )

    @app.exception_handler(ApiFault)
    async def _fault_handler(request: Request, exc: ApiFault):
        return JSONResponse(status_code=_STATUS[exc.code], content={"code": exc.code, "message": exc.message})

    @app.exception_handler(RequestValidationError)
    async def _validation_handler(request: Request, exc: RequestValidationError):
        return JSONResponse(status_code=400, content={"code": "bad_param", "message": str(exc.errors())})

    def get_run(run_id: str):
        try:
            return workspace.run_by_id(run_id)
        except KeyError:
            raise ApiFault("not_found", f"no run {run_id!r} in workspace") from None

    @app.get("/api/health")
    def health():
        return {"status": "ok", "runs": len(workspace.runs)}

    @app.get("/api/workspace")
    def workspace_summary(sort: Optional[str] = None):
        rows = [_series_summary(workspace, rid) for rid in workspace.run_ids]
        if sort is not None:
            if sort != "best_igd":
                raise ApiFault("bad_param", f"unsupported sort {sort!r}; only best_igd")
            rows.sort(key=lambda r: (r["best_igd"], r["id"]))
        return {
            "problem": {"name": workspace.problem.name, "m": workspace.problem.m, "d": workspace.problem.d},
            "reference_size": workspace.reference.n,
            "hv_anchor": workspace.hv_anchor.tolist() if workspace.hv_anchor is not None else None,
            "normalize": workspace.normalize,
            "algorithms": rows,
        }

    @app.get("/api/runs/{run_id}/measures")
    def run_measures(run_id: str, gen: Optional[int] = None):
        run = get_run(run_id)
        s = workspace.measures[run_id]

        def profile(gen_index: int) -> dict:
            if gen_index in s.igd_profiles:
                prof = s.igd_profiles[gen_index]
            else:
                try:
                    rec = run.record_at(gen_index)
                except KeyError:
                    raise ApiFault("not_found", f"run {run_id!r} has no generation {gen_index}") from None
                prof = igd(rec.solutions, store._norm_ref(workspace))
            return {"gen": gen_index, "distances": prof.distances.tolist(), "mean": float(prof.mean)}

        profiles = {"best_igd": profile(s.best_igd_gen), "last": profile(int(s.gen_indices[-1]))}
        if gen is not None:
            profiles["requested"] = profile(gen)
        return {
            "algorithm": run_id,
            "gen_indices": [int(g) for g in s.gen_indices],
            "igd": s.igd.tolist(),
            "hv": s.hv.tolist(),
            "sp": s.sp.tolist(),
            "ms": s.ms.tolist(),
            "best": {"igd": s.best_igd_gen, "hv": s.best_hv_gen, "sp": s.best_sp_gen, "ms": s.best_ms_gen},
            "profiles": profiles,
        }

    @app.get("/api/runs/{run_id}/generations/{gen_index}")
    def generation_payload(run_id: str, gen_index: int):
        run = get_run(run_id)
        try:
            rec = run.record_at(gen_index)
        except KeyError:
            raise ApiFault("not_found", f"run {run_id!r} has no generation {gen_index}") from None
        s = workspace.measures[run_id]
        pos = s.position_of(gen_index)
        coords = projection.apply(rec.solutions.objectives)
        ref_coords = projection.apply(workspace.reference.points)
        return {
            "run": run_id,
            "gen": gen_index,
            "objectives": rec.solutions.objectives.tolist(),
            "coords": coords.tolist(),
            "measures": {
                "igd": float(s.igd[pos]),
                "hv": float(s.hv[pos]),
                "sp": float(s.sp[pos]),
                "ms": float(s.ms[pos]),
            },
            "bounds": {
                "solutions": {"min": coords.min(axis=0).tolist(), "max": coords.max(axis=0).tolist()},
                "reference": {"min": ref_coords.min(axis=0).tolist(), "max": ref_coords.max(axis=0).tolist()},
            },
        }

    @app.get("/api/similarity/algorithms")
    def similarity_algorithms(kind: str = "alg_best_igd_emd", method: str = "metric_mds"):
        if kind not in SIMILARITY_KINDS:
            raise ApiFault("bad_param", f"unknown kind {kind!r}; kinds: {', '.join(SIMILARITY_KINDS)}")
        if method not in ("metric_mds", "tsne"):
            raise ApiFault("bad_param", f"unknown method {method!r}")

        def compute():
            if kind == "gen_emd":
                if sum(len(r.generations) for r in workspace.runs) > MAX_GRAPH_NODES:
                    raise ApiFault("too_large", "generation matrix across all runs exceeds the node cap")
                M = store.generation_matrix(workspace, workspace.run_ids)
            else:
                M = store.algorithm_matrix(workspace, kind)
            emb = embed_algorithms(M, method=method)
            return {
                "kind": kind,
                "labels": list(M.labels),
                "values": M.values.tolist(),
                "embedding": {"method": emb.method, "labels": list(emb.labels), "coords": emb.coords.tolist()},
            }

        return memo.get(("sim", kind, method), compute)

    @app.get("/api/analysis/generation-graph")
    def generation_graph(runs: str, k: int = 10, size: str = "igd"):
        run_ids = [r for r in runs.split(",") if r]
        if not run_ids:
            raise ApiFault("bad_param", "runs parameter must list at least one run id")
        if size not in SIZE_MEASURES:
            raise ApiFault("bad_param", f"size must be one of {SIZE_MEASURES}")
        for rid in run_ids:
            get_run(rid)
        n_nodes = sum(len(workspace.run_by_id(r).generations) for r in dict.fromkeys(run_ids))
        if n_nodes > MAX_GRAPH_NODES:
            raise ApiFault("too_large", f"{n_nodes} nodes exceed the {MAX_GRAPH_NODES} cap; reduce the selection")
        if not 1 <= k < n_nodes:
            raise ApiFault("bad_param", f"k must be in [1, {n_nodes - 1}], got {k}")

        def compute():
            M = store.generation_matrix(workspace, run_ids)
            size_values = {}
            for rid in dict.fromkeys(run_ids):
                s = workspace.measures[rid]
                series = getattr(s, size)
                for g, v in zip(s.gen_indices, series):
                    size_values[f"{rid}#{int(g)}"] = float(v)
            graph = build_generation_graph(M, k=k, size_values=size_values)
            return {
                "k": k,
                "size_measure": size,
                "nodes": [
                    {
                        "label": n.label,
                        "run": n.run_id,
                        "gen": n.gen_index,
                        "x": n.coords[0],
                        "y": n.coords[1],
                        "size": n.size_value,
                        "cluster": n.cluster,
                        "outlier": n.is_outlier,
                        "ring": n.ring,
                        "age": n.age,
                        "neighbors": list(n.neighbors),
                    }
                    for n in graph.nodes
                ],
                "edges": [{"source": e.source, "target": e.target, "weight": e.weight} for e in graph.edges],
                "curves": {rid: [list(seg) for seg in segs] for rid, segs in graph.curves.items()},
            }

        return memo.get(("graph", tuple(run_ids), k, size), compute)

    @app.get("/api/analysis/solution-view")
    def solution_view(sel: str, rate: float = 1.0, refmode: str = "scatter"):
        if refmode not in REF_MODES:
            raise ApiFault("bad_param", f"refmode must be one of {REF_MODES}")
        if not 0.0 < rate <= 1.0:
            raise ApiFault("bad_param", f"rate must be in (0, 1], got {rate}")
        selections = []
        for part in sel.split(","):
            if not part:
                continue
            run_id, _, gen_s = part.partition(":")
            try:
                gen_index = int(gen_s)
            except ValueError:
                raise ApiFault("bad_param", f"malformed selection {part!r}; expected run:gen") from None
            run = get_run(run_id)
            try:
                run.record_at(gen_index)
            except KeyError:
                raise ApiFault("not_found", f"run {run_id!r} has no generation {gen_index}") from None
            selections.append((run_id, gen_index))
        if not selections:
            raise ApiFault("bad_param", "sel parameter must list at least one run:gen")

        def compute():
            sets = [workspace.run_by_id(r).record_at(g).solutions for r, g in selections]
            model = sample_solution_view(
                sets, rate=rate, projection=projection, reference=workspace.reference, cfg=ViewConfig()
            )
            gens = []
            for (run_id, gen_index), S, view in zip(selections, sets, model.generations):
                marked = set(int(i) for i in view.marked)
                gens.append(
                    {
                        "run": run_id,
                        "gen": gen_index,
                        "total": S.n,
                        "points": [
                            {
                                "index": int(i),
                                "x": float(view.coords[i, 0]),
                                "y": float(view.coords[i, 1]),
                                "objectives": S.objectives[i].tolist(),
                                "marked": int(i) in marked,
                            }
                            for i in view.kept
                        ],
                        "kde": _grid_payload(view.kde),
                    }
                )
            reference: dict = {"mode": refmode}
            if refmode == "scatter":
                reference["points"] = model.reference_scatter.tolist()
            elif refmode == "density":
                reference["density"] = _grid_payload(model.reference_density)
            else:
                reference["hull"] = model.reference_hull.tolist()
            return {"rate": rate, "refmode": refmode, "generations": gens, "reference": reference}

        return memo.get(("view", tuple(selections), rate, refmode), compute)

    if ui_dir is not None:
        from fastapi.staticfiles import StaticFiles

        app.mount("/", StaticFiles(directory=ui_dir, html=True), name="ui")

    return app


def _grid_payload(grid) -> dict:
    return {
        "values": grid.values.tolist(),
        "x0": grid.x0,
        "x1": grid.x1,
        "y0": grid.y0,
        "y1": grid.y1,
    }

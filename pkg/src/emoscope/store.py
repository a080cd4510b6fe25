"""On-disk workspace store: discovery, preprocessing, and cache management.

Preprocessing down-samples every run to a common target, computes the four
measure series per run, the six algorithm similarity matrices, and generation
EMD matrices for requested run pairs.  Every cache file carries a fingerprint
(run content hashes + settings), so re-running preprocess against unchanged
inputs touches nothing.
"""

from __future__ import annotations

import json
from pathlib import Path
from typing import Callable, Optional, Sequence

import numpy as np

from .core import AlgorithmRun, GenerationRecord, ProblemMeta, ReferenceSet, SolutionSet
from .ingest import (
    Workspace,
    build_workspace,
    content_hash,
    downsample,
    label_set_hash,
    load_reference_csv,
    load_run_log,
)
from .measures import MeasureConfig, MeasureSeries, default_anchor, measure_run
from .similarity import (
    SIMILARITY_KINDS,
    SimilarityMatrix,
    algorithm_similarity_matrix,
    generation_similarity_matrix,
    worker_count,
)

__all__ = ["WorkspaceStore", "ALGORITHM_KINDS"]

ALGORITHM_KINDS = tuple(k for k in SIMILARITY_KINDS if k != "gen_emd")
WORKSPACE_SCHEMA = "emo-workspace/1"


def _write_json(path: Path, payload: dict) -> None:
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(payload, fh, separators=(",", ":"))
        fh.write("\n")


def _read_json(path: Path) -> Optional[dict]:
    if not path.exists():
        return None
    with open(path, "r", encoding="utf-8") as fh:
        return json.load(fh)


def _series_payload(algorithm_id: str, series: MeasureSeries, fingerprint: dict) -> dict:
    return {
        "algorithm": algorithm_id,
        "gen_indices": [int(g) for g in series.gen_indices],
        "igd": series.igd.tolist(),
        "hv": series.hv.tolist(),
        "sp": series.sp.tolist(),
        "ms": series.ms.tolist(),
        "best": {
            "igd": series.best_igd_gen,
            "hv": series.best_hv_gen,
            "sp": series.best_sp_gen,
            "ms": series.best_ms_gen,
        },
        "igd_profiles": {str(g): prof.distances.tolist() for g, prof in series.igd_profiles.items()},
        "fingerprint": fingerprint,
    }


def _series_from_payload(payload: dict) -> MeasureSeries:
    from .measures import IgdDistanceProfile

    profiles = {
        int(g): IgdDistanceProfile(distances=np.array(d), mean=float(np.mean(d)))
        for g, d in payload.get("igd_profiles", {}).items()
    }
    return MeasureSeries(
        gen_indices=np.array(payload["gen_indices"], dtype=np.int64),
        igd=np.array(payload["igd"]),
        hv=np.array(payload["hv"]),
        sp=np.array(payload["sp"]),
        ms=np.array(payload["ms"]),
        best_igd_gen=int(payload["best"]["igd"]),
        best_hv_gen=int(payload["best"]["hv"]),
        best_sp_gen=int(payload["best"]["sp"]),
        best_ms_gen=int(payload["best"]["ms"]),
        igd_profiles=profiles,
    )


class WorkspaceStore:
    """A workspace directory: reference.csv plus runs/*.jsonl plus caches."""

    def __init__(self, root) -> None:
        self.root = Path(root)
        if not self.root.is_dir():
            raise FileNotFoundError(f"workspace directory {self.root} does not exist")
        self.runs_dir = self.root / "runs"
        self.reference_path = self.root / "reference.csv"
        self.workspace_json = self.root / "workspace.json"
        self.measures_dir = self.root / "cache" / "measures"
        self.sim_dir = self.root / "cache" / "sim"

    # -- discovery -----------------------------------------------------

    def run_files(self) -> list[Path]:
        if not self.runs_dir.is_dir():
            return []
        return sorted(self.runs_dir.glob("*.jsonl"))

    def load_reference(self) -> ReferenceSet:
        if not self.reference_path.exists():
            raise FileNotFoundError(f"missing {self.reference_path}")
        return load_reference_csv(self.reference_path)

    def _fingerprint(self, run_file: Path, meta: dict) -> dict:
        fp = {"run_sha": content_hash(run_file)}
        fp.update(meta)
        return fp

    def _settings(self) -> dict:
        ws = _read_json(self.workspace_json) or {}
        return {
            "sample_target": (ws.get("preprocess") or {}).get("sample_target"),
            "normalize": bool(ws.get("normalize", False)),
            "hv_anchor": ws.get("hv_anchor"),
        }

    # -- preprocessing ---------------------------------------------------

    def preprocess(
        self,
        sample_target: Optional[int] = None,
        pairs: Sequence[tuple[str, str]] = (),
        all_pairs: bool = False,
        workers: Optional[int] = None,
        log: Callable[[str], None] = print,
    ) -> dict:
        """Populate all caches; warm entries are left untouched."""
        run_files = self.run_files()
        if not run_files:
            raise FileNotFoundError(f"no run logs under {self.runs_dir}")
        reference = self.load_reference()

        prior = _read_json(self.workspace_json) or {}
        if sample_target is None:
            sample_target = (prior.get("preprocess") or {}).get("sample_target")
        normalize = bool(prior.get("normalize", False))

        full_runs = [load_run_log(p) for p in run_files]
        ids = [r.algorithm_id for r in full_runs]
        if len(set(ids)) != len(ids):
            raise ValueError(f"duplicate algorithm ids across run logs: {ids}")
        m = reference.m
        for r in full_runs:
            if r.m != m:
                raise ValueError(f"run {r.algorithm_id!r} has m={r.m}, reference has m={m}")

        runs = [downsample(r, sample_target) if sample_target else r for r in full_runs]
        anchor = default_anchor(reference)

        first = full_runs[0]
        ws_payload = {
            "schema": WORKSPACE_SCHEMA,
            "problem": {"name": first.problem, "m": m, "d": first.d},
            "runs": [
                {"id": r.algorithm_id, "file": f"runs/{p.name}", "source": r.source}
                for r, p in zip(full_runs, run_files)
            ],
            "hv_anchor": anchor.tolist(),
            "normalize": normalize,
            "preprocess": {"sample_target": sample_target},
        }
        if _read_json(self.workspace_json) != ws_payload:
            _write_json(self.workspace_json, ws_payload)

        workspace = self._assemble(reference, runs, first, anchor, normalize)
        shas = {r.algorithm_id: content_hash(p) for r, p in zip(full_runs, run_files)}
        settings = {"sample_target": sample_target, "normalize": normalize, "anchor": anchor.tolist()}

        computed, warm = [], []
        cfg = MeasureConfig(hv_anchor=self._norm_anchor(workspace) if normalize else anchor)
        for run in workspace.runs:
            path = self.measures_dir / f"{run.algorithm_id}.json"
            fp = {"run_sha": shas[run.algorithm_id], **settings}
            cached = _read_json(path)
            if cached is not None and cached.get("fingerprint") == fp:
                workspace.measures[run.algorithm_id] = _series_from_payload(cached)
                warm.append(path.name)
                continue
            series = measure_run(self._norm_run(workspace, run), self._norm_ref(workspace), cfg)
            workspace.measures[run.algorithm_id] = series
            _write_json(path, _series_payload(run.algorithm_id, series, fp))
            computed.append(path.name)

        run_shas_all = {"run_shas": [shas[i] for i in sorted(shas)], **settings}
        for kind in ALGORITHM_KINDS:
            path = self.sim_dir / f"{kind}.json"
            cached = _read_json(path)
            if cached is not None and cached.get("fingerprint") == run_shas_all:
                warm.append(path.name)
                continue
            M = algorithm_similarity_matrix(self._norm_workspace(workspace), kind)
            _write_json(
                path,
                {"kind": kind, "labels": list(M.labels), "values": M.values.tolist(), "fingerprint": run_shas_all},
            )
            computed.append(path.name)

        pair_sets: list[tuple[str, ...]] = []
        if all_pairs:
            log(f"computing generation EMD for all {len(ids)} runs jointly; this is the expensive stage")
            pair_sets.append(tuple(sorted(ids)))
        for a, b in pairs:
            if a not in ids or b not in ids:
                raise ValueError(f"unknown run id in pair {a}:{b}")
            pair_sets.append(tuple(sorted({a, b})))
        for subset in dict.fromkeys(pair_sets):
            path, fp, cached = self._gen_emd_cache(workspace, subset, shas, settings)
            if cached is not None:
                warm.append(path.name)
                continue
            M = generation_similarity_matrix(
                [self._norm_run(workspace, workspace.run_by_id(i)) for i in subset],
                workers=worker_count(workers),
            )
            _write_json(
                path,
                {"kind": "gen_emd", "labels": list(M.labels), "values": M.values.tolist(), "fingerprint": fp},
            )
            computed.append(path.name)

        for name in computed:
            log(f"computed {name}")
        for name in warm:
            log(f"cache warm: {name}")
        if sample_target:
            log(f"down-sampled {len(full_runs[0].generations)} -> {len(workspace.runs[0].generations)} generations")
        return {"computed": computed, "warm": warm, "sample_target": sample_target}

    def _gen_emd_cache(self, workspace, subset, shas, settings):
        labels = []
        for i in subset:
            run = workspace.run_by_id(i)
            labels += [f"{i}#{rec.index}" for rec in run.generations]
        path = self.sim_dir / f"gen_emd-{label_set_hash(labels)}.json"
        fp = {"run_shas": [shas[i] for i in subset], **settings}
        cached = _read_json(path)
        if cached is not None and cached.get("fingerprint") == fp:
            return path, fp, cached
        return path, fp, None

    # -- normalization ---------------------------------------------------

    def _norm_bounds(self, workspace: Workspace):
        lo = workspace.reference.points.min(axis=0)
        hi = workspace.reference.points.max(axis=0)
        span = np.where(hi > lo, hi - lo, 1.0)
        return lo, span

    def _norm_ref(self, workspace: Workspace) -> ReferenceSet:
        if not workspace.normalize:
            return workspace.reference
        lo, span = self._norm_bounds(workspace)
        return ReferenceSet(points=(workspace.reference.points - lo) / span)

    def _norm_anchor(self, workspace: Workspace) -> np.ndarray:
        return default_anchor(self._norm_ref(workspace))

    def _norm_run(self, workspace: Workspace, run: AlgorithmRun) -> AlgorithmRun:
        if not workspace.normalize:
            return run
        lo, span = self._norm_bounds(workspace)
        gens = tuple(
            GenerationRecord(
                index=g.index,
                solutions=SolutionSet(objectives=(g.solutions.objectives - lo) / span),
            )
            for g in run.generations
        )
        return AlgorithmRun(
            algorithm_id=run.algorithm_id, problem=run.problem, m=run.m, d=run.d,
            generations=gens, source=run.source,
        )

    def _norm_workspace(self, workspace: Workspace) -> Workspace:
        if not workspace.normalize:
            return workspace
        view = Workspace(
            problem=workspace.problem,
            reference=self._norm_ref(workspace),
            runs=[self._norm_run(workspace, r) for r in workspace.runs],
            hv_anchor=self._norm_anchor(workspace),
            normalize=False,
            measures=workspace.measures,
        )
        return view

    def _assemble(self, reference, runs, first_run, anchor, normalize) -> Workspace:
        problem = ProblemMeta(name=first_run.problem, m=reference.m, d=first_run.d)
        ws = build_workspace(problem, reference, runs, normalize=normalize)
        ws.hv_anchor = anchor
        return ws

    # -- serving ---------------------------------------------------------

    def load(self, log: Callable[[str], None] = print) -> Workspace:
        """Load the workspace for serving; missing measure caches are computed
        lazily with a warning."""
        run_files = self.run_files()
        if not run_files:
            raise FileNotFoundError(f"no run logs under {self.runs_dir}")
        reference = self.load_reference()
        settings = self._settings()
        sample_target = settings["sample_target"]
        full_runs = [load_run_log(p) for p in run_files]
        runs = [downsample(r, sample_target) if sample_target else r for r in full_runs]
        anchor = (
            np.array(settings["hv_anchor"]) if settings["hv_anchor"] is not None else default_anchor(reference)
        )
        workspace = self._assemble(reference, runs, full_runs[0], anchor, settings["normalize"])
        cfg = MeasureConfig(hv_anchor=self._norm_anchor(workspace) if workspace.normalize else anchor)
        for run, path in zip(workspace.runs, run_files):
            cache = self.measures_dir / f"{run.algorithm_id}.json"
            fp = {"run_sha": content_hash(path), "sample_target": sample_target,
                  "normalize": workspace.normalize, "anchor": anchor.tolist()}
            cached = _read_json(cache)
            if cached is not None and cached.get("fingerprint") == fp:
                workspace.measures[run.algorithm_id] = _series_from_payload(cached)
            else:
                log(f"warning: measure cache missing or stale for {run.algorithm_id}; computing now")
                series = measure_run(self._norm_run(workspace, run), self._norm_ref(workspace), cfg)
                workspace.measures[run.algorithm_id] = series
                _write_json(cache, _series_payload(run.algorithm_id, series, fp))
        return workspace

    def algorithm_matrix(self, workspace: Workspace, kind: str) -> SimilarityMatrix:
        """Algorithm similarity of the given kind, from cache when fresh."""
        path = self.sim_dir / f"{kind}.json"
        cached = _read_json(path)
        if cached is not None and cached.get("kind") == kind:
            return SimilarityMatrix(
                kind=kind, labels=tuple(cached["labels"]), values=np.array(cached["values"])
            )
        M = algorithm_similarity_matrix(self._norm_workspace(workspace), kind)
        shas = {p.stem: content_hash(p) for p in self.run_files()}
        fp = {
            "run_shas": [shas[i] for i in sorted(shas)],
            "sample_target": self._settings()["sample_target"],
            "normalize": workspace.normalize,
            "anchor": workspace.hv_anchor.tolist() if workspace.hv_anchor is not None else None,
        }
        _write_json(path, {"kind": kind, "labels": list(M.labels), "values": M.values.tolist(), "fingerprint": fp})
        return M

    def generation_matrix(
        self, workspace: Workspace, run_ids: Sequence[str], workers: Optional[int] = None
    ) -> SimilarityMatrix:
        """Generation EMD over the given runs, via the subset cache, a slice of
        a superset cache, or a fresh computation (which is then cached)."""
        subset = tuple(sorted(dict.fromkeys(run_ids)))
        for rid in subset:
            workspace.run_by_id(rid)
        labels = []
        for rid in subset:
            labels += [f"{rid}#{rec.index}" for rec in workspace.run_by_id(rid).generations]
        path = self.sim_dir / f"gen_emd-{label_set_hash(labels)}.json"
        cached = _read_json(path)
        if cached is not None and list(cached["labels"]) == labels:
            return SimilarityMatrix(kind="gen_emd", labels=tuple(labels), values=np.array(cached["values"]))
        sliced = self._slice_superset(labels)
        if sliced is not None:
            return sliced
        M = generation_similarity_matrix(
            [self._norm_run(workspace, workspace.run_by_id(rid)) for rid in subset],
            workers=worker_count(workers),
        )
        # label order follows run order in the subset; store under the sorted key
        _write_json(path, {"kind": "gen_emd", "labels": list(M.labels), "values": M.values.tolist(), "fingerprint": None})
        return M

    def _slice_superset(self, labels: list[str]) -> Optional[SimilarityMatrix]:
        want = set(labels)
        for path in sorted(self.sim_dir.glob("gen_emd-*.json")):
            cached = _read_json(path)
            if cached is None:
                continue
            have = {lb: i for i, lb in enumerate(cached["labels"])}
            if want <= set(have):
                values = np.array(cached["values"])
                idx = [have[lb] for lb in labels]
                return SimilarityMatrix(
                    kind="gen_emd", labels=tuple(labels), values=values[np.ix_(idx, idx)]
                )
        return None

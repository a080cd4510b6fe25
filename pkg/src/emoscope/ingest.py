"""Run-log protocol, down-sampling, and workspace assembly.

A run log is UTF-8 JSON lines: one header object, then one object per
generation::

    {"schema":"emo-run/1","algorithm":"<id>","problem":"<name>","m":<int>,"d":<int or null>}
    {"gen":<int>,"objectives":[[f1..fm],...],"decisions":[[x1..xd],...]}

Decision vectors are optional.  A workspace directory bundles one problem:

    workspace.json            problem meta, run index, HV anchor, preprocess state
    reference.csv             header f1,...,fm, one point per row
    runs/<id>.jsonl           raw logs (never down-sampled on disk)
    cache/measures/<id>.json  measure series per run
    cache/sim/<kind>.json     algorithm similarity matrices
    cache/sim/gen_emd-<h>.json  generation EMD matrices keyed by label-set hash
"""

from __future__ import annotations

import hashlib
import json
import math
from dataclasses import dataclass, field
from typing import IO, Iterable, Optional, Union

import numpy as np

from .core import AlgorithmRun, GenerationRecord, ProblemMeta, ReferenceSet, SolutionSet

__all__ = [
    "SCHEMA",
    "Workspace",
    "parse_run_log",
    "load_run_log",
    "serialize_run",
    "save_run_log",
    "downsample",
    "build_workspace",
    "load_reference_csv",
]

SCHEMA = "emo-run/1"


class RunLogError(ValueError):
    """Malformed or inconsistent run log; the message names the line."""


def _fail(lineno: int, msg: str) -> RunLogError:
    return RunLogError(f"line {lineno}: {msg}")


def _check_matrix(values, width: Optional[int], lineno: int, what: str) -> list[list[float]]:
    if not isinstance(values, list) or not values:
        raise _fail(lineno, f"{what} must be a non-empty list of vectors")
    out = []
    for vec in values:
        if not isinstance(vec, list) or (width is not None and len(vec) != width):
            raise _fail(lineno, f"{what} vector has arity {len(vec) if isinstance(vec, list) else '?'}, expected {width}")
        row = []
        for v in vec:
            if not isinstance(v, (int, float)) or isinstance(v, bool) or not math.isfinite(v):
                raise _fail(lineno, f"{what} contains a non-finite or non-numeric value: {v!r}")
            row.append(float(v))
        out.append(row)
    return out


def parse_run_log(stream: Union[IO, Iterable[Union[str, bytes]]]) -> AlgorithmRun:
    """Parse and validate a JSONL run log; errors carry 1-based line numbers."""
    lines = iter(stream)
    try:
        first = next(lines)
    except StopIteration:
        raise RunLogError("empty run log") from None
    if isinstance(first, bytes):
        first = first.decode("utf-8")
    try:
        header = json.loads(first)
    except json.JSONDecodeError as exc:
        raise _fail(1, f"invalid JSON header: {exc}") from None
    if not isinstance(header, dict) or header.get("schema") != SCHEMA:
        raise _fail(1, f"expected header with schema {SCHEMA!r}")
    for key in ("algorithm", "problem", "m"):
        if key not in header:
            raise _fail(1, f"header missing {key!r}")
    m = header["m"]
    if not isinstance(m, int) or m < 2:
        raise _fail(1, f"header m must be an integer >= 2, got {m!r}")
    d = header.get("d")
    if d is not None and (not isinstance(d, int) or d < 1):
        raise _fail(1, f"header d must be a positive integer or null, got {d!r}")

    records = []
    last_gen = -1
    lineno = 1
    for raw in lines:
        lineno += 1
        if isinstance(raw, bytes):
            raw = raw.decode("utf-8")
        if not raw.strip():
            continue
        try:
            obj = json.loads(raw)
        except json.JSONDecodeError as exc:
            raise _fail(lineno, f"invalid JSON: {exc}") from None
        if not isinstance(obj, dict) or "gen" not in obj or "objectives" not in obj:
            raise _fail(lineno, "generation record needs 'gen' and 'objectives'")
        gen = obj["gen"]
        if not isinstance(gen, int) or gen < 0:
            raise _fail(lineno, f"gen must be a non-negative integer, got {gen!r}")
        if gen <= last_gen:
            raise _fail(lineno, f"generation indices must be strictly increasing ({gen} after {last_gen})")
        last_gen = gen
        objectives = _check_matrix(obj["objectives"], m, lineno, "objectives")
        decisions = None
        if obj.get("decisions") is not None:
            decisions = _check_matrix(obj["decisions"], d, lineno, "decisions")
            if len(decisions) != len(objectives):
                raise _fail(lineno, "decisions and objectives cardinality differ")
        records.append(
            GenerationRecord(
                index=gen,
                solutions=SolutionSet(
                    objectives=np.array(objectives),
                    decisions=np.array(decisions) if decisions is not None else None,
                ),
            )
        )
    if not records:
        raise RunLogError("run log contains a header but no generations")
    return AlgorithmRun(
        algorithm_id=str(header["algorithm"]),
        problem=str(header["problem"]),
        m=m,
        d=d,
        generations=tuple(records),
        source="imported",
    )


def load_run_log(path) -> AlgorithmRun:
    with open(path, "rb") as fh:
        return parse_run_log(fh)


def serialize_run(run: AlgorithmRun) -> str:
    """Render a run as the JSONL protocol; floats keep full precision."""
    out = [
        json.dumps(
            {"schema": SCHEMA, "algorithm": run.algorithm_id, "problem": run.problem, "m": run.m, "d": run.d},
            separators=(",", ":"),
        )
    ]
    for rec in run.generations:
        payload = {"gen": rec.index, "objectives": rec.solutions.objectives.tolist()}
        if rec.solutions.decisions is not None:
            payload["decisions"] = rec.solutions.decisions.tolist()
        out.append(json.dumps(payload, separators=(",", ":")))
    return "\n".join(out) + "\n"


def save_run_log(run: AlgorithmRun, path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(serialize_run(run))


def downsample(run: AlgorithmRun, target: int) -> AlgorithmRun:
    """Uniformly thin a run to `target` generations, keeping first and last.

    Kept positions are round(i*(N-1)/(target-1)), computed in exact integer
    arithmetic (round half up); original generation indices are preserved.
    Runs at or below the target are returned unchanged.
    """
    if target < 2:
        raise ValueError(f"down-sampling target must be >= 2, got {target}")
    N = len(run.generations)
    if target >= N:
        return run
    denom = target - 1
    positions = [(2 * i * (N - 1) + denom) // (2 * denom) for i in range(target)]
    records = tuple(run.generations[p] for p in positions)
    return AlgorithmRun(
        algorithm_id=run.algorithm_id,
        problem=run.problem,
        m=run.m,
        d=run.d,
        generations=records,
        source=run.source,
    )


def load_reference_csv(path) -> ReferenceSet:
    """Parse a reference CSV (header f1,...,fm, one point per row)."""
    with open(path, "r", encoding="utf-8") as fh:
        lines = [ln.strip() for ln in fh if ln.strip()]
    if not lines:
        raise ValueError(f"reference file {path} is empty")
    header = lines[0].split(",")
    m = len(header)
    expected = [f"f{i + 1}" for i in range(m)]
    if header != expected:
        raise ValueError(f"reference header must be {','.join(expected)}, got {lines[0]!r}")
    rows = []
    for lineno, ln in enumerate(lines[1:], start=2):
        parts = ln.split(",")
        if len(parts) != m:
            raise ValueError(f"reference line {lineno}: expected {m} values, got {len(parts)}")
        try:
            rows.append([float(p) for p in parts])
        except ValueError:
            raise ValueError(f"reference line {lineno}: non-numeric value") from None
    return ReferenceSet(points=np.array(rows))


@dataclass
class Workspace:
    """One problem, its reference set, all runs, and computed artifacts.

    Built once, then treated as read-only; measure series and similarity
    matrices are attached by the measures/similarity modules.
    """

    problem: ProblemMeta
    reference: ReferenceSet
    runs: list[AlgorithmRun]
    hv_anchor: Optional[np.ndarray] = None
    normalize: bool = False
    measures: dict = field(default_factory=dict)
    sim_cache: dict = field(default_factory=dict)

    def run_by_id(self, algorithm_id: str) -> AlgorithmRun:
        for run in self.runs:
            if run.algorithm_id == algorithm_id:
                return run
        raise KeyError(f"no run {algorithm_id!r} in workspace")

    @property
    def run_ids(self) -> list[str]:
        return [r.algorithm_id for r in self.runs]


def build_workspace(
    problem: ProblemMeta,
    reference: ReferenceSet,
    runs: Iterable[AlgorithmRun],
    normalize: bool = False,
) -> Workspace:
    """Assemble and validate a workspace; caches start empty."""
    runs = list(runs)
    if reference.m != problem.m:
        raise ValueError(f"reference m={reference.m} does not match problem m={problem.m}")
    seen = set()
    for run in runs:
        if run.algorithm_id in seen:
            raise ValueError(f"duplicate algorithm_id {run.algorithm_id!r}")
        seen.add(run.algorithm_id)
        if run.m != problem.m:
            raise ValueError(f"run {run.algorithm_id!r} has m={run.m}, workspace m={problem.m}")
    return Workspace(problem=problem, reference=reference, runs=runs, normalize=normalize)


def content_hash(path) -> str:
    """SHA-256 of a file's bytes; the cache fingerprint ingredient."""
    h = hashlib.sha256()
    with open(path, "rb") as fh:
        for chunk in iter(lambda: fh.read(1 << 20), b""):
            h.update(chunk)
    return h.hexdigest()


def label_set_hash(labels: Iterable[str]) -> str:
    h = hashlib.sha256("\n".join(labels).encode("utf-8"))
    return h.hexdigest()[:12]

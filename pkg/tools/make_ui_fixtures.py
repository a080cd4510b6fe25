"""Regenerate the frontend test fixtures from a live API instance.

Builds a small two-engine DTLZ2 workspace, serves it in-process, and
snapshots every endpoint payload the UI smoke suite replays into one
URL-to-payload map.  Run from the repository root:

    python tools/make_ui_fixtures.py
"""

import json
import tempfile
from pathlib import Path

from fastapi.testclient import TestClient

from emoscope.benchmarks import dtlz, reference_set, save_reference_csv
from emoscope.cli import main
from emoscope.service import create_app
from emoscope.store import WorkspaceStore

FIXTURES = Path(__file__).resolve().parent.parent / "frontend" / "test" / "fixtures"
RUNS = ("nsga2", "sms-emoa")


def endpoint_urls(client: TestClient) -> list[str]:
    gen_indices = {run: client.get(f"/api/runs/{run}/measures").json()["gen_indices"] for run in RUNS}
    last = gen_indices[RUNS[0]][-1]
    urls = [
        "/api/workspace?sort=best_igd",
        "/api/similarity/algorithms?kind=alg_best_igd_emd&method=metric_mds",
        "/api/similarity/algorithms?kind=alg_dtw_igd&method=metric_mds",
    ]
    for run in RUNS:
        urls.append(f"/api/runs/{run}/measures")
        urls.append(f"/api/runs/{run}/measures?gen={last}")
        urls += [f"/api/runs/{run}/generations/{g}" for g in gen_indices[run]]
    # solution views the smoke suite steps through (JS renders rate 1.0 as "1")
    urls += [
        f"/api/analysis/solution-view?sel=nsga2:0&rate=1&refmode=scatter",
        f"/api/analysis/solution-view?sel=nsga2:{last}&rate=1&refmode=scatter",
        f"/api/analysis/solution-view?sel=nsga2:{last},sms-emoa:{last}&rate=1&refmode=scatter",
        f"/api/analysis/solution-view?sel=nsga2:{last},sms-emoa:{last}&rate=1&refmode=density",
        f"/api/analysis/solution-view?sel=nsga2:{last},sms-emoa:{last}&rate=1&refmode=hull",
    ]
    # graph requests: single-run toggle clamps k to nodes-1, then the pair
    n = len(gen_indices[RUNS[0]])
    urls += [
        f"/api/analysis/generation-graph?runs=nsga2&k={n - 1}&size=igd",
        f"/api/analysis/generation-graph?runs=nsga2,sms-emoa&k=10&size=igd",
    ]
    return urls


def build() -> None:
    FIXTURES.mkdir(parents=True, exist_ok=True)
    with tempfile.TemporaryDirectory(prefix="emoscope-fixture-") as tmp:
        root = Path(tmp)
        save_reference_csv(reference_set(dtlz(2, 3), 12), root / "reference.csv")
        for alg, seed in zip(RUNS, (1, 2)):
            assert main(["run", "--problem", "dtlz2", "--algorithm", alg, "--pop", "16",
                         "--gens", "30", "--seed", str(seed), "--out", str(root / "runs")]) == 0
        assert main(["preprocess", str(root), "--sample", "10", "--pairs", "nsga2:sms-emoa"]) == 0
        client = TestClient(create_app(WorkspaceStore(root)))
        payloads = {}
        for url in endpoint_urls(client):
            resp = client.get(url)
            resp.raise_for_status()
            payloads[url] = resp.json()
        out = FIXTURES / "api.json"
        out.write_text(json.dumps(payloads, indent=1) + "\n")
        print(f"wrote {out} ({out.stat().st_size} bytes, {len(payloads)} endpoints)")


if __name__ == "__main__":
    build()

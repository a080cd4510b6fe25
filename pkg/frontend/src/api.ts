import type {
  GenerationPayload,
  GraphPayload,
  Measure,
  MeasureSeries,
  RefMode,
  SimilarityPayload,
  SolutionViewPayload,
  WorkspaceSummary,
} from "./types";

/** Thin typed client; every displayed number originates from these calls. */
export class ApiClient {
  constructor(private readonly base: string = "") {}

  private async get<T>(path: string): Promise<T> {
    const resp = await fetch(this.base + path);
    if (!resp.ok) {
      let message = `${resp.status}`;
      try {
        const body = await resp.json();
        message = `${body.code}: ${body.message}`;
      } catch {
        /* non-JSON error body */
      }
      throw new Error(`API error on ${path} (${message})`);
    }
    return (await resp.json()) as T;
  }

  workspace(sort?: "best_igd"): Promise<WorkspaceSummary> {
    return this.get(`/api/workspace${sort ? `?sort=${sort}` : ""}`);
  }

  measures(run: string, gen?: number): Promise<MeasureSeries> {
    const q = gen === undefined ? "" : `?gen=${gen}`;
    return this.get(`/api/runs/${encodeURIComponent(run)}/measures${q}`);
  }

  generation(run: string, gen: number): Promise<GenerationPayload> {
    return this.get(`/api/runs/${encodeURIComponent(run)}/generations/${gen}`);
  }

  similarity(kind: string, method = "metric_mds"): Promise<SimilarityPayload> {
    return this.get(`/api/similarity/algorithms?kind=${kind}&method=${method}`);
  }

  generationGraph(runs: string[], k: number, size: Measure): Promise<GraphPayload> {
    return this.get(`/api/analysis/generation-graph?runs=${runs.map(encodeURIComponent).join(",")}&k=${k}&size=${size}`);
  }

  solutionView(sel: Array<[string, number]>, rate: number, refmode: RefMode): Promise<SolutionViewPayload> {
    const selStr = sel.map(([r, g]) => `${encodeURIComponent(r)}:${g}`).join(",");
    return this.get(`/api/analysis/solution-view?sel=${selStr}&rate=${rate}&refmode=${refmode}`);
  }
}

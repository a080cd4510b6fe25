import { ApiClient } from "./api";
import { Store } from "./state";
import type { SelectionState } from "./state";
import { GenerationGraphView } from "./views/graph";
import { MeasureChartsView } from "./views/measures";
import { OverviewView } from "./views/overview";
import { SolutionView } from "./views/solution";
import { TimelineView } from "./views/timeline";

/** Wires the five linked views over one store and one API client. */
export class App {
  readonly store = new Store();
  readonly overview: OverviewView;
  readonly measures: MeasureChartsView;
  readonly timeline: TimelineView;
  readonly graph: GenerationGraphView;
  readonly solution: SolutionView;
  private referenceCoords: number[][] = [];
  private generationsByRun = new Map<string, number>();
  private prev: SelectionState;
  private pending: Promise<void> = Promise.resolve();

  constructor(
    root: HTMLElement,
    private readonly api: ApiClient,
  ) {
    const panel = (cls: string, title: string) => {
      const div = document.createElement("div");
      div.className = `panel ${cls}`;
      const h = document.createElement("h3");
      h.textContent = title;
      div.appendChild(h);
      const body = document.createElement("div");
      body.className = "panel-body";
      div.appendChild(body);
      root.appendChild(div);
      return body;
    };
    this.overview = new OverviewView(panel("overview-panel", "Algorithms"), this.store, (kind) => {
      void this.loadEmbedding(kind);
    });
    this.measures = new MeasureChartsView(panel("measures-panel", "Quality measures"), this.store);
    this.timeline = new TimelineView(panel("timeline-panel", "Timeline"), this.store);
    this.graph = new GenerationGraphView(panel("graph-panel", "Generation similarity"), this.store);
    this.solution = new SolutionView(panel("solution-panel", "Solution sets"), this.store, () => {
      this.enqueue(() => this.loadSolutionView(this.store.current));
    });
    this.prev = this.store.current;
    this.store.subscribe((state) => this.enqueue(() => this.onState(state)));
  }

  /** State reactions run strictly in order; tests await the same chain. */
  enqueue(task: () => Promise<void>): void {
    this.pending = this.pending.then(task);
  }

  whenIdle(): Promise<void> {
    return this.pending;
  }

  async start(): Promise<void> {
    const ws = await this.api.workspace("best_igd");
    for (const alg of ws.algorithms) this.generationsByRun.set(alg.id, alg.generations);
    this.overview.renderSummary(ws);
    await this.loadEmbedding(this.store.current.similarityKind);
  }

  private async loadEmbedding(kind: string): Promise<void> {
    this.overview.renderEmbedding(await this.api.similarity(kind));
  }

  private async onState(state: SelectionState): Promise<void> {
    const prev = this.prev;
    this.prev = state;
    this.overview.refreshActivation();

    for (const run of state.activated) {
      if (!prev.activated.includes(run)) await this.activateRun(run);
    }
    for (const run of prev.activated) {
      if (!state.activated.includes(run)) {
        this.measures.dropSeries(run);
        this.timeline.dropRow(run);
      }
    }
    this.measures.render();

    const graphChanged =
      !sameList(state.graphRuns, prev.graphRuns) ||
      state.graphParams.k !== prev.graphParams.k ||
      state.graphParams.sizeMeasure !== prev.graphParams.sizeMeasure;
    if (graphChanged) {
      await this.loadGraph(state);
    } else if (state.graphParams !== prev.graphParams) {
      this.graph.render(); // slider/toggle changes replay the cached payload
    }

    if (!sameSelections(state.selectedGenerations, prev.selectedGenerations)) {
      await this.refreshComparisonProfiles(state);
      await this.loadSolutionView(state);
      this.timeline.render();
    }
  }

  private async activateRun(run: string): Promise<void> {
    const series = await this.api.measures(run);
    this.measures.setSeries(run, series);
    if (!this.referenceCoords.length) {
      // the solution view carries the shared projection's reference scatter
      const seed = await this.api.solutionView([[run, series.gen_indices[0]]], 1.0, "scatter");
      this.referenceCoords = seed.reference.points ?? [];
    }
    const generations = [];
    for (const gen of series.gen_indices) {
      generations.push(await this.api.generation(run, gen));
    }
    this.timeline.setRow({ run, series, generations, referenceCoords: this.referenceCoords });
  }

  private async refreshComparisonProfiles(state: SelectionState): Promise<void> {
    for (const sel of state.selectedGenerations) {
      const series = await this.api.measures(sel.run, sel.gen);
      this.measures.setSeries(sel.run, series);
      const row = this.timeline.getRow(sel.run);
      if (row) this.timeline.setRow({ ...row, series });
    }
  }

  private async loadGraph(state: SelectionState): Promise<void> {
    if (!state.graphRuns.length) {
      this.graph.setPayload(null);
      return;
    }
    const nodes = state.graphRuns.reduce((n, run) => n + (this.generationsByRun.get(run) ?? 0), 0);
    const k = Math.max(1, Math.min(state.graphParams.k, nodes - 1));
    this.graph.setPayload(await this.api.generationGraph(state.graphRuns, k, state.graphParams.sizeMeasure));
  }

  private async loadSolutionView(state: SelectionState): Promise<void> {
    if (!state.selectedGenerations.length) {
      this.solution.setPayload(null);
      return;
    }
    const sel = state.selectedGenerations.map((s) => [s.run, s.gen] as [string, number]);
    this.solution.setPayload(await this.api.solutionView(sel, state.sampleRate, state.refMode));
  }
}

function sameList(a: string[], b: string[]): boolean {
  return a.length === b.length && a.every((v, i) => v === b[i]);
}

function sameSelections(a: Array<{ run: string; gen: number }>, b: Array<{ run: string; gen: number }>): boolean {
  return a.length === b.length && a.every((v, i) => v.run === b[i].run && v.gen === b[i].gen);
}

if (typeof document !== "undefined" && document.getElementById("app")) {
  const app = new App(document.getElementById("app")!, new ApiClient());
  void app.start();
}

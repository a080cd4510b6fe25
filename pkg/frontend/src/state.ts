import type { Measure, RefMode } from "./types";

/** Categorical palette; activating an 11th algorithm recycles with a warning. */
export const PALETTE = [
  "#4e79a7",
  "#f28e2b",
  "#59a14f",
  "#e15759",
  "#b07aa1",
  "#76b7b2",
  "#edc948",
  "#ff9da7",
  "#9c755f",
  "#bab0ac",
];

export interface GraphParams {
  k: number;
  sizeMeasure: Measure;
  visibleEdgeFraction: number;
  showBubbles: boolean;
  showRings: boolean;
  showCurves: boolean;
}

export interface SelectionState {
  activated: string[]; // activation order drives color assignment
  selectedGenerations: Array<{ run: string; gen: number }>;
  graphRuns: string[]; // runs toggled into the generation similarity view
  graphParams: GraphParams;
  refMode: RefMode;
  sampleRate: number;
  similarityKind: string;
}

type Listener = (state: SelectionState) => void;

/** The single source of selection truth; every view subscribes here. */
export class Store {
  private state: SelectionState = {
    activated: [],
    selectedGenerations: [],
    graphRuns: [],
    graphParams: {
      k: 10,
      sizeMeasure: "igd",
      visibleEdgeFraction: 1.0,
      showBubbles: true,
      showRings: true,
      showCurves: true,
    },
    refMode: "scatter",
    sampleRate: 1.0,
    similarityKind: "alg_best_igd_emd",
  };
  private listeners: Listener[] = [];
  private warn: (msg: string) => void;

  constructor(warn: (msg: string) => void = console.warn) {
    this.warn = warn;
  }

  get current(): SelectionState {
    return this.state;
  }

  subscribe(fn: Listener): () => void {
    this.listeners.push(fn);
    return () => {
      this.listeners = this.listeners.filter((l) => l !== fn);
    };
  }

  private emit(): void {
    for (const fn of this.listeners) fn(this.state);
  }

  private update(patch: Partial<SelectionState>): void {
    this.state = { ...this.state, ...patch };
    this.emit();
  }

  /** Stable color per activated algorithm, assigned in activation order. */
  colorOf(run: string): string {
    const pos = this.state.activated.indexOf(run);
    if (pos < 0) return "#999999";
    if (pos >= PALETTE.length) {
      return PALETTE[pos % PALETTE.length];
    }
    return PALETTE[pos];
  }

  toggleAlgorithm(run: string): void {
    const activated = [...this.state.activated];
    const pos = activated.indexOf(run);
    if (pos >= 0) {
      activated.splice(pos, 1);
      this.update({
        activated,
        graphRuns: this.state.graphRuns.filter((r) => r !== run),
        selectedGenerations: this.state.selectedGenerations.filter((s) => s.run !== run),
      });
      return;
    }
    activated.push(run);
    if (activated.length > PALETTE.length) {
      this.warn(`more than ${PALETTE.length} algorithms activated; colors now repeat`);
    }
    this.update({ activated });
  }

  selectGeneration(run: string, gen: number): void {
    const key = (s: { run: string; gen: number }) => `${s.run}#${s.gen}`;
    const sel = [...this.state.selectedGenerations];
    const pos = sel.findIndex((s) => key(s) === `${run}#${gen}`);
    if (pos >= 0) sel.splice(pos, 1);
    else sel.push({ run, gen });
    this.update({ selectedGenerations: sel });
  }

  toggleGraphRun(run: string): void {
    const runs = [...this.state.graphRuns];
    const pos = runs.indexOf(run);
    if (pos >= 0) runs.splice(pos, 1);
    else runs.push(run);
    this.update({ graphRuns: runs });
  }

  setGraphParams(patch: Partial<GraphParams>): void {
    this.update({ graphParams: { ...this.state.graphParams, ...patch } });
  }

  setRefMode(mode: RefMode): void {
    this.update({ refMode: mode });
  }

  setSampleRate(rate: number): void {
    this.update({ sampleRate: rate });
  }

  setSimilarityKind(kind: string): void {
    this.update({ similarityKind: kind });
  }
}

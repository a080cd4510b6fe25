/** Payload shapes of the workspace API. */

export type Measure = "igd" | "hv" | "sp" | "ms";
export type RefMode = "scatter" | "density" | "hull";

export interface AlgorithmSummary {
  id: string;
  generations: number;
  best_igd: number;
  best_igd_gen: number;
  last_igd: number;
  best_hv: number;
  best_hv_gen: number;
  last_hv: number;
  best_sp: number;
  best_sp_gen: number;
  best_ms: number;
  best_ms_gen: number;
}

export interface WorkspaceSummary {
  problem: { name: string; m: number; d: number | null };
  reference_size: number;
  hv_anchor: number[] | null;
  normalize: boolean;
  algorithms: AlgorithmSummary[];
}

export interface IgdProfile {
  gen: number;
  distances: number[];
  mean: number;
}

export interface MeasureSeries {
  algorithm: string;
  gen_indices: number[];
  igd: number[];
  hv: number[];
  sp: number[];
  ms: number[];
  best: Record<Measure, number>;
  profiles: { best_igd: IgdProfile; last: IgdProfile; requested?: IgdProfile };
}

export interface GenerationPayload {
  run: string;
  gen: number;
  objectives: number[][];
  coords: number[][];
  measures: Record<Measure, number>;
  bounds: {
    solutions: { min: number[]; max: number[] };
    reference: { min: number[]; max: number[] };
  };
}

export interface SimilarityPayload {
  kind: string;
  labels: string[];
  values: number[][];
  embedding: { method: string; labels: string[]; coords: number[][] };
}

export interface GraphNode {
  label: string;
  run: string;
  gen: number;
  x: number;
  y: number;
  size: number;
  cluster: number;
  outlier: boolean;
  ring: number;
  age: number;
  neighbors: string[];
}

export interface GraphEdge {
  source: string;
  target: string;
  weight: number;
}

export interface GraphPayload {
  k: number;
  size_measure: Measure;
  nodes: GraphNode[];
  edges: GraphEdge[];
  curves: Record<string, string[][]>;
}

export interface DensityGrid {
  values: number[][];
  x0: number;
  x1: number;
  y0: number;
  y1: number;
}

export interface SolutionPoint {
  index: number;
  x: number;
  y: number;
  objectives: number[];
  marked: boolean;
}

export interface SolutionGeneration {
  run: string;
  gen: number;
  total: number;
  points: SolutionPoint[];
  kde: DensityGrid;
}

export interface SolutionViewPayload {
  rate: number;
  refmode: RefMode;
  generations: SolutionGeneration[];
  reference: { mode: RefMode; points?: number[][]; density?: DensityGrid; hull?: number[][] };
}

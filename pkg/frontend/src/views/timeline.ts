import * as d3 from "d3";

import type { GenerationPayload, MeasureSeries } from "../types";
import type { Store } from "../state";

const HIST_BINS = 20; // display choice for the IGD distance histograms
const PANEL_W = 190;
const PANEL_H = 120;
const PATCH = 86;

export interface TimelineRowData {
  run: string;
  series: MeasureSeries;
  generations: GenerationPayload[]; // small-multiple payloads, chronological
  referenceCoords: number[][];
}

/**
 * One row per activated algorithm: a summary panel (best HV/MS/SP bars and
 * the best-generation IGD distance histogram) next to small-multiple
 * scatterplots of every generation.  Scales are shared across rows; clicking
 * a patch selects the generation and switches the panel to comparison mode
 * with a striped histogram of the selected generation.
 */
export class TimelineView {
  private root: d3.Selection<HTMLElement, unknown, null, undefined>;
  private rows = new Map<string, TimelineRowData>();

  constructor(container: HTMLElement, private readonly store: Store) {
    this.root = d3.select(container);
  }

  setRow(data: TimelineRowData): void {
    this.rows.set(data.run, data);
    this.render();
  }

  dropRow(run: string): void {
    this.rows.delete(run);
    this.render();
  }

  getRow(run: string): TimelineRowData | undefined {
    return this.rows.get(run);
  }

  // bar charts and histograms share one scale across every row
  private sharedScales() {
    const rows = [...this.rows.values()];
    const bars = rows.flatMap((r) => [
      Math.max(...r.series.hv),
      Math.max(...r.series.ms),
      Math.max(...r.series.sp),
    ]);
    const barMax = Math.max(1e-12, ...bars);
    const distMax = Math.max(
      1e-12,
      ...rows.flatMap((r) => {
        const req = r.series.profiles.requested;
        return r.series.profiles.best_igd.distances.concat(req ? req.distances : []);
      }),
    );
    return { barMax, distMax };
  }

  render(): void {
    this.root.selectAll("*").remove();
    const active = this.store.current.activated.filter((r) => this.rows.has(r));
    if (!active.length) return;
    const { barMax, distMax } = this.sharedScales();

    for (const run of active) {
      const data = this.rows.get(run)!;
      const row = this.root.append("div").attr("class", "timeline-row").attr("data-run", run);
      const head = row.append("div").attr("class", "timeline-row-head");
      head.append("span").attr("class", "timeline-run-name").style("color", this.store.colorOf(run)).text(run);
      const toggle = head
        .append("label")
        .attr("class", "graph-toggle-label");
      toggle
        .append("input")
        .attr("type", "checkbox")
        .attr("class", "graph-toggle")
        .attr("data-run", run)
        .property("checked", this.store.current.graphRuns.includes(run))
        .on("change", () => this.store.toggleGraphRun(run));
      toggle.append("span").text(" similarity view");

      this.renderSummaryPanel(row, data, barMax, distMax);
      this.renderPatches(row, data);
    }
  }

  private renderSummaryPanel(
    row: d3.Selection<HTMLDivElement, unknown, null, undefined>,
    data: TimelineRowData,
    barMax: number,
    distMax: number,
  ): void {
    const svg = row.append("svg").attr("class", "summary-panel").attr("width", PANEL_W).attr("height", PANEL_H);
    const series = data.series;
    const selected = this.store.current.selectedGenerations.find((s) => s.run === data.run);
    const comparing = selected !== undefined && series.profiles.requested !== undefined;

    // best HV / MS / SP bars (grouped with the selected generation's values
    // in comparison mode); shared scale across all rows
    const names = ["hv", "ms", "sp"] as const;
    const bests = [series.best.hv, series.best.ms, series.best.sp].map((gen, i) => {
      const pos = series.gen_indices.indexOf(gen);
      return series[names[i]][pos];
    });
    const barScale = d3.scaleLinear().domain([0, barMax]).range([0, 60]);
    const bars = svg.append("g").attr("class", "best-bars").attr("transform", "translate(8,12)");
    names.forEach((name, i) => {
      bars
        .append("rect")
        .attr("class", `best-bar best-${name}`)
        .attr("x", 28)
        .attr("y", i * 16)
        .attr("height", comparing ? 5 : 10)
        .attr("width", Math.max(0.5, barScale(bests[i])))
        .append("title")
        .text(`best ${name.toUpperCase()} ${bests[i]} @ gen ${series.best[name]}`);
      bars.append("text").attr("class", "bar-label").attr("x", 0).attr("y", i * 16 + 9).text(name.toUpperCase());
      if (comparing && selected) {
        const pos = series.gen_indices.indexOf(selected.gen);
        const value = pos >= 0 ? series[name][pos] : 0;
        bars
          .append("rect")
          .attr("class", `selected-bar selected-${name}`)
          .attr("x", 28)
          .attr("y", i * 16 + 6)
          .attr("height", 5)
          .attr("width", Math.max(0.5, barScale(value)))
          .append("title")
          .text(`gen ${selected.gen} ${name.toUpperCase()} ${value}`);
      }
    });

    // IGD distance histogram of the best generation, with the aggregated
    // value as a vertical line; striped overlay for the selected generation
    const histX = d3.scaleLinear().domain([0, distMax]).range([0, PANEL_W - 20]);
    // explicit cut points: d3 treats a threshold count only as a hint
    const cuts = d3.range(1, HIST_BINS).map((i) => (distMax * i) / HIST_BINS);
    const binner = d3.bin().domain([0, distMax]).thresholds(cuts);
    const bestBins = binner(series.profiles.best_igd.distances);
    const countMax = Math.max(1, ...bestBins.map((b) => b.length));
    const histY = d3.scaleLinear().domain([0, countMax]).range([0, 40]);
    const hist = svg.append("g").attr("class", "igd-histogram").attr("transform", `translate(10,${PANEL_H - 46})`);
    hist
      .selectAll("rect.igd-bin")
      .data(bestBins)
      .join("rect")
      .attr("class", "igd-bin")
      .attr("x", (b) => histX(b.x0 ?? 0))
      .attr("y", (b) => 40 - histY(b.length))
      .attr("width", (b) => Math.max(0.5, histX(b.x1 ?? 0) - histX(b.x0 ?? 0) - 0.5))
      .attr("height", (b) => histY(b.length));
    hist
      .append("line")
      .attr("class", "igd-mean-line")
      .attr("x1", histX(series.profiles.best_igd.mean))
      .attr("x2", histX(series.profiles.best_igd.mean))
      .attr("y1", 0)
      .attr("y2", 40);
    if (comparing && series.profiles.requested) {
      const selBins = binner(series.profiles.requested.distances);
      hist
        .selectAll("rect.igd-bin-selected")
        .data(selBins)
        .join("rect")
        .attr("class", "igd-bin-selected striped")
        .attr("x", (b) => histX(b.x0 ?? 0))
        .attr("y", 42)
        .attr("width", (b) => Math.max(0.5, histX(b.x1 ?? 0) - histX(b.x0 ?? 0) - 0.5))
        .attr("height", (b) => (histY(b.length) / 40) * 12);
    }
  }

  private renderPatches(
    row: d3.Selection<HTMLDivElement, unknown, null, undefined>,
    data: TimelineRowData,
  ): void {
    const strip = row.append("div").attr("class", "timeline-strip");
    const color = this.store.colorOf(data.run);
    const selectedKeys = new Set(this.store.current.selectedGenerations.map((s) => `${s.run}#${s.gen}`));
    for (const gen of data.generations) {
      const coords = gen.coords;
      const refs = data.referenceCoords;
      const all = coords.concat(refs);
      const x = d3
        .scaleLinear()
        .domain(d3.extent(refs, (c) => c[0]) as [number, number])
        .range([4, PATCH - 4]);
      const y = d3
        .scaleLinear()
        .domain(d3.extent(refs, (c) => c[1]) as [number, number])
        .range([PATCH - 4, 4]);
      void all;
      const svg = strip
        .append("svg")
        .attr("class", "timeline-patch")
        .attr("data-run", gen.run)
        .attr("data-gen", gen.gen)
        .classed("selected", selectedKeys.has(`${gen.run}#${gen.gen}`))
        .attr("width", PATCH)
        .attr("height", PATCH)
        .on("click", () => this.store.selectGeneration(gen.run, gen.gen));
      svg
        .selectAll("circle.ref-dot")
        .data(refs)
        .join("circle")
        .attr("class", "ref-dot")
        .attr("cx", (c) => x(c[0]))
        .attr("cy", (c) => y(c[1]))
        .attr("r", 0.8)
        .attr("fill", "#b5b5b5"); // reference ground truth stays gray
      svg
        .selectAll("circle.sol-dot")
        .data(coords)
        .join("circle")
        .attr("class", "sol-dot")
        .attr("cx", (c) => x(c[0]))
        .attr("cy", (c) => y(c[1]))
        .attr("r", 1.6)
        .attr("fill", color);
      // out-of-viewport marker: solutions outside the reference bounding box
      const sol = gen.bounds.solutions;
      const ref = gen.bounds.reference;
      const outside =
        sol.min[0] < ref.min[0] || sol.min[1] < ref.min[1] || sol.max[0] > ref.max[0] || sol.max[1] > ref.max[1];
      if (outside) {
        svg.append("text").attr("class", "viewport-flag").attr("x", PATCH - 10).attr("y", 12).text("!");
      }
      svg.append("text").attr("class", "patch-label").attr("x", 3).attr("y", PATCH - 3).text(`#${gen.gen}`);
    }
  }
}

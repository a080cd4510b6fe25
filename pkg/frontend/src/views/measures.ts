import * as d3 from "d3";

import type { Measure, MeasureSeries } from "../types";
import type { Store } from "../state";

const MEASURES: Measure[] = ["igd", "hv", "sp", "ms"];
const WIDTH = 420;
const HEIGHT = 130;
const MARGIN = { left: 46, right: 8, top: 14, bottom: 20 };

/**
 * Four line charts, one per quality measure, sharing the generation axis.
 * Zooming rescales the horizontal window while the vertical range refits the
 * visible data; clicking a data point selects that generation.
 */
export class MeasureChartsView {
  private root: d3.Selection<HTMLElement, unknown, null, undefined>;
  private series = new Map<string, MeasureSeries>();
  private window: [number, number] | null = null; // visible generation range

  constructor(container: HTMLElement, private readonly store: Store) {
    this.root = d3.select(container);
    for (const m of MEASURES) {
      const svg = this.root
        .append("svg")
        .attr("class", `measure-chart measure-${m}`)
        .attr("width", WIDTH)
        .attr("height", HEIGHT);
      svg.append("text").attr("class", "chart-title").attr("x", MARGIN.left).attr("y", 11).text(m.toUpperCase());
      svg.append("g").attr("class", "x-axis");
      svg.append("g").attr("class", "y-axis");
      svg.append("g").attr("class", "series-layer");
      const zoom = d3
        .zoom<SVGSVGElement, unknown>()
        .scaleExtent([1, 40])
        .on("zoom", (event) => this.applyZoom(event.transform));
      svg.call(zoom as any);
    }
  }

  setSeries(run: string, series: MeasureSeries): void {
    this.series.set(run, series);
    this.render();
  }

  dropSeries(run: string): void {
    this.series.delete(run);
    this.render();
  }

  private applyZoom(transform: d3.ZoomTransform): void {
    const all = [...this.series.values()];
    if (!all.length) return;
    const full = d3.extent(all.flatMap((s) => s.gen_indices)) as [number, number];
    const base = d3.scaleLinear().domain(full).range([MARGIN.left, WIDTH - MARGIN.right]);
    const zoomed = transform.rescaleX(base);
    this.window = zoomed.domain() as [number, number];
    this.render();
  }

  render(): void {
    const active = this.store.current.activated.filter((r) => this.series.has(r));
    for (const m of MEASURES) {
      const svg = this.root.select<SVGSVGElement>(`svg.measure-${m}`);
      const layer = svg.select<SVGGElement>("g.series-layer");
      layer.selectAll("*").remove();
      if (!active.length) continue;

      const full = d3.extent(active.flatMap((r) => this.series.get(r)!.gen_indices)) as [number, number];
      const domain = this.window ?? full;
      const x = d3.scaleLinear().domain(domain).range([MARGIN.left, WIDTH - MARGIN.right]);

      // vertical range always refits what is visible in the window
      const visible: number[] = [];
      for (const r of active) {
        const s = this.series.get(r)!;
        s.gen_indices.forEach((g, i) => {
          if (g >= domain[0] && g <= domain[1]) visible.push(s[m][i]);
        });
      }
      const yExtent = d3.extent(visible) as [number, number];
      const spanY = yExtent[1] - yExtent[0] || Math.abs(yExtent[1]) || 1;
      const y = d3
        .scaleLinear()
        .domain([yExtent[0] - 0.05 * spanY, yExtent[1] + 0.05 * spanY])
        .range([HEIGHT - MARGIN.bottom, MARGIN.top]);

      svg.select<SVGGElement>("g.x-axis")
        .attr("transform", `translate(0,${HEIGHT - MARGIN.bottom})`)
        .call(d3.axisBottom(x).ticks(6).tickFormat(d3.format("d")) as any);
      svg.select<SVGGElement>("g.y-axis")
        .attr("transform", `translate(${MARGIN.left},0)`)
        .call(d3.axisLeft(y).ticks(4).tickFormat(d3.format(".3~g")) as any);

      const line = d3
        .line<[number, number]>()
        .x((d) => x(d[0]))
        .y((d) => y(d[1]));
      for (const r of active) {
        const s = this.series.get(r)!;
        const pts = s.gen_indices.map((g, i) => [g, s[m][i]] as [number, number]);
        layer
          .append("path")
          .attr("class", "series-line")
          .attr("data-run", r)
          .attr("fill", "none")
          .attr("stroke", this.store.colorOf(r))
          .attr("stroke-width", 1.6)
          .attr("d", line(pts.filter((p) => p[0] >= domain[0] && p[0] <= domain[1])));
        layer
          .selectAll(null)
          .data(pts.filter((p) => p[0] >= domain[0] && p[0] <= domain[1]))
          .join("circle")
          .attr("class", "series-point")
          .attr("data-run", r)
          .attr("cx", (d) => x(d[0]))
          .attr("cy", (d) => y(d[1]))
          .attr("r", 2.5)
          .attr("fill", this.store.colorOf(r))
          .on("click", (_, d) => this.store.selectGeneration(r, d[0]));
      }
    }
  }
}

import * as d3 from "d3";

import type { DensityGrid, RefMode, SolutionViewPayload } from "../types";
import type { Store } from "../state";

const WIDTH = 520;
const HEIGHT = 440;
const CONTOUR_LEVELS = 8;

/**
 * Magnified inspection of the selected generations: sampled dots, crosses
 * for LOF outliers and per-objective extrema, filled KDE contours, and the
 * reference set in one of three modes (scatter, density map, hull).
 */
export class SolutionView {
  private root: d3.Selection<HTMLElement, unknown, null, undefined>;
  private payload: SolutionViewPayload | null = null;

  constructor(
    container: HTMLElement,
    private readonly store: Store,
    private readonly onControlsChanged: () => void,
  ) {
    this.root = d3.select(container);
    const controls = this.root.append("div").attr("class", "solution-controls");
    controls.append("label").text("reference ");
    const select = controls
      .append("select")
      .attr("class", "refmode-select")
      .on("change", (event) => {
        this.store.setRefMode((event.target as HTMLSelectElement).value as RefMode);
        this.onControlsChanged();
      });
    select
      .selectAll("option")
      .data(["scatter", "density", "hull"] as RefMode[])
      .join("option")
      .attr("value", (d) => d)
      .text((d) => d);
    controls.append("label").text(" sample rate ");
    controls
      .append("input")
      .attr("type", "range")
      .attr("class", "rate-slider")
      .attr("min", 0.05)
      .attr("max", 1)
      .attr("step", 0.05)
      .property("value", this.store.current.sampleRate)
      .on("change", (event) => {
        this.store.setSampleRate(parseFloat((event.target as HTMLInputElement).value));
        this.onControlsChanged();
      });

    const svg = this.root.append("svg").attr("class", "solution-plot").attr("width", WIDTH).attr("height", HEIGHT);
    const stage = svg.append("g").attr("class", "solution-stage");
    stage.append("g").attr("class", "reference-layer");
    stage.append("g").attr("class", "contour-layer");
    stage.append("g").attr("class", "point-layer");
    const zoom = d3
      .zoom<SVGSVGElement, unknown>()
      .scaleExtent([0.3, 20])
      .on("zoom", (event) => stage.attr("transform", event.transform.toString()));
    svg.call(zoom as any);
    this.root.append("div").attr("class", "solution-tooltip").style("display", "none");
  }

  setPayload(payload: SolutionViewPayload | null): void {
    this.payload = payload;
    this.render();
  }

  render(): void {
    const svg = this.root.select<SVGSVGElement>("svg.solution-plot");
    const refLayer = svg.select<SVGGElement>("g.reference-layer");
    const contourLayer = svg.select<SVGGElement>("g.contour-layer");
    const pointLayer = svg.select<SVGGElement>("g.point-layer");
    for (const layer of [refLayer, contourLayer, pointLayer]) layer.selectAll("*").remove();
    if (!this.payload) return;
    const payload = this.payload;

    const xs: number[] = [];
    const ys: number[] = [];
    for (const g of payload.generations) {
      for (const p of g.points) {
        xs.push(p.x);
        ys.push(p.y);
      }
    }
    if (payload.reference.points) {
      for (const [rx, ry] of payload.reference.points) {
        xs.push(rx);
        ys.push(ry);
      }
    }
    if (payload.reference.hull) {
      for (const [rx, ry] of payload.reference.hull) {
        xs.push(rx);
        ys.push(ry);
      }
    }
    const x = d3.scaleLinear().domain(pad(d3.extent(xs))).range([15, WIDTH - 15]);
    const y = d3.scaleLinear().domain(pad(d3.extent(ys))).range([HEIGHT - 15, 15]);

    this.renderReference(refLayer, payload, x, y);

    for (const gen of payload.generations) {
      const color = this.store.colorOf(gen.run);
      this.renderContours(contourLayer, gen.kde, color, x, y);
      const group = pointLayer.append("g").attr("class", "generation-points").attr("data-run", gen.run).attr("data-gen", gen.gen);
      const dots = gen.points.filter((p) => !p.marked);
      const crosses = gen.points.filter((p) => p.marked);
      group
        .selectAll("circle.solution-dot")
        .data(dots)
        .join("circle")
        .attr("class", "solution-dot")
        .attr("cx", (p) => x(p.x))
        .attr("cy", (p) => y(p.y))
        .attr("r", 3)
        .attr("fill", color)
        .on("mouseenter", (_, p) => this.showTooltip(`${gen.run}#${gen.gen} f = (${p.objectives.map((v) => v.toPrecision(5)).join(", ")})`))
        .on("mouseleave", () => this.hideTooltip());
      // LOF outliers and per-objective extrema render as crosses, not dots
      group
        .selectAll("path.solution-cross")
        .data(crosses)
        .join("path")
        .attr("class", "solution-cross")
        .attr("stroke", color)
        .attr("fill", "none")
        .attr("d", (p) => crossPath(x(p.x), y(p.y), 4))
        .on("mouseenter", (_, p) => this.showTooltip(`${gen.run}#${gen.gen} f = (${p.objectives.map((v) => v.toPrecision(5)).join(", ")})`))
        .on("mouseleave", () => this.hideTooltip());
    }
  }

  private renderReference(
    layer: d3.Selection<SVGGElement, unknown, null, undefined>,
    payload: SolutionViewPayload,
    x: d3.ScaleLinear<number, number>,
    y: d3.ScaleLinear<number, number>,
  ): void {
    const ref = payload.reference;
    if (ref.mode === "scatter" && ref.points) {
      layer
        .selectAll("circle.reference-dot")
        .data(ref.points)
        .join("circle")
        .attr("class", "reference-dot")
        .attr("cx", (p) => x(p[0]))
        .attr("cy", (p) => y(p[1]))
        .attr("r", 1.5)
        .attr("fill", "#adadad");
    } else if (ref.mode === "density" && ref.density) {
      const grid = ref.density;
      const g = grid.values.length;
      const maxVal = d3.max(grid.values.flat()) ?? 1;
      const gray = d3.scaleSequential(d3.interpolateGreys).domain([0, maxVal]);
      const cellW = Math.abs(x(grid.x1) - x(grid.x0)) / g;
      const cellH = Math.abs(y(grid.y0) - y(grid.y1)) / g;
      const cells: Array<{ cx: number; cy: number; v: number }> = [];
      for (let r = 0; r < g; r++) {
        for (let c = 0; c < g; c++) {
          const v = grid.values[r][c];
          if (v > maxVal * 0.004) {
            cells.push({ cx: grid.x0 + ((c + 0.5) * (grid.x1 - grid.x0)) / g, cy: grid.y0 + ((r + 0.5) * (grid.y1 - grid.y0)) / g, v });
          }
        }
      }
      layer
        .selectAll("rect.reference-density-cell")
        .data(cells)
        .join("rect")
        .attr("class", "reference-density-cell")
        .attr("x", (d) => x(d.cx) - cellW / 2)
        .attr("y", (d) => y(d.cy) - cellH / 2)
        .attr("width", cellW)
        .attr("height", cellH)
        .attr("fill", (d) => gray(d.v) as string);
    } else if (ref.mode === "hull" && ref.hull) {
      layer
        .append("path")
        .attr("class", "reference-hull")
        .attr("d", `M${ref.hull.map(([hx, hy]) => `${x(hx)},${y(hy)}`).join("L")}Z`)
        .attr("fill", "#cccccc")
        .attr("fill-opacity", 0.5)
        .attr("stroke", "#9a9a9a");
    }
  }

  private renderContours(
    layer: d3.Selection<SVGGElement, unknown, null, undefined>,
    grid: DensityGrid,
    color: string,
    x: d3.ScaleLinear<number, number>,
    y: d3.ScaleLinear<number, number>,
  ): void {
    const g = grid.values.length;
    const flat = grid.values.flat();
    const maxVal = d3.max(flat) ?? 0;
    if (maxVal <= 0) return;
    const thresholds = d3.range(1, CONTOUR_LEVELS + 1).map((i) => (maxVal * i) / (CONTOUR_LEVELS + 1));
    const contours = d3.contours().size([g, g]).thresholds(thresholds)(flat);
    // contour coordinates are in grid units; map through the grid bounds
    const sx = (grid.x1 - grid.x0) / g;
    const sy = (grid.y1 - grid.y0) / g;
    const transform = d3.geoTransform({
      point(px: number, py: number) {
        (this as any).stream.point(x(grid.x0 + px * sx), y(grid.y0 + py * sy));
      },
    });
    const path = d3.geoPath(transform);
    layer
      .selectAll(null)
      .data(contours)
      .join("path")
      .attr("class", "kde-contour")
      .attr("d", (c) => path(c as any) ?? "")
      .attr("fill", color)
      .attr("fill-opacity", 0.06)
      .attr("stroke", color)
      .attr("stroke-opacity", 0.55)
      .attr("stroke-width", (_, i) => 0.4 + (i / CONTOUR_LEVELS) * 1.2);
  }

  private showTooltip(text: string): void {
    this.root.select("div.solution-tooltip").style("display", "block").text(text);
  }

  private hideTooltip(): void {
    this.root.select("div.solution-tooltip").style("display", "none");
  }
}

function pad(extent: [number, number] | [undefined, undefined]): [number, number] {
  const [lo, hi] = extent as [number, number];
  if (!(isFinite(lo) && isFinite(hi))) return [0, 1];
  const span = hi - lo || 1;
  return [lo - 0.05 * span, hi + 0.05 * span];
}

function crossPath(cx: number, cy: number, r: number): string {
  return `M${cx - r},${cy - r}L${cx + r},${cy + r}M${cx - r},${cy + r}L${cx + r},${cy - r}`;
}

import * as d3 from "d3";

import type { SimilarityPayload, WorkspaceSummary } from "../types";
import type { Store } from "../state";

const KINDS = [
  "alg_best_igd_emd",
  "alg_best_hv_emd",
  "alg_dtw_igd",
  "alg_dtw_hv",
  "alg_euclid_igd",
  "alg_euclid_hv",
];

const fmt = d3.format(".6f");

/**
 * Statistical overview (problem facts + quality measure table) and the
 * algorithm similarity scatterplot.  Clicking a table row or an embedding
 * dot toggles the algorithm's activation.
 */
export class OverviewView {
  private root: d3.Selection<HTMLElement, unknown, null, undefined>;

  constructor(
    container: HTMLElement,
    private readonly store: Store,
    private readonly onKindChange: (kind: string) => void,
  ) {
    this.root = d3.select(container);
  }

  renderSummary(ws: WorkspaceSummary): void {
    this.root.selectAll("*").remove();
    const info = this.root.append("div").attr("class", "workspace-info");
    info
      .append("span")
      .attr("class", "problem-facts")
      .text(
        `${ws.problem.name}  m=${ws.problem.m}  d=${ws.problem.d ?? "?"}  ` +
          `${ws.algorithms.length} algorithms  reference ${ws.reference_size} points`,
      );

    const table = this.root.append("table").attr("class", "measure-table");
    const header = table.append("thead").append("tr");
    for (const h of ["algorithm", "best IGD", "last IGD", "best HV", "last HV"]) {
      header.append("th").text(h);
    }
    const body = table.append("tbody");
    const rows = body
      .selectAll("tr")
      .data(ws.algorithms, (d: any) => d.id)
      .join("tr")
      .attr("class", "algorithm-row")
      .attr("data-run", (d) => d.id)
      .on("click", (_, d) => this.store.toggleAlgorithm(d.id));
    rows
      .append("td")
      .attr("class", "algorithm-name")
      .text((d) => d.id);
    rows.append("td").attr("class", "best-igd").text((d) => fmt(d.best_igd));
    rows.append("td").attr("class", "last-igd").text((d) => fmt(d.last_igd));
    rows.append("td").attr("class", "best-hv").text((d) => fmt(d.best_hv));
    rows.append("td").attr("class", "last-hv").text((d) => fmt(d.last_hv));

    const controls = this.root.append("div").attr("class", "similarity-controls");
    controls.append("label").text("similarity: ");
    const select = controls
      .append("select")
      .attr("class", "similarity-kind")
      .on("change", (event) => {
        const kind = (event.target as HTMLSelectElement).value;
        this.store.setSimilarityKind(kind);
        this.onKindChange(kind);
      });
    select
      .selectAll("option")
      .data(KINDS)
      .join("option")
      .attr("value", (d) => d)
      .property("selected", (d) => d === this.store.current.similarityKind)
      .text((d) => d);

    this.root.append("svg").attr("class", "similarity-embedding").attr("width", 260).attr("height", 220);
    this.refreshActivation();
  }

  renderEmbedding(payload: SimilarityPayload): void {
    const svg = this.root.select<SVGSVGElement>("svg.similarity-embedding");
    svg.selectAll("*").remove();
    const coords = payload.embedding.coords;
    const xs = coords.map((c) => c[0]);
    const ys = coords.map((c) => c[1]);
    const x = d3.scaleLinear().domain(pad(d3.extent(xs))).range([15, 245]);
    const y = d3.scaleLinear().domain(pad(d3.extent(ys))).range([205, 15]);
    svg
      .selectAll("circle")
      .data(payload.embedding.labels.map((label, i) => ({ label, cx: coords[i][0], cy: coords[i][1] })))
      .join("circle")
      .attr("class", "embedding-dot")
      .attr("data-run", (d) => d.label)
      .attr("cx", (d) => x(d.cx))
      .attr("cy", (d) => y(d.cy))
      .attr("r", 6)
      .on("click", (_, d) => this.store.toggleAlgorithm(d.label));
    this.refreshActivation();
  }

  /** Re-color rows and dots from the store without refetching. */
  refreshActivation(): void {
    const store = this.store;
    this.root
      .selectAll<HTMLTableRowElement, unknown>("tr.algorithm-row")
      .classed("activated", function () {
        return store.current.activated.includes(this.dataset.run ?? "");
      })
      .style("color", function () {
        const run = this.dataset.run ?? "";
        return store.current.activated.includes(run) ? store.colorOf(run) : "";
      });
    this.root
      .selectAll<SVGCircleElement, unknown>("circle.embedding-dot")
      .attr("fill", function () {
        const run = (this as SVGCircleElement).dataset.run ?? "";
        return store.current.activated.includes(run) ? store.colorOf(run) : "#bbbbbb";
      });
  }
}

function pad(extent: [number, number] | [undefined, undefined]): [number, number] {
  const [lo, hi] = extent as [number, number];
  if (!(isFinite(lo) && isFinite(hi))) return [0, 1];
  const span = hi - lo || 1;
  return [lo - 0.08 * span, hi + 0.08 * span];
}

import * as d3 from "d3";

import type { GraphNode, GraphPayload } from "../types";
import type { Store } from "../state";

const WIDTH = 640;
const HEIGHT = 480;

/**
 * The generation similarity view: the kNN graph laid out by the server.
 * Nodes are colored by run with lightness encoding chronology, HDBSCAN
 * clusters get gray bubbles, noise nodes a dark border, cross-run
 * neighborhoods a donut ring, and per-run time curves connect cluster
 * transitions with quadratic Bezier segments.  An edge slider reveals the
 * strongest affinities first.
 */
export class GenerationGraphView {
  private root: d3.Selection<HTMLElement, unknown, null, undefined>;
  private payload: GraphPayload | null = null;

  constructor(container: HTMLElement, private readonly store: Store) {
    this.root = d3.select(container);
    const controls = this.root.append("div").attr("class", "graph-controls");
    controls.append("label").text("visible edges ");
    controls
      .append("input")
      .attr("type", "range")
      .attr("class", "edge-slider")
      .attr("min", 0)
      .attr("max", 1)
      .attr("step", 0.05)
      .property("value", this.store.current.graphParams.visibleEdgeFraction)
      .on("input", (event) => {
        const frac = parseFloat((event.target as HTMLInputElement).value);
        this.store.setGraphParams({ visibleEdgeFraction: frac });
      });
    for (const toggle of ["bubbles", "rings", "curves"] as const) {
      const label = controls.append("label").attr("class", `toggle-${toggle}`);
      label
        .append("input")
        .attr("type", "checkbox")
        .property("checked", true)
        .on("change", (event) => {
          const on = (event.target as HTMLInputElement).checked;
          if (toggle === "bubbles") this.store.setGraphParams({ showBubbles: on });
          else if (toggle === "rings") this.store.setGraphParams({ showRings: on });
          else this.store.setGraphParams({ showCurves: on });
        });
      label.append("span").text(` ${toggle}`);
    }
    const svg = this.root.append("svg").attr("class", "generation-graph").attr("width", WIDTH).attr("height", HEIGHT);
    const stage = svg.append("g").attr("class", "graph-stage");
    stage.append("g").attr("class", "bubble-layer");
    stage.append("g").attr("class", "edge-layer");
    stage.append("g").attr("class", "curve-layer");
    stage.append("g").attr("class", "node-layer");
    const zoom = d3
      .zoom<SVGSVGElement, unknown>()
      .scaleExtent([0.3, 12])
      .on("zoom", (event) => stage.attr("transform", event.transform.toString()));
    svg.call(zoom as any);
    this.root.append("div").attr("class", "graph-tooltip").style("display", "none");
  }

  setPayload(payload: GraphPayload | null): void {
    this.payload = payload;
    this.render();
  }

  render(): void {
    const svg = this.root.select<SVGSVGElement>("svg.generation-graph");
    const layers = {
      bubbles: svg.select<SVGGElement>("g.bubble-layer"),
      edges: svg.select<SVGGElement>("g.edge-layer"),
      curves: svg.select<SVGGElement>("g.curve-layer"),
      nodes: svg.select<SVGGElement>("g.node-layer"),
    };
    for (const layer of Object.values(layers)) layer.selectAll("*").remove();
    if (!this.payload) return;
    const { nodes, edges, curves } = this.payload;
    const params = this.store.current.graphParams;

    const x = d3
      .scaleLinear()
      .domain(pad(d3.extent(nodes, (n) => n.x)))
      .range([20, WIDTH - 20]);
    const y = d3
      .scaleLinear()
      .domain(pad(d3.extent(nodes, (n) => n.y)))
      .range([HEIGHT - 20, 20]);
    const byLabel = new Map(nodes.map((n) => [n.label, n]));
    const px = (label: string) => x(byLabel.get(label)!.x);
    const py = (label: string) => y(byLabel.get(label)!.y);

    if (params.showBubbles) {
      const clusters = d3.group(nodes.filter((n) => n.cluster >= 0), (n) => n.cluster);
      for (const [cluster, members] of clusters) {
        const hull = d3.polygonHull(members.map((n) => [x(n.x), y(n.y)] as [number, number]));
        const path =
          hull && hull.length >= 3
            ? `M${hull.map((p) => p.join(",")).join("L")}Z`
            : circlePath(members.map((n) => [x(n.x), y(n.y)]));
        layers.bubbles
          .append("path")
          .attr("class", "cluster-bubble")
          .attr("data-cluster", cluster)
          .attr("d", path)
          .on("click", () => {
            layers.nodes
              .selectAll<SVGGElement, GraphNode>("g.graph-node")
              .classed("highlighted", (n) => n.cluster === cluster);
          });
      }
    }

    // edges arrive ranked by ascending distance: the slider reveals the
    // strongest affinities first
    const visible = edges.slice(0, Math.round(edges.length * params.visibleEdgeFraction));
    layers.edges
      .selectAll("line")
      .data(visible)
      .join("line")
      .attr("class", "graph-edge")
      .attr("x1", (e) => px(e.source))
      .attr("y1", (e) => py(e.source))
      .attr("x2", (e) => px(e.target))
      .attr("y2", (e) => py(e.target));

    if (params.showCurves) {
      for (const [run, segments] of Object.entries(curves)) {
        for (const segment of segments) {
          const path = d3.path();
          for (let i = 0; i + 1 < segment.length; i++) {
            const [x1, y1] = [px(segment[i]), py(segment[i])];
            const [x2, y2] = [px(segment[i + 1]), py(segment[i + 1])];
            // midpoint-offset quadratic control point
            const mx = (x1 + x2) / 2 - (y2 - y1) * 0.18;
            const my = (y1 + y2) / 2 + (x2 - x1) * 0.18;
            path.moveTo(x1, y1);
            path.quadraticCurveTo(mx, my, x2, y2);
          }
          layers.curves
            .append("path")
            .attr("class", "time-curve")
            .attr("data-run", run)
            .attr("data-nodes", segment.join(" "))
            .attr("stroke", this.store.colorOf(run))
            .attr("fill", "none")
            .attr("d", path.toString())
            .on("mouseenter", () => this.showTooltip(`${run}: ${segment.join(" -> ")}`))
            .on("mouseleave", () => this.hideTooltip());
        }
      }
    }

    const tooltipText = (n: GraphNode) =>
      `${n.label} (cluster ${n.cluster}) neighbors: ${n.neighbors.join(", ")}`;
    const groups = layers.nodes
      .selectAll("g.graph-node")
      .data(nodes, (n: any) => n.label)
      .join("g")
      .attr("class", "graph-node")
      .attr("data-label", (n) => n.label)
      .attr("transform", (n) => `translate(${x(n.x)},${y(n.y)})`)
      .on("mouseenter", (_, n) => this.showTooltip(tooltipText(n)))
      .on("mouseleave", () => this.hideTooltip());
    groups
      .append("circle")
      .attr("class", "node-body")
      .classed("outlier", (n) => n.outlier)
      .attr("r", (n) => n.size / 2)
      .attr("fill", (n) => {
        // lighter = earlier in the evolutionary process
        const base = d3.color(this.store.colorOf(n.run))!;
        return base.brighter(1.6 * (1 - n.age)).formatHex();
      })
      .attr("stroke", (n) => (n.outlier ? "#444444" : "none"))
      .attr("stroke-width", (n) => (n.outlier ? 1.6 : 0));
    if (params.showRings) {
      const arc = d3.arc<GraphNode>();
      groups
        .filter((n) => n.ring > 0)
        .append("path")
        .attr("class", "node-ring")
        .attr("fill", "#555555")
        .attr("d", (n) =>
          arc({
            innerRadius: n.size / 2 + 1.5,
            outerRadius: n.size / 2 + 3.5,
            startAngle: 0,
            endAngle: 2 * Math.PI * n.ring,
          } as any),
        );
    }
  }

  private showTooltip(text: string): void {
    this.root.select("div.graph-tooltip").style("display", "block").text(text);
  }

  private hideTooltip(): void {
    this.root.select("div.graph-tooltip").style("display", "none");
  }
}

function pad(extent: [number, number] | [undefined, undefined]): [number, number] {
  const [lo, hi] = extent as [number, number];
  if (!(isFinite(lo) && isFinite(hi))) return [0, 1];
  const span = hi - lo || 1;
  return [lo - 0.06 * span, hi + 0.06 * span];
}

function circlePath(points: Array<[number, number]>): string {
  const cx = d3.mean(points, (p) => p[0]) ?? 0;
  const cy = d3.mean(points, (p) => p[1]) ?? 0;
  const r = Math.max(10, ...points.map((p) => Math.hypot(p[0] - cx, p[1] - cy))) + 6;
  return `M${cx - r},${cy}a${r},${r} 0 1,0 ${2 * r},0a${r},${r} 0 1,0 ${-2 * r},0Z`;
}

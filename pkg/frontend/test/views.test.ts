import { afterEach, beforeEach, describe, expect, it, vi } from "vitest";

import type { GraphPayload, MeasureSeries, WorkspaceSummary } from "../src/types";
import { fixture, installFixtureFetch, startApp } from "./helpers";

const d3format = (v: number) => v.toFixed(6);

beforeEach(() => {
  installFixtureFetch();
});

afterEach(() => {
  vi.unstubAllGlobals();
  document.body.innerHTML = "";
});

describe("UI smoke suite against the fixture workspace", () => {
  it("activating two algorithms renders two colored series in all four measure charts", async () => {
    const { app, root } = await startApp();
    app.store.toggleAlgorithm("nsga2");
    app.store.toggleAlgorithm("sms-emoa");
    await app.whenIdle();

    const charts = root.querySelectorAll("svg.measure-chart");
    expect(charts).toHaveLength(4);
    for (const chart of charts) {
      const lines = chart.querySelectorAll("path.series-line");
      expect(lines).toHaveLength(2);
      const colors = new Set([...lines].map((l) => l.getAttribute("stroke")));
      expect(colors.size).toBe(2);
      const runs = new Set([...lines].map((l) => l.getAttribute("data-run")));
      expect(runs).toEqual(new Set(["nsga2", "sms-emoa"]));
    }
  });

  it("toggling both runs into the generation similarity view renders nodes with rings where cross-run neighbors exist", async () => {
    const { app, root } = await startApp();
    app.store.toggleAlgorithm("nsga2");
    app.store.toggleAlgorithm("sms-emoa");
    app.store.toggleGraphRun("nsga2");
    app.store.toggleGraphRun("sms-emoa");
    await app.whenIdle();

    const payload = fixture<GraphPayload>("/api/analysis/generation-graph?runs=nsga2,sms-emoa&k=10&size=igd");
    const nodes = root.querySelectorAll("g.graph-node");
    expect(nodes).toHaveLength(payload.nodes.length);

    const expectRings = payload.nodes.filter((n) => n.ring > 0).length;
    expect(expectRings).toBeGreaterThan(0); // fixture does contain cross-run neighborhoods
    const rings = root.querySelectorAll("path.node-ring");
    expect(rings).toHaveLength(expectRings);

    // ring arcs sit on exactly the nodes whose neighbor list crosses runs
    for (const node of payload.nodes) {
      const el = root.querySelector(`g.graph-node[data-label="${node.label}"]`);
      expect(el).not.toBeNull();
      expect(el!.querySelectorAll("path.node-ring")).toHaveLength(node.ring > 0 ? 1 : 0);
    }
  });

  it("selecting two generations renders the solution view with KDE contours and all three reference modes", async () => {
    const { app, root } = await startApp();
    app.store.toggleAlgorithm("nsga2");
    app.store.toggleAlgorithm("sms-emoa");
    app.store.selectGeneration("nsga2", 29);
    app.store.selectGeneration("sms-emoa", 29);
    await app.whenIdle();

    expect(root.querySelectorAll("g.generation-points")).toHaveLength(2);
    expect(root.querySelectorAll("path.kde-contour").length).toBeGreaterThan(0);
    expect(root.querySelectorAll("path.solution-cross").length).toBeGreaterThan(0);
    expect(root.querySelectorAll("circle.reference-dot").length).toBeGreaterThan(0); // scatter default

    app.store.setRefMode("density");
    app.enqueue(async () => {});
    await app.whenIdle();
    (root.querySelector("select.refmode-select") as HTMLSelectElement).value = "density";
    root.querySelector("select.refmode-select")!.dispatchEvent(new Event("change"));
    await app.whenIdle();
    expect(root.querySelectorAll("rect.reference-density-cell").length).toBeGreaterThan(0);

    (root.querySelector("select.refmode-select") as HTMLSelectElement).value = "hull";
    app.store.setRefMode("hull");
    root.querySelector("select.refmode-select")!.dispatchEvent(new Event("change"));
    await app.whenIdle();
    expect(root.querySelectorAll("path.reference-hull")).toHaveLength(1);
  });

  it("every displayed best-IGD number equals the API payload value", async () => {
    const { root } = await startApp();
    const ws = fixture<WorkspaceSummary>("/api/workspace?sort=best_igd");
    const rows = root.querySelectorAll("tr.algorithm-row");
    expect(rows).toHaveLength(ws.algorithms.length);
    for (const alg of ws.algorithms) {
      const row = root.querySelector(`tr.algorithm-row[data-run="${alg.id}"]`)!;
      const shown = row.querySelector("td.best-igd")!.textContent;
      expect(shown).toBe(d3format(alg.best_igd));
      // the measures payload agrees with the table (no client-side math)
      const series = fixture<MeasureSeries>(`/api/runs/${alg.id}/measures`);
      expect(Math.min(...series.igd)).toBe(alg.best_igd);
    }
  });
});

describe("view behaviors", () => {
  it("table rows arrive sorted ascending by best IGD", async () => {
    const { root } = await startApp();
    const shown = [...root.querySelectorAll("td.best-igd")].map((td) => parseFloat(td.textContent ?? ""));
    expect(shown).toEqual([...shown].sort((a, b) => a - b));
  });

  it("clicking an embedding dot activates the algorithm like a table row", async () => {
    const { app, root } = await startApp();
    const dot = root.querySelector('circle.embedding-dot[data-run="nsga2"]') as SVGCircleElement;
    dot.dispatchEvent(new Event("click"));
    await app.whenIdle();
    expect(app.store.current.activated).toEqual(["nsga2"]);
    const row = root.querySelector('tr.algorithm-row[data-run="nsga2"]')!;
    expect(row.classList.contains("activated")).toBe(true);
  });

  it("deactivating removes the series from the charts", async () => {
    const { app, root } = await startApp();
    app.store.toggleAlgorithm("nsga2");
    await app.whenIdle();
    expect(root.querySelectorAll("path.series-line")).toHaveLength(4);
    app.store.toggleAlgorithm("nsga2");
    await app.whenIdle();
    expect(root.querySelectorAll("path.series-line")).toHaveLength(0);
  });

  it("timeline renders one patch per generation with the reference in gray", async () => {
    const { app, root } = await startApp();
    app.store.toggleAlgorithm("nsga2");
    await app.whenIdle();
    const series = fixture<MeasureSeries>("/api/runs/nsga2/measures");
    const patches = root.querySelectorAll('svg.timeline-patch[data-run="nsga2"]');
    expect(patches).toHaveLength(series.gen_indices.length);
    const refDots = patches[0].querySelectorAll("circle.ref-dot");
    expect(refDots.length).toBe(91);
    expect(refDots[0].getAttribute("fill")).toBe("#b5b5b5");
  });

  it("clicking a patch selects the generation and switches the summary to comparison mode", async () => {
    const { app, root } = await startApp();
    app.store.toggleAlgorithm("nsga2");
    await app.whenIdle();
    const patch = root.querySelector('svg.timeline-patch[data-run="nsga2"][data-gen="29"]')!;
    patch.dispatchEvent(new Event("click"));
    await app.whenIdle();
    expect(app.store.current.selectedGenerations).toEqual([{ run: "nsga2", gen: 29 }]);
    expect(root.querySelectorAll("rect.selected-bar").length).toBe(3); // grouped bars
    expect(root.querySelectorAll("rect.igd-bin-selected").length).toBeGreaterThan(0); // striped histogram
  });

  it("IGD histogram uses 20 bins with the aggregated value marked", async () => {
    const { app, root } = await startApp();
    app.store.toggleAlgorithm("nsga2");
    await app.whenIdle();
    const bins = root.querySelectorAll("rect.igd-bin");
    expect(bins.length).toBe(20);
    expect(root.querySelectorAll("line.igd-mean-line")).toHaveLength(1);
  });

  it("edge slider limits visible edges; disabling curves removes only curves", async () => {
    const { app, root } = await startApp();
    app.store.toggleAlgorithm("nsga2");
    app.store.toggleAlgorithm("sms-emoa");
    app.store.toggleGraphRun("nsga2");
    app.store.toggleGraphRun("sms-emoa");
    await app.whenIdle();
    const payload = fixture<GraphPayload>("/api/analysis/generation-graph?runs=nsga2,sms-emoa&k=10&size=igd");
    expect(root.querySelectorAll("line.graph-edge")).toHaveLength(payload.edges.length);

    app.store.setGraphParams({ visibleEdgeFraction: 0.5 });
    await app.whenIdle();
    expect(root.querySelectorAll("line.graph-edge")).toHaveLength(Math.round(payload.edges.length * 0.5));

    const curvesBefore = root.querySelectorAll("path.time-curve").length;
    app.store.setGraphParams({ showCurves: false });
    await app.whenIdle();
    expect(root.querySelectorAll("path.time-curve")).toHaveLength(0);
    expect(root.querySelectorAll("g.graph-node")).toHaveLength(payload.nodes.length);
    app.store.setGraphParams({ showCurves: true });
    await app.whenIdle();
    expect(root.querySelectorAll("path.time-curve")).toHaveLength(curvesBefore);
  });

  it("single-run graph shows no rings", async () => {
    const { app, root } = await startApp();
    app.store.toggleAlgorithm("nsga2");
    app.store.toggleGraphRun("nsga2");
    await app.whenIdle();
    expect(root.querySelectorAll("g.graph-node")).toHaveLength(10);
    expect(root.querySelectorAll("path.node-ring")).toHaveLength(0);
  });

  it("node hover opens a prompt with the neighborhood", async () => {
    const { app, root } = await startApp();
    app.store.toggleAlgorithm("nsga2");
    app.store.toggleGraphRun("nsga2");
    await app.whenIdle();
    const payload = fixture<GraphPayload>("/api/analysis/generation-graph?runs=nsga2&k=9&size=igd");
    const node = root.querySelector(`g.graph-node[data-label="${payload.nodes[0].label}"]`)!;
    node.dispatchEvent(new Event("mouseenter"));
    const tooltip = root.querySelector("div.graph-tooltip") as HTMLElement;
    expect(tooltip.style.display).toBe("block");
    for (const neighbor of payload.nodes[0].neighbors) {
      expect(tooltip.textContent).toContain(neighbor);
    }
  });

  it("out-of-viewport exclamation appears when solutions exceed the reference box", async () => {
    const { app, root } = await startApp();
    app.store.toggleAlgorithm("nsga2");
    await app.whenIdle();
    // early DTLZ2 generations overshoot the reference bounding box
    const first = root.querySelector('svg.timeline-patch[data-gen="0"]')!;
    expect(first.querySelectorAll("text.viewport-flag")).toHaveLength(1);
  });

  it("solution tooltips expose the objectives' actual values", async () => {
    const { app, root } = await startApp();
    app.store.toggleAlgorithm("nsga2");
    app.store.selectGeneration("nsga2", 29);
    await app.whenIdle();
    const dot = root.querySelector("circle.solution-dot, path.solution-cross")!;
    dot.dispatchEvent(new Event("mouseenter"));
    const tooltip = root.querySelector("div.solution-tooltip") as HTMLElement;
    expect(tooltip.style.display).toBe("block");
    expect(tooltip.textContent).toMatch(/f = \(/);
  });
});

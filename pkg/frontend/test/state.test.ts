import { beforeEach, describe, expect, it } from "vitest";

import { PALETTE, Store } from "../src/state";

describe("selection store", () => {
  let store: Store;
  let warnings: string[];

  beforeEach(() => {
    warnings = [];
    store = new Store((msg) => warnings.push(msg));
  });

  it("assigns stable colors in activation order", () => {
    store.toggleAlgorithm("b");
    store.toggleAlgorithm("a");
    expect(store.colorOf("b")).toBe(PALETTE[0]);
    expect(store.colorOf("a")).toBe(PALETTE[1]);
    // colors stay put when an unrelated algorithm toggles off and on
    store.toggleAlgorithm("c");
    expect(store.colorOf("a")).toBe(PALETTE[1]);
  });

  it("colors are unique per activated algorithm within the palette", () => {
    for (let i = 0; i < PALETTE.length; i++) store.toggleAlgorithm(`alg${i}`);
    const colors = store.current.activated.map((r) => store.colorOf(r));
    expect(new Set(colors).size).toBe(PALETTE.length);
    expect(warnings).toHaveLength(0);
  });

  it("recycles with a warning past the tenth activation", () => {
    for (let i = 0; i <= PALETTE.length; i++) store.toggleAlgorithm(`alg${i}`);
    expect(warnings).toHaveLength(1);
    expect(store.colorOf(`alg${PALETTE.length}`)).toBe(PALETTE[0]);
  });

  it("deactivation clears dependent selections", () => {
    store.toggleAlgorithm("a");
    store.toggleGraphRun("a");
    store.selectGeneration("a", 5);
    store.toggleAlgorithm("a");
    expect(store.current.graphRuns).toEqual([]);
    expect(store.current.selectedGenerations).toEqual([]);
  });

  it("generation selection toggles", () => {
    store.selectGeneration("a", 5);
    store.selectGeneration("a", 7);
    store.selectGeneration("a", 5);
    expect(store.current.selectedGenerations).toEqual([{ run: "a", gen: 7 }]);
  });

  it("notifies every subscriber from a single state object", () => {
    const seen: unknown[] = [];
    store.subscribe((s) => seen.push(s));
    store.subscribe((s) => seen.push(s));
    store.toggleAlgorithm("x");
    expect(seen).toHaveLength(2);
    expect(seen[0]).toBe(seen[1]); // no divergent copies
  });

  it("graph params update without clobbering toggles", () => {
    store.setGraphParams({ visibleEdgeFraction: 0.4 });
    store.setGraphParams({ showCurves: false });
    expect(store.current.graphParams.visibleEdgeFraction).toBe(0.4);
    expect(store.current.graphParams.showCurves).toBe(false);
    expect(store.current.graphParams.showRings).toBe(true);
  });
});

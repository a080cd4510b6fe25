import { vi } from "vitest";

import fixtures from "./fixtures/api.json";

import { ApiClient } from "../src/api";
import { App } from "../src/main";

const PAYLOADS = fixtures as Record<string, unknown>;

/** fetch stub replaying the snapshotted API payloads by exact URL. */
export function installFixtureFetch(): string[] {
  const requested: string[] = [];
  vi.stubGlobal(
    "fetch",
    vi.fn(async (url: string) => {
      requested.push(url);
      const payload = PAYLOADS[url];
      if (payload === undefined) {
        return {
          ok: false,
          status: 404,
          json: async () => ({ code: "not_found", message: `no fixture for ${url}` }),
        } as Response;
      }
      return { ok: true, status: 200, json: async () => payload } as Response;
    }),
  );
  return requested;
}

export function fixture<T>(url: string): T {
  const payload = PAYLOADS[url];
  if (payload === undefined) throw new Error(`no fixture for ${url}`);
  return payload as T;
}

export async function startApp(): Promise<{ app: App; root: HTMLElement }> {
  const root = document.createElement("div");
  document.body.appendChild(root);
  const app = new App(root, new ApiClient());
  await app.start();
  return { app, root };
}

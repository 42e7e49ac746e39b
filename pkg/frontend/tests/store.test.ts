// Store invariants that need no live server: one mutating request in flight,
// API errors keep the last consistent view.

import { afterEach, expect, test, vi } from "vitest";

import { AnglerApi, StateView } from "../src/api.js";
import { GameClient } from "../src/session.js";

function emptyState(): StateView {
  return {
    day: 0,
    money: 0,
    kept_today: 0,
    limit: 10,
    inventory: [],
    pending: null,
    unread_mail: 0,
  };
}

function jsonResponse(status: number, doc: unknown): Response {
  return new Response(JSON.stringify(doc), {
    status,
    headers: { "Content-Type": "application/json" },
  });
}

afterEach(() => {
  vi.unstubAllGlobals();
});

test("a second mutating call while one is in flight is refused locally", async () => {
  let resolveCast: ((resp: Response) => void) | undefined;
  const castCalls: string[] = [];
  vi.stubGlobal("fetch", vi.fn(async (url: RequestInfo | URL) => {
    const path = String(url);
    if (path.endsWith("/api/sessions")) {
      return jsonResponse(201, { session_id: "s1", state: emptyState() });
    }
    castCalls.push(path);
    return new Promise<Response>((resolve) => {
      resolveCast = resolve;
    });
  }));

  const client = new GameClient(new AnglerApi("http://stub"));
  await client.newGame({ preset: "pond" });
  const first = client.cast();
  const second = await client.cast(); // busy: refused without a request
  expect(second).toBeNull();
  expect(castCalls).toHaveLength(1);

  resolveCast!(jsonResponse(200, { no_bite: true, catch: null }));
  expect(await first).toEqual({ no_bite: true, catch: null });
  expect(client.session!.busy).toBe(false);
});

test("an API error surfaces a message and leaves the cached view intact", async () => {
  const state = emptyState();
  vi.stubGlobal("fetch", vi.fn(async (url: RequestInfo | URL) => {
    const path = String(url);
    if (path.endsWith("/api/sessions")) {
      return jsonResponse(201, { session_id: "s1", state });
    }
    return jsonResponse(409, { error_code: "NO_PENDING", message: "no catch is awaiting a decision" });
  }));

  const client = new GameClient(new AnglerApi("http://stub"));
  await client.newGame({ preset: "pond" });
  const result = await client.decide("keep");
  expect(result).toBeNull();
  expect(client.lastError).toBe("no catch is awaiting a decision");
  expect(client.session!.state).toEqual(state);
  expect(client.session!.busy).toBe(false);
});

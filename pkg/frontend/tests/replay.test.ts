// Replay equivalence: a scripted headless playthrough through the client
// controller must produce exactly the server trajectory obtained by issuing
// the same request and decision sequence over raw fetch.

import { afterAll, beforeAll, expect, test } from "vitest";

import { AnglerApi } from "../src/api.js";
import { GameClient } from "../src/session.js";
import { startServer, TestServer } from "./server.js";

let server: TestServer;

beforeAll(async () => {
  server = await startServer();
}, 60_000);

afterAll(() => server?.stop());

const SEED = 424242;
const DAYS = 20;
const MAX_CASTS_PER_DAY = 25;
const KEEP_CUTOFF_INCHES = 28;

test("20-day headless playthrough equals a raw-API replay", { timeout: 120_000 }, async () => {
  // Trajectory A: the browser client's controller makes every move.
  const client = new GameClient(new AnglerApi(server.baseUrl));
  await client.newGame({ preset: "pond", seed: SEED, player_name: "Replay" });
  expect(client.session).not.toBeNull();

  const trajectoryA: unknown[] = [client.session!.state];
  const decisions: Array<Array<"keep" | "release">> = [];
  for (let day = 0; day < DAYS; day++) {
    const todays: Array<"keep" | "release"> = [];
    for (let cast = 0; cast < MAX_CASTS_PER_DAY; cast++) {
      const result = await client.cast();
      expect(result).not.toBeNull();
      trajectoryA.push(result);
      if (result!.no_bite) break;
      const hooked = result!.catch!;
      const state = client.session!.state;
      const action =
        hooked.length >= KEEP_CUTOFF_INCHES && state.kept_today < state.limit
          ? "keep"
          : "release";
      todays.push(action);
      trajectoryA.push(await client.decide(action));
    }
    decisions.push(todays);
    trajectoryA.push(await client.sell("all"));
    const letters = await client.endDay();
    trajectoryA.push({ state: client.session!.state, new_mail: letters });
  }

  // Trajectory B: identical seed and decision sequence, raw fetch only.
  const post = async (path: string, body?: unknown) => {
    const resp = await fetch(server.baseUrl + path, {
      method: "POST",
      headers: body === undefined ? undefined : { "Content-Type": "application/json" },
      body: body === undefined ? undefined : JSON.stringify(body),
    });
    expect(resp.ok).toBe(true);
    return resp.json();
  };

  const created = await post("/api/sessions", {
    preset: "pond",
    seed: SEED,
    player_name: "Replay",
  });
  const sid = created.session_id as string;
  const trajectoryB: unknown[] = [created.state];
  for (let day = 0; day < DAYS; day++) {
    const script = [...decisions[day]];
    for (let cast = 0; cast < MAX_CASTS_PER_DAY; cast++) {
      const result = await post(`/api/sessions/${sid}/cast`);
      trajectoryB.push(result);
      if (result.no_bite) break;
      const action = script.shift();
      expect(action).toBeDefined();
      const doc = await post(`/api/sessions/${sid}/decision`, { action });
      trajectoryB.push(doc.state);
    }
    expect(script).toHaveLength(0); // same bites, same decisions consumed
    const sold = await post(`/api/sessions/${sid}/sell`, { fish_ids: "all" });
    trajectoryB.push(sold.state);
    trajectoryB.push(await post(`/api/sessions/${sid}/end-day`));
  }

  expect(trajectoryB).toEqual(trajectoryA);
});

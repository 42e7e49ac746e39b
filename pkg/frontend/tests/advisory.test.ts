// Advisory surfacing: an Activated letter returned by end-day must appear in
// the client's mailbox verbatim, within the same response cycle.

import { afterAll, beforeAll, expect, test } from "vitest";

import { AnglerApi } from "../src/api.js";
import { GameClient } from "../src/session.js";
import { startServer, TestServer } from "./server.js";

let server: TestServer;

beforeAll(async () => {
  server = await startServer();
}, 60_000);

afterAll(() => server?.stop());

const LETTER =
  "Dear Maya, I was conducting a field study on Minnow the other day, " +
  "and I discovered that the population is in decline. To prevent a fishery " +
  "collapse, please release any large Minnow you catch until the population " +
  "is stable again. -Demetrius";

test("end-day letter lands in the mailbox verbatim", { timeout: 30_000 }, async () => {
  const client = new GameClient(new AnglerApi(server.baseUrl));
  // Advisory threshold pinned to the top of the range: the first morning
  // check finds the mean below it and the scientist writes in.
  await client.newGame({
    player_name: "Maya",
    seed: 7,
    specs: [
      {
        species_id: "minnow",
        name: "Minnow",
        base_price: 10,
        min_length: 10.0,
        max_length: 20.0,
        population_cap: 8,
        initial_count: 8,
        advisory_threshold: 20.0,
      },
    ],
  });
  expect(client.session).not.toBeNull();
  expect(client.session!.mail).toHaveLength(0);

  const letters = await client.endDay();
  expect(letters).toHaveLength(1);
  expect(client.session!.mail.map((l) => l.body)).toEqual([LETTER]);
  expect(client.session!.state.unread_mail).toBe(1);

  // Opening the mailbox re-fetches: still verbatim, badge clears.
  const opened = await client.openMail();
  expect(opened.map((l) => l.body)).toEqual([LETTER]);
  expect(client.session!.state.unread_mail).toBe(0);

  // No re-send while the population stays depressed.
  const next = await client.endDay();
  expect(next).toHaveLength(0);
  expect(client.session!.mail.map((l) => l.body)).toEqual([LETTER]);
});

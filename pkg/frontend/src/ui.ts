// DOM wiring. Every number on screen is copied from the last server
// response; buttons the cached state forbids are disabled, and server 409s
// surface as a status message without touching the displayed state.

import { Letter, StateView } from "./api.js";
import { GameClient } from "./session.js";

function el<T extends HTMLElement>(id: string): T {
  const node = document.getElementById(id);
  if (!node) throw new Error(`missing element #${id}`);
  return node as T;
}

function show(id: string, visible: boolean): void {
  el(id).classList.toggle("hidden", !visible);
}

export function wireUi(client: GameClient): void {
  const newGameForm = el<HTMLFormElement>("new-game-form");

  newGameForm.addEventListener("submit", async (event) => {
    event.preventDefault();
    const preset = el<HTMLSelectElement>("preset").value;
    const name = el<HTMLInputElement>("player-name").value || "Angler";
    const seedRaw = el<HTMLInputElement>("seed").value.trim();
    const researcher = el<HTMLInputElement>("researcher").checked;
    await client.newGame({
      preset,
      player_name: name,
      seed: seedRaw === "" ? undefined : Number(seedRaw),
      researcher_mode: researcher,
    });
    if (client.session && researcher) {
      startStatsPolling(client);
    }
  });

  el("cast-button").addEventListener("click", () => void client.cast());
  el("keep-button").addEventListener("click", () => void client.decide("keep"));
  el("release-button").addEventListener("click", () => void client.decide("release"));
  el("sell-all-button").addEventListener("click", () => void client.sell("all"));
  el("end-day-button").addEventListener("click", async () => {
    const letters = await client.endDay();
    if (letters && letters.length > 0) {
      showLetters(letters);
    }
  });
  el("mail-button").addEventListener("click", async () => {
    const letters = await client.openMail();
    showLetters(letters);
  });
  el("close-mail-button").addEventListener("click", () => show("mail-screen", false));

  client.onChange(() => render(client));
  render(client);
}

function render(client: GameClient): void {
  const session = client.session;
  show("new-game-screen", session === null);
  show("dock-screen", session !== null);
  el("status-line").textContent = client.lastError ?? "";
  if (!session) return;

  const state = session.state;
  el("money").textContent = String(state.money);
  el("day").textContent = String(state.day);
  el("kept").textContent = `${state.kept_today}/${state.limit}`;
  const badge = el("mail-badge");
  badge.textContent = String(state.unread_mail);
  badge.classList.toggle("hidden", state.unread_mail === 0);

  renderInventory(client, state);
  renderCatchModal(client, state);
  renderStats(client);

  const busyOrPending = session.busy || session.pending !== null;
  (el<HTMLButtonElement>("cast-button")).disabled = busyOrPending;
  (el<HTMLButtonElement>("end-day-button")).disabled = busyOrPending;
  (el<HTMLButtonElement>("sell-all-button")).disabled =
    session.busy || state.inventory.length === 0;
}

function renderInventory(client: GameClient, state: StateView): void {
  const list = el("inventory-list");
  list.replaceChildren();
  for (const item of state.inventory) {
    const row = document.createElement("li");
    const label = document.createElement("span");
    label.textContent = `${item.species}, ${item.length.toFixed(1)} in`;
    const price = document.createElement("span");
    price.className = "price";
    price.textContent = `${item.price}g`;
    const sellButton = document.createElement("button");
    sellButton.textContent = "Sell";
    sellButton.disabled = client.session!.busy;
    sellButton.addEventListener("click", () => void client.sell([item.id]));
    row.append(label, price, sellButton);
    list.append(row);
  }
  show("inventory-empty", state.inventory.length === 0);
}

function renderCatchModal(client: GameClient, state: StateView): void {
  const pending = client.session!.pending;
  show("catch-modal", pending !== null);
  if (!pending) return;
  el("catch-species").textContent = pending.species;
  el("catch-length").textContent = `${pending.length.toFixed(1)} in`;
  el("catch-price").textContent = `${pending.price}g`;
  el("catch-kept").textContent = `${state.kept_today}/${state.limit}`;
  show("catch-advisory", pending.advisory_active);
  // Keep is impossible at the limit; the server would answer LIMIT_REACHED.
  (el<HTMLButtonElement>("keep-button")).disabled =
    client.session!.busy || state.kept_today >= state.limit;
  (el<HTMLButtonElement>("release-button")).disabled = client.session!.busy;
}

function showLetters(letters: Letter[]): void {
  const list = el("mail-list");
  list.replaceChildren();
  for (const letter of letters) {
    const item = document.createElement("article");
    item.className = "letter";
    const heading = document.createElement("h3");
    heading.textContent = `Day ${letter.day}`;
    const body = document.createElement("p");
    body.textContent = letter.body; // verbatim, no markup
    item.append(heading, body);
    list.append(item);
  }
  show("mail-empty", letters.length === 0);
  show("mail-screen", true);
}

function renderStats(client: GameClient): void {
  const stats = client.session?.state.stats;
  show("stats-panel", stats !== undefined);
  if (!stats) return;
  const container = el("stats-rows");
  container.replaceChildren();
  for (const [sid, st] of Object.entries(stats)) {
    const row = document.createElement("div");
    row.className = "stats-row";
    const label = document.createElement("span");
    const mean = st.mean === null ? "extinct" : `${st.mean.toFixed(2)} in`;
    label.textContent = `${st.name}: ${st.count} fish, mean ${mean}` +
      (st.advisory_active ? " (advisory)" : "");
    row.append(label, sparkline(client.statsHistory[sid] ?? []));
    container.append(row);
  }
}

function sparkline(values: Array<number | null>): HTMLCanvasElement {
  const canvas = document.createElement("canvas");
  canvas.width = 120;
  canvas.height = 24;
  const points = values.filter((v): v is number => v !== null).slice(-60);
  const ctx = canvas.getContext("2d");
  if (!ctx || points.length < 2) return canvas;
  const min = Math.min(...points);
  const max = Math.max(...points);
  const span = max - min || 1;
  ctx.strokeStyle = "#2a6f97";
  ctx.beginPath();
  points.forEach((v, i) => {
    const x = (i / (points.length - 1)) * canvas.width;
    const y = canvas.height - ((v - min) / span) * (canvas.height - 2) - 1;
    if (i === 0) ctx.moveTo(x, y);
    else ctx.lineTo(x, y);
  });
  ctx.stroke();
  return canvas;
}

function startStatsPolling(client: GameClient): void {
  const tick = async () => {
    if (!client.session) return;
    await client.pollStats();
    window.setTimeout(tick, 2000);
  };
  void tick();
}

// Client-side session store and controller. The server is the source of
// truth: the store only ever holds the last StateView the server returned,
// and at most one mutating request is in flight at a time.

import {
  AnglerApi,
  ApiError,
  CastResult,
  CatchView,
  Letter,
  NewSessionOptions,
  SpeciesStatsView,
  StateView,
} from "./api.js";

export interface ClientSession {
  sessionId: string;
  state: StateView;
  pending: CatchView | null;
  mail: Letter[];
  busy: boolean;
}

export type ChangeListener = (client: GameClient) => void;

export class GameClient {
  session: ClientSession | null = null;
  lastError: string | null = null;
  statsHistory: Record<string, Array<number | null>> = {};
  private listeners: ChangeListener[] = [];

  constructor(private readonly api: AnglerApi) {}

  onChange(listener: ChangeListener): void {
    this.listeners.push(listener);
  }

  private notify(): void {
    for (const listener of this.listeners) listener(this);
  }

  private applyState(state: StateView): void {
    if (!this.session) return;
    this.session.state = state;
    this.session.pending = state.pending;
  }

  // Wraps a mutating call: refuses to overlap requests, surfaces API errors
  // as a message while keeping the last consistent view.
  private async mutate<T>(fn: () => Promise<T>): Promise<T | null> {
    if (!this.session) throw new Error("no active session");
    if (this.session.busy) return null;
    this.session.busy = true;
    this.lastError = null;
    this.notify();
    try {
      return await fn();
    } catch (err) {
      if (err instanceof ApiError) {
        this.lastError = err.message;
        return null;
      }
      throw err;
    } finally {
      if (this.session) this.session.busy = false;
      this.notify();
    }
  }

  async newGame(opts: NewSessionOptions): Promise<void> {
    this.lastError = null;
    try {
      const doc = await this.api.createSession(opts);
      this.session = {
        sessionId: doc.session_id,
        state: doc.state,
        pending: doc.state.pending,
        mail: [],
        busy: false,
      };
      this.statsHistory = {};
    } catch (err) {
      if (err instanceof ApiError) {
        this.lastError = err.message;
      } else {
        throw err;
      }
    }
    this.notify();
  }

  async cast(): Promise<CastResult | null> {
    return this.mutate(async () => {
      const result = await this.api.cast(this.session!.sessionId);
      if (!result.no_bite && result.catch) {
        this.session!.pending = result.catch;
      }
      return result;
    });
  }

  async decide(action: "keep" | "release"): Promise<StateView | null> {
    return this.mutate(async () => {
      const doc = await this.api.decide(this.session!.sessionId, action);
      this.applyState(doc.state);
      return doc.state;
    });
  }

  async sell(fishIds: number[] | "all"): Promise<StateView | null> {
    return this.mutate(async () => {
      const doc = await this.api.sell(this.session!.sessionId, fishIds);
      this.applyState(doc.state);
      return doc.state;
    });
  }

  async endDay(): Promise<Letter[] | null> {
    return this.mutate(async () => {
      const doc = await this.api.endDay(this.session!.sessionId);
      this.applyState(doc.state);
      // New letters land in the mailbox immediately with the response.
      this.session!.mail = this.session!.mail.concat(doc.new_mail);
      return doc.new_mail;
    });
  }

  async refresh(): Promise<void> {
    if (!this.session) return;
    const doc = await this.api.getState(this.session.sessionId);
    this.applyState(doc.state);
    this.notify();
  }

  async openMail(): Promise<Letter[]> {
    if (!this.session) return [];
    const doc = await this.api.getMail(this.session.sessionId);
    this.session.mail = doc.letters;
    await this.refresh(); // unread badge now reflects the read marks
    return doc.letters;
  }

  // Read-only researcher poll; may overlap mutating requests.
  async pollStats(): Promise<Record<string, SpeciesStatsView> | null> {
    if (!this.session) return null;
    try {
      const doc = await this.api.getStats(this.session.sessionId);
      for (const [sid, st] of Object.entries(doc.stats)) {
        (this.statsHistory[sid] ??= []).push(st.mean);
      }
      this.notify();
      return doc.stats;
    } catch (err) {
      if (err instanceof ApiError) return null;
      throw err;
    }
  }
}

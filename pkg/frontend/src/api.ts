// Typed client for the session service HTTP/JSON API. Every method returns
// the server's document verbatim; nothing is recomputed client-side.

export interface InventoryItem {
  id: number;
  species: string;
  length: number;
  price: number;
}

export interface CatchView {
  id: number;
  species: string;
  length: number;
  price: number;
  kept_today: number;
  limit: number;
  advisory_active: boolean;
}

export interface SpeciesStatsView {
  name: string;
  count: number;
  mean: number | null;
  sd: number | null;
  min: number | null;
  max: number | null;
  advisory_active: boolean;
}

export interface StateView {
  day: number;
  money: number;
  kept_today: number;
  limit: number;
  inventory: InventoryItem[];
  pending: CatchView | null;
  unread_mail: number;
  stats?: Record<string, SpeciesStatsView>;
}

export interface Letter {
  species_id: string;
  day: number;
  body: string;
  read?: boolean;
}

export interface CastResult {
  no_bite: boolean;
  catch: CatchView | null;
}

export interface NewSessionOptions {
  preset?: string;
  specs?: unknown[];
  seed?: number;
  player_name?: string;
  researcher_mode?: boolean;
}

export class ApiError extends Error {
  constructor(
    public readonly status: number,
    public readonly errorCode: string,
    message: string,
  ) {
    super(message);
    this.name = "ApiError";
  }
}

export class AnglerApi {
  constructor(private readonly baseUrl: string = "") {}

  private async request<T>(method: string, path: string, body?: unknown): Promise<T> {
    const resp = await fetch(this.baseUrl + path, {
      method,
      headers: body === undefined ? undefined : { "Content-Type": "application/json" },
      body: body === undefined ? undefined : JSON.stringify(body),
    });
    const doc = await resp.json();
    if (!resp.ok) {
      throw new ApiError(resp.status, doc.error_code ?? "UNKNOWN", doc.message ?? "request failed");
    }
    return doc as T;
  }

  createSession(opts: NewSessionOptions): Promise<{ session_id: string; state: StateView }> {
    return this.request("POST", "/api/sessions", opts);
  }

  cast(sessionId: string): Promise<CastResult> {
    return this.request("POST", `/api/sessions/${sessionId}/cast`);
  }

  decide(sessionId: string, action: "keep" | "release"): Promise<{ state: StateView }> {
    return this.request("POST", `/api/sessions/${sessionId}/decision`, { action });
  }

  sell(sessionId: string, fishIds: number[] | "all"): Promise<{ state: StateView }> {
    return this.request("POST", `/api/sessions/${sessionId}/sell`, { fish_ids: fishIds });
  }

  endDay(sessionId: string): Promise<{ state: StateView; new_mail: Letter[] }> {
    return this.request("POST", `/api/sessions/${sessionId}/end-day`);
  }

  getState(sessionId: string): Promise<{ state: StateView }> {
    return this.request("GET", `/api/sessions/${sessionId}`);
  }

  getMail(sessionId: string): Promise<{ letters: Letter[] }> {
    return this.request("GET", `/api/sessions/${sessionId}/mail`);
  }

  getStats(sessionId: string): Promise<{ stats: Record<string, SpeciesStatsView> }> {
    return this.request("GET", `/api/sessions/${sessionId}/stats`);
  }
}

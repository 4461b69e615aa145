// Typed client for the session service. All requests are serialized by the
// game loop; moves carry a sequence number so a network retry re-sends the
// same move instead of issuing a new one.

export type Dir = "up" | "right" | "down" | "left";

export interface ViewWindow {
  center: [number, number];
  cells: string[]; // five 5-char strings: # . S G ~
  maze_index: number;
  reached_goal: boolean;
}

export interface MoveResult {
  pos: [number, number];
  blocked: boolean;
  reached_goal: boolean;
}

export interface SessionStats {
  solve_times: number[];
  sma_increase_rate: number[];
  maze_index: number;
  updates_applied: number;
  fallback_levels: number[];
  complete: boolean;
  set_size: number;
  update_enabled: boolean;
}

export type ResultResponse =
  | { status: "next"; maze_index: number }
  | { status: "set_complete"; stats: SessionStats };

export interface CreateOptions {
  n?: number;
  update_enabled?: boolean;
  set_size?: number;
  seed?: number;
  sweeps?: number;
  reads?: number;
}

export class ApiError extends Error {
  constructor(public status: number, message: string) {
    super(message);
  }
}

export class SessionApi {
  private moveSeq = 0;

  constructor(
    private baseUrl: string = "",
    private fetchFn: typeof fetch = globalThis.fetch.bind(globalThis),
    private retryDelayMs = 250,
    private maxRetries = 3,
  ) {}

  private async request<T>(path: string, init?: RequestInit, retries = 0): Promise<T> {
    let resp: Response;
    try {
      resp = await this.fetchFn(this.baseUrl + path, init);
    } catch (err) {
      // Network failure: replay the identical request (same body, same
      // sequence number for moves) a bounded number of times.
      if (retries < this.maxRetries) {
        await new Promise((r) => setTimeout(r, this.retryDelayMs));
        return this.request<T>(path, init, retries + 1);
      }
      throw err;
    }
    if (!resp.ok) {
      const body = await resp.text();
      throw new ApiError(resp.status, body);
    }
    return (await resp.json()) as T;
  }

  private post<T>(path: string, body: unknown): Promise<T> {
    return this.request<T>(path, {
      method: "POST",
      headers: { "content-type": "application/json" },
      body: JSON.stringify(body),
    });
  }

  createSession(opts: CreateOptions): Promise<{ id: string; set_size: number }> {
    return this.post("/sessions", opts);
  }

  getView(id: string): Promise<ViewWindow> {
    return this.request(`/sessions/${id}/view`);
  }

  move(id: string, dir: Dir): Promise<MoveResult> {
    this.moveSeq += 1;
    return this.post(`/sessions/${id}/move`, { dir, seq: this.moveSeq });
  }

  submitResult(id: string, solveTimeS: number): Promise<ResultResponse> {
    return this.post(`/sessions/${id}/result`, { solve_time_s: solveTimeS });
  }

  getStats(id: string): Promise<SessionStats> {
    return this.request(`/sessions/${id}/stats`);
  }
}

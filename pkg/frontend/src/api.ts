/** Thin typed client for the /v1 HTTP JSON API. */

import type {
  CueCatalog,
  ObservationDelta,
  SessionDocument,
  Snapshot,
} from "./types.js";

export class ApiError extends Error {
  constructor(
    public status: number,
    public code: string,
    message: string
  ) {
    super(message);
  }
}

async function parseError(resp: Response): Promise<ApiError> {
  try {
    const body = await resp.json();
    return new ApiError(resp.status, body.code ?? "error", body.message ?? "");
  } catch {
    return new ApiError(resp.status, "error", resp.statusText);
  }
}

export class ApiClient {
  constructor(public baseUrl: string) {}

  private async request<T>(path: string, init?: RequestInit): Promise<T> {
    const resp = await fetch(`${this.baseUrl}${path}`, init);
    if (!resp.ok) throw await parseError(resp);
    return (await resp.json()) as T;
  }

  listCues(): Promise<CueCatalog> {
    return this.request("/v1/cues");
  }

  createSession(): Promise<{ session_id: string; framework_hash: string }> {
    return this.request("/v1/sessions", { method: "POST" });
  }

  addObservation(sessionId: string, delta: ObservationDelta): Promise<Snapshot> {
    return this.request(`/v1/sessions/${sessionId}/observations`, {
      method: "POST",
      headers: { "Content-Type": "application/json" },
      body: JSON.stringify(delta),
    });
  }

  getSession(sessionId: string): Promise<SessionDocument> {
    return this.request(`/v1/sessions/${sessionId}`);
  }
}

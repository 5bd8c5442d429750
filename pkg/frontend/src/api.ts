import {
  isErrorBody,
  type CreateSessionResponse,
  type MoveResponse,
  type SessionSnapshot,
} from "./wire.js";

export class ApiError extends Error {
  readonly status: number;
  readonly code: string;
  readonly detail: unknown;

  constructor(status: number, code: string, message: string, detail: unknown = null) {
    super(message);
    this.name = "ApiError";
    this.status = status;
    this.code = code;
    this.detail = detail;
  }
}

/** The slice of the service the UI calls; tests substitute stubs. */
export interface AdviceServiceApi {
  listFixtures(): Promise<string[]>;
  createSession(body: {
    fixture?: string;
    document?: string;
    cap?: number;
  }): Promise<CreateSessionResponse>;
  getState(sessionId: string): Promise<SessionSnapshot>;
  getGraph(sessionId: string): Promise<string>;
  postMove(sessionId: string, input: string): Promise<MoveResponse>;
  autoStep(sessionId: string): Promise<MoveResponse>;
  reset(sessionId: string): Promise<{ session: SessionSnapshot }>;
}

export class ServiceClient implements AdviceServiceApi {
  constructor(readonly base: string) {}

  private async request(path: string, init?: RequestInit): Promise<Response> {
    const response = await fetch(this.base + path, init);
    if (response.ok) return response;
    let body: unknown = null;
    try {
      body = await response.json();
    } catch {
      // leave body null; the status alone still makes a usable error
    }
    if (isErrorBody(body)) {
      throw new ApiError(response.status, body.code, body.message, body.detail);
    }
    throw new ApiError(response.status, "http_error", `request failed: ${response.status}`);
  }

  private async getJson<T>(path: string): Promise<T> {
    const response = await this.request(path);
    return (await response.json()) as T;
  }

  private async postJson<T>(path: string, body?: unknown): Promise<T> {
    const response = await this.request(path, {
      method: "POST",
      headers: { "Content-Type": "application/json" },
      body: body === undefined ? undefined : JSON.stringify(body),
    });
    return (await response.json()) as T;
  }

  async listFixtures(): Promise<string[]> {
    const body = await this.getJson<{ fixtures: string[] }>("/fixtures");
    return body.fixtures;
  }

  createSession(body: {
    fixture?: string;
    document?: string;
    cap?: number;
  }): Promise<CreateSessionResponse> {
    return this.postJson<CreateSessionResponse>("/sessions", body);
  }

  getState(sessionId: string): Promise<SessionSnapshot> {
    return this.getJson<SessionSnapshot>(`/sessions/${sessionId}`);
  }

  async getGraph(sessionId: string): Promise<string> {
    const response = await this.request(`/sessions/${sessionId}/graph`);
    return response.text();
  }

  postMove(sessionId: string, input: string): Promise<MoveResponse> {
    return this.postJson<MoveResponse>(`/sessions/${sessionId}/moves`, { input });
  }

  autoStep(sessionId: string): Promise<MoveResponse> {
    return this.postJson<MoveResponse>(`/sessions/${sessionId}/auto-step`);
  }

  reset(sessionId: string): Promise<{ session: SessionSnapshot }> {
    return this.postJson<{ session: SessionSnapshot }>(`/sessions/${sessionId}/reset`);
  }
}

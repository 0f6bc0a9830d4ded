/** Typed client for the control API. */

import { Gate, ResolveResult, RunView } from "./types.js";

export interface ResolvePayload {
  decision: "approved" | "rejected";
  operator: string;
  note?: string;
  /** expected gate version for optimistic locking */
  version?: number;
  continue?: boolean;
}

export class ApiClient {
  constructor(
    private readonly baseUrl: string,
    private readonly fetchFn: typeof fetch = fetch,
  ) {}

  private url(path: string): string {
    return `${this.baseUrl}${path}`;
  }

  private async getJson<T>(path: string): Promise<T> {
    const response = await this.fetchFn(this.url(path));
    if (!response.ok) {
      throw new Error(`GET ${path} failed: ${response.status}`);
    }
    return (await response.json()) as T;
  }

  listRuns(): Promise<RunView[]> {
    return this.getJson("/runs");
  }

  getRun(runId: string): Promise<RunView> {
    return this.getJson(`/runs/${encodeURIComponent(runId)}`);
  }

  listGates(runId: string): Promise<Gate[]> {
    return this.getJson(`/runs/${encodeURIComponent(runId)}/gates`);
  }

  usage(runId: string): Promise<Record<string, unknown>> {
    return this.getJson(`/runs/${encodeURIComponent(runId)}/usage`);
  }

  trace(runId: string): Promise<Record<string, unknown>> {
    return this.getJson(`/runs/${encodeURIComponent(runId)}/trace`);
  }

  /**
   * Resolve a gate. Conflicts (already decided, version mismatch) come
   * back as a value rather than an exception so the UI can render them.
   */
  async resolveGate(
    runId: string,
    gateId: string,
    payload: ResolvePayload,
  ): Promise<ResolveResult> {
    const response = await this.fetchFn(
      this.url(
        `/runs/${encodeURIComponent(runId)}/gates/` +
          `${encodeURIComponent(gateId)}/resolve`,
      ),
      {
        method: "POST",
        headers: { "content-type": "application/json" },
        body: JSON.stringify(payload),
      },
    );
    const body = (await response.json()) as Record<string, unknown>;
    if (response.ok) {
      return { ok: true, gate: body["gate"] as Gate, run: body["run"] as RunView };
    }
    return {
      ok: false,
      status: response.status,
      message: String(body["detail"] ?? response.statusText),
    };
  }
}

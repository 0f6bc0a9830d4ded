/** Console state for one run.
 *
 * The store is the single source of truth the view renders from. It is
 * fed by the event stream (exactly-once, in order — enforced here as
 * well as in the follower) and by API responses; gate decisions go
 * through it so version conflicts surface as state, not exceptions.
 */

import { ApiClient } from "./api.js";
import {
  Gate,
  RunEvent,
  RunView,
  StageTransition,
} from "./types.js";

export class ConsoleStore {
  run: RunView | null = null;
  gates: Gate[] = [];
  events: RunEvent[] = [];
  transitions: StageTransition[] = [];
  conflict: string | null = null;
  lastSeq = -1;
  private listeners: Array<() => void> = [];

  constructor(
    private readonly api: ApiClient,
    readonly runId: string,
  ) {}

  subscribe(listener: () => void): () => void {
    this.listeners.push(listener);
    return () => {
      this.listeners = this.listeners.filter((l) => l !== listener);
    };
  }

  private notify(): void {
    for (const listener of this.listeners) listener();
  }

  async refresh(): Promise<void> {
    const [run, gates] = await Promise.all([
      this.api.getRun(this.runId),
      this.api.listGates(this.runId),
    ]);
    this.run = run;
    this.gates = gates;
    this.notify();
  }

  /**
   * Apply one stream event. Duplicates and out-of-order arrivals are
   * rejected outright: the transition log must stay strictly ordered.
   */
  applyEvent(event: RunEvent): void {
    if (event.seq <= this.lastSeq) return; // duplicate from a replay
    this.lastSeq = event.seq;
    this.events.push(event);
    if (event.type === "stage_completed") {
      this.transitions.push({
        seq: event.seq,
        completed: String(event.data["completed"]),
        next: String(event.data["next"]),
        decision: (event.data["decision"] as string | null) ?? null,
      });
      if (this.run !== null) this.run.stage = String(event.data["next"]);
    }
    if (event.type === "run_halted" && this.run !== null) {
      this.run.stage = "halted";
    }
    if (event.type === "gate_opened" || event.type === "gate_decided") {
      // gate lists are cheap; re-sync lazily on next refresh
    }
    this.notify();
  }

  /**
   * Decide a gate with optimistic version locking. On success the run
   * view from the response is applied immediately — the console shows
   * the advanced run without waiting for the next stream poll. On a
   * conflict (409: already decided, or the gate changed under us) the
   * conflict message becomes state and the gate list is re-synced.
   */
  async decideGate(
    gate: Gate,
    decision: "approved" | "rejected",
    operator: string,
    note = "",
  ): Promise<boolean> {
    this.conflict = null;
    const result = await this.api.resolveGate(this.runId, gate.gate_id, {
      decision,
      operator,
      note,
      version: gate.version,
    });
    if (result.ok) {
      this.run = result.run;
      this.gates = this.gates.map((g) =>
        g.gate_id === result.gate.gate_id ? result.gate : g,
      );
      this.notify();
      return true;
    }
    this.conflict = `gate ${gate.gate_id}: ${result.message} (${result.status})`;
    await this.refresh().catch(() => undefined);
    this.notify();
    return false;
  }
}

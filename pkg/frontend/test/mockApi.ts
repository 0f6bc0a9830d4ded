/** In-memory mock of the control API for console tests.
 *
 * Mirrors the server semantics the console depends on: run views,
 * gate resolution with optimistic version locking (409 on conflicts),
 * and the SSE event stream with `?after=` replay. Connections can be
 * told to drop after N frames to exercise reconnect behaviour.
 */

import { createServer, IncomingMessage, Server, ServerResponse } from "node:http";
import { AddressInfo } from "node:net";
import { Gate, RunEvent, RunView } from "../src/types.js";

const STAGES = [
  "ideation",
  "methodology",
  "deployment",
  "collection_wait",
  "analysis",
  "re_evaluation",
  "visuals",
  "manuscript",
  "review",
  "document",
  "complete",
];

export class MockRun {
  readonly runId = "run-0001";
  stage = "deployment";
  events: RunEvent[] = [];
  gates: Gate[] = [];

  constructor() {
    // the run has already walked to deployment and parked on its gate
    for (const [i, stage] of ["ideation", "methodology"].entries()) {
      this.emit("stage_completed", {
        completed: stage,
        next: STAGES[STAGES.indexOf(stage) + 1],
        decision: null,
      });
      void i;
    }
    this.gates.push({
      gate_id: "gate-0001",
      kind: "study_launch",
      status: "open",
      decided_by: null,
      note: "",
      version: 0,
    });
    this.emit("gate_opened", { ...this.gates[0] });
    this.emit("waiting_gate", { gates: [{ ...this.gates[0] }] });
  }

  emit(type: string, data: Record<string, unknown>): RunEvent {
    const event: RunEvent = {
      seq: this.events.length,
      type,
      stage: this.stage,
      data,
    };
    this.events.push(event);
    return event;
  }

  view(): RunView {
    return {
      run_id: this.runId,
      mode: "autonomous",
      stage: this.stage,
      status: this.stage === "complete" ? "complete" : "waiting_gate",
      open_gates: this.gates.filter((g) => g.status === "open"),
      logical_clock: this.events.length,
      budgets: {
        max_tokens: 1000000,
        spent_tokens: 4321,
        max_cost: 100,
        spent_cost: 0.05,
        max_wall_clock_s: 3600,
        spent_wall_clock_s: 12,
      },
    };
  }

  /** Finish the run: emit the remaining stage transitions. */
  advanceToComplete(): void {
    let index = STAGES.indexOf(this.stage);
    while (this.stage !== "complete") {
      const completed = STAGES[index]!;
      const next = STAGES[index + 1]!;
      this.stage = next;
      this.emit("stage_completed", { completed, next, decision: null });
      index += 1;
    }
  }

  resolveGate(
    gateId: string,
    payload: Record<string, unknown>,
  ): { status: number; body: unknown } {
    const gate = this.gates.find((g) => g.gate_id === gateId);
    if (!gate) return { status: 404, body: { detail: `no gate ${gateId}` } };
    const decision = payload["decision"];
    if (decision !== "approved" && decision !== "rejected") {
      return { status: 422, body: { detail: "decision must be approved or rejected" } };
    }
    if (gate.status !== "open") {
      return {
        status: 409,
        body: { detail: `gate ${gateId} already ${gate.status}` },
      };
    }
    const expected = payload["version"];
    if (expected !== undefined && expected !== null && expected !== gate.version) {
      return {
        status: 409,
        body: {
          detail: `gate ${gateId} is at version ${gate.version}, expected ${expected}`,
        },
      };
    }
    gate.status = decision;
    gate.decided_by = String(payload["operator"] ?? "operator");
    gate.version += 1;
    this.emit("gate_decided", {
      gate_id: gateId,
      decision,
      operator: gate.decided_by,
    });
    if (decision === "approved" && payload["continue"] !== false) {
      this.advanceToComplete();
    } else if (decision === "rejected") {
      this.stage = "halted";
      this.emit("run_halted", { stage: "deployment", reason: "gate rejected" });
    }
    return { status: 200, body: { gate: { ...gate }, run: this.view() } };
  }
}

export interface MockApiOptions {
  /** close each SSE connection after this many frames (simulated drop) */
  dropStreamAfter?: number;
  /** end a quiet stream after this long, like the real API (ms) */
  idleTimeoutMs?: number;
}

export class MockApi {
  readonly run = new MockRun();
  private server: Server;
  baseUrl = "";
  streamConnections = 0;

  constructor(private readonly options: MockApiOptions = {}) {
    this.server = createServer((req, res) => this.handle(req, res));
  }

  async start(): Promise<void> {
    await new Promise<void>((resolve) =>
      this.server.listen(0, "127.0.0.1", resolve),
    );
    const address = this.server.address() as AddressInfo;
    this.baseUrl = `http://127.0.0.1:${address.port}`;
  }

  async stop(): Promise<void> {
    await new Promise<void>((resolve, reject) =>
      this.server.close((err) => (err ? reject(err) : resolve())),
    );
  }

  private async handle(req: IncomingMessage, res: ServerResponse): Promise<void> {
    const url = new URL(req.url ?? "/", this.baseUrl);
    const parts = url.pathname.split("/").filter(Boolean);
    const json = (status: number, body: unknown) => {
      res.writeHead(status, { "content-type": "application/json" });
      res.end(JSON.stringify(body));
    };

    if (parts[0] !== "runs") return json(404, { detail: "not found" });
    if (parts.length === 1) return json(200, [this.run.view()]);
    if (parts[1] !== this.run.runId) {
      return json(404, { detail: `no run ${parts[1]}` });
    }
    if (parts.length === 2) return json(200, this.run.view());
    if (parts[2] === "gates" && parts.length === 3) {
      return json(200, this.run.gates);
    }
    if (parts[2] === "gates" && parts[4] === "resolve" && req.method === "POST") {
      const payload = await readBody(req);
      const { status, body } = this.run.resolveGate(parts[3]!, payload);
      return json(status, body);
    }
    if (parts[2] === "events") {
      return this.streamEvents(url, res);
    }
    return json(404, { detail: "not found" });
  }

  private streamEvents(url: URL, res: ServerResponse): void {
    this.streamConnections += 1;
    const after = Number(url.searchParams.get("after") ?? "-1");
    res.writeHead(200, { "content-type": "text/event-stream" });
    const limit = this.options.dropStreamAfter ?? Infinity;
    const idleTimeoutMs = this.options.idleTimeoutMs ?? 500;
    let sent = 0;
    let cursor = after;
    let idleSince = Date.now();

    const pump = () => {
      const pending = this.run.events.filter((e) => e.seq > cursor);
      for (const event of pending) {
        cursor = event.seq;
        sent += 1;
        idleSince = Date.now();
        const frame =
          `id: ${event.seq}\nevent: ${event.type}\n` +
          `data: ${JSON.stringify(event)}\n\n`;
        if (sent >= limit) {
          // simulated mid-stream disconnect: let the frame flush to
          // the kernel first, then kill the socket without closing
          // the response cleanly
          res.write(frame, () => res.destroy());
          return;
        }
        res.write(frame);
      }
      const terminal = this.run.stage === "complete" || this.run.stage === "halted";
      if (terminal && pending.length === 0) {
        res.end();
        return;
      }
      if (Date.now() - idleSince > idleTimeoutMs) {
        res.end();
        return;
      }
      setTimeout(pump, 5);
    };
    pump();
  }
}

function readBody(req: IncomingMessage): Promise<Record<string, unknown>> {
  return new Promise((resolve, reject) => {
    const chunks: Buffer[] = [];
    req.on("data", (chunk: Buffer) => chunks.push(chunk));
    req.on("end", () => {
      try {
        resolve(JSON.parse(Buffer.concat(chunks).toString() || "{}"));
      } catch (err) {
        reject(err);
      }
    });
    req.on("error", reject);
  });
}

/** Wire types mirrored from the control API. */

export interface Gate {
  gate_id: string;
  kind: string;
  status: "open" | "approved" | "rejected";
  decided_by: string | null;
  note: string;
  version: number;
}

export interface Budgets {
  max_tokens: number;
  spent_tokens: number;
  max_cost: number;
  spent_cost: number;
  max_wall_clock_s: number;
  spent_wall_clock_s: number;
  [key: string]: number;
}

export interface RunView {
  run_id: string;
  mode: string;
  stage: string;
  status: string | null;
  open_gates: Gate[];
  logical_clock: number;
  budgets: Budgets;
}

export interface RunEvent {
  seq: number;
  type: string;
  stage: string;
  data: Record<string, unknown>;
}

export interface StageTransition {
  seq: number;
  completed: string;
  next: string;
  decision: string | null;
}

export type ResolveResult =
  | { ok: true; gate: Gate; run: RunView }
  | { ok: false; status: number; message: string };

export function isTerminalEvent(event: RunEvent): boolean {
  if (event.type === "run_halted") return true;
  return (
    event.type === "stage_completed" &&
    (event.data["next"] === "complete" || event.data["next"] === "halted")
  );
}

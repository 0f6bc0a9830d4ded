/** Pure HTML rendering of console state; no DOM access, so it is
 * directly testable and the browser entry point just assigns the
 * result to a container. */

import { ConsoleStore } from "./store.js";
import { Gate, StageTransition } from "./types.js";

function esc(text: string): string {
  return text
    .replace(/&/g, "&amp;")
    .replace(/</g, "&lt;")
    .replace(/>/g, "&gt;")
    .replace(/"/g, "&quot;");
}

function gateRow(gate: Gate): string {
  const actions =
    gate.status === "open"
      ? `<button data-gate="${esc(gate.gate_id)}" data-decision="approved"` +
        ` data-version="${gate.version}">approve</button>` +
        `<button data-gate="${esc(gate.gate_id)}" data-decision="rejected"` +
        ` data-version="${gate.version}">reject</button>`
      : `<span class="decided">${esc(gate.status)} by ${esc(
          gate.decided_by ?? "?",
        )}</span>`;
  return (
    `<li class="gate gate-${esc(gate.status)}">` +
    `<code>${esc(gate.gate_id)}</code> ${esc(gate.kind)} ` +
    `<em>v${gate.version}</em> ${actions}</li>`
  );
}

function transitionRow(t: StageTransition): string {
  const decision = t.decision ? ` (${esc(t.decision)})` : "";
  return (
    `<li data-seq="${t.seq}">#${t.seq} ${esc(t.completed)} → ` +
    `${esc(t.next)}${decision}</li>`
  );
}

export function render(store: ConsoleStore): string {
  const run = store.run;
  if (run === null) {
    return `<main class="console"><p class="loading">loading run…</p></main>`;
  }
  const conflict = store.conflict
    ? `<div class="conflict" role="alert">conflict: ${esc(store.conflict)}</div>`
    : "";
  const budgets = run.budgets;
  return `<main class="console">
  <header>
    <h1>${esc(run.run_id)}</h1>
    <span class="stage stage-${esc(run.stage)}">${esc(run.stage)}</span>
    <span class="mode">${esc(run.mode)}</span>
  </header>
  ${conflict}
  <section class="budgets">
    tokens ${budgets.spent_tokens}/${budgets.max_tokens} ·
    cost ${budgets.spent_cost.toFixed(4)}/${budgets.max_cost}
  </section>
  <section class="gates">
    <h2>Gates</h2>
    <ul>${store.gates.map(gateRow).join("")}</ul>
  </section>
  <section class="transitions">
    <h2>Transitions</h2>
    <ol>${store.transitions.map(transitionRow).join("")}</ol>
  </section>
</main>`;
}

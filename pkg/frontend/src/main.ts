/** Browser entry point: wire the store, the event follower, and the
 * click handlers to a #console container. The page is served next to
 * the control API, so relative URLs work without configuration. */

import { ApiClient } from "./api.js";
import { followEvents } from "./sse.js";
import { ConsoleStore } from "./store.js";
import { render } from "./view.js";

function container(): HTMLElement {
  const el = document.getElementById("console");
  if (el === null) throw new Error("missing #console container");
  return el;
}

export async function mount(baseUrl: string, runId: string): Promise<void> {
  const api = new ApiClient(baseUrl);
  const store = new ConsoleStore(api, runId);
  const root = container();

  store.subscribe(() => {
    root.innerHTML = render(store);
  });

  root.addEventListener("click", (event) => {
    const target = event.target as HTMLElement;
    const gateId = target.dataset["gate"];
    const decision = target.dataset["decision"];
    if (!gateId || (decision !== "approved" && decision !== "rejected")) {
      return;
    }
    const gate = store.gates.find((g) => g.gate_id === gateId);
    if (gate) void store.decideGate(gate, decision, "console-operator");
  });

  await store.refresh();
  for await (const event of followEvents(baseUrl, runId, { maxRetries: 20 })) {
    store.applyEvent(event);
    if (event.type === "gate_opened" || event.type === "gate_decided") {
      await store.refresh().catch(() => undefined);
    }
  }
}

declare global {
  interface Window {
    researchflowConsole?: { mount: typeof mount };
  }
}

if (typeof window !== "undefined") {
  window.researchflowConsole = { mount };
}

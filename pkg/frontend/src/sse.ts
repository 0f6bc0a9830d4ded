/** Server-sent-event parsing and a reconnecting event follower.
 *
 * The control API streams run events as SSE frames carrying the full
 * event JSON in the data field and the sequence number in the id field.
 * The follower resumes from the last seen sequence number after a
 * dropped connection, so consumers observe each event exactly once and
 * in order no matter how often the transport fails.
 */

import { RunEvent, isTerminalEvent } from "./types.js";

export interface SSEFrame {
  id: string | null;
  event: string | null;
  data: string;
}

/** Incremental SSE frame parser; feed it chunks, it yields frames. */
export class SSEParser {
  private buffer = "";

  push(chunk: string): SSEFrame[] {
    this.buffer += chunk;
    const frames: SSEFrame[] = [];
    let boundary: number;
    while ((boundary = this.buffer.indexOf("\n\n")) >= 0) {
      const raw = this.buffer.slice(0, boundary);
      this.buffer = this.buffer.slice(boundary + 2);
      const frame = parseFrame(raw);
      if (frame !== null) frames.push(frame);
    }
    return frames;
  }
}

function parseFrame(raw: string): SSEFrame | null {
  let id: string | null = null;
  let event: string | null = null;
  const data: string[] = [];
  for (const line of raw.split("\n")) {
    if (line.startsWith("id:")) id = line.slice(3).trim();
    else if (line.startsWith("event:")) event = line.slice(6).trim();
    else if (line.startsWith("data:")) data.push(line.slice(5).trim());
    // comment lines (":" prefix) and blanks are ignored per the SSE spec
  }
  if (id === null && event === null && data.length === 0) return null;
  return { id, event, data: data.join("\n") };
}

/** Read one SSE response body and yield run events. */
export async function* readEventStream(
  body: ReadableStream<Uint8Array>,
): AsyncGenerator<RunEvent> {
  const parser = new SSEParser();
  const decoder = new TextDecoder();
  const reader = body.getReader();
  try {
    for (;;) {
      const { done, value } = await reader.read();
      if (done) return;
      for (const frame of parser.push(decoder.decode(value, { stream: true }))) {
        if (frame.data) yield JSON.parse(frame.data) as RunEvent;
      }
    }
  } finally {
    reader.releaseLock();
  }
}

export interface FollowOptions {
  /** resume strictly after this sequence number */
  after?: number;
  /** reconnect attempts while the run is not terminal */
  maxRetries?: number;
  /** base backoff delay, doubled per consecutive failure */
  retryDelayMs?: number;
  fetchFn?: typeof fetch;
}

const sleep = (ms: number) => new Promise((r) => setTimeout(r, ms));

/**
 * Follow a run's event stream across disconnects.
 *
 * Events are yielded exactly once, in sequence order; duplicates the
 * server replays after a reconnect are dropped. Ends when a terminal
 * event has been seen, or after maxRetries consecutive dead connections.
 */
export async function* followEvents(
  baseUrl: string,
  runId: string,
  options: FollowOptions = {},
): AsyncGenerator<RunEvent> {
  const fetchFn = options.fetchFn ?? fetch;
  const maxRetries = options.maxRetries ?? 5;
  const retryDelayMs = options.retryDelayMs ?? 250;
  let cursor = options.after ?? -1;
  let failures = 0;
  let terminal = false;

  while (!terminal && failures <= maxRetries) {
    let yieldedThisConnection = false;
    try {
      const response = await fetchFn(
        `${baseUrl}/runs/${encodeURIComponent(runId)}/events?after=${cursor}`,
      );
      if (!response.ok || response.body === null) {
        throw new Error(`event stream unavailable: ${response.status}`);
      }
      for await (const event of readEventStream(response.body)) {
        if (event.seq <= cursor) continue; // replayed duplicate
        cursor = event.seq;
        yieldedThisConnection = true;
        if (isTerminalEvent(event)) terminal = true;
        yield event;
      }
    } catch {
      // fall through to the retry accounting below
    }
    if (terminal) return;
    failures = yieldedThisConnection ? 0 : failures + 1;
    if (failures > maxRetries) return;
    await sleep(retryDelayMs * 2 ** Math.max(0, failures - 1));
  }
}

import { describe, expect, it } from "vitest";
import { SSEParser } from "../src/sse.js";
import { isTerminalEvent } from "../src/types.js";

describe("SSE frame parser", () => {
  it("parses a complete frame", () => {
    const parser = new SSEParser();
    const frames = parser.push(
      'id: 3\nevent: stage_completed\ndata: {"seq": 3}\n\n',
    );
    expect(frames).toEqual([
      { id: "3", event: "stage_completed", data: '{"seq": 3}' },
    ]);
  });

  it("reassembles frames split across arbitrary chunk boundaries", () => {
    const wire =
      'id: 0\nevent: a\ndata: {"seq": 0}\n\n' +
      'id: 1\nevent: b\ndata: {"seq": 1}\n\n';
    for (const cut of [1, 5, 12, wire.length - 3]) {
      const parser = new SSEParser();
      const frames = [
        ...parser.push(wire.slice(0, cut)),
        ...parser.push(wire.slice(cut)),
      ];
      expect(frames.map((f) => f.id)).toEqual(["0", "1"]);
    }
  });

  it("holds incomplete trailing frames until terminated", () => {
    const parser = new SSEParser();
    expect(parser.push("id: 9\ndata: {}")).toEqual([]);
    expect(parser.push("\n\n")).toHaveLength(1);
  });
});

describe("terminal event detection", () => {
  it("treats completion and halts as terminal", () => {
    expect(
      isTerminalEvent({
        seq: 1,
        type: "stage_completed",
        stage: "complete",
        data: { completed: "document", next: "complete" },
      }),
    ).toBe(true);
    expect(
      isTerminalEvent({ seq: 2, type: "run_halted", stage: "halted", data: {} }),
    ).toBe(true);
    expect(
      isTerminalEvent({
        seq: 3,
        type: "stage_completed",
        stage: "analysis",
        data: { completed: "analysis", next: "re_evaluation" },
      }),
    ).toBe(false);
  });
});

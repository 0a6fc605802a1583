/** End-to-end: drive the real grading service through the frontend's
 * client and state machine, exactly as the UI would. Spawns the Python
 * service, so the backend package must be installed. */

import { type ChildProcess, spawn } from "node:child_process";
import { mkdtempSync } from "node:fs";
import { tmpdir } from "node:os";
import { join } from "node:path";
import { fileURLToPath } from "node:url";
import { afterAll, beforeAll, describe, expect, it } from "vitest";

import { ApiClient } from "../src/api.js";
import {
  createSession,
  highlightStates,
  nudgeIndent,
  placeAt,
  type Session,
  toPlacedPayload,
} from "../src/state.js";

const PROBLEMS_DIR = fileURLToPath(new URL("../../problems", import.meta.url));
const PORT = 18000 + Math.floor(Math.random() * 2000);
const PROBLEM_ID = "python_sum_two_numbers";

let service: ChildProcess;
let client: ApiClient;

async function waitForService(): Promise<void> {
  for (let attempt = 0; attempt < 60; attempt++) {
    try {
      await client.listProblems();
      return;
    } catch {
      await new Promise((resolve) => setTimeout(resolve, 250));
    }
  }
  throw new Error("service never became ready");
}

beforeAll(async () => {
  client = new ApiClient(`http://127.0.0.1:${PORT}`);
  service = spawn(
    "python3",
    [
      "-m", "blockgrader.cli", "serve",
      "--problems", PROBLEMS_DIR,
      "--data", mkdtempSync(join(tmpdir(), "blockgrader-e2e-")),
      "--port", String(PORT),
      "--seed", "1234",
    ],
    { stdio: "ignore" },
  );
  await waitForService();
}, 30000);

afterAll(() => {
  service?.kill();
});

function buildTray(session: Session, tags: string[], indents: number[]): Session {
  let current = session;
  tags.forEach((tag, i) => {
    current = placeAt(current, tag, current.tray.length);
    for (let step = 0; step < indents[i]; step++) {
      current = nudgeIndent(current, tag, +1);
    }
  });
  return current;
}

describe("end to end against the live service", () => {
  it("serves a bank view without any answer information", async () => {
    const view = await client.fetchBank(PROBLEM_ID, 7);
    expect(view.blocks).toHaveLength(6);
    for (const block of view.blocks) {
      expect(Object.keys(block).sort()).toEqual(["max_indent_hint", "tag", "text"]);
    }
    const again = await client.fetchBank(PROBLEM_ID, 7);
    expect(again).toEqual(view);
  });

  it("grants full credit for the short solution built in the tray", async () => {
    const view = await client.fetchBank(PROBLEM_ID, 7);
    const session = buildTray(createSession(view), ["A", "E", "F"], [0, 1, 1]);
    const report = await client.grade(PROBLEM_ID, toPlacedPayload(session));
    expect(report.exact).toBe(true);
    expect(report.score).toBe(1.0);
    expect(highlightStates(session.tray.length, report)).toEqual([
      "correct",
      "correct",
      "correct",
    ]);
  }, 15000);

  it("flags position 2 when the final block is placed too early", async () => {
    const view = await client.fetchBank(PROBLEM_ID, 7);
    const session = buildTray(createSession(view), ["A", "F", "E"], [0, 1, 1]);
    const report = await client.grade(PROBLEM_ID, toPlacedPayload(session));
    expect(report.exact).toBe(false);
    expect(report.first_error_index).toBe(1);
    const states = highlightStates(session.tray.length, report);
    expect(states).toEqual(["correct", "error", "pending"]);
    // rendered positions are 1-based: the second row carries the error
    expect(states.indexOf("error") + 1).toBe(2);
  }, 15000);

  it("records attempts in the log", async () => {
    const attempts = await client.attempts(PROBLEM_ID);
    expect(attempts.length).toBeGreaterThanOrEqual(2);
    const last = attempts[attempts.length - 1];
    expect(last.problem_id).toBe(PROBLEM_ID);
    expect(last.first_error_index).toBe(1);
  });
});

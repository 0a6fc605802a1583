/** Pure session state for one problem tab: the shuffled bank, the tray
 * the student is building, and the feedback overlay. All transitions
 * return new state objects so the view can re-render from scratch. */

import type { BankView, GradeResponse, Placement } from "./api.js";

export interface TrayBlock {
  tag: string;
  indent: number;
}

export interface Session {
  problemId: string;
  shuffleSeed: number;
  /** Full shuffled bank, including blocks currently in the tray. */
  bank: { tag: string; text: string }[];
  maxIndent: number;
  tray: TrayBlock[];
}

export function createSession(view: BankView): Session {
  return {
    problemId: view.problem_id,
    shuffleSeed: view.shuffle_seed,
    bank: view.blocks.map((b) => ({ tag: b.tag, text: b.text })),
    maxIndent: view.blocks.reduce((m, b) => Math.max(m, b.max_indent_hint), 0),
    tray: [],
  };
}

/** Swap in a new bank view (reshuffle) without losing the tray. */
export function applyBank(session: Session, view: BankView): Session {
  const fresh = createSession(view);
  const known = new Set(fresh.bank.map((b) => b.tag));
  return { ...fresh, tray: session.tray.filter((t) => known.has(t.tag)) };
}

export function textOf(session: Session, tag: string): string {
  const block = session.bank.find((b) => b.tag === tag);
  return block ? block.text : tag;
}

/** Bank entries not yet placed, in bank order. */
export function bankRemaining(session: Session): { tag: string; text: string }[] {
  const placed = new Set(session.tray.map((t) => t.tag));
  return session.bank.filter((b) => !placed.has(b.tag));
}

function clampIndex(index: number, length: number): number {
  return Math.max(0, Math.min(index, length));
}

/** Drop a bank block into the tray at `index`; no-op if unknown or already placed. */
export function placeAt(session: Session, tag: string, index: number): Session {
  if (!session.bank.some((b) => b.tag === tag)) return session;
  if (session.tray.some((t) => t.tag === tag)) return session;
  const tray = [...session.tray];
  tray.splice(clampIndex(index, tray.length), 0, { tag, indent: 0 });
  return { ...session, tray };
}

export function moveInTray(session: Session, from: number, to: number): Session {
  if (from < 0 || from >= session.tray.length) return session;
  const tray = [...session.tray];
  const [moved] = tray.splice(from, 1);
  tray.splice(clampIndex(to, tray.length), 0, moved);
  return { ...session, tray };
}

/** Drag a tray block back out: it returns to the bank. */
export function removeFromTray(session: Session, tag: string): Session {
  return { ...session, tray: session.tray.filter((t) => t.tag !== tag) };
}

/** Adjust one block's indent by whole levels, clamped to [0, maxIndent]. */
export function nudgeIndent(session: Session, tag: string, delta: number): Session {
  const tray = session.tray.map((t) =>
    t.tag === tag
      ? { ...t, indent: Math.max(0, Math.min(session.maxIndent, t.indent + delta)) }
      : t,
  );
  return { ...session, tray };
}

export function canSubmit(session: Session): boolean {
  return session.tray.length > 0;
}

export function toPlacedPayload(session: Session): Placement[] {
  return session.tray.map((t) => ({ tag: t.tag, indent: t.indent }));
}

/** Serializable snapshot so a reload restores the work in progress. */
export function serializeSession(session: Session): string {
  return JSON.stringify(session);
}

export function restoreSession(raw: string): Session | null {
  try {
    const data = JSON.parse(raw) as Session;
    if (
      typeof data.problemId !== "string" ||
      typeof data.shuffleSeed !== "number" ||
      !Array.isArray(data.bank) ||
      !Array.isArray(data.tray) ||
      typeof data.maxIndent !== "number"
    ) {
      return null;
    }
    return data;
  } catch {
    return null;
  }
}

export type PositionState = "correct" | "error" | "pending";

/** Per-position feedback: everything before the first error is known
 * good, the error position is flagged, and later positions are not
 * judged. An exact report marks every position good. */
export function highlightStates(
  count: number,
  report: Pick<GradeResponse, "exact" | "first_error_index"> | null,
): PositionState[] {
  const states: PositionState[] = new Array(count).fill("pending");
  if (report === null) return states;
  if (report.exact) return states.fill("correct");
  const errorAt = report.first_error_index;
  if (errorAt === null || errorAt === undefined) {
    // consistent prefix, just incomplete
    return states.fill("correct");
  }
  for (let i = 0; i < count; i++) {
    states[i] = i < errorAt ? "correct" : i === errorAt ? "error" : "pending";
  }
  return states;
}

export function scorePercent(score: number): string {
  return `${Math.round(score * 100)}%`;
}

/** Tray persistence: one localStorage entry per problem. */

import { restoreSession, serializeSession, type Session } from "./state.js";

export interface KeyValueStore {
  getItem(key: string): string | null;
  setItem(key: string, value: string): void;
  removeItem(key: string): void;
}

const PREFIX = "blockgrader:";

export function saveSession(store: KeyValueStore, session: Session): void {
  store.setItem(PREFIX + session.problemId, serializeSession(session));
}

export function loadSession(store: KeyValueStore, problemId: string): Session | null {
  const raw = store.getItem(PREFIX + problemId);
  return raw === null ? null : restoreSession(raw);
}

export function clearSession(store: KeyValueStore, problemId: string): void {
  store.removeItem(PREFIX + problemId);
}

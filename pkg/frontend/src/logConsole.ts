/**
 * Job-console poller state machine.  Pure transitions so replaying a
 * recorded page sequence is unit-testable: lines append in server order,
 * the cursor never regresses, and errors back off exponentially.
 */

import type { LogPage } from "./types.js";

export interface LogConsoleState {
  lines: string[];
  cursor: number;
  status: string;
  terminal: boolean;
  errorStreak: number;
}

export const BASE_DELAY_MS = 400;
export const MAX_DELAY_MS = 8000;

export function initialLogState(): LogConsoleState {
  return { lines: [], cursor: 0, status: "queued", terminal: false, errorStreak: 0 };
}

export function applyLogPage(state: LogConsoleState, page: LogPage): LogConsoleState {
  const cursor = Math.max(state.cursor, page.next);
  return {
    lines: state.lines.concat(page.lines),
    cursor,
    status: page.status,
    terminal: page.status === "succeeded" || page.status === "failed",
    errorStreak: 0,
  };
}

export function applyLogError(state: LogConsoleState): LogConsoleState {
  return { ...state, errorStreak: state.errorStreak + 1 };
}

export function nextDelayMs(state: LogConsoleState): number {
  return Math.min(BASE_DELAY_MS * 2 ** state.errorStreak, MAX_DELAY_MS);
}

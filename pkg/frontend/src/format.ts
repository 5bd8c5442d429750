import type { Rational, StepEventMsg } from "./wire.js";

/** "2/1 (2.00)", exact fraction first, rounded decimal for orientation. */
export function formatRational(value: Rational | null): string {
  if (value === null) return "n/a";
  const decimal = (value.num / value.den).toFixed(2);
  return `${value.num}/${value.den} (${decimal})`;
}

/** One event-log line, e.g. "adversary u_a3 s2 -> s5 soft_violation adviser->0". */
export function describeEvent(event: StepEventMsg): string {
  const switched =
    event.new_adviser_index === null ? "" : ` adviser->${event.new_adviser_index}`;
  return `${event.actor} ${event.input} ${event.from} -> ${event.to} ${event.outcome}${switched}`;
}

export function historyMoves(history: StepEventMsg[]): string[] {
  return history.map((event) => event.input);
}

/**
 * Script document accepted by the command line simulator. Protagonist moves
 * are included too: on replay the simulator checks them against its own
 * strategy, which is what makes the export an exact transcript.
 */
export function scriptDocument(moves: string[]): string {
  return ["script v1", ...moves.map((move) => `move ${move}`)].join("\n") + "\n";
}

/** State visited after the first `position` events (position 0 = before any). */
export function stateAtPosition(
  history: StepEventMsg[],
  position: number,
  liveState: string,
): string {
  if (position <= 0) {
    const first = history[0];
    return first === undefined ? liveState : first.from;
  }
  if (position >= history.length) return liveState;
  const event = history[position - 1];
  return event === undefined ? liveState : event.to;
}

// Wire types for the advice service. Field names mirror the JSON bodies
// exactly; everything rational crosses as {num, den} integer pairs.

export interface Rational {
  num: number;
  den: number;
}

export interface AdvicePacketMsg {
  state: string;
  hard: string[];
  soft: string[];
  allowed: string[];
}

export interface AdviserInfoMsg {
  index: number;
  lambda: Rational | null;
  nominal: boolean;
}

export interface StepEventMsg {
  actor: string;
  input: string;
  from: string;
  to: string;
  outcome: string;
  new_adviser_index: number | null;
}

export interface SessionSnapshot {
  state: string;
  owner: string;
  halted: string;
  advice: AdvicePacketMsg | null;
  adviser: AdviserInfoMsg;
  forbidden: Record<string, string[]>;
  average: Rational | null;
  rounds: number;
  running_sum: number;
  history: StepEventMsg[];
}

export interface BundleSummary {
  generated: number;
  good: number;
  truncated: boolean;
  lambdas: (Rational | null)[];
  best_index: number | null;
  best_lambda: Rational | null;
}

export interface CreateSessionResponse {
  session_id: string;
  summary: BundleSummary;
}

export interface MoveResponse {
  event: StepEventMsg;
  session: SessionSnapshot;
}

export interface ErrorBody {
  code: string;
  message: string;
  detail: unknown;
}

export const OWNER_PROTAGONIST = "protagonist";
export const OWNER_ADVERSARY = "adversary";

export const HALTED_NO = "no";
export const HALTED_HARD = "hard_violation";
export const HALTED_UNSAFE = "unsafe";

export const OUTCOME_NORMAL = "normal";
export const OUTCOME_SOFT = "soft_violation";
export const OUTCOME_HARD = "hard_violation";
export const OUTCOME_UNSAFE = "unsafe_reached";

export const isErrorBody = (body: unknown): body is ErrorBody => {
  if (typeof body !== "object" || body === null) return false;
  const record = body as Record<string, unknown>;
  return typeof record.code === "string" && typeof record.message === "string";
};

export const isRational = (value: unknown): value is Rational => {
  if (typeof value !== "object" || value === null) return false;
  const record = value as Record<string, unknown>;
  return (
    typeof record.num === "number" &&
    typeof record.den === "number" &&
    Number.isInteger(record.num) &&
    Number.isInteger(record.den) &&
    record.den !== 0
  );
};

/**
 * DOM-free state machine for the four-question annotation wizard.
 *
 * The coder walks a fixed decision script: a "yes" at question 1 or 2
 * requires picking an antecedent mention, a "yes" at question 3 or 4
 * settles the label directly, and a "no" at question 4 records a doubt
 * that must carry a comment.
 */

export type Answer = "yes" | "no";

export type Label = "COREF" | "BRIDGE" | "LSIT" | "UNFAM" | "DOUBT";

export type Mode = "question" | "link" | "comment" | "ready";

export const QUESTIONS: Record<number, string> = {
  1: "Does the DD describe an entity mentioned before?",
  2: "Is the entity new but related to something mentioned before?",
  3: "Is the entity new in the text, but something mutually known by writer and general readers?",
  4: "Is the entity new in the text, but self-explanatory or accompanied by its identification?",
};

/** Single-letter codes shown next to annotated items. */
export const DISPLAY_CODES: Record<Label, string> = {
  COREF: "=",
  BRIDGE: "R",
  LSIT: "K",
  UNFAM: "U",
  DOUBT: "D",
};

const YES_LABEL: Record<number, Label> = {
  1: "COREF",
  2: "BRIDGE",
  3: "LSIT",
  4: "UNFAM",
};

const LINK_LABELS: ReadonlySet<Label> = new Set(["COREF", "BRIDGE"]);

export interface WizardState {
  /** Canonical "sentence/index" key of the description being annotated. */
  ddKey: string;
  question: number;
  answers: Answer[];
  mode: Mode;
  label: Label | null;
  antecedent: string | null;
  comment: string | null;
}

export interface AnswerSubmission {
  key: string;
  answer_path: Answer[];
  label: Label;
  antecedent: string | null;
  comment: string | null;
}

export function startWizard(ddKey: string): WizardState {
  return {
    ddKey,
    question: 1,
    answers: [],
    mode: "question",
    label: null,
    antecedent: null,
    comment: null,
  };
}

export class WizardError extends Error {}

function expectMode(state: WizardState, mode: Mode): void {
  if (state.mode !== mode) {
    throw new WizardError(`expected ${mode} mode, wizard is in ${state.mode} mode`);
  }
}

export function answerQuestion(state: WizardState, answer: Answer): WizardState {
  expectMode(state, "question");
  const answers = [...state.answers, answer];
  if (answer === "yes") {
    const label = YES_LABEL[state.question]!;
    return {
      ...state,
      answers,
      label,
      mode: LINK_LABELS.has(label) ? "link" : "ready",
    };
  }
  if (state.question === 4) {
    return { ...state, answers, label: "DOUBT", mode: "comment" };
  }
  return { ...state, answers, question: state.question + 1 };
}

/** Keys compare in document order: by sentence, then by mention index. */
export function keyOrder(a: string, b: string): number {
  const [as, ai] = a.split("/").map(Number) as [number, number];
  const [bs, bi] = b.split("/").map(Number) as [number, number];
  return as - bs || ai - bi;
}

export function selectAntecedent(state: WizardState, key: string): WizardState {
  expectMode(state, "link");
  if (keyOrder(key, state.ddKey) >= 0) {
    throw new WizardError(`antecedent ${key} does not precede ${state.ddKey}`);
  }
  return { ...state, antecedent: key, mode: "ready" };
}

export function setComment(state: WizardState, comment: string): WizardState {
  expectMode(state, "comment");
  if (!comment.trim()) {
    throw new WizardError("a doubt needs a comment explaining it");
  }
  return { ...state, comment: comment.trim(), mode: "ready" };
}

export function currentQuestion(state: WizardState): string {
  return QUESTIONS[state.question]!;
}

export function toSubmission(state: WizardState): AnswerSubmission {
  expectMode(state, "ready");
  return {
    key: state.ddKey,
    answer_path: state.answers,
    label: state.label!,
    antecedent: state.antecedent,
    comment: state.comment,
  };
}

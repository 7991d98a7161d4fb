/** Browser entry point: renders the annotation wizard against the HTTP API. */

import { AnnotationApi, ApiError, NextPayload, SessionInfo } from "./api.js";
import {
  DISPLAY_CODES,
  Label,
  WizardState,
  answerQuestion,
  currentQuestion,
  keyOrder,
  selectAntecedent,
  setComment,
  startWizard,
  toSubmission,
} from "./wizard.js";

interface App {
  api: AnnotationApi;
  root: HTMLElement;
  session: SessionInfo | null;
  current: NextPayload | null;
  wizard: WizardState | null;
  /** display code per already-annotated mention key, e.g. "3/1" -> "=" */
  codes: Map<string, string>;
  status: string;
}

function el<K extends keyof HTMLElementTagNameMap>(
  tag: K,
  attrs: Record<string, string> = {},
  ...children: (Node | string)[]
): HTMLElementTagNameMap[K] {
  const node = document.createElement(tag);
  for (const [name, value] of Object.entries(attrs)) {
    if (name === "class") node.className = value;
    else node.setAttribute(name, value);
  }
  node.append(...children);
  return node;
}

export function createApp(root: HTMLElement, api: AnnotationApi): App {
  return { api, root, session: null, current: null, wizard: null, codes: new Map(), status: "" };
}

export async function showStartScreen(app: App): Promise<void> {
  const { texts } = await app.api.listTexts();
  const coderInput = el("input", { id: "coder", placeholder: "your coder id" });
  const picker = el(
    "select",
    { id: "text-picker" },
    ...texts.map((t) => el("option", { value: t }, t)),
  );
  const start = el("button", { id: "start" }, "Start annotating");
  start.addEventListener("click", () => {
    const coder = (coderInput as HTMLInputElement).value.trim() || "anonymous";
    const doc = (picker as HTMLSelectElement).value;
    void startSession(app, coder, doc);
  });
  app.root.replaceChildren(
    el("h1", {}, "Definite description annotation"),
    el("p", {}, "Pick a text and answer the four questions for each highlighted description."),
    coderInput,
    picker,
    start,
  );
}

export async function startSession(app: App, coder: string, doc: string): Promise<void> {
  app.session = await app.api.createSession(coder, doc);
  app.codes = new Map();
  await advance(app);
}

async function advance(app: App): Promise<void> {
  if (!app.session) return;
  try {
    app.current = await app.api.next(app.session.session);
  } catch (err) {
    if (err instanceof ApiError && err.status === 409) {
      app.current = null;
      app.wizard = null;
      renderDone(app);
      return;
    }
    throw err;
  }
  app.wizard = startWizard(app.current.dd.key);
  render(app);
}

export async function submitCurrent(app: App): Promise<void> {
  if (!app.session || !app.wizard) return;
  const submission = toSubmission(app.wizard);
  try {
    app.session = await app.api.submit(app.session.session, submission);
  } catch (err) {
    if (err instanceof ApiError && (err.status === 409 || err.status === 422)) {
      app.status = err.detail;
      render(app);
      return;
    }
    throw err;
  }
  app.codes.set(submission.key, DISPLAY_CODES[submission.label as Label]);
  app.status = "";
  await advance(app);
}

export function handleAnswer(app: App, answer: "yes" | "no"): void {
  if (!app.wizard || app.wizard.mode !== "question") return;
  app.wizard = answerQuestion(app.wizard, answer);
  if (app.wizard.mode === "ready") {
    void submitCurrent(app);
  } else {
    render(app);
  }
}

export function handleMentionClick(app: App, key: string): void {
  if (!app.wizard || app.wizard.mode !== "link") return;
  try {
    app.wizard = selectAntecedent(app.wizard, key);
  } catch {
    app.status = `pick a mention before ${app.wizard.ddKey}`;
    render(app);
    return;
  }
  void submitCurrent(app);
}

export function handleComment(app: App, comment: string): void {
  if (!app.wizard || app.wizard.mode !== "comment") return;
  app.wizard = setComment(app.wizard, comment);
  void submitCurrent(app);
}

function renderSentences(app: App): HTMLElement {
  const current = app.current!;
  const container = el("div", { id: "text", class: "text" });
  for (const sentence of current.context.sentences) {
    const line = el("p", { class: "sentence", "data-no": String(sentence.no) });
    line.append(`${sentence.no}. `);
    // mark only top-level mentions so nested NPs do not nest buttons
    const spans = [...sentence.mentions].sort(
      (a, b) => a.start - b.start || b.end - a.end,
    );
    let cursor = 0;
    for (const mention of spans) {
      if (mention.start < cursor) continue;
      line.append(sentence.tokens.slice(cursor, mention.start).join(" "), " ");
      const classes = ["mention"];
      if (mention.key === current.dd.key) classes.push("current");
      const button = el(
        "button",
        { class: classes.join(" "), "data-key": mention.key },
        sentence.tokens.slice(mention.start, mention.end).join(" "),
      );
      const code = app.codes.get(mention.key);
      if (code) button.append(el("sup", { class: "code" }, code));
      button.addEventListener("click", () => handleMentionClick(app, mention.key));
      line.append(button, " ");
      cursor = mention.end;
    }
    line.append(sentence.tokens.slice(cursor).join(" "));
    container.append(line);
  }
  return container;
}

function renderPrompt(app: App): HTMLElement {
  const wizard = app.wizard!;
  const current = app.current!;
  const prompt = el("div", { id: "prompt" });
  prompt.append(
    el(
      "p",
      { id: "dd" },
      `Item ${current.dd.display_key}: `,
      el("strong", {}, current.dd.surface),
    ),
  );
  if (wizard.mode === "question") {
    prompt.append(el("p", { id: "question" }, `Q${wizard.question}. ${currentQuestion(wizard)}`));
    const yes = el("button", { id: "yes" }, "yes (y)");
    const no = el("button", { id: "no" }, "no (n)");
    yes.addEventListener("click", () => handleAnswer(app, "yes"));
    no.addEventListener("click", () => handleAnswer(app, "no"));
    prompt.append(yes, no);
  } else if (wizard.mode === "link") {
    prompt.append(
      el("p", { id: "question" }, "Click the earlier mention this description refers to."),
    );
  } else if (wizard.mode === "comment") {
    const box = el("textarea", { id: "comment", placeholder: "why is this a doubt?" });
    const save = el("button", { id: "save-comment" }, "Record doubt");
    save.addEventListener("click", () =>
      handleComment(app, (box as HTMLTextAreaElement).value),
    );
    prompt.append(el("p", { id: "question" }, "Describe the doubt:"), box, save);
  }
  return prompt;
}

export function render(app: App): void {
  if (!app.current || !app.wizard || !app.session) return;
  const progress = el(
    "p",
    { id: "progress" },
    `${app.current.progress.done} of ${app.current.progress.total} done`,
  );
  const pieces: (Node | string)[] = [renderPrompt(app), progress, renderSentences(app)];
  if (app.status) pieces.unshift(el("p", { id: "status", class: "error" }, app.status));
  app.root.replaceChildren(...pieces);
}

function renderDone(app: App): void {
  const session = app.session!;
  const link = el(
    "a",
    { id: "export", href: `/api/sessions/${session.session}/export`, download: `${session.session}.ddann` },
    "Download the annotation file",
  );
  app.root.replaceChildren(
    el("h1", {}, "All done"),
    el("p", {}, `${session.total} descriptions annotated for ${session.doc}.`),
    link,
  );
}

export function installKeyboard(app: App, target: EventTarget = document): void {
  target.addEventListener("keydown", (event) => {
    const key = (event as KeyboardEvent).key;
    if ((event as KeyboardEvent).target instanceof HTMLTextAreaElement) return;
    if (key === "y") handleAnswer(app, "yes");
    if (key === "n") handleAnswer(app, "no");
  });
}

/** Wire the app into the page when loaded in a real browser. */
export function boot(): void {
  const root = document.getElementById("app");
  if (!root) return;
  const app = createApp(root, new AnnotationApi());
  installKeyboard(app);
  void showStartScreen(app);
}

declare const process: unknown;
if (typeof process === "undefined" && typeof document !== "undefined") {
  document.addEventListener("DOMContentLoaded", boot);
}

/** Typed fetch client for the annotation service HTTP API. */

import type { AnswerSubmission } from "./wizard.js";

export interface MentionPayload {
  key: string;
  start: number;
  end: number;
  surface: string;
}

export interface SentencePayload {
  no: number;
  tokens: string[];
  mentions: MentionPayload[];
}

export interface TextPayload {
  doc: string;
  sentences: SentencePayload[];
}

export interface SessionInfo {
  session: string;
  coder: string;
  doc: string;
  scheme: string;
  done: number;
  total: number;
  cursor: string | null;
  complete: boolean;
}

export interface NextPayload {
  dd: { key: string; display_key: string; surface: string; sentence: number };
  context: TextPayload;
  question: { number: number; text: string };
  progress: { done: number; total: number };
}

export class ApiError extends Error {
  constructor(
    public readonly status: number,
    public readonly detail: string,
  ) {
    super(`HTTP ${status}: ${detail}`);
  }
}

async function request<T>(url: string, init?: RequestInit): Promise<T> {
  const response = await fetch(url, init);
  if (!response.ok) {
    let detail = response.statusText;
    try {
      const body = await response.json();
      if (typeof body?.detail === "string") detail = body.detail;
    } catch {
      // non-JSON error body; keep the status text
    }
    throw new ApiError(response.status, detail);
  }
  return response.json() as Promise<T>;
}

export class AnnotationApi {
  constructor(private readonly base: string = "") {}

  listTexts(): Promise<{ texts: string[] }> {
    return request(`${this.base}/api/texts`);
  }

  getText(doc: string): Promise<TextPayload> {
    return request(`${this.base}/api/texts/${encodeURIComponent(doc)}`);
  }

  createSession(coder: string, doc: string): Promise<SessionInfo> {
    return request(`${this.base}/api/sessions`, {
      method: "POST",
      headers: { "Content-Type": "application/json" },
      body: JSON.stringify({ coder, doc }),
    });
  }

  sessionInfo(session: string): Promise<SessionInfo> {
    return request(`${this.base}/api/sessions/${session}`);
  }

  next(session: string): Promise<NextPayload> {
    return request(`${this.base}/api/sessions/${session}/next`);
  }

  submit(session: string, answer: AnswerSubmission): Promise<SessionInfo> {
    return request(`${this.base}/api/sessions/${session}/answers`, {
      method: "POST",
      headers: { "Content-Type": "application/json" },
      body: JSON.stringify(answer),
    });
  }

  async exportDdann(session: string): Promise<string> {
    const response = await fetch(`${this.base}/api/sessions/${session}/export`);
    if (!response.ok) throw new ApiError(response.status, response.statusText);
    return response.text();
  }
}

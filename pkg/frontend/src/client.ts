import { NewSessionForm, ServiceError, SessionPayload } from "./types.js";

async function unwrap(response: Response): Promise<any> {
  let body: any = null;
  try {
    body = await response.json();
  } catch {
    // non-JSON error page; fall through with the status line
  }
  if (!response.ok) {
    const message = body && typeof body.error === "string"
      ? body.error
      : `service error ${response.status}`;
    throw new ServiceError(response.status, message);
  }
  return body;
}

/** Thin fetch wrapper around the session endpoints. */
export class SessionClient {
  constructor(readonly baseUrl: string) {}

  async health(): Promise<boolean> {
    try {
      const r = await fetch(`${this.baseUrl}/healthz`);
      return r.ok;
    } catch {
      return false;
    }
  }

  createSession(form: NewSessionForm): Promise<SessionPayload> {
    return fetch(`${this.baseUrl}/sessions`, {
      method: "POST",
      headers: { "Content-Type": "application/json" },
      body: JSON.stringify(form),
    }).then(unwrap);
  }

  getSession(id: string): Promise<SessionPayload> {
    return fetch(`${this.baseUrl}/sessions/${id}`).then(unwrap);
  }

  postMove(id: string, index: number, value: string): Promise<SessionPayload> {
    return fetch(`${this.baseUrl}/sessions/${id}/moves`, {
      method: "POST",
      headers: { "Content-Type": "application/json" },
      body: JSON.stringify({ index, value }),
    }).then(unwrap);
  }
}

// Page wiring: new-game form, board lifecycle, move submission with an
// optimistic turn lock, polling re-fetch after every action.

import { buildBoardView, localRejection, otherRole } from "./board.js";
import { SessionClient } from "./client.js";
import { renderBoard, showToast } from "./render.js";
import {
  Arena,
  NewSessionForm,
  Role,
  ServiceError,
  SessionPayload,
} from "./types.js";

export interface Playboard {
  root: HTMLElement;
  client: SessionClient;
  /** Last payload rendered; the board is always exactly this snapshot. */
  lastPayload(): SessionPayload | null;
  newGame(form: NewSessionForm): Promise<void>;
  submitMove(index: number, value: string): Promise<void>;
  /** Re-fetch from the server and re-render. */
  refresh(): Promise<void>;
  /** Resolves when the in-flight form/move handler has finished. */
  settled(): Promise<void>;
}

function formSection(): HTMLElement {
  const form = document.createElement("form");
  form.className = "new-game";
  form.innerHTML = `
    <label>arena
      <select name="kind">
        <option value="cyclic">Z/N</option>
        <option value="valued">Q_p</option>
      </select>
    </label>
    <label>N or p <input name="modulus" value="16" size="4"></label>
    <label>degree <input name="degree" value="3" size="3"></label>
    <label>integral <input name="integral" type="checkbox"></label>
    <label>you play
      <select name="seat">
        <option value="nora">Nora (no root)</option>
        <option value="wanda">Wanda (root)</option>
      </select>
    </label>
    <label>first move
      <select name="first">
        <option value="engine">engine</option>
        <option value="human">you</option>
      </select>
    </label>
    <button type="submit">new game</button>
    <div class="form-error" role="alert"></div>
  `;
  return form;
}

function readForm(form: HTMLElement): NewSessionForm {
  const get = (name: string) =>
    form.querySelector<HTMLInputElement | HTMLSelectElement>(
      `[name="${name}"]`,
    )!;
  const kind = get("kind").value;
  const modulus = Number(get("modulus").value);
  const degree = Number(get("degree").value);
  const arena: Arena = kind === "cyclic"
    ? { kind: "cyclic", n: modulus, degree, allow_zero_leading: false }
    : {
      kind: "valued",
      p: modulus,
      degree,
      allow_zero_leading: false,
      ramification_denominator: 1,
      integral: (get("integral") as HTMLInputElement).checked,
    };
  const humanRole = get("seat").value as Role;
  const engineRole = otherRole(humanRole);
  const first = get("first").value === "engine" ? engineRole : humanRole;
  return { arena, engine_role: engineRole, first };
}

export function mountPlayboard(root: HTMLElement, baseUrl: string): Playboard {
  const client = new SessionClient(baseUrl);
  const form = formSection();
  const boardRoot = document.createElement("div");
  boardRoot.className = "board-root";
  root.textContent = "";
  root.append(form, boardRoot);

  let payload: SessionPayload | null = null;
  let busy = false; // optimistic turn lock
  let pending: Promise<void> = Promise.resolve();

  const formError = form.querySelector(".form-error") as HTMLElement;

  function render(next: SessionPayload): void {
    payload = next;
    const handles = renderBoard(boardRoot, buildBoardView(next));
    if (handles) {
      handles.submit.disabled = busy;
      const parent = handles.submit.closest("form")!;
      parent.addEventListener("submit", (event) => {
        event.preventDefault();
        pending = app.submitMove(
          Number(handles.indexSelect.value),
          handles.valueInput.value,
        );
      });
    }
  }

  const app: Playboard = {
    root,
    client,
    lastPayload: () => payload,

    async newGame(request: NewSessionForm): Promise<void> {
      formError.textContent = "";
      try {
        render(await client.createSession(request));
      } catch (error) {
        formError.textContent = error instanceof ServiceError
          ? error.message
          : `service unreachable: ${String(error)}`;
      }
    },

    async submitMove(index: number, value: string): Promise<void> {
      if (!payload || busy) return;
      const rejection = localRejection(payload, index, value);
      if (rejection !== null) {
        showToast(boardRoot, rejection);
        return;
      }
      busy = true;
      let next: SessionPayload | null = null;
      try {
        next = await client.postMove(payload.id, index, value);
      } catch (error) {
        if (error instanceof ServiceError) {
          showToast(boardRoot, error.message);
        } else {
          showToast(boardRoot, `service unreachable: ${String(error)}`);
        }
      } finally {
        busy = false;
      }
      if (next) render(next);
    },

    async refresh(): Promise<void> {
      if (!payload) return;
      render(await client.getSession(payload.id));
    },

    settled: () => pending,
  };

  form.addEventListener("submit", (event) => {
    event.preventDefault();
    pending = app.newGame(readForm(form));
  });

  return app;
}

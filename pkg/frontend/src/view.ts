/** DOM rendering and drag-and-drop wiring. The whole app re-renders
 * from state after every transition; drag hover effects are the only
 * direct DOM mutations. */

import { ApiClient, type GradeResponse, type ProblemSummary } from "./api.js";
import {
  applyBank,
  bankRemaining,
  canSubmit,
  createSession,
  highlightStates,
  moveInTray,
  nudgeIndent,
  placeAt,
  removeFromTray,
  scorePercent,
  type Session,
  textOf,
  toPlacedPayload,
} from "./state.js";
import { loadSession, saveSession, type KeyValueStore } from "./storage.js";

const DRAG_MIME = "text/x-block-tag";

interface Ui {
  problems: ProblemSummary[];
  session: Session | null;
  report: GradeResponse | null;
  networkError: string | null;
  busy: boolean;
}

export class App {
  private ui: Ui = {
    problems: [],
    session: null,
    report: null,
    networkError: null,
    busy: false,
  };

  constructor(
    private readonly client: ApiClient,
    private readonly store: KeyValueStore,
    private readonly root: HTMLElement,
  ) {}

  async start(): Promise<void> {
    try {
      this.ui.problems = await this.client.listProblems();
    } catch (error) {
      this.ui.networkError = describe(error);
      this.render();
      return;
    }
    if (this.ui.problems.length > 0) {
      await this.openProblem(this.ui.problems[0].problem_id);
    }
    this.render();
  }

  async openProblem(problemId: string): Promise<void> {
    const saved = loadSession(this.store, problemId);
    if (saved !== null) {
      this.setSession(saved);
      return;
    }
    try {
      this.setSession(createSession(await this.client.fetchBank(problemId)));
    } catch (error) {
      this.ui.networkError = describe(error);
      this.render();
    }
  }

  async reshuffle(): Promise<void> {
    if (this.ui.session === null) return;
    try {
      const view = await this.client.fetchBank(this.ui.session.problemId);
      this.setSession(applyBank(this.ui.session, view));
    } catch (error) {
      this.ui.networkError = describe(error);
      this.render();
    }
  }

  async submit(): Promise<void> {
    const session = this.ui.session;
    if (session === null || !canSubmit(session) || this.ui.busy) return;
    this.ui.busy = true;
    this.ui.networkError = null;
    this.render();
    try {
      this.ui.report = await this.client.grade(
        session.problemId,
        toPlacedPayload(session),
      );
    } catch (error) {
      // the tray is untouched; the student can retry
      this.ui.networkError = describe(error);
    } finally {
      this.ui.busy = false;
      this.render();
    }
  }

  /** Any tray edit invalidates the previous feedback overlay. */
  private setSession(session: Session): void {
    this.ui.session = session;
    this.ui.report = null;
    this.ui.networkError = null;
    saveSession(this.store, session);
    this.render();
  }

  private render(): void {
    const { session } = this.ui;
    this.root.textContent = "";
    this.root.append(this.renderToolbar());
    if (this.ui.networkError !== null) {
      this.root.append(this.renderBanner());
    }
    if (session === null) return;
    this.root.append(
      section("Drag from here", this.renderBank(session)),
      section("Construct your solution here", this.renderTray(session)),
      this.renderControls(session),
      this.renderFeedback(),
    );
  }

  private renderToolbar(): HTMLElement {
    const bar = el("div", "toolbar");
    const select = document.createElement("select");
    for (const problem of this.ui.problems) {
      const option = document.createElement("option");
      option.value = problem.problem_id;
      option.textContent = problem.title;
      if (this.ui.session?.problemId === problem.problem_id) option.selected = true;
      select.append(option);
    }
    select.addEventListener("change", () => void this.openProblem(select.value));
    const reshuffle = button("Reshuffle bank", () => void this.reshuffle());
    bar.append(select, reshuffle);
    return bar;
  }

  private renderBanner(): HTMLElement {
    const banner = el("div", "banner");
    banner.append(
      el("span", "", `Request failed: ${this.ui.networkError}. Your blocks are safe.`),
      button("Retry", () => void this.submit()),
    );
    return banner;
  }

  private renderBank(session: Session): HTMLElement {
    const list = el("ul", "bank");
    list.addEventListener("dragover", (event) => event.preventDefault());
    list.addEventListener("drop", (event) => {
      event.preventDefault();
      const tag = event.dataTransfer?.getData(DRAG_MIME);
      if (tag) this.setSession(removeFromTray(session, tag));
    });
    for (const block of bankRemaining(session)) {
      const item = el("li", "block");
      item.textContent = block.text;
      item.draggable = true;
      item.dataset.tag = block.tag;
      item.addEventListener("dragstart", (event) => {
        event.dataTransfer?.setData(DRAG_MIME, block.tag);
      });
      list.append(item);
    }
    return list;
  }

  private renderTray(session: Session): HTMLElement {
    const list = el("ol", "tray");
    list.addEventListener("dragover", (event) => event.preventDefault());
    list.addEventListener("drop", (event) => {
      event.preventDefault();
      const tag = event.dataTransfer?.getData(DRAG_MIME);
      if (!tag) return;
      const index = dropIndex(list, event.clientY);
      const from = session.tray.findIndex((t) => t.tag === tag);
      this.setSession(
        from === -1
          ? placeAt(session, tag, index)
          : moveInTray(session, from, index > from ? index - 1 : index),
      );
    });
    const states = highlightStates(session.tray.length, this.ui.report);
    session.tray.forEach((placed, i) => {
      const item = el("li", `block placed ${states[i]}`);
      item.style.marginLeft = `${placed.indent * 2}em`;
      item.draggable = true;
      item.dataset.tag = placed.tag;
      item.addEventListener("dragstart", (event) => {
        event.dataTransfer?.setData(DRAG_MIME, placed.tag);
      });
      const text = el("span", "text", textOf(session, placed.tag));
      const outdent = button("◀", () =>
        this.setSession(nudgeIndent(session, placed.tag, -1)),
      );
      const indent = button("▶", () =>
        this.setSession(nudgeIndent(session, placed.tag, +1)),
      );
      item.append(outdent, indent, text);
      list.append(item);
    });
    if (session.tray.length === 0) {
      list.append(el("li", "placeholder", "Drop blocks here"));
    }
    return list;
  }

  private renderControls(session: Session): HTMLElement {
    const controls = el("div", "controls");
    const submit = button("Submit", () => void this.submit());
    submit.disabled = !canSubmit(session) || this.ui.busy;
    controls.append(submit);
    return controls;
  }

  private renderFeedback(): HTMLElement {
    const area = el("div", "feedback");
    const report = this.ui.report;
    if (report === null) return area;
    area.classList.add(report.exact ? "success" : "failure");
    area.append(
      el("div", "score", `Score: ${scorePercent(report.score)}`),
      el("div", "message", report.message),
    );
    return area;
  }
}

function describe(error: unknown): string {
  return error instanceof Error ? error.message : String(error);
}

function el(name: string, className: string, text?: string): HTMLElement {
  const node = document.createElement(name);
  if (className) node.className = className;
  if (text !== undefined) node.textContent = text;
  return node;
}

function button(label: string, onClick: () => void): HTMLButtonElement {
  const node = document.createElement("button");
  node.type = "button";
  node.textContent = label;
  node.addEventListener("click", onClick);
  return node;
}

function section(title: string, body: HTMLElement): HTMLElement {
  const wrapper = el("section", "panel");
  wrapper.append(el("h2", "", title), body);
  return wrapper;
}

/** Insertion index from the pointer's vertical position over the list. */
function dropIndex(list: HTMLElement, clientY: number): number {
  const items = [...list.querySelectorAll<HTMLElement>("li.placed")];
  for (let i = 0; i < items.length; i++) {
    const rect = items[i].getBoundingClientRect();
    if (clientY < rect.top + rect.height / 2) return i;
  }
  return items.length;
}

import { el } from "./dom";
import type { ChromeStrings } from "./strings";

export type PanelKind = "new_character" | "profile" | "journals";

export interface PanelHandle {
  kind: PanelKind;
  subject: string | null;
  element: HTMLElement;
  body: HTMLElement;
  close: () => void;
  setTitle: (title: string) => void;
}

// Horizontal strip of panels. Order is user-controlled (open order plus the
// move buttons); there is no cap on how many panels are open at once.

export class PanelWorkspace {
  readonly element: HTMLElement;
  private readonly strings: ChromeStrings;
  private readonly handles: PanelHandle[] = [];

  constructor(strings: ChromeStrings) {
    this.strings = strings;
    this.element = el("div", { className: "panel-strip", dataset: { testid: "panel-strip" } });
  }

  find(kind: PanelKind, subject: string | null): PanelHandle | undefined {
    return this.handles.find((h) => h.kind === kind && h.subject === subject);
  }

  open(kind: PanelKind, subject: string | null, title: string): PanelHandle {
    const body = el("div", { className: "panel-body" });
    const titleNode = el("span", { className: "panel-title", text: title });
    const panel = el("section", {
      className: `panel panel-${kind}`,
      dataset: { kind, ...(subject ? { subject } : {}) },
    });

    const handle: PanelHandle = {
      kind,
      subject,
      element: panel,
      body,
      close: () => this.close(handle),
      setTitle: (next: string) => {
        titleNode.textContent = next;
      },
    };

    const header = el(
      "header",
      { className: "panel-header" },
      titleNode,
      el(
        "span",
        { className: "panel-controls" },
        el("button", {
          className: "panel-btn",
          text: "◀",
          title: this.strings.moveLeft,
          onClick: () => this.move(handle, -1),
        }),
        el("button", {
          className: "panel-btn",
          text: "▶",
          title: this.strings.moveRight,
          onClick: () => this.move(handle, 1),
        }),
        el("button", {
          className: "panel-btn panel-close",
          text: "✕",
          title: this.strings.close,
          dataset: { testid: "panel-close" },
          onClick: () => this.close(handle),
        }),
      ),
    );
    panel.append(header, body);

    this.handles.push(handle);
    this.element.append(panel);
    this.focus(handle);
    return handle;
  }

  focus(handle: PanelHandle): void {
    if (typeof handle.element.scrollIntoView === "function") {
      handle.element.scrollIntoView({ inline: "nearest", block: "nearest" });
    }
  }

  close(handle: PanelHandle): void {
    const index = this.handles.indexOf(handle);
    if (index < 0) return;
    this.handles.splice(index, 1);
    handle.element.remove();
  }

  private move(handle: PanelHandle, delta: -1 | 1): void {
    const index = this.handles.indexOf(handle);
    const next = index + delta;
    if (index < 0 || next < 0 || next >= this.handles.length) return;
    const other = this.handles[next];
    if (!other) return;
    this.handles.splice(index, 1);
    this.handles.splice(next, 0, handle);
    if (delta === 1) {
      other.element.after(handle.element);
    } else {
      other.element.before(handle.element);
    }
  }
}

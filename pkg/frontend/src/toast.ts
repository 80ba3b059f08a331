import { el } from "./dom";

// One region per app instance; toasts are transient chrome, so the region is
// marked ephemeral and stays out of content snapshots.

export class ToastRegion {
  readonly element: HTMLElement;

  constructor() {
    this.element = el("div", {
      className: "toast-region",
      dataset: { ephemeral: "1" },
    });
  }

  show(message: string, tone: "info" | "error" = "info"): void {
    const toast = el("div", {
      className: `toast toast-${tone}`,
      text: message,
      dataset: { testid: "toast" },
    });
    this.element.append(toast);
    setTimeout(() => toast.remove(), 6000);
  }
}

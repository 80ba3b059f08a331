import { el } from "./dom";
import type { ChromeStrings } from "./strings";

// Modal confirmation gate. Destructive actions resolve true only on an
// explicit confirm click; dismissing resolves false.

export class ConfirmDialog {
  readonly element: HTMLElement;
  private readonly strings: ChromeStrings;
  private pending: ((ok: boolean) => void) | null = null;
  private readonly messageNode: HTMLElement;

  constructor(strings: ChromeStrings) {
    this.strings = strings;
    this.messageNode = el("p", { className: "confirm-message" });
    this.element = el(
      "div",
      { className: "confirm-overlay hidden", dataset: { ephemeral: "1" } },
      el(
        "div",
        { className: "confirm-box", dataset: { testid: "confirm-dialog" } },
        el("h3", { text: this.strings.confirmTitle }),
        this.messageNode,
        el(
          "div",
          { className: "confirm-actions" },
          el("button", {
            className: "btn-danger",
            text: this.strings.confirm,
            dataset: { testid: "confirm-yes" },
            onClick: () => this.settle(true),
          }),
          el("button", {
            text: this.strings.cancel,
            dataset: { testid: "confirm-no" },
            onClick: () => this.settle(false),
          }),
        ),
      ),
    );
  }

  ask(message: string): Promise<boolean> {
    // A second ask while one is open cancels the first.
    if (this.pending) this.settle(false);
    this.messageNode.textContent = message;
    this.element.classList.remove("hidden");
    return new Promise((resolve) => {
      this.pending = resolve;
    });
  }

  private settle(ok: boolean): void {
    this.element.classList.add("hidden");
    const resolve = this.pending;
    this.pending = null;
    if (resolve) resolve(ok);
  }
}

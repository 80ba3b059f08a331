import type { App } from "./app";
import { avatar } from "./avatar";
import { errorLine } from "./discovery";
import { el, replaceChildrenOf } from "./dom";
import { provenanceBadge } from "./profilePanel";
import { renderThreadsSection } from "./threadView";
import type { JournalDoc } from "./types";

export interface JournalCardOptions {
  withThreads: boolean;
  onChanged: () => void;
}

// One journal entry, editable and deletable in place. The same card serves
// the composer slots (no threads) and the feed (threads underneath).

export function renderJournalCard(
  app: App,
  entry: JournalDoc,
  options: JournalCardOptions,
): HTMLElement {
  const { strings } = app;
  const author = app.session.character(entry.author);
  const card = el("article", {
    className: "journal-card",
    dataset: { testid: "journal-card", id: entry.id, author: entry.author },
  });

  const header = el(
    "div",
    { className: "journal-head" },
    author ? avatar(app.api, author) : null,
    el("span", {
      className: "journal-author",
      text: author?.name ?? strings.removedCharacter,
    }),
    provenanceBadge(app, entry.provenance),
  );

  const themeNode = el("p", { className: "entry-theme", text: entry.theme });
  const contentNode = el("p", {
    className: "entry-content",
    text: entry.content,
    dataset: { testid: "journal-content" },
  });

  const controls = el("div", { className: "journal-controls" });
  const editButton = el("button", {
    className: "panel-btn",
    text: strings.edit,
    dataset: { testid: "journal-edit" },
  });
  editButton.addEventListener("click", () => {
    const themeInput = el("input", {
      type: "text",
      value: entry.theme,
      dataset: { testid: "journal-theme-editor" },
    });
    const editor = el("textarea", {
      value: entry.content,
      dataset: { testid: "journal-editor" },
    });
    const save = el("button", {
      text: strings.save,
      dataset: { testid: "journal-save" },
      onClick: () => {
        const patch: { theme?: string; content?: string } = {};
        if (themeInput.value !== entry.theme) patch.theme = themeInput.value;
        if (editor.value !== entry.content) patch.content = editor.value;
        if (!Object.keys(patch).length) {
          options.onChanged();
          return;
        }
        void app.api
          .patchJournal(app.session.projectId, entry.id, patch)
          .then(() => options.onChanged())
          .catch((err: unknown) => {
            app.toasts.show(errorLine(err, strings.requestFailed), "error");
          });
      },
    });
    const cancel = el("button", { text: strings.cancel, onClick: () => options.onChanged() });
    replaceChildrenOf(themeNode, themeInput);
    replaceChildrenOf(contentNode, editor, save, cancel);
  });

  const deleteButton = el("button", {
    className: "panel-btn",
    text: strings.delete,
    dataset: { testid: "journal-delete" },
  });
  deleteButton.addEventListener("click", () => {
    void app.confirm.ask(`${strings.delete}?`).then((ok) => {
      if (!ok) return;
      void app.api
        .deleteJournal(app.session.projectId, entry.id)
        .then(() => options.onChanged())
        .catch((err: unknown) => {
          app.toasts.show(errorLine(err, strings.requestFailed), "error");
        });
    });
  });

  controls.append(editButton, deleteButton);
  card.append(header, themeNode, contentNode, controls);
  if (options.withThreads) {
    card.append(renderThreadsSection(app, entry));
  }
  return card;
}

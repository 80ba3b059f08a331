import type { App } from "./app";
import { errorLine } from "./discovery";
import { el, replaceChildrenOf } from "./dom";
import { renderJournalCard } from "./journalCard";
import type { JournalSlot } from "./types";

// Journals panel: composer on top, feed underneath. The composer's slot row
// is rendered in selection order and each slot resolves on its own: the
// first run is one batch request whose response carries per-author results,
// and retries re-ask for just that author.

interface SlotView {
  author: string;
  element: HTMLElement;
  inFlight: boolean;
}

export function openJournalsPanel(app: App): void {
  const existing = app.workspace.find("journals", null);
  if (existing) {
    app.workspace.focus(existing);
    return;
  }
  const { strings } = app;
  const handle = app.workspace.open("journals", null, strings.journals);

  // --- composer ---

  const selectionOrder: string[] = [];
  const chipBox = el("div", { className: "author-chips", dataset: { testid: "author-chips" } });

  const rebuildChips = () => {
    for (const id of [...selectionOrder]) {
      if (!app.session.character(id)) {
        selectionOrder.splice(selectionOrder.indexOf(id), 1);
      }
    }
    replaceChildrenOf(
      chipBox,
      ...app.session.characters.map((character) => {
        const position = selectionOrder.indexOf(character.id);
        return el(
          "button",
          {
            className: `author-chip${position >= 0 ? " chip-selected" : ""}`,
            dataset: { testid: "author-chip", id: character.id },
            onClick: () => {
              const at = selectionOrder.indexOf(character.id);
              if (at >= 0) {
                selectionOrder.splice(at, 1);
              } else {
                selectionOrder.push(character.id);
              }
              rebuildChips();
            },
          },
          position >= 0 ? el("span", { className: "chip-rank", text: String(position + 1) }) : null,
          el("span", { text: character.name }),
        );
      }),
    );
  };
  app.session.onChange("characters", rebuildChips);
  rebuildChips();

  const themeInput = el("input", {
    type: "text",
    placeholder: strings.themePlaceholder,
    dataset: { testid: "composer-theme" },
  });
  const manualContent = el("textarea", {
    placeholder: strings.contentPlaceholder,
    dataset: { testid: "composer-content" },
  });
  const manualRadio = el("input", { type: "radio", dataset: { testid: "mode-manual" } });
  const autoRadio = el("input", { type: "radio", checked: true, dataset: { testid: "mode-auto" } });
  manualRadio.name = autoRadio.name = "composer-mode";
  const syncMode = () => {
    manualContent.classList.toggle("hidden", !manualRadio.checked);
  };
  manualRadio.addEventListener("change", syncMode);
  autoRadio.addEventListener("change", syncMode);

  const validationNote = el("p", {
    className: "inline-error hidden",
    dataset: { testid: "composer-validation", ephemeral: "1" },
  });
  const slotsBox = el("div", {
    className: "slot-row",
    dataset: { testid: "journal-slots", ephemeral: "1" },
  });
  const submitButton = el("button", {
    className: "btn-primary",
    text: strings.generate,
    dataset: { testid: "composer-submit" },
  });

  const complain = (message: string) => {
    validationNote.textContent = message;
    validationNote.classList.remove("hidden");
  };

  const slotViews: SlotView[] = [];

  const renderSlotState = (view: SlotView, state: "pending" | JournalSlot) => {
    const name = app.session.characterName(view.author, strings.removedCharacter);
    const head = el("div", { className: "slot-head" }, el("span", { className: "slot-author", text: name }));
    if (state === "pending") {
      view.inFlight = true;
      replaceChildrenOf(
        view.element,
        head,
        el("p", { className: "muted slot-pending", text: `${strings.generating}…` }),
      );
      return;
    }
    view.inFlight = false;
    if (state.status === "ok" && state.entry) {
      replaceChildrenOf(
        view.element,
        head,
        renderJournalCard(app, state.entry, {
          withThreads: false,
          onChanged: () => {
            void refreshSlotEntry(view, state.entry ? state.entry.id : "");
            app.session.emit("journals");
          },
        }),
      );
      return;
    }
    const error = state.error ?? { code: "Error", message: "" };
    replaceChildrenOf(
      view.element,
      head,
      el("span", {
        className: "slot-error-chip",
        text: `${error.code}: ${error.message}`,
        dataset: { testid: "slot-error" },
      }),
      el("button", {
        text: strings.retry,
        dataset: { testid: "slot-retry" },
        onClick: () => void runSlot(view),
      }),
    );
  };

  // After an in-place edit or delete the slot re-reads its entry so the card
  // always shows the stored document.
  const refreshSlotEntry = async (view: SlotView, journalId: string): Promise<void> => {
    if (!journalId) return;
    try {
      const entry = await app.api.journal(app.session.projectId, journalId);
      renderSlotState(view, { author: view.author, record_id: "", status: "ok", entry });
    } catch {
      // Deleted in place: drop the slot card.
      replaceChildrenOf(view.element);
    }
  };

  const runSlot = async (view: SlotView): Promise<void> => {
    if (view.inFlight) return;
    renderSlotState(view, "pending");
    try {
      const result = await app.api.generateJournals(
        app.session.projectId,
        [view.author],
        themeInput.value.trim(),
      );
      const slot = result.slots[0];
      renderSlotState(
        view,
        slot ?? { author: view.author, record_id: "", status: "error", error: { code: "Error", message: "empty response" } },
      );
    } catch (err) {
      renderSlotState(view, {
        author: view.author,
        record_id: "",
        status: "error",
        error: { code: "Error", message: errorLine(err, strings.requestFailed) },
      });
    }
    app.session.emit("journals");
  };

  const submit = async () => {
    validationNote.classList.add("hidden");
    if (!selectionOrder.length) {
      complain(strings.needAuthor);
      return;
    }
    const theme = themeInput.value.trim();
    if (manualRadio.checked) {
      if (selectionOrder.length !== 1) {
        complain(strings.manualSingleAuthor);
        return;
      }
      if (!manualContent.value.trim()) {
        complain(strings.contentPlaceholder);
        return;
      }
      const author = selectionOrder[0];
      if (!author) return;
      try {
        await app.api.addJournal(app.session.projectId, author, theme, manualContent.value);
        manualContent.value = "";
        app.session.emit("journals");
      } catch (err) {
        complain(errorLine(err, strings.requestFailed));
      }
      return;
    }

    if (!theme) {
      complain(strings.needTheme);
      return;
    }
    // One slot per author, rendered before the request leaves so the row
    // shows the selection order while everything is still in flight.
    slotViews.length = 0;
    replaceChildrenOf(slotsBox);
    for (const author of selectionOrder) {
      const view: SlotView = {
        author,
        inFlight: true,
        element: el("div", { className: "slot", dataset: { testid: "slot", author } }),
      };
      slotViews.push(view);
      slotsBox.append(view.element);
      renderSlotState(view, "pending");
    }
    submitButton.disabled = true;
    try {
      const result = await app.api.generateJournals(
        app.session.projectId,
        [...selectionOrder],
        theme,
      );
      result.slots.forEach((slot, index) => {
        const view = slotViews[index];
        if (view) renderSlotState(view, slot);
      });
    } catch (err) {
      // Batch-level failure (e.g. every slot failed): mark all retriable.
      for (const view of slotViews) {
        renderSlotState(view, {
          author: view.author,
          record_id: "",
          status: "error",
          error: { code: "Error", message: errorLine(err, strings.requestFailed) },
        });
      }
    } finally {
      submitButton.disabled = false;
    }
    app.session.emit("journals");
  };
  submitButton.addEventListener("click", () => void submit());

  // The composer is input chrome, not domain state; nothing in it needs to
  // survive a reload.
  const composer = el(
    "div",
    { className: "composer", dataset: { testid: "composer", ephemeral: "1" } },
    el("h4", { text: strings.composer }),
    el("p", { className: "muted", text: strings.pickAuthors }),
    chipBox,
    el("label", { className: "field-label", text: strings.theme }),
    themeInput,
    el(
      "div",
      { className: "mode-row" },
      el("label", {}, autoRadio, ` ${strings.modeAuto}`),
      el("label", {}, manualRadio, ` ${strings.modeManual}`),
    ),
    manualContent,
    validationNote,
    submitButton,
    slotsBox,
  );
  syncMode();

  // --- feed ---

  const feed = el("div", { className: "journal-feed", dataset: { testid: "journal-feed" } });
  const refreshFeed = async () => {
    try {
      const entries = await app.api.journals(app.session.projectId);
      replaceChildrenOf(
        feed,
        ...entries.map((entry) =>
          renderJournalCard(app, entry, {
            withThreads: true,
            onChanged: () => app.session.emit("journals"),
          }),
        ),
      );
      if (!entries.length) {
        feed.append(el("p", { className: "muted", text: strings.noJournals }));
      }
    } catch (err) {
      replaceChildrenOf(feed, el("p", { text: errorLine(err, strings.requestFailed) }));
    }
  };
  app.session.onChange("journals", () => void refreshFeed());
  void refreshFeed();

  handle.body.append(composer, feed);
}

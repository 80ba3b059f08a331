import { ApiError } from "./api";
import type { App } from "./app";
import { el } from "./dom";

interface AttributeRow {
  element: HTMLElement;
  key: HTMLInputElement;
  value: HTMLInputElement;
}

// New Character panel: a name, an ordered attribute list, and an optional
// portrait. Multiple instances may be open at once; each keeps its own
// draft until saved.

export function openNewCharacterPanel(app: App): void {
  const { strings } = app;
  const handle = app.workspace.open("new_character", null, strings.newCharacter);

  const nameInput = el("input", {
    type: "text",
    placeholder: strings.name,
    dataset: { testid: "nc-name" },
  });
  const rows: AttributeRow[] = [];
  const rowsBox = el("div", { className: "attr-rows" });
  const errorNote = el("p", { className: "inline-error hidden", dataset: { ephemeral: "1" } });
  let portraitRef: string | null = null;
  const portraitNote = el("span", { className: "portrait-note" });

  const addRow = (key = "", value = "") => {
    const keyInput = el("input", {
      type: "text",
      value: key,
      placeholder: strings.keyPlaceholder,
      dataset: { testid: "nc-attr-key" },
    });
    const valueInput = el("input", {
      type: "text",
      value,
      placeholder: strings.valuePlaceholder,
      dataset: { testid: "nc-attr-value" },
    });
    const row: AttributeRow = {
      key: keyInput,
      value: valueInput,
      element: el("div", { className: "attr-row" }, keyInput, valueInput),
    };
    row.element.append(
      el("button", {
        className: "panel-btn",
        text: "✕",
        onClick: () => {
          rows.splice(rows.indexOf(row), 1);
          row.element.remove();
        },
      }),
    );
    rows.push(row);
    rowsBox.append(row.element);
  };
  addRow();

  const portraitInput = el("input", { type: "file", dataset: { testid: "nc-portrait" } });
  portraitInput.addEventListener("change", () => {
    const file = portraitInput.files?.[0];
    if (!file) return;
    file
      .arrayBuffer()
      .then((bytes) => app.api.uploadImage(bytes))
      .then((uploaded) => {
        portraitRef = uploaded.ref;
        portraitNote.textContent = uploaded.media_type;
      })
      .catch((err: unknown) => {
        app.toasts.show(describe(err, strings.requestFailed), "error");
      });
  });

  const save = async () => {
    errorNote.classList.add("hidden");
    const name = nameInput.value.trim();
    if (!name) {
      errorNote.textContent = strings.name;
      errorNote.classList.remove("hidden");
      return;
    }
    const attributes = rows
      .filter((row) => row.key.value.trim())
      .map((row) => ({ key: row.key.value.trim(), value: row.value.value }));
    try {
      await app.api.createCharacter(app.session.projectId, {
        name,
        attributes,
        ...(portraitRef ? { portrait: portraitRef } : {}),
      });
      await app.session.refreshCharacters();
      handle.close();
    } catch (err) {
      errorNote.textContent = describe(err, strings.requestFailed);
      errorNote.classList.remove("hidden");
    }
  };

  handle.body.append(
    el("label", { className: "field-label", text: strings.name }),
    nameInput,
    el("label", { className: "field-label", text: strings.attributes }),
    rowsBox,
    el("button", {
      text: strings.addAttribute,
      dataset: { testid: "nc-add-attr" },
      onClick: () => addRow(),
    }),
    el("label", { className: "field-label", text: strings.portrait }),
    el("div", { className: "portrait-field" }, portraitInput, portraitNote),
    errorNote,
    el("button", {
      className: "btn-primary",
      text: strings.save,
      dataset: { testid: "nc-save" },
      onClick: () => void save(),
    }),
  );
}

export function describe(err: unknown, fallback: string): string {
  if (err instanceof ApiError) return `${err.code}: ${err.message}`;
  if (err instanceof Error) return err.message;
  return fallback;
}

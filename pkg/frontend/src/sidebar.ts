import type { App } from "./app";
import { avatar } from "./avatar";
import { el, replaceChildrenOf } from "./dom";

// Right sidebar: one card per live character, plus the entry points for the
// New Character and Journals panels. Cards open the profile panel.

export function renderSidebar(app: App): HTMLElement {
  const cards = el("div", { className: "sidebar-cards", dataset: { testid: "sidebar-cards" } });

  const rebuild = () => {
    replaceChildrenOf(
      cards,
      ...app.session.characters.map((character) =>
        el(
          "button",
          {
            className: "character-card",
            dataset: { testid: "character-card", id: character.id },
            onClick: () => app.openProfile(character.id),
          },
          avatar(app.api, character),
          el("span", { className: "card-name", text: character.name }),
        ),
      ),
    );
  };

  app.session.onChange("characters", rebuild);
  rebuild();

  return el(
    "aside",
    { className: "sidebar" },
    el(
      "div",
      { className: "sidebar-actions" },
      el("button", {
        className: "btn-primary",
        text: app.strings.newCharacter,
        dataset: { testid: "open-new-character" },
        onClick: () => app.openNewCharacter(),
      }),
      el("button", {
        text: app.strings.journals,
        dataset: { testid: "open-journals" },
        onClick: () => app.openJournals(),
      }),
    ),
    el("h2", { className: "sidebar-heading", text: app.strings.characters }),
    cards,
  );
}

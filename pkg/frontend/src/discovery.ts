import { ApiError } from "./api";
import type { App } from "./app";
import { el, replaceChildrenOf } from "./dom";
import type { MiniProfile } from "./types";

// Friends Discovery section of a profile's Connection tab. The phrase is
// validated client-side before any request leaves; provider failures come
// back as a retriable card with the raw excerpt tucked behind a toggle.

export function renderDiscoverySection(
  app: App,
  characterId: string,
  onAdopted: () => void,
): HTMLElement {
  const { strings } = app;
  const phraseInput = el("input", {
    type: "text",
    placeholder: strings.discoveryPhrasePlaceholder,
    dataset: { testid: "discovery-phrase" },
  });
  const validationNote = el("p", {
    className: "inline-error hidden",
    dataset: { testid: "discovery-validation", ephemeral: "1" },
  });
  const cardsBox = el("div", {
    className: "discovery-cards",
    dataset: { testid: "discovery-cards", ephemeral: "1" },
  });
  let inFlight = false;

  const run = async () => {
    if (inFlight) return;
    validationNote.classList.add("hidden");
    const phrase = phraseInput.value.trim();
    if (!phrase) {
      validationNote.textContent = strings.emptyPhrase;
      validationNote.classList.remove("hidden");
      return;
    }
    inFlight = true;
    replaceChildrenOf(cardsBox, el("p", { className: "muted", text: `${strings.loading}…` }));
    try {
      const result = await app.api.discover(app.session.projectId, characterId, phrase);
      replaceChildrenOf(
        cardsBox,
        ...result.profiles.map((profile) => profileCard(app, characterId, profile, onAdopted)),
      );
    } catch (err) {
      replaceChildrenOf(cardsBox, errorCard(app, err, run));
    } finally {
      inFlight = false;
    }
  };

  return el(
    "section",
    { className: "discovery-section" },
    el("h4", { text: strings.discovery }),
    el(
      "div",
      { className: "discovery-controls", dataset: { ephemeral: "1" } },
      phraseInput,
      el("button", {
        text: strings.discover,
        dataset: { testid: "discovery-run" },
        onClick: () => void run(),
      }),
    ),
    validationNote,
    cardsBox,
  );
}

function profileCard(
  app: App,
  characterId: string,
  profile: MiniProfile,
  onAdopted: () => void,
): HTMLElement {
  const { strings } = app;
  const adoptButton = el("button", {
    className: "btn-primary",
    text: strings.adopt,
    dataset: { testid: "adopt" },
  });
  adoptButton.addEventListener("click", () => {
    adoptButton.disabled = true;
    void app.api
      .adopt(app.session.projectId, characterId, profile)
      .then(async () => {
        adoptButton.textContent = strings.adopted;
        await app.session.refreshCharacters();
        onAdopted();
      })
      .catch((err: unknown) => {
        adoptButton.disabled = false;
        app.toasts.show(errorLine(err, strings.requestFailed), "error");
      });
  });

  const field = (label: string, value: string) =>
    el(
      "p",
      { className: "mini-field" },
      el("span", { className: "mini-label", text: `${label}: ` }),
      el("span", { text: value }),
    );

  return el(
    "article",
    { className: "discovery-card", dataset: { testid: "discovery-card" } },
    el("h5", { className: "mini-name", text: profile.name }),
    field(strings.introduction, profile.introduction),
    field(strings.backstory, profile.backstory),
    field(strings.myRelationship, profile.my_relationship),
    field(strings.yourRelationship, profile.your_relationship),
    adoptButton,
  );
}

function errorCard(app: App, err: unknown, retry: () => Promise<void>): HTMLElement {
  const { strings } = app;
  const card = el(
    "article",
    { className: "discovery-card discovery-error", dataset: { testid: "discovery-error" } },
    el("p", { text: `${strings.discoveryFailed} ${errorLine(err, strings.requestFailed)}` }),
  );
  if (err instanceof ApiError && err.debugExcerpt) {
    card.append(
      el(
        "details",
        { dataset: { testid: "discovery-error-details" } },
        el("summary", { text: strings.showDetails }),
        el("pre", { className: "raw-excerpt", text: err.debugExcerpt }),
      ),
    );
  }
  card.append(
    el("button", {
      text: strings.retry,
      dataset: { testid: "discovery-retry" },
      onClick: () => void retry(),
    }),
  );
  return card;
}

export function errorLine(err: unknown, fallback: string): string {
  if (err instanceof ApiError) return `${err.code}: ${err.message}`;
  if (err instanceof Error) return err.message;
  return fallback;
}

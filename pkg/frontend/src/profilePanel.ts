import { ApiError } from "./api";
import type { App } from "./app";
import { avatar } from "./avatar";
import { renderDiscoverySection, errorLine } from "./discovery";
import { el, replaceChildrenOf } from "./dom";
import type { PanelHandle } from "./panels";
import type { CharacterDoc, RelationshipDoc, ThreadDoc } from "./types";

type TabName = "about" | "connection" | "journals" | "comments";

// Profile panel with About / Connection / Journals History / Comments
// History tabs. The character document is fetched once on open; each tab
// body is built lazily on first activation and kept, so switching tabs is
// purely client-side. Mutations refresh only the tab they touched.

export function openProfilePanel(app: App, characterId: string): void {
  const existing = app.workspace.find("profile", characterId);
  if (existing) {
    app.workspace.focus(existing);
    return;
  }
  const handle = app.workspace.open("profile", characterId, "…");
  void loadProfile(app, handle, characterId);
}

async function loadProfile(app: App, handle: PanelHandle, characterId: string): Promise<void> {
  const { strings } = app;
  let character: CharacterDoc;
  try {
    character = await app.api.character(app.session.projectId, characterId);
  } catch (err) {
    handle.setTitle(strings.characterNotFound);
    if (err instanceof ApiError && err.status === 404) {
      replaceChildrenOf(
        handle.body,
        el("p", {
          className: "not-found",
          text: strings.characterNotFound,
          dataset: { testid: "profile-not-found" },
        }),
      );
    } else {
      replaceChildrenOf(handle.body, el("p", { text: errorLine(err, strings.requestFailed) }));
    }
    return;
  }

  handle.setTitle(character.name);
  const view = new ProfileView(app, handle, character);
  view.mount();
}

class ProfileView {
  private readonly app: App;
  private readonly handle: PanelHandle;
  private character: CharacterDoc;
  private readonly tabBodies = new Map<TabName, HTMLElement>();
  private readonly tabButtons = new Map<TabName, HTMLButtonElement>();
  private readonly tabContent = el("div", { className: "tab-content" });
  private activeTab: TabName = "about";

  constructor(app: App, handle: PanelHandle, character: CharacterDoc) {
    this.app = app;
    this.handle = handle;
    this.character = character;
  }

  mount(): void {
    const { strings } = this.app;
    const tabs: [TabName, string][] = [
      ["about", strings.tabAbout],
      ["connection", strings.tabConnection],
      ["journals", strings.tabJournalsHistory],
      ["comments", strings.tabCommentsHistory],
    ];
    const tabBar = el("nav", { className: "tab-bar" });
    for (const [name, label] of tabs) {
      const button = el("button", {
        className: "tab-button",
        text: label,
        dataset: { testid: `tab-${name}` },
        onClick: () => this.activate(name),
      });
      this.tabButtons.set(name, button);
      tabBar.append(button);
    }
    replaceChildrenOf(this.handle.body, tabBar, this.tabContent);
    this.activate("about");
  }

  private activate(name: TabName): void {
    this.activeTab = name;
    for (const [tab, button] of this.tabButtons) {
      button.classList.toggle("tab-active", tab === name);
    }
    let body = this.tabBodies.get(name);
    if (!body) {
      body = el("div", { className: `tab-pane tab-${name}` });
      this.tabBodies.set(name, body);
      this.buildTab(name, body);
    }
    replaceChildrenOf(this.tabContent, body);
  }

  private buildTab(name: TabName, body: HTMLElement): void {
    if (name === "about") this.buildAbout(body);
    if (name === "connection") void this.buildConnection(body);
    if (name === "journals") void this.buildJournalsHistory(body);
    if (name === "comments") void this.buildCommentsHistory(body);
  }

  private async reloadCharacter(): Promise<void> {
    this.character = await this.app.api.character(this.app.session.projectId, this.character.id);
    this.handle.setTitle(this.character.name);
    const about = this.tabBodies.get("about");
    if (about) this.buildAbout(about);
  }

  // --- About ---

  private buildAbout(body: HTMLElement): void {
    const { strings } = this.app;
    const api = this.app.api;
    const projectId = this.app.session.projectId;
    const character = this.character;

    const nameInput = el("input", {
      type: "text",
      value: character.name,
      dataset: { testid: "about-name" },
    });
    nameInput.addEventListener("change", () => {
      const next = nameInput.value.trim();
      if (!next || next === this.character.name) return;
      void api
        .patchCharacter(projectId, character.id, { name: next })
        .then(async () => {
          await this.app.session.refreshCharacters();
          await this.reloadCharacter();
        })
        .catch((err: unknown) => this.fail(err));
    });

    const attrList = el("div", { className: "attr-list", dataset: { testid: "about-attrs" } });
    character.attributes.forEach((attr, index) => {
      const keyInput = el("input", {
        type: "text",
        value: attr.key,
        dataset: { testid: "attr-key" },
      });
      const valueInput = el("input", {
        type: "text",
        value: attr.value,
        dataset: { testid: "attr-value" },
      });
      const saveEdit = () => {
        const patch: { key?: string; value?: string } = {};
        if (keyInput.value !== attr.key) patch.key = keyInput.value;
        if (valueInput.value !== attr.value) patch.value = valueInput.value;
        if (!Object.keys(patch).length) return;
        void api
          .patchAttribute(projectId, character.id, attr.id, patch)
          .then(() => this.reloadCharacter())
          .catch((err: unknown) => this.fail(err));
      };
      keyInput.addEventListener("change", saveEdit);
      valueInput.addEventListener("change", saveEdit);

      const moveTo = (target: number) => {
        if (target < 0 || target >= character.attributes.length) return;
        const order = character.attributes.map((a) => a.id);
        const [id] = order.splice(index, 1);
        if (!id) return;
        order.splice(target, 0, id);
        void api
          .reorderAttributes(projectId, character.id, order)
          .then(() => this.reloadCharacter())
          .catch((err: unknown) => this.fail(err));
      };

      attrList.append(
        el(
          "div",
          { className: "attr-row", dataset: { id: attr.id } },
          keyInput,
          valueInput,
          el("button", { className: "panel-btn", text: "↑", onClick: () => moveTo(index - 1) }),
          el("button", { className: "panel-btn", text: "↓", onClick: () => moveTo(index + 1) }),
          el("button", {
            className: "panel-btn",
            text: "✕",
            dataset: { testid: "attr-delete" },
            onClick: () => {
              void this.app.confirm.ask(`${strings.delete}: ${attr.key}?`).then((ok) => {
                if (!ok) return;
                void api
                  .deleteAttribute(projectId, character.id, attr.id)
                  .then(() => this.reloadCharacter())
                  .catch((err: unknown) => this.fail(err));
              });
            },
          }),
        ),
      );
    });

    const newKey = el("input", {
      type: "text",
      placeholder: strings.keyPlaceholder,
      dataset: { testid: "about-new-key" },
    });
    const newValue = el("input", {
      type: "text",
      placeholder: strings.valuePlaceholder,
      dataset: { testid: "about-new-value" },
    });

    replaceChildrenOf(
      body,
      el("div", { className: "about-portrait" }, avatar(api, character)),
      el("label", { className: "field-label", text: strings.name }),
      nameInput,
      el("label", { className: "field-label", text: strings.attributes }),
      attrList,
      el(
        "div",
        { className: "attr-row" },
        newKey,
        newValue,
        el("button", {
          text: strings.addAttribute,
          dataset: { testid: "about-add-attr" },
          onClick: () => {
            if (!newKey.value.trim()) return;
            void api
              .addAttribute(projectId, character.id, newKey.value.trim(), newValue.value)
              .then(() => this.reloadCharacter())
              .catch((err: unknown) => this.fail(err));
          },
        }),
      ),
      el("button", {
        className: "btn-danger",
        text: strings.deleteCharacter,
        dataset: { testid: "delete-character" },
        onClick: () => {
          void this.app.confirm
            .ask(`${strings.deleteCharacter}: ${this.character.name}?`)
            .then(async (ok) => {
              if (!ok) return;
              try {
                await api.deleteCharacter(projectId, this.character.id);
                await this.app.session.refreshCharacters();
                this.handle.close();
              } catch (err) {
                this.fail(err);
              }
            });
        },
      }),
    );
  }

  // --- Connection ---

  private async buildConnection(body: HTMLElement): Promise<void> {
    const me = this.character.id;
    body.dataset.testid = "connection-tab";

    // The edge lists rebuild after every follow change; the discovery section
    // keeps its instance so candidate cards survive adopting one of them.
    const edges = el("div", { className: "edge-area" });
    const refreshEdges = () => void this.buildEdges(edges);
    replaceChildrenOf(body, edges, renderDiscoverySection(this.app, me, refreshEdges));
    await this.buildEdges(edges);
  }

  private async buildEdges(body: HTMLElement): Promise<void> {
    const { strings } = this.app;
    const api = this.app.api;
    const projectId = this.app.session.projectId;
    const me = this.character.id;

    replaceChildrenOf(body, el("p", { className: "muted", text: `${strings.loading}…` }));

    let following: RelationshipDoc[];
    let followers: RelationshipDoc[];
    try {
      [following, followers] = await Promise.all([
        api.relationships(projectId, { owner: me }),
        api.relationships(projectId, { target: me }),
      ]);
    } catch (err) {
      replaceChildrenOf(body, el("p", { text: errorLine(err, strings.requestFailed) }));
      return;
    }

    const refresh = () => void this.buildEdges(body);
    const followingBox = el("div", { className: "edge-list", dataset: { testid: "following-list" } });
    for (const rel of following) {
      followingBox.append(this.edgeRow(rel, refresh));
    }

    const followerBox = el("div", { className: "edge-list muted" });
    for (const rel of followers) {
      const owner = this.app.session.characterName(rel.owner, strings.removedCharacter);
      followerBox.append(
        el(
          "p",
          { className: "follower-row", dataset: { testid: "follower-row" } },
          el("span", { text: owner }),
          rel.description ? el("span", { className: "muted", text: ` — ${rel.description}` }) : null,
        ),
      );
    }

    const candidates = this.app.session.characters.filter(
      (c) => c.id !== me && !following.some((rel) => rel.target === c.id),
    );
    const targetSelect = el("select", { dataset: { testid: "follow-target" } });
    for (const candidate of candidates) {
      targetSelect.append(el("option", { value: candidate.id, text: candidate.name }));
    }
    const descriptionInput = el("input", {
      type: "text",
      placeholder: strings.relationshipPlaceholder,
      dataset: { testid: "follow-description" },
    });
    const followControls = el(
      "div",
      { className: "follow-controls" },
      targetSelect,
      descriptionInput,
      el("button", {
        text: strings.follow,
        disabled: candidates.length === 0,
        dataset: { testid: "follow-submit" },
        onClick: () => {
          if (!targetSelect.value) return;
          void api
            .follow(projectId, me, targetSelect.value, descriptionInput.value)
            .then(refresh)
            .catch((err: unknown) => this.fail(err));
        },
      }),
    );

    replaceChildrenOf(
      body,
      el("h4", { text: strings.following }),
      followingBox,
      followControls,
      el("h4", { text: strings.followers }),
      followerBox,
    );
  }

  private edgeRow(rel: RelationshipDoc, refresh: () => void): HTMLElement {
    const { strings } = this.app;
    const api = this.app.api;
    const projectId = this.app.session.projectId;
    const target = this.app.session.character(rel.target);
    const targetName = target?.name ?? strings.removedCharacter;

    const descriptionInput = el("input", {
      type: "text",
      value: rel.description,
      placeholder: strings.relationshipPlaceholder,
      dataset: { testid: "edge-description" },
    });
    descriptionInput.addEventListener("change", () => {
      void api
        .setRelationshipDescription(projectId, rel.id, descriptionInput.value)
        .catch((err: unknown) => this.fail(err));
    });

    const knowledgeBox = el("div", { className: "knowledge-box" });
    const granted = new Set(rel.knowledge);
    if (!target || target.attributes.length === 0) {
      knowledgeBox.append(el("span", { className: "muted", text: strings.noAttributesToShare }));
    } else {
      for (const attr of target.attributes) {
        const checkbox = el("input", {
          type: "checkbox",
          checked: granted.has(attr.id),
          dataset: { testid: "knowledge-grant", attr: attr.id },
        });
        checkbox.addEventListener("change", () => {
          if (checkbox.checked) {
            granted.add(attr.id);
          } else {
            granted.delete(attr.id);
          }
          void api
            .setKnowledge(projectId, rel.id, [...granted])
            .catch((err: unknown) => this.fail(err));
        });
        knowledgeBox.append(el("label", { className: "knowledge-item" }, checkbox, attr.key));
      }
    }

    return el(
      "div",
      { className: "edge-row", dataset: { testid: "edge-row", target: rel.target } },
      el(
        "div",
        { className: "edge-head" },
        target ? avatar(api, target) : null,
        el("span", { className: "edge-target", text: targetName }),
        el("button", {
          className: "panel-btn",
          text: strings.unfollow,
          dataset: { testid: "unfollow" },
          onClick: () => {
            void this.app.confirm.ask(`${strings.unfollow}: ${targetName}?`).then((ok) => {
              if (!ok) return;
              void api
                .unfollow(projectId, rel.id)
                .then(refresh)
                .catch((err: unknown) => this.fail(err));
            });
          },
        }),
      ),
      descriptionInput,
      el("div", { className: "knowledge-field" },
        el("span", { className: "mini-label", text: `${strings.sharedKnowledge}: ` }),
        knowledgeBox,
      ),
    );
  }

  // --- Journals History ---

  private async buildJournalsHistory(body: HTMLElement): Promise<void> {
    const { strings } = this.app;
    body.dataset.testid = "journals-history";
    replaceChildrenOf(body, el("p", { className: "muted", text: `${strings.loading}…` }));
    try {
      const entries = await this.app.api.journalsByAuthor(
        this.app.session.projectId,
        this.character.id,
      );
      if (!entries.length) {
        replaceChildrenOf(body, el("p", { className: "muted", text: strings.noJournals }));
        return;
      }
      replaceChildrenOf(
        body,
        ...entries.map((entry) =>
          el(
            "article",
            { className: "history-entry", dataset: { testid: "history-journal", id: entry.id } },
            el("p", { className: "entry-theme", text: entry.theme }),
            el("p", { className: "entry-content", text: entry.content }),
            provenanceBadge(this.app, entry.provenance),
          ),
        ),
      );
    } catch (err) {
      replaceChildrenOf(body, el("p", { text: errorLine(err, strings.requestFailed) }));
    }
  }

  // --- Comments History ---

  private async buildCommentsHistory(body: HTMLElement): Promise<void> {
    const { strings } = this.app;
    body.dataset.testid = "comments-history";
    replaceChildrenOf(body, el("p", { className: "muted", text: `${strings.loading}…` }));
    try {
      const threads = await this.app.api.threadsByParticipant(
        this.app.session.projectId,
        this.character.id,
      );
      if (!threads.length) {
        replaceChildrenOf(body, el("p", { className: "muted", text: strings.noThreads }));
        return;
      }
      replaceChildrenOf(body, ...threads.map((thread) => this.threadSummary(thread)));
    } catch (err) {
      replaceChildrenOf(body, el("p", { text: errorLine(err, strings.requestFailed) }));
    }
  }

  private threadSummary(thread: ThreadDoc): HTMLElement {
    const { strings } = this.app;
    const box = el("article", {
      className: "history-entry",
      dataset: { testid: "history-thread", id: thread.id },
    });
    for (const comment of thread.comments) {
      box.append(
        el(
          "p",
          { className: "history-comment" },
          el("span", {
            className: "mini-label",
            text: `${this.app.session.characterName(comment.author, strings.removedCharacter)}: `,
          }),
          el("span", { text: comment.content }),
        ),
      );
    }
    return box;
  }

  private fail(err: unknown): void {
    this.app.toasts.show(errorLine(err, this.app.strings.requestFailed), "error");
  }
}

export function provenanceBadge(app: App, provenance: string): HTMLElement {
  const { strings } = app;
  const label =
    provenance === "generated"
      ? strings.provenanceGenerated
      : provenance === "edited"
        ? strings.provenanceEdited
        : strings.provenanceManual;
  return el("span", {
    className: `badge badge-${provenance}`,
    text: label,
    dataset: { testid: "provenance", provenance },
  });
}

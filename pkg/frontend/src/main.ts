import { StudioApi } from "./api";
import type { App } from "./app";
import { ConfirmDialog } from "./confirm";
import type { StudioConfig } from "./config";
import { readConfig } from "./config";
import { errorLine } from "./discovery";
import { el, replaceChildrenOf } from "./dom";
import { openJournalsPanel } from "./journalsPanel";
import { openNewCharacterPanel } from "./newCharacterPanel";
import { PanelWorkspace } from "./panels";
import { openProfilePanel } from "./profilePanel";
import { Session } from "./session";
import { renderSidebar } from "./sidebar";
import { chromeStrings } from "./strings";
import { ToastRegion } from "./toast";
import type { ProjectMeta } from "./types";
import "./styles.css";

// Boot sequence: project gate first, then the workspace shell. All state
// lives on the instances created here; a reload starts from nothing but the
// server.

export async function bootApp(root: HTMLElement, config: StudioConfig): Promise<void> {
  const api = new StudioApi(config);
  const strings = chromeStrings(config.uiLanguage);
  root.classList.add("studio");

  const enter = async (project: ProjectMeta) => {
    const session = new Session(api, project);
    await session.refreshCharacters();

    const workspace = new PanelWorkspace(strings);
    const toasts = new ToastRegion();
    const confirm = new ConfirmDialog(strings);
    const app: App = {
      api,
      session,
      strings,
      workspace,
      toasts,
      confirm,
      openProfile: (characterId) => openProfilePanel(app, characterId),
      openNewCharacter: () => openNewCharacterPanel(app),
      openJournals: () => openJournalsPanel(app),
    };

    replaceChildrenOf(
      root,
      el(
        "header",
        { className: "top-bar" },
        el("span", { className: "app-title", text: strings.appTitle }),
        el("span", { className: "project-name", dataset: { testid: "project-name" }, text: project.name }),
      ),
      el("div", { className: "workspace" }, workspace.element, renderSidebar(app)),
      toasts.element,
      confirm.element,
    );
  };

  const gate = async () => {
    let projects: ProjectMeta[];
    try {
      projects = await api.listProjects();
    } catch (err) {
      replaceChildrenOf(
        root,
        el("p", { className: "boot-error", text: errorLine(err, strings.requestFailed) }),
      );
      return;
    }

    const nameInput = el("input", {
      type: "text",
      placeholder: strings.projectNamePlaceholder,
      dataset: { testid: "project-name-input" },
    });
    const createNote = el("p", { className: "inline-error hidden", dataset: { ephemeral: "1" } });
    const picker = el(
      "div",
      { className: "project-gate", dataset: { testid: "project-gate" } },
      el("h1", { text: strings.appTitle }),
      el("h2", { text: strings.projects }),
      el(
        "ul",
        { className: "project-list" },
        ...projects.map((project) =>
          el(
            "li",
            {},
            el("button", {
              text: `${project.name}`,
              dataset: { testid: "project-open", id: project.id },
              onClick: () => void enter(project),
            }),
          ),
        ),
      ),
      nameInput,
      el("button", {
        text: strings.createProject,
        dataset: { testid: "project-create" },
        onClick: () => {
          const name = nameInput.value.trim();
          if (!name) return;
          void api
            .createProject(name)
            .then((project) => enter(project))
            .catch((err: unknown) => {
              createNote.textContent = errorLine(err, strings.requestFailed);
              createNote.classList.remove("hidden");
            });
        },
      }),
      createNote,
    );
    replaceChildrenOf(root, picker);
  };

  await gate();
}

const mountPoint = typeof document !== "undefined" ? document.getElementById("studio-root") : null;
if (mountPoint) {
  void bootApp(mountPoint, readConfig());
}

import { StudioApi } from "../src/api";
import type { FetchFn } from "../src/config";
import { bootApp } from "../src/main";
import type { CharacterDoc, ProjectMeta } from "../src/types";

export interface SeededCast {
  api: StudioApi;
  project: ProjectMeta;
  binggu: CharacterDoc;
  chorong: CharacterDoc;
}

// Puts a small cast on the server directly, for suites that exercise one
// surface and do not want to walk the creation panels first.
export async function seedCast(fetchFn: FetchFn): Promise<SeededCast> {
  const api = new StudioApi({ serverUrl: "", uiLanguage: "en", apiToken: "", fetchFn });
  const project = await api.createProject("Cast Lab");
  const binggu = await api.createCharacter(project.id, {
    name: "Binggu",
    attributes: [
      { key: "personality", value: "ice-cold but soft" },
      { key: "speech style", value: "short sentences" },
    ],
  });
  const chorong = await api.createCharacter(project.id, {
    name: "Chorong",
    attributes: [{ key: "personality", value: "sunny" }],
  });
  return { api, project, binggu, chorong };
}

// DOM-level driver for the app plus a content snapshot that captures exactly
// what a reload must reproduce: domain text, stable ids, field values, and
// provenance badges, with ephemeral chrome (toasts, dialogs, composer inputs,
// transient cards) excluded.

export class Harness {
  readonly root: HTMLElement;

  constructor(root: HTMLElement) {
    this.root = root;
  }

  q(testid: string): HTMLElement {
    const node = this.maybe(testid);
    if (!node) throw new Error(`no element with data-testid=${testid}`);
    return node;
  }

  maybe(testid: string): HTMLElement | null {
    return this.root.querySelector(`[data-testid="${testid}"]`);
  }

  qa(testid: string): HTMLElement[] {
    return [...this.root.querySelectorAll(`[data-testid="${testid}"]`)] as HTMLElement[];
  }

  byId(testid: string, id: string): HTMLElement {
    const node = this.qa(testid).find((candidate) => candidate.dataset.id === id);
    if (!node) throw new Error(`no ${testid} with data-id=${id}`);
    return node;
  }

  click(target: HTMLElement | string): void {
    const node = typeof target === "string" ? this.q(target) : target;
    (node as HTMLElement & { click: () => void }).click();
  }

  type(target: HTMLElement | string, value: string): void {
    const node = typeof target === "string" ? this.q(target) : target;
    (node as HTMLInputElement).value = value;
    node.dispatchEvent(new Event("input", { bubbles: true }));
    node.dispatchEvent(new Event("change", { bubbles: true }));
  }

  select(target: HTMLElement | string, value: string): void {
    const node = (typeof target === "string" ? this.q(target) : target) as HTMLSelectElement;
    node.value = value;
    node.dispatchEvent(new Event("change", { bubbles: true }));
  }

  text(testid: string): string {
    return this.q(testid).textContent ?? "";
  }

  destroy(): void {
    this.root.remove();
  }
}

export async function boot(fetchFn: FetchFn, uiLanguage: "en" | "ko" = "en"): Promise<Harness> {
  const container = document.createElement("div");
  document.body.append(container);
  await bootApp(container, { serverUrl: "", uiLanguage, apiToken: "", fetchFn });
  return new Harness(container);
}

export async function bootIntoProject(
  fetchFn: FetchFn,
  projectName: string,
): Promise<Harness> {
  const h = await boot(fetchFn);
  const existing = h
    .qa("project-open")
    .find((button) => button.textContent === projectName);
  if (existing) {
    h.click(existing);
  } else {
    h.type("project-name-input", projectName);
    h.click("project-create");
  }
  await until(() => h.maybe("project-name") !== null, "workspace did not mount");
  return h;
}

export function sleep(ms: number): Promise<void> {
  return new Promise((resolve) => setTimeout(resolve, ms));
}

export async function flush(): Promise<void> {
  for (let i = 0; i < 8; i += 1) await Promise.resolve();
  await sleep(0);
}

export async function until(
  condition: () => boolean,
  what = "condition",
  timeoutMs = 3000,
): Promise<void> {
  const deadline = Date.now() + timeoutMs;
  while (Date.now() < deadline) {
    if (condition()) return;
    await sleep(5);
  }
  throw new Error(`timed out waiting for ${what}`);
}

const SNAPSHOT_DATA_KEYS = [
  "testid",
  "id",
  "kind",
  "subject",
  "author",
  "target",
  "provenance",
  "journal",
  "attr",
];

function snapshotNode(node: Node, depth: number, lines: string[]): void {
  if (node.nodeType === Node.TEXT_NODE) {
    const text = (node.textContent ?? "").replace(/\s+/g, " ").trim();
    if (text) lines.push(`${"  ".repeat(depth)}"${text}"`);
    return;
  }
  if (!(node instanceof HTMLElement)) return;
  if (node.dataset.ephemeral === "1") return;
  if (node.tagName === "SCRIPT" || node.tagName === "STYLE") return;

  const bits: string[] = [node.tagName.toLowerCase()];
  for (const key of SNAPSHOT_DATA_KEYS) {
    const value = node.dataset[key];
    if (value !== undefined) bits.push(`${key}=${value}`);
  }
  if (node instanceof HTMLInputElement) {
    if (node.type === "checkbox") {
      bits.push(`checked=${node.checked}`);
    } else if (node.type !== "file") {
      bits.push(`value=${JSON.stringify(node.value)}`);
    }
  }
  if (node instanceof HTMLTextAreaElement) bits.push(`value=${JSON.stringify(node.value)}`);
  if (node instanceof HTMLSelectElement) bits.push(`value=${JSON.stringify(node.value)}`);
  if (node instanceof HTMLImageElement) bits.push(`src=${node.getAttribute("src") ?? ""}`);

  lines.push(`${"  ".repeat(depth)}<${bits.join(" ")}>`);
  for (const child of node.childNodes) snapshotNode(child, depth + 1, lines);
}

export function contentSnapshot(root: HTMLElement): string {
  const lines: string[] = [];
  snapshotNode(root, 0, lines);
  return lines.join("\n");
}

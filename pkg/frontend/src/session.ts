import type { StudioApi } from "./api";
import type { CharacterDoc, ProjectMeta } from "./types";

export type ChangeTopic = "characters" | "journals";

// Session cache for the open project. Nothing here survives a reload; every
// datum is refetched from the server, which is what keeps the rendered view
// reproducible from server state alone.

export class Session {
  readonly api: StudioApi;
  readonly project: ProjectMeta;
  private cast: CharacterDoc[] = [];
  private readonly listeners = new Map<ChangeTopic, Set<() => void>>();

  constructor(api: StudioApi, project: ProjectMeta) {
    this.api = api;
    this.project = project;
  }

  get projectId(): string {
    return this.project.id;
  }

  get characters(): CharacterDoc[] {
    return this.cast;
  }

  character(id: string): CharacterDoc | undefined {
    return this.cast.find((c) => c.id === id);
  }

  characterName(id: string, fallback: string): string {
    return this.character(id)?.name ?? fallback;
  }

  async refreshCharacters(): Promise<void> {
    this.cast = await this.api.characters(this.projectId);
    this.emit("characters");
  }

  onChange(topic: ChangeTopic, listener: () => void): () => void {
    let bucket = this.listeners.get(topic);
    if (!bucket) {
      bucket = new Set();
      this.listeners.set(topic, bucket);
    }
    bucket.add(listener);
    return () => bucket.delete(listener);
  }

  emit(topic: ChangeTopic): void {
    for (const listener of this.listeners.get(topic) ?? []) listener();
  }
}

import type { FetchFn, StudioConfig } from "./config";
import type {
  AdoptResponse,
  CharacterDoc,
  CommentBody,
  CommentDoc,
  CommentResponse,
  DiscoverResponse,
  GenerateJournalsResponse,
  HealthResponse,
  JournalDoc,
  MiniProfile,
  NewCharacterBody,
  ProjectMeta,
  RelationshipDoc,
  ThreadDoc,
} from "./types";

export class ApiError extends Error {
  readonly status: number;
  readonly code: string;
  readonly debugExcerpt: string | null;

  constructor(status: number, code: string, message: string, debugExcerpt: string | null = null) {
    super(message);
    this.name = "ApiError";
    this.status = status;
    this.code = code;
    this.debugExcerpt = debugExcerpt;
  }
}

interface ErrorEnvelope {
  error?: { code?: string; message?: string; debug?: { raw_excerpt?: string } };
}

async function toApiError(response: Response): Promise<ApiError> {
  let envelope: ErrorEnvelope = {};
  try {
    envelope = (await response.json()) as ErrorEnvelope;
  } catch {
    // Non-JSON body; keep the transport-level facts.
  }
  const err = envelope.error ?? {};
  return new ApiError(
    response.status,
    err.code ?? "HttpError",
    err.message ?? `HTTP ${response.status}`,
    err.debug?.raw_excerpt ?? null,
  );
}

export class StudioApi {
  private readonly base: string;
  private readonly token: string;
  private readonly fetchFn: FetchFn;

  constructor(config: StudioConfig) {
    this.base = config.serverUrl;
    this.token = config.apiToken;
    if (config.fetchFn) {
      this.fetchFn = config.fetchFn;
    } else if (typeof window !== "undefined" && typeof window.fetch === "function") {
      this.fetchFn = window.fetch.bind(window) as FetchFn;
    } else {
      this.fetchFn = fetch as FetchFn;
    }
  }

  imageUrl(ref: string): string {
    return `${this.base}/api/images/${ref}`;
  }

  private headers(json: boolean): Record<string, string> {
    const headers: Record<string, string> = {};
    if (json) headers["Content-Type"] = "application/json";
    if (this.token) headers["Authorization"] = `Bearer ${this.token}`;
    return headers;
  }

  private async request<T>(method: string, path: string, body?: unknown): Promise<T> {
    const init: RequestInit = { method, headers: this.headers(body !== undefined) };
    if (body !== undefined) init.body = JSON.stringify(body);
    const response = await this.fetchFn(this.base + path, init);
    if (!response.ok) throw await toApiError(response);
    return (await response.json()) as T;
  }

  // --- health and projects ---

  health(): Promise<HealthResponse> {
    return this.request("GET", "/health");
  }

  async listProjects(): Promise<ProjectMeta[]> {
    const data = await this.request<{ projects: ProjectMeta[] }>("GET", "/api/projects");
    return data.projects;
  }

  createProject(name: string): Promise<ProjectMeta> {
    return this.request("POST", "/api/projects", { name });
  }

  project(projectId: string): Promise<ProjectMeta> {
    return this.request("GET", `/api/projects/${projectId}`);
  }

  // --- characters ---

  async characters(projectId: string): Promise<CharacterDoc[]> {
    const data = await this.request<{ characters: CharacterDoc[] }>(
      "GET",
      `/api/projects/${projectId}/characters`,
    );
    return data.characters;
  }

  character(projectId: string, characterId: string): Promise<CharacterDoc> {
    return this.request("GET", `/api/projects/${projectId}/characters/${characterId}`);
  }

  createCharacter(projectId: string, body: NewCharacterBody): Promise<CharacterDoc> {
    return this.request("POST", `/api/projects/${projectId}/characters`, body);
  }

  patchCharacter(
    projectId: string,
    characterId: string,
    patch: { name?: string; portrait?: string; clear_portrait?: boolean },
  ): Promise<CharacterDoc> {
    return this.request("PATCH", `/api/projects/${projectId}/characters/${characterId}`, patch);
  }

  deleteCharacter(projectId: string, characterId: string): Promise<{ deleted: string }> {
    return this.request("DELETE", `/api/projects/${projectId}/characters/${characterId}`);
  }

  addAttribute(
    projectId: string,
    characterId: string,
    key: string,
    value: string,
  ): Promise<CharacterDoc> {
    return this.request(
      "POST",
      `/api/projects/${projectId}/characters/${characterId}/attributes`,
      { key, value },
    );
  }

  patchAttribute(
    projectId: string,
    characterId: string,
    attributeId: string,
    patch: { key?: string; value?: string },
  ): Promise<CharacterDoc> {
    return this.request(
      "PATCH",
      `/api/projects/${projectId}/characters/${characterId}/attributes/${attributeId}`,
      patch,
    );
  }

  deleteAttribute(
    projectId: string,
    characterId: string,
    attributeId: string,
  ): Promise<CharacterDoc> {
    return this.request(
      "DELETE",
      `/api/projects/${projectId}/characters/${characterId}/attributes/${attributeId}`,
    );
  }

  reorderAttributes(
    projectId: string,
    characterId: string,
    order: string[],
  ): Promise<CharacterDoc> {
    return this.request(
      "PUT",
      `/api/projects/${projectId}/characters/${characterId}/attributes/order`,
      { order },
    );
  }

  // --- relationships ---

  async relationships(
    projectId: string,
    filter: { owner?: string; target?: string } = {},
  ): Promise<RelationshipDoc[]> {
    const params = new URLSearchParams();
    if (filter.owner) params.set("owner", filter.owner);
    if (filter.target) params.set("target", filter.target);
    const query = params.size ? `?${params.toString()}` : "";
    const data = await this.request<{ relationships: RelationshipDoc[] }>(
      "GET",
      `/api/projects/${projectId}/relationships${query}`,
    );
    return data.relationships;
  }

  follow(
    projectId: string,
    owner: string,
    target: string,
    description: string,
  ): Promise<RelationshipDoc> {
    return this.request("POST", `/api/projects/${projectId}/relationships`, {
      owner,
      target,
      description,
    });
  }

  setRelationshipDescription(
    projectId: string,
    relationshipId: string,
    description: string,
  ): Promise<RelationshipDoc> {
    return this.request("PATCH", `/api/projects/${projectId}/relationships/${relationshipId}`, {
      description,
    });
  }

  setKnowledge(
    projectId: string,
    relationshipId: string,
    grants: string[],
  ): Promise<RelationshipDoc> {
    return this.request(
      "PUT",
      `/api/projects/${projectId}/relationships/${relationshipId}/knowledge`,
      { grants },
    );
  }

  unfollow(projectId: string, relationshipId: string): Promise<{ deleted: string }> {
    return this.request("DELETE", `/api/projects/${projectId}/relationships/${relationshipId}`);
  }

  // --- generation ---

  discover(projectId: string, characterId: string, phrase: string): Promise<DiscoverResponse> {
    return this.request(
      "POST",
      `/api/projects/${projectId}/characters/${characterId}/discover`,
      { phrase },
    );
  }

  adopt(projectId: string, characterId: string, profile: MiniProfile): Promise<AdoptResponse> {
    return this.request(
      "POST",
      `/api/projects/${projectId}/characters/${characterId}/adopt`,
      profile,
    );
  }

  generateJournals(
    projectId: string,
    authorIds: string[],
    theme: string,
  ): Promise<GenerateJournalsResponse> {
    return this.request("POST", `/api/projects/${projectId}/journals/generate`, {
      author_ids: authorIds,
      theme,
    });
  }

  // --- journals ---

  async journals(projectId: string): Promise<JournalDoc[]> {
    const data = await this.request<{ journals: JournalDoc[] }>(
      "GET",
      `/api/projects/${projectId}/journals`,
    );
    return data.journals;
  }

  async journalsByAuthor(projectId: string, characterId: string): Promise<JournalDoc[]> {
    const data = await this.request<{ journals: JournalDoc[] }>(
      "GET",
      `/api/projects/${projectId}/characters/${characterId}/journals`,
    );
    return data.journals;
  }

  journal(projectId: string, journalId: string): Promise<JournalDoc> {
    return this.request("GET", `/api/projects/${projectId}/journals/${journalId}`);
  }

  addJournal(
    projectId: string,
    authorId: string,
    theme: string,
    content: string,
  ): Promise<JournalDoc> {
    return this.request("POST", `/api/projects/${projectId}/journals`, {
      author_id: authorId,
      theme,
      content,
    });
  }

  patchJournal(
    projectId: string,
    journalId: string,
    patch: { theme?: string; content?: string },
  ): Promise<JournalDoc> {
    return this.request("PATCH", `/api/projects/${projectId}/journals/${journalId}`, patch);
  }

  deleteJournal(projectId: string, journalId: string): Promise<{ deleted: string }> {
    return this.request("DELETE", `/api/projects/${projectId}/journals/${journalId}`);
  }

  // --- threads and comments ---

  async threadsByJournal(projectId: string, journalId: string): Promise<ThreadDoc[]> {
    const data = await this.request<{ threads: ThreadDoc[] }>(
      "GET",
      `/api/projects/${projectId}/journals/${journalId}/threads`,
    );
    return data.threads;
  }

  async threadsByParticipant(projectId: string, characterId: string): Promise<ThreadDoc[]> {
    const data = await this.request<{ threads: ThreadDoc[] }>(
      "GET",
      `/api/projects/${projectId}/characters/${characterId}/threads`,
    );
    return data.threads;
  }

  thread(projectId: string, threadId: string): Promise<ThreadDoc> {
    return this.request("GET", `/api/projects/${projectId}/threads/${threadId}`);
  }

  postComment(projectId: string, journalId: string, body: CommentBody): Promise<CommentResponse> {
    return this.request("POST", `/api/projects/${projectId}/journals/${journalId}/comments`, body);
  }

  patchComment(projectId: string, commentId: string, content: string): Promise<CommentDoc> {
    return this.request("PATCH", `/api/projects/${projectId}/comments/${commentId}`, { content });
  }

  deleteComment(projectId: string, commentId: string): Promise<{ deleted: string }> {
    return this.request("DELETE", `/api/projects/${projectId}/comments/${commentId}`);
  }

  // --- images ---

  async uploadImage(payload: ArrayBuffer | Uint8Array): Promise<{ ref: string; media_type: string }> {
    const body = payload instanceof Uint8Array ? payload : new Uint8Array(payload);
    const response = await this.fetchFn(`${this.base}/api/images`, {
      method: "POST",
      headers: this.headers(false),
      body: body as unknown as BodyInit,
    });
    if (!response.ok) throw await toApiError(response);
    return (await response.json()) as { ref: string; media_type: string };
  }
}

import type { FetchFn } from "../src/config";
import type {
  AttributeDoc,
  CharacterDoc,
  CommentDoc,
  JournalDoc,
  JournalSlot,
  MiniProfile,
  ProjectMeta,
  RelationshipDoc,
  ThreadDoc,
} from "../src/types";

// In-memory stand-in for the service, implementing exactly the REST surface
// the client consumes with the same envelopes, status codes, and turn rules.
// Fault and gate hooks let tests script provider failures and slow acks.

interface StoredThread {
  id: string;
  journal: string;
  initiator: string;
  created_at: string;
  comments: CommentDoc[];
}

interface FakeProject {
  meta: ProjectMeta;
  characters: Map<string, CharacterDoc>;
  relationships: Map<string, RelationshipDoc>;
  journals: Map<string, JournalDoc>;
  threads: Map<string, StoredThread>;
  counters: Record<string, number>;
}

interface Gate {
  method: string;
  pattern: RegExp;
  block: Promise<void>;
  markSeen: () => void;
}

export interface GateHandle {
  seen: Promise<void>;
  release: () => void;
}

interface RouteResult {
  status: number;
  body: unknown;
}

const ID_PREFIX: Record<string, string> = {
  character: "ch",
  attribute: "at",
  relationship: "rl",
  journal: "jn",
  thread: "th",
  comment: "cm",
  record: "gr",
};

class HttpFailure extends Error {
  readonly status: number;
  readonly code: string;
  readonly rawExcerpt?: string;

  constructor(status: number, code: string, message: string, rawExcerpt?: string) {
    super(message);
    this.status = status;
    this.code = code;
    this.rawExcerpt = rawExcerpt;
  }
}

function fail(status: number, code: string, message: string, rawExcerpt?: string): never {
  throw new HttpFailure(status, code, message, rawExcerpt);
}

export const DISCOVERY_NAMES = ["Metal Monster", "Starlight Witch", "Scrap Metal Prince"];

export class FakeServer {
  readonly hits: string[] = [];
  discoverFailures: { message: string; rawExcerpt: string }[] = [];
  journalFaults = new Map<string, { code: string; message: string }>();

  private readonly projects = new Map<string, FakeProject>();
  private readonly images = new Map<string, Uint8Array>();
  private readonly gates: Gate[] = [];
  private clock = 0;
  private imageCounter = 0;

  readonly fetch: FetchFn = (input, init) => this.handle(input, init);

  // --- test hooks ---

  gate(method: string, pattern: RegExp): GateHandle {
    let release: () => void = () => undefined;
    let markSeen: () => void = () => undefined;
    const block = new Promise<void>((resolve) => {
      release = resolve;
    });
    const seen = new Promise<void>((resolve) => {
      markSeen = resolve;
    });
    this.gates.push({ method, pattern, block, markSeen });
    return { seen, release };
  }

  project(projectId: string): FakeProject {
    const project = this.projects.get(projectId);
    if (!project) throw new Error(`no fake project ${projectId}`);
    return project;
  }

  requestCount(method: string, pattern: RegExp): number {
    return this.hits.filter((hit) => {
      const [m, path] = hit.split(" ", 2);
      return m === method && path !== undefined && pattern.test(path);
    }).length;
  }

  // --- plumbing ---

  private now(): string {
    this.clock += 1;
    return `2026-01-01T00:00:00.${String(this.clock).padStart(6, "0")}Z`;
  }

  private newId(project: FakeProject, kind: string): string {
    const next = (project.counters[kind] ?? 0) + 1;
    project.counters[kind] = next;
    return `${ID_PREFIX[kind]}-${next}`;
  }

  private async handle(input: string, init?: RequestInit): Promise<Response> {
    const method = (init?.method ?? "GET").toUpperCase();
    const url = new URL(input, "http://fake.test");
    const path = url.pathname;
    this.hits.push(`${method} ${path}`);

    for (const [index, gate] of this.gates.entries()) {
      if (gate.method === method && gate.pattern.test(path)) {
        this.gates.splice(index, 1);
        gate.markSeen();
        await gate.block;
        break;
      }
    }

    let payload: unknown;
    const rawBody = init?.body;
    if (typeof rawBody === "string") {
      payload = JSON.parse(rawBody);
    }

    try {
      const result = this.route(method, path, url.searchParams, payload, rawBody);
      if (result.body instanceof Uint8Array) {
        return new Response(result.body as unknown as BodyInit, { status: result.status });
      }
      return json(result.status, result.body);
    } catch (err) {
      if (err instanceof HttpFailure) {
        const body: Record<string, unknown> = { code: err.code, message: err.message };
        if (err.rawExcerpt) body.debug = { raw_excerpt: err.rawExcerpt.slice(0, 800) };
        return json(err.status, { error: body });
      }
      throw err;
    }
  }

  private route(
    method: string,
    path: string,
    query: URLSearchParams,
    body: unknown,
    rawBody: unknown,
  ): RouteResult {
    const b = body as Record<string, never>;
    let m: RegExpExecArray | null;

    if (method === "GET" && path === "/health") {
      return {
        status: 200,
        body: {
          status: "ok",
          store: "ready",
          provider: { kind: "FakeProvider", configured: true },
          output_language: "en",
        },
      };
    }

    if (path === "/api/projects" && method === "GET") {
      return { status: 200, body: { projects: [...this.projects.values()].map((p) => p.meta) } };
    }
    if (path === "/api/projects" && method === "POST") {
      return { status: 201, body: this.createProject(b["name"]) };
    }
    if ((m = /^\/api\/projects\/([^/]+)$/.exec(path)) && method === "GET") {
      return { status: 200, body: this.openProject(m[1]).meta };
    }

    if ((m = /^\/api\/projects\/([^/]+)\/characters$/.exec(path))) {
      const project = this.openProject(m[1]);
      if (method === "GET") {
        return {
          status: 200,
          body: { characters: [...project.characters.values()].filter((c) => !c.deleted) },
        };
      }
      if (method === "POST") return { status: 201, body: this.createCharacter(project, b) };
    }

    if ((m = /^\/api\/projects\/([^/]+)\/characters\/([^/]+)$/.exec(path))) {
      const project = this.openProject(m[1]);
      const id = m[2] ?? "";
      if (method === "GET") return { status: 200, body: this.liveCharacter(project, id) };
      if (method === "PATCH") return { status: 200, body: this.patchCharacter(project, id, b) };
      if (method === "DELETE") {
        this.deleteCharacter(project, id);
        return { status: 200, body: { deleted: id } };
      }
    }

    if ((m = /^\/api\/projects\/([^/]+)\/characters\/([^/]+)\/attributes$/.exec(path)) && method === "POST") {
      const project = this.openProject(m[1]);
      return { status: 201, body: this.addAttribute(project, m[2] ?? "", b) };
    }
    if ((m = /^\/api\/projects\/([^/]+)\/characters\/([^/]+)\/attributes\/order$/.exec(path)) && method === "PUT") {
      const project = this.openProject(m[1]);
      return { status: 200, body: this.reorderAttributes(project, m[2] ?? "", b) };
    }
    if ((m = /^\/api\/projects\/([^/]+)\/characters\/([^/]+)\/attributes\/([^/]+)$/.exec(path))) {
      const project = this.openProject(m[1]);
      const characterId = m[2] ?? "";
      const attributeId = m[3] ?? "";
      if (method === "PATCH") {
        return { status: 200, body: this.patchAttribute(project, characterId, attributeId, b) };
      }
      if (method === "DELETE") {
        return { status: 200, body: this.deleteAttribute(project, characterId, attributeId) };
      }
    }

    if ((m = /^\/api\/projects\/([^/]+)\/relationships$/.exec(path))) {
      const project = this.openProject(m[1]);
      if (method === "GET") {
        let edges = [...project.relationships.values()];
        const owner = query.get("owner");
        const target = query.get("target");
        if (owner) edges = edges.filter((rel) => rel.owner === owner);
        if (target) edges = edges.filter((rel) => rel.target === target);
        return { status: 200, body: { relationships: edges } };
      }
      if (method === "POST") return { status: 201, body: this.follow(project, b) };
    }
    if ((m = /^\/api\/projects\/([^/]+)\/relationships\/([^/]+)\/knowledge$/.exec(path)) && method === "PUT") {
      const project = this.openProject(m[1]);
      return { status: 200, body: this.setKnowledge(project, m[2] ?? "", b) };
    }
    if ((m = /^\/api\/projects\/([^/]+)\/relationships\/([^/]+)$/.exec(path))) {
      const project = this.openProject(m[1]);
      const id = m[2] ?? "";
      const rel = project.relationships.get(id);
      if (!rel) fail(404, "UnknownRelationship", `no relationship ${id}`);
      if (method === "PATCH") {
        rel.description = String(b["description"] ?? "");
        this.bump(project);
        return { status: 200, body: rel };
      }
      if (method === "DELETE") {
        project.relationships.delete(id);
        this.bump(project);
        return { status: 200, body: { deleted: id } };
      }
    }

    if ((m = /^\/api\/projects\/([^/]+)\/characters\/([^/]+)\/discover$/.exec(path)) && method === "POST") {
      const project = this.openProject(m[1]);
      return { status: 200, body: this.discover(project, m[2] ?? "", b) };
    }
    if ((m = /^\/api\/projects\/([^/]+)\/characters\/([^/]+)\/adopt$/.exec(path)) && method === "POST") {
      const project = this.openProject(m[1]);
      return { status: 201, body: this.adopt(project, m[2] ?? "", b) };
    }
    if ((m = /^\/api\/projects\/([^/]+)\/characters\/([^/]+)\/journals$/.exec(path)) && method === "GET") {
      const project = this.openProject(m[1]);
      this.liveCharacter(project, m[2] ?? "");
      const entries = [...project.journals.values()]
        .filter((e) => e.author === m?.[2])
        .reverse();
      return { status: 200, body: { journals: entries } };
    }
    if ((m = /^\/api\/projects\/([^/]+)\/characters\/([^/]+)\/threads$/.exec(path)) && method === "GET") {
      const project = this.openProject(m[1]);
      const characterId = m[2] ?? "";
      this.liveCharacter(project, characterId);
      const threads = [...project.threads.values()]
        .filter((t) => {
          const journal = project.journals.get(t.journal);
          return (
            t.initiator === characterId ||
            journal?.author === characterId ||
            t.comments.some((c) => c.author === characterId)
          );
        })
        .reverse()
        .map((t) => this.withTurn(project, t));
      return { status: 200, body: { threads } };
    }

    if ((m = /^\/api\/projects\/([^/]+)\/journals$/.exec(path))) {
      const project = this.openProject(m[1]);
      if (method === "GET") {
        return { status: 200, body: { journals: [...project.journals.values()].reverse() } };
      }
      if (method === "POST") return { status: 201, body: this.addJournal(project, b) };
    }
    if ((m = /^\/api\/projects\/([^/]+)\/journals\/generate$/.exec(path)) && method === "POST") {
      const project = this.openProject(m[1]);
      return { status: 200, body: this.generateJournals(project, b) };
    }
    if ((m = /^\/api\/projects\/([^/]+)\/journals\/([^/]+)\/threads$/.exec(path)) && method === "GET") {
      const project = this.openProject(m[1]);
      const journalId = m[2] ?? "";
      this.journalOf(project, journalId);
      const threads = [...project.threads.values()]
        .filter((t) => t.journal === journalId)
        .map((t) => this.withTurn(project, t));
      return { status: 200, body: { threads } };
    }
    if ((m = /^\/api\/projects\/([^/]+)\/journals\/([^/]+)\/comments$/.exec(path)) && method === "POST") {
      const project = this.openProject(m[1]);
      return { status: 201, body: this.postComment(project, m[2] ?? "", b) };
    }
    if ((m = /^\/api\/projects\/([^/]+)\/journals\/([^/]+)$/.exec(path))) {
      const project = this.openProject(m[1]);
      const id = m[2] ?? "";
      if (method === "GET") return { status: 200, body: this.journalOf(project, id) };
      if (method === "PATCH") return { status: 200, body: this.patchJournal(project, id, b) };
      if (method === "DELETE") {
        this.journalOf(project, id);
        project.journals.delete(id);
        for (const [tid, thread] of [...project.threads.entries()]) {
          if (thread.journal === id) project.threads.delete(tid);
        }
        this.bump(project);
        return { status: 200, body: { deleted: id } };
      }
    }

    if ((m = /^\/api\/projects\/([^/]+)\/threads\/([^/]+)$/.exec(path)) && method === "GET") {
      const project = this.openProject(m[1]);
      const thread = project.threads.get(m[2] ?? "");
      if (!thread) fail(404, "UnknownThread", `no thread ${m[2]}`);
      return { status: 200, body: this.withTurn(project, thread) };
    }
    if ((m = /^\/api\/projects\/([^/]+)\/comments\/([^/]+)$/.exec(path))) {
      const project = this.openProject(m[1]);
      const id = m[2] ?? "";
      if (method === "PATCH") return { status: 200, body: this.patchComment(project, id, b) };
      if (method === "DELETE") {
        this.deleteComment(project, id);
        return { status: 200, body: { deleted: id } };
      }
    }

    if (path === "/api/images" && method === "POST") {
      const bytes =
        rawBody instanceof Uint8Array
          ? rawBody
          : rawBody instanceof ArrayBuffer
            ? new Uint8Array(rawBody)
            : null;
      if (!bytes || !bytes.length) fail(422, "EmptyContent", "image body must not be empty");
      this.imageCounter += 1;
      const ref = `im-${this.imageCounter}`;
      this.images.set(ref, bytes);
      return { status: 201, body: { ref, media_type: "image/png" } };
    }
    if ((m = /^\/api\/images\/([^/]+)$/.exec(path)) && method === "GET") {
      const bytes = this.images.get(m[1] ?? "");
      if (!bytes) fail(404, "UnknownImage", `no image ${m[1]}`);
      return { status: 200, body: bytes };
    }

    fail(404, "UnknownRoute", `${method} ${path} is not part of the consumed surface`);
  }

  // --- projects ---

  private createProject(name: unknown): ProjectMeta {
    const trimmed = String(name ?? "").trim();
    if (!trimmed) fail(422, "EmptyName", "project name must not be blank");
    const id = `pr-${trimmed.toLowerCase().replace(/[^a-z0-9]+/g, "-")}`;
    if (this.projects.has(id)) fail(409, "ProjectExists", `project ${trimmed} already exists`);
    const project: FakeProject = {
      meta: { id, name: trimmed, revision: 0, created_at: this.now() },
      characters: new Map(),
      relationships: new Map(),
      journals: new Map(),
      threads: new Map(),
      counters: {},
    };
    this.projects.set(id, project);
    return project.meta;
  }

  private openProject(projectId: string | undefined): FakeProject {
    const project = this.projects.get(projectId ?? "");
    if (!project) fail(404, "UnknownProject", `no project ${projectId}`);
    return project;
  }

  private bump(project: FakeProject): void {
    project.meta.revision += 1;
  }

  // --- characters ---

  private createCharacter(project: FakeProject, body: Record<string, unknown>): CharacterDoc {
    const name = String(body["name"] ?? "").trim();
    if (!name) fail(422, "EmptyName", "character name must not be blank");
    const now = this.now();
    const attributes: AttributeDoc[] = [];
    const rows = Array.isArray(body["attributes"]) ? (body["attributes"] as unknown[]) : [];
    for (const [index, row] of rows.entries()) {
      const attr = row as Record<string, unknown>;
      const key = String(attr["key"] ?? "").trim();
      if (!key) fail(422, "AttributeKeyEmpty", "attribute keys must not be blank");
      attributes.push({
        id: this.newId(project, "attribute"),
        key,
        value: String(attr["value"] ?? ""),
        order: index,
      });
    }
    const character: CharacterDoc = {
      id: this.newId(project, "character"),
      name,
      portrait: typeof body["portrait"] === "string" ? (body["portrait"] as string) : null,
      attributes,
      created_at: now,
      updated_at: now,
      deleted: false,
    };
    project.characters.set(character.id, character);
    this.bump(project);
    return character;
  }

  private liveCharacter(project: FakeProject, id: string): CharacterDoc {
    const character = project.characters.get(id);
    if (!character || character.deleted) fail(404, "UnknownCharacter", `no character ${id}`);
    return character;
  }

  private patchCharacter(
    project: FakeProject,
    id: string,
    body: Record<string, unknown>,
  ): CharacterDoc {
    const character = this.liveCharacter(project, id);
    if (typeof body["name"] === "string") {
      const name = (body["name"] as string).trim();
      if (!name) fail(422, "EmptyName", "character name must not be blank");
      character.name = name;
    }
    if (typeof body["portrait"] === "string") character.portrait = body["portrait"] as string;
    if (body["clear_portrait"] === true) character.portrait = null;
    character.updated_at = this.now();
    this.bump(project);
    return character;
  }

  private deleteCharacter(project: FakeProject, id: string): void {
    const character = this.liveCharacter(project, id);
    character.deleted = true;
    for (const [rid, rel] of [...project.relationships.entries()]) {
      if (rel.owner === id || rel.target === id) project.relationships.delete(rid);
    }
    for (const journal of project.journals.values()) {
      if (journal.author === id) journal.orphaned = true;
    }
    for (const thread of project.threads.values()) {
      for (const comment of thread.comments) {
        if (comment.author === id) comment.orphaned = true;
      }
    }
    this.bump(project);
  }

  private addAttribute(
    project: FakeProject,
    characterId: string,
    body: Record<string, unknown>,
  ): CharacterDoc {
    const character = this.liveCharacter(project, characterId);
    const key = String(body["key"] ?? "").trim();
    if (!key) fail(422, "AttributeKeyEmpty", "attribute keys must not be blank");
    character.attributes.push({
      id: this.newId(project, "attribute"),
      key,
      value: String(body["value"] ?? ""),
      order: character.attributes.length,
    });
    character.updated_at = this.now();
    this.bump(project);
    return character;
  }

  private patchAttribute(
    project: FakeProject,
    characterId: string,
    attributeId: string,
    body: Record<string, unknown>,
  ): CharacterDoc {
    const character = this.liveCharacter(project, characterId);
    const attr = character.attributes.find((a) => a.id === attributeId);
    if (!attr) fail(404, "UnknownAttribute", `no attribute ${attributeId}`);
    if (body["key"] === undefined && body["value"] === undefined) {
      fail(422, "EmptyPatch", "nothing to change");
    }
    if (typeof body["key"] === "string") {
      const key = (body["key"] as string).trim();
      if (!key) fail(422, "AttributeKeyEmpty", "attribute keys must not be blank");
      attr.key = key;
    }
    if (typeof body["value"] === "string") attr.value = body["value"] as string;
    character.updated_at = this.now();
    this.bump(project);
    return character;
  }

  private deleteAttribute(
    project: FakeProject,
    characterId: string,
    attributeId: string,
  ): CharacterDoc {
    const character = this.liveCharacter(project, characterId);
    const index = character.attributes.findIndex((a) => a.id === attributeId);
    if (index < 0) fail(404, "UnknownAttribute", `no attribute ${attributeId}`);
    character.attributes.splice(index, 1);
    character.attributes.forEach((a, i) => {
      a.order = i;
    });
    for (const rel of project.relationships.values()) {
      rel.knowledge = rel.knowledge.filter((grant) => grant !== attributeId);
    }
    character.updated_at = this.now();
    this.bump(project);
    return character;
  }

  private reorderAttributes(
    project: FakeProject,
    characterId: string,
    body: Record<string, unknown>,
  ): CharacterDoc {
    const character = this.liveCharacter(project, characterId);
    const order = Array.isArray(body["order"]) ? (body["order"] as string[]) : [];
    const current = character.attributes.map((a) => a.id);
    if ([...order].sort().join() !== [...current].sort().join()) {
      fail(422, "NotAPermutation", "order must list every attribute id exactly once");
    }
    character.attributes.sort((a, b2) => order.indexOf(a.id) - order.indexOf(b2.id));
    character.attributes.forEach((a, i) => {
      a.order = i;
    });
    character.updated_at = this.now();
    this.bump(project);
    return character;
  }

  // --- relationships ---

  private follow(project: FakeProject, body: Record<string, unknown>): RelationshipDoc {
    const owner = String(body["owner"] ?? "");
    const target = String(body["target"] ?? "");
    this.liveCharacter(project, owner);
    this.liveCharacter(project, target);
    if (owner === target) fail(422, "SelfFollow", "a character cannot follow itself");
    for (const rel of project.relationships.values()) {
      if (rel.owner === owner && rel.target === target) {
        fail(409, "DuplicateEdge", "already following");
      }
    }
    const rel: RelationshipDoc = {
      id: this.newId(project, "relationship"),
      owner,
      target,
      description: String(body["description"] ?? ""),
      knowledge: [],
      created_at: this.now(),
    };
    project.relationships.set(rel.id, rel);
    this.bump(project);
    return rel;
  }

  private setKnowledge(
    project: FakeProject,
    relationshipId: string,
    body: Record<string, unknown>,
  ): RelationshipDoc {
    const rel = project.relationships.get(relationshipId);
    if (!rel) fail(404, "UnknownRelationship", `no relationship ${relationshipId}`);
    const grants = Array.isArray(body["grants"]) ? (body["grants"] as string[]) : [];
    const target = this.liveCharacter(project, rel.target);
    const valid = new Set(target.attributes.map((a) => a.id));
    for (const grant of grants) {
      if (!valid.has(grant)) {
        fail(422, "ForeignAttribute", `${grant} is not an attribute of ${rel.target}`);
      }
    }
    rel.knowledge = [...new Set(grants)].sort(
      (a, b) => Number(a.split("-")[1]) - Number(b.split("-")[1]),
    );
    this.bump(project);
    return rel;
  }

  // --- generation ---

  private discover(
    project: FakeProject,
    characterId: string,
    body: Record<string, unknown>,
  ): { profiles: MiniProfile[]; record_ids: string[] } {
    const seed = this.liveCharacter(project, characterId);
    const phrase = String(body["phrase"] ?? "").trim();
    if (!phrase) fail(422, "EmptyPhrase", "phrase must not be blank");
    const failure = this.discoverFailures.shift();
    const recordId = this.newId(project, "record");
    this.bump(project);
    if (failure) {
      fail(502, "ParseFailed", failure.message, failure.rawExcerpt);
    }
    const profiles = DISCOVERY_NAMES.map((name) => ({
      name,
      introduction: `${name}, sketched from "${phrase}".`,
      backstory: `${name} has a long history before meeting ${seed.name}.`,
      my_relationship: `${name} sees ${seed.name} through: ${phrase}.`,
      your_relationship: `${seed.name} sees ${name} through: ${phrase}.`,
    }));
    return { profiles, record_ids: [recordId] };
  }

  private adopt(
    project: FakeProject,
    characterId: string,
    body: Record<string, unknown>,
  ): { character: CharacterDoc; relationships: RelationshipDoc[] } {
    const seed = this.liveCharacter(project, characterId);
    const fields = ["name", "introduction", "backstory", "my_relationship", "your_relationship"];
    for (const field of fields) {
      if (!String(body[field] ?? "").trim()) {
        fail(422, "EmptyProfileField", `${field} must not be blank`);
      }
    }
    const character = this.createCharacter(project, {
      name: body["name"],
      attributes: [
        { key: "introduction", value: body["introduction"] },
        { key: "backstory", value: body["backstory"] },
      ],
    });
    const mine = this.follow(project, {
      owner: character.id,
      target: seed.id,
      description: body["my_relationship"],
    });
    const yours = this.follow(project, {
      owner: seed.id,
      target: character.id,
      description: body["your_relationship"],
    });
    return { character, relationships: [mine, yours] };
  }

  private generateJournals(
    project: FakeProject,
    body: Record<string, unknown>,
  ): { slots: JournalSlot[] } {
    const authorIds = Array.isArray(body["author_ids"]) ? (body["author_ids"] as string[]) : [];
    const theme = String(body["theme"] ?? "").trim();
    if (!authorIds.length || new Set(authorIds).size !== authorIds.length) {
      fail(422, "InvalidSelection", "authors must be a non-empty set");
    }
    if (!theme) fail(422, "EmptyTheme", "a theme is required");
    for (const id of authorIds) this.liveCharacter(project, id);

    const slots: JournalSlot[] = [];
    let okCount = 0;
    for (const authorId of authorIds) {
      const recordId = this.newId(project, "record");
      const fault = this.journalFaults.get(authorId);
      if (fault) {
        this.journalFaults.delete(authorId);
        slots.push({ author: authorId, record_id: recordId, status: "error", error: fault });
        continue;
      }
      const author = this.liveCharacter(project, authorId);
      const entry: JournalDoc = {
        id: this.newId(project, "journal"),
        author: authorId,
        theme,
        content: `Dear Diary, today "${theme}" would not leave ${author.name} alone.`,
        provenance: "generated",
        created_at: this.now(),
        orphaned: false,
      };
      project.journals.set(entry.id, entry);
      slots.push({ author: authorId, record_id: recordId, status: "ok", entry });
      okCount += 1;
    }
    this.bump(project);
    if (!okCount) {
      const detail = slots
        .map((slot) => `${slot.author}: ${slot.error?.code ?? "Error"}`)
        .join(", ");
      fail(502, "AllFailed", `every slot failed (${detail})`);
    }
    return { slots };
  }

  // --- journals ---

  private addJournal(project: FakeProject, body: Record<string, unknown>): JournalDoc {
    const author = this.liveCharacter(project, String(body["author_id"] ?? ""));
    const entry: JournalDoc = {
      id: this.newId(project, "journal"),
      author: author.id,
      theme: String(body["theme"] ?? ""),
      content: String(body["content"] ?? ""),
      provenance: "manual",
      created_at: this.now(),
      orphaned: false,
    };
    if (!entry.content.trim()) fail(422, "EmptyContent", "journal content must not be blank");
    project.journals.set(entry.id, entry);
    this.bump(project);
    return entry;
  }

  private journalOf(project: FakeProject, id: string): JournalDoc {
    const journal = project.journals.get(id);
    if (!journal) fail(404, "UnknownJournal", `no journal ${id}`);
    return journal;
  }

  private patchJournal(
    project: FakeProject,
    id: string,
    body: Record<string, unknown>,
  ): JournalDoc {
    const journal = this.journalOf(project, id);
    if (body["theme"] === undefined && body["content"] === undefined) {
      fail(422, "EmptyPatch", "nothing to change");
    }
    if (typeof body["theme"] === "string") journal.theme = body["theme"] as string;
    if (typeof body["content"] === "string") {
      if (!(body["content"] as string).trim()) {
        fail(422, "EmptyContent", "journal content must not be blank");
      }
      journal.content = body["content"] as string;
    }
    journal.provenance = "edited";
    this.bump(project);
    return journal;
  }

  // --- comments ---

  private nextAuthor(project: FakeProject, thread: StoredThread): string {
    const journal = this.journalOf(project, thread.journal);
    const position = thread.comments.length + 1;
    return position % 2 === 1 ? thread.initiator : journal.author;
  }

  private withTurn(project: FakeProject, thread: StoredThread): ThreadDoc {
    return { ...thread, comments: [...thread.comments], next_author: this.nextAuthor(project, thread) };
  }

  private postComment(
    project: FakeProject,
    journalId: string,
    body: Record<string, unknown>,
  ): { thread: ThreadDoc; comment: CommentDoc; record_id: string | null } {
    const journal = this.journalOf(project, journalId);
    const commenter = this.liveCharacter(project, String(body["commenter_id"] ?? ""));
    const mode = String(body["mode"] ?? "generate");
    const content = body["content"];
    if (mode === "manual" && typeof content !== "string") {
      fail(422, "ModeMismatch", "manual comments require content");
    }
    if (mode === "generate" && content !== undefined) {
      fail(422, "ModeMismatch", "generated comments take no content");
    }

    let thread: StoredThread;
    const threadId = body["thread_id"];
    if (typeof threadId === "string" && threadId) {
      const existing = project.threads.get(threadId);
      if (!existing) fail(404, "UnknownThread", `no thread ${threadId}`);
      thread = existing;
    } else {
      if (commenter.id === journal.author) {
        fail(
          409,
          "AlternationViolation",
          "the journal's author cannot start a thread on their own entry",
        );
      }
      thread = {
        id: this.newId(project, "thread"),
        journal: journalId,
        initiator: commenter.id,
        created_at: this.now(),
        comments: [],
      };
    }

    const expected = this.nextAuthor(project, thread);
    if (commenter.id !== expected) {
      fail(
        409,
        "AlternationViolation",
        `position ${thread.comments.length + 1} belongs to '${expected}', not '${commenter.id}'`,
      );
    }

    let text: string;
    let recordId: string | null = null;
    if (mode === "manual") {
      text = String(content);
      if (!text.trim()) fail(422, "EmptyContent", "comment content must not be blank");
    } else {
      recordId = this.newId(project, "record");
      const position = thread.comments.length + 1;
      text = `${commenter.name} weighs in on "${journal.theme}" (reply ${position}).`;
    }

    const comment: CommentDoc = {
      id: this.newId(project, "comment"),
      author: commenter.id,
      content: text,
      provenance: mode === "manual" ? "manual" : "generated",
      created_at: this.now(),
      orphaned: false,
    };
    thread.comments.push(comment);
    project.threads.set(thread.id, thread);
    this.bump(project);
    return { thread: this.withTurn(project, thread), comment, record_id: recordId };
  }

  private patchComment(
    project: FakeProject,
    commentId: string,
    body: Record<string, unknown>,
  ): CommentDoc {
    const content = String(body["content"] ?? "");
    if (!content.trim()) fail(422, "EmptyContent", "comment content must not be blank");
    for (const thread of project.threads.values()) {
      const comment = thread.comments.find((c) => c.id === commentId);
      if (comment) {
        comment.content = content;
        comment.provenance = "edited";
        this.bump(project);
        return comment;
      }
    }
    fail(404, "UnknownComment", `no comment ${commentId}`);
  }

  private deleteComment(project: FakeProject, commentId: string): void {
    for (const [tid, thread] of project.threads.entries()) {
      const ids = thread.comments.map((c) => c.id);
      if (!ids.includes(commentId)) continue;
      if (ids[ids.length - 1] !== commentId) {
        fail(409, "AlternationViolation", "only the last comment of a thread can be deleted");
      }
      thread.comments.pop();
      if (!thread.comments.length) project.threads.delete(tid);
      this.bump(project);
      return;
    }
    fail(404, "UnknownComment", `no comment ${commentId}`);
  }
}

function json(status: number, body: unknown): Response {
  return new Response(JSON.stringify(body), {
    status,
    headers: { "Content-Type": "application/json" },
  });
}

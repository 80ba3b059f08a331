import { describe, expect, it } from "vitest";
import { ApiError, StudioApi } from "../src/api";
import type { FetchFn } from "../src/config";
import { FakeServer } from "./fakeServer";

function client(fetchFn: FetchFn, apiToken = ""): StudioApi {
  return new StudioApi({ serverUrl: "", uiLanguage: "en", apiToken, fetchFn });
}

describe("StudioApi", () => {
  it("round-trips project and character documents", async () => {
    const fake = new FakeServer();
    const api = client(fake.fetch);
    const project = await api.createProject("Cast Lab");
    expect(project.id).toMatch(/^pr-/);
    expect(project.revision).toBe(0);

    const character = await api.createCharacter(project.id, {
      name: "Binggu",
      attributes: [{ key: "personality", value: "ice-cold but soft" }],
    });
    expect(character.id).toBe("ch-1");
    expect(character.attributes.map((a) => a.key)).toEqual(["personality"]);

    const listed = await api.characters(project.id);
    expect(listed.map((c) => c.name)).toEqual(["Binggu"]);
    expect((await api.project(project.id)).revision).toBe(1);
  });

  it("turns error envelopes into ApiError with code and status", async () => {
    const fake = new FakeServer();
    const api = client(fake.fetch);
    const err = await api.project("pr-missing").catch((e: unknown) => e);
    expect(err).toBeInstanceOf(ApiError);
    expect((err as ApiError).status).toBe(404);
    expect((err as ApiError).code).toBe("UnknownProject");
    expect((err as ApiError).message).toContain("pr-missing");
    expect((err as ApiError).debugExcerpt).toBeNull();
  });

  it("surfaces the provider raw excerpt from error debug payloads", async () => {
    const fake = new FakeServer();
    const api = client(fake.fetch);
    const project = await api.createProject("Cast Lab");
    await api.createCharacter(project.id, { name: "Binggu", attributes: [] });
    fake.discoverFailures.push({
      message: "reply was not valid JSON after a repair attempt",
      rawExcerpt: "x".repeat(1200),
    });

    const err = await api.discover(project.id, "ch-1", "greatest enemy").catch((e: unknown) => e);
    expect(err).toBeInstanceOf(ApiError);
    expect((err as ApiError).status).toBe(502);
    expect((err as ApiError).code).toBe("ParseFailed");
    expect((err as ApiError).debugExcerpt).toHaveLength(800);
  });

  it("sends the bearer token on every request when configured", async () => {
    const seen: (string | null)[] = [];
    const fetchFn: FetchFn = (input, init) => {
      const headers = (init?.headers ?? {}) as Record<string, string>;
      seen.push(headers["Authorization"] ?? null);
      void input;
      return Promise.resolve(
        new Response(JSON.stringify({ projects: [] }), { status: 200 }),
      );
    };
    const api = client(fetchFn, "sesame");
    await api.listProjects();
    expect(seen).toEqual(["Bearer sesame"]);
  });

  it("filters relationship queries with owner and target params", async () => {
    const fake = new FakeServer();
    const api = client(fake.fetch);
    const project = await api.createProject("Cast Lab");
    await api.createCharacter(project.id, { name: "A", attributes: [] });
    await api.createCharacter(project.id, { name: "B", attributes: [] });
    await api.createCharacter(project.id, { name: "C", attributes: [] });
    await api.follow(project.id, "ch-1", "ch-2", "rival");
    await api.follow(project.id, "ch-3", "ch-2", "fan");

    const byOwner = await api.relationships(project.id, { owner: "ch-1" });
    expect(byOwner.map((rel) => rel.target)).toEqual(["ch-2"]);
    const byTarget = await api.relationships(project.id, { target: "ch-2" });
    expect(byTarget.map((rel) => rel.owner)).toEqual(["ch-1", "ch-3"]);
  });

  it("keeps alternation conflicts typed for the turn toast", async () => {
    const fake = new FakeServer();
    const api = client(fake.fetch);
    const project = await api.createProject("Cast Lab");
    await api.createCharacter(project.id, { name: "A", attributes: [] });
    await api.createCharacter(project.id, { name: "B", attributes: [] });
    const journal = await api.addJournal(project.id, "ch-1", "day one", "wrote things");

    await api.postComment(project.id, journal.id, {
      commenter_id: "ch-2",
      mode: "manual",
      content: "first!",
    });
    const err = await api
      .postComment(project.id, journal.id, {
        commenter_id: "ch-2",
        mode: "manual",
        thread_id: "th-1",
        content: "me again",
      })
      .catch((e: unknown) => e);
    expect((err as ApiError).status).toBe(409);
    expect((err as ApiError).code).toBe("AlternationViolation");
  });
});

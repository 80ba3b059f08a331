import { afterEach, describe, expect, it } from "vitest";
import type { SeededCast } from "./helpers";
import { FakeServer } from "./fakeServer";
import { bootIntoProject, Harness, seedCast, until } from "./helpers";

describe("comment threads", () => {
  let h: Harness;

  afterEach(() => h.destroy());

  // A journal by Chorong (ch-2); Binggu (ch-1) is the only eligible initiator.
  async function openJournalFeed(fake: FakeServer): Promise<SeededCast> {
    const seeded = await seedCast(fake.fetch);
    await seeded.api.addJournal(
      seeded.project.id,
      seeded.chorong.id,
      "the lighthouse",
      "Chorong climbed the lighthouse today.",
    );
    h = await bootIntoProject(fake.fetch, "Cast Lab");
    h.click("open-journals");
    await until(() => h.maybe("new-thread-commenter") !== null, "journal feed with threads");
    return seeded;
  }

  function comments(): HTMLElement[] {
    return h.qa("comment");
  }

  async function startThread(text: string): Promise<void> {
    h.type("new-thread-text", text);
    h.click("new-thread-manual");
    await until(() => comments().length === 1, "thread started");
  }

  it("offers every character except the journal author as initiator", async () => {
    const fake = new FakeServer();
    await openJournalFeed(fake);

    const select = h.q("new-thread-commenter") as HTMLSelectElement;
    const values = Array.from(select.options).map((o) => o.value);
    expect(values).toEqual(["ch-1"]);
  });

  it("aligns the initiator left and gates the reply to the next author", async () => {
    const fake = new FakeServer();
    await openJournalFeed(fake);
    await startThread("How was the view from up there?");

    const first = comments()[0] as HTMLElement;
    expect(first.dataset.author).toBe("ch-1");
    expect(first.classList.contains("side-initiator")).toBe(true);
    expect(
      first.querySelector<HTMLElement>("[data-testid=provenance]")?.dataset.provenance,
    ).toBe("manual");
    expect((h.q("new-thread-text") as HTMLTextAreaElement).value).toBe("");

    const replyBox = h.q("reply-box");
    expect(replyBox.dataset.author).toBe("ch-2");
    expect(replyBox.textContent).toContain("Reply as Chorong");
    expect(h.qa("reply-box")).toHaveLength(1);
  });

  it("alternates sides as the generated reply lands", async () => {
    const fake = new FakeServer();
    await openJournalFeed(fake);
    await startThread("How was the view from up there?");

    h.click("reply-generate");
    await until(() => comments().length === 2, "generated reply");

    const rows = comments();
    expect(rows.map((row) => row.dataset.author)).toEqual(["ch-1", "ch-2"]);
    expect((rows[0] as HTMLElement).classList.contains("side-initiator")).toBe(true);
    expect((rows[1] as HTMLElement).classList.contains("side-author")).toBe(true);
    expect(rows[1]?.textContent).toContain('weighs in on "the lighthouse"');
    expect(
      rows[1]?.querySelector<HTMLElement>("[data-testid=provenance]")?.dataset.provenance,
    ).toBe("generated");
    expect(h.q("reply-box").dataset.author).toBe("ch-1");
  });

  it("surfaces the turn error when the view went stale", async () => {
    const fake = new FakeServer();
    const seeded = await openJournalFeed(fake);
    await startThread("How was the view from up there?");
    h.click("reply-generate");
    await until(() => comments().length === 2, "generated reply");

    // Another tab takes Binggu's turn; this view still offers it.
    await seeded.api.postComment(seeded.project.id, "jn-1", {
      commenter_id: "ch-1",
      mode: "manual",
      thread_id: "th-1",
      content: "It was windy.",
    });
    expect(h.q("reply-box").dataset.author).toBe("ch-1");

    h.type("reply-text", "Telling you twice!");
    h.click("reply-manual");
    await until(() => h.maybe("toast") !== null, "turn toast");
    expect(h.text("toast")).toBe("it's not this character's turn");

    // The thread re-syncs from the server and hands the turn onward.
    await until(() => comments().length === 3, "thread re-synced");
    expect(h.q("reply-box").dataset.author).toBe("ch-2");
    expect(fake.requestCount("POST", /\/comments$/)).toBe(4);
  });

  it("edits flip provenance and only the tail comment is deletable", async () => {
    const fake = new FakeServer();
    await openJournalFeed(fake);
    await startThread("How was the view from up there?");
    h.click("reply-generate");
    await until(() => comments().length === 2, "two comments");

    const first = comments()[0] as HTMLElement;
    h.click(first.querySelector<HTMLElement>("[data-testid=comment-edit]") as HTMLElement);
    const editor = first.querySelector<HTMLTextAreaElement>("[data-testid=comment-editor]");
    h.type(editor as HTMLElement, "How was the climb, really?");
    h.click(first.querySelector<HTMLElement>("[data-testid=comment-save]") as HTMLElement);
    await until(
      () =>
        comments()[0]?.querySelector<HTMLElement>("[data-testid=provenance]")?.dataset
          .provenance === "edited",
      "edited badge",
    );
    expect(comments()[0]?.textContent).toContain("How was the climb, really?");

    const deleteButtons = h.qa("comment-delete");
    expect(deleteButtons).toHaveLength(1);
    expect(deleteButtons[0]?.closest("[data-testid=comment]")).toBe(comments()[1]);

    h.click(deleteButtons[0] as HTMLElement);
    await until(() => h.maybe("confirm-dialog") !== null, "confirmation");
    h.click("confirm-yes");
    await until(() => comments().length === 1, "tail removed");
    expect(h.q("reply-box").dataset.author).toBe("ch-2");
  });
});

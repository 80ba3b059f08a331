import { afterEach, describe, expect, it } from "vitest";
import { DISCOVERY_NAMES, FakeServer } from "./fakeServer";
import { bootIntoProject, Harness, seedCast, until } from "./helpers";

describe("relationship discovery", () => {
  let h: Harness;

  afterEach(() => h.destroy());

  async function openDiscovery(fake: FakeServer): Promise<void> {
    const seeded = await seedCast(fake.fetch);
    h = await bootIntoProject(fake.fetch, "Cast Lab");
    h.click(h.byId("character-card", seeded.binggu.id));
    await until(() => h.maybe("tab-connection") !== null, "profile tabs");
    h.click("tab-connection");
    await until(() => h.maybe("discovery-run") !== null, "discovery controls");
  }

  it("rejects an empty phrase inline without calling the server", async () => {
    const fake = new FakeServer();
    await openDiscovery(fake);

    h.click("discovery-run");
    expect(h.text("discovery-validation")).toBe("Enter a relationship phrase first.");
    expect(fake.requestCount("POST", /\/discover$/)).toBe(0);

    h.type("discovery-phrase", "   ");
    h.click("discovery-run");
    expect(fake.requestCount("POST", /\/discover$/)).toBe(0);
  });

  it("renders three candidate cards with all five profile fields", async () => {
    const fake = new FakeServer();
    await openDiscovery(fake);

    h.type("discovery-phrase", "greatest enemy");
    h.click("discovery-run");
    await until(() => h.qa("discovery-card").length === 3, "candidate cards");

    const cards = h.qa("discovery-card");
    expect(cards.map((card) => card.querySelector(".mini-name")?.textContent)).toEqual(
      DISCOVERY_NAMES,
    );
    for (const card of cards) {
      const fields = Array.from(card.querySelectorAll(".mini-field"));
      expect(fields).toHaveLength(4);
      for (const field of fields) {
        expect((field.textContent ?? "").length).toBeGreaterThan(8);
      }
      expect(card.querySelector("[data-testid=adopt]")).not.toBeNull();
    }
  });

  it("adopt adds the character to the sidebar and the following list", async () => {
    const fake = new FakeServer();
    await openDiscovery(fake);

    h.type("discovery-phrase", "greatest enemy");
    h.click("discovery-run");
    await until(() => h.qa("discovery-card").length === 3, "candidate cards");

    const firstAdopt = h.qa("adopt")[0] as HTMLButtonElement;
    firstAdopt.click();
    await until(() => h.qa("character-card").length === 3, "sidebar grew");

    const names = h.qa("character-card").map((card) => card.textContent ?? "");
    expect(names.some((name) => name.includes("Metal Monster"))).toBe(true);

    await until(() => h.qa("edge-row").length === 1, "following list refreshed");
    expect(h.q("edge-row").dataset.target).toBe("ch-3");
    await until(() => h.qa("follower-row").length === 1, "followers refreshed");

    const adoptedButton = h.qa("adopt")[0] as HTMLButtonElement;
    expect(adoptedButton.disabled).toBe(true);
    expect(adoptedButton.textContent).toBe("Adopted");
  });

  it("shows a retriable error card with the provider excerpt behind a toggle", async () => {
    const fake = new FakeServer();
    await openDiscovery(fake);
    fake.discoverFailures.push({
      message: "reply was not valid JSON after a repair attempt",
      rawExcerpt: "<<<garbled provider output>>>",
    });

    h.type("discovery-phrase", "childhood friend");
    h.click("discovery-run");
    await until(() => h.maybe("discovery-error") !== null, "error card");

    expect(h.text("discovery-error")).toContain("not valid JSON");
    const details = h.q("discovery-error-details") as HTMLDetailsElement;
    expect(details.open).toBe(false);
    expect(details.querySelector(".raw-excerpt")?.textContent).toBe(
      "<<<garbled provider output>>>",
    );

    h.click("discovery-retry");
    await until(() => h.qa("discovery-card").length === 3, "retry succeeded");
    expect(h.maybe("discovery-error")).toBeNull();
    expect(fake.requestCount("POST", /\/discover$/)).toBe(2);
  });
});

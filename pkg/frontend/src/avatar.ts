import type { StudioApi } from "./api";
import { el } from "./dom";
import type { CharacterDoc } from "./types";

// Presence dots are pure decoration: every character is always "online".
// There is no backend state behind them.

export function presenceDot(): HTMLElement {
  return el("span", { className: "presence-dot", title: "online" });
}

const AVATAR_HUES = [12, 48, 95, 150, 200, 260, 310];

function hueFor(id: string): number {
  let acc = 0;
  for (const ch of id) acc = (acc * 31 + ch.charCodeAt(0)) % 997;
  return AVATAR_HUES[acc % AVATAR_HUES.length] ?? 200;
}

export function avatar(api: StudioApi, character: CharacterDoc): HTMLElement {
  const wrap = el("span", { className: "avatar-wrap" });
  if (character.portrait) {
    wrap.append(
      el("img", {
        className: "avatar",
        src: api.imageUrl(character.portrait),
        alt: character.name,
      }),
    );
  } else {
    const glyph = el("span", {
      className: "avatar avatar-glyph",
      text: character.name.slice(0, 1).toUpperCase() || "?",
    });
    glyph.style.background = `hsl(${hueFor(character.id)}, 45%, 82%)`;
    wrap.append(glyph);
  }
  wrap.append(presenceDot());
  return wrap;
}

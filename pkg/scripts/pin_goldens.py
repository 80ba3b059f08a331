"""Pin prompt golden files under fixtures/prompts/.

Two layers:
  * template goldens: each feature template rendered with identity values for
    the content placeholders (so "${characterName}" stays visible) and the
    real Korean-output wording for the language knobs; pins the template text.
  * rendered goldens: full prompts rendered through the public render
    functions from a tiny fixed cast; pins attribute formatting, network
    formatting, knowledge joining, and the missing-edge fallbacks.

Rerun after any deliberate template or formatting change and commit the diff.
"""

from __future__ import annotations

import sys
from pathlib import Path
from string import Template

ROOT = Path(__file__).resolve().parents[1]
sys.path.insert(0, str(ROOT / "src"))

from starcast.model import CastGraph
from starcast.prompts import (
    DiscoveryRequest,
    build_counterpart_view,
    build_network_view,
    output_language,
    render_comment_prompt,
    render_discovery_prompt,
    render_journal_prompt,
)
from starcast.prompts import templates
from starcast.prompts.render import MODE_EXTENDED, MODE_FIRST

OUT = ROOT / "fixtures" / "prompts"

CONTENT_PLACEHOLDERS = {
    "discovery": ("characterName", "relationshipPhrase", "attributes"),
    "journal": ("characterName", "attributes", "relationshipAttributes", "journalTheme"),
    "comment_first": (
        "characterName",
        "attributes",
        "relationshipAttributes",
        "replyingToCharacterName",
        "relationshipDescription",
        "knowledge",
        "journalWriterCharacterName",
        "journalTheme",
        "journalEntryContent",
    ),
    "comment_extended": (
        "characterName",
        "attributes",
        "relationshipAttributes",
        "replyingToCharacterName",
        "relationshipDescription",
        "knowledge",
        "journalWriterCharacterName",
        "journalTheme",
        "journalEntryContent",
        "commentHistory",
    ),
}

TEMPLATES = {
    "discovery": templates.DISCOVERY_TEMPLATE,
    "journal": templates.JOURNAL_TEMPLATE,
    "comment_first": templates.COMMENT_FIRST_TEMPLATE,
    "comment_extended": templates.COMMENT_EXTENDED_TEMPLATE,
}


def template_goldens() -> dict[str, str]:
    ko = output_language("ko")
    language_values = {
        "outputLanguageName": ko.name,
        "diaryOpener": ko.diary_opener,
        "translationFoil": ko.translation_foil,
    }
    out = {}
    for name, text in TEMPLATES.items():
        identity = {p: "${" + p + "}" for p in CONTENT_PLACEHOLDERS[name]}
        out[f"{name}.ko.template.golden.txt"] = Template(text).substitute(
            **identity, **language_values
        )
    return out


def fixed_cast() -> CastGraph:
    graph = CastGraph()
    t = "2026-01-01T00:00:00.000000Z"
    alice = graph.create_character(
        "Alice",
        [("description", "a cartographer of drowned cities"),
         ("temper", "patient until interrupted")],
        None,
        t,
    )
    bob = graph.create_character(
        "Bob",
        [("trait", "hums sea shanties while thinking"),
         ("secret", "afraid of shallow water")],
        None,
        t,
    )
    graph.create_character(
        "Caro", [("calling", "collects unsent letters")], None, t
    )
    graph.create_character(
        "Dana", [("habit", "answers questions with questions")], None, t
    )
    caro = graph.characters["ch-3"]
    rel_bob = graph.follow(alice.id, bob.id, "Alice trusts Bob with map secrets", t)
    graph.set_knowledge(rel_bob.id, [bob.attributes[0].id])
    graph.follow(alice.id, caro.id, "Alice finds Caro unsettling", t)
    return graph


def rendered_goldens() -> dict[str, str]:
    en = output_language("en")
    ko = output_language("ko")
    graph = fixed_cast()
    alice = graph.characters["ch-1"]
    bob = graph.characters["ch-2"]
    caro = graph.characters["ch-3"]
    dana = graph.characters["ch-4"]
    network = build_network_view(alice, graph)
    theme = "the night the harbor froze over"
    journal_text = "The ice came in overnight and the gulls went quiet."
    out = {}

    bundle = render_discovery_prompt(
        DiscoveryRequest(seed=alice, phrase="Alice's oldest rival"), en
    )
    out["discovery.en.rendered.golden.txt"] = bundle.system_text
    out["discovery.en.user.golden.txt"] = bundle.user_text or ""

    out["journal.ko.rendered.golden.txt"] = render_journal_prompt(
        alice, network, theme, ko
    ).system_text
    out["journal.en.rendered.golden.txt"] = render_journal_prompt(
        alice, network, theme, en
    ).system_text

    out["comment_first_bob.en.rendered.golden.txt"] = render_comment_prompt(
        alice,
        network,
        journal_author_name=bob.name,
        journal_theme=theme,
        journal_content=journal_text,
        counterpart=build_counterpart_view(alice, bob, graph),
        history=(),
        mode=MODE_FIRST,
        language=en,
    ).system_text

    out["comment_first_caro.en.rendered.golden.txt"] = render_comment_prompt(
        alice,
        network,
        journal_author_name=caro.name,
        journal_theme=theme,
        journal_content=journal_text,
        counterpart=build_counterpart_view(alice, caro, graph),
        history=(),
        mode=MODE_FIRST,
        language=en,
    ).system_text

    out["comment_extended_dana.en.rendered.golden.txt"] = render_comment_prompt(
        alice,
        network,
        journal_author_name=dana.name,
        journal_theme=theme,
        journal_content=journal_text,
        counterpart=build_counterpart_view(alice, dana, graph),
        history=(
            (dana.name, "Maps again? What do you expect to find under all that ice?"),
            (alice.name, "The streets I drew before the water took them."),
        ),
        mode=MODE_EXTENDED,
        language=en,
    ).system_text

    return out


def main() -> int:
    OUT.mkdir(parents=True, exist_ok=True)
    files = {**template_goldens(), **rendered_goldens()}
    for name, text in sorted(files.items()):
        path = OUT / name
        path.write_text(text, encoding="utf-8")
        print(f"wrote {path} ({len(text)} chars)")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())

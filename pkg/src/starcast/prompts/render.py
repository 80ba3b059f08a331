"""Pure prompt renderers over domain snapshots.

Everything here is a deterministic function of its arguments: same inputs,
same bytes out. No I/O, no clocks, no global state, so renders are safe to
run from any number of threads.

A rendered prompt only ever contains material the feature is allowed to see:
the subject's own attributes, the knowledge-gated network view, and (for
comments) the one target journal plus the supplied thread. Nothing else is
reachable from these signatures, which is what the leak tests pin down.
"""

from __future__ import annotations

import hashlib
import re
from dataclasses import dataclass
from string import Template
from typing import Sequence

from .. import errors
from ..model import Attribute, CastGraph, Character
from . import templates
from .language import OutputLanguage

FEATURE_DISCOVERY = "discovery"
FEATURE_JOURNAL = "journal"
FEATURE_COMMENT = "comment"

MODE_FIRST = "first"
MODE_EXTENDED = "extended"

_PLACEHOLDER_RE = re.compile(r"\$\{[A-Za-z_][A-Za-z0-9_]*\}")


def placeholder_residue(text: str) -> list[str]:
    """Unexpanded ``${name}`` markers present in ``text`` (empty when clean)."""
    return _PLACEHOLDER_RE.findall(text)


@dataclass(frozen=True)
class NetworkEntry:
    """One followed character as the owner is allowed to see them."""

    target_name: str
    description: str
    attributes: tuple[tuple[str, str], ...]


@dataclass(frozen=True)
class NetworkView:
    owner: str
    entries: tuple[NetworkEntry, ...]


@dataclass(frozen=True)
class DiscoveryRequest:
    seed: Character
    phrase: str

    def validate(self) -> "DiscoveryRequest":
        if not self.phrase.strip():
            raise errors.EmptyPhrase("relationship phrase must not be blank")
        return self


@dataclass(frozen=True)
class CounterpartView:
    """The commenter's edge toward whoever they are replying to; when no edge
    exists, ``established`` is False and the renderer states that plainly
    instead of leaving dangling grammar."""

    name: str
    description: str
    knowledge: tuple[tuple[str, str], ...]
    established: bool


@dataclass(frozen=True)
class PromptBundle:
    feature: str
    system_text: str
    user_text: str | None
    output_language: str

    def digest(self) -> str:
        h = hashlib.sha256()
        for part in (self.feature, self.output_language, self.system_text, self.user_text or ""):
            h.update(part.encode("utf-8"))
            h.update(b"\x00")
        return h.hexdigest()


def format_attributes(pairs: Sequence[tuple[str, str]] | Sequence[Attribute]) -> str:
    """``key: value`` lines in the given order; empty input renders empty."""
    lines = []
    for item in pairs:
        if isinstance(item, Attribute):
            lines.append(f"{item.key}: {item.value}")
        else:
            key, value = item
            lines.append(f"{key}: {value}")
    return "\n".join(lines)


def format_knowledge(pairs: Sequence[tuple[str, str]]) -> str:
    """Inline ``key: value`` list for the single-slot knowledge placeholder."""
    return "; ".join(f"{key}: {value}" for key, value in pairs)


def format_network(view: NetworkView) -> str:
    blocks = []
    for entry in view.entries:
        head = f"You follow {entry.target_name}. Relationship: {entry.description}"
        if entry.attributes:
            body = f"What you know about {entry.target_name}:\n" + format_attributes(
                entry.attributes
            )
        else:
            body = f"You know nothing else about {entry.target_name}."
        blocks.append(f"{head}\n{body}")
    return "\n\n".join(blocks)


def build_network_view(owner: Character, graph: CastGraph) -> NetworkView:
    """One entry per outgoing follow of ``owner``, oldest edge first; each
    entry carries exactly the granted attributes in the target's stored
    order. Zero follows gives an empty view, not an error."""
    entries = []
    for rel in graph.outgoing(owner.id):
        target = graph.characters.get(rel.target)
        if target is None or target.deleted:
            continue
        gated = tuple(
            (attr.key, attr.value)
            for attr in target.attributes
            if attr.id in rel.knowledge
        )
        entries.append(
            NetworkEntry(
                target_name=target.name, description=rel.description, attributes=gated
            )
        )
    return NetworkView(owner=owner.id, entries=tuple(entries))


def build_counterpart_view(
    commenter: Character, target: Character, graph: CastGraph
) -> CounterpartView:
    rel = graph.edge(commenter.id, target.id)
    if rel is None:
        return CounterpartView(
            name=target.name,
            description=(
                f"not yet established; you have no defined relationship with {target.name}"
            ),
            knowledge=(),
            established=False,
        )
    gated = tuple(
        (attr.key, attr.value) for attr in target.attributes if attr.id in rel.knowledge
    )
    return CounterpartView(
        name=target.name, description=rel.description, knowledge=gated, established=True
    )


def render_discovery_prompt(
    request: DiscoveryRequest, language: OutputLanguage
) -> PromptBundle:
    """Seed attributes only; the network view is deliberately not an input."""
    request.validate()
    system_text = Template(templates.DISCOVERY_TEMPLATE).substitute(
        characterName=request.seed.name,
        relationshipPhrase=request.phrase,
        attributes=format_attributes(request.seed.attributes),
        outputLanguageName=language.name,
    )
    return PromptBundle(
        feature=FEATURE_DISCOVERY,
        system_text=system_text,
        user_text=request.phrase,
        output_language=language.tag,
    )


def render_journal_prompt(
    author: Character, network: NetworkView, theme: str, language: OutputLanguage
) -> PromptBundle:
    if not theme.strip():
        raise errors.EmptyTheme("journal theme must not be blank")
    system_text = Template(templates.JOURNAL_TEMPLATE).substitute(
        characterName=author.name,
        attributes=format_attributes(author.attributes),
        relationshipAttributes=format_network(network),
        journalTheme=theme,
        diaryOpener=language.diary_opener,
        outputLanguageName=language.name,
        translationFoil=language.translation_foil,
    )
    return PromptBundle(
        feature=FEATURE_JOURNAL,
        system_text=system_text,
        user_text=theme,
        output_language=language.tag,
    )


def render_comment_prompt(
    commenter: Character,
    network: NetworkView,
    journal_author_name: str,
    journal_theme: str,
    journal_content: str,
    counterpart: CounterpartView,
    history: Sequence[tuple[str, str]],
    mode: str,
    language: OutputLanguage,
) -> PromptBundle:
    """``history`` is (author name, content) pairs for the current thread
    only, oldest first. No user message accompanies a comment prompt."""
    if mode == MODE_FIRST:
        if history:
            raise ValueError("first-comment mode takes no prior comments")
        template = templates.COMMENT_FIRST_TEMPLATE
    elif mode == MODE_EXTENDED:
        if not history:
            raise errors.EmptyThreadForExtended(
                "extended-comment mode requires at least one prior comment"
            )
        template = templates.COMMENT_EXTENDED_TEMPLATE
    else:
        raise ValueError(f"unknown comment mode {mode!r}")

    if counterpart.established and counterpart.knowledge:
        knowledge = format_knowledge(counterpart.knowledge)
    elif counterpart.established:
        knowledge = f"nothing you know about {counterpart.name} beyond the relationship"
    else:
        knowledge = "nothing beyond what the journal reveals"

    mapping = {
        "characterName": commenter.name,
        "attributes": format_attributes(commenter.attributes),
        "relationshipAttributes": format_network(network),
        "replyingToCharacterName": counterpart.name,
        "relationshipDescription": counterpart.description,
        "knowledge": knowledge,
        "journalWriterCharacterName": journal_author_name,
        "journalTheme": journal_theme,
        "journalEntryContent": journal_content,
        "outputLanguageName": language.name,
        "translationFoil": language.translation_foil,
    }
    if mode == MODE_EXTENDED:
        mapping["commentHistory"] = "\n\n".join(
            f"{author}: {content}" for author, content in history
        )
    system_text = Template(template).substitute(mapping)
    return PromptBundle(
        feature=FEATURE_COMMENT,
        system_text=system_text,
        user_text=None,
        output_language=language.tag,
    )

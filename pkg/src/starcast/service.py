"""Compound operations binding the orchestrator to the store.

The HTTP handlers and the CLI's embedded mode both run through these
functions, so the two front ends produce identical commit sequences (and
therefore identical revisions and exports) for the same logical operations.

Every function persists all generation records it produced, even when the
generation itself failed; audit rows are never dropped.
"""

from __future__ import annotations

from . import errors
from .model import (
    CastGraph,
    Comment,
    CommentThread,
    JournalEntry,
    MiniProfile,
    PROVENANCE_GENERATED,
    PROVENANCE_MANUAL,
)
from .orchestrator import CommentResult, DiscoveryResult, JournalBatch, Orchestrator
from .store import ProjectStore


def discover(
    store: ProjectStore, orchestrator: Orchestrator, character_id: str, phrase: str
) -> DiscoveryResult:
    """Run discovery for a seed character. Profiles are returned, never
    auto-saved; adoption is its own operation. Records are committed."""
    graph = store.snapshot()
    seed = graph.character(character_id)
    result = orchestrator.discover_friends(seed, phrase)
    if result.records:
        store.commit(lambda g: [g.add_record(r) for r in result.records])
    return result


def adopt_profile(
    store: ProjectStore, character_id: str, profile: MiniProfile
) -> tuple:
    return store.commit(
        lambda g: g.adopt_mini_profile(character_id, profile, store.now())
    )


def generate_journals(
    store: ProjectStore,
    orchestrator: Orchestrator,
    author_ids: list[str],
    theme: str,
) -> tuple[JournalBatch, list[JournalEntry | None]]:
    """Fan out one journal per author; persist the successful slots and all
    records in a single commit so a batch is one revision."""
    graph = store.snapshot()
    batch = orchestrator.generate_journals(graph, author_ids, theme)

    entries: list[JournalEntry | None] = [None] * len(batch.slots)

    def apply(g: CastGraph) -> None:
        for index, slot in enumerate(batch.slots):
            if slot.error is None and slot.content is not None:
                entries[index] = g.add_journal(
                    slot.author, theme, slot.content, PROVENANCE_GENERATED, store.now()
                )
        for record in batch.records:
            g.add_record(record)

    store.commit(apply)
    return batch, entries


def generate_comment(
    store: ProjectStore,
    orchestrator: Orchestrator,
    journal_id: str,
    commenter_id: str,
    thread_id: str | None,
) -> tuple[CommentThread | None, Comment | None, CommentResult]:
    """Generate one comment and append it (creating the thread when none was
    given). On generation failure the record still commits and the thread is
    left untouched."""
    graph = store.snapshot()
    result = orchestrator.generate_comment(graph, journal_id, commenter_id, thread_id)
    if result.error is not None:
        store.commit(lambda g: g.add_record(result.record))
        return None, None, result

    def apply(g: CastGraph) -> tuple[CommentThread, Comment]:
        target_thread = thread_id
        if target_thread is None:
            target_thread = g.create_thread(journal_id, commenter_id, store.now()).id
        thread, comment = g.append_comment(
            target_thread,
            commenter_id,
            result.content or "",
            PROVENANCE_GENERATED,
            store.now(),
        )
        g.add_record(result.record)
        return thread, comment

    thread, comment = store.commit(apply)
    return thread, comment, result


def manual_comment(
    store: ProjectStore,
    journal_id: str,
    commenter_id: str,
    thread_id: str | None,
    content: str,
) -> tuple[CommentThread, Comment]:
    """Writer-authored comment; same thread rules as the generated path."""

    def apply(g: CastGraph) -> tuple[CommentThread, Comment]:
        g.journal(journal_id)
        target_thread = thread_id
        if target_thread is None:
            target_thread = g.create_thread(journal_id, commenter_id, store.now()).id
        else:
            thread = g.thread(target_thread)
            if thread.journal != journal_id:
                raise errors.UnknownThread(
                    f"thread {target_thread!r} does not belong to journal {journal_id!r}"
                )
        return g.append_comment(
            target_thread, commenter_id, content, PROVENANCE_MANUAL, store.now()
        )

    return store.commit(apply)

"""Character/relationship graph: domain types, invariants, and pure mutations.

No I/O and no generation logic lives here. Entities are frozen values, so a
snapshot handed to another thread stays valid; all mutation goes through
:class:`CastGraph`, which validates every precondition before touching state
(callers such as the store rely on "reject means unchanged").

Timestamps are passed in by the caller as preformatted UTC strings; the graph
itself never reads a clock.
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace
from typing import Iterable, Sequence

from . import errors

PROVENANCE_GENERATED = "generated"
PROVENANCE_MANUAL = "manual"
PROVENANCE_EDITED = "edited"
PROVENANCES = (PROVENANCE_GENERATED, PROVENANCE_MANUAL, PROVENANCE_EDITED)

STATUS_OK = "ok"
STATUS_PARSE_FAILED = "parse_failed"
STATUS_PROVIDER_ERROR = "provider_error"
STATUS_TIMEOUT = "timeout"
RECORD_STATUSES = (STATUS_OK, STATUS_PARSE_FAILED, STATUS_PROVIDER_ERROR, STATUS_TIMEOUT)


@dataclass(frozen=True)
class Attribute:
    """One labeled detail of a character. Keys may repeat; ids never do."""

    id: str
    key: str
    value: str
    order: int


@dataclass(frozen=True)
class Character:
    id: str
    name: str
    portrait: str | None
    attributes: tuple[Attribute, ...]
    created_at: str
    updated_at: str
    deleted: bool = False

    def attribute(self, attr_id: str) -> Attribute:
        for attr in self.attributes:
            if attr.id == attr_id:
                return attr
        raise errors.UnknownAttribute(f"no attribute {attr_id!r} on {self.name!r}")

    def attribute_ids(self) -> frozenset[str]:
        return frozenset(a.id for a in self.attributes)


@dataclass(frozen=True)
class Relationship:
    """Directed follow edge; ``knowledge`` grants visibility into the target's
    attributes (by attribute id) when prompts are assembled."""

    id: str
    owner: str
    target: str
    description: str
    knowledge: frozenset[str]
    created_at: str


@dataclass(frozen=True)
class MiniProfile:
    """A discovery result: one candidate character plus both relationship
    descriptions (the candidate's view and the seed's view)."""

    name: str
    introduction: str
    backstory: str
    my_relationship: str
    your_relationship: str

    FIELDS = ("name", "introduction", "backstory", "my_relationship", "your_relationship")

    def validate(self) -> "MiniProfile":
        for name in self.FIELDS:
            value = getattr(self, name)
            if not isinstance(value, str) or not value.strip():
                raise errors.EmptyProfileField(name)
        return self


@dataclass(frozen=True)
class JournalEntry:
    id: str
    author: str
    theme: str
    content: str
    provenance: str
    created_at: str
    orphaned: bool = False


@dataclass(frozen=True)
class Comment:
    id: str
    author: str
    content: str
    provenance: str
    created_at: str
    orphaned: bool = False


@dataclass(frozen=True)
class CommentThread:
    """Dyadic exchange under one journal entry. Comment authors strictly
    alternate: odd positions (1-based) belong to the initiator, even positions
    to the journal's author."""

    id: str
    journal: str
    initiator: str
    comments: tuple[Comment, ...]
    created_at: str

    def participants(self) -> frozenset[str]:
        ids = {self.initiator} | {c.author for c in self.comments}
        return frozenset(ids)


@dataclass(frozen=True)
class GenerationRecord:
    """Audit log row for one provider interaction. ``raw_output`` is kept
    verbatim for every non-timeout attempt, successful or not."""

    id: str
    feature: str
    prompt_digest: str
    raw_output: str
    status: str
    latency: float
    created_at: str


def _seq(entity_id: str) -> int:
    """Numeric suffix of an id; creation order for same-kind entities."""
    return int(entity_id.rsplit("-", 1)[1])


_ID_PREFIXES = {
    "character": "ch",
    "attribute": "at",
    "relationship": "rl",
    "journal": "jn",
    "thread": "th",
    "comment": "cm",
    "record": "gr",
}


class CastGraph:
    """In-memory project graph with invariant-enforcing mutations.

    Mutators validate all preconditions first and only then swap in new
    frozen values, so a raised error leaves the graph exactly as it was.
    """

    def __init__(self) -> None:
        self.characters: dict[str, Character] = {}
        self.relationships: dict[str, Relationship] = {}
        self.journals: dict[str, JournalEntry] = {}
        self.threads: dict[str, CommentThread] = {}
        self.records: list[GenerationRecord] = []
        self.counters: dict[str, int] = {}

    def copy(self) -> "CastGraph":
        dup = CastGraph()
        dup.characters = dict(self.characters)
        dup.relationships = dict(self.relationships)
        dup.journals = dict(self.journals)
        dup.threads = dict(self.threads)
        dup.records = list(self.records)
        dup.counters = dict(self.counters)
        return dup

    def add_record(self, record: GenerationRecord) -> GenerationRecord:
        """Append one audit row, assigning its id when the draft has none."""
        if not record.id:
            record = replace(record, id=self._new_id("record"))
        self.records.append(record)
        return record

    def _new_id(self, kind: str) -> str:
        n = self.counters.get(kind, 0) + 1
        self.counters[kind] = n
        return f"{_ID_PREFIXES[kind]}-{n}"

    # --- lookups -------------------------------------------------------

    def character(self, character_id: str, *, include_deleted: bool = False) -> Character:
        char = self.characters.get(character_id)
        if char is None or (char.deleted and not include_deleted):
            raise errors.UnknownCharacter(f"no character {character_id!r}")
        return char

    def live_characters(self) -> list[Character]:
        chars = [c for c in self.characters.values() if not c.deleted]
        return sorted(chars, key=lambda c: _seq(c.id))

    def relationship(self, rel_id: str) -> Relationship:
        rel = self.relationships.get(rel_id)
        if rel is None:
            raise errors.UnknownRelationship(f"no relationship {rel_id!r}")
        return rel

    def edge(self, owner: str, target: str) -> Relationship | None:
        for rel in self.relationships.values():
            if rel.owner == owner and rel.target == target:
                return rel
        return None

    def outgoing(self, owner: str) -> list[Relationship]:
        """Outgoing follows of ``owner``, oldest first (creation order)."""
        rels = [r for r in self.relationships.values() if r.owner == owner]
        return sorted(rels, key=lambda r: (r.created_at, _seq(r.id)))

    def journal(self, journal_id: str) -> JournalEntry:
        entry = self.journals.get(journal_id)
        if entry is None:
            raise errors.UnknownJournal(f"no journal entry {journal_id!r}")
        return entry

    def thread(self, thread_id: str) -> CommentThread:
        thread = self.threads.get(thread_id)
        if thread is None:
            raise errors.UnknownThread(f"no comment thread {thread_id!r}")
        return thread

    # --- characters and attributes --------------------------------------

    def create_character(
        self,
        name: str,
        attributes: Sequence[tuple[str, str]],
        portrait: str | None,
        now: str,
    ) -> Character:
        if not name.strip():
            raise errors.EmptyName("character name must not be blank")
        for index, (key, _value) in enumerate(attributes):
            if not key.strip():
                raise errors.AttributeKeyEmpty(index)
        char_id = self._new_id("character")
        attrs = tuple(
            Attribute(id=self._new_id("attribute"), key=key, value=value, order=order)
            for order, (key, value) in enumerate(attributes)
        )
        char = Character(
            id=char_id,
            name=name,
            portrait=portrait,
            attributes=attrs,
            created_at=now,
            updated_at=now,
        )
        self.characters[char_id] = char
        return char

    def update_character(
        self,
        character_id: str,
        now: str,
        *,
        name: str | None = None,
        portrait: str | None = None,
        clear_portrait: bool = False,
    ) -> Character:
        char = self.character(character_id)
        if name is not None and not name.strip():
            raise errors.EmptyName("character name must not be blank")
        char = replace(
            char,
            name=char.name if name is None else name,
            portrait=None if clear_portrait else (portrait or char.portrait),
            updated_at=now,
        )
        self.characters[character_id] = char
        return char

    def add_attribute(self, character_id: str, key: str, value: str, now: str) -> Character:
        char = self.character(character_id)
        if not key.strip():
            raise errors.AttributeKeyEmpty(len(char.attributes))
        attr = Attribute(
            id=self._new_id("attribute"), key=key, value=value, order=len(char.attributes)
        )
        char = replace(char, attributes=char.attributes + (attr,), updated_at=now)
        self.characters[character_id] = char
        return char

    def edit_attribute(
        self,
        character_id: str,
        attr_id: str,
        now: str,
        *,
        key: str | None = None,
        value: str | None = None,
    ) -> Character:
        char = self.character(character_id)
        attr = char.attribute(attr_id)
        if key is not None and not key.strip():
            raise errors.AttributeKeyEmpty(attr.order)
        attr = replace(
            attr,
            key=attr.key if key is None else key,
            value=attr.value if value is None else value,
        )
        attrs = tuple(attr if a.id == attr_id else a for a in char.attributes)
        self.characters[character_id] = replace(char, attributes=attrs, updated_at=now)
        return self.characters[character_id]

    def delete_attribute(self, character_id: str, attr_id: str, now: str) -> Character:
        """Remove one attribute, close the order gap, and scrub the id from
        every knowledge grant set that referenced it."""
        char = self.character(character_id)
        char.attribute(attr_id)
        kept = [a for a in char.attributes if a.id != attr_id]
        attrs = tuple(replace(a, order=i) for i, a in enumerate(kept))
        self.characters[character_id] = replace(char, attributes=attrs, updated_at=now)
        for rel_id, rel in list(self.relationships.items()):
            if rel.target == character_id and attr_id in rel.knowledge:
                self.relationships[rel_id] = replace(
                    rel, knowledge=rel.knowledge - {attr_id}
                )
        return self.characters[character_id]

    def reorder_attributes(
        self, character_id: str, new_order: Sequence[str], now: str
    ) -> Character:
        char = self.character(character_id)
        current = [a.id for a in char.attributes]
        if sorted(new_order) != sorted(current):
            raise errors.NotAPermutation(
                "new order must be a permutation of the character's attribute ids"
            )
        by_id = {a.id: a for a in char.attributes}
        attrs = tuple(
            replace(by_id[attr_id], order=i) for i, attr_id in enumerate(new_order)
        )
        self.characters[character_id] = replace(char, attributes=attrs, updated_at=now)
        return self.characters[character_id]

    def delete_character(self, character_id: str, now: str) -> Character:
        """Soft-delete: drop both directions of follow edges, keep the
        character's journals and comments but flag them orphaned."""
        char = self.character(character_id)
        self.characters[character_id] = replace(char, deleted=True, updated_at=now)
        for rel_id, rel in list(self.relationships.items()):
            if character_id in (rel.owner, rel.target):
                del self.relationships[rel_id]
        for jid, entry in list(self.journals.items()):
            if entry.author == character_id:
                self.journals[jid] = replace(entry, orphaned=True)
        for tid, thread in list(self.threads.items()):
            comments = tuple(
                replace(c, orphaned=True) if c.author == character_id else c
                for c in thread.comments
            )
            if comments != thread.comments:
                self.threads[tid] = replace(thread, comments=comments)
        return self.characters[character_id]

    # --- relationships ---------------------------------------------------

    def follow(self, owner: str, target: str, description: str, now: str) -> Relationship:
        self.character(owner)
        self.character(target)
        if owner == target:
            raise errors.SelfFollow("a character cannot follow itself")
        if self.edge(owner, target) is not None:
            raise errors.DuplicateEdge(f"{owner!r} already follows {target!r}")
        rel = Relationship(
            id=self._new_id("relationship"),
            owner=owner,
            target=target,
            description=description,
            knowledge=frozenset(),
            created_at=now,
        )
        self.relationships[rel.id] = rel
        return rel

    def set_description(self, rel_id: str, description: str) -> Relationship:
        rel = self.relationship(rel_id)
        self.relationships[rel_id] = replace(rel, description=description)
        return self.relationships[rel_id]

    def set_knowledge(self, rel_id: str, grants: Iterable[str]) -> Relationship:
        rel = self.relationship(rel_id)
        target = self.character(rel.target)
        grant_set = frozenset(grants)
        foreign = grant_set - target.attribute_ids()
        if foreign:
            raise errors.ForeignAttribute(
                f"grants {sorted(foreign)} are not attributes of {target.name!r}"
            )
        self.relationships[rel_id] = replace(rel, knowledge=grant_set)
        return self.relationships[rel_id]

    def unfollow(self, rel_id: str) -> None:
        self.relationship(rel_id)
        del self.relationships[rel_id]

    def adopt_mini_profile(
        self, seed_id: str, profile: MiniProfile, now: str
    ) -> tuple[Character, Relationship, Relationship]:
        """Save a discovery result: new character with introduction/backstory
        attributes plus the two reciprocal follow edges."""
        self.character(seed_id)
        profile.validate()
        char = self.create_character(
            profile.name,
            [("introduction", profile.introduction), ("backstory", profile.backstory)],
            None,
            now,
        )
        mine = self.follow(char.id, seed_id, profile.my_relationship, now)
        yours = self.follow(seed_id, char.id, profile.your_relationship, now)
        return char, mine, yours

    # --- journals ----------------------------------------------------------

    def add_journal(
        self, author: str, theme: str, content: str, provenance: str, now: str
    ) -> JournalEntry:
        self.character(author)
        if provenance not in (PROVENANCE_GENERATED, PROVENANCE_MANUAL):
            raise errors.ProvenanceViolation(
                f"new entries are generated or manual, not {provenance!r}"
            )
        entry = JournalEntry(
            id=self._new_id("journal"),
            author=author,
            theme=theme,
            content=content,
            provenance=provenance,
            created_at=now,
        )
        self.journals[entry.id] = entry
        return entry

    def edit_journal(
        self, journal_id: str, *, theme: str | None = None, content: str | None = None
    ) -> JournalEntry:
        entry = self.journal(journal_id)
        entry = replace(
            entry,
            theme=entry.theme if theme is None else theme,
            content=entry.content if content is None else content,
            provenance=PROVENANCE_EDITED,
        )
        self.journals[journal_id] = entry
        return entry

    def delete_journal(self, journal_id: str) -> None:
        self.journal(journal_id)
        del self.journals[journal_id]
        for tid, thread in list(self.threads.items()):
            if thread.journal == journal_id:
                del self.threads[tid]

    # --- comment threads ---------------------------------------------------

    def next_author(self, thread: CommentThread) -> str:
        """Character id whose turn the next comment is (1-based alternation:
        odd positions initiator, even positions journal author)."""
        journal = self.journal(thread.journal)
        position = len(thread.comments) + 1
        return thread.initiator if position % 2 == 1 else journal.author

    def create_thread(self, journal_id: str, initiator: str, now: str) -> CommentThread:
        journal = self.journal(journal_id)
        self.character(initiator)
        if initiator == journal.author:
            raise errors.AlternationViolation(
                "the journal's author cannot start a thread on their own entry"
            )
        thread = CommentThread(
            id=self._new_id("thread"),
            journal=journal_id,
            initiator=initiator,
            comments=(),
            created_at=now,
        )
        self.threads[thread.id] = thread
        return thread

    def append_comment(
        self, thread_id: str, author: str, content: str, provenance: str, now: str
    ) -> tuple[CommentThread, Comment]:
        thread = self.thread(thread_id)
        self.character(author)
        if not content.strip():
            raise errors.EmptyContent("comment content must not be blank")
        if provenance not in (PROVENANCE_GENERATED, PROVENANCE_MANUAL):
            raise errors.ProvenanceViolation(
                f"new comments are generated or manual, not {provenance!r}"
            )
        expected = self.next_author(thread)
        if author != expected:
            raise errors.AlternationViolation(
                f"position {len(thread.comments) + 1} belongs to {expected!r}, not {author!r}"
            )
        comment = Comment(
            id=self._new_id("comment"),
            author=author,
            content=content,
            provenance=provenance,
            created_at=now,
        )
        thread = replace(thread, comments=thread.comments + (comment,))
        self.threads[thread_id] = thread
        return thread, comment

    def edit_comment(self, comment_id: str, content: str) -> Comment:
        if not content.strip():
            raise errors.EmptyContent("comment content must not be blank")
        for tid, thread in self.threads.items():
            for comment in thread.comments:
                if comment.id == comment_id:
                    edited = replace(
                        comment, content=content, provenance=PROVENANCE_EDITED
                    )
                    comments = tuple(
                        edited if c.id == comment_id else c for c in thread.comments
                    )
                    self.threads[tid] = replace(thread, comments=comments)
                    return edited
        raise errors.UnknownComment(f"no comment {comment_id!r}")

    def delete_comment(self, comment_id: str) -> None:
        """Only the last comment of a thread may go, or alternation would
        break for everything after it; an emptied thread goes with it."""
        for tid, thread in self.threads.items():
            ids = [c.id for c in thread.comments]
            if comment_id in ids:
                if ids[-1] != comment_id:
                    raise errors.AlternationViolation(
                        "only the last comment of a thread can be deleted"
                    )
                comments = thread.comments[:-1]
                if comments:
                    self.threads[tid] = replace(thread, comments=comments)
                else:
                    del self.threads[tid]
                return
        raise errors.UnknownComment(f"no comment {comment_id!r}")

    # --- history queries -----------------------------------------------------

    def journals_by_author(self, character_id: str) -> list[JournalEntry]:
        self.character(character_id)
        entries = [e for e in self.journals.values() if e.author == character_id]
        entries.sort(key=lambda e: (e.created_at, _seq(e.id)), reverse=True)
        return entries

    def threads_by_participant(self, character_id: str) -> list[CommentThread]:
        """Threads where the character is initiator, journal author, or wrote
        a comment; newest first."""
        self.character(character_id)
        matched = []
        for thread in self.threads.values():
            journal = self.journals.get(thread.journal)
            involved = character_id in thread.participants() or (
                journal is not None and journal.author == character_id
            )
            if involved:
                matched.append(thread)
        matched.sort(key=lambda t: (t.created_at, _seq(t.id)), reverse=True)
        return matched

    def threads_by_journal(self, journal_id: str) -> list[CommentThread]:
        self.journal(journal_id)
        threads = [t for t in self.threads.values() if t.journal == journal_id]
        threads.sort(key=lambda t: (t.created_at, _seq(t.id)))
        return threads

    # --- integrity ---------------------------------------------------------

    def integrity_errors(self) -> list[str]:
        """Referential-integrity sweep; empty list means consistent."""
        problems: list[str] = []
        for rel in self.relationships.values():
            for end in (rel.owner, rel.target):
                if end not in self.characters:
                    problems.append(f"relationship {rel.id} references missing {end}")
            if rel.owner == rel.target:
                problems.append(f"relationship {rel.id} is a self-follow")
            target = self.characters.get(rel.target)
            if target is not None:
                foreign = rel.knowledge - target.attribute_ids()
                for attr_id in sorted(foreign):
                    problems.append(
                        f"relationship {rel.id} grants unknown attribute {attr_id}"
                    )
        pairs: set[tuple[str, str]] = set()
        for rel in self.relationships.values():
            pair = (rel.owner, rel.target)
            if pair in pairs:
                problems.append(f"duplicate edge {pair}")
            pairs.add(pair)
        for entry in self.journals.values():
            if entry.author not in self.characters:
                problems.append(f"journal {entry.id} references missing {entry.author}")
        for thread in self.threads.values():
            journal = self.journals.get(thread.journal)
            if journal is None:
                problems.append(f"thread {thread.id} references missing {thread.journal}")
            if thread.initiator not in self.characters:
                problems.append(f"thread {thread.id} references missing {thread.initiator}")
            if journal is not None and thread.initiator == journal.author:
                problems.append(f"thread {thread.id} initiated by the journal author")
            for i, comment in enumerate(thread.comments, start=1):
                if comment.author not in self.characters:
                    problems.append(
                        f"comment {comment.id} references missing {comment.author}"
                    )
                if journal is not None:
                    expected = thread.initiator if i % 2 == 1 else journal.author
                    if comment.author != expected:
                        problems.append(
                            f"thread {thread.id} breaks alternation at position {i}"
                        )
        return problems

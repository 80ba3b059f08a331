"""Generation pipeline: render, complete, parse, collate.

Each public method composes the pure renderers with one provider and returns
a result object carrying both the content and the audit records, one record
per provider interaction. Precondition violations (unknown ids, empty inputs,
broken alternation) raise before any provider call, so a raise from here
means nothing was spent; provider and parse failures after that point come
back inside the result instead, because their records must still be persisted.

Fan-out runs provider calls on worker threads behind a semaphore, so no more
than ``max_in_flight`` requests are outstanding at once regardless of how
many slots a batch has.
"""

from __future__ import annotations

import json
import re
import threading
import time
from concurrent.futures import ThreadPoolExecutor, as_completed
from dataclasses import dataclass, replace
from typing import Callable, Sequence

from . import errors
from .model import (
    CastGraph,
    Character,
    GenerationRecord,
    MiniProfile,
    STATUS_OK,
    STATUS_PARSE_FAILED,
    STATUS_PROVIDER_ERROR,
    STATUS_TIMEOUT,
)
from .prompts.language import OutputLanguage
from .prompts.render import (
    MODE_EXTENDED,
    MODE_FIRST,
    DiscoveryRequest,
    PromptBundle,
    build_counterpart_view,
    build_network_view,
    render_comment_prompt,
    render_discovery_prompt,
    render_journal_prompt,
)
from .provider import Provider
from .timeutil import utcnow

_FENCE_RE = re.compile(r"```(?:json)?\s*(.*?)```", re.DOTALL | re.IGNORECASE)
_MAX_FANOUT_WORKERS = 32


def parse_mini_profiles(raw: str) -> list[MiniProfile]:
    """Parse a discovery response into exactly three validated profiles.

    Applies a minimal repair pass first: unwrap one markdown code fence if
    present, then trim any prose before the first ``{`` and after the last
    ``}``. Anything beyond that is a parse failure that keeps the raw text
    attached for inspection.
    """
    fenced = _FENCE_RE.search(raw)
    text = fenced.group(1) if fenced else raw
    start, end = text.find("{"), text.rfind("}")
    if start == -1 or end < start:
        raise errors.ParseFailed("no JSON object in response", raw=raw)
    text = text[start : end + 1]
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise errors.ParseFailed(f"response is not valid JSON: {exc}", raw=raw) from exc
    if not isinstance(data, dict) or not isinstance(data.get("characters"), list):
        raise errors.ParseFailed('response lacks a "characters" array', raw=raw)
    items = data["characters"]
    if len(items) != 3:
        raise errors.WrongCount(len(items), raw=raw)
    profiles = []
    for index, item in enumerate(items):
        if not isinstance(item, dict):
            raise errors.ParseFailed(f"character {index} is not an object", raw=raw)
        for name in MiniProfile.FIELDS:
            value = item.get(name)
            if not isinstance(value, str) or not value.strip():
                raise errors.MissingField(name, index, raw=raw)
        profiles.append(
            MiniProfile(
                name=item["name"],
                introduction=item["introduction"],
                backstory=item["backstory"],
                my_relationship=item["my_relationship"],
                your_relationship=item["your_relationship"],
            )
        )
    return profiles


def serialize_mini_profiles(profiles: Sequence[MiniProfile]) -> str:
    """Canonical JSON for a profile list; parse(serialize(x)) round-trips."""
    payload = {
        "characters": [
            {name: getattr(p, name) for name in MiniProfile.FIELDS} for p in profiles
        ]
    }
    return json.dumps(payload, ensure_ascii=False, indent=2)


@dataclass
class DiscoveryResult:
    profiles: list[MiniProfile] | None
    records: list[GenerationRecord]
    error: errors.DomainError | None = None


@dataclass
class JournalSlot:
    author: str
    content: str | None
    record: GenerationRecord
    error: errors.DomainError | None = None


@dataclass
class JournalBatch:
    slots: list[JournalSlot]

    @property
    def records(self) -> list[GenerationRecord]:
        return [slot.record for slot in self.slots]

    @property
    def all_failed(self) -> bool:
        return all(slot.error is not None for slot in self.slots)


@dataclass
class CommentResult:
    content: str | None
    mode: str
    replying_to: str
    record: GenerationRecord
    error: errors.DomainError | None = None


class Orchestrator:
    """Shareable across request handlers; holds no mutable state beyond the
    in-flight semaphore."""

    def __init__(
        self,
        provider: Provider,
        language: OutputLanguage,
        max_in_flight: int = 4,
        clock: Callable[[], str] | None = None,
        timer: Callable[[], float] = time.perf_counter,
    ):
        if max_in_flight < 1:
            raise ValueError("max_in_flight must be at least 1")
        self._provider = provider
        self._language = language
        self._gate = threading.Semaphore(max_in_flight)
        self._clock = clock or utcnow
        self._timer = timer

    # one provider interaction -> (raw or None, record, error or None)
    def _attempt(
        self, bundle: PromptBundle
    ) -> tuple[str | None, GenerationRecord, errors.DomainError | None]:
        with self._gate:
            started = self._timer()
            try:
                raw: str | None = self._provider.complete(bundle)
                status, raw_output, error = STATUS_OK, raw, None
            except errors.ProviderUnconfigured:
                raise
            except errors.ProviderTimeout as exc:
                raw, status, raw_output, error = None, STATUS_TIMEOUT, "", exc
            except errors.ProviderError as exc:
                raw, status, raw_output, error = None, STATUS_PROVIDER_ERROR, exc.body, exc
            latency = self._timer() - started
        record = GenerationRecord(
            id="",
            feature=bundle.feature,
            prompt_digest=bundle.digest(),
            raw_output=raw_output,
            status=status,
            latency=latency,
            created_at=self._clock(),
        )
        return raw, record, error

    def discover_friends(self, seed: Character, phrase: str) -> DiscoveryResult:
        """One automatic re-ask on a structured-output failure; transport
        failures surface immediately (the provider already retried those).
        Results are never auto-saved; adoption is an explicit separate step."""
        bundle = render_discovery_prompt(
            DiscoveryRequest(seed=seed, phrase=phrase), self._language
        )
        records: list[GenerationRecord] = []
        last_error: errors.DomainError | None = None
        for _ in range(2):
            raw, record, error = self._attempt(bundle)
            if error is not None:
                records.append(record)
                return DiscoveryResult(None, records, error)
            try:
                profiles = parse_mini_profiles(raw or "")
            except errors.MiniProfileError as exc:
                records.append(replace(record, status=STATUS_PARSE_FAILED))
                last_error = exc
                continue
            records.append(record)
            return DiscoveryResult(profiles, records, None)
        return DiscoveryResult(None, records, last_error)

    def generate_journals(
        self, graph: CastGraph, author_ids: Sequence[str], theme: str
    ) -> JournalBatch:
        """Independent completion per author, concurrently, collated back in
        selection order; one slot's failure never aborts its siblings."""
        if not author_ids:
            raise errors.InvalidSelection("select at least one author")
        if len(set(author_ids)) != len(author_ids):
            raise errors.InvalidSelection("author selection contains duplicates")
        authors = [graph.character(author_id) for author_id in author_ids]
        bundles = [
            render_journal_prompt(
                author, build_network_view(author, graph), theme, self._language
            )
            for author in authors
        ]
        slots: list[JournalSlot | None] = [None] * len(authors)
        workers = min(_MAX_FANOUT_WORKERS, len(bundles))
        with ThreadPoolExecutor(max_workers=workers) as pool:
            futures = {
                pool.submit(self._attempt, bundle): index
                for index, bundle in enumerate(bundles)
            }
            for future in as_completed(futures):
                index = futures[future]
                raw, record, error = future.result()
                slots[index] = JournalSlot(
                    author=authors[index].id,
                    content=raw if error is None else None,
                    record=record,
                    error=error,
                )
        assert all(slot is not None for slot in slots)
        return JournalBatch(slots=list(slots))  # type: ignore[arg-type]

    def generate_comment(
        self,
        graph: CastGraph,
        journal_id: str,
        commenter_id: str,
        thread_id: str | None = None,
    ) -> CommentResult:
        """Mode is inferred: no thread means a first comment (commenter must
        not be the journal's author), a thread means an extended reply by the
        alternation-mandated next author."""
        journal = graph.journal(journal_id)
        commenter = graph.character(commenter_id)
        if thread_id is None:
            if commenter_id == journal.author:
                raise errors.AlternationViolation(
                    "the journal's author cannot write the first comment"
                )
            history_comments: tuple = ()
            replying_to_id = journal.author
            mode = MODE_FIRST
        else:
            thread = graph.thread(thread_id)
            if thread.journal != journal_id:
                raise errors.UnknownThread(
                    f"thread {thread_id!r} does not belong to journal {journal_id!r}"
                )
            expected = graph.next_author(thread)
            if commenter_id != expected:
                raise errors.AlternationViolation(
                    f"next comment belongs to {expected!r}, not {commenter_id!r}"
                )
            history_comments = thread.comments
            replying_to_id = (
                journal.author if commenter_id != journal.author else thread.initiator
            )
            mode = MODE_EXTENDED
        replying_to = graph.character(replying_to_id)
        bundle = render_comment_prompt(
            commenter=commenter,
            network=build_network_view(commenter, graph),
            journal_author_name=graph.character(journal.author, include_deleted=True).name,
            journal_theme=journal.theme,
            journal_content=journal.content,
            counterpart=build_counterpart_view(commenter, replying_to, graph),
            history=tuple(
                (graph.character(c.author, include_deleted=True).name, c.content)
                for c in history_comments
            ),
            mode=mode,
            language=self._language,
        )
        raw, record, error = self._attempt(bundle)
        return CommentResult(
            content=raw if error is None else None,
            mode=mode,
            replying_to=replying_to_id,
            record=record,
            error=error,
        )

"""History-query oracles: brute-force recomputation from persisted documents.

check_history_oracles builds randomized projects through normal commits,
reloads each persisted JSON document from disk, recomputes every history
query with independent plain loops over the raw document, and compares that
against the store's answers. Ties in created_at are deliberately frequent so
the id-sequence tiebreak is exercised.
"""

from __future__ import annotations

import json
import random
from pathlib import Path

from starcast.model import PROVENANCE_MANUAL
from starcast.store import DataDir, ProjectStore


def _n(entity_id: str) -> int:
    return int(entity_id.rsplit("-", 1)[1])


def brute_journals_by_author(doc: dict, character_id: str) -> list[str]:
    rows = [j for j in doc["journals"] if j["author"] == character_id]
    rows.sort(key=lambda j: (j["created_at"], _n(j["id"])), reverse=True)
    return [j["id"] for j in rows]


def brute_threads_by_participant(doc: dict, character_id: str) -> list[str]:
    journal_author = {j["id"]: j["author"] for j in doc["journals"]}
    rows = []
    for t in doc["threads"]:
        involved = (
            t["initiator"] == character_id
            or any(c["author"] == character_id for c in t["comments"])
            or journal_author.get(t["journal"]) == character_id
        )
        if involved:
            rows.append(t)
    rows.sort(key=lambda t: (t["created_at"], _n(t["id"])), reverse=True)
    return [t["id"] for t in rows]


def brute_threads_by_journal(doc: dict, journal_id: str) -> list[str]:
    rows = [t for t in doc["threads"] if t["journal"] == journal_id]
    rows.sort(key=lambda t: (t["created_at"], _n(t["id"])))
    return [t["id"] for t in rows]


def _sticky_clock(rng: random.Random):
    """Ticking clock that repeats the previous stamp about a third of the
    time, forcing the sequence tiebreak into play."""
    state = {"n": 0}

    def clock() -> str:
        if state["n"] == 0 or rng.random() >= 0.35:
            state["n"] += 1
        return f"2026-01-01T00:00:00.{state['n']:06d}Z"

    return clock


def build_random_project(data_dir: DataDir, rng: random.Random, name: str) -> ProjectStore:
    store = data_dir.create_project(name)
    char_ids: list[str] = []
    for i in range(rng.randint(2, 5)):
        char = store.commit(
            lambda g, i=i: g.create_character(f"P{i}", [("k", f"v{i}")], None, store.now())
        )
        char_ids.append(char.id)
    journal_ids: list[str] = []
    for i in range(rng.randint(0, 8)):
        author = rng.choice(char_ids)
        entry = store.commit(
            lambda g, a=author, i=i: g.add_journal(
                a, f"t{i}", f"c{i}", PROVENANCE_MANUAL, store.now()
            )
        )
        journal_ids.append(entry.id)
    for _ in range(rng.randint(0, 4)):
        if not journal_ids:
            break
        journal_id = rng.choice(journal_ids)
        author = store.snapshot().journal(journal_id).author
        candidates = [c for c in char_ids if c != author]
        if not candidates:
            continue
        initiator = rng.choice(candidates)
        thread = store.commit(
            lambda g, j=journal_id, s=initiator: g.create_thread(j, s, store.now())
        )
        for n in range(rng.randint(0, 4)):
            snap = store.snapshot()
            who = snap.next_author(snap.thread(thread.id))
            store.commit(
                lambda g, t=thread.id, w=who, n=n: g.append_comment(
                    t, w, f"c{n}", PROVENANCE_MANUAL, store.now()
                )
            )
    return store


def check_history_oracles(root: Path, iterations: int) -> int:
    """Returns the number of individual query comparisons performed."""
    checked = 0
    for seed in range(iterations):
        rng = random.Random(20_000 + seed)
        data_dir = DataDir(root / f"run{seed}", clock=_sticky_clock(rng))
        store = build_random_project(data_dir, rng, f"oracle project {seed}")
        path = data_dir._path_for(store.project_id)
        doc = json.loads(path.read_text(encoding="utf-8"))
        assert doc["revision"] == store.revision, f"seed {seed}: revision drifted"

        char_ids = [c["id"] for c in doc["characters"]]
        journal_ids = [j["id"] for j in doc["journals"]]
        for char_id in char_ids:
            got = [e.id for e in store.journals_by_author(char_id)]
            assert got == brute_journals_by_author(doc, char_id), (
                f"seed {seed}: journals_by_author({char_id})"
            )
            checked += 1
            got = [t.id for t in store.threads_by_participant(char_id)]
            assert got == brute_threads_by_participant(doc, char_id), (
                f"seed {seed}: threads_by_participant({char_id})"
            )
            checked += 1
        for journal_id in journal_ids:
            got = [t.id for t in store.threads_by_journal(journal_id)]
            assert got == brute_threads_by_journal(doc, journal_id), (
                f"seed {seed}: threads_by_journal({journal_id})"
            )
            checked += 1
    return checked

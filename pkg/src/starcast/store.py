"""Durable project persistence: one canonical JSON document per project.

Layout under the data directory:

    projects/<project id>.json   the whole project, canonically serialized
    images/<sha256>              content-addressed portrait bytes

Writes go through a per-project lock (single serialized writer), mutate a
copy of the graph, bump the revision by exactly one, and land via a
temp-file rename, so a crash or a rejected mutation never leaves a torn or
half-applied document. Readers get immutable snapshots and never block.

The export archive is a zip with fixed timestamps and sorted member names:
exporting the same revision twice gives identical bytes.
"""

from __future__ import annotations

import hashlib
import io
import json
import os
import threading
import zipfile
from pathlib import Path
from typing import Any, Callable, TypeVar

from . import errors
from .model import (
    Attribute,
    CastGraph,
    Character,
    Comment,
    CommentThread,
    GenerationRecord,
    JournalEntry,
    Relationship,
    _seq,
)
from .timeutil import utcnow

SCHEMA_VERSION = 1

T = TypeVar("T")

_ZIP_EPOCH = (2020, 1, 1, 0, 0, 0)


def project_id_for_name(name: str) -> str:
    """Stable id from the project name, so re-seeding the same manifest and
    the API path land on the same project."""
    return "pr-" + hashlib.sha256(name.encode("utf-8")).hexdigest()[:12]


def canonical_json(obj: Any) -> str:
    return json.dumps(obj, ensure_ascii=False, indent=2, sort_keys=True) + "\n"


# --- document mapping -------------------------------------------------------

def character_doc(char: Character) -> dict:
    return {
        "id": char.id,
        "name": char.name,
        "portrait": char.portrait,
        "attributes": [
            {"id": a.id, "key": a.key, "value": a.value, "order": a.order}
            for a in char.attributes
        ],
        "created_at": char.created_at,
        "updated_at": char.updated_at,
        "deleted": char.deleted,
    }


def _doc_character(doc: dict) -> Character:
    return Character(
        id=doc["id"],
        name=doc["name"],
        portrait=doc["portrait"],
        attributes=tuple(
            Attribute(id=a["id"], key=a["key"], value=a["value"], order=a["order"])
            for a in doc["attributes"]
        ),
        created_at=doc["created_at"],
        updated_at=doc["updated_at"],
        deleted=doc["deleted"],
    )


def relationship_doc(rel: Relationship) -> dict:
    return {
        "id": rel.id,
        "owner": rel.owner,
        "target": rel.target,
        "description": rel.description,
        "knowledge": sorted(rel.knowledge, key=_seq),
        "created_at": rel.created_at,
    }


def _doc_relationship(doc: dict) -> Relationship:
    return Relationship(
        id=doc["id"],
        owner=doc["owner"],
        target=doc["target"],
        description=doc["description"],
        knowledge=frozenset(doc["knowledge"]),
        created_at=doc["created_at"],
    )


def journal_doc(entry: JournalEntry) -> dict:
    return {
        "id": entry.id,
        "author": entry.author,
        "theme": entry.theme,
        "content": entry.content,
        "provenance": entry.provenance,
        "created_at": entry.created_at,
        "orphaned": entry.orphaned,
    }


def _doc_journal(doc: dict) -> JournalEntry:
    return JournalEntry(
        id=doc["id"],
        author=doc["author"],
        theme=doc["theme"],
        content=doc["content"],
        provenance=doc["provenance"],
        created_at=doc["created_at"],
        orphaned=doc["orphaned"],
    )


def comment_doc(comment: Comment) -> dict:
    return {
        "id": comment.id,
        "author": comment.author,
        "content": comment.content,
        "provenance": comment.provenance,
        "created_at": comment.created_at,
        "orphaned": comment.orphaned,
    }


def thread_doc(thread: CommentThread) -> dict:
    return {
        "id": thread.id,
        "journal": thread.journal,
        "initiator": thread.initiator,
        "created_at": thread.created_at,
        "comments": [comment_doc(c) for c in thread.comments],
    }


def _doc_thread(doc: dict) -> CommentThread:
    return CommentThread(
        id=doc["id"],
        journal=doc["journal"],
        initiator=doc["initiator"],
        created_at=doc["created_at"],
        comments=tuple(
            Comment(
                id=c["id"],
                author=c["author"],
                content=c["content"],
                provenance=c["provenance"],
                created_at=c["created_at"],
                orphaned=c["orphaned"],
            )
            for c in doc["comments"]
        ),
    )


def record_doc(record: GenerationRecord) -> dict:
    return {
        "id": record.id,
        "feature": record.feature,
        "prompt_digest": record.prompt_digest,
        "raw_output": record.raw_output,
        "status": record.status,
        "latency": record.latency,
        "created_at": record.created_at,
    }


def _doc_record(doc: dict) -> GenerationRecord:
    return GenerationRecord(
        id=doc["id"],
        feature=doc["feature"],
        prompt_digest=doc["prompt_digest"],
        raw_output=doc["raw_output"],
        status=doc["status"],
        latency=doc["latency"],
        created_at=doc["created_at"],
    )


def graph_to_docs(graph: CastGraph) -> dict[str, list[dict]]:
    by_id = lambda items: sorted(items, key=lambda e: _seq(e.id))  # noqa: E731
    return {
        "characters": [character_doc(c) for c in by_id(graph.characters.values())],
        "relationships": [relationship_doc(r) for r in by_id(graph.relationships.values())],
        "journals": [journal_doc(j) for j in by_id(graph.journals.values())],
        "threads": [thread_doc(t) for t in by_id(graph.threads.values())],
        "records": [record_doc(r) for r in by_id(graph.records)],
    }


def graph_from_docs(docs: dict) -> CastGraph:
    graph = CastGraph()
    for doc in docs.get("characters", []):
        char = _doc_character(doc)
        graph.characters[char.id] = char
    for doc in docs.get("relationships", []):
        rel = _doc_relationship(doc)
        graph.relationships[rel.id] = rel
    for doc in docs.get("journals", []):
        entry = _doc_journal(doc)
        graph.journals[entry.id] = entry
    for doc in docs.get("threads", []):
        thread = _doc_thread(doc)
        graph.threads[thread.id] = thread
    for doc in docs.get("records", []):
        graph.records.append(_doc_record(doc))
    graph.counters = dict(docs.get("counters", {}))
    return graph


# --- project store ----------------------------------------------------------

class ProjectStore:
    """One project's state plus its on-disk document."""

    def __init__(
        self,
        path: Path,
        project_id: str,
        name: str,
        created_at: str,
        revision: int = 0,
        graph: CastGraph | None = None,
        clock: Callable[[], str] | None = None,
    ):
        self._path = path
        self.project_id = project_id
        self.name = name
        self.created_at = created_at
        self._revision = revision
        self._graph = graph or CastGraph()
        self._clock = clock or utcnow
        self._lock = threading.RLock()

    @classmethod
    def create(
        cls, path: Path, name: str, clock: Callable[[], str] | None = None
    ) -> "ProjectStore":
        if not name.strip():
            raise errors.EmptyName("project name must not be blank")
        clock = clock or utcnow
        store = cls(
            path=path,
            project_id=project_id_for_name(name),
            name=name,
            created_at=clock(),
            clock=clock,
        )
        store._persist()
        return store

    @classmethod
    def load(cls, path: Path, clock: Callable[[], str] | None = None) -> "ProjectStore":
        try:
            doc = json.loads(path.read_text(encoding="utf-8"))
        except OSError as exc:
            raise errors.StorageFailure(f"cannot read {path}: {exc}") from exc
        except json.JSONDecodeError as exc:
            raise errors.StorageFailure(f"corrupt project file {path}: {exc}") from exc
        if doc.get("schema_version") != SCHEMA_VERSION:
            raise errors.SchemaMismatch(
                f"project file {path} has schema_version {doc.get('schema_version')!r}, "
                f"supported: {SCHEMA_VERSION}"
            )
        return cls(
            path=path,
            project_id=doc["id"],
            name=doc["name"],
            created_at=doc["created_at"],
            revision=doc["revision"],
            graph=graph_from_docs(doc),
            clock=clock,
        )

    @property
    def revision(self) -> int:
        with self._lock:
            return self._revision

    def now(self) -> str:
        return self._clock()

    def snapshot(self) -> CastGraph:
        with self._lock:
            return self._graph.copy()

    def commit(self, mutate: Callable[[CastGraph], T]) -> T:
        """Run ``mutate`` on a copy of the graph; only on success does the
        copy become current, the revision advance by one, and the file land.
        A raising mutation leaves store and disk untouched."""
        with self._lock:
            work = self._graph.copy()
            result = mutate(work)
            previous = (self._graph, self._revision)
            self._graph = work
            self._revision += 1
            try:
                self._persist()
            except Exception:
                self._graph, self._revision = previous
                raise
            return result

    def to_doc(self) -> dict:
        with self._lock:
            doc = {
                "schema_version": SCHEMA_VERSION,
                "id": self.project_id,
                "name": self.name,
                "created_at": self.created_at,
                "revision": self._revision,
                "counters": dict(self._graph.counters),
            }
            doc.update(graph_to_docs(self._graph))
            return doc

    def _persist(self) -> None:
        tmp = self._path.with_name(self._path.name + ".tmp")
        try:
            tmp.write_text(canonical_json(self.to_doc()), encoding="utf-8")
            os.replace(tmp, self._path)
        except OSError as exc:
            raise errors.StorageFailure(f"cannot write {self._path}: {exc}") from exc

    # history queries over the current snapshot

    def journals_by_author(self, character_id: str) -> list[JournalEntry]:
        with self._lock:
            return self._graph.journals_by_author(character_id)

    def threads_by_participant(self, character_id: str) -> list[CommentThread]:
        with self._lock:
            return self._graph.threads_by_participant(character_id)

    def threads_by_journal(self, journal_id: str) -> list[CommentThread]:
        with self._lock:
            return self._graph.threads_by_journal(journal_id)


# --- images -----------------------------------------------------------------

_MAGIC_TYPES = (
    (b"\x89PNG\r\n\x1a\n", "image/png"),
    (b"\xff\xd8\xff", "image/jpeg"),
    (b"GIF87a", "image/gif"),
    (b"GIF89a", "image/gif"),
)


def sniff_media_type(data: bytes) -> str:
    for magic, media_type in _MAGIC_TYPES:
        if data.startswith(magic):
            return media_type
    if data[:4] == b"RIFF" and data[8:12] == b"WEBP":
        return "image/webp"
    return "application/octet-stream"


class ImageStore:
    """Content-addressed blobs: the ref IS the sha256 of the bytes."""

    def __init__(self, root: Path):
        self._root = root
        self._root.mkdir(parents=True, exist_ok=True)

    def put(self, data: bytes) -> str:
        ref = hashlib.sha256(data).hexdigest()
        path = self._root / ref
        if not path.exists():
            tmp = path.with_name(ref + ".tmp")
            tmp.write_bytes(data)
            os.replace(tmp, path)
        return ref

    def get(self, ref: str) -> bytes:
        path = self._root / ref
        if not _is_hex_ref(ref) or not path.is_file():
            raise errors.UnknownImage(f"no image {ref!r}")
        return path.read_bytes()

    def exists(self, ref: str) -> bool:
        return _is_hex_ref(ref) and (self._root / ref).is_file()


def _is_hex_ref(ref: str) -> bool:
    return len(ref) == 64 and all(c in "0123456789abcdef" for c in ref)


# --- data directory ---------------------------------------------------------

class DataDir:
    """Registry of projects plus the shared image store under one root."""

    def __init__(self, root: str | Path, clock: Callable[[], str] | None = None):
        self.root = Path(root)
        self._clock = clock or utcnow
        self._projects_dir = self.root / "projects"
        try:
            self._projects_dir.mkdir(parents=True, exist_ok=True)
            probe = self.root / ".writable"
            probe.write_text("", encoding="utf-8")
            probe.unlink()
        except OSError as exc:
            raise errors.DataDirUnwritable(
                f"data directory {self.root} is not writable: {exc}"
            ) from exc
        self.images = ImageStore(self.root / "images")
        self._open: dict[str, ProjectStore] = {}
        self._lock = threading.Lock()

    def _path_for(self, project_id: str) -> Path:
        return self._projects_dir / f"{project_id}.json"

    def create_project(self, name: str) -> ProjectStore:
        project_id = project_id_for_name(name)
        with self._lock:
            if project_id in self._open or self._path_for(project_id).exists():
                raise errors.ProjectExists(f"project {name!r} already exists")
            store = ProjectStore.create(self._path_for(project_id), name, self._clock)
            self._open[project_id] = store
            return store

    def open_project(self, project_id: str) -> ProjectStore:
        with self._lock:
            store = self._open.get(project_id)
            if store is None:
                path = self._path_for(project_id)
                if not path.is_file():
                    raise errors.UnknownProject(f"no project {project_id!r}")
                store = ProjectStore.load(path, self._clock)
                self._open[project_id] = store
            return store

    def get_or_create(self, name: str) -> ProjectStore:
        try:
            return self.open_project(project_id_for_name(name))
        except errors.UnknownProject:
            return self.create_project(name)

    def list_projects(self) -> list[dict]:
        with self._lock:
            rows = []
            for path in sorted(self._projects_dir.glob("*.json")):
                project_id = path.stem
                store = self._open.get(project_id)
                if store is None:
                    store = ProjectStore.load(path, self._clock)
                    self._open[project_id] = store
                rows.append(
                    {
                        "id": store.project_id,
                        "name": store.name,
                        "revision": store.revision,
                        "created_at": store.created_at,
                    }
                )
            return rows


# --- archives ---------------------------------------------------------------

def export_archive(store: ProjectStore, images: ImageStore) -> bytes:
    """Deterministic zip of the whole project; portraits ride along so the
    archive is self-contained."""
    doc = store.to_doc()
    members: dict[str, bytes] = {
        "project.json": canonical_json(
            {
                "schema_version": doc["schema_version"],
                "id": doc["id"],
                "name": doc["name"],
                "created_at": doc["created_at"],
                "revision": doc["revision"],
                "counters": doc["counters"],
            }
        ).encode("utf-8"),
    }
    for collection in ("characters", "relationships", "journals", "threads", "records"):
        members[f"{collection}.json"] = canonical_json(doc[collection]).encode("utf-8")
    for char_doc in doc["characters"]:
        ref = char_doc["portrait"]
        if ref and images.exists(ref):
            members[f"images/{ref}"] = images.get(ref)
    buffer = io.BytesIO()
    with zipfile.ZipFile(buffer, "w", compression=zipfile.ZIP_DEFLATED) as archive:
        for name in sorted(members):
            info = zipfile.ZipInfo(name, date_time=_ZIP_EPOCH)
            info.compress_type = zipfile.ZIP_DEFLATED
            archive.writestr(info, members[name])
    return buffer.getvalue()


def import_archive(data_dir: DataDir, payload: bytes) -> ProjectStore:
    """Recreate a project from an archive, ids and revision preserved.
    Refuses archives whose schema is unsupported, whose content breaks
    referential integrity, or whose project id already exists here."""
    try:
        archive = zipfile.ZipFile(io.BytesIO(payload))
    except zipfile.BadZipFile as exc:
        raise errors.CorruptArchive(f"not a zip archive: {exc}") from exc
    with archive:
        names = set(archive.namelist())
        required = {
            "project.json",
            "characters.json",
            "relationships.json",
            "journals.json",
            "threads.json",
            "records.json",
        }
        missing = required - names
        if missing:
            raise errors.CorruptArchive(f"archive lacks {sorted(missing)}")

        def read_json(name: str) -> Any:
            try:
                return json.loads(archive.read(name).decode("utf-8"))
            except (json.JSONDecodeError, UnicodeDecodeError) as exc:
                raise errors.CorruptArchive(f"{name} is unreadable: {exc}") from exc

        meta = read_json("project.json")
        if meta.get("schema_version") != SCHEMA_VERSION:
            raise errors.SchemaMismatch(
                f"archive schema_version {meta.get('schema_version')!r} unsupported; "
                f"supported: {SCHEMA_VERSION}"
            )
        docs = {name: read_json(f"{name}.json") for name in (
            "characters", "relationships", "journals", "threads", "records"
        )}
        docs["counters"] = meta.get("counters", {})
        try:
            graph = graph_from_docs(docs)
        except (KeyError, TypeError) as exc:
            raise errors.CorruptArchive(f"malformed collection document: {exc}") from exc
        problems = graph.integrity_errors()
        if problems:
            raise errors.CorruptArchive(
                "archive breaks referential integrity: " + "; ".join(problems)
            )
        project_id = meta["id"]
        path = data_dir._path_for(project_id)
        with data_dir._lock:
            if project_id in data_dir._open or path.exists():
                raise errors.ProjectExists(f"project {project_id!r} already exists")
            for name in sorted(names):
                if name.startswith("images/"):
                    data = archive.read(name)
                    ref = name.split("/", 1)[1]
                    if hashlib.sha256(data).hexdigest() != ref:
                        raise errors.CorruptArchive(f"image {ref} fails its hash")
                    data_dir.images.put(data)
            store = ProjectStore(
                path=path,
                project_id=project_id,
                name=meta["name"],
                created_at=meta["created_at"],
                revision=meta["revision"],
                graph=graph,
                clock=data_dir._clock,
            )
            store._persist()
            data_dir._open[project_id] = store
            return store

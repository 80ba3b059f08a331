"""castctl: manifest-driven seeding, generation jobs, exports, and the server.

Two backends expose the same operation surface. ``--embedded DATA_DIR`` works
directly against a data directory in process; ``--server URL`` drives a
running service over HTTP. Both produce identical project state for the same
manifest because they share the planning code here and the domain code below.

Seeding is an idempotent upsert keyed by name: running seed twice in a row
performs no writes the second time, so the project revision is unchanged.
Job references are resolved by character name when the job runs, which lets a
comment job target a character adopted by an earlier discovery job.

Exit codes: 0 success, 1 at least one generation job failed, 2 usage,
manifest, or environment errors.
"""

from __future__ import annotations

import argparse
import dataclasses
import json
import os
import sys
import time
from pathlib import Path
from typing import Callable, Mapping, Sequence

import httpx

from . import errors, service
from .api import error_payload
from .config import config_from_env
from .manifest import (
    CommentJob,
    DiscoveryJob,
    JournalJob,
    Manifest,
    ManifestCharacter,
    load_manifest,
)
from .model import CastGraph, CommentThread, MiniProfile, _seq
from .orchestrator import Orchestrator
from .prompts.language import output_language
from .provider import FixtureProvider
from .store import (
    DataDir,
    ProjectStore,
    character_doc,
    comment_doc,
    export_archive,
    journal_doc,
    relationship_doc,
    sniff_media_type,
    thread_doc,
)
from .timeutil import utcnow


class _UsageError(Exception):
    """Bad flag combinations and malformed values; maps to exit code 2."""


def _thread_with_turn(graph: CastGraph, thread: CommentThread) -> dict:
    doc = thread_doc(thread)
    doc["next_author"] = graph.next_author(thread)
    return doc


def _record_tail(store: ProjectStore, count: int) -> list[str]:
    graph = store.snapshot()
    return [r.id for r in graph.records[-count:]] if count else []


class EmbeddedClient:
    """Operation surface over a data directory, no HTTP involved.

    Every method performs the same commits and returns the same document
    shapes as the corresponding endpoint, so the two backends are
    interchangeable from the planner's point of view.
    """

    def __init__(self, data_dir: DataDir, orchestrator: Orchestrator | None = None):
        self._data_dir = data_dir
        self._orch = orchestrator

    def _store(self, project_id: str) -> ProjectStore:
        return self._data_dir.open_project(project_id)

    def _orchestrator(self) -> Orchestrator:
        if self._orch is None:
            raise RuntimeError("embedded client built without an orchestrator")
        return self._orch

    # --- projects ---

    def list_projects(self) -> list[dict]:
        return self._data_dir.list_projects()

    def create_project(self, name: str) -> dict:
        store = self._data_dir.create_project(name)
        return {
            "id": store.project_id,
            "name": store.name,
            "revision": store.revision,
            "created_at": store.created_at,
        }

    # --- characters ---

    def list_characters(self, project_id: str) -> list[dict]:
        graph = self._store(project_id).snapshot()
        return [character_doc(c) for c in graph.live_characters()]

    def create_character(
        self,
        project_id: str,
        name: str,
        attributes: Sequence[tuple[str, str]],
        portrait: str | None,
    ) -> dict:
        store = self._store(project_id)
        char = store.commit(
            lambda g: g.create_character(name, list(attributes), portrait, store.now())
        )
        return character_doc(char)

    def update_character(
        self, project_id: str, character_id: str, *, portrait: str | None
    ) -> dict:
        store = self._store(project_id)
        char = store.commit(
            lambda g: g.update_character(character_id, store.now(), portrait=portrait)
        )
        return character_doc(char)

    def add_attribute(
        self, project_id: str, character_id: str, key: str, value: str
    ) -> dict:
        store = self._store(project_id)
        char = store.commit(
            lambda g: g.add_attribute(character_id, key, value, store.now())
        )
        return character_doc(char)

    def edit_attribute(
        self,
        project_id: str,
        character_id: str,
        attribute_id: str,
        *,
        key: str | None = None,
        value: str | None = None,
    ) -> dict:
        store = self._store(project_id)
        char = store.commit(
            lambda g: g.edit_attribute(
                character_id, attribute_id, store.now(), key=key, value=value
            )
        )
        return character_doc(char)

    # --- relationships ---

    def list_relationships(
        self, project_id: str, owner: str | None = None, target: str | None = None
    ) -> list[dict]:
        graph = self._store(project_id).snapshot()
        rels = sorted(
            graph.relationships.values(), key=lambda r: (r.created_at, _seq(r.id))
        )
        if owner is not None:
            rels = [r for r in rels if r.owner == owner]
        if target is not None:
            rels = [r for r in rels if r.target == target]
        return [relationship_doc(r) for r in rels]

    def follow(
        self, project_id: str, owner: str, target: str, description: str
    ) -> dict:
        store = self._store(project_id)
        rel = store.commit(
            lambda g: g.follow(owner, target, description, store.now())
        )
        return relationship_doc(rel)

    def set_description(
        self, project_id: str, relationship_id: str, description: str
    ) -> dict:
        store = self._store(project_id)
        rel = store.commit(lambda g: g.set_description(relationship_id, description))
        return relationship_doc(rel)

    def set_knowledge(
        self, project_id: str, relationship_id: str, grants: Sequence[str]
    ) -> dict:
        store = self._store(project_id)
        rel = store.commit(lambda g: g.set_knowledge(relationship_id, list(grants)))
        return relationship_doc(rel)

    # --- media ---

    def upload_image(self, payload: bytes) -> dict:
        if not payload:
            raise errors.EmptyContent("image body must not be empty")
        ref = self._data_dir.images.put(payload)
        return {"ref": ref, "media_type": sniff_media_type(payload)}

    # --- generation ---

    def discover(self, project_id: str, character_id: str, phrase: str) -> dict:
        store = self._store(project_id)
        result = service.discover(store, self._orchestrator(), character_id, phrase)
        if result.error is not None:
            raise result.error
        profiles = result.profiles or []
        return {
            "profiles": [
                {name: getattr(p, name) for name in MiniProfile.FIELDS}
                for p in profiles
            ],
            "record_ids": _record_tail(store, len(result.records)),
        }

    def adopt(self, project_id: str, character_id: str, profile: dict) -> dict:
        store = self._store(project_id)
        mini = MiniProfile(**profile).validate()
        char, mine, yours = service.adopt_profile(store, character_id, mini)
        return {
            "character": character_doc(char),
            "relationships": [relationship_doc(mine), relationship_doc(yours)],
        }

    def generate_journals(
        self, project_id: str, author_ids: Sequence[str], theme: str
    ) -> dict:
        store = self._store(project_id)
        batch, entries = service.generate_journals(
            store, self._orchestrator(), list(author_ids), theme
        )
        if batch.all_failed:
            first = next(s.error for s in batch.slots if s.error is not None)
            raise errors.AllFailed(
                f"every journal slot failed; first error: {first.code}: {first.message}"
            )
        record_ids = _record_tail(store, len(batch.slots))
        slots = []
        for (slot, entry), record_id in zip(zip(batch.slots, entries), record_ids):
            row: dict = {"author": slot.author, "record_id": record_id}
            if slot.error is None and entry is not None:
                row["status"] = "ok"
                row["entry"] = journal_doc(entry)
            else:
                err = slot.error
                row["status"] = "error"
                row["error"] = error_payload(err)["error"] if err else None
            slots.append(row)
        return {"slots": slots}

    def create_comment(
        self,
        project_id: str,
        journal_id: str,
        commenter_id: str,
        thread_id: str | None,
    ) -> dict:
        store = self._store(project_id)
        thread, comment, result = service.generate_comment(
            store, self._orchestrator(), journal_id, commenter_id, thread_id
        )
        if result.error is not None:
            raise result.error
        assert thread is not None and comment is not None
        graph = store.snapshot()
        return {
            "thread": _thread_with_turn(graph, graph.thread(thread.id)),
            "comment": comment_doc(comment),
            "record_id": graph.records[-1].id,
        }

    # --- history and export ---

    def journals_by_author(self, project_id: str, character_id: str) -> list[dict]:
        entries = self._store(project_id).journals_by_author(character_id)
        return [journal_doc(e) for e in entries]

    def threads_by_journal(self, project_id: str, journal_id: str) -> list[dict]:
        graph = self._store(project_id).snapshot()
        threads = graph.threads_by_journal(journal_id)
        return [_thread_with_turn(graph, t) for t in threads]

    def export(self, project_id: str) -> bytes:
        store = self._store(project_id)
        return export_archive(store, self._data_dir.images)


def _remote_error(response: httpx.Response) -> errors.DomainError:
    try:
        payload = response.json()
    except ValueError:
        payload = {}
    detail = payload.get("error") if isinstance(payload, dict) else None
    detail = detail if isinstance(detail, dict) else {}
    exc = errors.DomainError(detail.get("message") or f"HTTP {response.status_code}")
    exc.code = detail.get("code") or f"HTTP{response.status_code}"
    return exc


class HttpClient:
    """Same operation surface as EmbeddedClient, spoken over the REST API."""

    def __init__(
        self,
        base_url: str,
        token: str | None = None,
        client: httpx.Client | None = None,
    ):
        headers = {"Authorization": f"Bearer {token}"} if token else {}
        self._client = client or httpx.Client(
            base_url=base_url.rstrip("/"), headers=headers, timeout=300.0
        )

    def _json(self, method: str, path: str, **kwargs) -> dict | list:
        response = self._client.request(method, path, **kwargs)
        if response.status_code >= 400:
            raise _remote_error(response)
        return response.json()

    def list_projects(self) -> list[dict]:
        return self._json("GET", "/api/projects")["projects"]

    def create_project(self, name: str) -> dict:
        return self._json("POST", "/api/projects", json={"name": name})

    def list_characters(self, project_id: str) -> list[dict]:
        path = f"/api/projects/{project_id}/characters"
        return self._json("GET", path)["characters"]

    def create_character(
        self,
        project_id: str,
        name: str,
        attributes: Sequence[tuple[str, str]],
        portrait: str | None,
    ) -> dict:
        body = {
            "name": name,
            "attributes": [{"key": k, "value": v} for k, v in attributes],
            "portrait": portrait,
        }
        return self._json("POST", f"/api/projects/{project_id}/characters", json=body)

    def update_character(
        self, project_id: str, character_id: str, *, portrait: str | None
    ) -> dict:
        path = f"/api/projects/{project_id}/characters/{character_id}"
        return self._json("PATCH", path, json={"portrait": portrait})

    def add_attribute(
        self, project_id: str, character_id: str, key: str, value: str
    ) -> dict:
        path = f"/api/projects/{project_id}/characters/{character_id}/attributes"
        return self._json("POST", path, json={"key": key, "value": value})

    def edit_attribute(
        self,
        project_id: str,
        character_id: str,
        attribute_id: str,
        *,
        key: str | None = None,
        value: str | None = None,
    ) -> dict:
        path = (
            f"/api/projects/{project_id}/characters/{character_id}"
            f"/attributes/{attribute_id}"
        )
        body = {}
        if key is not None:
            body["key"] = key
        if value is not None:
            body["value"] = value
        return self._json("PATCH", path, json=body)

    def list_relationships(
        self, project_id: str, owner: str | None = None, target: str | None = None
    ) -> list[dict]:
        params = {}
        if owner is not None:
            params["owner"] = owner
        if target is not None:
            params["target"] = target
        path = f"/api/projects/{project_id}/relationships"
        return self._json("GET", path, params=params)["relationships"]

    def follow(
        self, project_id: str, owner: str, target: str, description: str
    ) -> dict:
        body = {"owner": owner, "target": target, "description": description}
        return self._json("POST", f"/api/projects/{project_id}/relationships", json=body)

    def set_description(
        self, project_id: str, relationship_id: str, description: str
    ) -> dict:
        path = f"/api/projects/{project_id}/relationships/{relationship_id}"
        return self._json("PATCH", path, json={"description": description})

    def set_knowledge(
        self, project_id: str, relationship_id: str, grants: Sequence[str]
    ) -> dict:
        path = f"/api/projects/{project_id}/relationships/{relationship_id}/knowledge"
        return self._json("PUT", path, json={"grants": list(grants)})

    def upload_image(self, payload: bytes) -> dict:
        return self._json(
            "POST",
            "/api/images",
            content=payload,
            headers={"content-type": "application/octet-stream"},
        )

    def discover(self, project_id: str, character_id: str, phrase: str) -> dict:
        path = f"/api/projects/{project_id}/characters/{character_id}/discover"
        return self._json("POST", path, json={"phrase": phrase})

    def adopt(self, project_id: str, character_id: str, profile: dict) -> dict:
        path = f"/api/projects/{project_id}/characters/{character_id}/adopt"
        return self._json("POST", path, json=profile)

    def generate_journals(
        self, project_id: str, author_ids: Sequence[str], theme: str
    ) -> dict:
        path = f"/api/projects/{project_id}/journals/generate"
        body = {"author_ids": list(author_ids), "theme": theme}
        return self._json("POST", path, json=body)

    def create_comment(
        self,
        project_id: str,
        journal_id: str,
        commenter_id: str,
        thread_id: str | None,
    ) -> dict:
        path = f"/api/projects/{project_id}/journals/{journal_id}/comments"
        body = {"commenter_id": commenter_id, "mode": "generate", "thread_id": thread_id}
        return self._json("POST", path, json=body)

    def journals_by_author(self, project_id: str, character_id: str) -> list[dict]:
        path = f"/api/projects/{project_id}/characters/{character_id}/journals"
        return self._json("GET", path)["journals"]

    def threads_by_journal(self, project_id: str, journal_id: str) -> list[dict]:
        path = f"/api/projects/{project_id}/journals/{journal_id}/threads"
        return self._json("GET", path)["threads"]

    def export(self, project_id: str) -> bytes:
        response = self._client.get(f"/api/projects/{project_id}/export")
        if response.status_code >= 400:
            raise _remote_error(response)
        return response.content


Client = EmbeddedClient | HttpClient


# --- seeding ------------------------------------------------------------------

def _project_by_name(client: Client, name: str) -> dict | None:
    for row in client.list_projects():
        if row["name"] == name:
            return row
    return None


def _portrait_ref(
    client: Client, declared: ManifestCharacter, manifest_dir: Path
) -> str | None:
    if not declared.portrait:
        return None
    path = Path(declared.portrait)
    if not path.is_absolute():
        path = manifest_dir / path
    try:
        payload = path.read_bytes()
    except OSError as exc:
        raise errors.ManifestInvalid(
            f"characters[{declared.name}].portrait: cannot read {path}: {exc}"
        ) from exc
    return client.upload_image(payload)["ref"]


def seed_project(client: Client, manifest: Manifest, manifest_dir: Path) -> dict:
    """Upsert the manifest's characters and relationships; returns a summary
    with the project id and one line per write that happened."""
    meta = _project_by_name(client, manifest.name)
    created = meta is None
    if meta is None:
        meta = client.create_project(manifest.name)
    project_id = meta["id"]
    actions: list[str] = []

    chars = {c["name"]: c for c in client.list_characters(project_id)}
    for declared in manifest.characters:
        ref = _portrait_ref(client, declared, manifest_dir)
        doc = chars.get(declared.name)
        if doc is None:
            doc = client.create_character(
                project_id, declared.name, list(declared.attributes), ref
            )
            actions.append(f"created character {declared.name}")
        else:
            for key, value in declared.attributes:
                matches = [a for a in doc["attributes"] if a["key"] == key]
                if not matches:
                    doc = client.add_attribute(project_id, doc["id"], key, value)
                    actions.append(f"added attribute {key!r} to {declared.name}")
                elif all(a["value"] != value for a in matches):
                    doc = client.edit_attribute(
                        project_id, doc["id"], matches[0]["id"], value=value
                    )
                    actions.append(f"updated attribute {key!r} of {declared.name}")
            if ref is not None and doc.get("portrait") != ref:
                doc = client.update_character(project_id, doc["id"], portrait=ref)
                actions.append(f"updated portrait of {declared.name}")
        chars[declared.name] = doc

    for declared in manifest.relationships:
        owner = chars[declared.owner]
        target = chars[declared.target]
        wanted_keys = set(declared.knowledge)
        grants = [a["id"] for a in target["attributes"] if a["key"] in wanted_keys]
        label = f"{declared.owner} -> {declared.target}"
        existing = client.list_relationships(
            project_id, owner=owner["id"], target=target["id"]
        )
        if not existing:
            rel = client.follow(
                project_id, owner["id"], target["id"], declared.description
            )
            actions.append(f"followed {label}")
            if grants:
                client.set_knowledge(project_id, rel["id"], grants)
                actions.append(f"granted knowledge on {label}")
        else:
            rel = existing[0]
            if rel["description"] != declared.description:
                client.set_description(project_id, rel["id"], declared.description)
                actions.append(f"updated description on {label}")
            if set(rel["knowledge"]) != set(grants):
                client.set_knowledge(project_id, rel["id"], grants)
                actions.append(f"granted knowledge on {label}")

    return {"project": project_id, "created": created, "actions": actions}


# --- jobs ---------------------------------------------------------------------

def _run_discovery(client: Client, project_id: str, job: DiscoveryJob, resolve) -> dict:
    seed_char = resolve(job.seed)
    res = client.discover(project_id, seed_char["id"], job.phrase)
    names = [p["name"] for p in res["profiles"]]
    adopted = []
    for wanted in job.adopt:
        profile = next((p for p in res["profiles"] if p["name"] == wanted), None)
        if profile is None:
            raise errors.InvalidSelection(
                f"discovery produced no profile named {wanted!r}; got {names}"
            )
        out = client.adopt(project_id, seed_char["id"], profile)
        adopted.append({"name": wanted, "character": out["character"]["id"]})
    return {
        "seed": job.seed,
        "phrase": job.phrase,
        "profiles": names,
        "record_ids": res["record_ids"],
        "adopted": adopted,
    }


def _run_journal(
    client: Client, project_id: str, job: JournalJob, resolve
) -> tuple[str, dict]:
    author_ids = [resolve(name)["id"] for name in job.authors]
    res = client.generate_journals(project_id, author_ids, job.theme)
    slots = []
    ok = True
    for name, slot in zip(job.authors, res["slots"]):
        row = {
            "author": name,
            "character": slot["author"],
            "record_id": slot.get("record_id"),
            "status": slot["status"],
        }
        if slot["status"] == "ok":
            row["journal"] = slot["entry"]["id"]
        else:
            ok = False
            row["error"] = slot.get("error")
        slots.append(row)
    return ("ok" if ok else "failed"), {"theme": job.theme, "slots": slots}


def _run_comment(client: Client, project_id: str, job: CommentJob, resolve) -> dict:
    author = resolve(job.journal_author)
    journals = client.journals_by_author(project_id, author["id"])
    if not journals:
        raise errors.UnknownJournal(
            f"{job.journal_author!r} has no journal entries to comment on"
        )
    journal_id = journals[0]["id"]
    thread_id = None
    if job.thread == "latest":
        threads = client.threads_by_journal(project_id, journal_id)
        if not threads:
            raise errors.UnknownThread(
                f"journal {journal_id} has no thread to extend"
            )
        thread_id = threads[-1]["id"]
    commenter = resolve(job.commenter)
    res = client.create_comment(project_id, journal_id, commenter["id"], thread_id)
    return {
        "journal_author": job.journal_author,
        "commenter": job.commenter,
        "journal": journal_id,
        "thread": res["thread"]["id"],
        "comment": res["comment"]["id"],
        "record_id": res.get("record_id"),
    }


def run_manifest_jobs(
    client: Client,
    manifest: Manifest,
    *,
    clock: Callable[[], str],
    timer: Callable[[], float],
) -> dict:
    """Run the manifest's jobs in order against a seeded project and return
    the report document. A failed job is recorded and the run continues."""
    meta = _project_by_name(client, manifest.name)
    if meta is None:
        raise errors.UnknownProject(
            f"no project named {manifest.name!r}; run castctl seed first"
        )
    project_id = meta["id"]

    chars = {c["name"]: c for c in client.list_characters(project_id)}

    def resolve(name: str) -> dict:
        # adopted characters appear mid-run, so refresh on a miss
        if name not in chars:
            chars.clear()
            chars.update({c["name"]: c for c in client.list_characters(project_id)})
        if name not in chars:
            raise errors.UnknownCharacter(f"no character named {name!r}")
        return chars[name]

    rows = []
    for index, job in enumerate(manifest.jobs):
        started = timer()
        row: dict = {"index": index, "kind": job.kind}
        try:
            if isinstance(job, DiscoveryJob):
                status, detail = "ok", _run_discovery(client, project_id, job, resolve)
            elif isinstance(job, JournalJob):
                status, detail = _run_journal(client, project_id, job, resolve)
            else:
                status, detail = "ok", _run_comment(client, project_id, job, resolve)
            row["status"] = status
            row["detail"] = detail
        except errors.DomainError as exc:
            row["status"] = "failed"
            row["error"] = {"code": exc.code, "message": exc.message}
        row["latency"] = round(timer() - started, 6)
        rows.append(row)

    return {
        "project": project_id,
        "name": manifest.name,
        "generated_at": clock(),
        "ok": all(r["status"] == "ok" for r in rows),
        "jobs": rows,
    }


def write_report(report: dict, path: Path) -> None:
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(
        json.dumps(report, ensure_ascii=False, indent=2, sort_keys=True) + "\n",
        encoding="utf-8",
    )


# --- commands -----------------------------------------------------------------

def _make_client(
    args,
    *,
    env: Mapping[str, str],
    clock: Callable[[], str],
    timer: Callable[[], float],
    language_tag: str | None = None,
) -> Client:
    """language_tag says the command will generate; embedded mode then needs
    an orchestrator (built from --mock-provider or provider env vars)."""
    if getattr(args, "server", None):
        if getattr(args, "mock_provider", None):
            raise _UsageError(
                "--mock-provider only applies to --embedded; the server owns "
                "its own provider"
            )
        token = getattr(args, "token", None) or env.get("STARCAST_API_TOKEN") or None
        return HttpClient(args.server, token=token)

    base = config_from_env(env)
    data_dir = DataDir(Path(args.embedded), clock=clock)
    orchestrator = None
    if language_tag is not None:
        if getattr(args, "mock_provider", None):
            provider = FixtureProvider(Path(args.mock_provider))
        else:
            provider = base.build_provider()
        orchestrator = Orchestrator(
            provider,
            output_language(language_tag),
            max_in_flight=base.max_in_flight,
            clock=clock,
            timer=timer,
        )
    return EmbeddedClient(data_dir, orchestrator)


def cmd_seed(args, *, env, clock, timer) -> int:
    manifest = load_manifest(args.manifest)
    client = _make_client(args, env=env, clock=clock, timer=timer)
    summary = seed_project(client, manifest, Path(args.manifest).resolve().parent)
    verb = "created" if summary["created"] else "updated"
    print(f"{verb} project {summary['project']} ({manifest.name})")
    for line in summary["actions"]:
        print(f"  {line}")
    if not summary["actions"] and not summary["created"]:
        print("  nothing to do")
    return 0


def cmd_run_jobs(args, *, env, clock, timer) -> int:
    manifest = load_manifest(args.manifest)
    client = _make_client(
        args, env=env, clock=clock, timer=timer, language_tag=manifest.output_language
    )
    report = run_manifest_jobs(client, manifest, clock=clock, timer=timer)
    for row in report["jobs"]:
        line = f"[{row['index']}] {row['kind']}: {row['status']}"
        if row["status"] == "failed" and "error" in row:
            line += f" ({row['error']['code']}: {row['error']['message']})"
        print(line)
    if args.report:
        write_report(report, Path(args.report))
        print(f"report written to {args.report}")
    return 0 if report["ok"] else 1


def cmd_export(args, *, env, clock, timer) -> int:
    client = _make_client(args, env=env, clock=clock, timer=timer)
    payload = client.export(args.project_id)
    out = Path(args.out)
    if out.parent != Path():
        out.parent.mkdir(parents=True, exist_ok=True)
    out.write_bytes(payload)
    print(f"exported {args.project_id} to {out} ({len(payload)} bytes)")
    return 0


def _parse_bind(bind: str) -> tuple[str, int]:
    host, sep, port = bind.rpartition(":")
    if not sep or not host or not port.isdigit():
        raise _UsageError(f"--bind must look like HOST:PORT, got {bind!r}")
    return host, int(port)


def cmd_serve(args, *, env, clock, timer) -> int:
    import uvicorn

    from .api import create_app

    config = config_from_env(env)
    updates: dict = {}
    if args.data_dir:
        updates["data_dir"] = Path(args.data_dir)
    if args.bind:
        updates["bind"] = args.bind
    if args.mock_provider:
        updates["mock_fixtures"] = Path(args.mock_provider)
    if updates:
        config = dataclasses.replace(config, **updates)
    host, port = _parse_bind(config.bind)
    app = create_app(config, clock=clock, timer=timer)
    uvicorn.run(app, host=host, port=port, log_level="info")
    return 0


def _add_backend_flags(parser: argparse.ArgumentParser, with_mock: bool) -> None:
    group = parser.add_mutually_exclusive_group(required=True)
    group.add_argument(
        "--embedded",
        metavar="DATA_DIR",
        help="work directly against a data directory, no server needed",
    )
    group.add_argument(
        "--server", metavar="URL", help="drive a running service over HTTP"
    )
    parser.add_argument(
        "--token",
        help="bearer token for --server (defaults to STARCAST_API_TOKEN)",
    )
    if with_mock:
        parser.add_argument(
            "--mock-provider",
            metavar="FIXTURES_DIR",
            help="answer completions from recorded fixtures (--embedded only)",
        )


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="castctl",
        description="Seed character casts from manifests, run generation jobs, "
        "export project archives, and serve the HTTP API.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    seed = sub.add_parser("seed", help="create or update a project from a manifest")
    seed.add_argument("--manifest", required=True, metavar="PATH")
    _add_backend_flags(seed, with_mock=False)
    seed.set_defaults(func=cmd_seed)

    run = sub.add_parser("run-jobs", help="run the manifest's generation jobs")
    run.add_argument("--manifest", required=True, metavar="PATH")
    run.add_argument("--report", metavar="PATH", help="write the job report as JSON")
    _add_backend_flags(run, with_mock=True)
    run.set_defaults(func=cmd_run_jobs)

    export = sub.add_parser("export", help="write a project archive to disk")
    export.add_argument("project_id")
    export.add_argument("--out", required=True, metavar="PATH")
    _add_backend_flags(export, with_mock=False)
    export.set_defaults(func=cmd_export)

    serve = sub.add_parser("serve", help="run the HTTP service")
    serve.add_argument("--bind", metavar="HOST:PORT")
    serve.add_argument("--data-dir", metavar="PATH")
    serve.add_argument(
        "--mock-provider",
        metavar="FIXTURES_DIR",
        help="answer completions from recorded fixtures",
    )
    serve.set_defaults(func=cmd_serve)

    return parser


def main(
    argv: Sequence[str] | None = None,
    *,
    env: Mapping[str, str] | None = None,
    clock: Callable[[], str] | None = None,
    timer: Callable[[], float] | None = None,
) -> int:
    env = dict(os.environ) if env is None else dict(env)
    clock = clock or utcnow
    timer = timer or time.perf_counter
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        return args.func(args, env=env, clock=clock, timer=timer)
    except _UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except errors.DomainError as exc:
        print(f"error: {exc.code}: {exc.message}", file=sys.stderr)
        return 2
    except httpx.HTTPError as exc:
        print(f"error: transport failure: {exc}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    raise SystemExit(main())
